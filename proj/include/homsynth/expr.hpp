#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace homsynth {

enum class BinOp {
    Add, Sub, Mul, Div,
    Lt, Le, Gt, Ge, Eq, Ne,
    And, Or,
    Min, Max,
};

enum class ExprKind {
    IntConst,
    BoolConst,
    MaxIntConst,
    MinIntConst,
    Var,
    SeqAccess,   // s[index]
    SeqLength,   // |s|
    Neg,
    Not,
    Binary,
    Cond,
    Hole,        // sketch hole, ??_L or ??_R
};

enum class HoleKind { Left, Right };

enum class Type { Int, Bool };

class ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

class ExprNode {
public:
    ExprKind kind;
    BinOp op = BinOp::Add;            // Binary only
    std::int64_t int_value = 0;       // IntConst
    bool bool_value = false;          // BoolConst
    std::string name;                 // Var / SeqAccess / SeqLength (sequence name)
    HoleKind hole_kind = HoleKind::Right;
    int hole_id = -1;
    std::vector<Expr> children;

    std::size_t hash = 0;             // structural, computed on construction
    int size = 1;                     // node count

    const Expr& child(std::size_t i) const { return children[i]; }
};

// Builders. All nodes are immutable and shared.
Expr int_const(std::int64_t v);
Expr bool_const(bool v);
Expr max_int();
Expr min_int();
Expr var(const std::string& name);
Expr seq_access(const std::string& seq, Expr index);
Expr seq_length(const std::string& seq);
Expr neg(Expr e);
Expr lnot(Expr e);
Expr binary(BinOp op, Expr a, Expr b);
Expr cond(Expr c, Expr t, Expr f);
Expr hole(HoleKind kind, int id, Type type);

// Hole type is stashed in int_value to keep the node small.
Type hole_type(const Expr& h);

bool struct_equal(const Expr& a, const Expr& b);
bool is_const(const Expr& e);   // IntConst/BoolConst/sentinels
bool is_comparison(BinOp op);
bool is_arith(BinOp op);        // Add/Sub/Mul/Div/Min/Max
bool is_ac(BinOp op);           // Add/Mul/Min/Max/And/Or
bool op_has_identity(BinOp op);
Expr op_identity(BinOp op);     // 0 for +, 1 for *, MAX_INT for min, ...

const char* op_name(BinOp op);  // surface spelling: "+", "<=", "min", ...

// Free variables (Var nodes), in first-occurrence order.
std::vector<std::string> free_vars(const Expr& e);
bool mentions_var(const Expr& e, const std::string& name);
bool mentions_any(const Expr& e, const std::set<std::string>& names);
bool mentions_seq(const Expr& e);
int count_var(const Expr& e, const std::string& name);

// Substitute variables by expressions (simultaneous).
Expr substitute(const Expr& e, const std::function<Expr(const std::string&)>& lookup);
Expr substitute_var(const Expr& e, const std::string& name, const Expr& replacement);

// Type inference; throws TypeError. Variables get types from `var_type`
// (returns Int when unknown).
Type infer_type(const Expr& e, const std::function<Type(const std::string&)>& var_type);
Type infer_type_default_int(const Expr& e);

// Deterministic total order for canonical forms.
int compare(const Expr& a, const Expr& b);

std::string to_string(const Expr& e);

} // namespace homsynth
