#include "homsynth/expr.hpp"

#include <sstream>

#include "homsynth/errors.hpp"

namespace homsynth {

namespace {

std::size_t combine_hash(std::size_t a, std::size_t b) {
    return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

Expr finish(std::shared_ptr<ExprNode> n) {
    std::size_t h = static_cast<std::size_t>(n->kind) * 1000003ULL;
    h = combine_hash(h, static_cast<std::size_t>(n->op));
    h = combine_hash(h, std::hash<std::int64_t>{}(n->int_value));
    h = combine_hash(h, n->bool_value ? 7u : 3u);
    h = combine_hash(h, std::hash<std::string>{}(n->name));
    h = combine_hash(h, static_cast<std::size_t>(n->hole_kind));
    h = combine_hash(h, std::hash<int>{}(n->hole_id));
    int sz = 1;
    for (const auto& c : n->children) {
        h = combine_hash(h, c->hash);
        sz += c->size;
    }
    n->hash = h;
    n->size = sz;
    return n;
}

} // namespace

Expr int_const(std::int64_t v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::IntConst;
    n->int_value = v;
    return finish(n);
}

Expr bool_const(bool v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::BoolConst;
    n->bool_value = v;
    return finish(n);
}

Expr max_int() {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::MaxIntConst;
    return finish(n);
}

Expr min_int() {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::MinIntConst;
    return finish(n);
}

Expr var(const std::string& name) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Var;
    n->name = name;
    return finish(n);
}

Expr seq_access(const std::string& seq, Expr index) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::SeqAccess;
    n->name = seq;
    n->children = {std::move(index)};
    return finish(n);
}

Expr seq_length(const std::string& seq) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::SeqLength;
    n->name = seq;
    return finish(n);
}

Expr neg(Expr e) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Neg;
    n->children = {std::move(e)};
    return finish(n);
}

Expr lnot(Expr e) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Not;
    n->children = {std::move(e)};
    return finish(n);
}

Expr binary(BinOp op, Expr a, Expr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Binary;
    n->op = op;
    n->children = {std::move(a), std::move(b)};
    return finish(n);
}

Expr cond(Expr c, Expr t, Expr f) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Cond;
    n->children = {std::move(c), std::move(t), std::move(f)};
    return finish(n);
}

Expr hole(HoleKind kind, int id, Type type) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Hole;
    n->hole_kind = kind;
    n->hole_id = id;
    n->int_value = type == Type::Bool ? 1 : 0;
    return finish(n);
}

Type hole_type(const Expr& h) {
    return h->int_value == 1 ? Type::Bool : Type::Int;
}

bool struct_equal(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return true;
    if (a->hash != b->hash) return false;
    if (a->kind != b->kind || a->op != b->op || a->int_value != b->int_value ||
        a->bool_value != b->bool_value || a->name != b->name ||
        a->hole_kind != b->hole_kind || a->hole_id != b->hole_id ||
        a->children.size() != b->children.size())
        return false;
    for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!struct_equal(a->children[i], b->children[i])) return false;
    return true;
}

bool is_const(const Expr& e) {
    switch (e->kind) {
        case ExprKind::IntConst:
        case ExprKind::BoolConst:
        case ExprKind::MaxIntConst:
        case ExprKind::MinIntConst:
            return true;
        default:
            return false;
    }
}

bool is_comparison(BinOp op) {
    switch (op) {
        case BinOp::Lt: case BinOp::Le: case BinOp::Gt:
        case BinOp::Ge: case BinOp::Eq: case BinOp::Ne:
            return true;
        default:
            return false;
    }
}

bool is_arith(BinOp op) {
    switch (op) {
        case BinOp::Add: case BinOp::Sub: case BinOp::Mul:
        case BinOp::Div: case BinOp::Min: case BinOp::Max:
            return true;
        default:
            return false;
    }
}

bool is_ac(BinOp op) {
    switch (op) {
        case BinOp::Add: case BinOp::Mul: case BinOp::Min:
        case BinOp::Max: case BinOp::And: case BinOp::Or:
            return true;
        default:
            return false;
    }
}

bool op_has_identity(BinOp op) {
    switch (op) {
        case BinOp::Add: case BinOp::Mul: case BinOp::Min:
        case BinOp::Max: case BinOp::And: case BinOp::Or:
            return true;
        default:
            return false;
    }
}

Expr op_identity(BinOp op) {
    switch (op) {
        case BinOp::Add: return int_const(0);
        case BinOp::Mul: return int_const(1);
        case BinOp::Min: return max_int();
        case BinOp::Max: return min_int();
        case BinOp::And: return bool_const(true);
        case BinOp::Or: return bool_const(false);
        default: throw Error("operator has no identity");
    }
}

const char* op_name(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Mul: return "*";
        case BinOp::Div: return "/";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Gt: return ">";
        case BinOp::Ge: return ">=";
        case BinOp::Eq: return "==";
        case BinOp::Ne: return "!=";
        case BinOp::And: return "&&";
        case BinOp::Or: return "||";
        case BinOp::Min: return "min";
        case BinOp::Max: return "max";
    }
    return "?";
}

namespace {
void collect_vars(const Expr& e, std::vector<std::string>& out, std::set<std::string>& seen) {
    if (e->kind == ExprKind::Var && !seen.count(e->name)) {
        seen.insert(e->name);
        out.push_back(e->name);
    }
    for (const auto& c : e->children) collect_vars(c, out, seen);
}
} // namespace

std::vector<std::string> free_vars(const Expr& e) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    collect_vars(e, out, seen);
    return out;
}

bool mentions_var(const Expr& e, const std::string& name) {
    if (e->kind == ExprKind::Var) return e->name == name;
    for (const auto& c : e->children)
        if (mentions_var(c, name)) return true;
    return false;
}

bool mentions_any(const Expr& e, const std::set<std::string>& names) {
    if (e->kind == ExprKind::Var) return names.count(e->name) != 0;
    for (const auto& c : e->children)
        if (mentions_any(c, names)) return true;
    return false;
}

bool mentions_seq(const Expr& e) {
    if (e->kind == ExprKind::SeqAccess || e->kind == ExprKind::SeqLength) return true;
    for (const auto& c : e->children)
        if (mentions_seq(c)) return true;
    return false;
}

int count_var(const Expr& e, const std::string& name) {
    if (e->kind == ExprKind::Var) return e->name == name ? 1 : 0;
    int n = 0;
    for (const auto& c : e->children) n += count_var(c, name);
    return n;
}

Expr substitute(const Expr& e, const std::function<Expr(const std::string&)>& lookup) {
    switch (e->kind) {
        case ExprKind::Var: {
            Expr r = lookup(e->name);
            return r ? r : e;
        }
        case ExprKind::SeqAccess:
            return seq_access(e->name, substitute(e->child(0), lookup));
        case ExprKind::Neg:
            return neg(substitute(e->child(0), lookup));
        case ExprKind::Not:
            return lnot(substitute(e->child(0), lookup));
        case ExprKind::Binary:
            return binary(e->op, substitute(e->child(0), lookup), substitute(e->child(1), lookup));
        case ExprKind::Cond:
            return cond(substitute(e->child(0), lookup), substitute(e->child(1), lookup),
                        substitute(e->child(2), lookup));
        default:
            return e;
    }
}

Expr substitute_var(const Expr& e, const std::string& name, const Expr& replacement) {
    return substitute(e, [&](const std::string& n) -> Expr {
        return n == name ? replacement : nullptr;
    });
}

Type infer_type(const Expr& e, const std::function<Type(const std::string&)>& var_type) {
    switch (e->kind) {
        case ExprKind::IntConst:
        case ExprKind::MaxIntConst:
        case ExprKind::MinIntConst:
        case ExprKind::SeqLength:
            return Type::Int;
        case ExprKind::SeqAccess: {
            if (infer_type(e->child(0), var_type) != Type::Int)
                throw TypeError("sequence index must be an integer");
            return Type::Int;
        }
        case ExprKind::BoolConst:
            return Type::Bool;
        case ExprKind::Var:
            return var_type(e->name);
        case ExprKind::Hole:
            return hole_type(e);
        case ExprKind::Neg:
            if (infer_type(e->child(0), var_type) != Type::Int)
                throw TypeError("unary minus needs an integer");
            return Type::Int;
        case ExprKind::Not:
            if (infer_type(e->child(0), var_type) != Type::Bool)
                throw TypeError("negation needs a boolean");
            return Type::Bool;
        case ExprKind::Binary: {
            Type a = infer_type(e->child(0), var_type);
            Type b = infer_type(e->child(1), var_type);
            switch (e->op) {
                case BinOp::Add: case BinOp::Sub: case BinOp::Mul:
                case BinOp::Div: case BinOp::Min: case BinOp::Max:
                    if (a != Type::Int || b != Type::Int)
                        throw TypeError(std::string(op_name(e->op)) + " needs integers");
                    return Type::Int;
                case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
                    if (a != Type::Int || b != Type::Int)
                        throw TypeError(std::string(op_name(e->op)) + " needs integers");
                    return Type::Bool;
                case BinOp::Eq: case BinOp::Ne:
                    if (a != b) throw TypeError("comparison of mixed types");
                    return Type::Bool;
                case BinOp::And: case BinOp::Or:
                    if (a != Type::Bool || b != Type::Bool)
                        throw TypeError(std::string(op_name(e->op)) + " needs booleans");
                    return Type::Bool;
            }
            throw TypeError("unknown operator");
        }
        case ExprKind::Cond: {
            if (infer_type(e->child(0), var_type) != Type::Bool)
                throw TypeError("condition must be boolean");
            Type t = infer_type(e->child(1), var_type);
            Type f = infer_type(e->child(2), var_type);
            if (t != f) throw TypeError("conditional branches of mixed types");
            return t;
        }
    }
    throw TypeError("unknown expression kind");
}

Type infer_type_default_int(const Expr& e) {
    return infer_type(e, [](const std::string&) { return Type::Int; });
}

int compare(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    if (a->op != b->op) return a->op < b->op ? -1 : 1;
    if (a->int_value != b->int_value) return a->int_value < b->int_value ? -1 : 1;
    if (a->bool_value != b->bool_value) return a->bool_value < b->bool_value ? -1 : 1;
    if (a->name != b->name) return a->name < b->name ? -1 : 1;
    if (a->hole_id != b->hole_id) return a->hole_id < b->hole_id ? -1 : 1;
    if (a->children.size() != b->children.size())
        return a->children.size() < b->children.size() ? -1 : 1;
    for (std::size_t i = 0; i < a->children.size(); ++i) {
        int c = compare(a->children[i], b->children[i]);
        if (c != 0) return c;
    }
    return 0;
}

namespace {

int precedence(const Expr& e) {
    if (e->kind != ExprKind::Binary) {
        if (e->kind == ExprKind::Cond) return 1;
        return 100;
    }
    switch (e->op) {
        case BinOp::Or: return 2;
        case BinOp::And: return 3;
        case BinOp::Eq: case BinOp::Ne: case BinOp::Lt:
        case BinOp::Le: case BinOp::Gt: case BinOp::Ge: return 4;
        case BinOp::Add: case BinOp::Sub: return 5;
        case BinOp::Mul: case BinOp::Div: return 6;
        case BinOp::Min: case BinOp::Max: return 100; // call syntax
    }
    return 100;
}

void print(const Expr& e, std::ostream& os, int parent_prec) {
    int prec = precedence(e);
    switch (e->kind) {
        case ExprKind::IntConst:
            if (e->int_value < 0) {
                os << "(" << e->int_value << ")";
            } else {
                os << e->int_value;
            }
            return;
        case ExprKind::BoolConst: os << (e->bool_value ? "true" : "false"); return;
        case ExprKind::MaxIntConst: os << "MAX_INT"; return;
        case ExprKind::MinIntConst: os << "MIN_INT"; return;
        case ExprKind::Var: os << e->name; return;
        case ExprKind::SeqAccess:
            os << e->name << "[";
            print(e->child(0), os, 0);
            os << "]";
            return;
        case ExprKind::SeqLength: os << "|" << e->name << "|"; return;
        case ExprKind::Neg:
            os << "-";
            print(e->child(0), os, 99);
            return;
        case ExprKind::Not:
            os << "!";
            print(e->child(0), os, 99);
            return;
        case ExprKind::Hole:
            os << (e->hole_kind == HoleKind::Left ? "??_L" : "??_R");
            return;
        case ExprKind::Binary:
            if (e->op == BinOp::Min || e->op == BinOp::Max) {
                os << op_name(e->op) << "(";
                print(e->child(0), os, 0);
                os << ", ";
                print(e->child(1), os, 0);
                os << ")";
                return;
            }
            if (prec < parent_prec) os << "(";
            print(e->child(0), os, prec);
            os << " " << op_name(e->op) << " ";
            // left-associative: right child needs one level more
            print(e->child(1), os, prec + 1);
            if (prec < parent_prec) os << ")";
            return;
        case ExprKind::Cond:
            if (prec < parent_prec) os << "(";
            print(e->child(0), os, prec + 1);
            os << " ? ";
            print(e->child(1), os, prec + 1);
            os << " : ";
            print(e->child(2), os, prec);
            if (prec < parent_prec) os << ")";
            return;
    }
}

} // namespace

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(e, os, 0);
    return os.str();
}

} // namespace homsynth
