#include "homsynth/proof.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "homsynth/errors.hpp"

namespace homsynth {

namespace {

std::string func_name(const std::string& v) {
    std::string n = v;
    if (!n.empty()) n[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(n[0])));
    return n;
}

// state variables read by a join equation, suffix-stripped, in system order
std::vector<std::string> join_reads(const JoinOperator& join, const Expr& rhs) {
    std::set<std::string> bases;
    for (const auto& name : free_vars(rhs)) {
        if (name.size() > 2 && (name.compare(name.size() - 2, 2, "_l") == 0 ||
                                name.compare(name.size() - 2, 2, "_r") == 0))
            bases.insert(name.substr(0, name.size() - 2));
    }
    std::vector<std::string> ordered;
    for (const auto& [v, _] : join.equations)
        if (bases.count(v)) ordered.push_back(v);
    return ordered;
}

struct Uses {
    bool max_fn = false;
    bool min_fn = false;
    bool max_int = false;
    bool min_int = false;
};

void scan_uses(const Expr& e, Uses& u) {
    if (e->kind == ExprKind::Binary && e->op == BinOp::Max) u.max_fn = true;
    if (e->kind == ExprKind::Binary && e->op == BinOp::Min) u.min_fn = true;
    if (e->kind == ExprKind::MaxIntConst) u.max_int = true;
    if (e->kind == ExprKind::MinIntConst) u.min_int = true;
    for (const auto& c : e->children) scan_uses(c, u);
}

void check_supported(const Expr& e) {
    if (e->kind == ExprKind::Binary && e->op == BinOp::Div)
        throw UnsupportedForProof("integer division truncates toward zero; no matching "
                                  "sequence-function rendering");
    for (const auto& c : e->children) check_supported(c);
}

// Renders a recurrence right-hand side as the recursive step of a sequence
// function: state vars become F(s[..|s|-1]), the current element s[|s|-1],
// the iterator |s|-1.
class DafnyWriter {
public:
    DafnyWriter(const RecurrenceSystem& sys) : sys_(sys) {}

    std::string body(const Expr& e) { return render(e, Mode::Body, 0); }
    std::string init(const Expr& e) { return render(e, Mode::Init, 0); }
    std::string join_rhs(const Expr& e) { return render(e, Mode::Join, 0); }

private:
    enum class Mode { Body, Init, Join };

    std::string render(const Expr& e, Mode m, int prec) {
        switch (e->kind) {
            case ExprKind::IntConst: return std::to_string(e->int_value);
            case ExprKind::BoolConst: return e->bool_value ? "true" : "false";
            case ExprKind::MaxIntConst: return "MAX_INT";
            case ExprKind::MinIntConst: return "MIN_INT";
            case ExprKind::Var:
                if (m == Mode::Body) {
                    if (e->name == sys_.iterator) return "(|s| - 1)";
                    return func_name(e->name) + "(s[..|s|-1])";
                }
                return e->name;  // join parameters keep their _l/_r names
            case ExprKind::SeqAccess:
                return "s[|s|-1]";
            case ExprKind::SeqLength:
                return "|s|";
            case ExprKind::Neg:
                return "-" + render(e->child(0), m, 99);
            case ExprKind::Not:
                return "!" + render(e->child(0), m, 99);
            case ExprKind::Binary: {
                if (e->op == BinOp::Min || e->op == BinOp::Max) {
                    std::string fn = e->op == BinOp::Min ? "Min" : "Max";
                    return fn + "(" + render(e->child(0), m, 0) + ", " +
                           render(e->child(1), m, 0) + ")";
                }
                int p = op_prec(e->op);
                std::string s = render(e->child(0), m, p) + " " + op_name(e->op) + " " +
                                render(e->child(1), m, p + 1);
                if (p < prec) return "(" + s + ")";
                return s;
            }
            case ExprKind::Cond: {
                std::string s = "if " + render(e->child(0), m, 0) + " then " +
                                render(e->child(1), m, 0) + " else " + render(e->child(2), m, 0);
                return "(" + s + ")";
            }
            default:
                throw UnsupportedForProof("unexpected node in proof rendering");
        }
    }

    static int op_prec(BinOp op) {
        switch (op) {
            case BinOp::Or: return 2;
            case BinOp::And: return 3;
            case BinOp::Lt: case BinOp::Le: case BinOp::Gt:
            case BinOp::Ge: case BinOp::Eq: case BinOp::Ne: return 4;
            case BinOp::Add: case BinOp::Sub: return 5;
            case BinOp::Mul: case BinOp::Div: return 6;
            default: return 100;
        }
    }

    const RecurrenceSystem& sys_;
};

} // namespace

namespace {

// Kahn's algorithm, stable in equation order. Leftover variables sit on a
// dependency cycle.
std::pair<std::vector<std::string>, std::vector<std::string>> topo_order(
    const JoinOperator& join) {
    std::vector<std::string> vars;
    std::map<std::string, std::vector<std::string>> deps;
    for (const auto& [v, rhs] : join.equations) {
        vars.push_back(v);
        for (const auto& u : join_reads(join, rhs))
            if (u != v) deps[v].push_back(u);
    }
    std::vector<std::string> order;
    std::set<std::string> done;
    bool progress = true;
    while (progress && order.size() < vars.size()) {
        progress = false;
        for (const auto& v : vars) {
            if (done.count(v)) continue;
            bool ready = true;
            for (const auto& u : deps[v])
                if (!done.count(u)) ready = false;
            if (ready) {
                order.push_back(v);
                done.insert(v);
                progress = true;
            }
        }
    }
    std::vector<std::string> leftover;
    for (const auto& v : vars)
        if (!done.count(v)) leftover.push_back(v);
    return {order, leftover};
}

} // namespace

std::vector<std::string> proof_dependency_order(const JoinOperator& join) {
    auto [order, leftover] = topo_order(join);
    if (!leftover.empty()) {
        std::string cyc;
        for (const auto& v : leftover) cyc += (cyc.empty() ? "" : ", ") + v;
        throw CyclicDependency(cyc);
    }
    return order;
}

ProofResult emit_proof(const RecurrenceSystem& sys, const JoinOperator& join) {
    ProofResult result;

    auto [order, cyclic] = topo_order(join);
    for (const auto& v : cyclic)
        result.skipped.push_back(v + ": on a join dependency cycle, lemma not emitted");

    DafnyWriter w(sys);
    Uses uses;
    for (const auto& [v, rhs] : sys.equations) {
        scan_uses(rhs, uses);
        scan_uses(sys.init.at(v), uses);
    }
    for (const auto& [_, rhs] : join.equations) scan_uses(rhs, uses);

    std::ostringstream os;
    if (uses.max_int)
        os << "const MAX_INT: int := 4611686018427387904\n";
    if (uses.min_int)
        os << "const MIN_INT: int := -4611686018427387904\n";
    if (uses.max_int || uses.min_int) os << "\n";
    if (uses.max_fn) {
        os << "function Max(x: int, y: int): int\n{ if x > y then x else y }\n\n";
    }
    if (uses.min_fn) {
        os << "function Min(x: int, y: int): int\n{ if x < y then x else y }\n\n";
    }

    auto type_name = [&](const std::string& v) {
        return sys.state_type(v) == Type::Bool ? "bool" : "int";
    };
    auto join_rhs_of = [&](const std::string& v) -> const Expr& {
        for (const auto& [u, rhs] : join.equations)
            if (u == v) return rhs;
        throw Error("no join equation for " + v);
    };

    for (const auto& v : order) {
        try {
            check_supported(sys.rhs(v));
            check_supported(join_rhs_of(v));
        } catch (const UnsupportedForProof& e) {
            result.skipped.push_back(v + ": " + e.what());
            continue;
        }
        std::string F = func_name(v);
        // the sequence function
        os << "function " << F << "(s: seq<int>): " << type_name(v) << "\n";
        os << "{\n  if s == [] then " << w.init(sys.init.at(v)) << " else\n    "
           << w.body(sys.rhs(v)) << "\n}\n\n";

        // the join function
        auto reads = join_reads(join, join_rhs_of(v));
        os << "function " << F << "Join(";
        bool first = true;
        for (const auto& u : reads) {
            os << (first ? "" : ", ") << u << "_l: " << type_name(u);
            first = false;
        }
        for (const auto& u : reads) {
            os << (first ? "" : ", ") << u << "_r: " << type_name(u);
            first = false;
        }
        os << "): " << type_name(v) << "\n{ " << w.join_rhs(join_rhs_of(v)) << " }\n\n";

        // the homomorphism lemma
        os << "lemma Homomorphism" << F << "(s: seq<int>, t: seq<int>)\n";
        os << "  ensures " << F << "(s + t) == " << F << "Join(";
        first = true;
        for (const auto& u : reads) {
            os << (first ? "" : ", ") << func_name(u) << "(s)";
            first = false;
        }
        for (const auto& u : reads) {
            os << (first ? "" : ", ") << func_name(u) << "(t)";
            first = false;
        }
        os << ")\n{\n";
        os << "  if t == [] { assert(s + [] == s); }\n";
        os << "  else {\n";
        os << "    calc {\n";
        os << "      " << F << "(s + t);\n";
        os << "      == {";
        for (const auto& u : reads) {
            if (u == v) continue;
            os << " Homomorphism" << func_name(u) << "(s, t[..|t|-1]);";
        }
        os << " assert (s + t[..|t|-1]) + [t[|t|-1]] == s + t; }\n";
        os << "      " << F << "Join(";
        first = true;
        for (const auto& u : reads) {
            os << (first ? "" : ", ") << func_name(u) << "(s)";
            first = false;
        }
        for (const auto& u : reads) {
            os << (first ? "" : ", ") << func_name(u) << "(t)";
            first = false;
        }
        os << ");\n";
        os << "    }\n";
        os << "  }\n";
        os << "}\n\n";
    }
    result.text = os.str();
    return result;
}

} // namespace homsynth
