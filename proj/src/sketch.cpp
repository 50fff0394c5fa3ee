#include "homsynth/sketch.hpp"

#include <functional>
#include <set>

#include "homsynth/errors.hpp"

namespace homsynth {

namespace {

Type type_in(const RecurrenceSystem& sys, const Expr& e) {
    return infer_type(e, [&](const std::string& n) -> Type {
        if (sys.is_state(n)) return sys.state_type(n);
        return Type::Int;  // iterator and scalar inputs
    });
}

struct HoleBuilder {
    std::vector<SketchHole> holes;

    Expr make(HoleKind kind, Type type) {
        int id = static_cast<int>(holes.size());
        holes.push_back({id, kind, type});
        return hole(kind, id, type);
    }
};

bool state_free(const RecurrenceSystem& sys, const Expr& e) {
    std::set<std::string> states(sys.state_vars.begin(), sys.state_vars.end());
    return !mentions_any(e, states);
}

Expr compile_rhs(const RecurrenceSystem& sys, const Expr& e, HoleBuilder& hb) {
    if (state_free(sys, e)) return hb.make(HoleKind::Right, type_in(sys, e));
    if (e->kind == ExprKind::Var) return hb.make(HoleKind::Left, type_in(sys, e));
    std::vector<Expr> kids;
    kids.reserve(e->children.size());
    for (const auto& c : e->children) kids.push_back(compile_rhs(sys, c, hb));
    switch (e->kind) {
        case ExprKind::Neg: return neg(kids[0]);
        case ExprKind::Not: return lnot(kids[0]);
        case ExprKind::Binary: return binary(e->op, kids[0], kids[1]);
        case ExprKind::Cond: return cond(kids[0], kids[1], kids[2]);
        default:
            throw Error("sketch compilation hit an unexpected node");
    }
}

} // namespace

Sketch make_sketch(const RecurrenceSystem& sys) {
    Sketch sk;
    for (const auto& [v, rhs] : sys.equations) {
        SketchEquation eq;
        eq.var = v;
        HoleBuilder hb;
        eq.rhs = compile_rhs(sys, rhs, hb);
        eq.holes = std::move(hb.holes);
        sk.equations.push_back(std::move(eq));
    }
    return sk;
}

SketchEquation relaxed_equation(const RecurrenceSystem& sys, const std::string& var) {
    SketchEquation eq;
    eq.var = var;
    HoleBuilder hb;
    eq.rhs = hb.make(HoleKind::Left, sys.state_type(var));
    eq.holes = std::move(hb.holes);
    return eq;
}

SketchEquation hint_equation(const RecurrenceSystem& sys, const std::string& var,
                             const NormalForm& nf) {
    SketchEquation eq;
    eq.var = var;
    HoleBuilder hb;
    std::function<Expr(const Expr&)> go = [&](const Expr& e) -> Expr {
        if (e->kind == ExprKind::Hole) {
            // a carved piece: left hole typed by the piece
            const auto& item = nf.items[static_cast<std::size_t>(e->hole_id)];
            Type t = infer_type(item.piece, [](const std::string&) { return Type::Int; });
            return hb.make(HoleKind::Left, t);
        }
        bool pure_input = true;
        std::function<void(const Expr&)> scan = [&](const Expr& x) {
            if (x->kind == ExprKind::Hole) pure_input = false;
            for (const auto& c : x->children) scan(c);
        };
        scan(e);
        if (pure_input) {
            Type t = infer_type(e, [](const std::string&) { return Type::Int; });
            return hb.make(HoleKind::Right, t);
        }
        std::vector<Expr> kids;
        kids.reserve(e->children.size());
        for (const auto& c : e->children) kids.push_back(go(c));
        switch (e->kind) {
            case ExprKind::Neg: return neg(kids[0]);
            case ExprKind::Not: return lnot(kids[0]);
            case ExprKind::Binary: return binary(e->op, kids[0], kids[1]);
            case ExprKind::Cond: return cond(kids[0], kids[1], kids[2]);
            default: throw Error("hint sketch hit an unexpected node");
        }
    };
    eq.rhs = go(nf.skeleton);
    eq.holes = std::move(hb.holes);
    return eq;
}

} // namespace homsynth
