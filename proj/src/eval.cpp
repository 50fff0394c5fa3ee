#include "homsynth/eval.hpp"

#include "homsynth/errors.hpp"

namespace homsynth {

std::string to_string(const Value& v) {
    if (v.type == Type::Bool) return v.i ? "true" : "false";
    if (v.i == kMaxIntSentinel) return "MAX_INT";
    if (v.i == kMinIntSentinel) return "MIN_INT";
    return std::to_string(v.i);
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw EvalError("integer overflow in +");
    return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw EvalError("integer overflow in -");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw EvalError("integer overflow in *");
    return r;
}

std::int64_t checked_div(std::int64_t a, std::int64_t b) {
    if (b == 0) throw EvalError("division by zero");
    if (a == INT64_MIN && b == -1) throw EvalError("integer overflow in /");
    return a / b;  // truncates toward zero
}

Value eval(const Expr& e, const Env& env) {
    switch (e->kind) {
        case ExprKind::IntConst: return Value::of_int(e->int_value);
        case ExprKind::BoolConst: return Value::of_bool(e->bool_value);
        case ExprKind::MaxIntConst: return Value::of_int(kMaxIntSentinel);
        case ExprKind::MinIntConst: return Value::of_int(kMinIntSentinel);
        case ExprKind::Var: {
            auto v = env.lookup(e->name);
            if (!v) throw EvalError("unbound variable " + e->name);
            return *v;
        }
        case ExprKind::SeqAccess: {
            if (!env.seq || e->name != env.seq_name)
                throw EvalError("unbound sequence " + e->name);
            Value idx = eval(e->child(0), env);
            if (idx.type != Type::Int) throw EvalError("non-integer index");
            if (idx.i < 0 || idx.i >= static_cast<std::int64_t>(env.seq->size()))
                throw EvalError("sequence index " + std::to_string(idx.i) + " out of range");
            return Value::of_int((*env.seq)[static_cast<std::size_t>(idx.i)]);
        }
        case ExprKind::SeqLength: {
            if (!env.seq || e->name != env.seq_name)
                throw EvalError("unbound sequence " + e->name);
            return Value::of_int(static_cast<std::int64_t>(env.seq->size()));
        }
        case ExprKind::Neg: {
            Value v = eval(e->child(0), env);
            return Value::of_int(checked_sub(0, v.i));
        }
        case ExprKind::Not: {
            Value v = eval(e->child(0), env);
            return Value::of_bool(!v.as_bool());
        }
        case ExprKind::Binary: {
            if (e->op == BinOp::And) {
                Value a = eval(e->child(0), env);
                if (!a.as_bool()) return Value::of_bool(false);
                return Value::of_bool(eval(e->child(1), env).as_bool());
            }
            if (e->op == BinOp::Or) {
                Value a = eval(e->child(0), env);
                if (a.as_bool()) return Value::of_bool(true);
                return Value::of_bool(eval(e->child(1), env).as_bool());
            }
            Value a = eval(e->child(0), env);
            Value b = eval(e->child(1), env);
            switch (e->op) {
                case BinOp::Add: return Value::of_int(checked_add(a.i, b.i));
                case BinOp::Sub: return Value::of_int(checked_sub(a.i, b.i));
                case BinOp::Mul: return Value::of_int(checked_mul(a.i, b.i));
                case BinOp::Div: return Value::of_int(checked_div(a.i, b.i));
                case BinOp::Min: return Value::of_int(a.i < b.i ? a.i : b.i);
                case BinOp::Max: return Value::of_int(a.i > b.i ? a.i : b.i);
                case BinOp::Lt: return Value::of_bool(a.i < b.i);
                case BinOp::Le: return Value::of_bool(a.i <= b.i);
                case BinOp::Gt: return Value::of_bool(a.i > b.i);
                case BinOp::Ge: return Value::of_bool(a.i >= b.i);
                case BinOp::Eq: return Value::of_bool(a.type == b.type && a.i == b.i);
                case BinOp::Ne: return Value::of_bool(!(a.type == b.type && a.i == b.i));
                default: break;
            }
            throw EvalError("unknown operator");
        }
        case ExprKind::Cond: {
            Value c = eval(e->child(0), env);
            return c.as_bool() ? eval(e->child(1), env) : eval(e->child(2), env);
        }
        case ExprKind::Hole:
            throw EvalError("cannot evaluate a sketch hole");
    }
    throw EvalError("unknown expression kind");
}

} // namespace homsynth
