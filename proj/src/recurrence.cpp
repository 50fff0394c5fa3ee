#include "homsynth/recurrence.hpp"

#include <algorithm>
#include <sstream>

#include "homsynth/errors.hpp"

namespace homsynth {

const Expr& RecurrenceSystem::rhs(const std::string& v) const {
    for (const auto& [name, e] : equations)
        if (name == v) return e;
    throw Error("no equation for " + v);
}

bool RecurrenceSystem::is_state(const std::string& v) const {
    return std::find(state_vars.begin(), state_vars.end(), v) != state_vars.end();
}

Type RecurrenceSystem::state_type(const std::string& v) const {
    auto it = init.find(v);
    if (it == init.end()) return Type::Int;
    return infer_type_default_int(it->second);
}

Value StateVector::get(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return values[i];
    throw EvalError("no state variable " + name);
}

std::string to_string(const StateVector& s) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < s.names.size(); ++i) {
        if (i) os << ", ";
        os << s.names[i] << " = " << to_string(s.values[i]);
    }
    os << "}";
    return os.str();
}

namespace {

// One simultaneous system: var -> expression over pre-state.
using EqMap = std::vector<std::pair<std::string, Expr>>;

Expr lookup_eq(const EqMap& eqs, const std::string& v) {
    for (const auto& [name, e] : eqs)
        if (name == v) return e;
    return nullptr;
}

Expr subst_system(const Expr& e, const EqMap& eqs) {
    return substitute(e, [&](const std::string& n) { return lookup_eq(eqs, n); });
}

// Statements -> system, starting from the identity system over `vars`.
EqMap convert(const std::vector<StmtPtr>& stmts, const std::vector<std::string>& vars) {
    EqMap eqs;
    for (const auto& v : vars) eqs.emplace_back(v, var(v));
    for (const auto& s : stmts) {
        switch (s->kind) {
            case StmtKind::Assign: {
                Expr rhs = subst_system(s->rhs, eqs);
                bool found = false;
                for (auto& [name, e] : eqs) {
                    if (name == s->lhs) {
                        e = rhs;
                        found = true;
                        break;
                    }
                }
                if (!found) throw Error("assignment to unclassified variable " + s->lhs);
                break;
            }
            case StmtKind::SeqAssign:
                throw NonScalarAssignment("write to " + s->lhs + "[...]");
            case StmtKind::If: {
                EqMap then_eqs = convert(s->then_body, vars);
                EqMap else_eqs = convert(s->else_body, vars);
                Expr c = subst_system(s->cond, eqs);
                EqMap merged;
                for (const auto& v : vars) {
                    Expr t = lookup_eq(then_eqs, v);
                    Expr f = lookup_eq(else_eqs, v);
                    if (struct_equal(t, f))
                        merged.emplace_back(v, t);
                    else
                        merged.emplace_back(v, cond(c, t, f));
                }
                // substitute pre-state expressions into the merged branch system
                EqMap next;
                for (const auto& v : vars) next.emplace_back(v, subst_system(lookup_eq(merged, v), eqs));
                eqs = std::move(next);
                break;
            }
            case StmtKind::For:
                throw Error("nested loop reached recurrence conversion");
        }
    }
    return eqs;
}

} // namespace

RecurrenceSystem to_recurrence_system(const LoopSpec& loop) {
    auto [svar, ivar] = classify_vars(loop);
    RecurrenceSystem sys;
    sys.state_vars = svar;
    sys.input_vars = ivar;
    sys.iterator = loop.iterator;
    sys.sequence = loop.sequence;
    sys.init = loop.init;
    EqMap eqs = convert(loop.body, svar);
    for (const auto& v : svar) {
        Expr e = lookup_eq(eqs, v);
        sys.equations.emplace_back(v, e);
    }
    sys.original_count = sys.equations.size();
    for (const auto& v : svar) {
        if (!sys.init.count(v))
            throw Error("state variable " + v + " has no initial value before the loop");
    }
    return sys;
}

StateVector initial_state(const RecurrenceSystem& sys) {
    StateVector s;
    Env empty;
    for (const auto& v : sys.state_vars) {
        s.names.push_back(v);
        s.values.push_back(eval(sys.init.at(v), empty));
    }
    return s;
}

StateVector run_from_state(const RecurrenceSystem& sys, const StateVector& start,
                           const std::vector<std::int64_t>& input) {
    StateVector state = start;
    Env env;
    env.seq = &input;
    env.seq_name = sys.sequence;
    for (std::size_t step = 0; step < input.size(); ++step) {
        for (std::size_t j = 0; j < state.names.size(); ++j) env.vars[state.names[j]] = state.values[j];
        env.vars[sys.iterator] = Value::of_int(static_cast<std::int64_t>(step));
        std::vector<Value> next;
        next.reserve(sys.equations.size());
        for (const auto& [name, rhs] : sys.equations) {
            (void)name;
            next.push_back(eval(rhs, env));
        }
        state.values = std::move(next);
    }
    return state;
}

StateVector run_sequential(const RecurrenceSystem& sys, const std::vector<std::int64_t>& input) {
    return run_from_state(sys, initial_state(sys), input);
}

RecurrenceSystem extend_system(const RecurrenceSystem& sys,
                               const std::vector<AuxAccumulator>& aux) {
    RecurrenceSystem ext = sys;
    for (const auto& a : aux) {
        if (ext.is_state(a.name) || ext.input_vars.count(a.name))
            throw NameClash(a.name);
        ext.state_vars.push_back(a.name);
        ext.equations.emplace_back(a.name, a.update);
        ext.init[a.name] = a.init;
    }
    return ext;
}

std::string dump(const RecurrenceSystem& sys) {
    std::ostringstream os;
    for (const auto& [name, e] : sys.equations) os << name << " = " << to_string(e) << "\n";
    return os.str();
}

namespace {

void interpret_stmts(const std::vector<StmtPtr>& stmts, Env& env) {
    for (const auto& s : stmts) {
        switch (s->kind) {
            case StmtKind::Assign:
                env.vars[s->lhs] = eval(s->rhs, env);
                break;
            case StmtKind::SeqAssign:
                throw NonScalarAssignment("write to " + s->lhs + "[...]");
            case StmtKind::If:
                if (eval(s->cond, env).as_bool())
                    interpret_stmts(s->then_body, env);
                else
                    interpret_stmts(s->else_body, env);
                break;
            case StmtKind::For:
                throw Error("nested loop in interpreter");
        }
    }
}

} // namespace

StateVector interpret_loop(const LoopSpec& loop, const std::vector<std::int64_t>& input) {
    Env env;
    env.seq = &input;
    env.seq_name = loop.sequence;
    for (const auto& [v, e] : loop.init) env.vars[v] = eval(e, env);
    for (std::size_t step = 0; step < input.size(); ++step) {
        env.vars[loop.iterator] = Value::of_int(static_cast<std::int64_t>(step));
        interpret_stmts(loop.body, env);
    }
    StateVector out;
    for (const auto& v : loop.state_vars) {
        out.names.push_back(v);
        out.values.push_back(env.vars.at(v));
    }
    return out;
}

} // namespace homsynth
