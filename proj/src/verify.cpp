#include "homsynth/verify.hpp"

#include <random>
#include <sstream>

#include "homsynth/errors.hpp"
#include "homsynth/seqs.hpp"

namespace homsynth {

namespace {

std::string seq_str(const std::vector<std::int64_t>& s) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << ", ";
        os << s[i];
    }
    os << "]";
    return os.str();
}

} // namespace

std::string to_string(const Counterexample& cex) {
    std::ostringstream os;
    os << "x = " << seq_str(cex.x) << ", y = " << seq_str(cex.y)
       << ": sequential " << to_string(cex.lhs) << " vs join " << to_string(cex.rhs);
    return os.str();
}

std::string to_string(const NonHomWitness& w) {
    std::ostringstream os;
    os << "x = " << seq_str(w.x) << ", y = " << seq_str(w.y) << ", v = " << seq_str(w.v)
       << ", w = " << seq_str(w.w) << ": states agree (" << to_string(w.fx) << "; "
       << to_string(w.fy) << ") but concatenations differ: " << to_string(w.fxy) << " vs "
       << to_string(w.fvw);
    return os.str();
}

StateVector apply_join(const JoinOperator& join, const StateVector& left,
                       const StateVector& right) {
    StateVector out;
    for (const auto& [v, rhs] : join.equations) {
        out.names.push_back(v);
        out.values.push_back(eval_join_expr(rhs, left, right));
    }
    return out;
}

std::optional<Counterexample> bounded_check(const RecurrenceSystem& sys,
                                            const JoinOperator& join, const SynthConfig& cfg) {
    if (join.equations.size() != sys.state_vars.size())
        throw Error("join does not cover the state variables");
    for (std::size_t i = 0; i < join.equations.size(); ++i)
        if (join.equations[i].first != sys.state_vars[i])
            throw Error("join equations out of order");

    auto seqs = enumerate_sequences(cfg.domain_lo, cfg.domain_hi, cfg.min_length, cfg.K);
    std::vector<StateVector> states;
    states.reserve(seqs.size());
    for (const auto& s : seqs) states.push_back(run_sequential(sys, s));

    for (std::size_t i = 0; i < seqs.size(); ++i) {
        for (std::size_t j = 0; j < seqs.size(); ++j) {
            StateVector lhs = run_from_state(sys, states[i], seqs[j]);
            StateVector rhs;
            try {
                rhs = apply_join(join, states[i], states[j]);
            } catch (const EvalError& e) {
                throw EvalError(std::string(e.what()) + " on pair x=" + seq_str(seqs[i]) +
                                " y=" + seq_str(seqs[j]));
            }
            if (lhs != rhs) return Counterexample{seqs[i], seqs[j], lhs, rhs};
        }
    }
    return std::nullopt;
}

std::optional<NonHomWitness> witness_nonhomomorphism(const RecurrenceSystem& sys,
                                                     const SynthConfig& cfg, int max_len) {
    auto seqs = enumerate_sequences(cfg.domain_lo, cfg.domain_hi, cfg.min_length, max_len,
                                    4000, cfg.seed + 31);
    std::vector<StateVector> states;
    states.reserve(seqs.size());
    for (const auto& s : seqs) states.push_back(run_sequential(sys, s));

    // group sequences by final state
    std::vector<std::vector<std::size_t>> groups;
    {
        std::map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            std::string key = to_string(states[i]);
            auto it = index.find(key);
            if (it == index.end()) {
                index[key] = groups.size();
                groups.push_back({i});
            } else {
                groups[it->second].push_back(i);
            }
        }
    }

    for (const auto& gx : groups) {
        for (const auto& gy : groups) {
            for (std::size_t xi : gx) {
                for (std::size_t vi : gx) {
                    if (vi < xi) continue;
                    for (std::size_t yi : gy) {
                        for (std::size_t wi : gy) {
                            if (xi == vi && yi == wi) continue;
                            if (wi < yi) continue;
                            StateVector fxy = run_from_state(sys, states[xi], seqs[yi]);
                            StateVector fvw = run_from_state(sys, states[vi], seqs[wi]);
                            if (fxy != fvw)
                                return NonHomWitness{seqs[xi], seqs[yi], seqs[vi], seqs[wi],
                                                     states[xi], states[yi], fxy, fvw};
                        }
                    }
                }
            }
        }
    }
    return std::nullopt;
}

namespace {

// Join equations with variables resolved to (side, slot) for fast repeated
// evaluation: left reads become Left holes, right reads Right holes, with the
// state slot in hole_id.
struct CompiledJoin {
    std::vector<std::string> names;
    std::vector<Expr> exprs;
};

CompiledJoin compile_join(const JoinOperator& join) {
    CompiledJoin cj;
    std::map<std::string, int> slot;
    for (const auto& [v, _] : join.equations) {
        slot[v] = static_cast<int>(cj.names.size());
        cj.names.push_back(v);
    }
    std::function<Expr(const Expr&)> go = [&](const Expr& e) -> Expr {
        if (e->kind == ExprKind::Var) {
            const std::string& n = e->name;
            bool left = n.size() > 2 && n.compare(n.size() - 2, 2, "_l") == 0;
            bool right = n.size() > 2 && n.compare(n.size() - 2, 2, "_r") == 0;
            if (!left && !right) throw EvalError("join reads unsuffixed variable " + n);
            std::string base = n.substr(0, n.size() - 2);
            auto it = slot.find(base);
            if (it == slot.end()) throw EvalError("join reads unknown variable " + n);
            return hole(left ? HoleKind::Left : HoleKind::Right, it->second, Type::Int);
        }
        if (e->children.empty()) return e;
        std::vector<Expr> kids;
        kids.reserve(e->children.size());
        for (const auto& c : e->children) kids.push_back(go(c));
        switch (e->kind) {
            case ExprKind::Neg: return neg(kids[0]);
            case ExprKind::Not: return lnot(kids[0]);
            case ExprKind::Binary: return binary(e->op, kids[0], kids[1]);
            case ExprKind::Cond: return cond(kids[0], kids[1], kids[2]);
            default: return e;
        }
    };
    for (const auto& [_, rhs] : join.equations) cj.exprs.push_back(go(rhs));
    return cj;
}

Value eval_compiled(const Expr& e, const std::vector<Value>& left,
                    const std::vector<Value>& right) {
    switch (e->kind) {
        case ExprKind::IntConst: return Value::of_int(e->int_value);
        case ExprKind::BoolConst: return Value::of_bool(e->bool_value);
        case ExprKind::MaxIntConst: return Value::of_int(kMaxIntSentinel);
        case ExprKind::MinIntConst: return Value::of_int(kMinIntSentinel);
        case ExprKind::Hole:
            return e->hole_kind == HoleKind::Left
                       ? left[static_cast<std::size_t>(e->hole_id)]
                       : right[static_cast<std::size_t>(e->hole_id)];
        case ExprKind::Neg:
            return Value::of_int(checked_sub(0, eval_compiled(e->child(0), left, right).i));
        case ExprKind::Not:
            return Value::of_bool(!eval_compiled(e->child(0), left, right).as_bool());
        case ExprKind::Binary: {
            if (e->op == BinOp::And) {
                if (!eval_compiled(e->child(0), left, right).as_bool())
                    return Value::of_bool(false);
                return Value::of_bool(eval_compiled(e->child(1), left, right).as_bool());
            }
            if (e->op == BinOp::Or) {
                if (eval_compiled(e->child(0), left, right).as_bool())
                    return Value::of_bool(true);
                return Value::of_bool(eval_compiled(e->child(1), left, right).as_bool());
            }
            Value a = eval_compiled(e->child(0), left, right);
            Value b = eval_compiled(e->child(1), left, right);
            switch (e->op) {
                case BinOp::Add: return Value::of_int(checked_add(a.i, b.i));
                case BinOp::Sub: return Value::of_int(checked_sub(a.i, b.i));
                case BinOp::Mul: return Value::of_int(checked_mul(a.i, b.i));
                case BinOp::Div: return Value::of_int(checked_div(a.i, b.i));
                case BinOp::Min: return Value::of_int(std::min(a.i, b.i));
                case BinOp::Max: return Value::of_int(std::max(a.i, b.i));
                case BinOp::Lt: return Value::of_bool(a.i < b.i);
                case BinOp::Le: return Value::of_bool(a.i <= b.i);
                case BinOp::Gt: return Value::of_bool(a.i > b.i);
                case BinOp::Ge: return Value::of_bool(a.i >= b.i);
                case BinOp::Eq: return Value::of_bool(a.type == b.type && a.i == b.i);
                case BinOp::Ne: return Value::of_bool(!(a.type == b.type && a.i == b.i));
                default: break;
            }
            throw EvalError("bad join operator");
        }
        case ExprKind::Cond:
            return eval_compiled(e->child(0), left, right).as_bool()
                       ? eval_compiled(e->child(1), left, right)
                       : eval_compiled(e->child(2), left, right);
        default:
            throw EvalError("unexpected node in compiled join");
    }
}

std::vector<Value> apply_compiled(const CompiledJoin& cj, const std::vector<Value>& left,
                                  const std::vector<Value>& right) {
    std::vector<Value> out;
    out.reserve(cj.exprs.size());
    for (const auto& e : cj.exprs) out.push_back(eval_compiled(e, left, right));
    return out;
}

StateVector dc_rec(const RecurrenceSystem& sys, const CompiledJoin& cj,
                   const std::vector<std::int64_t>& input, std::size_t lo, std::size_t hi,
                   int grain, SplitStrategy split, std::mt19937_64& rng) {
    std::size_t len = hi - lo;
    if (len <= static_cast<std::size_t>(grain)) {
        std::vector<std::int64_t> chunk(input.begin() + static_cast<long>(lo),
                                        input.begin() + static_cast<long>(hi));
        return run_sequential(sys, chunk);
    }
    std::size_t mid;
    if (split == SplitStrategy::Balanced) {
        mid = lo + len / 2;
    } else {
        std::uniform_int_distribution<std::size_t> d(lo + 1, hi - 1);
        mid = d(rng);
    }
    StateVector l = dc_rec(sys, cj, input, lo, mid, grain, split, rng);
    StateVector r = dc_rec(sys, cj, input, mid, hi, grain, split, rng);
    StateVector out = l;
    out.values = apply_compiled(cj, l.values, r.values);
    return out;
}

// every split point, memoized over subranges; throws on disagreement
StateVector all_splits_eval(const RecurrenceSystem& sys, const CompiledJoin& cj,
                            const std::vector<std::int64_t>& input) {
    std::size_t n = input.size();
    if (n <= 1) return run_sequential(sys, input);
    // table[lo][len-1] for len >= 1
    std::vector<std::vector<std::vector<Value>>> table(n);
    StateVector proto;
    for (std::size_t lo = 0; lo < n; ++lo) {
        table[lo].resize(n - lo);
        std::vector<std::int64_t> one{input[lo]};
        StateVector st = run_sequential(sys, one);
        proto = st;
        table[lo][0] = st.values;
    }
    for (std::size_t len = 2; len <= n; ++len) {
        for (std::size_t lo = 0; lo + len <= n; ++lo) {
            std::optional<std::vector<Value>> agreed;
            for (std::size_t cut = 1; cut < len; ++cut) {
                auto joined =
                    apply_compiled(cj, table[lo][cut - 1], table[lo + cut][len - cut - 1]);
                if (!agreed) {
                    agreed = joined;
                } else if (*agreed != joined) {
                    throw EvalError("split points disagree on range [" + std::to_string(lo) +
                                    ", " + std::to_string(lo + len) + ")");
                }
            }
            table[lo][len - 1] = *agreed;
        }
    }
    StateVector out = proto;
    out.values = table[0][n - 1];
    return out;
}

} // namespace

StateVector dc_eval(const RecurrenceSystem& sys, const JoinOperator& join,
                    const std::vector<std::int64_t>& input, int grain, SplitStrategy split,
                    std::uint64_t seed) {
    if (grain < 1) throw Error("grain must be at least 1");
    CompiledJoin cj = compile_join(join);
    if (split == SplitStrategy::All) {
        if (input.size() <= 1) return run_sequential(sys, input);
        return all_splits_eval(sys, cj, input);
    }
    std::mt19937_64 rng(seed);
    return dc_rec(sys, cj, input, 0, input.size(), grain, split, rng);
}

std::optional<std::string> oracle_agreement(const RecurrenceSystem& sys,
                                            const JoinOperator& join, const SynthConfig& cfg,
                                            int trials, int max_len, std::int64_t lo,
                                            std::int64_t hi) {
    std::mt19937_64 rng(cfg.seed + 99);
    std::uniform_int_distribution<int> len_dist(std::max(1, cfg.min_length), max_len);
    std::uniform_int_distribution<std::int64_t> val(lo, hi);
    for (int t = 0; t < trials; ++t) {
        std::vector<std::int64_t> s(static_cast<std::size_t>(len_dist(rng)));
        for (auto& v : s) v = val(rng);
        StateVector seq_result = run_sequential(sys, s);
        for (SplitStrategy split : {SplitStrategy::Balanced, SplitStrategy::Random}) {
            StateVector dc = dc_eval(sys, join, s, cfg.grain, split, cfg.seed + static_cast<std::uint64_t>(t));
            if (dc != seq_result)
                return "divide-and-conquer result " + to_string(dc) + " differs from " +
                       to_string(seq_result) + " on " + seq_str(s);
        }
    }
    return std::nullopt;
}

std::optional<std::string> split_independence(const RecurrenceSystem& sys,
                                              const JoinOperator& join, const SynthConfig& cfg,
                                              int max_len) {
    auto seqs = enumerate_sequences(cfg.domain_lo, cfg.domain_hi,
                                    std::max(1, cfg.min_length), max_len, 3000, cfg.seed + 7);
    for (const auto& s : seqs) {
        try {
            StateVector all = dc_eval(sys, join, s, 1, SplitStrategy::All);
            StateVector seq_result = run_sequential(sys, s);
            if (all != seq_result)
                return "all-splits result differs from sequential on " + seq_str(s);
        } catch (const EvalError& e) {
            return std::string(e.what()) + " on " + seq_str(s);
        }
    }
    return std::nullopt;
}

} // namespace homsynth
