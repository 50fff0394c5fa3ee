#include "homsynth/synth.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "homsynth/errors.hpp"
#include "homsynth/seqs.hpp"

namespace homsynth {

std::string to_string(const JoinOperator& join) {
    std::ostringstream os;
    for (const auto& [v, e] : join.equations) os << v << " = " << to_string(e) << ";\n";
    return os.str();
}

Value eval_join_expr(const Expr& e, const StateVector& left, const StateVector& right) {
    switch (e->kind) {
        case ExprKind::IntConst: return Value::of_int(e->int_value);
        case ExprKind::BoolConst: return Value::of_bool(e->bool_value);
        case ExprKind::MaxIntConst: return Value::of_int(kMaxIntSentinel);
        case ExprKind::MinIntConst: return Value::of_int(kMinIntSentinel);
        case ExprKind::Var: {
            const std::string& n = e->name;
            if (n.size() > 2 && n.compare(n.size() - 2, 2, "_l") == 0)
                return left.get(n.substr(0, n.size() - 2));
            if (n.size() > 2 && n.compare(n.size() - 2, 2, "_r") == 0)
                return right.get(n.substr(0, n.size() - 2));
            throw EvalError("join expression reads unsuffixed variable " + n);
        }
        case ExprKind::Neg:
            return Value::of_int(checked_sub(0, eval_join_expr(e->child(0), left, right).i));
        case ExprKind::Not:
            return Value::of_bool(!eval_join_expr(e->child(0), left, right).as_bool());
        case ExprKind::Binary: {
            if (e->op == BinOp::And) {
                if (!eval_join_expr(e->child(0), left, right).as_bool())
                    return Value::of_bool(false);
                return Value::of_bool(eval_join_expr(e->child(1), left, right).as_bool());
            }
            if (e->op == BinOp::Or) {
                if (eval_join_expr(e->child(0), left, right).as_bool())
                    return Value::of_bool(true);
                return Value::of_bool(eval_join_expr(e->child(1), left, right).as_bool());
            }
            Value a = eval_join_expr(e->child(0), left, right);
            Value b = eval_join_expr(e->child(1), left, right);
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
            return eval_join_expr(e->child(0), left, right).as_bool()
                       ? eval_join_expr(e->child(1), left, right)
                       : eval_join_expr(e->child(2), left, right);
        default:
            throw EvalError("join expression contains an unexpected node");
    }
}

namespace {

using MaybeValue = std::optional<Value>;

struct JoinExample {
    StateVector left, right, expected;
};

// ---------------------------------------------------------------------------
// hole fill pools

struct Pool {
    std::vector<Expr> entries;                 // ordered by (size, build order)
    std::vector<int> sizes;
    std::vector<std::vector<int>> by_size;     // size -> entry indices
    std::vector<std::vector<MaybeValue>> vals; // [entry][example]

    void push(const Expr& e) {
        entries.push_back(e);
        sizes.push_back(e->size);
        if (by_size.size() <= static_cast<std::size_t>(e->size))
            by_size.resize(static_cast<std::size_t>(e->size) + 1);
        by_size[static_cast<std::size_t>(e->size)].push_back(
            static_cast<int>(entries.size()) - 1);
        vals.emplace_back();
    }

    void eval_examples(const std::vector<JoinExample>& exs) {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            auto& row = vals[i];
            for (std::size_t e = row.size(); e < exs.size(); ++e) {
                try {
                    row.push_back(eval_join_expr(entries[i], exs[e].left, exs[e].right));
                } catch (const EvalError&) {
                    row.push_back(std::nullopt);
                }
            }
        }
    }
};

struct PoolSet {
    Pool left_int, left_bool, right_int, right_bool;

    Pool& get(HoleKind kind, Type type) {
        if (kind == HoleKind::Left) return type == Type::Int ? left_int : left_bool;
        return type == Type::Int ? right_int : right_bool;
    }
    void eval_examples(const std::vector<JoinExample>& exs) {
        left_int.eval_examples(exs);
        left_bool.eval_examples(exs);
        right_int.eval_examples(exs);
        right_bool.eval_examples(exs);
    }
};

struct VarInfo {
    std::string name;
    Type type;
};

// Leaves and depth-1 expressions for each hole kind/type.
PoolSet build_pools(const std::vector<VarInfo>& vars, bool nonlinear, int depth) {
    PoolSet ps;

    std::vector<Expr> int_leaves_l, int_leaves_r, bool_leaves_l, bool_leaves_r;
    for (const auto& v : vars) {
        Expr l = var(v.name + "_l");
        if (v.type == Type::Int)
            int_leaves_l.push_back(l);
        else
            bool_leaves_l.push_back(l);
    }
    for (const auto& v : vars) {
        Expr r = var(v.name + "_r");
        if (v.type == Type::Int) {
            int_leaves_l.push_back(r);
            int_leaves_r.push_back(r);
        } else {
            bool_leaves_l.push_back(r);
            bool_leaves_r.push_back(r);
        }
    }
    std::vector<Expr> int_consts = {int_const(0), int_const(1), int_const(-1)};
    if (!nonlinear) {
        int_consts.push_back(max_int());
        int_consts.push_back(min_int());
    }
    for (const auto& c : int_consts) {
        int_leaves_l.push_back(c);
        int_leaves_r.push_back(c);
    }
    for (bool b : {true, false}) {
        bool_leaves_l.push_back(bool_const(b));
        bool_leaves_r.push_back(bool_const(b));
    }

    auto fill = [&](Pool& pool, const std::vector<Expr>& ints, const std::vector<Expr>& bools) {
        for (const auto& e : ints) pool.push(e);
        if (depth < 1) return;
        for (const auto& e : ints) pool.push(neg(e));
        static const BinOp arith[] = {BinOp::Add, BinOp::Sub, BinOp::Mul,
                                      BinOp::Div, BinOp::Min, BinOp::Max};
        for (BinOp op : arith)
            for (const auto& a : ints)
                for (const auto& b : ints) pool.push(binary(op, a, b));
        for (const auto& c : bools)
            for (const auto& a : ints)
                for (const auto& b : ints) pool.push(cond(c, a, b));
    };
    auto fill_bool = [&](Pool& pool, const std::vector<Expr>& ints,
                         const std::vector<Expr>& bools) {
        for (const auto& e : bools) pool.push(e);
        if (depth < 1) return;
        for (const auto& e : bools) pool.push(lnot(e));
        static const BinOp cmps[] = {BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge,
                                     BinOp::Eq, BinOp::Ne};
        for (BinOp op : cmps)
            for (const auto& a : ints)
                for (const auto& b : ints) pool.push(binary(op, a, b));
        for (BinOp op : {BinOp::And, BinOp::Or, BinOp::Eq, BinOp::Ne})
            for (const auto& a : bools)
                for (const auto& b : bools) pool.push(binary(op, a, b));
        for (const auto& c : bools)
            for (const auto& a : bools)
                for (const auto& b : bools) pool.push(cond(c, a, b));
    };

    fill(ps.left_int, int_leaves_l, bool_leaves_l);
    fill(ps.right_int, int_leaves_r, bool_leaves_r);
    fill_bool(ps.left_bool, int_leaves_l, bool_leaves_l);
    fill_bool(ps.right_bool, int_leaves_r, bool_leaves_r);
    return ps;
}

// ---------------------------------------------------------------------------
// truth tables: states of all bounded sequences and their concatenations

struct PairTable {
    std::vector<std::vector<std::int64_t>> seqs;
    std::vector<StateVector> states;
    // concat[i * n + j] = f(seqs[i] . seqs[j])
    std::vector<StateVector> concat;
    std::size_t n = 0;
};

PairTable build_pairs(const RecurrenceSystem& sys, const SynthConfig& cfg) {
    PairTable t;
    t.seqs = enumerate_sequences(cfg.domain_lo, cfg.domain_hi, cfg.min_length, cfg.K);
    t.n = t.seqs.size();
    t.states.reserve(t.n);
    for (const auto& s : t.seqs) t.states.push_back(run_sequential(sys, s));
    t.concat.resize(t.n * t.n);
    for (std::size_t i = 0; i < t.n; ++i)
        for (std::size_t j = 0; j < t.n; ++j)
            t.concat[i * t.n + j] = run_from_state(sys, t.states[i], t.seqs[j]);
    return t;
}

std::vector<JoinExample> build_filter_examples(const RecurrenceSystem& sys,
                                               const SynthConfig& cfg) {
    std::vector<JoinExample> exs;
    std::mt19937_64 rng(cfg.seed);
    std::int64_t lo = std::min<std::int64_t>(cfg.domain_lo, -8);
    std::int64_t hi = std::max<std::int64_t>(cfg.domain_hi, 8);
    std::uniform_int_distribution<std::int64_t> val(lo, hi);
    std::uniform_int_distribution<int> len(cfg.min_length, cfg.filter_max_len);
    for (int k = 0; k < cfg.filter_examples; ++k) {
        std::vector<std::int64_t> x(static_cast<std::size_t>(len(rng)));
        std::vector<std::int64_t> y(static_cast<std::size_t>(len(rng)));
        for (auto& v : x) v = val(rng);
        for (auto& v : y) v = val(rng);
        try {
            JoinExample ex;
            ex.left = run_sequential(sys, x);
            ex.right = run_sequential(sys, y);
            ex.expected = run_from_state(sys, ex.left, y);
            exs.push_back(std::move(ex));
        } catch (const EvalError&) {
        }
    }
    return exs;
}

// ---------------------------------------------------------------------------
// candidate streams

// Streams hole fills ordered by total size: for each total, every
// composition (s_0..s_{n-1}) of per-hole sizes, then an odometer over the
// per-size entry lists.
class SketchStream {
public:
    SketchStream(const SketchEquation& eq, PoolSet& pools) {
        for (const auto& h : eq.holes) {
            Pool& p = pools.get(h.kind, h.type);
            hole_pools_.push_back(&p);
            std::vector<int> avail;
            for (std::size_t s = 0; s < p.by_size.size(); ++s)
                if (!p.by_size[s].empty()) avail.push_back(static_cast<int>(s));
            avail_sizes_.push_back(std::move(avail));
        }
        n_ = eq.holes.size();
        done_ = n_ == 0;
        for (const auto& a : avail_sizes_)
            if (a.empty()) done_ = true;
        if (!done_) {
            total_ = 0;
            max_total_ = 0;
            for (const auto& a : avail_sizes_) {
                total_ += a.front();
                max_total_ += a.back();
            }
            min_total_ = total_;
            build_comps();
            comp_idx_ = 0;
            if (!next_live_comp()) done_ = true;
        }
    }

    bool next(std::vector<int>& choice) {
        if (done_) return false;
        choice.resize(n_);
        const auto& comp = comps_[comp_idx_];
        for (std::size_t i = 0; i < n_; ++i)
            choice[i] = hole_pools_[i]
                            ->by_size[static_cast<std::size_t>(comp[i])]
                                     [static_cast<std::size_t>(idx_[i])];
        advance();
        return true;
    }

private:
    void build_comps() {
        comps_.clear();
        std::vector<int> cur(n_);
        std::function<void(std::size_t, int)> rec = [&](std::size_t i, int remaining) {
            if (i == n_) {
                if (remaining == 0) comps_.push_back(cur);
                return;
            }
            int tail_min = 0, tail_max = 0;
            for (std::size_t t = i + 1; t < n_; ++t) {
                tail_min += avail_sizes_[t].front();
                tail_max += avail_sizes_[t].back();
            }
            for (int s : avail_sizes_[i]) {
                int rem = remaining - s;
                if (rem < tail_min || rem > tail_max) continue;
                cur[i] = s;
                rec(i + 1, rem);
            }
        };
        rec(0, total_);
    }

    bool next_live_comp() {
        for (;;) {
            if (comp_idx_ >= comps_.size()) {
                if (total_ >= max_total_) return false;
                ++total_;
                build_comps();
                comp_idx_ = 0;
                continue;
            }
            idx_.assign(n_, 0);
            return true;
        }
    }

    void advance() {
        const auto& comp = comps_[comp_idx_];
        for (std::size_t i = n_; i-- > 0;) {
            const auto& list = hole_pools_[i]->by_size[static_cast<std::size_t>(comp[i])];
            if (++idx_[i] < static_cast<int>(list.size())) return;
            idx_[i] = 0;
        }
        ++comp_idx_;
        if (!next_live_comp()) done_ = true;
    }

    std::vector<Pool*> hole_pools_;
    std::vector<std::vector<int>> avail_sizes_;
    std::vector<std::vector<int>> comps_;
    std::vector<int> idx_;
    std::size_t comp_idx_ = 0;
    std::size_t n_ = 0;
    int total_ = 0;
    int min_total_ = 0;
    int max_total_ = 0;
    bool done_ = false;
};

MaybeValue eval_sketch(const Expr& e, const std::vector<int>& choice,
                       const std::vector<Pool*>& hole_pools, std::size_t ex) {
    switch (e->kind) {
        case ExprKind::Hole: {
            std::size_t h = static_cast<std::size_t>(e->hole_id);
            return hole_pools[h]->vals[static_cast<std::size_t>(choice[h])][ex];
        }
        case ExprKind::Neg: {
            auto v = eval_sketch(e->child(0), choice, hole_pools, ex);
            if (!v) return std::nullopt;
            try {
                return Value::of_int(checked_sub(0, v->i));
            } catch (const EvalError&) {
                return std::nullopt;
            }
        }
        case ExprKind::Not: {
            auto v = eval_sketch(e->child(0), choice, hole_pools, ex);
            if (!v) return std::nullopt;
            return Value::of_bool(!v->as_bool());
        }
        case ExprKind::Binary: {
            auto a = eval_sketch(e->child(0), choice, hole_pools, ex);
            if (!a) return std::nullopt;
            if (e->op == BinOp::And) {
                if (!a->as_bool()) return Value::of_bool(false);
                auto b = eval_sketch(e->child(1), choice, hole_pools, ex);
                if (!b) return std::nullopt;
                return Value::of_bool(b->as_bool());
            }
            if (e->op == BinOp::Or) {
                if (a->as_bool()) return Value::of_bool(true);
                auto b = eval_sketch(e->child(1), choice, hole_pools, ex);
                if (!b) return std::nullopt;
                return Value::of_bool(b->as_bool());
            }
            auto b = eval_sketch(e->child(1), choice, hole_pools, ex);
            if (!b) return std::nullopt;
            try {
                switch (e->op) {
                    case BinOp::Add: return Value::of_int(checked_add(a->i, b->i));
                    case BinOp::Sub: return Value::of_int(checked_sub(a->i, b->i));
                    case BinOp::Mul: return Value::of_int(checked_mul(a->i, b->i));
                    case BinOp::Div: return Value::of_int(checked_div(a->i, b->i));
                    case BinOp::Min: return Value::of_int(std::min(a->i, b->i));
                    case BinOp::Max: return Value::of_int(std::max(a->i, b->i));
                    case BinOp::Lt: return Value::of_bool(a->i < b->i);
                    case BinOp::Le: return Value::of_bool(a->i <= b->i);
                    case BinOp::Gt: return Value::of_bool(a->i > b->i);
                    case BinOp::Ge: return Value::of_bool(a->i >= b->i);
                    case BinOp::Eq: return Value::of_bool(a->type == b->type && a->i == b->i);
                    case BinOp::Ne:
                        return Value::of_bool(!(a->type == b->type && a->i == b->i));
                    default: return std::nullopt;
                }
            } catch (const EvalError&) {
                return std::nullopt;
            }
        }
        case ExprKind::Cond: {
            auto c = eval_sketch(e->child(0), choice, hole_pools, ex);
            if (!c) return std::nullopt;
            return c->as_bool() ? eval_sketch(e->child(1), choice, hole_pools, ex)
                                : eval_sketch(e->child(2), choice, hole_pools, ex);
        }
        default:
            return std::nullopt;
    }
}

Expr materialize(const Expr& e, const std::vector<int>& choice,
                 const std::vector<Pool*>& hole_pools) {
    if (e->kind == ExprKind::Hole) {
        std::size_t h = static_cast<std::size_t>(e->hole_id);
        return hole_pools[h]->entries[static_cast<std::size_t>(choice[h])];
    }
    if (e->children.empty()) return e;
    std::vector<Expr> kids;
    kids.reserve(e->children.size());
    for (const auto& c : e->children) kids.push_back(materialize(c, choice, hole_pools));
    switch (e->kind) {
        case ExprKind::Neg: return neg(kids[0]);
        case ExprKind::Not: return lnot(kids[0]);
        case ExprKind::Binary: return binary(e->op, kids[0], kids[1]);
        case ExprKind::Cond: return cond(kids[0], kids[1], kids[2]);
        default: return e;
    }
}

// ---------------------------------------------------------------------------
// the per-variable search

struct VarSearch {
    const RecurrenceSystem& sys;
    const SynthConfig& cfg;
    PoolSet& pools;
    std::vector<JoinExample>& examples;
    const PairTable& pairs;
    std::size_t var_slot;
    std::string var;

    long tried = 0;
    bool budget_hit = false;

    bool exhaustive_ok(const Expr& join_rhs) {
        for (std::size_t i = 0; i < pairs.n; ++i) {
            for (std::size_t j = 0; j < pairs.n; ++j) {
                const StateVector& expect = pairs.concat[i * pairs.n + j];
                Value got;
                try {
                    got = eval_join_expr(join_rhs, pairs.states[i], pairs.states[j]);
                } catch (const EvalError&) {
                    add_counterexample(i, j);
                    return false;
                }
                if (got != expect.values[var_slot]) {
                    add_counterexample(i, j);
                    return false;
                }
            }
        }
        return true;
    }

    void add_counterexample(std::size_t i, std::size_t j) {
        if (!cfg.use_example_filter || examples.size() > 512) return;
        JoinExample ex;
        ex.left = pairs.states[i];
        ex.right = pairs.states[j];
        ex.expected = pairs.concat[i * pairs.n + j];
        examples.push_back(std::move(ex));
        pools.eval_examples(examples);
    }

    std::optional<Expr> run_sketch(const SketchEquation& eq) {
        std::vector<Pool*> hole_pools;
        for (const auto& h : eq.holes) hole_pools.push_back(&pools.get(h.kind, h.type));
        SketchStream stream(eq, pools);
        std::vector<int> choice;
        while (stream.next(choice)) {
            if (++tried > cfg.candidate_budget) {
                budget_hit = true;
                return std::nullopt;
            }
            if ((tried & 0x3FFF) == 0) cfg.check_deadline("join synthesis");
            bool ok = true;
            if (cfg.use_example_filter) {
                for (std::size_t ex = 0; ex < examples.size(); ++ex) {
                    auto got = eval_sketch(eq.rhs, choice, hole_pools, ex);
                    if (!got || *got != examples[ex].expected.values[var_slot]) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) continue;
            Expr cand = materialize(eq.rhs, choice, hole_pools);
            if (exhaustive_ok(cand)) return cand;
        }
        return std::nullopt;
    }

    // whole right-hand side as one hole of depth <= 2, streamed by size
    std::optional<Expr> run_relaxed(Type type) {
        Pool& p1_int = pools.get(HoleKind::Left, Type::Int);
        Pool& p1_bool = pools.get(HoleKind::Left, Type::Bool);
        Pool& target = type == Type::Int ? p1_int : p1_bool;

        auto expected = [&](std::size_t ex) { return examples[ex].expected.values[var_slot]; };

        auto try_value_fn = [&](const std::function<MaybeValue(std::size_t)>& value_of,
                                const std::function<Expr()>& make) -> std::optional<Expr> {
            if (++tried > cfg.candidate_budget) {
                budget_hit = true;
                return std::nullopt;
            }
            if ((tried & 0x3FFF) == 0) cfg.check_deadline("join synthesis");
            if (cfg.use_example_filter) {
                for (std::size_t ex = 0; ex < examples.size(); ++ex) {
                    auto got = value_of(ex);
                    if (!got || *got != expected(ex)) return std::nullopt;
                }
            }
            Expr cand = make();
            if (exhaustive_ok(cand)) return cand;
            return std::nullopt;
        };

        // helper to apply a binary op on cached values
        auto bin_val = [](BinOp op, const MaybeValue& a, const MaybeValue& b) -> MaybeValue {
            if (!a || !b) return std::nullopt;
            try {
                switch (op) {
                    case BinOp::Add: return Value::of_int(checked_add(a->i, b->i));
                    case BinOp::Sub: return Value::of_int(checked_sub(a->i, b->i));
                    case BinOp::Mul: return Value::of_int(checked_mul(a->i, b->i));
                    case BinOp::Div: return Value::of_int(checked_div(a->i, b->i));
                    case BinOp::Min: return Value::of_int(std::min(a->i, b->i));
                    case BinOp::Max: return Value::of_int(std::max(a->i, b->i));
                    case BinOp::Lt: return Value::of_bool(a->i < b->i);
                    case BinOp::Le: return Value::of_bool(a->i <= b->i);
                    case BinOp::Gt: return Value::of_bool(a->i > b->i);
                    case BinOp::Ge: return Value::of_bool(a->i >= b->i);
                    case BinOp::Eq: return Value::of_bool(a->type == b->type && a->i == b->i);
                    case BinOp::Ne:
                        return Value::of_bool(!(a->type == b->type && a->i == b->i));
                    case BinOp::And: return Value::of_bool(a->as_bool() && b->as_bool());
                    case BinOp::Or: return Value::of_bool(a->as_bool() || b->as_bool());
                }
            } catch (const EvalError&) {
            }
            return std::nullopt;
        };

        int cap = cfg.relaxed_max_size;

        // singles, size order
        for (int s = 1; s <= cap && s < static_cast<int>(target.by_size.size()); ++s) {
            for (int idx : target.by_size[static_cast<std::size_t>(s)]) {
                auto res = try_value_fn(
                    [&](std::size_t ex) { return target.vals[static_cast<std::size_t>(idx)][ex]; },
                    [&] { return target.entries[static_cast<std::size_t>(idx)]; });
                if (res) return res;
                if (budget_hit) return std::nullopt;
            }
        }

        static const BinOp int_ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul,
                                        BinOp::Div, BinOp::Min, BinOp::Max};
        static const BinOp cmp_ops[] = {BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge,
                                        BinOp::Eq, BinOp::Ne};
        static const BinOp bool_ops[] = {BinOp::And, BinOp::Or};

        for (int total = 3; total <= cap; ++total) {
            // binary compositions: 1 + sa + sb == total
            for (int sa = 1; sa <= total - 2; ++sa) {
                int sb = total - 1 - sa;
                if (sb < 1) continue;
                auto in_range = [](const Pool& p, int s) {
                    return s < static_cast<int>(p.by_size.size());
                };
                if (type == Type::Int) {
                    if (!in_range(p1_int, sa) || !in_range(p1_int, sb)) continue;
                    for (BinOp op : int_ops) {
                        for (int ia : p1_int.by_size[static_cast<std::size_t>(sa)]) {
                            for (int ib : p1_int.by_size[static_cast<std::size_t>(sb)]) {
                                auto res = try_value_fn(
                                    [&](std::size_t ex) {
                                        return bin_val(op,
                                                       p1_int.vals[static_cast<std::size_t>(ia)][ex],
                                                       p1_int.vals[static_cast<std::size_t>(ib)][ex]);
                                    },
                                    [&] {
                                        return binary(op,
                                                      p1_int.entries[static_cast<std::size_t>(ia)],
                                                      p1_int.entries[static_cast<std::size_t>(ib)]);
                                    });
                                if (res) return res;
                                if (budget_hit) return std::nullopt;
                            }
                        }
                    }
                } else {
                    if (in_range(p1_int, sa) && in_range(p1_int, sb)) {
                        for (BinOp op : cmp_ops) {
                            for (int ia : p1_int.by_size[static_cast<std::size_t>(sa)]) {
                                for (int ib : p1_int.by_size[static_cast<std::size_t>(sb)]) {
                                    auto res = try_value_fn(
                                        [&](std::size_t ex) {
                                            return bin_val(
                                                op, p1_int.vals[static_cast<std::size_t>(ia)][ex],
                                                p1_int.vals[static_cast<std::size_t>(ib)][ex]);
                                        },
                                        [&] {
                                            return binary(
                                                op, p1_int.entries[static_cast<std::size_t>(ia)],
                                                p1_int.entries[static_cast<std::size_t>(ib)]);
                                        });
                                    if (res) return res;
                                    if (budget_hit) return std::nullopt;
                                }
                            }
                        }
                    }
                    if (in_range(p1_bool, sa) && in_range(p1_bool, sb)) {
                        for (BinOp op : bool_ops) {
                            for (int ia : p1_bool.by_size[static_cast<std::size_t>(sa)]) {
                                for (int ib : p1_bool.by_size[static_cast<std::size_t>(sb)]) {
                                    auto res = try_value_fn(
                                        [&](std::size_t ex) {
                                            return bin_val(
                                                op, p1_bool.vals[static_cast<std::size_t>(ia)][ex],
                                                p1_bool.vals[static_cast<std::size_t>(ib)][ex]);
                                        },
                                        [&] {
                                            return binary(
                                                op, p1_bool.entries[static_cast<std::size_t>(ia)],
                                                p1_bool.entries[static_cast<std::size_t>(ib)]);
                                        });
                                    if (res) return res;
                                    if (budget_hit) return std::nullopt;
                                }
                            }
                        }
                    }
                }
            }
            // conditionals: 1 + sc + st + se == total
            Pool& branch = target;
            for (int sc = 1; sc <= total - 3; ++sc) {
                if (sc >= static_cast<int>(p1_bool.by_size.size())) continue;
                for (int st = 1; st <= total - 2 - sc; ++st) {
                    int se = total - 1 - sc - st;
                    if (se < 1) continue;
                    if (st >= static_cast<int>(branch.by_size.size()) ||
                        se >= static_cast<int>(branch.by_size.size()))
                        continue;
                    for (int ic : p1_bool.by_size[static_cast<std::size_t>(sc)]) {
                        for (int it : branch.by_size[static_cast<std::size_t>(st)]) {
                            for (int ie : branch.by_size[static_cast<std::size_t>(se)]) {
                                auto res = try_value_fn(
                                    [&](std::size_t ex) -> MaybeValue {
                                        auto c = p1_bool.vals[static_cast<std::size_t>(ic)][ex];
                                        if (!c) return std::nullopt;
                                        return c->as_bool()
                                                   ? branch.vals[static_cast<std::size_t>(it)][ex]
                                                   : branch.vals[static_cast<std::size_t>(ie)][ex];
                                    },
                                    [&] {
                                        return cond(p1_bool.entries[static_cast<std::size_t>(ic)],
                                                    branch.entries[static_cast<std::size_t>(it)],
                                                    branch.entries[static_cast<std::size_t>(ie)]);
                                    });
                                if (res) return res;
                                if (budget_hit) return std::nullopt;
                            }
                        }
                    }
                }
            }
        }
        return std::nullopt;
    }
};

bool system_nonlinear(const RecurrenceSystem& sys) {
    std::function<bool(const Expr&)> has_mul = [&](const Expr& e) {
        if (e->kind == ExprKind::Binary && (e->op == BinOp::Mul || e->op == BinOp::Div))
            return true;
        for (const auto& c : e->children)
            if (has_mul(c)) return true;
        return false;
    };
    for (const auto& [_, rhs] : sys.equations)
        if (has_mul(rhs)) return true;
    return false;
}

} // namespace

SynthOutcome synthesize_join(const RecurrenceSystem& sys, const SynthConfig& cfg,
                             const std::map<std::string, NormalForm>* hints) {
    SynthOutcome out;
    Sketch sketch = make_sketch(sys);

    std::vector<VarInfo> vars;
    for (const auto& v : sys.state_vars) vars.push_back({v, sys.state_type(v)});
    PoolSet pools = build_pools(vars, system_nonlinear(sys), cfg.max_hole_depth);

    std::vector<JoinExample> examples = build_filter_examples(sys, cfg);
    pools.eval_examples(examples);
    PairTable pairs = build_pairs(sys, cfg);

    for (std::size_t slot = 0; slot < sys.state_vars.size(); ++slot) {
        const std::string& v = sys.state_vars[slot];
        VarSearch search{sys, cfg, pools, examples, pairs, slot, v};
        VarSynthInfo info;
        info.var = v;

        std::optional<Expr> found = search.run_sketch(sketch.equations[slot]);
        info.stage = "sketch";
        if (!found && !search.budget_hit && hints && hints->count(v)) {
            SketchEquation hint = hint_equation(sys, v, hints->at(v));
            found = search.run_sketch(hint);
            info.stage = "hint";
        }
        if (!found && !search.budget_hit) {
            found = search.run_relaxed(sys.state_type(v));
            info.stage = "relaxed";
        }
        info.candidates = search.tried;
        info.found = found.has_value();
        out.per_var.push_back(info);
        if (!found) {
            out.ok = false;
            out.failed_var = v;
            out.budget_exhausted = search.budget_hit;
            return out;
        }
        out.join.equations.emplace_back(v, *found);
    }
    out.ok = true;
    out.join.verified_K = cfg.K;
    out.join.domain_lo = cfg.domain_lo;
    out.join.domain_hi = cfg.domain_hi;
    return out;
}

} // namespace homsynth
