#include "homsynth/discover.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "homsynth/errors.hpp"
#include "homsynth/seqs.hpp"

namespace homsynth {

std::map<std::string, std::string> sigma_symbols(const RecurrenceSystem& sys) {
    std::map<std::string, std::string> sym_to_var;
    for (const auto& v : sys.state_vars) {
        std::string sym = v + "_0";
        while (sys.is_state(sym) || sys.input_vars.count(sym) || sym_to_var.count(sym))
            sym += "_";
        sym_to_var[sym] = v;
    }
    return sym_to_var;
}

Expr unfold(const RecurrenceSystem& sys, const std::string& target, int k) {
    if (k < 1) throw Error("unfold requires k >= 1");
    auto sym_to_var = sigma_symbols(sys);
    std::map<std::string, std::string> var_to_sym;
    for (const auto& [s, v] : sym_to_var) var_to_sym[v] = s;

    std::map<std::string, Expr> cur;
    for (const auto& v : sys.state_vars) cur[v] = var(var_to_sym.at(v));
    for (int j = 1; j <= k; ++j) {
        Expr shifted_iter = binary(BinOp::Add, var(sys.iterator), int_const(j));
        std::map<std::string, Expr> next;
        for (const auto& [v, rhs] : sys.equations) {
            next[v] = substitute(rhs, [&](const std::string& n) -> Expr {
                if (n == sys.iterator) return shifted_iter;
                auto it = cur.find(n);
                return it == cur.end() ? nullptr : it->second;
            });
        }
        cur = std::move(next);
    }
    auto it = cur.find(target);
    if (it == cur.end()) throw Error("unfold: unknown state variable " + target);
    return it->second;
}

namespace {

// ---------------------------------------------------------------------------
// chunk-function evaluation

using Chunk = std::vector<std::int64_t>;
using MaybeValue = std::optional<Value>;

struct ChunkTable {
    std::vector<Chunk> chunks;                           // all of one length k
    // traj[c][j] = state after j steps of the extended system
    std::vector<std::vector<std::vector<MaybeValue>>> traj;
    std::vector<std::string> slots;                      // state var order
    int k = 0;

    int slot_of(const std::string& name) const {
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (slots[i] == name) return static_cast<int>(i);
        return -1;
    }
};

std::vector<Chunk> make_chunks(int k, const SynthConfig& cfg, std::size_t cap) {
    return enumerate_sequences(cfg.domain_lo, cfg.domain_hi, k, k, cap, cfg.seed + 77);
}

ChunkTable build_table(const RecurrenceSystem& ext, int k, const SynthConfig& cfg) {
    ChunkTable tab;
    tab.k = k;
    tab.chunks = make_chunks(k, cfg, 600);
    tab.slots = ext.state_vars;
    tab.traj.resize(tab.chunks.size());
    for (std::size_t c = 0; c < tab.chunks.size(); ++c) {
        auto& rows = tab.traj[c];
        rows.assign(static_cast<std::size_t>(k) + 1, {});
        try {
            StateVector st = initial_state(ext);
            rows[0].assign(st.values.begin(), st.values.end());
            Env env;
            env.seq = &tab.chunks[c];
            env.seq_name = ext.sequence;
            for (int j = 1; j <= k; ++j) {
                for (std::size_t t = 0; t < st.names.size(); ++t)
                    env.vars[st.names[t]] = st.values[t];
                env.vars[ext.iterator] = Value::of_int(j - 1);
                std::vector<Value> next;
                next.reserve(ext.equations.size());
                for (const auto& [_, rhs] : ext.equations) next.push_back(eval(rhs, env));
                st.values = std::move(next);
                rows[static_cast<std::size_t>(j)].assign(st.values.begin(), st.values.end());
            }
        } catch (const EvalError&) {
            // poison the remaining rows for this chunk
            for (auto& row : tab.traj[c])
                if (row.empty()) row.assign(tab.slots.size(), std::nullopt);
        }
        for (auto& row : tab.traj[c])
            if (row.empty()) row.assign(tab.slots.size(), std::nullopt);
    }
    return tab;
}

// Remainder value on each chunk: s[i + j] reads chunk[j - 1] (iterator -1).
std::vector<MaybeValue> remainder_values(const Expr& r, const RecurrenceSystem& sys,
                                         const std::vector<Chunk>& chunks) {
    std::vector<MaybeValue> out;
    out.reserve(chunks.size());
    for (const auto& c : chunks) {
        Env env;
        env.seq = &c;
        env.seq_name = sys.sequence;
        env.vars[sys.iterator] = Value::of_int(-1);
        try {
            out.push_back(eval(r, env));
        } catch (const EvalError&) {
            out.push_back(std::nullopt);
        }
    }
    return out;
}

bool same_values(const std::vector<MaybeValue>& a, const std::vector<MaybeValue>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].has_value() != b[i].has_value()) return false;
        if (a[i] && *a[i] != *b[i]) return false;
    }
    return true;
}

std::vector<MaybeValue> provider_values(const ChunkTable& tab, int slot, int j) {
    std::vector<MaybeValue> out(tab.chunks.size());
    for (std::size_t c = 0; c < tab.chunks.size(); ++c)
        out[c] = tab.traj[c][static_cast<std::size_t>(j)][static_cast<std::size_t>(slot)];
    return out;
}

std::vector<MaybeValue> apply_pred(const std::vector<MaybeValue>& vals, BinOp op,
                                   std::int64_t rhs) {
    std::vector<MaybeValue> out(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!vals[i]) continue;
        bool b = op == BinOp::Eq ? (vals[i]->i == rhs) : (vals[i]->i != rhs);
        out[i] = Value::of_bool(b);
    }
    return out;
}

std::vector<MaybeValue> apply_bin(BinOp op, const std::vector<MaybeValue>& a,
                                  const std::vector<MaybeValue>& b) {
    std::vector<MaybeValue> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i] || !b[i]) continue;
        try {
            switch (op) {
                case BinOp::Add: out[i] = Value::of_int(checked_add(a[i]->i, b[i]->i)); break;
                case BinOp::Sub: out[i] = Value::of_int(checked_sub(a[i]->i, b[i]->i)); break;
                case BinOp::Mul: out[i] = Value::of_int(checked_mul(a[i]->i, b[i]->i)); break;
                case BinOp::Min: out[i] = Value::of_int(std::min(a[i]->i, b[i]->i)); break;
                case BinOp::Max: out[i] = Value::of_int(std::max(a[i]->i, b[i]->i)); break;
                case BinOp::And: out[i] = Value::of_bool(a[i]->as_bool() && b[i]->as_bool()); break;
                case BinOp::Or: out[i] = Value::of_bool(a[i]->as_bool() || b[i]->as_bool()); break;
                default: break;
            }
        } catch (const EvalError&) {
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// remainder classification

bool iter_outside_seq_index(const Expr& e, const std::string& iter) {
    if (e->kind == ExprKind::Var) return e->name == iter;
    if (e->kind == ExprKind::SeqAccess) return false;  // index positions are fine
    for (const auto& c : e->children)
        if (iter_outside_seq_index(c, iter)) return true;
    return false;
}

bool skip_remainder(const Remainder& r, const RecurrenceSystem& sys) {
    if (r.identity) return true;
    if (iter_outside_seq_index(r.expr, sys.iterator)) return true;  // split-position info
    if (!mentions_seq(r.expr)) {
        if (is_comparison(r.connector) || !is_ac(r.connector)) return true;
        if (op_has_identity(r.connector) && struct_equal(r.expr, op_identity(r.connector)))
            return true;
    }
    return false;
}

Type remainder_type(const Expr& e) {
    return infer_type(e, [](const std::string&) { return Type::Int; });
}

// constants mined from the remainder, used by mint templates and predicates
std::vector<std::int64_t> mined_consts(const Expr& e) {
    std::vector<std::int64_t> out;
    std::function<void(const Expr&)> go = [&](const Expr& x) {
        if (x->kind == ExprKind::IntConst &&
            std::find(out.begin(), out.end(), x->int_value) == out.end())
            out.push_back(x->int_value);
        for (const auto& c : x->children) go(c);
    };
    go(e);
    if (out.size() > 6) out.resize(6);
    return out;
}

// maximal subtrees reading a single sequence position, reindexed to s[i]
namespace mined_detail {

// collects the distinct index expressions of sequence accesses in x
void indices_of(const Expr& x, std::vector<Expr>& idx) {
    if (x->kind == ExprKind::SeqAccess) {
        bool dup = false;
        for (const auto& e : idx)
            if (struct_equal(e, x->child(0))) dup = true;
        if (!dup) idx.push_back(x->child(0));
        return;
    }
    for (const auto& c : x->children) indices_of(c, idx);
}

Expr reindex(const Expr& y, const std::string& iter) {
    if (y->kind == ExprKind::SeqAccess) return seq_access(y->name, var(iter));
    if (y->children.empty()) return y;
    std::vector<Expr> kids;
    kids.reserve(y->children.size());
    for (const auto& c : y->children) kids.push_back(reindex(c, iter));
    switch (y->kind) {
        case ExprKind::Neg: return neg(kids[0]);
        case ExprKind::Not: return lnot(kids[0]);
        case ExprKind::Binary: return binary(y->op, kids[0], kids[1]);
        case ExprKind::Cond: return cond(kids[0], kids[1], kids[2]);
        default: return y;
    }
}

} // namespace mined_detail

std::vector<Expr> mined_terms(const Expr& r, const RecurrenceSystem& sys) {
    std::vector<Expr> out;
    std::function<void(const Expr&)> go = [&](const Expr& x) {
        std::vector<Expr> idx;
        mined_detail::indices_of(x, idx);
        if (idx.size() == 1 && !iter_outside_seq_index(x, sys.iterator)) {
            Expr term = mined_detail::reindex(x, sys.iterator);
            bool dup = false;
            for (const auto& t : out)
                if (struct_equal(t, term)) dup = true;
            if (!dup) out.push_back(term);
            return;  // maximal: no need to descend
        }
        for (const auto& c : x->children) go(c);
    };
    go(r);
    if (out.size() > 12) out.resize(12);
    return out;
}

// ---------------------------------------------------------------------------
// coverage and minting

struct Predicate {
    BinOp op;  // Eq or Ne
    std::int64_t rhs;
};

std::vector<Predicate> predicates_for(const std::vector<std::int64_t>& consts) {
    std::vector<Predicate> p = {{BinOp::Eq, 1}, {BinOp::Eq, 0}, {BinOp::Ne, 0}};
    for (auto c : consts) {
        if (c == 0 || c == 1) continue;
        p.push_back({BinOp::Eq, c});
    }
    return p;
}

struct CoverResult {
    bool covered = false;
    std::set<std::string> keys;
};

struct ProviderInfo {
    std::string name;
    int slot;
    Type type;
};

CoverResult try_full_cover(const std::vector<MaybeValue>& rvals, Type rtype,
                           const std::vector<ProviderInfo>& providers, const ChunkTable& tab,
                           const std::vector<std::int64_t>& consts,
                           std::set<std::string>& active) {
    CoverResult res;
    for (const auto& p : providers) {
        auto pv = provider_values(tab, p.slot, tab.k);
        if (p.type == rtype && same_values(pv, rvals)) {
            res.covered = true;
            res.keys.insert(p.name);
            active.insert(p.name);
            return res;
        }
        if (rtype == Type::Bool && p.type == Type::Int) {
            for (const auto& pred : predicates_for(consts)) {
                if (same_values(apply_pred(pv, pred.op, pred.rhs), rvals)) {
                    res.covered = true;
                    res.keys.insert(p.name);
                    active.insert(p.name);
                    return res;
                }
            }
        }
    }
    // depth-1 compositions of two providers at full length
    static const BinOp int_ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Min, BinOp::Max};
    static const BinOp bool_ops[] = {BinOp::And, BinOp::Or};
    for (const auto& p : providers) {
        for (const auto& q : providers) {
            if (p.name == q.name) continue;
            auto pv = provider_values(tab, p.slot, tab.k);
            auto qv = provider_values(tab, q.slot, tab.k);
            if (rtype == Type::Int && p.type == Type::Int && q.type == Type::Int) {
                for (BinOp op : int_ops) {
                    if (same_values(apply_bin(op, pv, qv), rvals)) {
                        res.covered = true;
                        res.keys.insert(p.name);
                        res.keys.insert(q.name);
                        return res;
                    }
                }
            }
            if (rtype == Type::Bool && p.type == Type::Bool && q.type == Type::Bool) {
                for (BinOp op : bool_ops) {
                    if (same_values(apply_bin(op, pv, qv), rvals)) {
                        res.covered = true;
                        res.keys.insert(p.name);
                        res.keys.insert(q.name);
                        return res;
                    }
                }
            }
        }
    }
    // negations
    for (const auto& p : providers) {
        auto pv = provider_values(tab, p.slot, tab.k);
        if (rtype == Type::Bool && p.type == Type::Bool) {
            std::vector<MaybeValue> nv(pv.size());
            for (std::size_t i = 0; i < pv.size(); ++i)
                if (pv[i]) nv[i] = Value::of_bool(!pv[i]->as_bool());
            if (same_values(nv, rvals)) {
                res.covered = true;
                res.keys.insert(p.name);
                return res;
            }
        }
        if (rtype == Type::Int && p.type == Type::Int) {
            std::vector<MaybeValue> nv(pv.size());
            for (std::size_t i = 0; i < pv.size(); ++i) {
                if (!pv[i]) continue;
                try {
                    nv[i] = Value::of_int(checked_sub(0, pv[i]->i));
                } catch (const EvalError&) {
                }
            }
            if (same_values(nv, rvals)) {
                res.covered = true;
                res.keys.insert(p.name);
                return res;
            }
        }
    }
    return res;
}

CoverResult try_prefix_cover(const std::vector<MaybeValue>& rvals, Type rtype,
                             const std::vector<ProviderInfo>& providers, const ChunkTable& tab,
                             const std::vector<std::int64_t>& consts,
                             const std::set<std::string>& active) {
    CoverResult res;
    for (const auto& p : providers) {
        if (!active.count(p.name)) continue;
        for (int j = tab.k - 1; j >= 1; --j) {
            auto pv = provider_values(tab, p.slot, j);
            if (p.type == rtype && same_values(pv, rvals)) {
                res.covered = true;
                res.keys.insert(p.name);
                return res;
            }
            if (rtype == Type::Bool && p.type == Type::Int) {
                for (const auto& pred : predicates_for(consts)) {
                    if (same_values(apply_pred(pv, pred.op, pred.rhs), rvals)) {
                        res.covered = true;
                        res.keys.insert(p.name);
                        return res;
                    }
                }
            }
        }
    }
    return res;
}

struct MintCandidate {
    Expr update;  // over {self, inputs, carriers}
    Expr init;
};

std::optional<AuxAccumulator> mint_accumulator(const Expr& r, Type rtype,
                                               const RecurrenceSystem& sys,
                                               const std::vector<AuxAccumulator>& aux,
                                               const std::vector<Chunk>& chunks,
                                               const std::vector<MaybeValue>& rvals,
                                               const std::vector<std::int64_t>& consts,
                                               const SynthConfig& cfg) {
    std::string name = "aux" + std::to_string(aux.size());
    while (sys.is_state(name) || sys.input_vars.count(name)) name += "x";
    Expr self = var(name);
    Expr elem = seq_access(sys.sequence, var(sys.iterator));

    // term pool
    std::vector<Expr> pool;
    pool.push_back(elem);
    pool.push_back(int_const(1));
    for (auto c : mined_consts(r))
        if (c != 1) pool.push_back(int_const(c));
    for (const auto& t : mined_terms(r, sys)) {
        bool dup = false;
        for (const auto& u : pool)
            if (struct_equal(u, t)) dup = true;
        if (!dup) pool.push_back(t);
    }

    auto term_type = [](const Expr& t) {
        return infer_type(t, [](const std::string&) { return Type::Int; });
    };

    std::vector<MintCandidate> cands;
    static const BinOp accum_ops[] = {BinOp::Add, BinOp::Mul, BinOp::Min,
                                      BinOp::Max, BinOp::And, BinOp::Or};
    for (BinOp op : accum_ops) {
        bool bool_op = (op == BinOp::And || op == BinOp::Or);
        for (const auto& t : pool) {
            if ((term_type(t) == Type::Bool) != bool_op) continue;
            cands.push_back({binary(op, self, t), op_identity(op)});
        }
    }
    for (const auto& t : pool) {
        // overwrite: the last element (or last reading of it)
        if (term_type(t) == Type::Int)
            cands.push_back({t, max_int()});
        else
            cands.push_back({t, bool_const(false)});
    }
    for (const auto& t : pool) {
        if (term_type(t) != Type::Int) continue;
        // hold-first
        cands.push_back({cond(binary(BinOp::Eq, self, max_int()), t, self), max_int()});
    }
    // carried accumulators: a = op(a, carrier + t)
    std::vector<std::string> carriers;
    for (const auto& a : aux) carriers.push_back(a.name);
    for (std::size_t i = 0; i < sys.original_count; ++i)
        carriers.push_back(sys.state_vars[i]);
    for (const auto& c : carriers) {
        Type ct = Type::Int;
        {
            auto it = sys.init.find(c);
            if (it != sys.init.end()) ct = infer_type_default_int(it->second);
            for (const auto& a : aux)
                if (a.name == c) ct = infer_type_default_int(a.init);
        }
        if (ct != Type::Int) continue;
        for (BinOp op : {BinOp::Max, BinOp::Min}) {
            for (const auto& t : pool) {
                if (term_type(t) != Type::Int) continue;
                cands.push_back(
                    {binary(op, self, binary(BinOp::Add, var(c), t)), op_identity(op)});
            }
        }
    }

    auto preds = predicates_for(consts);
    for (const auto& cand : cands) {
        AuxAccumulator trial{name, cand.init, cand.update, r};
        Type cand_type;
        try {
            cand_type = infer_type(cand.update, [&](const std::string& n) -> Type {
                if (n == name) return infer_type_default_int(cand.init);
                for (const auto& a : aux)
                    if (a.name == n) return infer_type_default_int(a.init);
                auto it = sys.init.find(n);
                if (it != sys.init.end()) return infer_type_default_int(it->second);
                return Type::Int;
            });
        } catch (const TypeError&) {
            continue;
        }
        std::vector<AuxAccumulator> all = aux;
        all.push_back(trial);
        RecurrenceSystem ext;
        try {
            ext = extend_system(sys, all);
        } catch (const NameClash&) {
            continue;
        }
        int slot = -1;
        for (std::size_t i = 0; i < ext.state_vars.size(); ++i)
            if (ext.state_vars[i] == name) slot = static_cast<int>(i);
        // evaluate candidate on every chunk
        std::vector<MaybeValue> vals(chunks.size());
        for (std::size_t c = 0; c < chunks.size(); ++c) {
            try {
                StateVector st = run_sequential(ext, chunks[c]);
                vals[c] = st.values[static_cast<std::size_t>(slot)];
            } catch (const EvalError&) {
            }
        }
        if (cand_type == rtype && same_values(vals, rvals)) return trial;
        if (rtype == Type::Bool && cand_type == Type::Int) {
            for (const auto& pred : preds) {
                if (same_values(apply_pred(vals, pred.op, pred.rhs), rvals)) return trial;
            }
        }
        (void)cfg;
    }
    return std::nullopt;
}

} // namespace

bool solve_equation(const RecurrenceSystem& sys, std::size_t eq_index, const RuleSet& rules,
                    const SynthConfig& cfg, std::vector<AuxAccumulator>& aux,
                    SolveReport& report) {
    const std::string& target = sys.equations[eq_index].first;
    auto sigma = sigma_symbols(sys);

    std::set<std::string> cumulative;
    std::set<std::string> minted_here;

    for (int k = 1; k <= cfg.max_unfold; ++k) {
        cfg.check_deadline("auxiliary discovery");
        Expr tau = unfold(sys, target, k);
        auto nf = normalize(tau, sys, sigma, rules, cfg.cost_bound, cfg.rewrite_budget);
        if (!nf) {
            report.failure = SolveFailure::NormalizeNull;
            report.detail = "no decomposition for " + target + " at k=" + std::to_string(k);
            return false;
        }
        report.last_nf = nf;

        // deduplicate remainders
        std::vector<Remainder> rems;
        for (const auto& r : collect(*nf)) {
            if (skip_remainder(r, sys)) continue;
            bool dup = false;
            for (const auto& u : rems)
                if (struct_equal(u.expr, r.expr)) dup = true;
            if (!dup) rems.push_back(r);
        }

        std::set<std::string> iteration_keys;
        bool minted = false;

        if (!rems.empty()) {
            RecurrenceSystem ext = extend_system(sys, aux);
            ChunkTable tab = build_table(ext, k, cfg);
            std::vector<ProviderInfo> providers;
            for (std::size_t i = 0; i < ext.state_vars.size(); ++i)
                providers.push_back({ext.state_vars[i], static_cast<int>(i),
                                     ext.state_type(ext.state_vars[i])});

            struct Pending {
                const Remainder* rem;
                std::vector<MaybeValue> vals;
                Type type;
                std::vector<std::int64_t> consts;
            };
            std::vector<Pending> pending;
            std::set<std::string> active;
            for (const auto& r : rems) {
                Pending p;
                p.rem = &r;
                try {
                    p.type = remainder_type(r.expr);
                } catch (const TypeError&) {
                    report.failure = SolveFailure::UpdateInference;
                    report.detail = "untypeable remainder " + to_string(r.expr);
                    return false;
                }
                p.vals = remainder_values(r.expr, sys, tab.chunks);
                p.consts = mined_consts(r.expr);
                auto full = try_full_cover(p.vals, p.type, providers, tab, p.consts, active);
                if (full.covered) {
                    iteration_keys.insert(full.keys.begin(), full.keys.end());
                } else {
                    pending.push_back(std::move(p));
                }
            }
            for (const auto& p : pending) {
                // a fresh mint earlier in this loop may cover later remainders
                auto full = try_full_cover(p.vals, p.type, providers, tab, p.consts, active);
                if (full.covered) {
                    iteration_keys.insert(full.keys.begin(), full.keys.end());
                    continue;
                }
                auto pre = try_prefix_cover(p.vals, p.type, providers, tab, p.consts, active);
                if (pre.covered) {
                    iteration_keys.insert(pre.keys.begin(), pre.keys.end());
                    continue;
                }
                auto fresh =
                    mint_accumulator(p.rem->expr, p.type, sys, aux, tab.chunks, p.vals,
                                     p.consts, cfg);
                if (!fresh) {
                    report.failure = SolveFailure::UpdateInference;
                    report.detail = "no accumulator update found for remainder " +
                                    to_string(p.rem->expr) + " of " + target;
                    return false;
                }
                aux.push_back(*fresh);
                minted_here.insert(fresh->name);
                iteration_keys.insert(fresh->name);
                minted = true;
                // rebuild providers for the rest of this iteration
                ext = extend_system(sys, aux);
                tab = build_table(ext, k, cfg);
                providers.clear();
                for (std::size_t i = 0; i < ext.state_vars.size(); ++i)
                    providers.push_back({ext.state_vars[i], static_cast<int>(i),
                                         ext.state_type(ext.state_vars[i])});
            }
        }

        bool fixpoint = !minted;
        if (fixpoint) {
            for (const auto& key : iteration_keys)
                if (!cumulative.count(key)) fixpoint = false;
        }
        if (fixpoint) {
            report.fixpoint_k = k;
            // prune accumulators minted here that the settled iteration no
            // longer needs and nothing depends on
            for (auto it = aux.begin(); it != aux.end();) {
                if (!minted_here.count(it->name) || iteration_keys.count(it->name)) {
                    ++it;
                    continue;
                }
                bool referenced = false;
                for (const auto& other : aux)
                    if (other.name != it->name && mentions_var(other.update, it->name))
                        referenced = true;
                if (referenced) {
                    ++it;
                    continue;
                }
                it = aux.erase(it);
            }
            return true;
        }
        cumulative.insert(iteration_keys.begin(), iteration_keys.end());
    }
    report.failure = SolveFailure::MaxUnfoldExceeded;
    report.detail = "no fixpoint for " + target + " within " + std::to_string(cfg.max_unfold) +
                    " unfoldings";
    return false;
}

std::vector<AuxAccumulator> remove_redundancies(const std::vector<AuxAccumulator>& aux,
                                                const RecurrenceSystem& sys,
                                                const SynthConfig& cfg) {
    std::vector<AuxAccumulator> kept = aux;
    auto seqs = enumerate_sequences(cfg.domain_lo, cfg.domain_hi, 0,
                                    std::min(cfg.K + 1, 4), 800, cfg.seed + 5);

    for (std::size_t i = 0; i < kept.size();) {
        const std::string name = kept[i].name;
        bool referenced = false;
        for (std::size_t j = 0; j < kept.size(); ++j)
            if (j != i && mentions_var(kept[j].update, name)) referenced = true;
        if (referenced) {
            ++i;
            continue;
        }
        RecurrenceSystem ext = extend_system(sys, kept);
        std::vector<StateVector> finals;
        finals.reserve(seqs.size());
        bool eval_ok = true;
        for (const auto& s : seqs) {
            try {
                finals.push_back(run_sequential(ext, s));
            } catch (const EvalError&) {
                eval_ok = false;
                break;
            }
        }
        if (!eval_ok) {
            ++i;
            continue;
        }
        // providers: original states and the other kept accumulators
        std::vector<std::string> others;
        for (std::size_t t = 0; t < sys.original_count; ++t) others.push_back(sys.state_vars[t]);
        for (const auto& a : kept)
            if (a.name != name) others.push_back(a.name);

        auto value_of = [&](const StateVector& st, const std::string& v) { return st.get(v); };
        auto matches = [&](const std::function<std::optional<Value>(const StateVector&)>& f) {
            for (const auto& st : finals) {
                auto got = f(st);
                if (!got || *got != st.get(name)) return false;
            }
            return true;
        };

        bool redundant = false;
        for (const auto& p : others) {
            if (matches([&](const StateVector& st) -> std::optional<Value> {
                    return value_of(st, p);
                })) {
                redundant = true;
                break;
            }
            if (matches([&](const StateVector& st) -> std::optional<Value> {
                    Value v = value_of(st, p);
                    if (v.type != Type::Int) return std::nullopt;
                    try {
                        return Value::of_int(checked_sub(0, v.i));
                    } catch (const EvalError&) {
                        return std::nullopt;
                    }
                })) {
                redundant = true;
                break;
            }
            if (redundant) break;
        }
        if (!redundant) {
            static const BinOp int_ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Min,
                                            BinOp::Max};
            static const BinOp bool_ops[] = {BinOp::And, BinOp::Or};
            for (const auto& p : others) {
                for (const auto& q : others) {
                    if (redundant) break;
                    if (p == q) continue;
                    for (BinOp op : int_ops) {
                        if (matches([&](const StateVector& st) -> std::optional<Value> {
                                Value a = value_of(st, p), b = value_of(st, q);
                                if (a.type != Type::Int || b.type != Type::Int)
                                    return std::nullopt;
                                try {
                                    switch (op) {
                                        case BinOp::Add: return Value::of_int(checked_add(a.i, b.i));
                                        case BinOp::Sub: return Value::of_int(checked_sub(a.i, b.i));
                                        case BinOp::Mul: return Value::of_int(checked_mul(a.i, b.i));
                                        case BinOp::Min: return Value::of_int(std::min(a.i, b.i));
                                        case BinOp::Max: return Value::of_int(std::max(a.i, b.i));
                                        default: return std::nullopt;
                                    }
                                } catch (const EvalError&) {
                                    return std::nullopt;
                                }
                            })) {
                            redundant = true;
                            break;
                        }
                    }
                    for (BinOp op : bool_ops) {
                        if (redundant) break;
                        if (matches([&](const StateVector& st) -> std::optional<Value> {
                                Value a = value_of(st, p), b = value_of(st, q);
                                if (a.type != Type::Bool || b.type != Type::Bool)
                                    return std::nullopt;
                                return Value::of_bool(op == BinOp::And
                                                          ? (a.as_bool() && b.as_bool())
                                                          : (a.as_bool() || b.as_bool()));
                            })) {
                            redundant = true;
                            break;
                        }
                    }
                }
                if (redundant) break;
            }
        }
        if (redundant)
            kept.erase(kept.begin() + static_cast<long>(i));
        else
            ++i;
    }
    return kept;
}

DiscoveryOutcome extend_discovery(const RecurrenceSystem& sys, const RuleSet& rules,
                                  const SynthConfig& cfg) {
    DiscoveryOutcome out;
    std::vector<AuxAccumulator> aux;
    for (std::size_t i = 0; i < sys.original_count; ++i) {
        SolveReport rep;
        bool ok = solve_equation(sys, i, rules, cfg, aux, rep);
        if (rep.last_nf) out.hints[sys.equations[i].first] = *rep.last_nf;
        if (!ok) {
            out.ok = false;
            out.aux = aux;
            out.failed_equation = sys.equations[i].first;
            out.failure = rep.failure;
            out.detail = rep.detail;
            return out;
        }
    }
    out.aux = remove_redundancies(aux, sys, cfg);
    out.ok = true;
    return out;
}

} // namespace homsynth
