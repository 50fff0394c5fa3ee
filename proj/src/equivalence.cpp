#include "homsynth/equivalence.hpp"

#include <random>
#include <set>

#include "homsynth/errors.hpp"

namespace homsynth {

namespace {

struct SeqUse {
    bool uses_seq = false;
    std::string name;
};

void find_seq(const Expr& e, SeqUse& use) {
    if (e->kind == ExprKind::SeqAccess || e->kind == ExprKind::SeqLength) {
        use.uses_seq = true;
        use.name = e->name;
    }
    for (const auto& c : e->children) find_seq(c, use);
}

// Evaluate both sides; equal when values match or both raise.
bool agree(const Expr& e1, const Expr& e2, const Env& env) {
    std::optional<Value> v1, v2;
    try {
        v1 = eval(e1, env);
    } catch (const EvalError&) {
    }
    try {
        v2 = eval(e2, env);
    } catch (const EvalError&) {
    }
    if (!v1 && !v2) return true;
    if (!v1 || !v2) return false;
    return *v1 == *v2;
}

} // namespace

bool equivalent_typed(const Expr& e1, const Expr& e2,
                      std::int64_t domain_lo, std::int64_t domain_hi,
                      const std::vector<std::pair<std::string, Type>>& vars,
                      int trials, std::uint64_t seed,
                      int max_seq_len,
                      EquivWitness* witness) {
    SeqUse use;
    find_seq(e1, use);
    find_seq(e2, use);

    const std::int64_t width = domain_hi - domain_lo + 1;
    // exhaustive when the grid is small and no sequence is involved
    double grid = 1;
    for (const auto& [_, t] : vars) grid *= (t == Type::Bool ? 2.0 : static_cast<double>(width));
    if (!use.uses_seq && grid <= 20000.0) {
        std::vector<std::int64_t> idx(vars.size(), 0);
        for (;;) {
            Env env;
            for (std::size_t i = 0; i < vars.size(); ++i) {
                if (vars[i].second == Type::Bool)
                    env.vars[vars[i].first] = Value::of_bool(idx[i] != 0);
                else
                    env.vars[vars[i].first] = Value::of_int(domain_lo + idx[i]);
            }
            if (!agree(e1, e2, env)) {
                if (witness) {
                    witness->env = env;
                    witness->note = "exhaustive grid";
                }
                return false;
            }
            std::size_t j = 0;
            for (; j < vars.size(); ++j) {
                std::int64_t lim = vars[j].second == Type::Bool ? 2 : width;
                if (++idx[j] < lim) break;
                idx[j] = 0;
            }
            if (j == vars.size()) break;
            if (vars.empty()) break;
        }
        return true;
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> dist(domain_lo, domain_hi);
    std::uniform_int_distribution<int> len_dist(0, max_seq_len);
    std::uniform_int_distribution<int> bool_dist(0, 1);
    std::vector<std::int64_t> seq;
    for (int t = 0; t < trials; ++t) {
        Env env;
        for (const auto& [name, type] : vars) {
            if (type == Type::Bool)
                env.vars[name] = Value::of_bool(bool_dist(rng) != 0);
            else
                env.vars[name] = Value::of_int(dist(rng));
        }
        if (use.uses_seq) {
            seq.clear();
            int len = len_dist(rng);
            for (int i = 0; i < len; ++i) seq.push_back(dist(rng));
            env.seq = &seq;
            env.seq_name = use.name;
        }
        if (!agree(e1, e2, env)) {
            if (witness) {
                witness->env = env;
                witness->note = "random trial " + std::to_string(t);
            }
            return false;
        }
    }
    return true;
}

bool equivalent(const Expr& e1, const Expr& e2,
                std::int64_t domain_lo, std::int64_t domain_hi,
                const std::vector<std::string>& vars,
                int trials, std::uint64_t seed,
                int max_seq_len,
                EquivWitness* witness) {
    std::vector<std::pair<std::string, Type>> typed;
    typed.reserve(vars.size());
    for (const auto& v : vars) typed.emplace_back(v, Type::Int);
    return equivalent_typed(e1, e2, domain_lo, domain_hi, typed, trials, seed, max_seq_len,
                            witness);
}

} // namespace homsynth
