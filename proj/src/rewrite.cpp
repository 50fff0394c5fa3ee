#include "homsynth/rewrite.hpp"

#include <algorithm>
#include <sstream>

#include "homsynth/errors.hpp"
#include "homsynth/eval.hpp"

namespace homsynth {

namespace {

void cost_walk(const Expr& e, int depth, const std::set<std::string>& vars, CostPair& out) {
    if (e->kind == ExprKind::Var && vars.count(e->name)) {
        out.depth = std::max(out.depth, depth);
        out.count += 1;
        return;
    }
    int step = (e->kind == ExprKind::Binary || e->kind == ExprKind::Cond) ? 1 : 0;
    for (const auto& c : e->children) cost_walk(c, depth + step, vars, out);
}

} // namespace

CostPair cost(const Expr& e, const std::set<std::string>& vars) {
    CostPair p;
    cost_walk(e, 0, vars, p);
    return p;
}

// ---------------------------------------------------------------------------
// canonicalization

namespace {

std::optional<Expr> fold_binary(BinOp op, const Expr& a, const Expr& b) {
    if (a->kind == ExprKind::IntConst && b->kind == ExprKind::IntConst) {
        std::int64_t x = a->int_value, y = b->int_value;
        try {
            switch (op) {
                case BinOp::Add: return int_const(checked_add(x, y));
                case BinOp::Sub: return int_const(checked_sub(x, y));
                case BinOp::Mul: return int_const(checked_mul(x, y));
                case BinOp::Div:
                    if (y == 0) return std::nullopt;
                    return int_const(checked_div(x, y));
                case BinOp::Min: return int_const(std::min(x, y));
                case BinOp::Max: return int_const(std::max(x, y));
                case BinOp::Lt: return bool_const(x < y);
                case BinOp::Le: return bool_const(x <= y);
                case BinOp::Eq: return bool_const(x == y);
                case BinOp::Ne: return bool_const(x != y);
                default: return std::nullopt;
            }
        } catch (const EvalError&) {
            return std::nullopt;
        }
    }
    if (a->kind == ExprKind::BoolConst && b->kind == ExprKind::BoolConst) {
        bool x = a->bool_value, y = b->bool_value;
        switch (op) {
            case BinOp::And: return bool_const(x && y);
            case BinOp::Or: return bool_const(x || y);
            case BinOp::Eq: return bool_const(x == y);
            case BinOp::Ne: return bool_const(x != y);
            default: return std::nullopt;
        }
    }
    return std::nullopt;
}

struct Canonicalizer {
    const std::set<std::string>& tracked;

    Expr not_of(const Expr& e) {
        switch (e->kind) {
            case ExprKind::BoolConst:
                return bool_const(!e->bool_value);
            case ExprKind::Not:
                return e->child(0);
            case ExprKind::Binary:
                switch (e->op) {
                    case BinOp::And:
                        return binary(BinOp::Or, not_of(e->child(0)), not_of(e->child(1)));
                    case BinOp::Or:
                        return binary(BinOp::And, not_of(e->child(0)), not_of(e->child(1)));
                    case BinOp::Lt: return binary(BinOp::Le, e->child(1), e->child(0));
                    case BinOp::Le: return binary(BinOp::Lt, e->child(1), e->child(0));
                    case BinOp::Eq: return binary(BinOp::Ne, e->child(0), e->child(1));
                    case BinOp::Ne: return binary(BinOp::Eq, e->child(0), e->child(1));
                    default: return lnot(e);
                }
            case ExprKind::Cond:
                return cond(e->child(0), not_of(e->child(1)), not_of(e->child(2)));
            default:
                return lnot(e);
        }
    }

    void flatten(const Expr& e, BinOp op, std::vector<Expr>& terms) {
        if (e->kind == ExprKind::Binary && e->op == op) {
            flatten(e->child(0), op, terms);
            flatten(e->child(1), op, terms);
        } else {
            terms.push_back(e);
        }
    }

    Expr canon(const Expr& e) {
        switch (e->kind) {
            case ExprKind::IntConst:
            case ExprKind::BoolConst:
            case ExprKind::MaxIntConst:
            case ExprKind::MinIntConst:
            case ExprKind::Var:
            case ExprKind::SeqLength:
            case ExprKind::Hole:
                return e;
            case ExprKind::SeqAccess:
                return seq_access(e->name, canon(e->child(0)));
            case ExprKind::Neg: {
                Expr c = canon(e->child(0));
                if (c->kind == ExprKind::IntConst) return int_const(-c->int_value);
                if (c->kind == ExprKind::Neg) return c->child(0);
                return neg(c);
            }
            case ExprKind::Not:
                return not_of(canon(e->child(0)));
            case ExprKind::Cond:
                return cond(canon(e->child(0)), canon(e->child(1)), canon(e->child(2)));
            case ExprKind::Binary: {
                BinOp op = e->op;
                Expr a = canon(e->child(0));
                Expr b = canon(e->child(1));
                if (op == BinOp::Gt) {
                    op = BinOp::Lt;
                    std::swap(a, b);
                } else if (op == BinOp::Ge) {
                    op = BinOp::Le;
                    std::swap(a, b);
                }
                if (auto folded = fold_binary(op, a, b)) return *folded;
                if (is_ac(op)) {
                    std::vector<Expr> terms;
                    flatten(a, op, terms);
                    flatten(b, op, terms);
                    // fold constant terms pairwise
                    std::vector<Expr> kept;
                    Expr acc;
                    for (const auto& t : terms) {
                        if (t->kind == ExprKind::IntConst || t->kind == ExprKind::BoolConst) {
                            if (!acc) {
                                acc = t;
                            } else if (auto f = fold_binary(op, acc, t)) {
                                acc = *f;
                            } else {
                                kept.push_back(t);
                            }
                        } else {
                            kept.push_back(t);
                        }
                    }
                    if (acc) kept.push_back(acc);
                    std::stable_sort(kept.begin(), kept.end(), [&](const Expr& x, const Expr& y) {
                        bool sx = mentions_any(x, tracked);
                        bool sy = mentions_any(y, tracked);
                        if (sx != sy) return sx;
                        return compare(x, y) < 0;
                    });
                    Expr out = kept.back();
                    for (std::size_t i = kept.size() - 1; i-- > 0;)
                        out = binary(op, kept[i], out);
                    return out;
                }
                return binary(op, a, b);
            }
        }
        return e;
    }
};

} // namespace

Expr canonicalize(const Expr& e, const std::set<std::string>& tracked) {
    Canonicalizer c{tracked};
    Expr cur = e;
    for (int pass = 0; pass < 8; ++pass) {
        Expr next = c.canon(cur);
        if (struct_equal(next, cur)) return next;
        cur = next;
    }
    return cur;
}

// ---------------------------------------------------------------------------
// rule catalog

namespace {

bool match(const Expr& pat, const Expr& sub, std::map<std::string, Expr>& bind) {
    switch (pat->kind) {
        case ExprKind::Var: {
            auto it = bind.find(pat->name);
            if (it == bind.end()) {
                bind[pat->name] = sub;
                return true;
            }
            return struct_equal(it->second, sub);
        }
        case ExprKind::IntConst:
            return sub->kind == ExprKind::IntConst && sub->int_value == pat->int_value;
        case ExprKind::BoolConst:
            return sub->kind == ExprKind::BoolConst && sub->bool_value == pat->bool_value;
        case ExprKind::MaxIntConst:
        case ExprKind::MinIntConst:
            return sub->kind == pat->kind;
        case ExprKind::Neg:
        case ExprKind::Not:
            return sub->kind == pat->kind && match(pat->child(0), sub->child(0), bind);
        case ExprKind::Binary:
            if (sub->kind != ExprKind::Binary || sub->op != pat->op) return false;
            return match(pat->child(0), sub->child(0), bind) &&
                   match(pat->child(1), sub->child(1), bind);
        case ExprKind::Cond:
            if (sub->kind != ExprKind::Cond) return false;
            return match(pat->child(0), sub->child(0), bind) &&
                   match(pat->child(1), sub->child(1), bind) &&
                   match(pat->child(2), sub->child(2), bind);
        default:
            return false;
    }
}

Expr instantiate(const Expr& pat, const std::map<std::string, Expr>& bind) {
    return substitute(pat, [&](const std::string& n) -> Expr {
        auto it = bind.find(n);
        return it == bind.end() ? nullptr : it->second;
    });
}

bool side_ok(const RewriteRule& rule, const std::map<std::string, Expr>& bind) {
    if (!rule.side) return true;
    Expr inst = instantiate(rule.side, bind);
    Expr folded = canonicalize(inst, {});
    return folded->kind == ExprKind::BoolConst && folded->bool_value;
}

bool is_minmax(const Expr& e) {
    return e->kind == ExprKind::Binary && (e->op == BinOp::Min || e->op == BinOp::Max);
}

bool detect_splitting(const Expr& lhs) {
    if (lhs->kind != ExprKind::Binary || !is_comparison(lhs->op)) return false;
    return is_minmax(lhs->child(0)) || is_minmax(lhs->child(1));
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

RuleSet RuleSet::parse_catalog(const std::string& text) {
    RuleSet set;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t arrow = t.find("~>");
        if (arrow == std::string::npos)
            throw Error("rule line without '~>': " + t);
        std::string lhs_text = trim(t.substr(0, arrow));
        std::string rest = trim(t.substr(arrow + 2));
        std::string side_text;
        std::size_t if_pos = rest.rfind(" if ");
        if (if_pos != std::string::npos) {
            side_text = trim(rest.substr(if_pos + 4));
            rest = trim(rest.substr(0, if_pos));
        }
        RewriteRule rule;
        rule.text = t;
        rule.lhs = parse_expression(lhs_text);
        rule.rhs = parse_expression(rest);
        rule.side = side_text.empty() ? nullptr : parse_expression(side_text);
        rule.splitting = detect_splitting(rule.lhs);
        set.rules.push_back(std::move(rule));
    }
    return set;
}

const RuleSet& RuleSet::builtin() {
    static const RuleSet set = RuleSet::parse_catalog(builtin_catalog_text());
    return set;
}

// ---------------------------------------------------------------------------
// rewrite engine

namespace {

struct Candidate {
    Expr whole;
    bool subject_tracked = false;
};

class Rewriter {
public:
    Rewriter(const RuleSet& rules, const std::set<std::string>& tracked)
        : rules_(rules), tracked_(tracked) {}

    Expr run(const Expr& start, int budget, int* steps_out) {
        Expr cur = canonicalize(start, tracked_);
        int steps = 0;
        for (;;) {
            bool applied = false;
            for (const auto& rule : rules_.rules) {
                CostPair c0 = cost(cur, tracked_);
                int s0 = cur->size;
                std::vector<Candidate> cands;
                rewrite_anywhere(cur, rule, true, cands);
                for (const auto& cand : cands) {
                    Expr next = canonicalize(cand.whole, tracked_);
                    if (struct_equal(next, cur)) continue;
                    CostPair c1 = cost(next, tracked_);
                    bool ok;
                    if (rule.splitting)
                        ok = (c1 < c0) || (c1 == c0 && cand.subject_tracked);
                    else
                        ok = (c1 < c0) || (c1 == c0 && next->size < s0);
                    if (ok) {
                        cur = next;
                        applied = true;
                        break;
                    }
                }
                if (applied) break;
            }
            if (!applied) break;
            if (++steps > budget)
                throw RuleBudgetExceeded(std::to_string(budget) + " steps");
        }
        if (steps_out) *steps_out = steps;
        return cur;
    }

private:
    // Appends every whole-expression rewrite of `rule` at or below `node`,
    // outermost first. `chain_root` is false when the parent has the same AC
    // operator (the chain is handled at its root).
    void rewrite_anywhere(const Expr& node, const RewriteRule& rule, bool chain_root,
                          std::vector<Candidate>& out) {
        rewrite_here(node, rule, chain_root, out);
        for (std::size_t i = 0; i < node->children.size(); ++i) {
            bool child_is_chain_root =
                !(node->kind == ExprKind::Binary && node->children[i]->kind == ExprKind::Binary &&
                  node->children[i]->op == node->op && is_ac(node->op));
            std::vector<Candidate> inner;
            rewrite_anywhere(node->children[i], rule, child_is_chain_root, inner);
            for (auto& cand : inner) {
                auto kids = node->children;
                kids[i] = cand.whole;
                out.push_back({rebuild(node, kids), cand.subject_tracked});
            }
        }
    }

    void rewrite_here(const Expr& node, const RewriteRule& rule, bool chain_root,
                      std::vector<Candidate>& out) {
        bool ac_rule = rule.lhs->kind == ExprKind::Binary && is_ac(rule.lhs->op);
        if (ac_rule && node->kind == ExprKind::Binary && node->op == rule.lhs->op) {
            if (!chain_root) return;  // handled at the chain root
            std::vector<Expr> terms;
            flatten(node, node->op, terms);
            for (std::size_t i = 0; i < terms.size(); ++i) {
                for (std::size_t j = 0; j < terms.size(); ++j) {
                    if (i == j) continue;
                    std::map<std::string, Expr> bind;
                    if (!match(rule.lhs->child(0), terms[i], bind)) continue;
                    if (!match(rule.lhs->child(1), terms[j], bind)) continue;
                    if (!side_ok(rule, bind)) continue;
                    Expr repl = instantiate(rule.rhs, bind);
                    std::vector<Expr> rest;
                    for (std::size_t k = 0; k < terms.size(); ++k)
                        if (k != i && k != j) rest.push_back(terms[k]);
                    Expr whole = repl;
                    for (const auto& r : rest) whole = binary(node->op, whole, r);
                    bool tracked = mentions_any(terms[i], tracked_) || mentions_any(terms[j], tracked_);
                    out.push_back({whole, tracked});
                }
            }
            return;
        }
        std::map<std::string, Expr> bind;
        if (match(rule.lhs, node, bind) && side_ok(rule, bind)) {
            out.push_back({instantiate(rule.rhs, bind), mentions_any(node, tracked_)});
        }
    }

    static void flatten(const Expr& e, BinOp op, std::vector<Expr>& terms) {
        if (e->kind == ExprKind::Binary && e->op == op) {
            flatten(e->child(0), op, terms);
            flatten(e->child(1), op, terms);
        } else {
            terms.push_back(e);
        }
    }

    static Expr rebuild(const Expr& node, const std::vector<Expr>& kids) {
        switch (node->kind) {
            case ExprKind::SeqAccess: return seq_access(node->name, kids[0]);
            case ExprKind::Neg: return neg(kids[0]);
            case ExprKind::Not: return lnot(kids[0]);
            case ExprKind::Binary: return binary(node->op, kids[0], kids[1]);
            case ExprKind::Cond: return cond(kids[0], kids[1], kids[2]);
            default: return node;
        }
    }

    const RuleSet& rules_;
    const std::set<std::string>& tracked_;
};

} // namespace

Expr rewrite_min_cost(const Expr& e, const RuleSet& rules, const std::set<std::string>& tracked,
                      int budget, int* steps_out) {
    Rewriter rw(rules, tracked);
    return rw.run(e, budget, steps_out);
}

// ---------------------------------------------------------------------------
// decomposition into the normal form

namespace {

int count_tracked(const Expr& e, const std::set<std::string>& syms) {
    if (e->kind == ExprKind::Var) return syms.count(e->name) ? 1 : 0;
    int n = 0;
    for (const auto& c : e->children) n += count_tracked(c, syms);
    return n;
}

bool tracked_in_seq_index(const Expr& e, const std::set<std::string>& syms) {
    if (e->kind == ExprKind::SeqAccess && count_tracked(e->child(0), syms) > 0) return true;
    for (const auto& c : e->children)
        if (tracked_in_seq_index(c, syms)) return true;
    return false;
}

void find_occurrences(const Expr& e, const std::set<std::string>& syms, std::vector<int>& path,
                      std::vector<std::vector<int>>& out) {
    if (e->kind == ExprKind::Var && syms.count(e->name)) {
        out.push_back(path);
        return;
    }
    for (std::size_t i = 0; i < e->children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        find_occurrences(e->children[i], syms, path, out);
        path.pop_back();
    }
}

const Expr& node_at(const Expr& root, const std::vector<int>& path, std::size_t len) {
    const Expr* cur = &root;
    for (std::size_t i = 0; i < len; ++i) cur = &(*cur)->children[static_cast<std::size_t>(path[i])];
    return *cur;
}

int depth_between(const Expr& root, const std::vector<int>& path, std::size_t from, std::size_t to) {
    int d = 0;
    const Expr* cur = &root;
    for (std::size_t i = 0; i < to; ++i) {
        if (i >= from &&
            ((*cur)->kind == ExprKind::Binary || (*cur)->kind == ExprKind::Cond))
            ++d;
        cur = &(*cur)->children[static_cast<std::size_t>(path[i])];
    }
    return d;
}

Expr replace_at(const Expr& root, const std::vector<int>& path, std::size_t len,
                const Expr& replacement) {
    if (len == 0) return replacement;
    auto kids = root->children;
    std::size_t i = static_cast<std::size_t>(path[0]);
    std::vector<int> sub(path.begin() + 1, path.end());
    kids[i] = replace_at(root->children[i], sub, len - 1, replacement);
    switch (root->kind) {
        case ExprKind::SeqAccess: return seq_access(root->name, kids[0]);
        case ExprKind::Neg: return neg(kids[0]);
        case ExprKind::Not: return lnot(kids[0]);
        case ExprKind::Binary: return binary(root->op, kids[0], kids[1]);
        case ExprKind::Cond: return cond(kids[0], kids[1], kids[2]);
        default: throw Error("replace_at: bad path");
    }
}

// Deletes the leaf at `path` inside `piece`; records the binary operator at
// which the deletion surfaced. Returns null when the whole piece dissolves.
Expr delete_leaf(const Expr& piece, const std::vector<int>& path, std::size_t at,
                 std::optional<BinOp>& connector, bool& through_cond) {
    if (at == path.size()) return nullptr;
    std::size_t i = static_cast<std::size_t>(path[at]);
    Expr sub = delete_leaf(piece->children[i], path, at + 1, connector, through_cond);
    switch (piece->kind) {
        case ExprKind::Neg:
        case ExprKind::Not:
            return sub ? (piece->kind == ExprKind::Neg ? neg(sub) : lnot(sub)) : nullptr;
        case ExprKind::Binary: {
            if (!sub) {
                if (!connector) connector = piece->op;
                return piece->children[1 - i];
            }
            auto kids = piece->children;
            kids[i] = sub;
            return binary(piece->op, kids[0], kids[1]);
        }
        case ExprKind::Cond: {
            if (!sub) {
                through_cond = true;
                return nullptr;
            }
            auto kids = piece->children;
            kids[i] = sub;
            return cond(kids[0], kids[1], kids[2]);
        }
        case ExprKind::SeqAccess:
            through_cond = true;  // not a usable remainder
            return nullptr;
        default:
            return nullptr;
    }
}

} // namespace

std::optional<NormalForm> normalize(const Expr& unfolded, const RecurrenceSystem& sys,
                                    const std::map<std::string, std::string>& sigma_to_state,
                                    const RuleSet& rules, int cost_bound, int budget) {
    std::set<std::string> syms;
    for (const auto& [sym, _] : sigma_to_state) syms.insert(sym);

    NormalForm nf;
    nf.rewritten = rewrite_min_cost(unfolded, rules, syms, budget);
    if (tracked_in_seq_index(nf.rewritten, syms)) return std::nullopt;

    std::vector<std::vector<int>> occs;
    std::vector<int> path;
    find_occurrences(nf.rewritten, syms, path, occs);

    struct Anchor {
        std::vector<int> path;  // to the anchor node
        std::vector<int> leaf;  // full path to the leaf
    };
    std::vector<Anchor> anchors;
    for (const auto& occ : occs) {
        // maximal ancestor with exactly one tracked symbol and leaf depth <= C
        std::size_t chosen = occ.size();
        for (std::size_t t = 0; t <= occ.size(); ++t) {
            const Expr& cand = node_at(nf.rewritten, occ, t);
            if (count_tracked(cand, syms) != 1) continue;
            if (depth_between(nf.rewritten, occ, t, occ.size()) > cost_bound) continue;
            chosen = t;
            break;
        }
        anchors.push_back({std::vector<int>(occ.begin(), occ.begin() + static_cast<long>(chosen)), occ});
    }

    // items + skeleton
    Expr skeleton = nf.rewritten;
    // replace deepest-first so shallower paths stay valid; anchors are
    // disjoint, so ordering by path length descending is safe
    std::vector<std::size_t> order(anchors.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return anchors[a].path.size() > anchors[b].path.size();
    });

    nf.items.resize(anchors.size());
    for (std::size_t idx = 0; idx < anchors.size(); ++idx) {
        const auto& a = anchors[idx];
        const Expr& piece = node_at(nf.rewritten, a.path, a.path.size());
        NormalItem item;
        item.piece = piece;
        item.symbol = node_at(nf.rewritten, a.leaf, a.leaf.size())->name;
        if (piece->kind == ExprKind::Var) {
            // bare symbol: identity remainder when the parent is an AC operator
            if (!a.path.empty()) {
                const Expr& parent = node_at(nf.rewritten, a.path, a.path.size() - 1);
                if (parent->kind == ExprKind::Binary && is_ac(parent->op) &&
                    op_has_identity(parent->op)) {
                    item.connector = parent->op;
                    item.remainder = op_identity(parent->op);
                    item.has_remainder = true;
                    item.identity_remainder = true;
                }
            }
        } else {
            std::vector<int> rel(a.leaf.begin() + static_cast<long>(a.path.size()), a.leaf.end());
            std::optional<BinOp> conn;
            bool through_cond = false;
            Expr rem = delete_leaf(piece, rel, 0, conn, through_cond);
            if (rem && conn && !through_cond) {
                item.remainder = rem;
                item.connector = *conn;
                item.has_remainder = true;
            }
        }
        nf.items[idx] = std::move(item);
    }
    for (std::size_t k : order) {
        skeleton = replace_at(skeleton, anchors[k].path, anchors[k].path.size(),
                              hole(HoleKind::Left, static_cast<int>(k), Type::Int));
    }
    nf.skeleton = skeleton;

    // rest: sigma_0 symbols replaced by initial values
    Expr rest = substitute(nf.rewritten, [&](const std::string& n) -> Expr {
        auto it = sigma_to_state.find(n);
        if (it == sigma_to_state.end()) return nullptr;
        return sys.init.at(it->second);
    });
    nf.rest = rewrite_min_cost(rest, rules, {}, budget);
    return nf;
}

Expr reassemble(const NormalForm& nf) {
    std::function<Expr(const Expr&)> go = [&](const Expr& e) -> Expr {
        if (e->kind == ExprKind::Hole) return nf.items[static_cast<std::size_t>(e->hole_id)].piece;
        if (e->children.empty()) return e;
        std::vector<Expr> kids;
        kids.reserve(e->children.size());
        for (const auto& c : e->children) kids.push_back(go(c));
        switch (e->kind) {
            case ExprKind::SeqAccess: return seq_access(e->name, kids[0]);
            case ExprKind::Neg: return neg(kids[0]);
            case ExprKind::Not: return lnot(kids[0]);
            case ExprKind::Binary: return binary(e->op, kids[0], kids[1]);
            case ExprKind::Cond: return cond(kids[0], kids[1], kids[2]);
            default: return e;
        }
    };
    return go(nf.skeleton);
}

std::vector<Remainder> collect(const NormalForm& nf) {
    std::vector<Remainder> out;
    for (const auto& item : nf.items) {
        if (!item.has_remainder) continue;
        out.push_back({item.remainder, item.connector, item.identity_remainder, item.symbol});
    }
    return out;
}

} // namespace homsynth
