#include "homsynth/loops.hpp"

#include <algorithm>

#include "homsynth/errors.hpp"

namespace homsynth {

namespace {

bool contains_loop(const std::vector<StmtPtr>& stmts) {
    for (const auto& s : stmts) {
        if (s->kind == StmtKind::For) return true;
        if (s->kind == StmtKind::If &&
            (contains_loop(s->then_body) || contains_loop(s->else_body)))
            return true;
    }
    return false;
}

void body_assigned_vars(const std::vector<StmtPtr>& stmts, std::vector<std::string>& out) {
    for (const auto& s : stmts) {
        switch (s->kind) {
            case StmtKind::Assign:
                if (std::find(out.begin(), out.end(), s->lhs) == out.end()) out.push_back(s->lhs);
                break;
            case StmtKind::If:
                body_assigned_vars(s->then_body, out);
                body_assigned_vars(s->else_body, out);
                break;
            case StmtKind::SeqAssign:
            case StmtKind::For:
                break;
        }
    }
}

void body_read_vars(const Expr& e, std::vector<std::string>& out) {
    if (!e) return;
    for (const auto& v : free_vars(e))
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

void body_reads(const std::vector<StmtPtr>& stmts, std::vector<std::string>& out) {
    for (const auto& s : stmts) {
        switch (s->kind) {
            case StmtKind::Assign:
                body_read_vars(s->rhs, out);
                break;
            case StmtKind::SeqAssign:
                body_read_vars(s->rhs, out);
                body_read_vars(s->seq_index, out);
                break;
            case StmtKind::If:
                body_read_vars(s->cond, out);
                body_reads(s->then_body, out);
                body_reads(s->else_body, out);
                break;
            case StmtKind::For:
                break;
        }
    }
}

// Walks statements, tracking straight-line constant assignments that
// dominate each loop. `dominating` maps var -> (expr, order index).
void walk(const std::vector<StmtPtr>& stmts,
          std::map<std::string, std::pair<Expr, int>>& dominating,
          int& order, ExtractResult& result) {
    for (const auto& s : stmts) {
        switch (s->kind) {
            case StmtKind::Assign: {
                auto it = dominating.find(s->lhs);
                if (it == dominating.end()) {
                    dominating[s->lhs] = {s->rhs, order++};
                } else {
                    it->second.first = s->rhs;  // later assignment wins, keeps first position
                }
                break;
            }
            case StmtKind::SeqAssign:
                break;
            case StmtKind::If: {
                // conditional inits do not dominate; recurse for nested loops only
                auto saved = dominating;
                walk(s->then_body, dominating, order, result);
                dominating = saved;
                walk(s->else_body, dominating, order, result);
                dominating = saved;
                break;
            }
            case StmtKind::For: {
                if (contains_loop(s->body)) {
                    result.skipped.push_back("loop over " + s->sequence +
                                             " contains a nested loop; skipped");
                    // still extract the inner ones
                    auto saved = dominating;
                    walk(s->body, dominating, order, result);
                    dominating = saved;
                    break;
                }
                LoopSpec spec;
                spec.body = s->body;
                spec.iterator = s->iterator;
                spec.sequence = s->sequence;

                std::vector<std::string> assigned;
                body_assigned_vars(s->body, assigned);
                if (assigned.empty()) {
                    result.skipped.push_back("loop over " + s->sequence +
                                             " assigns no scalar; skipped");
                    break;
                }

                // State order: dominating-init order first, then body order.
                std::vector<std::pair<int, std::string>> inited;
                std::vector<std::string> uninited;
                for (const auto& v : assigned) {
                    auto it = dominating.find(v);
                    if (it != dominating.end())
                        inited.emplace_back(it->second.second, v);
                    else
                        uninited.push_back(v);
                }
                std::sort(inited.begin(), inited.end());
                for (const auto& [_, v] : inited) {
                    spec.state_vars.push_back(v);
                    spec.init[v] = dominating.at(v).first;
                }
                for (const auto& v : uninited) spec.state_vars.push_back(v);

                std::vector<std::string> reads;
                body_reads(s->body, reads);
                for (const auto& v : reads)
                    if (std::find(assigned.begin(), assigned.end(), v) == assigned.end())
                        spec.input_vars.insert(v);
                spec.input_vars.insert(spec.iterator);
                spec.input_vars.insert(spec.sequence);

                result.loops.push_back(std::move(spec));
                break;
            }
        }
    }
}

void check_body_wellformed(const LoopSpec& spec, const std::vector<StmtPtr>& stmts) {
    for (const auto& s : stmts) {
        switch (s->kind) {
            case StmtKind::Assign:
                if (s->lhs == spec.iterator)
                    throw Error("iterator assigned inside loop body");
                if (s->lhs == spec.sequence)
                    throw Error("sequence assigned inside loop body");
                break;
            case StmtKind::SeqAssign:
                throw NonScalarAssignment("write to " + s->lhs + "[...] in loop body");
            case StmtKind::If:
                check_body_wellformed(spec, s->then_body);
                check_body_wellformed(spec, s->else_body);
                break;
            case StmtKind::For:
                break;
        }
    }
}

} // namespace

ExtractResult extract_loops(const Program& p) {
    ExtractResult result;
    std::map<std::string, std::pair<Expr, int>> dominating;
    int order = 0;
    walk(p.statements, dominating, order, result);
    if (result.loops.empty() && result.skipped.empty()) throw NoLoopFound();
    for (const auto& spec : result.loops) check_body_wellformed(spec, spec.body);
    return result;
}

std::pair<std::vector<std::string>, std::set<std::string>> classify_vars(const LoopSpec& loop) {
    std::vector<std::string> svar;
    body_assigned_vars(loop.body, svar);
    std::set<std::string> ivar;
    std::vector<std::string> reads;
    body_reads(loop.body, reads);
    for (const auto& v : reads)
        if (std::find(svar.begin(), svar.end(), v) == svar.end()) ivar.insert(v);
    ivar.insert(loop.sequence);
    ivar.insert(loop.iterator);
    return {svar, ivar};
}

} // namespace homsynth
