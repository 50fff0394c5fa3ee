#pragma once

#include <memory>
#include <string>
#include <vector>

#include "homsynth/expr.hpp"

namespace homsynth {

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

enum class StmtKind { Assign, SeqAssign, If, For };

struct Stmt {
    StmtKind kind;
    // Assign: lhs = rhs
    std::string lhs;
    Expr rhs;
    Expr seq_index;  // SeqAssign only
    // If
    Expr cond;
    std::vector<StmtPtr> then_body;
    std::vector<StmtPtr> else_body;
    // For
    std::string iterator;
    std::string sequence;
    std::vector<StmtPtr> body;
};

struct Program {
    std::vector<StmtPtr> statements;
};

// Parses the surface mini-language: semicolon-terminated assignments,
// C-style if/else, and `for (i = 0; i < |s|; i++) { ... }`.
// `//` comments run to end of line.
Program parse_program(const std::string& source);

// Parses a single expression (used by the rule catalog, report round-trips
// and tests).
Expr parse_expression(const std::string& source);

std::string to_string(const Program& p);
std::string to_string(const Stmt& s, int indent = 0);

bool program_equal(const Program& a, const Program& b);

} // namespace homsynth
