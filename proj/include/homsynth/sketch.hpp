#pragma once

#include <string>
#include <vector>

#include "homsynth/recurrence.hpp"
#include "homsynth/rewrite.hpp"

namespace homsynth {

struct SketchHole {
    int id;
    HoleKind kind;
    Type type;
};

struct SketchEquation {
    std::string var;
    Expr rhs;  // operators and Hole nodes only
    std::vector<SketchHole> holes;
};

struct Sketch {
    std::vector<SketchEquation> equations;
};

// The compilation rules: state variables become left holes; constants, input
// variables and sequence accesses become right holes (a whole state-free
// subtree collapses into a single right hole); operators are preserved.
Sketch make_sketch(const RecurrenceSystem& sys);

// Whole right-hand side as a single left hole.
SketchEquation relaxed_equation(const RecurrenceSystem& sys, const std::string& var);

// Sketch shaped like a normal form: each carved piece becomes a left hole,
// input-only material becomes right holes.
SketchEquation hint_equation(const RecurrenceSystem& sys, const std::string& var,
                             const NormalForm& nf);

} // namespace homsynth
