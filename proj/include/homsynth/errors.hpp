#pragma once

#include <stdexcept>
#include <string>

namespace homsynth {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct SyntaxError : Error {
    int line;
    int col;
    SyntaxError(const std::string& msg, int line_, int col_)
        : Error("syntax error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
};

struct UnsupportedConstruct : Error {
    explicit UnsupportedConstruct(const std::string& what_construct)
        : Error("unsupported construct: " + what_construct) {}
};

struct TypeError : Error {
    explicit TypeError(const std::string& msg) : Error("type error: " + msg) {}
};

struct EvalError : Error {
    explicit EvalError(const std::string& msg) : Error("evaluation error: " + msg) {}
};

struct NoLoopFound : Error {
    NoLoopFound() : Error("no loop found in program") {}
};

struct NonScalarAssignment : Error {
    explicit NonScalarAssignment(const std::string& msg)
        : Error("non-scalar assignment: " + msg) {}
};

struct NameClash : Error {
    explicit NameClash(const std::string& name) : Error("name clash: " + name) {}
};

struct RuleBudgetExceeded : Error {
    explicit RuleBudgetExceeded(const std::string& msg)
        : Error("rewrite budget exceeded: " + msg) {}
};

struct TimeoutError : Error {
    explicit TimeoutError(const std::string& phase) : Error("timeout during " + phase) {}
};

struct CyclicDependency : Error {
    explicit CyclicDependency(const std::string& msg)
        : Error("cyclic join dependency: " + msg) {}
};

struct UnsupportedForProof : Error {
    explicit UnsupportedForProof(const std::string& msg)
        : Error("no proof rendering: " + msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("config error: " + msg) {}
};

} // namespace homsynth
