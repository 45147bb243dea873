#pragma once

#include <stdexcept>
#include <string>

namespace cml {

struct ConstraintViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BudgetExceeded : std::runtime_error {
    long long reached = 0;
    explicit BudgetExceeded(const std::string& what, long long reached_ = 0)
        : std::runtime_error(what), reached(reached_) {}
};

struct InvalidPair : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotAHole : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct LevelMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct UnmappedCircle : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct TieAmbiguity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace cml
