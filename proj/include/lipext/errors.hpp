#pragma once

#include <stdexcept>
#include <string>

namespace lipext {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A documented precondition of an operation does not hold for the given input.
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

// An iterative solver exhausted its iteration budget before certifying its tolerance.
struct SolverError : Error {
    explicit SolverError(const std::string& msg) : Error(msg) {}
};

// A greedy feasible set came up empty. Carries the step (source index being
// assigned) and the pair of constraints whose radius test fails.
struct InfeasibleError : Error {
    int step_index;
    int constraint_a;
    int constraint_b;
    InfeasibleError(const std::string& msg, int step, int a, int b)
        : Error(msg), step_index(step), constraint_a(a), constraint_b(b) {}
};

}  // namespace lipext
