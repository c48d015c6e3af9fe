#pragma once

#include <stdexcept>
#include <string>

namespace gibbs_tree {

// Base for every error raised by the library. Subclasses map onto the
// CLI exit codes (see tools/).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite or out-of-range input value.
class DomainError : public Error {
public:
    using Error::Error;
};

// Vector length does not match q-1.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Parameters outside k >= 3, 3 <= q < k+1, 0 < theta < 1 (solver entry points),
// or outside the domain of an analytic formula such as theta_critical.
class HypothesisError : public Error {
public:
    using Error::Error;
};

// A scanned function produced a non-finite value at a grid node.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, double abscissa)
        : Error(what + " (at x = " + std::to_string(abscissa) + ")"), abscissa_(abscissa) {}

    double abscissa() const noexcept { return abscissa_; }

private:
    double abscissa_;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Exhaustive enumeration or tree construction would exceed its size budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

// A candidate solution's residual is above the acceptance bound.
class ResidualError : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

}  // namespace gibbs_tree
