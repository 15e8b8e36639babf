#pragma once

#include <stdexcept>
#include <string>

namespace disclose {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// No candidate exists for the requested (v_L, r): E[v | v > v_L] <= r.
class InfeasibleCandidate : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A root bracket could not be established.
class BracketFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A post-solve invariant failed. `invariant()` names it.
class ValidationFailure : public std::runtime_error {
public:
    ValidationFailure(std::string invariant, const std::string& detail)
        : std::runtime_error(invariant + ": " + detail), invariant_(std::move(invariant)) {}
    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

// alpha = 1 (or another boundary where the equilibrium is not a point).
class UnsupportedBoundary : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Root of an equation does not lie in the open interval searched.
class NoInteriorRoot : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InfeasibleLp : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace disclose
