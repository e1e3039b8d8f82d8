#pragma once

#include <stdexcept>
#include <string>

namespace qpdnls {

// Bad user input: malformed config, dimension mismatch, out-of-range parameter.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Misuse of an operation (empty input where nonempty is required, etc.).
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration or support growth would exceed its configured budget.
// Carries the exact demand so callers can report "too large by how much".
class BudgetError : public std::runtime_error {
public:
    BudgetError(const std::string& what, double demanded, double budget)
        : std::runtime_error(what), demanded_(demanded), budget_(budget) {}
    double demanded() const { return demanded_; }
    double budget() const { return budget_; }

private:
    double demanded_;
    double budget_;
};

} // namespace qpdnls
