#pragma once

#include <stdexcept>
#include <string>

namespace hrf {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Resultant vanishes (or is numerically zero): F0 and F1 share a factor.
class DegenerateLiftError : public Error {
public:
    using Error::Error;
};

class FieldMismatchError : public Error {
public:
    using Error::Error;
};

// Input outside the domain of an operation (t <= 0, |xi| >= 1, d = 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Iteration/composition would exceed the coefficient storage budget.
class BudgetError : public Error {
public:
    BudgetError(const std::string& what, int achieved) : Error(what), achieved_(achieved) {}
    int achieved() const { return achieved_; }

private:
    int achieved_;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace hrf
