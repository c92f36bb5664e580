#pragma once

#include <stdexcept>
#include <string>

namespace sdbf {

/// An argument lies outside the domain of the requested operation
/// (probability outside (0,1), non-positive scale, degenerate summaries).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The hypothesis test cannot be evaluated as posed, e.g. the test value lies
/// outside the support of the H1 prior so the density ratio is undefined.
class IllPosedTestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Laplace's approximation needs g(theta_hat) > 0; thrown when the estimate
/// falls outside a truncated prior's support.
class UndefinedLaplaceError : public IllPosedTestError {
public:
    using IllPosedTestError::IllPosedTestError;
};

/// The weighted design matrix of a meta-regression is singular or too badly
/// conditioned to invert.
class SingularDesignError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sdbf
