#pragma once

#include <stdexcept>
#include <string>

namespace kato {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller mistakes: bad shapes, unknown ids, malformed descriptors.
/// The CLI maps these to exit code 1.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Legitimate numerical breakdowns (singularities, gap collapse, rank loss).
/// The CLI maps these to exit code 2.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class RankDeficient : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SpectralGapViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateDuality : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DomainViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class RankCollapse : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonFiniteState : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Initial basis not in range(P(lambda_0)); a bad input, not a breakdown.
class InitNotInRange : public UsageError {
public:
    using UsageError::UsageError;
};

}  // namespace kato
