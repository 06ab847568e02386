#ifndef LCFIT_ERRORS_HPP
#define LCFIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lcfit {

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
  public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Input data violates the schema (bad field, bad range, duplicate key).
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// Too few points survive filtering to support the requested computation.
class InsufficientDataError : public Error {
  public:
    explicit InsufficientDataError(const std::string& msg) : Error(msg) {}
};

/// A statistic has no defined value on the given input (single-class ROC,
/// zero-variance correlation).
class UndefinedMetricError : public Error {
  public:
    explicit UndefinedMetricError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
  public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace lcfit

#endif
