#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace lazy_newton {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied inputs outside an operation's domain or regime.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

/// Numerical failure during an otherwise valid computation.
class NumericError : public Error {
  public:
    using Error::Error;
};

/// A quadrature node (or the frame integrator) came within the softening
/// length of a past source position.
class SingularApproach : public NumericError {
  public:
    SingularApproach(const std::string& what, double distance, std::optional<std::size_t> source = {})
        : NumericError(what), distance_(distance), source_index_(source) {}

    double distance() const noexcept { return distance_; }
    std::optional<std::size_t> source_index() const noexcept { return source_index_; }

  private:
    double distance_;
    std::optional<std::size_t> source_index_;
};

}  // namespace lazy_newton
