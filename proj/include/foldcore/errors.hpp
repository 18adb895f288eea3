#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace foldcore {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A denominator vanished (or came within the singularity threshold).
/// `denominator()` names the offending expression.
class SingularError : public Error {
 public:
  explicit SingularError(std::string denominator, double numerator_value = 0.0,
                         double denominator_value = 0.0)
      : Error("singular: denominator " + denominator + " vanished"),
        denominator_(std::move(denominator)),
        num_(numerator_value),
        den_(denominator_value) {}
  const std::string& denominator() const noexcept { return denominator_; }
  double numerator_value() const noexcept { return num_; }
  double denominator_value() const noexcept { return den_; }
  /// Nonzero denominator with |num/den| above `threshold`: the quotient
  /// escaped rather than hit a pole.
  bool quotient_exceeds(double threshold) const noexcept {
    return den_ != 0.0 && std::abs(num_) > threshold * std::abs(den_);
  }

 private:
  std::string denominator_;
  double num_;
  double den_;
};

class InvalidParam : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

/// An orbit hit a point where the log-derivative is undefined.
class DegenerateOrbit : public Error {
 public:
  using Error::Error;
};

}  // namespace foldcore
