#ifndef HOCPOLES_ERROR_HPP
#define HOCPOLES_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hocpoles {

// Base of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or configuration (maps to CLI exit code 1).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Problems with the data itself: non-finite samples, zero variance,
// too few samples (exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

// Denominator with roots on or outside the unit circle.
class UnstableModel : public Error {
 public:
  using Error::Error;
};

// Numerical failures (exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class IllConditioned : public NumericalError {
 public:
  IllConditioned(const std::string& what, double cond)
      : NumericalError(what), cond_(cond) {}
  double cond() const noexcept { return cond_; }

 private:
  double cond_;
};

class RootFindingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace hocpoles

#endif  // HOCPOLES_ERROR_HPP
