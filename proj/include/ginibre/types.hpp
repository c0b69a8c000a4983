#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ginibre {

/// A point of the complex plane, the state space of every process here.
using ComplexPoint = std::complex<double>;
using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not reach its accuracy contract.
class NumericalError : public Error {
 public:
  using Error::Error;
};

inline bool is_finite(ComplexPoint z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite(ComplexPoint z, const char* what) {
  if (!is_finite(z)) throw PreconditionError(std::string(what) + ": non-finite point");
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw PreconditionError(msg);
}

}  // namespace ginibre
