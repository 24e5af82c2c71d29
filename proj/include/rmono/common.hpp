#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmono {

using Complex = std::complex<double>;

// Systems handled here have at most a handful of variables and parameters, so
// all hot-path linear algebra runs on stack-allocated Eigen storage.
inline constexpr int kMaxDim = 8;

template <class S>
using SmallVec = Eigen::Matrix<S, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
template <class S>
using SmallMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;

// A point in solution space (length N) or parameter space (length P).
using CPoint = CVector;
using RPoint = RVector;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class DimensionError : public Error {
  using Error::Error;
};

class InvalidArgument : public Error {
  using Error::Error;
};

/// Raised when a parameter point sits on or too near the discriminant for the
/// solution count to be stable.
class NonGenericParameter : public Error {
  using Error::Error;
};

/// Raised when a solution's imaginary part is neither clearly zero nor clearly
/// nonzero.
class BorderlineReal : public Error {
  using Error::Error;
};

class LoopThroughDiscriminant : public Error {
  using Error::Error;
};

class AmbiguousMatch : public Error {
  using Error::Error;
};

class StateExplosion : public Error {
  using Error::Error;
};

class HoleTouchesWindowBoundary : public Error {
  using Error::Error;
};

// Seeded random source. Distributions are drawn from the raw engine output so
// that the sequence is identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Uniform on the unit circle in C.
  Complex unit_complex() {
    const double a = uniform(0.0, 2.0 * 3.14159265358979323846);
    return {std::cos(a), std::sin(a)};
  }

  std::uint64_t next_seed() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

inline double max_abs_imag(const CVector& v) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i].imag()));
  return m;
}

}  // namespace rmono
