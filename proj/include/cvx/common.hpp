#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvx {

// ── errors ───────────────────────────────────────────────────────────────

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A precondition on an operation's arguments was violated.
struct InvalidArgument : Error {
  using Error::Error;
};

/// Configuration-layer errors (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

struct ParseError : ConfigError {
  int line = 0;
  std::string key;
  ParseError(int line_, std::string key_, const std::string& what_)
      : ConfigError("parse error (line " + std::to_string(line_) +
                    (key_.empty() ? "" : ", key '" + key_ + "'") + "): " + what_),
        line(line_),
        key(std::move(key_)) {}
};

struct ValidationError : ConfigError {
  std::string key;
  ValidationError(std::string key_, const std::string& what_)
      : ConfigError("invalid value for '" + key_ + "': " + what_), key(std::move(key_)) {}
};

/// Solver-layer errors (CLI exit code 3).
struct SolverError : Error {
  using Error::Error;
};

/// The inner region is not resolved by the grid (mask_inner empty or
/// escaping mask_interior).
struct ResolutionTooCoarse : Error {
  using Error::Error;
};

struct EmptyMask : Error {
  using Error::Error;
};

struct QuadratureFailure : Error {
  using Error::Error;
};

/// An iterate left the barrier domain (det D2u <= 0 or Hessian not PD);
/// carries the first offending node in row-major order.
struct OutOfDomain : SolverError {
  int node = -1;
  explicit OutOfDomain(int node_)
      : SolverError("barrier domain violated at node " + std::to_string(node_)), node(node_) {}
};

struct MaxIterations : SolverError {
  using SolverError::SolverError;
};

struct LineSearchStall : SolverError {
  using SolverError::SolverError;
};

struct StartFailure : SolverError {
  using SolverError::SolverError;
};

struct InsufficientData : Error {
  using Error::Error;
};

// ── small dense algebra ──────────────────────────────────────────────────

struct Vec2 {
  double x = 0, y = 0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
  double sup() const { return std::max(std::abs(x), std::abs(y)); }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Symmetric 2x2 matrix [[a11, a12], [a12, a22]].
struct Sym2 {
  double a11 = 0, a12 = 0, a22 = 0;

  double det() const { return a11 * a22 - a12 * a12; }
  double trace() const { return a11 + a22; }
  Sym2 cofactor() const { return {a22, -a12, a11}; }
  Sym2 inverse() const {
    const double d = det();
    return {a22 / d, -a12 / d, a11 / d};
  }
  /// Smaller eigenvalue.
  double eig_min() const {
    const double m = 0.5 * (a11 + a22);
    return m - std::hypot(0.5 * (a11 - a22), a12);
  }
  Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a12 * v.x + a22 * v.y}; }
  /// Frobenius inner product <A, B> = sum_ij A_ij B_ij.
  double inner(const Sym2& b) const { return a11 * b.a11 + a22 * b.a22 + 2 * a12 * b.a12; }
  Sym2 operator+(const Sym2& b) const { return {a11 + b.a11, a12 + b.a12, a22 + b.a22}; }
  Sym2 operator*(double s) const { return {a11 * s, a12 * s, a22 * s}; }

  static Sym2 identity(double s = 1.0) { return {s, 0, s}; }
  static Sym2 outer(Vec2 v) { return {v.x * v.x, v.x * v.y, v.y * v.y}; }
};

/// M * B * M for symmetric M, B (result is symmetric).
inline Sym2 sandwich(const Sym2& m, const Sym2& b) {
  // t = m * b (general 2x2)
  const double t11 = m.a11 * b.a11 + m.a12 * b.a12;
  const double t12 = m.a11 * b.a12 + m.a12 * b.a22;
  const double t21 = m.a12 * b.a11 + m.a22 * b.a12;
  const double t22 = m.a12 * b.a12 + m.a22 * b.a22;
  return {t11 * m.a11 + t12 * m.a12, t11 * m.a12 + t12 * m.a22, t21 * m.a12 + t22 * m.a22};
}

// ── small numeric helpers ────────────────────────────────────────────────

inline double sup_norm(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Median of a list (copies; n log n is fine at this scale).
double median(std::vector<double> v);

/// n points from a to b inclusive.
std::vector<double> linspace(double a, double b, int n);

/// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cvx
