#pragma once

#include <initializer_list>
#include <vector>

namespace cvx {

/// Dense polynomial with ascending coefficients; used for the closed-form
/// penalty integrals when every growth envelope is polynomial.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(double v) { return Polynomial{{v}}; }
  static Polynomial x() { return Polynomial{{0.0, 1.0}}; }

  double operator()(double t) const {
    double r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * t + *it;
    return r;
  }

  Polynomial operator+(const Polynomial& o) const {
    std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return Polynomial(std::move(r));
  }

  Polynomial operator*(const Polynomial& o) const {
    if (c_.empty() || o.c_.empty()) return Polynomial();
    std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Polynomial(std::move(r));
  }

  Polynomial operator*(double s) const {
    std::vector<double> r = c_;
    for (double& v : r) v *= s;
    return Polynomial(std::move(r));
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<double> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * double(i);
    return Polynomial(std::move(r));
  }

  /// Antiderivative with zero constant term.
  Polynomial antiderivative() const {
    std::vector<double> r(c_.size() + 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) r[i + 1] = c_[i] / double(i + 1);
    return Polynomial(std::move(r));
  }

  bool zero() const { return c_.empty(); }
  const std::vector<double>& coeffs() const { return c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }
  std::vector<double> c_;
};

}  // namespace cvx
