#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace noisectl {

/// Real polynomial stored lowest degree first. Evaluation and derivatives
/// are exact; nothing here differentiates numerically.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  /// Canonical coefficients: trailing zeros trimmed, at least one entry.
  std::span<const double> coefficients() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  double operator()(double x) const noexcept;
  double derivative_at(double x, int order = 1) const noexcept;
  Polynomial derivative(int order = 1) const;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
  friend Polynomial operator*(Polynomial p, double s) { return p *= s; }
  friend Polynomial operator*(double s, Polynomial p) { return p *= s; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<double> coeffs_;
};

}  // namespace noisectl
