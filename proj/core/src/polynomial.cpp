#include "noisectl/polynomial.hpp"

#include <algorithm>

namespace noisectl {

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) { trim(); }

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

double Polynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double Polynomial::derivative_at(double x, int order) const noexcept {
  // Horner on the differentiated coefficients, without allocating.
  const int n = degree();
  if (order > n) return 0.0;
  double acc = 0.0;
  for (int k = n; k >= order; --k) {
    double falling = 1.0;
    for (int j = 0; j < order; ++j) falling *= static_cast<double>(k - j);
    acc = acc * x + falling * coeffs_[static_cast<std::size_t>(k)];
  }
  return acc;
}

Polynomial Polynomial::derivative(int order) const {
  std::vector<double> c(coeffs_);
  for (int o = 0; o < order; ++o) {
    if (c.size() <= 1) return Polynomial{};
    std::vector<double> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
    c = std::move(d);
  }
  return Polynomial(std::move(c));
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  std::ranges::for_each(coeffs_, [s](double& c) { c *= s; });
  trim();
  return *this;
}

}  // namespace noisectl
