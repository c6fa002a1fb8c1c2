#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "noisectl/model.hpp"

namespace noisectl {

/// Uniform grid with an odd node count, so composite Simpson applies.
class QuadratureGrid {
 public:
  static constexpr std::size_t kDefaultNodes = 4001;

  QuadratureGrid(Interval domain, std::size_t n_nodes = kDefaultNodes);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double spacing() const noexcept { return spacing_; }
  double operator[](std::size_t i) const noexcept { return nodes_[i]; }
  Interval domain() const noexcept { return {nodes_.front(), nodes_.back()}; }

 private:
  std::vector<double> nodes_;
  double spacing_;
};

/// Composite Simpson over uniformly spaced samples (odd count >= 3).
double simpson(std::span<const double> values, double spacing);

/// Running integral of f from the first node, one Simpson panel per cell
/// using the supplied midpoint values: out[i+1] = out[i] + h/6 (f_i + 4 m_i + f_{i+1}).
std::vector<double> cumulative_simpson(std::span<const double> values,
                                       std::span<const double> midpoints, double spacing);

/// Running trapezoid integral, out[0] = 0.
std::vector<double> cumulative_trapezoid(std::span<const double> values, double spacing);

}  // namespace noisectl
