#include "noisectl/quadrature.hpp"

#include <sstream>

#include "noisectl/error.hpp"

namespace noisectl {

QuadratureGrid::QuadratureGrid(Interval domain, std::size_t n_nodes) {
  if (n_nodes < 3 || n_nodes % 2 == 0) {
    std::ostringstream os;
    os << "quadrature grid needs an odd node count >= 3, got " << n_nodes;
    throw ValidationError(os.str());
  }
  if (!(domain.lo < domain.hi)) throw ValidationError("quadrature grid needs lo < hi");
  spacing_ = domain.width() / static_cast<double>(n_nodes - 1);
  nodes_.resize(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) nodes_[i] = domain.lo + static_cast<double>(i) * spacing_;
  nodes_.back() = domain.hi;
}

double simpson(std::span<const double> values, double spacing) {
  const std::size_t n = values.size();
  if (n < 3 || n % 2 == 0) throw ValidationError("simpson needs an odd sample count >= 3");
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i + 1 < n; i += 2) odd += values[i];
  for (std::size_t i = 2; i + 1 < n; i += 2) even += values[i];
  return spacing / 3.0 * (values.front() + values.back() + 4.0 * odd + 2.0 * even);
}

std::vector<double> cumulative_simpson(std::span<const double> values,
                                       std::span<const double> midpoints, double spacing) {
  if (midpoints.size() + 1 != values.size())
    throw ValidationError("cumulative_simpson: need one midpoint per cell");
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    out[i + 1] = out[i] + spacing / 6.0 * (values[i] + 4.0 * midpoints[i] + values[i + 1]);
  return out;
}

std::vector<double> cumulative_trapezoid(std::span<const double> values, double spacing) {
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    out[i + 1] = out[i] + 0.5 * spacing * (values[i] + values[i + 1]);
  return out;
}

}  // namespace noisectl
