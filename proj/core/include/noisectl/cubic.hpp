#pragma once

#include <vector>

namespace noisectl {

/// Real roots of c3 x^3 + c2 x^2 + c1 x + c0 = 0 in ascending order, each
/// repeated root reported once. Uses the trigonometric form when there are
/// three real roots and Cardano's formula otherwise, followed by one Newton
/// polish. Falls back to the quadratic/linear formula when c3 == 0.
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0);

}  // namespace noisectl
