#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "noisectl/cubic.hpp"

using noisectl::real_cubic_roots;

TEST_SUITE("cubic") {

TEST_CASE("three distinct roots") {
  // (x - 1)(x - 2)(x - 3)
  const auto r = real_cubic_roots(1, -6, 11, -6);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(r[2] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("one real root") {
  // x^3 + x + 2 = (x + 1)(x^2 - x + 2)
  const auto r = real_cubic_roots(1, 0, 1, 2);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("repeated roots") {
  const auto triple = real_cubic_roots(2, -6, 6, -2);  // 2 (x - 1)^3
  REQUIRE(triple.size() == 1);
  CHECK(triple[0] == doctest::Approx(1.0).epsilon(1e-6));
  const auto dbl = real_cubic_roots(1, 0, -3, 2);  // (x - 1)^2 (x + 2)
  REQUIRE(dbl.size() == 2);
  CHECK(dbl[0] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(dbl[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("degenerate leading coefficient") {
  const auto q = real_cubic_roots(0, 1, 0, -4);
  REQUIRE(q.size() == 2);
  CHECK(q[0] == doctest::Approx(-2.0));
  CHECK(q[1] == doctest::Approx(2.0));
  const auto l = real_cubic_roots(0, 0, 2, -1);
  REQUIRE(l.size() == 1);
  CHECK(l[0] == doctest::Approx(0.5));
  CHECK(real_cubic_roots(0, 1, 0, 1).empty());
}

TEST_CASE("random cubics built from known roots") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 200; ++k) {
    double a = u(rng), b = u(rng), c = u(rng);
    if (std::abs(a - b) < 0.05 || std::abs(b - c) < 0.05 || std::abs(a - c) < 0.05) continue;
    const double lead = 0.5 + std::abs(u(rng));
    const auto r = real_cubic_roots(lead, -lead * (a + b + c), lead * (a * b + b * c + a * c), -lead * a * b * c);
    REQUIRE(r.size() == 3);
    std::array<double, 3> want{a, b, c};
    std::sort(want.begin(), want.end());
    for (int i = 0; i < 3; ++i) CHECK(r[i] == doctest::Approx(want[i]).epsilon(1e-9));
  }
}

}
