#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qce/oracles.hpp"
#include "qce/qce_geometry.hpp"
#include "qce/quartic.hpp"

using namespace qce;

TEST_CASE("quartic with known roots") {
  // (x-1)(x+2)(x-3)(x+0.5) = x^4 - 1.5x^3 - 6x^2 + 3.5x + 3
  auto r = real_quartic_roots(1, -1.5, -6, 3.5, 3);
  REQUIRE(r.size() == 4);
  std::vector<double> want{-2, -0.5, 1, 3};
  for (int i = 0; i < 4; ++i) CHECK(r[i] == doctest::Approx(want[i]).epsilon(1e-12));

  CHECK(real_quartic_roots(1, 0, 0, 0, 1).empty());  // x^4 + 1
  auto two = real_quartic_roots(2, 0, -2, 0, 0);      // 2x^2(x^2 - 1)
  CHECK(std::find_if(two.begin(), two.end(), [](double x) { return std::abs(x - 1) < 1e-9; }) !=
        two.end());
}

TEST_CASE("cubic") {
  auto r = real_cubic_roots(-6, 11, -6);  // 1, 2, 3
  REQUIRE(r.size() == 3);
  CHECK(r[0] == doctest::Approx(1));
  CHECK(r[1] == doctest::Approx(2));
  CHECK(r[2] == doctest::Approx(3));
  CHECK(real_cubic_roots(0, 1, 0).size() == 1);  // x^3 + x
}

TEST_CASE("stationary root matches a sign-change scan") {
  Rng rng(2024);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    int L = 4 << rng.uniform_pow2(4);
    double c = std::cos(std::numbers::pi / L);
    double v = (2 * rng.uniform() - 1) * 3;
    double beta = 4 * rng.uniform();
    auto root = quartic_stationary_root(c + 0.5, v, beta, L);
    auto scan = oracle::scan_derivative_roots(v, beta, L, 6.0, 200000);
    REQUIRE(scan.size() <= 1);
    if (scan.empty()) {
      // h' never changes sign on (c, 6]; any root must be beyond the scan
      if (root.radius) CHECK(*root.radius > 6.0 - 1e-3);
      continue;
    }
    REQUIRE(root.radius.has_value());
    CHECK(std::abs(*root.radius - scan[0]) < 1e-4);
    CHECK(std::abs(oracle::outer_derivative(v, beta, L, *root.radius)) < 1e-7);
    ++checked;
  }
  CHECK(checked > 300);
}

TEST_CASE("no penalty: root at sqrt(c^2 + v^2)") {
  for (int L : {4, 8, 16}) {
    double c = std::cos(std::numbers::pi / L);
    for (double v : {0.1, 0.5, 2.0}) {
      auto root = quartic_stationary_root(c + 0.2, v, 0.0, L);
      REQUIRE(root.radius.has_value());
      CHECK(*root.radius == doctest::Approx(std::hypot(c, v)).epsilon(1e-12));
      CHECK_FALSE(root.used_fallback);
    }
  }
}

TEST_CASE("v = beta = 0 has no stationary point") {
  auto root = quartic_stationary_root(1.0, 0.0, 0.0, 8);
  CHECK_FALSE(root.radius.has_value());
}
