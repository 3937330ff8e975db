#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "lattsite/oscillator.hpp"

using namespace lattsite::oscillator;

TEST_CASE("k1d symmetry and parity") {
  for (int m = 0; m <= 12; ++m) {
    for (int n = 0; n <= 12; ++n) {
      CHECK(k1d(m, n) == k1d(n, m));
      if ((m + n) % 2 == 1) CHECK(k1d(m, n) == 0.0);
    }
  }
}

TEST_CASE("k1d against the quadrature oracle") {
  double worst = 0.0;
  for (int m = 0; m <= 12; ++m)
    for (int n = 0; n <= 12; ++n) worst = std::max(worst, std::abs(k1d(m, n) - k1d_quadrature(m, n, 64)));
  CHECK(worst <= 1e-12);
}

TEST_CASE("k1d exact spots") {
  CHECK(k1d(0, 0) == 1.0);
  CHECK(k1d(1, 1) == 0.5);
  CHECK(k1d(2, 2) == 0.375);
  CHECK(k1d(2, 0) == doctest::Approx(-1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-15));
  CHECK(k1d(4, 0) == doctest::Approx(0.15309310892394865).epsilon(1e-14));
  CHECK(k1d(4, 2) == doctest::Approx(-0.2706329386826371).epsilon(1e-14));
  CHECK(k1d(6, 4) == doctest::Approx(-0.2246518302267283).epsilon(1e-14));
}

TEST_CASE("k1d large indices stay near the oracle") {
  // single-term closed form, exact up to rounding
  CHECK(std::abs(k1d(26, 0) - k1d_quadrature(26, 0, 96)) <= 1e-12);
  // general branch loses digits to cancellation, documented headroom
  CHECK(std::abs(k1d(20, 20) - k1d_quadrature(20, 20, 96)) <= 1e-8);
}

TEST_CASE("overlap4 spots and reduction to k1d") {
  CHECK(overlap4(0, 0, 0, 0) == 1.0);
  CHECK(overlap4(1, 1, 1, 1) == 0.75);
  CHECK(overlap4(2, 2, 1, 1) == 0.4375);
  CHECK(overlap4(2, 2, 2, 2) == 0.640625);
  CHECK(overlap4(4, 2, 1, 1) == doctest::Approx(-0.18944305707784598).epsilon(1e-14));
  for (int m = 0; m <= 10; ++m)
    for (int n = 0; n <= 10; ++n) CHECK(overlap4(m, n, 0, 0) == k1d(m, n));
}

TEST_CASE("overlap4 parity and index symmetry") {
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b)
      for (int c = 0; c <= 5; ++c)
        for (int d = 0; d <= 5; ++d) {
          const double v = overlap4(a, b, c, d);
          if ((a + b + c + d) % 2 == 1) CHECK(v == 0.0);
          CHECK(v == overlap4(d, c, b, a));
          CHECK(v == overlap4(b, a, d, c));
        }
}

TEST_CASE("K3d factorizes per axis") {
  const Mode g{0, 0, 0};
  CHECK(K3d(Mode{2, 0, 0}, g) == k1d(2, 0));
  CHECK(K3d(Mode{0, 2, 0}, g) == K3d(Mode{2, 0, 0}, g));
  CHECK(K3d(Mode{0, 0, 2}, g) == K3d(Mode{2, 0, 0}, g));
  CHECK(K3d(Mode{1, 1, 0}, Mode{1, 1, 0}) == 0.25);
  // odd per-axis total vanishes even when the 3-D total is even
  CHECK(K3d(Mode{1, 1, 0}, Mode{0, 1, 1}) == 0.0);
  CHECK(K3d(Mode{2, 1, 0}, Mode{0, 1, 2}) == k1d(2, 0) * k1d(1, 1) * k1d(0, 2));
}

TEST_CASE("mode enumeration") {
  for (int c = 0; c <= 6; ++c) {
    const auto modes = enumerate_modes(c);
    const int expected = (c + 3) * (c + 2) * (c + 1) / 6;
    CHECK(static_cast<int>(modes.size()) == expected);
    CHECK(modes.front() == Mode{0, 0, 0});
    for (std::size_t i = 1; i < modes.size(); ++i) CHECK(modes[i - 1] < modes[i]);
    for (const Mode& m : modes) CHECK(m.quanta() <= c);
  }
  CHECK_THROWS_AS(enumerate_modes(-1), std::invalid_argument);
}

TEST_CASE("matrix element table matches K3d") {
  const MatrixElementTable table(3);
  const auto& modes = table.modes();
  for (int i = 0; i < static_cast<int>(modes.size()); ++i)
    for (int j = 0; j < static_cast<int>(modes.size()); ++j) {
      CHECK(table.value(i, j) == K3d(modes[i], modes[j]));
      CHECK(table.value(i, j) == table.value(j, i));
    }
}

TEST_CASE("per-axis shell weights") {
  CHECK(shell_weight_closed_form(0) == 1.0);
  CHECK(shell_weight_closed_form(1) == 0.0);
  CHECK(shell_weight_closed_form(2) == 0.5);
  CHECK(shell_weight_closed_form(4) == 0.375);
  for (int e = 0; e <= 40; ++e) {
    double direct = 0.0;
    for (int m = 0; m <= e; ++m) direct += k1d(m, e - m) * k1d(m, e - m);
    const double tol = e <= 24 ? 1e-12 : 1e-9;
    CHECK(std::abs(direct - shell_weight_closed_form(e)) <= tol);
  }
  // diagonal identity: k1d(n, n) equals the shell weight at 2n
  for (int n = 0; n <= 12; ++n)
    CHECK(std::abs(k1d(n, n) - shell_weight_closed_form(2 * n)) <= 1e-12);
}

TEST_CASE("rejections") {
  CHECK_THROWS_AS(k1d(-1, 0), std::invalid_argument);
  CHECK_THROWS_AS(k1d_quadrature(0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(k1d_quadrature(-2, 0, 16), std::invalid_argument);
  CHECK_THROWS_AS(overlap4(0, -1, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(shell_weight_closed_form(-2), std::invalid_argument);
}
