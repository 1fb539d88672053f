#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "slitgrate/special.hpp"

using namespace slitgrate::special;
using cd = std::complex<double>;

namespace {

// Li_p(e^{iu}) by brute force; fine for p >= 3 where the tail is O(N^{1-p})
cd polylog_brute(int p, double u, int n_terms) {
  cd s(0.0, 0.0);
  for (int n = n_terms; n >= 1; --n) s += std::polar(1.0, n * u) / std::pow(n, p);
  return s;
}

}  // namespace

TEST_CASE("zeta at integers") {
  CHECK(zeta_int(2) == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-15));
  CHECK(zeta_int(0) == -0.5);
  CHECK(zeta_int(-1) == doctest::Approx(-1.0 / 12).epsilon(1e-14));
  CHECK(zeta_int(-3) == doctest::Approx(1.0 / 120).epsilon(1e-14));
  CHECK(zeta_int(-2) == 0.0);
  CHECK_THROWS(zeta_int(1));
}

TEST_CASE("polylog on the unit circle against direct sums") {
  for (int p : {3, 4, 5, 8}) {
    for (double u : {0.0, 1e-6, 0.3, -1.2, 2.9, 3.1, 7.0}) {
      const cd ref = polylog_brute(p, u, 200000);
      CHECK(std::abs(polylog_unit(p, u) - ref) < 1e-10);
    }
  }
  // Li_2(e^{iu}) real part has the closed form π²/6 - u(2π - u)/4 on [0, 2π]
  for (double u : {0.1, 1.0, 3.0, 5.0}) {
    CHECK(polylog_unit(2, u).real() ==
          doctest::Approx(M_PI * M_PI / 6 - u * (2 * M_PI - u) / 4).epsilon(1e-13));
  }
}

TEST_CASE("polylog combination matches the term-by-term sum") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> w(-1.0, 1.0), uu(-M_PI, M_PI);
  std::vector<cd> weights;
  for (int i = 0; i < 9; ++i) weights.emplace_back(w(rng), w(rng));
  PolylogCombination f(weights, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const double u = uu(rng);
    cd ref(0.0, 0.0);
    for (int i = 0; i < 9; ++i) {
      const int p = 2 + i;
      const cd li = polylog_unit(p, u);
      const cd sp = p % 2 == 1 ? cd(2 * li.real(), 0.0) : cd(0.0, 2 * li.imag());
      ref += weights[i] * sp;
    }
    const auto [a, b] = f.pair(u);
    CHECK(std::abs(a - ref) < 1e-12 * (1 + std::abs(ref)));
    CHECK(std::abs(b - f(-u)) < 1e-14 * (1 + std::abs(ref)));
  }
}

TEST_CASE("log_sinc") {
  CHECK(log_sinc(0.0) == 0.0);
  CHECK(log_sinc(1e-5) == doctest::Approx(std::log(std::sin(1e-5) / 1e-5)).epsilon(1e-12));
  CHECK(log_sinc(-2.0) == doctest::Approx(std::log(std::sin(2.0) / 2.0)));
  CHECK(reduce_angle(3 * M_PI) == doctest::Approx(M_PI));
}
