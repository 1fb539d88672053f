#include <doctest.h>

#include <cmath>

#include "slitgrate/resonance.hpp"

using namespace slitgrate;

TEST_CASE("γ does not depend on the slit width") {
  const double kappa = 0.3;
  const cdouble k(3.0, -0.01);
  const cdouble g1 = gamma_fn(GratingConfig(1.5, 0.02), kappa, k, 0.0);
  const cdouble g2 = gamma_fn(GratingConfig(1.5, 0.003), kappa, k, 0.0);
  CHECK(std::abs(g1 - g2) < 1e-10 * std::abs(g1));
}

TEST_CASE("asymptotic seeds") {
  GratingConfig g(1.3, 0.02);
  const auto seeds = resonance_seeds(g, IncidenceSpec::angle(kPi / 6), 1);
  REQUIRE(seeds.size() == 2);
  CHECK(seeds[0].j == 1);
  CHECK(seeds[1].j == 2);
  CHECK(seeds[0].parity == Parity::Plus);
  CHECK(seeds[0].kappa == doctest::Approx(kPi / 2));
  // k̂⁽²⁾ is real and closer to mπ than k̂⁽¹⁾
  CHECK(seeds[1].k_hat.imag() == 0.0);
  CHECK(std::abs(seeds[1].k_hat - kPi) < std::abs(seeds[0].k_hat - kPi));
  CHECK(seeds[0].k_hat.imag() < 0.0);
  CHECK(parity_for_mode(2) == Parity::Minus);
  CHECK_THROWS_AS(asymptotic_resonances(GratingConfig(3.0, 0.11), 0.0, 2), Error);
}

TEST_CASE("refined roots are zeros of the tracked eigenvalue") {
  GratingConfig g(1.3, 0.02);
  const auto inc = IncidenceSpec::angle(kPi / 6);
  const auto seeds = resonance_seeds(g, inc, 1);
  for (const auto& s : seeds) {
    const ResonanceResult r = refine_root(g, inc, s);
    CHECK(r.residual < 1e-10);
    CHECK(r.kappa == doctest::Approx(r.k.real() * 0.5).epsilon(1e-10));
    CHECK(std::abs(lambda_eval(r.k, r.parity, r.kappa, g, r.j)) < 1e-9);
    CHECK(r.k.imag() < 0.0);
    CHECK(std::abs(r.k - s.k_hat) < ResonanceOptions{}.basin_radius);
  }
}

TEST_CASE("κ = 0 gives a trapped mode on the antisymmetric branch") {
  GratingConfig g(1.5, 0.02);
  const auto inc = IncidenceSpec::bloch(0.0);
  const auto seeds = resonance_seeds(g, inc, 1);
  const ResonanceResult r2 = refine_root(g, inc, seeds[1]);
  CHECK(std::abs(r2.k.imag()) < 1e-9);
  CHECK(r2.bic);
  CHECK(r2.region == Region::D1);
  const ResonanceResult r1 = refine_root(g, inc, seeds[0]);
  CHECK(!r1.bic);
  CHECK(r1.k.imag() < -1e-3);
}

TEST_CASE("roots do not depend on β₀") {
  GratingConfig g(1.5, 0.005);
  const auto inc = IncidenceSpec::angle(kPi / 6);
  ResonanceOptions o0, o1;
  o0.beta0 = 0.0;
  o1.beta0 = 1.0;
  for (int j : {1, 2}) {
    const auto r0 = refine_root(g, inc, resonance_seeds(g, inc, 1, o0)[j - 1], o0);
    const auto r1 = refine_root(g, inc, resonance_seeds(g, inc, 1, o1)[j - 1], o1);
    CHECK(std::abs(r0.k - r1.k) < 1e-8);
  }
}

TEST_CASE("first-branch linewidth is linear in ε") {
  GratingConfig g(1.5, 0.02);
  const ScalingReport rep =
      scaling_study(g, IncidenceSpec::angle(kPi / 6), 1, {0.02, 0.01, 0.005, 0.0025});
  CHECK(rep.im_k1.slope == doctest::Approx(1.0).epsilon(0.1));
  CHECK(rep.asymptotic_error.slope > 1.5);
  for (const auto& r : rep.branch2) CHECK(r.region == Region::D2);
}

TEST_CASE("line fit") {
  const SlopeFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.stderr_slope < 1e-12);
}
