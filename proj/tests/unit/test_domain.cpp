#include <doctest.h>

#include <cmath>

#include "slitgrate/domain.hpp"

using namespace slitgrate;

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(GratingConfig(1.0, 0.0), Error);
  CHECK_THROWS_AS(GratingConfig(1.0, 0.2, 6.0), Error);  // slits overlap the next period
  CHECK_THROWS_AS(GratingConfig(1.0, 0.05, 0.5), Error); // slits overlap each other
  GratingConfig g(1.3, 0.02);
  CHECK(g.b() == doctest::Approx(2 * kPi / 1.3));
  CHECK(g.with_eps(0.01).eps() == 0.01);
}

TEST_CASE("zeta on the physical branch") {
  const double b = 2 * kPi;
  CHECK(std::abs(zeta_n(0.0, 3.0, 0, b) - cdouble(3.0, 0.0)) < 1e-14);
  // evanescent orders decay: ζ = i sqrt((κ+nb)² - k²)
  const cdouble z = zeta_n(0.0, 3.0, 1, b);
  CHECK(std::abs(z.real()) < 1e-14);
  CHECK(z.imag() == doctest::Approx(std::sqrt(b * b - 9.0)));
  // continuation into Im k < 0 keeps Re ζ_0 > 0
  const cdouble zc = zeta_n(0.0, cdouble(3.0, -0.1), 0, b);
  CHECK(zc.real() > 0.0);
  CHECK_THROWS_AS(zeta_n(0.0, 2 * kPi, 1, b), Error);
}

TEST_CASE("branch_sqrt excludes the negative imaginary axis") {
  CHECK(std::abs(branch_sqrt(cdouble(4, 0)) - 2.0) < 1e-15);
  CHECK(std::abs(branch_sqrt(cdouble(-4, 0)) - cdouble(0, 2)) < 1e-15);
  // left of the cut the root is continued from the upper half plane
  const cdouble w = branch_sqrt(cdouble(-1e-3, -1.0));
  CHECK(w.real() < 0.0);
  CHECK_THROWS_AS(branch_sqrt(cdouble(0, -1)), Error);
  CHECK_THROWS_AS(branch_sqrt(cdouble(0, 0)), Error);
}

TEST_CASE("region bookkeeping") {
  GratingConfig g(1.3, 0.02);
  const double b = g.b();
  // θ = π/6: first cutoff where k = b - k/2
  const double k_cut = b / 1.5;
  CHECK(classify_region(0.5 * 3.0, 3.0, b) == Region::D1);
  CHECK(classify_region(0.5 * 3.5, 3.5, b) == Region::D2);
  auto cuts = rayleigh_cutoffs(g, IncidenceSpec::angle(kPi / 6), 2.0, 7.0);
  REQUIRE(cuts.size() >= 2);
  CHECK(cuts[0] == doctest::Approx(k_cut).epsilon(1e-12));
  CHECK(cuts[1] == doctest::Approx(2 * b / 1.5).epsilon(1e-12));

  auto t = build_table(g, 1.5, 3.0);
  CHECK(t.region == Region::D1);
  CHECK(t.propagating.size() == 1);
  CHECK(!t.cutoff_flag);
  auto near = build_table(g, 0.5 * k_cut, k_cut * (1 + 1e-9));
  CHECK(near.cutoff_flag);
}

TEST_CASE("kappa folding") {
  const double b = 2.0;
  CHECK(fold_kappa(1.5, b) == doctest::Approx(-0.5));
  CHECK(fold_kappa(1.0, b) == doctest::Approx(1.0));
  CHECK(fold_kappa(-1.0, b) == doctest::Approx(1.0));
  // the region does not depend on the representative
  CHECK(classify_region(0.3, 4.0, b) == classify_region(0.3 + 2 * b, 4.0, b));
}
