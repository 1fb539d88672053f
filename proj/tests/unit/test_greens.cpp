#include <doctest.h>

#include <cmath>
#include <random>

#include "slitgrate/greens.hpp"

using namespace slitgrate;

namespace {

// Quasi-periodic exterior kernel from its defining Fourier series,
//   G^e(Z) = (1/d) Σ_n e^{i κ_n ε Z} / (i ζ_n),
// with only the textbook identity Σ_{n≥1} cos(nu)/n = -ln|2 sin(u/2)| used to
// make the sum converge; every other term is summed directly.
cdouble exterior_brute(const GratingConfig& g, double kappa, cdouble k, double z,
                       int n_terms) {
  const double b = g.b();
  const double u = b * g.eps() * z;
  cdouble s = 1.0 / (cdouble(0, 1) * zeta_n(kappa, k, 0, b));
  for (int n = n_terms; n >= 1; --n) {
    for (int sg : {1, -1}) {
      s += (1.0 / (cdouble(0, 1) * zeta_n(kappa, k, sg * n, b)) + 1.0 / (b * n)) *
           std::polar(1.0, sg * n * u);
    }
  }
  s += (2.0 / b) * std::log(std::abs(2.0 * std::sin(u / 2)));
  return std::polar(1.0, kappa * g.eps() * z) / g.period() * s;
}

struct ModeSums {
  cdouble self;
  cdouble cross;
};

// Neumann waveguide mode expansion of the slit kernels. The cosine products
// make the partial sums oscillate with O(1/M) amplitude, so the result is the
// mean of the partial sums over M ∈ (m0, 2 m0].
ModeSums interior_brute(double eps, cdouble k, double x, double y, int m0) {
  cdouble s = std::cos(k) / (k * std::sin(k));
  cdouble c = 1.0 / (k * std::sin(k));
  cdouble mean_s(0, 0), mean_c(0, 0);
  for (int m = 1; m <= 2 * m0; ++m) {
    const double q = m * kPi / eps;
    const cdouble g = std::sqrt(cdouble(q * q) - k * k);
    const double cc = 2.0 * std::cos(m * kPi * (x + 0.5)) * std::cos(m * kPi * (y + 0.5));
    const cdouble t = std::exp(-2.0 * g);
    s -= cc * (1.0 + t) / (1.0 - t) / g;
    c -= cc * 2.0 * std::exp(-g) / (1.0 - t) / g;
    if (m > m0) {
      mean_s += s;
      mean_c += c;
    }
  }
  return {mean_s / (eps * m0), mean_c / (eps * m0)};
}

}  // namespace

TEST_CASE("accelerated exterior kernel matches the direct lattice sum") {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  double worst = 0.0;
  int draws = 0;
  while (draws < 20) {
    const double d = 1.0 + 0.6 * ud(rng);
    const double eps = 0.005 + 0.045 * ud(rng);
    const double ell = 2.0 + 7.0 * ud(rng);
    if (!((ell + 1) * eps < d)) continue;
    GratingConfig g(d, eps, ell);
    const double b = g.b();
    const double kappa = (ud(rng) - 0.5) * b;
    const double kr = 1.0 + 8.0 * ud(rng);
    const cdouble k(kr, draws % 4 == 3 ? -0.02 * ud(rng) : 0.0);
    bool near_cutoff = false;
    for (int n = -6; n <= 6; ++n) near_cutoff |= std::abs(kr - std::abs(kappa + n * b)) < 1e-2;
    if (near_cutoff) continue;
    const double z = (ud(rng) < 0.5 ? -1 : 1) * (0.05 + (ell + 0.9) * ud(rng));

    KernelSet ks(g, kappa, k, {}, false);
    const cdouble ref = exterior_brute(g, kappa, k, z, 1000000);
    const double rel = std::abs(ks.greens_exterior(z) - ref) / std::abs(ref);
    worst = std::max(worst, rel);
    CHECK_MESSAGE(rel < 1e-10, "d=" << d << " eps=" << eps << " kappa=" << kappa
                                    << " k=" << k << " z=" << z);
    ++draws;
  }
  MESSAGE("worst relative error " << worst);
}

TEST_CASE("exterior kernel splits into log part and smooth remainder") {
  GratingConfig g(1.3, 0.02);
  const double kappa = 0.4;
  const cdouble k(3.0, 0.0);
  KernelSet ks(g, kappa, k);
  for (double z : {0.3, -0.8, 1.7, 2.5}) {
    // G^e(Z) = (1/π) ln|Z| + r_e(Z) + β_e, r_e(0) = 0
    const cdouble lhs = ks.greens_exterior(z);
    const cdouble rhs = std::log(std::abs(z)) / kPi + ks.remainder_re(z) + ks.beta_e();
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(lhs));
    CHECK(std::abs(ks.remainder_re(1e-9)) < 1e-7);
    const auto [p, m] = ks.remainder_re_pair(z);
    CHECK(std::abs(p - ks.remainder_re(z)) < 1e-13);
    CHECK(std::abs(m - ks.remainder_re(-z)) < 1e-13);
  }
}

TEST_CASE("interior closed form matches the waveguide mode series") {
  for (double eps : {0.02, 0.05}) {
    for (cdouble k : {cdouble(3.0, 0.0), cdouble(3.05, -0.01), cdouble(6.0, -0.1)}) {
      GratingConfig g(1.5, eps);
      KernelSet ks(g, 0.0, k);
      for (auto [x, y] : {std::pair{0.1, -0.3}, {0.45, 0.4}, {-0.2, 0.35}, {-0.49, 0.48}}) {
        const ModeSums ref = interior_brute(eps, k, x, y, 200000);
        CHECK(std::abs(ks.greens_interior(x, y) - ref.self) < 1e-8 * std::abs(ref.self));
        CHECK(std::abs(ks.greens_interior_cross(x, y) - ref.cross) <
              1e-8 * std::abs(ref.cross));
      }
    }
  }
}

TEST_CASE("interior kernel is singular on the diagonal and symmetric") {
  GratingConfig g(1.3, 0.02);
  KernelSet ks(g, 0.0, cdouble(3.0, 0.0));
  CHECK_THROWS_AS(ks.greens_interior(0.2, 0.2), Error);
  CHECK(std::abs(ks.greens_interior(0.1, -0.3) - ks.greens_interior(-0.3, 0.1)) < 1e-12);
  CHECK(std::abs(ks.greens_interior_cross(0.1, -0.3) - ks.greens_interior_cross(-0.3, 0.1)) <
        1e-12);
  // the smooth remainder of the interior kernel is O(ε²)
  GratingConfig g2(1.3, 0.01);
  KernelSet ks2(g2, 0.0, cdouble(3.0, 0.0));
  const double r1 = std::abs(ks.remainder_ri(0.1, -0.3));
  const double r2 = std::abs(ks2.remainder_ri(0.1, -0.3));
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("waveguide poles are rejected for the interior kernels") {
  GratingConfig g(1.3, 0.02);
  CHECK_THROWS_AS(KernelSet(g, 0.0, cdouble(kPi, 0.0)), Error);
  // the exterior part alone is fine there
  CHECK_NOTHROW(beta_e(0.0, cdouble(kPi, 0.0), g));
}
