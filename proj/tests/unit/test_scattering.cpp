#include <doctest.h>

#include <cmath>
#include <random>

#include "slitgrate/scattering.hpp"

using namespace slitgrate;

namespace {

double max_amplitude_diff(const SpectrumRecord& a, const SpectrumRecord& b) {
  REQUIRE(a.orders == b.orders);
  double m = 0.0;
  for (std::size_t i = 0; i < a.orders.size(); ++i) {
    m = std::max({m, std::abs(a.r[i] - b.r[i]), std::abs(a.t[i] - b.t[i])});
  }
  return m;
}

}  // namespace

TEST_CASE("reduced and direct solvers agree") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  int draws = 0;
  while (draws < 20) {
    const double d = 1.0 + 0.6 * ud(rng);
    const double eps = 0.005 + 0.035 * ud(rng);
    const double ell = draws % 2 == 0 ? 2.0 : 2.0 + 7.0 * ud(rng);
    if (!((ell + 1) * eps < d)) continue;
    GratingConfig g(d, eps, ell);
    const double b = g.b();
    const double kappa = (ud(rng) - 0.5) * b;
    const double k = 2.0 + 7.0 * ud(rng);
    const auto tab = build_table(g, kappa, k);
    if (tab.cutoff_distance < 1e-3 || tab.propagating.empty()) continue;
    if (std::abs(std::sin(k)) < 1e-3) continue;

    const auto ops = static_operators(16, 128, ell);
    const KernelSet ks(g, kappa, k);
    const ReducedSystem rs = build_reduced(ks, *ops);
    const ForcingData f = make_forcing(g, kappa, ops->basis);
    const auto a = diffraction_amplitudes(solve_reduced_exact(rs, f), tab, g);
    const auto c = diffraction_amplitudes(solve_direct(rs, *ops, f), tab, g);
    CHECK_MESSAGE(max_amplitude_diff(a, c) < 1e-8,
                  "d=" << d << " eps=" << eps << " ell=" << ell << " kappa=" << kappa
                       << " k=" << k);
    ++draws;
  }
}

TEST_CASE("energy is conserved") {
  GratingConfig g(1.3, 0.02);
  const auto inc = IncidenceSpec::angle(kPi / 6);
  for (double k : {2.3, 2.88, 3.0593, 3.5, 5.0, 6.1163, 6.9}) {
    const auto rec = spectrum_point(g, inc, k);
    REQUIRE(rec.error.empty());
    CHECK(rec.energy_defect < 1e-10);
    CHECK(rec.abs_t == doctest::Approx(std::sqrt(rec.abs_t2)));
  }
}

TEST_CASE("transmission is even in κ") {
  GratingConfig g(1.5, 0.01);
  for (double kappa : {0.2, 0.9, 1.7}) {
    for (double k : {2.5, 3.11, 4.4}) {
      const auto p = spectrum_point(g, IncidenceSpec::bloch(kappa), k);
      const auto m = spectrum_point(g, IncidenceSpec::bloch(-kappa), k);
      REQUIRE(p.error.empty());
      REQUIRE(m.error.empty());
      CHECK(std::abs(p.abs_t - m.abs_t) < 1e-8);
    }
  }
}

TEST_CASE("amplitudes do not depend on β₀") {
  GratingConfig g(1.3, 0.02);
  ScatteringOptions o0, o1;
  o0.beta0 = 0.0;
  o1.beta0 = 1.0;
  const auto inc = IncidenceSpec::angle(kPi / 6);
  for (double k : {2.5, 3.05, 5.5}) {
    const auto a = spectrum_point(g, inc, k, o0);
    const auto b = spectrum_point(g, inc, k, o1);
    CHECK(max_amplitude_diff(a, b) < 1e-8);
  }
}

TEST_CASE("leading-order amplitudes are O(ε) accurate off resonance") {
  const auto inc = IncidenceSpec::angle(kPi / 6);
  double prev = 0.0;
  for (double eps : {0.02, 0.01, 0.005}) {
    GratingConfig g(1.3, eps);
    ScatteringOptions lo;
    lo.exact = false;
    const auto a = spectrum_point(g, inc, 2.3);
    const auto b = spectrum_point(g, inc, 2.3, lo);
    const double rel = std::abs(a.abs_t - b.abs_t) / a.abs_t;
    CHECK(rel < 10 * eps);
    if (prev > 0.0) CHECK(rel < prev);
    prev = rel;
  }
}

TEST_CASE("sweeps are independent of the thread count") {
  GratingConfig g(1.3, 0.02);
  const auto inc = IncidenceSpec::angle(kPi / 6);
  const auto ks = linspace(2.0, 7.0, 24);
  const auto a = spectrum_sweep(g, inc, ks, {}, 1);
  const auto b = spectrum_sweep(g, inc, ks, {}, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].k == b[i].k);
    CHECK(a[i].abs_t == b[i].abs_t);
  }
}

TEST_CASE("points on a Rayleigh cutoff are flagged") {
  GratingConfig g(1.3, 0.02);
  const auto inc = IncidenceSpec::angle(kPi / 6);
  const double kc = rayleigh_cutoffs(g, inc, 2.0, 7.0).front();
  const auto rec = spectrum_point(g, inc, kc);
  CHECK(rec.cutoff_flag);
}

TEST_CASE("w diagnostic near the sharp resonance") {
  GratingConfig g(1.5, 0.005);
  const auto inc = IncidenceSpec::angle(3 * kPi / 8);
  const double k = 3.12;
  const double kappa = inc.kappa_at(k);
  const auto ops = static_operators(16, 128, 2.0);
  const ReducedSystem rs = build_reduced(KernelSet(g, kappa, k), *ops);
  const auto sol = solve_reduced_exact(rs, make_forcing(g, kappa, ops->basis));
  const WDiagnostic w = w_diagnostic(sol, rs, Parity::Plus);
  const double phase = std::abs(std::arg(w.w1 / w.w2));
  CHECK(phase > kPi - 0.2);
  CHECK(std::abs(w.w1) / w.delta < 10.0);
  CHECK(std::abs(w.w1 + w.w2) < 0.1 * std::abs(w.w1));
}

TEST_CASE("feature scans") {
  GratingConfig g(1.3, 0.02);
  const auto inc = IncidenceSpec::angle(kPi / 6);
  FanoOptions o;
  o.grid = 121;
  const FeatureReport none = fano_scan(g, inc, 4.0, 4.5, o);
  CHECK(none.kind == FeatureKind::None);
  const FeatureReport fano = fano_scan(g, inc, 3.0, 3.15, o);
  CHECK(fano.kind == FeatureKind::Fano);
  REQUIRE(fano.resonance.has_value());
  CHECK(std::abs(fano.center - fano.resonance->k.real()) < g.eps());
  const auto kinks = detect_rayleigh_kinks(g, inc, 2.0, 4.0);
  REQUIRE(kinks.size() == 1);
  CHECK(kinks[0].detected);
  CHECK_THROWS_AS(fano_scan(g, inc, 3.0, 3.0, o), Error);
}
