#pragma once

#include <utility>
#include <vector>

#include "slitgrate/domain.hpp"
#include "slitgrate/special.hpp"

namespace slitgrate {

struct SeriesOptions {
  double tol = 1e-12;             ///< tail tolerance of every truncated series
  int max_lattice_terms = 1000000;
  int expansion_order = 8;        ///< orders of 1/|n| removed analytically
  double waveguide_guard = 1e-12; ///< minimum |sin k|
};

/// Green's kernels on the rescaled aperture I = (-1/2, 1/2) for one (κ, k, ε).
///
/// The exterior kernel is a difference kernel G^e(Z), Z = X - Y (cross-slit
/// blocks use Z = X - Y ± ell). Its lattice sum is accelerated by removing
/// the large-|n| expansion of 1/(iζ_n),
///
///   1/(iζ_n) ~ -(1/b) Σ_p g_{p-1} sgn(n)^{p-1} / |n|^p,
///
/// and resumming the removed part with unit-circle polylogarithms. The p = 1
/// term produces the logarithm, p = 2 the sgn(n)κ/|bn|² correction; the rest
/// decays like |n|^{-P-1} and is summed directly.
///
/// Immutable after construction; evaluators are safe to call concurrently.
class KernelSet {
 public:
  /// With `interior = false` only the exterior kernel and β_e are built, so
  /// k may sit on a waveguide pole sin k = 0.
  KernelSet(const GratingConfig& cfg, double kappa, cdouble k,
            const SeriesOptions& opts = {}, bool interior = true);

  const GratingConfig& config() const noexcept { return cfg_; }
  double kappa() const noexcept { return kappa_; }
  cdouble k() const noexcept { return k_; }
  double eps() const noexcept { return cfg_.eps(); }

  cdouble beta_e() const noexcept { return beta_e_; }
  cdouble beta_i() const noexcept { return beta_i_; }
  cdouble beta_tilde() const noexcept { return beta_tilde_; }

  /// Number of explicitly summed lattice orders on each side of n = 0.
  int lattice_terms() const noexcept { return static_cast<int>(d_plus_.size()); }
  /// Estimated magnitude of the discarded lattice tail.
  double lattice_tail() const noexcept { return lattice_tail_; }

  cdouble greens_exterior(double z) const;
  /// r_e(Z) = G^e(Z) - β_e - ln|Z|/π, equal to 0 at Z = 0.
  cdouble remainder_re(double z) const;
  /// (r_e(z), r_e(-z)) sharing one set of polylogarithm evaluations.
  std::pair<cdouble, cdouble> remainder_re_pair(double z) const;

  cdouble greens_interior(double x, double y) const;
  /// r_i = G^i - β_i - (1/π)[ln|sin(π(X-Y)/2)| + ln|sin(π(X+Y+1)/2)|].
  cdouble remainder_ri(double x, double y) const;
  /// r_i splits as f(X-Y) + f(X+Y+1) + (exponentially small mode sum);
  /// this returns the even function f(θ).
  cdouble interior_series(double theta) const;
  /// The mode sum part of r_i; zero when no mode exceeds the tolerance.
  cdouble interior_modes(double x, double y) const;
  bool has_interior_modes() const noexcept { return !ri_exp_.empty(); }
  bool has_cross_modes() const noexcept { return !ri_cross_exp_.empty(); }

  cdouble greens_interior_cross(double x, double y) const;
  /// r̃_i = G̃^i - β̃ (exponentially small in 1/ε).
  cdouble remainder_ri_cross(double x, double y) const;

 private:
  /// Regular part of d·(e^{-iκεZ} G^e) after removing (2/b) ln|u_r|, u = bεZ.
  cdouble exterior_smooth(double u) const;
  std::pair<cdouble, cdouble> exterior_smooth_pair(double u) const;

  GratingConfig cfg_;
  double kappa_;
  cdouble k_;
  cdouble c0_;                   // 1/(iζ_0)
  std::vector<cdouble> g_;       // expansion coefficients g_0..g_{P-1}
  std::vector<cdouble> d_plus_;  // 1/(iζ_n) minus expansion, n = 1, 2, ...
  std::vector<cdouble> d_minus_; // same for n = -1, -2, ...
  double lattice_tail_ = 0.0;
  cdouble beta_e_;
  cdouble beta_i_;
  cdouble beta_tilde_;
  std::vector<cdouble> ri_coeff_;     // c_j (kε/π)^{2j}, j = 1..J
  std::vector<cdouble> ri_exp_;       // (coth γ_m - 1)/γ_m, m = 1..M
  std::vector<cdouble> ri_cross_exp_; // 1/(γ_m sinh γ_m), m = 1..M
  special::PolylogCombination exterior_poly_;  // Σ_{p>=2} (-g_{p-1}/b) S_p
  special::PolylogCombination interior_poly_;  // -(1/π) Σ_j c_j (kε/π)^{2j} Re Li_{2j+1}
};

/// Convenience wrappers with the argument order used in the documentation.
cdouble beta_e(double kappa, cdouble k, const GratingConfig& cfg,
               const SeriesOptions& opts = {});
cdouble greens_exterior(double z, double kappa, cdouble k,
                        const GratingConfig& cfg);
cdouble remainder_re(double z, double kappa, cdouble k, const GratingConfig& cfg);
cdouble greens_interior(double x, double y, cdouble k, const GratingConfig& cfg);
cdouble greens_interior_cross(double x, double y, cdouble k,
                              const GratingConfig& cfg);
cdouble remainder_ri(double x, double y, cdouble k, const GratingConfig& cfg);

}  // namespace slitgrate
