#pragma once

#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "slitgrate/error.hpp"

namespace slitgrate {

using cdouble = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Geometry of one grating period. The slab has unit thickness; the two slits
/// have width eps and are centred at x1 = -ell*eps/2 and +ell*eps/2.
class GratingConfig {
 public:
  GratingConfig(double period, double eps, double ell = 2.0);

  double period() const noexcept { return d_; }
  double eps() const noexcept { return eps_; }
  double ell() const noexcept { return ell_; }
  /// Reciprocal lattice constant 2π/d.
  double b() const noexcept { return 2.0 * kPi / d_; }

  GratingConfig with_eps(double eps) const { return {d_, eps, ell_}; }

 private:
  double d_;
  double eps_;
  double ell_;
};

/// Either a fixed incidence angle (κ = k sinθ per wavenumber) or a fixed
/// Bloch wavenumber.
class IncidenceSpec {
 public:
  static IncidenceSpec angle(double theta);
  static IncidenceSpec bloch(double kappa);

  bool is_angle() const noexcept { return angle_mode_; }
  double theta() const noexcept { return value_; }
  double fixed_kappa() const noexcept { return value_; }

  /// Bloch wavenumber seen at real wavenumber k.
  double kappa_at(double k) const noexcept;

 private:
  IncidenceSpec(bool angle_mode, double value)
      : angle_mode_(angle_mode), value_(value) {}

  bool angle_mode_;
  double value_;
};

enum class Region { BelowContinuum, D1, D2 };

const char* to_string(Region region) noexcept;

/// Diffraction-order bookkeeping at one (κ, k).
struct DiffractionTable {
  double kappa = 0.0;
  cdouble k;
  double b = 0.0;
  int n_min = 0;  ///< orders tabulated are n_min..n_max
  std::vector<double> kappa_n;
  std::vector<cdouble> zeta_n;
  std::vector<int> propagating;  ///< Z1
  std::vector<int> evanescent;   ///< Z2 restricted to the tabulated range
  Region region = Region::BelowContinuum;
  double cutoff_distance = 0.0;  ///< min_n | Re k - |κ_n| |
  bool cutoff_flag = false;      ///< cutoff_distance below the guard band
  bool zone_edge_flag = false;   ///< κ sits on the Brillouin-zone edge b/2

  int n_max() const noexcept {
    return n_min + static_cast<int>(kappa_n.size()) - 1;
  }
  const cdouble& zeta(int n) const { return zeta_n.at(n - n_min); }
  double kappa_of(int n) const { return kappa_n.at(n - n_min); }
};

/// Square root analytic on C \ {-it : t >= 0} with sqrt(1) = 1.
/// Throws ErrorKind::BranchCut on the excluded ray (including 0).
cdouble branch_sqrt(cdouble z);

/// ζ_n = sqrt(k² − (κ + n b)²) on the branch above. Throws RayleighCutoff
/// when ζ_n vanishes.
cdouble zeta_n(double kappa, cdouble k, int n, double b);

/// Bloch wavenumber folded into (−b/2, b/2].
double fold_kappa(double kappa, double b) noexcept;

/// Region from the number of propagating orders (invariant under κ folding).
Region classify_region(double kappa, double k, double b) noexcept;

/// Builds the table for real k. Orders |n| <= extra_orders beyond the
/// propagating band are tabulated as well.
DiffractionTable build_table(const GratingConfig& cfg, double kappa, double k,
                             double cutoff_guard = 1e-6, int extra_orders = 4);

/// Cutoff wavenumbers k = |κ(k) + n b| inside (k_lo, k_hi) for the given
/// incidence, sorted ascending.
std::vector<double> rayleigh_cutoffs(const GratingConfig& cfg,
                                     const IncidenceSpec& inc, double k_lo,
                                     double k_hi);

}  // namespace slitgrate
