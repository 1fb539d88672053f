#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slitgrate/resonance.hpp"

namespace slitgrate {

struct ScatteringOptions {
  DiscretizationOptions disc;
  std::optional<double> beta0;
  double det_guard = 1e-13;     ///< relative guard on det 𝕄_σ
  double direct_margin = 1e3;   ///< switch to the direct solver this far above the guard
  double cutoff_guard = 1e-6;
  bool exact = true;            ///< exact aperture moments vs leading-order amplitudes
};

/// Galerkin data of f^±(X) = -e^{iκε(X ± ℓ/2)}: entries ⟨f^±, w_m⟩.
struct ForcingData {
  double kappa = 0.0;
  double eps = 0.0;
  double ell = 2.0;
  Eigen::VectorXcd f_minus;
  Eigen::VectorXcd f_plus;

  /// Pointwise value of f^- (sign < 0) or f^+ (sign > 0).
  cdouble value(int sign, double x) const;
  /// f̃ = [f^-, f^+] as one block vector.
  Eigen::VectorXcd stacked() const;
};

ForcingData make_forcing(const GratingConfig& cfg, double kappa, const ApertureBasis& basis);

struct ScatteringSolution {
  double kappa = 0.0;
  double k = 0.0;
  double eps = 0.0;
  double ell = 2.0;
  /// Parity densities [φ_σ^-, φ_σ^+] (2N basis coefficients) and their moments.
  Eigen::VectorXcd phi_plus;
  Eigen::VectorXcd phi_minus;
  Eigen::Vector2cd moments_plus;
  Eigen::Vector2cd moments_minus;
  /// φ₁^± (upper apertures) and φ₂^± (lower apertures).
  Eigen::VectorXcd phi1_minus, phi1_plus, phi2_minus, phi2_plus;
  cdouble r_hat_minus, r_hat_plus, t_hat_minus, t_hat_plus;
  std::string solver;
};

/// Exact 2×2 moment reduction per parity followed by density reconstruction.
ScatteringSolution solve_reduced_exact(const ReducedSystem& rs, const ForcingData& f,
                                       double det_guard = 1e-13);

/// Full 4N×4N Galerkin system 𝕋φ = ε⁻¹[2f^-, 2f^+, 0, 0].
ScatteringSolution solve_direct(const ReducedSystem& rs, const StaticOperators& ops,
                                const ForcingData& f);

/// Assemble and solve at real (κ, k). Falls back to the direct solver when
/// det 𝕄_σ is within `direct_margin` of the guard.
ScatteringSolution solve(const GratingConfig& cfg, double kappa, double k,
                         const ScatteringOptions& opts = {});

struct SpectrumRecord {
  double k = 0.0;
  double kappa = 0.0;
  Region region = Region::BelowContinuum;
  std::vector<int> orders;          ///< propagating orders Z1
  std::vector<cdouble> r;
  std::vector<cdouble> t;
  double abs_r2 = 0.0;
  double abs_t2 = 0.0;
  double abs_t = 0.0;
  double energy_defect = 0.0;
  bool cutoff_flag = false;
  std::string solver;
  std::string error;                ///< non-empty when the point failed

  cdouble t0() const;
};

SpectrumRecord diffraction_amplitudes(const ScatteringSolution& sol,
                                      const DiffractionTable& table,
                                      const GratingConfig& cfg, bool exact = true);

/// One spectrum point; numerical failures are recorded in `error`.
SpectrumRecord spectrum_point(const GratingConfig& cfg, const IncidenceSpec& inc,
                              double k, const ScatteringOptions& opts = {});

/// Parallel sweep, output ordered like `ks` regardless of scheduling.
std::vector<SpectrumRecord> spectrum_sweep(const GratingConfig& cfg,
                                           const IncidenceSpec& inc,
                                           const std::vector<double>& ks,
                                           const ScatteringOptions& opts = {},
                                           int threads = 1);

/// Equally spaced points over [k_min, k_max].
std::vector<double> linspace(double a, double b, int n);

struct WDiagnostic {
  cdouble w1;
  cdouble w2;
  double delta = 0.0;   ///< |κ|ε in D1, ε in D2
};

/// Second-branch part of the parity-σ moment vector scaled by λ_2.
WDiagnostic w_diagnostic(const ScatteringSolution& sol, const ReducedSystem& rs,
                         Parity parity);

enum class FeatureKind { Fano, FabryPerot, Rayleigh, None };
const char* to_string(FeatureKind kind) noexcept;

struct FeatureReport {
  FeatureKind kind = FeatureKind::None;
  double k_peak = 0.0;
  double k_dip = 0.0;
  double t_peak = 0.0;
  double t_dip = 0.0;
  double contrast = 0.0;          ///< max - min of |T|
  double center = 0.0;
  Region region = Region::BelowContinuum;
  std::optional<ResonanceResult> resonance;
};

struct FanoOptions {
  ScatteringOptions scattering;
  ResonanceOptions resonance;
  int grid = 121;                 ///< samples across the resolved window
  double width_factor = 30.0;     ///< half window in units of |Im k*|
  double min_half_width = 1e-4;
  double background_factor = 3.0;
};

/// Locates the peak-dip pair of |T| around the j = 2 resonance in [k_lo, k_hi].
FeatureReport fano_scan(const GratingConfig& cfg, const IncidenceSpec& inc, double k_lo,
                        double k_hi, const FanoOptions& opts = {});

/// Broad |T| maximum near Re k^(1) of mode m (the sharp feature near k^(2) is
/// excluded).
FeatureReport fabry_perot_peak(const GratingConfig& cfg, const IncidenceSpec& inc, int m,
                               const FanoOptions& opts = {});

struct KinkReport {
  double k_cutoff = 0.0;
  double slope_jump = 0.0;        ///< at scale h
  double slope_jump_coarse = 0.0; ///< at scale 10h
  bool detected = false;
};

/// Slope-jump test of |T| at every Rayleigh cutoff inside (k_lo, k_hi).
std::vector<KinkReport> detect_rayleigh_kinks(const GratingConfig& cfg,
                                              const IncidenceSpec& inc, double k_lo,
                                              double k_hi, double h = 1e-4,
                                              const ScatteringOptions& opts = {});

}  // namespace slitgrate
