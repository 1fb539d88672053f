#pragma once

#include <optional>
#include <vector>

#include "slitgrate/operators.hpp"

namespace slitgrate {

struct ResonanceOptions {
  DiscretizationOptions disc;
  std::optional<double> beta0;
  double tol = 1e-12;            ///< on |λ| and on the Muller step
  int max_iter = 50;
  double basin_radius = 0.3;
  double bic_threshold = 1e-9;
  double overlap_guard = 1e-8;   ///< minimum |k̂₁ - k̂₂|
  int max_kappa_updates = 30;    ///< fixed-angle incidence: κ = Re(k) sinθ
};

struct ResonanceSeed {
  int m = 1;
  int j = 1;
  Parity parity = Parity::Plus;
  double kappa = 0.0;
  cdouble k_hat;
};

struct ResonanceResult {
  cdouble k;
  double kappa = 0.0;
  double residual = 0.0;
  int iterations = 0;
  int j = 1;
  int m = 1;
  Parity parity = Parity::Plus;
  Region region = Region::BelowContinuum;
  cdouble k_hat;
  bool bic = false;
};

/// Odd m couple to the even combination of slit faces, even m to the odd one.
inline Parity parity_for_mode(int m) noexcept {
  return m % 2 == 1 ? Parity::Plus : Parity::Minus;
}

/// γ = 2β_e + (2/π) ln 2 - (2/π) ln ε - β₀ (independent of ε).
cdouble gamma_fn(const GratingConfig& cfg, double kappa, cdouble k, double beta0,
                 const SeriesOptions& opts = {});

struct AsymptoticPair {
  cdouble k1;
  double k2 = 0.0;
};

AsymptoticPair asymptotic_resonances(const GratingConfig& cfg, double kappa, int m,
                                     const ResonanceOptions& opts = {});

/// Eigenvalue of 𝕄_σ(k) on branch j (eigenvector closest to [1,1] for j = 1,
/// [1,-1] for j = 2).
cdouble lambda_eval(cdouble k, Parity parity, double kappa, const GratingConfig& cfg,
                    int j, const ResonanceOptions& opts = {});

/// Seeds for both branches of mode m; κ is taken at k = mπ for angle incidence.
std::vector<ResonanceSeed> resonance_seeds(const GratingConfig& cfg,
                                           const IncidenceSpec& inc, int m,
                                           const ResonanceOptions& opts = {});

/// Muller iteration on λ_{j,σ}. For angle incidence κ is re-evaluated at
/// Re k until it stops changing.
ResonanceResult refine_root(const GratingConfig& cfg, const IncidenceSpec& inc,
                            const ResonanceSeed& seed,
                            const ResonanceOptions& opts = {});

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
};

/// Least-squares line through (x_i, y_i).
SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct ScalingReport {
  std::vector<double> eps;
  std::vector<ResonanceResult> branch1;
  std::vector<ResonanceResult> branch2;
  SlopeFit im_k1;            ///< ln|Im k^(1)| vs ln ε
  SlopeFit im_k2;            ///< ln|Im k^(2)| vs ln ε
  SlopeFit asymptotic_error; ///< ln|k^(1) - k̂^(1)| vs ln ε
};

ScalingReport scaling_study(const GratingConfig& tmpl, const IncidenceSpec& inc, int m,
                            const std::vector<double>& eps_list,
                            const ResonanceOptions& opts = {});

}  // namespace slitgrate
