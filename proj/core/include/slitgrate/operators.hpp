#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "slitgrate/basis.hpp"
#include "slitgrate/greens.hpp"

namespace slitgrate {

/// Even (+) or odd (-) combination of the two slit faces.
enum class Parity { Plus, Minus };

const char* to_string(Parity p) noexcept;
inline double sign_of(Parity p) noexcept { return p == Parity::Plus ? 1.0 : -1.0; }

struct DiscretizationOptions {
  int n_basis = 16;
  int n_quad = 128;
  SeriesOptions series;
  double cond_guard = 1e10;       ///< ill-conditioned block threshold
  double qhat_cond_guard = 1e8;   ///< β₀ acceptance threshold
};

/// Galerkin matrix of S + β₀P, S with kernel (1/π) ln|(X-Y) sin(π(X-Y)/2) sin(π(X+Y+1)/2)|.
/// Throws QuadratureUnresolved when the smooth part moves by more than
/// `tol` between N_q and 2N_q.
Eigen::MatrixXd assemble_S(const ApertureBasis& basis, double beta0,
                           double tol = 1e-10);

/// Galerkin matrices of (1/π) ln|X - Y + ℓ| (S^+) and (1/π) ln|X - Y - ℓ| (S^-).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> assemble_Spm(const ApertureBasis& basis,
                                                          double ell);

/// Remainder operators of one kernel set, shared by both parities.
struct RemainderOperators {
  Eigen::MatrixXcd s_inf;        ///< kernel r_e(X-Y) + r_i(X,Y)
  Eigen::MatrixXcd s_inf_plus;   ///< kernel r_e(X-Y+ℓ)
  Eigen::MatrixXcd s_inf_minus;  ///< kernel r_e(X-Y-ℓ)
  Eigen::MatrixXcd s_tilde_inf;  ///< kernel r̃_i(X,Y)
  double norm_s_inf = 0.0;       ///< spectral norms of the Galerkin matrices
  double norm_s_cross = 0.0;     ///< max of the two shifted blocks
  double norm_s_tilde_inf = 0.0;
};

RemainderOperators assemble_Sinf(const KernelSet& kernels, const ApertureBasis& basis);

/// ε- and k-independent data: S, S^±, β₀ and the reference matrix Q̂.
struct StaticOperators {
  ApertureBasis basis;
  double ell = 2.0;
  double beta0 = 0.0;
  Eigen::MatrixXd s_hat;   ///< S + β₀P
  Eigen::MatrixXd s_plus;
  Eigen::MatrixXd s_minus;
  double alpha = 0.0;
  double alpha_tilde = 0.0;
  Eigen::Matrix2d q_hat;
};

struct AlphaResult {
  double alpha;
  double alpha_tilde;
  Eigen::Matrix2d q_hat;
  double cond;
};

/// α = ⟨𝕊⁻¹e₁, e₁⟩, α̃ = ⟨𝕊⁻¹e₁, e₂⟩ with 𝕊 = [[Ŝ, S^-], [S^+, Ŝ]].
AlphaResult compute_alpha(const ApertureBasis& basis, double ell, double beta0,
                          double singular_guard = 1e-12);

/// Deterministic β₀ selection: 0, then 1, then -2, -1, 2, 3; the first
/// candidate whose Q̂ has condition number below `cond_guard` wins.
double choose_beta0(const ApertureBasis& basis, double ell, double cond_guard = 1e8);
/// Same rule with an injected acceptance test (used to force fallbacks).
double choose_beta0(const std::function<bool(double)>& accept);

/// Cached static operators. β₀ is chosen automatically unless overridden.
std::shared_ptr<const StaticOperators> static_operators(
    int n_basis, int n_quad, double ell, std::optional<double> beta0 = std::nullopt);

struct ParityBlock {
  Parity parity = Parity::Plus;
  Eigen::MatrixXcd l;                   ///< 𝕃_σ, 2N×2N
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
  Eigen::VectorXcd x1;                  ///< 𝕃_σ⁻¹ e₁
  Eigen::VectorXcd x2;                  ///< 𝕃_σ⁻¹ e₂
  Eigen::Matrix2cd q;                   ///< Q_ij = ⟨𝕃⁻¹e_j, e_i⟩
  Eigen::Matrix2cd b;
  Eigen::Matrix2cd m;                   ///< ε(QB + I)
  std::array<cdouble, 2> lambda;        ///< λ_1 (v ≈ [1,1]), λ_2 (v ≈ [1,-1])
  std::array<Eigen::Vector2cd, 2> v;
  double cond = 0.0;

  /// ⟨x, e_i⟩ for a block vector of basis coefficients.
  Eigen::Vector2cd moments(const Eigen::VectorXcd& x) const;
};

struct ReducedSystem {
  double kappa = 0.0;
  cdouble k;
  double eps = 0.0;
  double b = 0.0;          ///< reciprocal lattice constant 2π/d
  double beta0 = 0.0;
  cdouble beta;
  cdouble beta_e;
  cdouble beta_i;
  cdouble beta_tilde;
  double alpha = 0.0;
  double alpha_tilde = 0.0;
  Eigen::Matrix2d q_hat;
  RemainderOperators remainders;
  ParityBlock plus;
  ParityBlock minus;

  const ParityBlock& block(Parity p) const noexcept {
    return p == Parity::Plus ? plus : minus;
  }
};

/// Eigen-pairs of a 2×2 matrix ordered by overlap with [1,1] and [1,-1].
void ordered_eigenpairs(const Eigen::Matrix2cd& m, std::array<cdouble, 2>& lambda,
                        std::array<Eigen::Vector2cd, 2>& v);

ReducedSystem build_reduced(const KernelSet& kernels, const StaticOperators& ops,
                            double cond_guard = 1e10);

/// Convenience: kernels + static operators + reduction in one call.
ReducedSystem build_reduced(const GratingConfig& cfg, double kappa, cdouble k,
                            const DiscretizationOptions& opts = {},
                            std::optional<double> beta0 = std::nullopt);

}  // namespace slitgrate
