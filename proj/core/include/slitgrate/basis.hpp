#pragma once

#include <vector>

#include <Eigen/Dense>

#include "slitgrate/domain.hpp"

namespace slitgrate {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Densities w_n(Y) = T_n(2Y) / sqrt(1/4 - Y²) on I = (-1/2, 1/2).
///
/// With Y = cos(t)/2 every Galerkin entry becomes a cosine integral over
/// t ∈ (0, π), which the midpoint rule t_q = (q + 1/2)π/N_q integrates
/// spectrally for smooth kernels.
class ApertureBasis {
 public:
  explicit ApertureBasis(int n_basis = 16, int n_quad = 128);

  int size() const noexcept { return n_; }
  int quad_size() const noexcept { return nq_; }
  /// Quadrature points Y_q = cos(t_q)/2; Y_{N_q-1-q} = -Y_q.
  const std::vector<double>& nodes() const noexcept { return y_; }
  double weight() const noexcept { return kPi / nq_; }
  /// C_{qn} = cos(n t_q).
  const Eigen::MatrixXd& cos_table() const noexcept { return c_; }

  /// Galerkin matrix ∫∫ w_m(X) w_n(Y) K(X, Y) from samples K_{pq} = K(Y_p, Y_q).
  Eigen::MatrixXcd galerkin(const Eigen::MatrixXcd& samples) const;
  Eigen::MatrixXd galerkin(const Eigen::MatrixXd& samples) const;

  /// ⟨w_n, 1⟩ = π δ_{n0}.
  Eigen::VectorXd unit_moments() const;
  /// ∫ e^{-iaY} w_n(Y) dY = π (-i)^n J_n(a/2).
  Eigen::VectorXcd exp_moments(double a) const;

  /// Σ c_n w_n(y) at an interior point.
  cdouble evaluate(const Eigen::VectorXcd& coeffs, double y) const;

  /// Diagonal flip D = diag((-1)^n): w_n(-Y) = (-1)^n w_n(Y).
  Eigen::VectorXd parity_signs() const;

 private:
  int n_;
  int nq_;
  std::vector<double> y_;
  Eigen::MatrixXd c_;
};

/// Galerkin matrix of (1/π) ln|X - Y| (diagonal: -2π ln 2, then -π/(2n)).
Eigen::MatrixXd log_self_matrix(int n_basis);

/// Galerkin matrix of ln|X + c - Y| for |c| >= 1 (the two intervals are
/// disjoint or touch at an endpoint). The inner integral is analytic; the
/// outer integral uses Gauss-Legendre in the angle variable.
Eigen::MatrixXd log_offset_matrix(int n_basis, double c, int n_points = 96);

}  // namespace slitgrate
