#include "slitgrate/basis.hpp"

#include <cmath>

namespace slitgrate {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "gauss_legendre: n < 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

ApertureBasis::ApertureBasis(int n_basis, int n_quad) : n_(n_basis), nq_(n_quad) {
  if (n_basis < 2 || n_quad < 2 * n_basis) {
    throw Error(ErrorKind::InvalidArgument,
                "aperture basis needs N >= 2 and N_q >= 2N");
  }
  y_.resize(nq_);
  c_.resize(nq_, n_);
  for (int q = 0; q < nq_; ++q) {
    const double t = (q + 0.5) * kPi / nq_;
    y_[q] = 0.5 * std::cos(t);
    for (int n = 0; n < n_; ++n) c_(q, n) = std::cos(n * t);
  }
  // exact antisymmetry of the node set
  for (int q = 0; q < nq_ / 2; ++q) y_[nq_ - 1 - q] = -y_[q];
  if (nq_ % 2 == 1) y_[nq_ / 2] = 0.0;
}

Eigen::MatrixXcd ApertureBasis::galerkin(const Eigen::MatrixXcd& samples) const {
  const double w = weight();
  const Eigen::MatrixXcd cc = c_.cast<cdouble>();
  return (w * w) * (cc.transpose() * samples * cc);
}

Eigen::MatrixXd ApertureBasis::galerkin(const Eigen::MatrixXd& samples) const {
  const double w = weight();
  return (w * w) * (c_.transpose() * samples * c_);
}

Eigen::VectorXd ApertureBasis::unit_moments() const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n_);
  v(0) = kPi;
  return v;
}

Eigen::VectorXcd ApertureBasis::exp_moments(double a) const {
  Eigen::VectorXcd v(n_);
  cdouble phase(1.0, 0.0);
  for (int n = 0; n < n_; ++n) {
    v(n) = kPi * phase * std::cyl_bessel_j(static_cast<double>(n), std::abs(a) / 2.0);
    // J_n(-x) = (-1)^n J_n(x)
    if (a < 0.0 && n % 2 == 1) v(n) = -v(n);
    phase *= cdouble(0.0, -1.0);
  }
  return v;
}

cdouble ApertureBasis::evaluate(const Eigen::VectorXcd& coeffs, double y) const {
  const double x = 2.0 * y;
  double t0 = 1.0;
  double t1 = x;
  cdouble s = coeffs(0);
  if (coeffs.size() > 1) s += coeffs(1) * t1;
  for (Eigen::Index n = 2; n < coeffs.size(); ++n) {
    const double t2 = 2.0 * x * t1 - t0;
    s += coeffs(n) * t2;
    t0 = t1;
    t1 = t2;
  }
  return s / std::sqrt(0.25 - y * y);
}

Eigen::VectorXd ApertureBasis::parity_signs() const {
  Eigen::VectorXd d(n_);
  for (int n = 0; n < n_; ++n) d(n) = n % 2 == 0 ? 1.0 : -1.0;
  return d;
}

Eigen::MatrixXd log_self_matrix(int n_basis) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_basis, n_basis);
  m(0, 0) = -2.0 * kPi * std::log(2.0);
  for (int n = 1; n < n_basis; ++n) m(n, n) = -kPi / (2.0 * n);
  return m;
}

Eigen::MatrixXd log_offset_matrix(int n_basis, double c, int n_points) {
  if (std::abs(c) < 1.0) {
    throw Error(ErrorKind::InvalidArgument, "log_offset_matrix requires |c| >= 1");
  }
  const QuadratureRule rule = gauss_legendre(n_points, 0.0, kPi);
  const double sgn = c > 0.0 ? 1.0 : -1.0;
  const double ln2 = std::log(2.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_basis, n_basis);
  std::vector<double> v(n_basis);
  for (int i = 0; i < n_points; ++i) {
    const double s = rule.nodes[i];
    // |x| - 1 for x = cos s + 2c, written without cancellation
    const double excess =
        c > 0.0 ? 2.0 * (c - 1.0) + 2.0 * std::pow(std::cos(s / 2.0), 2)
                : 2.0 * (-c - 1.0) + 2.0 * std::pow(std::sin(s / 2.0), 2);
    const double eta = 2.0 * std::asinh(std::sqrt(excess / 2.0));
    v[0] = kPi * (eta - 2.0 * ln2);
    double pw = 1.0;
    const double decay = sgn * std::exp(-eta);
    for (int n = 1; n < n_basis; ++n) {
      pw *= decay;
      v[n] = -kPi / n * pw;
    }
    for (int m = 0; m < n_basis; ++m) {
      const double cm = rule.weights[i] * std::cos(m * s);
      for (int n = 0; n < n_basis; ++n) a(m, n) += cm * v[n];
    }
  }
  return a;
}

}  // namespace slitgrate
