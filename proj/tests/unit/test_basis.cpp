#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "slitgrate/basis.hpp"

using namespace slitgrate;

namespace {

// With X = cos(s)/2, Y = cos(t)/2 the weighted Galerkin entry of a kernel K is
//   ∫_0^π ∫_0^π cos(m s) cos(n t) K(cos(s)/2, cos(t)/2) dt ds.
// The inner integral is split at the diagonal so the log singularity sits on
// an endpoint, where tanh-sinh converges exponentially.
template <class LogKernel>
double log_entry(int m, int n, LogKernel kernel, double split) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto outer = [&](double s) {
    auto inner = [&](double t) {
      // abscissae that round onto the singular endpoint carry no weight
      const double v = kernel(s, t);
      return std::isfinite(v) ? std::cos(n * t) * v : 0.0;
    };
    const double cut = split < 0.0 ? s : split;
    double v = 0.0;
    if (cut > 0.0) v += ts.integrate(inner, 0.0, cut, 1e-13);
    if (cut < kPi) v += ts.integrate(inner, cut, kPi, 1e-13);
    return std::cos(m * s) * v;
  };
  return ts.integrate(outer, 0.0, kPi, 1e-12);
}

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  auto r = gauss_legendre(5, -1.0, 2.0);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += r.weights[i] * std::pow(r.nodes[i], 9);
  CHECK(s == doctest::Approx((std::pow(2.0, 10) - 1.0) / 10).epsilon(1e-14));
}

TEST_CASE("quadrature nodes are antisymmetric") {
  ApertureBasis basis(8, 64);
  const auto& y = basis.nodes();
  for (int q = 0; q < 64; ++q) CHECK(y[q] == doctest::Approx(-y[63 - q]));
  auto sgn = basis.parity_signs();
  CHECK(sgn(0) == 1.0);
  CHECK(sgn(3) == -1.0);
}

TEST_CASE("self log matrix against adaptive quadrature") {
  const int n = 8;
  const Eigen::MatrixXd a = log_self_matrix(n);
  // ln|cos s - cos t| - ln 2 written as a product of sines, accurate near s = t
  auto kernel = [](double s, double t) {
    return (std::log(std::abs(std::sin((s + t) / 2))) +
            std::log(std::abs(std::sin((t - s) / 2)))) / kPi;
  };
  for (auto [i, j] : {std::pair{0, 0}, {1, 1}, {2, 2}, {5, 5}, {2, 4}, {1, 2}}) {
    const double ref = log_entry(i, j, kernel, -1.0);
    CHECK_MESSAGE(std::abs(a(i, j) - ref) < 1e-10, "entry " << i << "," << j);
  }
  CHECK(a(0, 0) == doctest::Approx(-2 * kPi * std::log(2.0)));
  CHECK(a(3, 3) == doctest::Approx(-kPi / 6));
}

TEST_CASE("offset log matrix against adaptive quadrature") {
  const int n = 6;
  for (double c : {2.0, -2.0, 9.0, 1.0}) {
    const Eigen::MatrixXd a = log_offset_matrix(n, c);
    auto kernel = [c](double s, double t) {
      return std::log(std::abs(std::cos(s) / 2 + c - std::cos(t) / 2));
    };
    for (auto [i, j] : {std::pair{0, 0}, {1, 2}, {2, 1}, {3, 3}, {0, 5}}) {
      const double ref = log_entry(i, j, kernel, kPi);
      CHECK_MESSAGE(std::abs(a(i, j) - ref) < 1e-10, "c=" << c << " entry " << i << "," << j);
    }
  }
}

TEST_CASE("smooth kernels through the sampled Galerkin map") {
  ApertureBasis basis(6, 128);
  const int nq = basis.quad_size();
  Eigen::MatrixXcd k(nq, nq);
  const auto& y = basis.nodes();
  for (int p = 0; p < nq; ++p)
    for (int q = 0; q < nq; ++q) k(p, q) = std::exp(cdouble(0, 1.3) * (y[p] - 0.5 * y[q]));
  const Eigen::MatrixXcd g = basis.galerkin(k);
  // separable kernel: entry = moment(-1.3)_m * moment(0.65)_n
  const Eigen::VectorXcd mx = basis.exp_moments(-1.3);
  const Eigen::VectorXcd my = basis.exp_moments(0.65);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(std::abs(g(i, j) - mx(i) * my(j)) < 1e-12);

  boost::math::quadrature::tanh_sinh<double> ts;
  const Eigen::VectorXcd mom = basis.exp_moments(3.7);
  for (int i = 0; i < 6; ++i) {
    const double re = ts.integrate(
        [i](double t) { return std::cos(i * t) * std::cos(3.7 * std::cos(t) / 2); }, 0.0, kPi);
    const double im = ts.integrate(
        [i](double t) { return -std::cos(i * t) * std::sin(3.7 * std::cos(t) / 2); }, 0.0, kPi);
    CHECK(std::abs(mom(i) - cdouble(re, im)) < 1e-12);
  }
  CHECK(basis.unit_moments()(0) == doctest::Approx(kPi));
  CHECK(basis.unit_moments()(1) == 0.0);
}

TEST_CASE("basis evaluation") {
  ApertureBasis basis(4, 32);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(4);
  c(2) = 1.0;
  const double y = 0.3;
  const double ref = (2 * std::pow(2 * y, 2) - 1) / std::sqrt(0.25 - y * y);
  CHECK(std::abs(basis.evaluate(c, y) - ref) < 1e-13);
}
