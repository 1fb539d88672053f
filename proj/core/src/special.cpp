#include "slitgrate/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace slitgrate::special {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kZetaTable = 256;

const std::array<double, kZetaTable>& positive_zeta() {
  static const std::array<double, kZetaTable> table = [] {
    std::array<double, kZetaTable> t{};
    t[0] = -0.5;
    t[1] = std::numeric_limits<double>::infinity();
    for (int s = 2; s < kZetaTable; ++s) {
      t[s] = s < 60 ? std::riemann_zeta(static_cast<double>(s)) : 1.0;
    }
    return t;
  }();
  return table;
}

double harmonic(int n) {
  double h = 0.0;
  for (int i = 1; i <= n; ++i) h += 1.0 / i;
  return h;
}

}  // namespace

double reduce_angle(double u) noexcept {
  double r = std::remainder(u, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double zeta_int(int s) {
  if (s == 1) throw std::domain_error("zeta pole at s = 1");
  if (s >= 0) {
    return s < kZetaTable ? positive_zeta()[s] : 1.0;
  }
  const int m = -s;
  if (m % 2 == 0) return 0.0;
  // ζ(-m) = 2 (2π)^{-(m+1)} cos(π(m+1)/2) m! ζ(m+1)
  const int r = (m + 1) / 2;
  const double sign = (r % 2 == 0) ? 1.0 : -1.0;
  return 2.0 * sign * std::exp(std::lgamma(m + 1.0) - (m + 1) * std::log(2.0 * kPi)) *
         zeta_int(m + 1);
}

std::complex<double> polylog_unit(int p, double u) {
  if (p < 2) throw std::domain_error("polylog_unit requires p >= 2");
  const double x = reduce_angle(u);
  if (x == 0.0) return {zeta_int(p), 0.0};

  const std::complex<double> iu(0.0, x);
  std::complex<double> sum(0.0, 0.0);

  // j = 0 .. p : ζ(p - j) (iu)^j / j!, skipping the pole j = p - 1
  std::complex<double> power(1.0, 0.0);  // (iu)^j / j!
  std::complex<double> log_power;         // (iu)^{p-1} / (p-1)!
  for (int j = 0; j <= p; ++j) {
    if (j == p - 1) {
      log_power = power;
    } else {
      sum += zeta_int(p - j) * power;
    }
    power *= iu / static_cast<double>(j + 1);
  }
  const std::complex<double> log_miu(std::log(std::abs(x)), x > 0 ? -kPi / 2 : kPi / 2);
  sum += log_power * (harmonic(p - 1) - log_miu);

  // j = p + m, m odd: ζ(-m) (iu)^j / j!
  //   = 2 (-1)^{(m+1)/2} ζ(m+1) (x/2π)^{m+1} x^{p-1} i^{p+m} m!/(p+m)!
  const double ratio = x / (2.0 * kPi);
  const double xp1 = std::pow(x, p - 1);
  double fact_ratio = 1.0;  // m!/(p+m)!, updated incrementally
  for (int i = 1; i <= p + 1; ++i) fact_ratio /= i;  // m = 1: 1!/(p+1)!
  double rpow = ratio * ratio;                        // (x/2π)^{m+1}
  static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int m = 1; m < 400; m += 2) {
    const int r = (m + 1) / 2;
    const double sign = (r % 2 == 0) ? 1.0 : -1.0;
    const double mag = 2.0 * sign * zeta_int(m + 1) * rpow * xp1 * fact_ratio;
    sum += mag * ipow[(p + m) % 4];
    if (std::abs(mag) < 1e-18 * std::abs(sum)) break;
    // advance m -> m + 2
    fact_ratio *= static_cast<double>((m + 1) * (m + 2)) /
                  static_cast<double>((p + m + 1) * (p + m + 2));
    rpow *= ratio * ratio;
  }
  return sum;
}

double log_sinc(double x) noexcept {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return -x2 / 6.0 - x2 * x2 / 180.0;
  }
  return std::log(std::sin(ax) / ax);
}

}  // namespace slitgrate::special

namespace slitgrate::special {

PolylogCombination::PolylogCombination(const std::vector<std::complex<double>>& weights,
                                       int p_min) {
  if (p_min < 2) throw std::domain_error("PolylogCombination requires p >= 2");
  // Coefficients decay like (2π)^{-j}; 64 extra orders give 2^{-64} at |u| = π.
  const int p_max = p_min + static_cast<int>(weights.size()) - 1;
  const int n_terms = p_max + 64;
  a_.assign(n_terms, {0.0, 0.0});
  l_.assign(p_max, {0.0, 0.0});
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const std::complex<double> w = weights[i];
    if (w == std::complex<double>(0.0, 0.0)) continue;
    const int p = p_min + static_cast<int>(i);
    const bool odd = p % 2 == 1;
    // coefficient of u^j in Li_p(e^{iu}) is ζ(p-j) i^j / j!  (j != p-1)
    double inv_fact = 1.0;
    for (int j = 0; j < n_terms; ++j) {
      if (j > 0) inv_fact /= j;
      if (j == p - 1) {
        // (iu)^{p-1}/(p-1)! (H_{p-1} - ln|u|) survives in S_p; the sgn term cancels
        const double sign = (((p - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
        const double h = harmonic(p - 1);
        const double mag = 2.0 * sign * inv_fact;
        const std::complex<double> unit = odd ? std::complex<double>(1.0, 0.0)
                                              : std::complex<double>(0.0, 1.0);
        a_[j] += w * unit * (mag * h);
        l_[j] -= w * unit * mag;
        continue;
      }
      // keep only the part that survives in 2Re (odd p) or 2i Im (even p)
      if ((j % 2 == 0) != odd) continue;
      const double z = zeta_int(p - j);
      if (z == 0.0) continue;
      const double sign = ((j / 2) % 2 == 0) ? 1.0 : -1.0;  // Re i^j or Im i^j
      const std::complex<double> unit = odd ? std::complex<double>(1.0, 0.0)
                                            : std::complex<double>(0.0, 1.0);
      a_[j] += w * unit * (2.0 * sign * z * inv_fact);
    }
  }
}

std::complex<double> PolylogCombination::operator()(double u) const {
  return pair(u).first;
}

std::pair<std::complex<double>, std::complex<double>> PolylogCombination::pair(
    double u) const {
  // Horner on the even and odd parts separately, so F(-u) comes for free
  const double u2 = u * u;
  std::complex<double> ev(0.0, 0.0);
  std::complex<double> od(0.0, 0.0);
  const int n = static_cast<int>(a_.size());
  const int top_even = (n - 1) % 2 == 0 ? n - 1 : n - 2;
  for (int j = top_even; j >= 0; j -= 2) ev = ev * u2 + a_[j];
  for (int j = top_even + 1 < n ? top_even + 1 : top_even - 1; j >= 1; j -= 2)
    od = od * u2 + a_[j];
  od *= u;
  std::complex<double> lev(0.0, 0.0);
  std::complex<double> lod(0.0, 0.0);
  if (u != 0.0 && !l_.empty()) {
    const int m = static_cast<int>(l_.size());
    const int me = (m - 1) % 2 == 0 ? m - 1 : m - 2;
    for (int j = me; j >= 0; j -= 2) lev = lev * u2 + l_[j];
    for (int j = me + 1 < m ? me + 1 : me - 1; j >= 1; j -= 2) lod = lod * u2 + l_[j];
    const double lg = std::log(std::abs(u));
    lev *= lg;
    lod *= lg * u;
  }
  return {ev + od + lev + lod, ev - od + lev - lod};
}

}  // namespace slitgrate::special
