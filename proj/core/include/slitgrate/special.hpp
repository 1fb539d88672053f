#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace slitgrate::special {

/// Reduces an angle into (-π, π].
double reduce_angle(double u) noexcept;

/// Riemann zeta at integer s != 1 (negative s via the reflection formula).
double zeta_int(int s);

/// Li_p(e^{iu}) = Σ_{n>=1} e^{inu} / n^p for integer p >= 2 and real u.
/// Evaluated from its expansion about u = 0 after reducing u into (-π, π];
/// the u^{p-1} ln|u| term is kept in closed form, so the function is exact
/// (to round-off) at and near u = 0.
std::complex<double> polylog_unit(int p, double u);

/// Fixed linear combination F(u) = Σ_p w_p S_p(u) of the lattice sums
///   S_p(u) = Σ_{n≠0} e^{inu} / (|n| n^{p-1}),
/// i.e. 2 Re Li_p(e^{iu}) for odd p and 2i Im Li_p(e^{iu}) for even p.
/// Stored as F(u) = Σ_j a_j u^j + ln|u| Σ_j l_j u^j and evaluated by Horner's
/// rule, which is much cheaper than summing the polylogarithms one by one.
class PolylogCombination {
 public:
  PolylogCombination() = default;
  /// weights[i] multiplies S_{p_min + i}; p_min >= 2.
  PolylogCombination(const std::vector<std::complex<double>>& weights, int p_min);

  /// F(u) for |u| <= π.
  std::complex<double> operator()(double u) const;
  /// (F(u), F(-u)) from one pass over the coefficients.
  std::pair<std::complex<double>, std::complex<double>> pair(double u) const;

 private:
  std::vector<std::complex<double>> a_;
  std::vector<std::complex<double>> l_;
};

/// ln(sin(x)/x), continuous at x = 0. Valid for |x| < π.
double log_sinc(double x) noexcept;

}  // namespace slitgrate::special
