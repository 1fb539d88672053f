#include "slitgrate/greens.hpp"

#include <cmath>
#include <sstream>

#include "slitgrate/special.hpp"

namespace slitgrate {
namespace {

constexpr cdouble kI(0.0, 1.0);

// 2 e^{-γ} / (1 - e^{-2γ}) = 1/sinh γ, evaluated without overflow for large Re γ
cdouble inv_sinh(cdouble g) {
  const cdouble e = std::exp(-g);
  return 2.0 * e / (1.0 - e * e);
}

cdouble coth_minus_one(cdouble g) {
  const cdouble e2 = std::exp(-2.0 * g);
  return 2.0 * e2 / (1.0 - e2);
}

}  // namespace

KernelSet::KernelSet(const GratingConfig& cfg, double kappa, cdouble k,
                     const SeriesOptions& opts, bool interior)
    : cfg_(cfg), kappa_(kappa), k_(k) {
  const double b = cfg.b();
  const double d = cfg.period();
  const double eps = cfg.eps();
  const int order = opts.expansion_order;

  c0_ = 1.0 / (kI * zeta_n(kappa, k, 0, b));

  // (1 + A x + B x²)^{-1/2} = Σ g_j x^j
  const cdouble A = 2.0 * kappa / b;
  const cdouble B = (kappa * kappa - k * k) / (b * b);
  g_.assign(order, cdouble(0.0));
  g_[0] = 1.0;
  if (order > 1) g_[1] = -0.5 * A;
  for (int n = 1; n + 1 < order; ++n) {
    g_[n + 1] = -(A * (n + 0.5) * g_[n] + B * static_cast<double>(n) * g_[n - 1]) /
                static_cast<double>(n + 1);
  }

  auto asymptotic = [&](int m, double sign) {
    cdouble s(0.0);
    double inv = 1.0 / m;
    double pw = inv;
    double sg = 1.0;
    for (int p = 1; p <= order; ++p) {
      s += g_[p - 1] * sg * pw;
      pw *= inv;
      sg *= sign;
    }
    return -s / b;
  };

  const int m_min =
      static_cast<int>(std::ceil(2.0 * (std::abs(k) + std::abs(kappa)) / b)) + 2;
  for (int m = 1;; ++m) {
    if (m > opts.max_lattice_terms) {
      std::ostringstream os;
      os << "series truncation: lattice tail estimate " << lattice_tail_
         << " after " << opts.max_lattice_terms << " terms";
      throw Error(ErrorKind::SeriesTruncation, os.str());
    }
    const cdouble cp = 1.0 / (kI * zeta_n(kappa, k, m, b));
    const cdouble cm = 1.0 / (kI * zeta_n(kappa, k, -m, b));
    d_plus_.push_back(cp - asymptotic(m, 1.0));
    d_minus_.push_back(cm - asymptotic(m, -1.0));
    // remaining terms decay like m^{-P-1}: tail ≈ |d_m| m / P
    lattice_tail_ = (std::abs(d_plus_.back()) + std::abs(d_minus_.back())) *
                    static_cast<double>(m) / order;
    if (m >= m_min && lattice_tail_ < opts.tol) break;
  }

  std::vector<cdouble> ext_weights;
  for (int p = 2; p <= order; ++p) ext_weights.push_back(-g_[p - 1] / b);
  exterior_poly_ = special::PolylogCombination(ext_weights, 2);

  beta_e_ = std::log(eps * b) / kPi + exterior_smooth(0.0) / d;

  if (!interior) return;

  // interior kernels
  const cdouble sk = std::sin(k);
  if (std::abs(sk) < opts.waveguide_guard) {
    throw Error(ErrorKind::WaveguidePole,
                "waveguide pole proximity: |sin k| below guard");
  }
  beta_i_ = std::cos(k) / (eps * k * sk) + 2.0 * std::log(2.0) / kPi;
  beta_tilde_ = 1.0 / (eps * k * sk);

  const cdouble q = k * eps / kPi;
  if (!(std::abs(q) < 0.9)) {
    throw Error(ErrorKind::InvalidArgument,
                "interior expansion requires |k| eps < 0.9 pi (single slit mode)");
  }
  const cdouble q2 = q * q;
  double cj = 1.0;  // binom(2j, j) / 4^j
  cdouble qpow = 1.0;
  for (int j = 1; j < 200; ++j) {
    cj *= (2.0 * j - 1.0) / (2.0 * j);
    qpow *= q2;
    const cdouble coeff = cj * qpow;
    ri_coeff_.push_back(coeff);
    if (std::abs(coeff) * 1.21 < 1e-3 * opts.tol) break;
  }
  // Re Li_p = S_p / 2 for odd p
  std::vector<cdouble> int_weights;
  for (std::size_t j = 0; j < ri_coeff_.size(); ++j) {
    int_weights.push_back(-ri_coeff_[j] / (2.0 * kPi));
    if (j + 1 < ri_coeff_.size()) int_weights.push_back(0.0);
  }
  interior_poly_ = special::PolylogCombination(int_weights, 3);
  for (int m = 1; m < 100000; ++m) {
    const cdouble gm = std::sqrt(cdouble(m * kPi / eps) * (m * kPi / eps) - k * k);
    const cdouble a = coth_minus_one(gm) / gm;
    const cdouble c = inv_sinh(gm) / gm;
    if ((2.0 / eps) * (std::abs(a) + std::abs(c)) < 1e-3 * opts.tol) break;
    ri_exp_.push_back(a);
    ri_cross_exp_.push_back(c);
  }
}

std::pair<cdouble, cdouble> KernelSet::exterior_smooth_pair(double u) const {
  const double b = cfg_.b();
  const double ur = special::reduce_angle(u);
  // smooth(-u) uses conj(Li_p) and swaps the roles of d_+ and d_-
  const cdouble base = c0_ + (2.0 / b) * special::log_sinc(ur / 2.0);
  cdouble fwd = base;
  cdouble bwd = base;
  const auto [pf, pb] = exterior_poly_.pair(ur);
  fwd += pf;
  bwd += pb;
  const cdouble step = std::polar(1.0, ur);
  const cdouble step_conj = std::conj(step);
  cdouble ep = step;
  cdouble em = step_conj;
  for (std::size_t i = 0; i < d_plus_.size(); ++i) {
    fwd += d_plus_[i] * ep + d_minus_[i] * em;
    bwd += d_plus_[i] * em + d_minus_[i] * ep;
    ep *= step;
    em *= step_conj;
  }
  return {fwd, bwd};
}

cdouble KernelSet::exterior_smooth(double u) const {
  return exterior_smooth_pair(u).first;
}

cdouble KernelSet::greens_exterior(double z) const {
  if (z == 0.0) {
    throw Error(ErrorKind::InvalidArgument,
                "exterior kernel is logarithmically singular at Z = 0");
  }
  const double b = cfg_.b();
  const double u = b * cfg_.eps() * z;
  const double ur = special::reduce_angle(u);
  const cdouble phase = std::polar(1.0, kappa_ * cfg_.eps() * z);
  return phase / cfg_.period() *
         ((2.0 / b) * std::log(std::abs(ur)) + exterior_smooth(u));
}

cdouble KernelSet::remainder_re(double z) const {
  const double b = cfg_.b();
  const double eps = cfg_.eps();
  const double u = b * eps * z;
  if (std::abs(u) > kPi) {
    return greens_exterior(z) - beta_e_ - std::log(std::abs(z)) / kPi;
  }
  const cdouble phase = std::polar(1.0, kappa_ * eps * z);
  const cdouble log_part =
      z == 0.0 ? cdouble(0.0) : (phase - 1.0) * std::log(std::abs(z)) / kPi;
  return log_part +
         phase * (std::log(b * eps) / kPi + exterior_smooth(u) / cfg_.period()) -
         beta_e_;
}

std::pair<cdouble, cdouble> KernelSet::remainder_re_pair(double z) const {
  const double b = cfg_.b();
  const double eps = cfg_.eps();
  const double u = b * eps * z;
  if (std::abs(u) > kPi) return {remainder_re(z), remainder_re(-z)};
  const auto [sf, sb] = exterior_smooth_pair(u);
  const cdouble phase = std::polar(1.0, kappa_ * eps * z);
  const cdouble phase_conj = std::conj(phase);
  const double lz = z == 0.0 ? 0.0 : std::log(std::abs(z)) / kPi;
  const double lb = std::log(b * eps) / kPi;
  const double d = cfg_.period();
  return {(phase - 1.0) * lz + phase * (lb + sf / d) - beta_e_,
          (phase_conj - 1.0) * lz + phase_conj * (lb + sb / d) - beta_e_};
}

cdouble KernelSet::interior_series(double theta) const {
  return interior_poly_(special::reduce_angle(kPi * theta));
}

cdouble KernelSet::interior_modes(double x, double y) const {
  cdouble e(0.0);
  for (std::size_t i = 0; i < ri_exp_.size(); ++i) {
    const double m = static_cast<double>(i + 1);
    e += std::cos(m * kPi * (x + 0.5)) * std::cos(m * kPi * (y + 0.5)) * ri_exp_[i];
  }
  return -2.0 / cfg_.eps() * e;
}

cdouble KernelSet::remainder_ri(double x, double y) const {
  return interior_series(x - y) + interior_series(x + y + 1.0) + interior_modes(x, y);
}

cdouble KernelSet::greens_interior(double x, double y) const {
  const double s1 = std::abs(std::sin(kPi * (x - y) / 2.0));
  const double s2 = std::abs(std::sin(kPi * (x + y + 1.0) / 2.0));
  if (s1 == 0.0 || s2 == 0.0) {
    throw Error(ErrorKind::InvalidArgument,
                "interior kernel is logarithmically singular at this point");
  }
  return beta_i_ + (std::log(s1) + std::log(s2)) / kPi + remainder_ri(x, y);
}

cdouble KernelSet::remainder_ri_cross(double x, double y) const {
  cdouble e(0.0);
  for (std::size_t i = 0; i < ri_cross_exp_.size(); ++i) {
    const double m = static_cast<double>(i + 1);
    e += std::cos(m * kPi * (x + 0.5)) * std::cos(m * kPi * (y + 0.5)) *
         ri_cross_exp_[i];
  }
  return -2.0 / cfg_.eps() * e;
}

cdouble KernelSet::greens_interior_cross(double x, double y) const {
  return beta_tilde_ + remainder_ri_cross(x, y);
}

cdouble beta_e(double kappa, cdouble k, const GratingConfig& cfg,
               const SeriesOptions& opts) {
  return KernelSet(cfg, kappa, k, opts, false).beta_e();
}

cdouble greens_exterior(double z, double kappa, cdouble k, const GratingConfig& cfg) {
  return KernelSet(cfg, kappa, k, {}, false).greens_exterior(z);
}

cdouble remainder_re(double z, double kappa, cdouble k, const GratingConfig& cfg) {
  return KernelSet(cfg, kappa, k, {}, false).remainder_re(z);
}

cdouble greens_interior(double x, double y, cdouble k, const GratingConfig& cfg) {
  return KernelSet(cfg, 0.0, k).greens_interior(x, y);
}

cdouble greens_interior_cross(double x, double y, cdouble k,
                              const GratingConfig& cfg) {
  return KernelSet(cfg, 0.0, k).greens_interior_cross(x, y);
}

cdouble remainder_ri(double x, double y, cdouble k, const GratingConfig& cfg) {
  return KernelSet(cfg, 0.0, k).remainder_ri(x, y);
}

}  // namespace slitgrate
