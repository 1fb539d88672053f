#include "slitgrate/scattering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace slitgrate {
namespace {

constexpr cdouble kI(0.0, 1.0);

void recompose(ScatteringSolution& sol, Eigen::Index n) {
  const auto& p = sol.phi_plus;
  const auto& m = sol.phi_minus;
  sol.phi1_minus = p.head(n) + m.head(n);
  sol.phi1_plus = p.tail(n) + m.tail(n);
  sol.phi2_minus = p.head(n) - m.head(n);
  sol.phi2_plus = p.tail(n) - m.tail(n);
  sol.r_hat_minus = kPi * sol.phi1_minus(0);
  sol.r_hat_plus = kPi * sol.phi1_plus(0);
  sol.t_hat_minus = kPi * sol.phi2_minus(0);
  sol.t_hat_plus = kPi * sol.phi2_plus(0);
}

double relative_det(const Eigen::Matrix2cd& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  return scale == 0.0 ? 0.0 : std::abs(m.determinant()) / (scale * scale);
}

double abs_t(const GratingConfig& cfg, const IncidenceSpec& inc, double k,
             const ScatteringOptions& opts) {
  const SpectrumRecord r = spectrum_point(cfg, inc, k, opts);
  if (!r.error.empty()) {
    throw Error(ErrorKind::InvalidArgument, "spectrum evaluation failed: " + r.error);
  }
  return r.abs_t;
}

// golden-section search for an extremum of |T| on [a, b]
double golden(const GratingConfig& cfg, const IncidenceSpec& inc, double a, double b,
              bool maximize, const ScatteringOptions& opts, double tol) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  const double sgn = maximize ? -1.0 : 1.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = sgn * abs_t(cfg, inc, c, opts);
  double fd = sgn * abs_t(cfg, inc, d, opts);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = sgn * abs_t(cfg, inc, c, opts);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = sgn * abs_t(cfg, inc, d, opts);
    }
  }
  return 0.5 * (a + b);
}

std::optional<ResonanceResult> refine_branch(const GratingConfig& cfg,
                                             const IncidenceSpec& inc, int m, int j,
                                             const ResonanceOptions& opts) {
  try {
    const auto seeds = resonance_seeds(cfg, inc, m, opts);
    return refine_root(cfg, inc, seeds[j - 1], opts);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

cdouble ForcingData::value(int sign, double x) const {
  const double c = sign < 0 ? -ell / 2.0 : ell / 2.0;
  return -std::polar(1.0, kappa * eps * (x + c));
}

Eigen::VectorXcd ForcingData::stacked() const {
  Eigen::VectorXcd v(f_minus.size() + f_plus.size());
  v << f_minus, f_plus;
  return v;
}

ForcingData make_forcing(const GratingConfig& cfg, double kappa,
                         const ApertureBasis& basis) {
  ForcingData f;
  f.kappa = kappa;
  f.eps = cfg.eps();
  f.ell = cfg.ell();
  // ∫ e^{iκεX} w_m(X) dX
  const Eigen::VectorXcd e = basis.exp_moments(-kappa * cfg.eps());
  const double half = kappa * cfg.eps() * cfg.ell() / 2.0;
  f.f_minus = -std::polar(1.0, -half) * e;
  f.f_plus = -std::polar(1.0, half) * e;
  return f;
}

ScatteringSolution solve_reduced_exact(const ReducedSystem& rs, const ForcingData& f,
                                       double det_guard) {
  ScatteringSolution sol;
  sol.kappa = rs.kappa;
  sol.k = rs.k.real();
  sol.eps = rs.eps;
  sol.ell = f.ell;
  sol.solver = "reduced-exact";
  const Eigen::VectorXcd rhs = f.stacked();
  for (Parity par : {Parity::Plus, Parity::Minus}) {
    const ParityBlock& blk = rs.block(par);
    if (relative_det(blk.m) < det_guard) {
      std::ostringstream os;
      os << "resonant singularity: det M" << to_string(par) << " vanishes at k = "
         << rs.k.real() << " (nearest eigenvalues " << blk.lambda[0] << ", "
         << blk.lambda[1] << ")";
      throw Error(ErrorKind::ResonantSingularity, os.str());
    }
    const Eigen::VectorXcd y = blk.lu.solve(rhs);
    const Eigen::Vector2cd g = blk.moments(y);
    const Eigen::Vector2cd mom = blk.m.fullPivLu().solve(g);
    const Eigen::Vector2cd bm = blk.b * mom;
    const Eigen::VectorXcd phi = y / rs.eps - bm(0) * blk.x1 - bm(1) * blk.x2;
    if (par == Parity::Plus) {
      sol.phi_plus = phi;
      sol.moments_plus = mom;
    } else {
      sol.phi_minus = phi;
      sol.moments_minus = mom;
    }
  }
  recompose(sol, rhs.size() / 2);
  return sol;
}

ScatteringSolution solve_direct(const ReducedSystem& rs, const StaticOperators& ops,
                                const ForcingData& f) {
  const int n = ops.basis.size();
  const RemainderOperators& r = rs.remainders;
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
  p(0, 0) = kPi * kPi;
  const Eigen::MatrixXcd self = ops.s_hat.cast<cdouble>() + rs.beta * p + r.s_inf;
  const Eigen::MatrixXcd cm = ops.s_minus.cast<cdouble>() + rs.beta_e * p + r.s_inf_minus;
  const Eigen::MatrixXcd cp = ops.s_plus.cast<cdouble>() + rs.beta_e * p + r.s_inf_plus;
  const Eigen::MatrixXcd tt = rs.beta_tilde * p + r.s_tilde_inf;
  const Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd t(4 * n, 4 * n);
  t << self, cm, tt, z,
       cp, self, z, tt,
       tt, z, self, cm,
       z, tt, cp, self;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(4 * n);
  rhs.head(n) = 2.0 * f.f_minus / rs.eps;
  rhs.segment(n, n) = 2.0 * f.f_plus / rs.eps;
  const Eigen::VectorXcd x = t.partialPivLu().solve(rhs);

  ScatteringSolution sol;
  sol.kappa = rs.kappa;
  sol.k = rs.k.real();
  sol.eps = rs.eps;
  sol.ell = f.ell;
  sol.solver = "direct";
  sol.phi1_minus = x.segment(0, n);
  sol.phi1_plus = x.segment(n, n);
  sol.phi2_minus = x.segment(2 * n, n);
  sol.phi2_plus = x.segment(3 * n, n);
  // parity parts from φ₁ = φ_+ + φ_-, φ₂ = φ_+ - φ_-
  sol.phi_plus.resize(2 * n);
  sol.phi_minus.resize(2 * n);
  sol.phi_plus << 0.5 * (sol.phi1_minus + sol.phi2_minus), 0.5 * (sol.phi1_plus + sol.phi2_plus);
  sol.phi_minus << 0.5 * (sol.phi1_minus - sol.phi2_minus), 0.5 * (sol.phi1_plus - sol.phi2_plus);
  sol.moments_plus = {kPi * sol.phi_plus(0), kPi * sol.phi_plus(n)};
  sol.moments_minus = {kPi * sol.phi_minus(0), kPi * sol.phi_minus(n)};
  sol.r_hat_minus = kPi * sol.phi1_minus(0);
  sol.r_hat_plus = kPi * sol.phi1_plus(0);
  sol.t_hat_minus = kPi * sol.phi2_minus(0);
  sol.t_hat_plus = kPi * sol.phi2_plus(0);
  return sol;
}

ScatteringSolution solve(const GratingConfig& cfg, double kappa, double k,
                         const ScatteringOptions& opts) {
  const KernelSet kernels(cfg, kappa, k, opts.disc.series);
  const auto ops = static_operators(opts.disc.n_basis, opts.disc.n_quad, cfg.ell(), opts.beta0);
  const ReducedSystem rs = build_reduced(kernels, *ops, opts.disc.cond_guard);
  const ForcingData f = make_forcing(cfg, kappa, ops->basis);
  const double near = opts.det_guard * opts.direct_margin;
  if (relative_det(rs.plus.m) < near || relative_det(rs.minus.m) < near) {
    return solve_direct(rs, *ops, f);
  }
  return solve_reduced_exact(rs, f, opts.det_guard);
}

cdouble SpectrumRecord::t0() const {
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (orders[i] == 0) return t[i];
  return 0.0;
}

SpectrumRecord diffraction_amplitudes(const ScatteringSolution& sol,
                                      const DiffractionTable& table,
                                      const GratingConfig& cfg, bool exact) {
  SpectrumRecord rec;
  rec.k = sol.k;
  rec.kappa = sol.kappa;
  rec.region = table.region;
  rec.cutoff_flag = table.cutoff_flag;
  rec.solver = sol.solver;
  const double eps = cfg.eps();
  const double d = cfg.period();
  const double half = eps * cfg.ell() / 2.0;
  const ApertureBasis basis(static_cast<int>(sol.phi1_minus.size()),
                            2 * static_cast<int>(sol.phi1_minus.size()));
  const cdouble zeta0 = table.zeta(0);
  for (int n : table.propagating) {
    const double kn = table.kappa_of(n);
    const cdouble zn = table.zeta(n);
    cdouble mr_minus, mr_plus, mt_minus, mt_plus;
    if (exact) {
      const Eigen::VectorXcd e = basis.exp_moments(kn * eps);
      mr_minus = e.dot(sol.phi1_minus.conjugate()) ;
      mr_plus = e.dot(sol.phi1_plus.conjugate());
      mt_minus = e.dot(sol.phi2_minus.conjugate());
      mt_plus = e.dot(sol.phi2_plus.conjugate());
      // Eigen's dot conjugates its first argument; undo that
      mr_minus = std::conj(mr_minus);
      mr_plus = std::conj(mr_plus);
      mt_minus = std::conj(mt_minus);
      mt_plus = std::conj(mt_plus);
    } else {
      mr_minus = sol.r_hat_minus;
      mr_plus = sol.r_hat_plus;
      mt_minus = sol.t_hat_minus;
      mt_plus = sol.t_hat_plus;
    }
    const cdouble pm = std::polar(1.0, kn * half);   // slit centred at -ℓε/2
    const cdouble pp = std::polar(1.0, -kn * half);  // slit centred at +ℓε/2
    const cdouble pref = -kI * eps / (d * zn);
    const cdouble rn = (n == 0 ? 1.0 : 0.0) + pref * (pm * mr_minus + pp * mr_plus);
    const cdouble tn = pref * (pm * mt_minus + pp * mt_plus);
    rec.orders.push_back(n);
    rec.r.push_back(rn);
    rec.t.push_back(tn);
    const double w = (zn / zeta0).real();
    rec.abs_r2 += w * std::norm(rn);
    rec.abs_t2 += w * std::norm(tn);
  }
  rec.abs_t = std::sqrt(rec.abs_t2);
  rec.energy_defect = std::abs(rec.abs_r2 + rec.abs_t2 - 1.0);
  return rec;
}

SpectrumRecord spectrum_point(const GratingConfig& cfg, const IncidenceSpec& inc, double k,
                              const ScatteringOptions& opts) {
  const double kappa = inc.kappa_at(k);
  try {
    const DiffractionTable table = build_table(cfg, kappa, k, opts.cutoff_guard);
    const ScatteringSolution sol = solve(cfg, kappa, k, opts);
    return diffraction_amplitudes(sol, table, cfg, opts.exact);
  } catch (const Error& e) {
    SpectrumRecord rec;
    rec.k = k;
    rec.kappa = kappa;
    rec.region = classify_region(kappa, k, cfg.b());
    rec.error = e.what();
    rec.cutoff_flag = e.kind() == ErrorKind::RayleighCutoff;
    return rec;
  }
}

std::vector<SpectrumRecord> spectrum_sweep(const GratingConfig& cfg,
                                           const IncidenceSpec& inc,
                                           const std::vector<double>& ks,
                                           const ScatteringOptions& opts, int threads) {
  std::vector<SpectrumRecord> out(ks.size());
  // build the shared static operators before the workers start
  static_operators(opts.disc.n_basis, opts.disc.n_quad, cfg.ell(), opts.beta0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ks.size(); i = next++) {
      out[i] = spectrum_point(cfg, inc, ks[i], opts);
    }
  };
  const int n = std::max(1, threads);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

std::vector<double> linspace(double a, double b, int n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "linspace needs n >= 2");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

WDiagnostic w_diagnostic(const ScatteringSolution& sol, const ReducedSystem& rs,
                         Parity parity) {
  const ParityBlock& blk = rs.block(parity);
  Eigen::Matrix2cd v;
  v.col(0) = blk.v[0];
  v.col(1) = blk.v[1];
  const double sep = std::abs(v.determinant()) / (blk.v[0].norm() * blk.v[1].norm());
  if (sep < std::sin(10.0 * kPi / 180.0)) {
    throw Error(ErrorKind::DiagnosticUnavailable,
                "diagnostic unavailable: eigenbasis nearly degenerate");
  }
  const Eigen::Vector2cd& mom = parity == Parity::Plus ? sol.moments_plus : sol.moments_minus;
  const Eigen::Vector2cd a = v.fullPivLu().solve(mom);
  const Eigen::Vector2cd comp = blk.lambda[1] * a(1) * blk.v[1];
  WDiagnostic w;
  w.w1 = comp(0);
  w.w2 = comp(1);
  const Region region = classify_region(rs.kappa, rs.k.real(), rs.b);
  w.delta = region == Region::D1 ? std::abs(rs.kappa) * rs.eps : rs.eps;
  return w;
}

const char* to_string(FeatureKind kind) noexcept {
  switch (kind) {
    case FeatureKind::Fano: return "Fano";
    case FeatureKind::FabryPerot: return "FabryPerot";
    case FeatureKind::Rayleigh: return "Rayleigh";
    case FeatureKind::None: return "none";
  }
  return "none";
}

FeatureReport fano_scan(const GratingConfig& cfg, const IncidenceSpec& inc, double k_lo,
                        double k_hi, const FanoOptions& opts) {
  if (!(k_lo < k_hi)) throw Error(ErrorKind::InvalidArgument, "empty fano window");
  std::vector<ResonanceResult> found;
  const int m_lo = std::max(1, static_cast<int>(std::floor(k_lo / kPi)));
  const int m_hi = static_cast<int>(std::ceil(k_hi / kPi)) + 1;
  for (int m = m_lo; m <= m_hi; ++m) {
    if (!(m * cfg.eps() < 0.2)) continue;
    // the seed is cheap; refinement only pays off when it can reach the window
    try {
      const double k_hat = resonance_seeds(cfg, inc, m, opts.resonance)[1].k_hat.real();
      const double reach = opts.resonance.basin_radius;
      if (k_hat < k_lo - reach || k_hat > k_hi + reach) continue;
    } catch (const Error&) {
      continue;
    }
    auto r = refine_branch(cfg, inc, m, 2, opts.resonance);
    if (r && r->k.real() >= k_lo && r->k.real() <= k_hi) found.push_back(*r);
  }
  FeatureReport rep;
  if (found.empty()) return rep;
  if (found.size() > 1) {
    throw Error(ErrorKind::InvalidArgument, "fano window contains more than one resonance");
  }
  const ResonanceResult& res = found.front();
  rep.resonance = res;
  const double kc = res.k.real();
  double half = std::max(opts.width_factor * std::abs(res.k.imag()), opts.min_half_width);

  for (int attempt = 0; attempt < 4; ++attempt, half *= 3.0) {
    const double a = std::max(k_lo, kc - half);
    const double b = std::min(k_hi, kc + half);
    const std::vector<double> ks = linspace(a, b, opts.grid);
    std::vector<double> t(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i) t[i] = abs_t(cfg, inc, ks[i], opts.scattering);
    const auto imax = static_cast<std::size_t>(std::max_element(t.begin(), t.end()) - t.begin());
    const auto imin = static_cast<std::size_t>(std::min_element(t.begin(), t.end()) - t.begin());
    const std::size_t last = ks.size() - 1;
    if (imax == 0 || imax == last || imin == 0 || imin == last) continue;
    const double step = ks[1] - ks[0];
    const double tol = std::max(1e-12, step * 1e-3);
    rep.k_peak = golden(cfg, inc, ks[imax - 1], ks[imax + 1], true, opts.scattering, tol);
    rep.k_dip = golden(cfg, inc, ks[imin - 1], ks[imin + 1], false, opts.scattering, tol);
    rep.t_peak = abs_t(cfg, inc, rep.k_peak, opts.scattering);
    rep.t_dip = abs_t(cfg, inc, rep.k_dip, opts.scattering);
    rep.contrast = rep.t_peak - rep.t_dip;
    rep.center = 0.5 * (rep.k_peak + rep.k_dip);
    rep.region = classify_region(inc.kappa_at(rep.center), rep.center, cfg.b());
    const double slope = std::abs(t.back() - t.front()) / (b - a);
    const double separation = std::abs(rep.k_peak - rep.k_dip);
    const bool close = separation <= cfg.eps();
    const bool strong = rep.contrast > opts.background_factor * slope * separation;
    rep.kind = close && strong ? FeatureKind::Fano : FeatureKind::None;
    return rep;
  }
  return rep;
}

FeatureReport fabry_perot_peak(const GratingConfig& cfg, const IncidenceSpec& inc, int m,
                               const FanoOptions& opts) {
  const auto r1 = refine_branch(cfg, inc, m, 1, opts.resonance);
  if (!r1) throw Error(ErrorKind::NoFeature, "no feature: first-branch resonance not found");
  const auto r2 = refine_branch(cfg, inc, m, 2, opts.resonance);
  double excl_c = 0.0;
  double excl_w = -1.0;
  if (r2) {
    excl_c = r2->k.real();
    excl_w = std::max(50.0 * std::abs(r2->k.imag()), 2e-3);
  }
  const double c = r1->k.real();
  const double half = std::max(4.0 * std::abs(r1->k.imag()), 0.05);
  const std::vector<double> ks = linspace(c - half, c + half, 81);
  double best = -1.0;
  std::size_t ib = 0;
  std::vector<double> t(ks.size(), -1.0);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (std::abs(ks[i] - excl_c) < excl_w) continue;
    const SpectrumRecord rec = spectrum_point(cfg, inc, ks[i], opts.scattering);
    if (!rec.error.empty()) continue;
    t[i] = rec.abs_t;
    if (t[i] > best) {
      best = t[i];
      ib = i;
    }
  }
  FeatureReport rep;
  rep.resonance = *r1;
  if (best < 0.0 || ib == 0 || ib + 1 == ks.size() || t[ib - 1] < 0.0 || t[ib + 1] < 0.0) {
    return rep;
  }
  rep.k_peak = golden(cfg, inc, ks[ib - 1], ks[ib + 1], true, opts.scattering, 1e-6);
  rep.t_peak = abs_t(cfg, inc, rep.k_peak, opts.scattering);
  rep.center = rep.k_peak;
  rep.region = classify_region(inc.kappa_at(rep.k_peak), rep.k_peak, cfg.b());
  rep.kind = FeatureKind::FabryPerot;
  return rep;
}

std::vector<KinkReport> detect_rayleigh_kinks(const GratingConfig& cfg,
                                              const IncidenceSpec& inc, double k_lo,
                                              double k_hi, double h,
                                              const ScatteringOptions& opts) {
  std::vector<KinkReport> out;
  for (double kc : rayleigh_cutoffs(cfg, inc, k_lo, k_hi)) {
    auto jump = [&](double s) {
      const double l1 = abs_t(cfg, inc, kc - s, opts);
      const double l2 = abs_t(cfg, inc, kc - 2.0 * s, opts);
      const double r1 = abs_t(cfg, inc, kc + s, opts);
      const double r2 = abs_t(cfg, inc, kc + 2.0 * s, opts);
      return std::abs((r2 - r1) / s - (l1 - l2) / s);
    };
    KinkReport k;
    k.k_cutoff = kc;
    try {
      k.slope_jump = jump(h);
      k.slope_jump_coarse = jump(10.0 * h);
      // smooth |T| gives a ratio near 0.1; a kink or square-root edge gives >= 1
      k.detected = k.slope_jump > 0.5 * k.slope_jump_coarse && k.slope_jump > 1e-6;
    } catch (const Error&) {
      k.detected = false;
    }
    out.push_back(k);
  }
  return out;
}

}  // namespace slitgrate
