#include "slitgrate/resonance.hpp"

#include <cmath>
#include <sstream>

namespace slitgrate {
namespace {

struct Tracked {
  cdouble lambda;
  Eigen::Vector2cd v;
};

double overlap(const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

Eigen::Vector2cd branch_reference(int j) {
  return j == 1 ? Eigen::Vector2cd(1.0, 1.0) : Eigen::Vector2cd(1.0, -1.0);
}

// eigenpair of 𝕄_σ(k) whose eigenvector is closest to `ref`
Tracked track(cdouble k, Parity parity, double kappa, const GratingConfig& cfg,
              const Eigen::Vector2cd& ref, const ResonanceOptions& opts) {
  const ReducedSystem rs = build_reduced(cfg, kappa, k, opts.disc, opts.beta0);
  const ParityBlock& blk = rs.block(parity);
  const double o0 = overlap(blk.v[0], ref);
  const double o1 = overlap(blk.v[1], ref);
  return o0 >= o1 ? Tracked{blk.lambda[0], blk.v[0]} : Tracked{blk.lambda[1], blk.v[1]};
}

ResonanceResult muller(const GratingConfig& cfg, double kappa, const ResonanceSeed& seed,
                       cdouble start, const ResonanceOptions& opts) {
  Eigen::Vector2cd ref = branch_reference(seed.j);
  const double h = 1e-3;
  cdouble x0 = start - h;
  cdouble x1 = start + h;
  cdouble x2 = start;
  cdouble f0 = track(x0, seed.parity, kappa, cfg, ref, opts).lambda;
  cdouble f1 = track(x1, seed.parity, kappa, cfg, ref, opts).lambda;
  Tracked t2 = track(x2, seed.parity, kappa, cfg, ref, opts);
  cdouble f2 = t2.lambda;
  ref = t2.v;

  for (int it = 1; it <= opts.max_iter; ++it) {
    const cdouble h1 = x1 - x0;
    const cdouble h2 = x2 - x1;
    const cdouble d1 = (f1 - f0) / h1;
    const cdouble d2 = (f2 - f1) / h2;
    const cdouble a = (d2 - d1) / (h2 + h1);
    const cdouble b = a * h2 + d2;
    const cdouble disc = std::sqrt(b * b - 4.0 * a * f2);
    const cdouble den = std::abs(b + disc) >= std::abs(b - disc) ? b + disc : b - disc;
    cdouble dx = den == cdouble(0.0) ? cdouble(h, 0.0) : -2.0 * f2 / den;
    const cdouble x3 = x2 + dx;
    if (std::abs(x3 - seed.k_hat) > opts.basin_radius) {
      std::ostringstream os;
      os << "basin escape: iterate " << x3 << " left the disc of radius "
         << opts.basin_radius << " around " << seed.k_hat;
      throw Error(ErrorKind::BasinEscape, os.str());
    }
    const Tracked t3 = track(x3, seed.parity, kappa, cfg, ref, opts);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    x2 = x3;
    f2 = t3.lambda;
    ref = t3.v;
    if (std::abs(f2) < opts.tol && std::abs(dx) < opts.tol * std::max(1.0, std::abs(x2))) {
      ResonanceResult r;
      r.k = x2;
      r.kappa = kappa;
      r.residual = std::abs(f2);
      r.iterations = it;
      r.j = seed.j;
      r.m = seed.m;
      r.parity = seed.parity;
      r.k_hat = seed.k_hat;
      return r;
    }
  }
  std::ostringstream os;
  os << "no convergence after " << opts.max_iter << " Muller iterations (|lambda| = "
     << std::abs(f2) << ")";
  throw Error(ErrorKind::NoConvergence, os.str());
}

}  // namespace

cdouble gamma_fn(const GratingConfig& cfg, double kappa, cdouble k, double beta0,
                 const SeriesOptions& opts) {
  return 2.0 * beta_e(kappa, k, cfg, opts) + (2.0 / kPi) * std::log(2.0) -
         (2.0 / kPi) * std::log(cfg.eps()) - beta0;
}

AsymptoticPair asymptotic_resonances(const GratingConfig& cfg, double kappa, int m,
                                     const ResonanceOptions& opts) {
  const double eps = cfg.eps();
  if (m < 1 || !(m * eps < 0.2)) {
    throw Error(ErrorKind::InvalidArgument, "asymptotic resonances require m >= 1 and m eps < 0.2");
  }
  const auto ops = static_operators(opts.disc.n_basis, opts.disc.n_quad, cfg.ell(), opts.beta0);
  const double mp = m * kPi;
  const cdouble g = gamma_fn(cfg, kappa, mp, ops->beta0, opts.disc.series);
  AsymptoticPair out;
  out.k1 = mp + 2.0 * mp *
                    ((2.0 / kPi) * eps * std::log(eps) +
                     (1.0 / (ops->alpha + ops->alpha_tilde) + g) * eps);
  out.k2 = mp + 2.0 * mp *
                    (1.0 / (ops->alpha - ops->alpha_tilde) + 2.0 * std::log(2.0) / kPi -
                     ops->beta0) *
                    eps;
  if (std::abs(out.k1 - out.k2) < opts.overlap_guard) {
    throw Error(ErrorKind::ResonanceOverlap, "resonance overlap: seeds coincide");
  }
  return out;
}

cdouble lambda_eval(cdouble k, Parity parity, double kappa, const GratingConfig& cfg,
                    int j, const ResonanceOptions& opts) {
  const ReducedSystem rs = build_reduced(cfg, kappa, k, opts.disc, opts.beta0);
  const ParityBlock& blk = rs.block(parity);
  const double a0 = std::acos(std::min(1.0, overlap(blk.v[0], branch_reference(1))));
  const double a1 = std::acos(std::min(1.0, overlap(blk.v[1], branch_reference(1))));
  if (std::abs(a0 - a1) < 10.0 * kPi / 180.0) {
    throw Error(ErrorKind::BranchAmbiguity,
                "branch ambiguity: eigenvectors within 10 degrees of each other");
  }
  return blk.lambda[j == 1 ? 0 : 1];
}

std::vector<ResonanceSeed> resonance_seeds(const GratingConfig& cfg,
                                           const IncidenceSpec& inc, int m,
                                           const ResonanceOptions& opts) {
  const double kappa = inc.kappa_at(m * kPi);
  const AsymptoticPair a = asymptotic_resonances(cfg, kappa, m, opts);
  const Parity par = parity_for_mode(m);
  return {ResonanceSeed{m, 1, par, kappa, a.k1}, ResonanceSeed{m, 2, par, kappa, a.k2}};
}

ResonanceResult refine_root(const GratingConfig& cfg, const IncidenceSpec& inc,
                            const ResonanceSeed& seed, const ResonanceOptions& opts) {
  double kappa = seed.kappa;
  ResonanceResult r = muller(cfg, kappa, seed, seed.k_hat, opts);
  if (inc.is_angle()) {
    for (int it = 0; it < opts.max_kappa_updates; ++it) {
      const double next = inc.kappa_at(r.k.real());
      if (std::abs(next - kappa) < 1e-13) break;
      kappa = next;
      r = muller(cfg, kappa, seed, r.k, opts);
    }
  }
  r.kappa = kappa;
  r.region = classify_region(kappa, r.k.real(), cfg.b());
  r.bic = std::abs(r.k.imag()) < opts.bic_threshold && r.region == Region::D1;
  return r;
}

SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "fit_line needs at least two points");
  }
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - f.intercept - f.slope * x[i];
      rss += e * e;
    }
    f.stderr_slope = std::sqrt(rss / (n - 2) / sxx);
  }
  return f;
}

ScalingReport scaling_study(const GratingConfig& tmpl, const IncidenceSpec& inc, int m,
                            const std::vector<double>& eps_list,
                            const ResonanceOptions& opts) {
  if (eps_list.size() < 4) {
    throw Error(ErrorKind::InvalidArgument, "scaling study needs at least 4 eps values");
  }
  ScalingReport rep;
  rep.eps = eps_list;
  std::vector<double> le, l1, l2, la;
  for (double eps : eps_list) {
    const GratingConfig cfg = tmpl.with_eps(eps);
    const auto seeds = resonance_seeds(cfg, inc, m, opts);
    rep.branch1.push_back(refine_root(cfg, inc, seeds[0], opts));
    rep.branch2.push_back(refine_root(cfg, inc, seeds[1], opts));
    le.push_back(std::log(eps));
    l1.push_back(std::log(std::abs(rep.branch1.back().k.imag())));
    l2.push_back(std::log(std::abs(rep.branch2.back().k.imag())));
    la.push_back(std::log(std::abs(rep.branch1.back().k - rep.branch1.back().k_hat)));
  }
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (rep.branch1[i].region != rep.branch1[0].region ||
        rep.branch2[i].region != rep.branch2[0].region) {
      throw Error(ErrorKind::RegionMismatch,
                  "region classification changes across the eps list");
    }
  }
  rep.im_k1 = fit_line(le, l1);
  rep.im_k2 = fit_line(le, l2);
  rep.asymptotic_error = fit_line(le, la);
  return rep;
}

}  // namespace slitgrate
