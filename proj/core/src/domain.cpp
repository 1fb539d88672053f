#include "slitgrate/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace slitgrate {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::BranchCut: return "branch cut hit";
    case ErrorKind::RayleighCutoff: return "Rayleigh cutoff";
    case ErrorKind::SeriesTruncation: return "series truncation";
    case ErrorKind::WaveguidePole: return "waveguide pole proximity";
    case ErrorKind::QuadratureUnresolved: return "quadrature unresolved";
    case ErrorKind::IllConditioned: return "ill-conditioned block";
    case ErrorKind::SingularQhat: return "beta0 produces singular Qhat";
    case ErrorKind::ResonantSingularity: return "resonant singularity";
    case ErrorKind::BranchAmbiguity: return "branch ambiguity";
    case ErrorKind::NoConvergence: return "no convergence";
    case ErrorKind::BasinEscape: return "basin escape";
    case ErrorKind::ResonanceOverlap: return "resonance overlap";
    case ErrorKind::RegionMismatch: return "region mismatch";
    case ErrorKind::NoFeature: return "no feature";
    case ErrorKind::DiagnosticUnavailable: return "diagnostic unavailable";
  }
  return "unknown";
}

GratingConfig::GratingConfig(double period, double eps, double ell)
    : d_(period), eps_(eps), ell_(ell) {
  if (!(period > 0.0) || !(eps > 0.0) || !(ell > 1.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "grating config requires d > 0, eps > 0 and ell > 1");
  }
  if (!(ell * eps + eps < period)) {
    throw Error(ErrorKind::InvalidArgument,
                "both slits must fit inside one period (ell*eps + eps < d)");
  }
}

IncidenceSpec IncidenceSpec::angle(double theta) {
  if (!(std::abs(theta) < kPi / 2)) {
    throw Error(ErrorKind::InvalidArgument,
                "incidence angle must lie in (-pi/2, pi/2)");
  }
  return {true, theta};
}

IncidenceSpec IncidenceSpec::bloch(double kappa) {
  if (!std::isfinite(kappa)) {
    throw Error(ErrorKind::InvalidArgument, "Bloch wavenumber must be finite");
  }
  return {false, kappa};
}

double IncidenceSpec::kappa_at(double k) const noexcept {
  return angle_mode_ ? k * std::sin(value_) : value_;
}

const char* to_string(Region region) noexcept {
  switch (region) {
    case Region::BelowContinuum: return "below";
    case Region::D1: return "D1";
    case Region::D2: return "D2";
  }
  return "?";
}

cdouble branch_sqrt(cdouble z) {
  const double re = z.real();
  const double im = z.imag();
  if (re == 0.0 && (im < 0.0 || (im == 0.0))) {
    throw Error(ErrorKind::BranchCut, "branch cut hit");
  }
  cdouble w = std::sqrt(z);
  // arg z in (-pi, -pi/2): rotate onto the continuation from the upper half plane
  if (re < 0.0 && std::signbit(im)) w = -w;
  return w;
}

cdouble zeta_n(double kappa, cdouble k, int n, double b) {
  const double kn = kappa + n * b;
  const cdouble arg = k * k - kn * kn;
  if (arg == cdouble(0.0, 0.0)) {
    std::ostringstream os;
    os << "Rayleigh cutoff at order " << n;
    throw Error(ErrorKind::RayleighCutoff, os.str());
  }
  return branch_sqrt(arg);
}

double fold_kappa(double kappa, double b) noexcept {
  double r = std::remainder(kappa, b);  // in [-b/2, b/2]
  if (r <= -b / 2) r += b;
  return r;
}

namespace {

std::pair<int, int> propagating_range(double kappa, double k, double b) {
  // |κ + n b| < k  <=>  (-k - κ)/b < n < (k - κ)/b
  const int lo = static_cast<int>(std::floor((-k - kappa) / b)) + 1;
  const int hi = static_cast<int>(std::ceil((k - kappa) / b)) - 1;
  return {lo, hi};
}

}  // namespace

Region classify_region(double kappa, double k, double b) noexcept {
  int count = 0;
  auto [lo, hi] = propagating_range(kappa, k, b);
  for (int n = lo; n <= hi; ++n) {
    if (std::abs(kappa + n * b) < k) ++count;
  }
  if (count == 0) return Region::BelowContinuum;
  return count == 1 ? Region::D1 : Region::D2;
}

DiffractionTable build_table(const GratingConfig& cfg, double kappa, double k,
                             double cutoff_guard, int extra_orders) {
  if (!(k > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "wavenumber must be positive");
  }
  const double b = cfg.b();
  DiffractionTable t;
  t.kappa = kappa;
  t.k = k;
  t.b = b;

  auto [lo, hi] = propagating_range(kappa, k, b);
  // keep n = 0 and the closest evanescent neighbours in the tabulated range
  lo = std::min(lo, 0) - extra_orders;
  hi = std::max(hi, 0) + extra_orders;
  t.n_min = lo;

  t.cutoff_distance = std::numeric_limits<double>::infinity();
  for (int n = lo; n <= hi; ++n) {
    const double kn = kappa + n * b;
    t.kappa_n.push_back(kn);
    t.cutoff_distance = std::min(t.cutoff_distance, std::abs(k - std::abs(kn)));
    if (std::abs(kn) < k) {
      t.propagating.push_back(n);
    } else {
      t.evanescent.push_back(n);
    }
    const double arg = k * k - kn * kn;
    t.zeta_n.push_back(arg == 0.0 ? cdouble(0.0, 0.0) : branch_sqrt(arg));
  }
  t.cutoff_flag = t.cutoff_distance < cutoff_guard * k;
  t.region = t.propagating.empty()
                 ? Region::BelowContinuum
                 : (t.propagating.size() == 1 ? Region::D1 : Region::D2);
  t.zone_edge_flag = std::abs(std::abs(fold_kappa(kappa, b)) - b / 2) < 1e-12 * b;
  return t;
}

std::vector<double> rayleigh_cutoffs(const GratingConfig& cfg,
                                     const IncidenceSpec& inc, double k_lo,
                                     double k_hi) {
  const double b = cfg.b();
  std::vector<double> out;
  const int n_span = static_cast<int>(std::ceil(2.0 * k_hi / b)) + 2;
  for (int n = -n_span; n <= n_span; ++n) {
    if (n == 0) continue;
    if (inc.is_angle()) {
      const double s = std::sin(inc.theta());
      // k = κ + n b with κ = k s, or k = -(κ + n b)
      for (double k : {n * b / (1.0 - s), -n * b / (1.0 + s)}) {
        if (k > k_lo && k < k_hi) out.push_back(k);
      }
    } else {
      const double k = std::abs(inc.fixed_kappa() + n * b);
      if (k > k_lo && k < k_hi) out.push_back(k);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double c) { return std::abs(a - c) < 1e-12; }),
            out.end());
  return out;
}

}  // namespace slitgrate
