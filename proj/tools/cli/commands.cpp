#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>

namespace slitgrate::cli {
namespace {

using nlohmann::json;

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file '" + path + "'");
  return os;
}

std::string output_path(const RunConfig& cfg, const char* fallback) {
  return cfg.output_path.empty() ? std::string(fallback) : cfg.output_path;
}

json complex_json(cdouble z) { return json::array({z.real(), z.imag()}); }

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

int resolve_threads(std::optional<int> flag) {
  if (flag) return std::max(1, *flag);
  if (const char* env = std::getenv("SLITGRATE_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<int>(n);
  }
  return 1;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ScatteringOptions scattering_options(const RunConfig& cfg) {
  ScatteringOptions o;
  o.disc.n_basis = cfg.n_basis;
  o.disc.n_quad = cfg.n_quad;
  o.disc.series.tol = cfg.tol_series;
  o.cutoff_guard = cfg.cutoff_guard;
  o.beta0 = cfg.beta0_override;
  return o;
}

ResonanceOptions resonance_options(const RunConfig& cfg) {
  ResonanceOptions o;
  o.disc = scattering_options(cfg).disc;
  o.beta0 = cfg.beta0_override;
  return o;
}

void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumRecord>& recs) {
  os << "k,kappa,region,absT,absT2,absR2,energy_defect,re_t0,im_t0,cutoff_flag,solver\n";
  const double nan = std::nan("");
  for (const auto& r : recs) {
    const bool ok = r.error.empty();
    const cdouble t0 = ok ? r.t0() : cdouble(nan, nan);
    os << format_double(r.k) << ',' << format_double(r.kappa) << ',' << to_string(r.region)
       << ',' << format_double(ok ? r.abs_t : nan) << ',' << format_double(ok ? r.abs_t2 : nan)
       << ',' << format_double(ok ? r.abs_r2 : nan) << ','
       << format_double(ok ? r.energy_defect : nan) << ',' << format_double(t0.real()) << ','
       << format_double(t0.imag()) << ',' << (r.cutoff_flag ? 1 : 0) << ','
       << (ok ? r.solver : "failed") << '\n';
  }
}

json spectrum_json(const std::vector<SpectrumRecord>& recs) {
  json arr = json::array();
  for (const auto& r : recs) {
    json j;
    j["k"] = r.k;
    j["kappa"] = r.kappa;
    j["region"] = to_string(r.region);
    j["cutoff_flag"] = r.cutoff_flag;
    if (!r.error.empty()) {
      j["error"] = r.error;
    } else {
      j["absT"] = r.abs_t;
      j["absT2"] = r.abs_t2;
      j["absR2"] = r.abs_r2;
      j["energy_defect"] = r.energy_defect;
      j["solver"] = r.solver;
      json orders = json::array();
      for (std::size_t i = 0; i < r.orders.size(); ++i) {
        orders.push_back({{"n", r.orders[i]}, {"r", complex_json(r.r[i])},
                          {"t", complex_json(r.t[i])}});
      }
      j["orders"] = orders;
    }
    arr.push_back(j);
  }
  return arr;
}

json resonance_json(const ResonanceResult& r) {
  return {{"m", r.m},
          {"j", r.j},
          {"parity", to_string(r.parity)},
          {"re_k", r.k.real()},
          {"im_k", r.k.imag()},
          {"k_hat_re", r.k_hat.real()},
          {"k_hat_im", r.k_hat.imag()},
          {"residual", r.residual},
          {"region", to_string(r.region)},
          {"kappa", r.kappa},
          {"iterations", r.iterations},
          {"bic", r.bic}};
}

json feature_json(const FeatureReport& f) {
  json j = {{"classification", to_string(f.kind)},
            {"k_peak", f.k_peak},
            {"k_dip", f.k_dip},
            {"t_peak", f.t_peak},
            {"t_dip", f.t_dip},
            {"contrast", f.contrast},
            {"center", f.center},
            {"region", to_string(f.region)}};
  if (f.resonance) j["resonance"] = resonance_json(*f.resonance);
  return j;
}

int cmd_spectrum(const RunConfig& cfg, int threads, std::ostream& log) {
  const auto opts = scattering_options(cfg);
  const auto ks = linspace(cfg.k_min, cfg.k_max, cfg.n_points);
  const auto recs = spectrum_sweep(cfg.grating(), cfg.incidence(), ks, opts, threads);

  int hard = 0;
  for (const auto& r : recs) {
    if (!r.error.empty() && !r.cutoff_flag) {
      ++hard;
      log << "k = " << format_double(r.k) << ": " << r.error << '\n';
    }
  }
  const std::string path = output_path(cfg, cfg.format == "json" ? "spectrum.json" : "spectrum.csv");
  if (cfg.format == "json") {
    auto os = open_output(path);
    os << spectrum_json(recs).dump(2) << '\n';
  } else {
    auto os = open_output(path);
    write_spectrum_csv(os, recs);
    auto side = open_output(path + ".orders.json");
    side << spectrum_json(recs).dump(2) << '\n';
  }
  log << "wrote " << recs.size() << " points to " << path << '\n';
  return hard > 0 ? kNumericalError : kOk;
}

int cmd_resonances(const RunConfig& cfg, int threads, std::ostream& log) {
  const auto opts = resonance_options(cfg);
  const GratingConfig grating = cfg.grating();
  const IncidenceSpec inc = cfg.incidence();

  struct Task {
    int m;
    int j;
  };
  std::vector<Task> tasks;
  for (int m : cfg.m_list)
    for (int j : {1, 2}) tasks.push_back({m, j});

  auto run = [&](const Task& t) -> json {
    try {
      const auto seeds = resonance_seeds(grating, inc, t.m, opts);
      return resonance_json(refine_root(grating, inc, seeds[t.j - 1], opts));
    } catch (const Error& e) {
      return {{"m", t.m}, {"j", t.j}, {"error", e.what()}};
    }
  };
  // seeds are independent; results are collected in task order
  static_operators(cfg.n_basis, cfg.n_quad, cfg.ell, cfg.beta0_override);
  std::vector<json> results(tasks.size());
  for (std::size_t start = 0; start < tasks.size(); start += threads) {
    std::vector<std::future<json>> batch;
    for (std::size_t i = start; i < std::min(tasks.size(), start + threads); ++i)
      batch.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred, run,
                                 tasks[i]));
    for (std::size_t i = 0; i < batch.size(); ++i) results[start + i] = batch[i].get();
  }

  int failures = 0;
  json out;
  out["beta0"] = static_operators(cfg.n_basis, cfg.n_quad, cfg.ell, cfg.beta0_override)->beta0;
  out["resonances"] = json::array();
  for (auto& r : results) {
    if (r.contains("error")) {
      ++failures;
      log << "m = " << r["m"] << ", j = " << r["j"] << ": " << r["error"].get<std::string>()
          << '\n';
    }
    out["resonances"].push_back(r);
  }

  if (!cfg.eps_list.empty()) {
    out["scaling"] = json::array();
    for (int m : cfg.m_list) {
      try {
        const ScalingReport rep = scaling_study(grating, inc, m, cfg.eps_list, opts);
        json s = {{"m", m},
                  {"eps", rep.eps},
                  {"slope_im_k1", rep.im_k1.slope},
                  {"slope_im_k1_stderr", rep.im_k1.stderr_slope},
                  {"slope_im_k2", rep.im_k2.slope},
                  {"slope_im_k2_stderr", rep.im_k2.stderr_slope},
                  {"slope_asymptotic_error", rep.asymptotic_error.slope}};
        json roots = json::array();
        for (std::size_t i = 0; i < rep.eps.size(); ++i) {
          roots.push_back({{"eps", rep.eps[i]},
                           {"k1", resonance_json(rep.branch1[i])},
                           {"k2", resonance_json(rep.branch2[i])}});
        }
        s["roots"] = roots;
        out["scaling"].push_back(s);
      } catch (const Error& e) {
        out["scaling"].push_back({{"m", m}, {"error", e.what()}});
        log << "scaling study m = " << m << ": " << e.what() << '\n';
      }
    }
  }

  const std::string path = output_path(cfg, "resonances.json");
  auto os = open_output(path);
  os << out.dump(2) << '\n';
  log << "wrote " << results.size() << " resonances to " << path << '\n';
  return !results.empty() && failures == static_cast<int>(results.size()) ? kNumericalError
                                                                          : kOk;
}

int cmd_fano(const RunConfig& cfg, int threads, std::ostream& log) {
  (void)threads;
  FanoOptions opts;
  opts.scattering = scattering_options(cfg);
  opts.resonance = resonance_options(cfg);
  const GratingConfig grating = cfg.grating();
  const IncidenceSpec inc = cfg.incidence();

  json out;
  out["features"] = json::array();
  for (const auto& [lo, hi] : cfg.fano_windows) {
    json f = feature_json(fano_scan(grating, inc, lo, hi, opts));
    f["window"] = {lo, hi};
    out["features"].push_back(f);
  }
  out["fabry_perot"] = json::array();
  for (int m : cfg.m_list) {
    try {
      json f = feature_json(fabry_perot_peak(grating, inc, m, opts));
      f["m"] = m;
      out["fabry_perot"].push_back(f);
    } catch (const Error& e) {
      out["fabry_perot"].push_back({{"m", m}, {"error", e.what()}});
    }
  }
  out["rayleigh"] = json::array();
  for (const auto& k : detect_rayleigh_kinks(grating, inc, cfg.k_min, cfg.k_max, 1e-4,
                                             opts.scattering)) {
    out["rayleigh"].push_back({{"k_cutoff", k.k_cutoff},
                               {"classification", k.detected ? "Rayleigh" : "none"},
                               {"slope_jump", nullable(k.slope_jump)},
                               {"slope_jump_coarse", nullable(k.slope_jump_coarse)}});
  }
  const std::string path = output_path(cfg, "fano.json");
  auto os = open_output(path);
  os << out.dump(2) << '\n';
  log << "wrote feature report to " << path << '\n';
  return kOk;
}

}  // namespace slitgrate::cli
