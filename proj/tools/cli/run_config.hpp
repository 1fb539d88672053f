#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "slitgrate/domain.hpp"

namespace slitgrate::cli {

/// Invalid or unreadable configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double d = 1.3;
  double eps = 0.02;
  double ell = 2.0;

  std::optional<double> theta_rad;
  std::optional<double> kappa;

  double k_min = 2.0;
  double k_max = 7.0;
  int n_points = 500;

  int n_basis = 16;
  int n_quad = 128;
  double tol_series = 1e-12;
  double cutoff_guard = 1e-6;
  std::optional<double> beta0_override;

  std::vector<int> m_list{1, 2};
  std::vector<double> eps_list;
  std::vector<std::pair<double, double>> fano_windows;

  std::string output_path;
  std::string format = "csv";

  GratingConfig grating() const { return {d, eps, ell}; }
  IncidenceSpec incidence() const;
  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

/// Figure presets: fig2, fig3, fig4, fig5.
RunConfig preset(const std::string& name);

/// Overlays the keys present in an INI file on `base`.
RunConfig load_config(const std::string& path, RunConfig base);

}  // namespace slitgrate::cli
