#include "run_config.hpp"

#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace slitgrate::cli {
namespace {

namespace pt = boost::property_tree;

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream is(item);
    T v;
    if (!(is >> v)) throw ConfigError("bad list entry for " + key + ": '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::pair<double, double>> parse_windows(const std::string& text) {
  std::vector<std::pair<double, double>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw ConfigError("fano window must look like lo:hi, got '" + item + "'");
    }
    try {
      out.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ConfigError("bad fano window '" + item + "'");
    }
  }
  return out;
}

template <class T>
void read(const pt::ptree& tree, const std::string& key, T& dst) {
  if (auto v = tree.get_optional<std::string>(key)) {
    std::istringstream is(*v);
    T tmp;
    if (!(is >> tmp)) throw ConfigError("cannot parse " + key + " = '" + *v + "'");
    dst = tmp;
  }
}

void read(const pt::ptree& tree, const std::string& key, std::string& dst) {
  if (auto v = tree.get_optional<std::string>(key)) dst = *v;
}

template <class T>
void read(const pt::ptree& tree, const std::string& key, std::optional<T>& dst) {
  T tmp{};
  if (tree.get_optional<std::string>(key)) {
    read(tree, key, tmp);
    dst = tmp;
  }
}

}  // namespace

IncidenceSpec RunConfig::incidence() const {
  if (theta_rad) return IncidenceSpec::angle(*theta_rad);
  return IncidenceSpec::bloch(kappa.value_or(0.0));
}

void RunConfig::validate() const {
  if (theta_rad.has_value() == kappa.has_value()) {
    throw ConfigError("exactly one of incidence.theta_rad and incidence.kappa must be set");
  }
  if (!(k_min < k_max)) throw ConfigError("empty sweep range: k_min must be below k_max");
  if (n_points < 2) throw ConfigError("sweep.n_points must be at least 2");
  if (!(tol_series > 0.0) || !(cutoff_guard > 0.0)) {
    throw ConfigError("tolerances must be positive");
  }
  if (n_basis < 2 || n_quad < 2 * n_basis) {
    throw ConfigError("discretization needs n_basis >= 2 and n_quad >= 2 n_basis");
  }
  if (format != "csv" && format != "json") throw ConfigError("output.format must be csv or json");
  for (const auto& [lo, hi] : fano_windows) {
    if (!(lo < hi)) throw ConfigError("fano window with lo >= hi");
  }
  try {
    (void)grating();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

RunConfig preset(const std::string& name) {
  RunConfig c;
  if (name == "fig3") {
    c.d = 1.3;
    c.eps = 0.02;
    c.theta_rad = kPi / 6.0;
    c.k_min = 2.0;
    c.k_max = 7.0;
    c.fano_windows = {{3.0, 3.15}, {6.0, 6.2}};
  } else if (name == "fig4") {
    c.d = 1.5;
    c.eps = 0.005;
    c.theta_rad = 3.0 * kPi / 8.0;
    c.k_min = 2.0;
    c.k_max = 7.0;
    c.fano_windows = {{3.05, 3.2}, {6.15, 6.3}};
  } else if (name == "fig5") {
    c.d = 1.5;
    c.eps = 0.005;
    c.theta_rad = kPi / 6.0;
    c.k_min = 2.0;
    c.k_max = 10.0;
    c.m_list = {1, 2, 3};
    c.fano_windows = {{3.05, 3.2}, {6.15, 6.3}, {9.3, 9.45}};
  } else if (name == "fig2") {
    c.d = 1.0;
    c.eps = 0.05;
    c.ell = 9.0;
    c.kappa = 0.1;
    c.k_min = 2.0;
    c.k_max = 3.5;
    c.m_list = {1};
    c.fano_windows = {{2.75, 2.9}};
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected fig2, fig3, fig4 or fig5)");
  }
  return c;
}

RunConfig load_config(const std::string& path, RunConfig c) {
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  read(tree, "geometry.d", c.d);
  read(tree, "geometry.eps", c.eps);
  read(tree, "geometry.ell", c.ell);

  std::optional<double> theta;
  std::optional<double> kappa;
  read(tree, "incidence.theta_rad", theta);
  read(tree, "incidence.kappa", kappa);
  if (theta && kappa) {
    throw ConfigError("exactly one of incidence.theta_rad and incidence.kappa must be set");
  }
  if (theta) {
    c.theta_rad = theta;
    c.kappa.reset();
  }
  if (kappa) {
    c.kappa = kappa;
    c.theta_rad.reset();
  }

  read(tree, "sweep.k_min", c.k_min);
  read(tree, "sweep.k_max", c.k_max);
  read(tree, "sweep.n_points", c.n_points);

  read(tree, "discretization.n_basis", c.n_basis);
  read(tree, "discretization.n_quad", c.n_quad);
  read(tree, "discretization.tol_series", c.tol_series);
  read(tree, "discretization.cutoff_guard", c.cutoff_guard);
  read(tree, "discretization.beta0", c.beta0_override);

  if (auto v = tree.get_optional<std::string>("resonance.m_list"))
    c.m_list = parse_list<int>(*v, "resonance.m_list");
  if (auto v = tree.get_optional<std::string>("resonance.eps_list"))
    c.eps_list = parse_list<double>(*v, "resonance.eps_list");
  if (auto v = tree.get_optional<std::string>("fano.windows")) c.fano_windows = parse_windows(*v);

  read(tree, "output.path", c.output_path);
  read(tree, "output.format", c.format);
  return c;
}

}  // namespace slitgrate::cli
