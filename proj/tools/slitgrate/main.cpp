#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace slitgrate::cli;

  CLI::App app{"slitgrate: two-slit perfectly conducting grating solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string preset_name;
  std::optional<int> threads;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI configuration file");
    sub->add_option("--out", out_path, "output file (overrides output.path)");
    sub->add_option("--preset", preset_name, "figure preset")
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5"}));
    sub->add_option("--threads", threads, "worker threads (default SLITGRATE_THREADS or 1)");
  };
  auto* spectrum = app.add_subcommand("spectrum", "transmission/reflection sweep");
  auto* resonances = app.add_subcommand("resonances", "complex resonances and scaling");
  auto* fano = app.add_subcommand("fano", "Fano, Fabry-Perot and Rayleigh features");
  for (auto* sub : {spectrum, resonances, fano}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  RunConfig cfg;
  try {
    if (config_path.empty() && preset_name.empty()) {
      throw ConfigError("either --config or --preset is required");
    }
    if (!preset_name.empty()) cfg = preset(preset_name);
    if (!config_path.empty()) cfg = load_config(config_path, cfg);
    if (!out_path.empty()) cfg.output_path = out_path;
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  const int n_threads = resolve_threads(threads);
  try {
    if (spectrum->parsed()) return cmd_spectrum(cfg, n_threads, std::cerr);
    if (resonances->parsed()) return cmd_resonances(cfg, n_threads, std::cerr);
    return cmd_fano(cfg, n_threads, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const slitgrate::Error& e) {
    std::cerr << "numerical error (" << slitgrate::to_string(e.kind()) << "): " << e.what()
              << '\n';
    return kNumericalError;
  }
}
