#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "run_config.hpp"
#include "slitgrate/scattering.hpp"

namespace slitgrate::cli {

enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3 };

/// --threads, then SLITGRATE_THREADS, then 1.
int resolve_threads(std::optional<int> flag);

/// 17 significant digits, "nan"/"inf" spelled out.
std::string format_double(double v);

ScatteringOptions scattering_options(const RunConfig& cfg);
ResonanceOptions resonance_options(const RunConfig& cfg);

void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumRecord>& recs);
nlohmann::json spectrum_json(const std::vector<SpectrumRecord>& recs);
nlohmann::json resonance_json(const ResonanceResult& r);
nlohmann::json feature_json(const FeatureReport& f);

int cmd_spectrum(const RunConfig& cfg, int threads, std::ostream& log);
int cmd_resonances(const RunConfig& cfg, int threads, std::ostream& log);
int cmd_fano(const RunConfig& cfg, int threads, std::ostream& log);

}  // namespace slitgrate::cli
