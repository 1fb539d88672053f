#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slitgrate {

enum class ErrorKind {
  InvalidArgument,
  BranchCut,
  RayleighCutoff,
  SeriesTruncation,
  WaveguidePole,
  QuadratureUnresolved,
  IllConditioned,
  SingularQhat,
  ResonantSingularity,
  BranchAmbiguity,
  NoConvergence,
  BasinEscape,
  ResonanceOverlap,
  RegionMismatch,
  NoFeature,
  DiagnosticUnavailable,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every numerical failure in the library is reported through this type.
/// `kind()` lets callers recover selectively (e.g. retry with another β₀).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace slitgrate
