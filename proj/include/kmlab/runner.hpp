#pragma once

// Command back ends shared by the C API and the CLI: verification suites,
// trajectory integration, hierarchy dumps and spectra. Every document is a
// pure function of the RunConfig.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kmlab/core_state.hpp"

namespace kmlab {

inline constexpr const char* kToolName = "kmlab";
inline constexpr const char* kToolVersion = "1.0.0";

enum class OutputFormat { kJson, kCsv };

struct RunConfig {
  int n = 2;
  std::uint64_t seed = 42;
  int points = 20;
  std::vector<std::pair<std::string, double>> tol_overrides;
  std::vector<std::string> suites;  // empty means all
  double t1 = 10.0;
  double dt = 1e-3;
  int kmax = 4;
  Space space = Space::kU;
  OutputFormat format = OutputFormat::kJson;
  std::optional<Vector> init_u;
  std::optional<Vector> init_q;
  std::optional<Vector> init_p;
  bool origin = false;  // hierarchy: evaluate at x = 0
};

struct RunOutput {
  std::string text;     // main document (JSON or CSV)
  std::string summary;  // one-line JSON (integrate only)
  bool passed = true;
};

/// Tolerance table in report order.
const std::vector<std::pair<std::string, double>>& default_tolerances();
const std::vector<std::string>& suite_names();

RunOutput run_verify(const RunConfig& cfg);
RunOutput run_integrate(const RunConfig& cfg);
RunOutput run_hierarchy(const RunConfig& cfg);
RunOutput run_spectrum(const RunConfig& cfg);

}  // namespace kmlab
