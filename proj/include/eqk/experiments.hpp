#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eqk/config.hpp"

// Experiment commands behind the CLI. Each command is a pure function of
// its config (plus a worker count), so tests can call it directly; run_cli
// only adds argument parsing, file I/O, and exit-code mapping.
//
// CSV-emitting commands share one schema:
//   experiment,kernel,D,seed,metric,value,wall_time_ms
// Summary rows use seed -1; rows not tied to a feature dimension use D -1.
// Bodies are deterministic given (config, seeds) except for wall_time_ms.

namespace eqk {

struct ResultRow {
  std::string experiment;
  std::string kernel;
  std::int64_t feature_dim = 0;
  std::int64_t seed = 0;
  std::string metric;
  double value = 0.0;
  double wall_time_ms = 0.0;
};

inline constexpr const char* CSV_HEADER = "experiment,kernel,D,seed,metric,value,wall_time_ms";

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

std::string csv_text(const std::vector<ResultRow>& rows);

std::vector<ResultRow> cmd_rff_sweep(const RffSweepConfig& cfg, int threads);
std::vector<ResultRow> cmd_qrff_verify(const QrffVerifyConfig& cfg, int threads);
std::vector<ResultRow> cmd_projected_demo(const ProjectedDemoConfig& cfg, int threads);
std::string cmd_psd_check(const PsdCheckConfig& cfg);
std::string cmd_bounds(const BoundsConfig& cfg);
std::vector<ResultRow> cmd_mercer_demo(const MercerDemoConfig& cfg);

// Exit codes: 0 success, 1 config error, 2 resource-guard violation.
int run_cli(int argc, const char* const* argv);

}  // namespace eqk
