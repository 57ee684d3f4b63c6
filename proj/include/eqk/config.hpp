#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqk/composition.hpp"
#include "eqk/rff.hpp"
#include "eqk/spectral.hpp"

// Typed experiment configs parsed from JSON files. One file drives one CLI
// subcommand; the schema is documented in the README. Malformed or
// inconsistent input raises config_error, which the CLI maps to exit code 1
// (resource guards raise guard_error and map to exit code 2 instead).

namespace eqk {

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RffSweepConfig {
  ShiftInvariantKernel kernel;
  DomainBox box;
  double grid_step = 0.0;
  std::vector<std::int64_t> feature_dims;
  std::vector<std::uint64_t> seeds;
};

struct QrffVerifyConfig {
  ShiftInvariantKernel kernel;
  DomainBox box;
  std::vector<std::int64_t> feature_dims;
  std::vector<std::uint64_t> seeds;
  int pair_count = 0;
  std::int64_t shots = 0;  // 0 disables the sampled-estimate column
};

// Either a circuit (reduced-density-matrix preprocessor) or an identity
// preprocessor with an explicit box bound.
struct ProjectedDemoConfig {
  std::optional<EmbeddingCircuit> circuit;
  int identity_dim = 0;
  double identity_bound = 0.0;
  DomainBox box;
  double gamma = 0.0;
  std::vector<std::int64_t> feature_dims;
  std::vector<std::uint64_t> seeds;
  int pair_count = 0;
  double epsilon = 0.0;  // bound-row target accuracy
  double delta = 0.0;    // bound-row failure probability
};

struct PsdCheckConfig {
  ShiftInvariantKernel kernel;
  int gram_points = 30;
  std::uint64_t seed = 1;  // point sampling for dim > 1 only
};

struct BoundsConfig {
  int dim = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  // Spectral standard deviation: given directly or derived from a kernel.
  std::optional<double> sigma_p;
  std::optional<ShiftInvariantKernel> kernel;
  // Domain diameter: given directly or derived from a box.
  std::optional<double> diameter;
  std::optional<DomainBox> box;
  // Optional smooth-kernel route (box radius + second-derivative bound).
  std::optional<double> smooth_radius;
  std::optional<double> smooth_second_derivative;
  // Optional finite-difference precision route.
  std::optional<double> fourth_derivative_bound;
  std::vector<double> fd_epsilons;
};

struct MercerDemoConfig {
  ShiftInvariantKernel kernel;
  std::vector<Eigen::VectorXd> landmarks;
  std::vector<int> ranks;
  DomainBox box;
  int grid_count = 0;  // per-axis test grid resolution over the box
};

RffSweepConfig parse_rff_sweep_config(const std::string& json_text);
QrffVerifyConfig parse_qrff_verify_config(const std::string& json_text);
ProjectedDemoConfig parse_projected_demo_config(const std::string& json_text);
PsdCheckConfig parse_psd_check_config(const std::string& json_text);
BoundsConfig parse_bounds_config(const std::string& json_text);
MercerDemoConfig parse_mercer_demo_config(const std::string& json_text);

RffSweepConfig load_rff_sweep_config(const std::string& path);
QrffVerifyConfig load_qrff_verify_config(const std::string& path);
ProjectedDemoConfig load_projected_demo_config(const std::string& path);
PsdCheckConfig load_psd_check_config(const std::string& path);
BoundsConfig load_bounds_config(const std::string& path);
MercerDemoConfig load_mercer_demo_config(const std::string& path);

// "1,2,3" -> {1, 2, 3}; rejects empty lists and non-numeric tokens.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace eqk
