#include "eqk/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace eqk {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw config_error("config: invalid JSON");
  if (!j.is_object()) throw config_error("config: top level must be an object");
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw config_error(std::string("config: missing key '") + key + "'");
  return *it;
}

double as_double(const json& v, const char* key) {
  if (!v.is_number()) throw config_error(std::string("config: '") + key + "' must be a number");
  return v.get<double>();
}

double require_double(const json& j, const char* key) { return as_double(require(j, key), key); }

double require_positive(const json& j, const char* key) {
  const double v = require_double(j, key);
  if (v <= 0.0) throw config_error(std::string("config: '") + key + "' must be > 0");
  return v;
}

std::int64_t require_int(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer())
    throw config_error(std::string("config: '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

int require_positive_int(const json& j, const char* key) {
  const std::int64_t v = require_int(j, key);
  if (v < 1 || v > INT32_MAX)
    throw config_error(std::string("config: '") + key + "' must be a positive 32-bit integer");
  return static_cast<int>(v);
}

std::string require_string(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_string()) throw config_error(std::string("config: '") + key + "' must be a string");
  return v.get<std::string>();
}

const json& require_array(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_array() || v.empty())
    throw config_error(std::string("config: '") + key + "' must be a non-empty array");
  return v;
}

Eigen::VectorXd as_vector(const json& v, const char* key) {
  if (!v.is_array() || v.empty())
    throw config_error(std::string("config: '") + key + "' must be a non-empty array");
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = as_double(v[i], key);
  return out;
}

DomainBox parse_box(const json& j) {
  const Eigen::VectorXd lower = as_vector(require(j, "lower"), "lower");
  const Eigen::VectorXd upper = as_vector(require(j, "upper"), "upper");
  return DomainBox(lower, upper);
}

ShiftInvariantKernel parse_kernel(const json& j) {
  if (!j.is_object()) throw config_error("config: 'kernel' must be an object");
  const std::string type = require_string(j, "type");
  if (type == "gaussian")
    return ShiftInvariantKernel::gaussian(require_positive(j, "sigma"),
                                          require_positive_int(j, "dim"));
  if (type == "trig") {
    const int dim = require_positive_int(j, "dim");
    std::vector<TrigTerm> terms;
    for (const json& t : require_array(j, "terms")) {
      TrigTerm term;
      const Eigen::VectorXd freq = as_vector(require(t, "freq"), "freq");
      if (freq.size() != dim)
        throw config_error("config: trig term frequency length must equal 'dim'");
      term.freq.resize(dim);
      for (int i = 0; i < dim; ++i) {
        const double f = freq[i];
        if (f != static_cast<double>(static_cast<int>(f)))
          throw config_error("config: trig frequencies must be integers");
        term.freq[i] = static_cast<int>(f);
      }
      term.cos_coeff = t.contains("cos") ? as_double(t["cos"], "cos") : 0.0;
      term.sin_coeff = t.contains("sin") ? as_double(t["sin"], "sin") : 0.0;
      terms.push_back(std::move(term));
    }
    return ShiftInvariantKernel::trig(TrigPolynomial(dim, std::move(terms)));
  }
  throw config_error("config: unknown kernel type '" + type + "'");
}

EmbeddingCircuit parse_circuit(const json& j) {
  if (!j.is_object()) throw config_error("config: 'circuit' must be an object");
  const int qubits = require_positive_int(j, "qubits");
  std::vector<CircuitGate> gates;
  for (const json& g : require_array(j, "gates")) {
    const std::string type = require_string(g, "type");
    if (type == "rot") {
      RotationGate r;
      const std::string axis = require_string(g, "axis");
      if (axis.size() != 1) throw config_error("config: rotation axis must be 'x', 'y' or 'z'");
      r.axis = axis[0];
      r.qubit = static_cast<int>(require_int(g, "qubit"));
      r.data_index = static_cast<int>(require_int(g, "data_index"));
      r.scale = g.contains("scale") ? as_double(g["scale"], "scale") : 1.0;
      gates.emplace_back(r);
    } else if (type == "cx" || type == "cz") {
      EntanglerGate e;
      e.is_cz = type == "cz";
      e.control = static_cast<int>(require_int(g, "control"));
      e.target = static_cast<int>(require_int(g, "target"));
      gates.emplace_back(e);
    } else {
      throw config_error("config: unknown gate type '" + type + "'");
    }
  }
  return EmbeddingCircuit(qubits, std::move(gates));
}

std::vector<std::int64_t> parse_feature_dims(const json& j) {
  std::vector<std::int64_t> dims;
  for (const json& v : require_array(j, "feature_dims")) {
    if (!v.is_number_integer())
      throw config_error("config: 'feature_dims' entries must be integers");
    const std::int64_t d = v.get<std::int64_t>();
    if (d < 2 || d % 2 != 0)
      throw config_error("config: feature dimensions must be even and >= 2");
    dims.push_back(d);
  }
  return dims;
}

std::vector<std::uint64_t> parse_seeds(const json& j) {
  std::vector<std::uint64_t> seeds;
  for (const json& v : require_array(j, "seeds")) {
    if (!v.is_number_unsigned())
      throw config_error("config: 'seeds' entries must be non-negative integers");
    seeds.push_back(v.get<std::uint64_t>());
  }
  return seeds;
}

// Domain constructors signal bad values with invalid_argument; surface those
// as config errors so the CLI exit code stays 1.
template <typename Fn>
auto rewrap(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("config: ") + e.what());
  }
}

}  // namespace

RffSweepConfig parse_rff_sweep_config(const std::string& json_text) {
  return rewrap([&] {
    const json j = parse_json(json_text);
    RffSweepConfig cfg{parse_kernel(require(j, "kernel")), parse_box(require(j, "box")),
                       require_positive(j, "grid_step"), parse_feature_dims(j), parse_seeds(j)};
    if (cfg.box.dim() != cfg.kernel.dim())
      throw config_error("config: box and kernel dimensions differ");
    return cfg;
  });
}

QrffVerifyConfig parse_qrff_verify_config(const std::string& json_text) {
  return rewrap([&] {
    const json j = parse_json(json_text);
    QrffVerifyConfig cfg{parse_kernel(require(j, "kernel")),
                         parse_box(require(j, "box")),
                         parse_feature_dims(j),
                         parse_seeds(j),
                         require_positive_int(j, "pair_count"),
                         0};
    if (j.contains("shots")) {
      cfg.shots = require_int(j, "shots");
      if (cfg.shots < 0) throw config_error("config: 'shots' must be >= 0");
    }
    if (cfg.box.dim() != cfg.kernel.dim())
      throw config_error("config: box and kernel dimensions differ");
    return cfg;
  });
}

ProjectedDemoConfig parse_projected_demo_config(const std::string& json_text) {
  return rewrap([&] {
    const json j = parse_json(json_text);
    ProjectedDemoConfig cfg{std::nullopt,
                            0,
                            0.0,
                            parse_box(require(j, "box")),
                            require_positive(j, "gamma"),
                            parse_feature_dims(j),
                            parse_seeds(j),
                            require_positive_int(j, "pair_count"),
                            require_positive(j, "epsilon"),
                            require_positive(j, "delta")};
    const bool has_circuit = j.contains("circuit");
    const bool has_identity = j.contains("identity");
    if (has_circuit == has_identity)
      throw config_error("config: exactly one of 'circuit' or 'identity' is required");
    if (has_circuit) {
      cfg.circuit = parse_circuit(j["circuit"]);
      if (cfg.box.dim() < cfg.circuit->min_input_dim())
        throw config_error("config: box dimension below the circuit's data needs");
    } else {
      const json& ident = j["identity"];
      cfg.identity_dim = require_positive_int(ident, "dim");
      cfg.identity_bound = require_positive(ident, "bound");
      if (cfg.box.dim() != cfg.identity_dim)
        throw config_error("config: box and identity preprocessor dimensions differ");
      if (cfg.box.lower.minCoeff() < -cfg.identity_bound ||
          cfg.box.upper.maxCoeff() > cfg.identity_bound)
        throw config_error("config: box exceeds the identity preprocessor bound");
    }
    return cfg;
  });
}

PsdCheckConfig parse_psd_check_config(const std::string& json_text) {
  return rewrap([&] {
    const json j = parse_json(json_text);
    PsdCheckConfig cfg{parse_kernel(require(j, "kernel")), 30, 1};
    if (j.contains("gram_points")) cfg.gram_points = require_positive_int(j, "gram_points");
    if (cfg.gram_points < 2 || cfg.gram_points > 512)
      throw config_error("config: 'gram_points' must be in [2, 512]");
    if (j.contains("seed")) cfg.seed = static_cast<std::uint64_t>(require_int(j, "seed"));
    return cfg;
  });
}

BoundsConfig parse_bounds_config(const std::string& json_text) {
  return rewrap([&] {
    const json j = parse_json(json_text);
    BoundsConfig cfg;
    cfg.epsilon = require_positive(j, "epsilon");
    cfg.delta = require_positive(j, "delta");
    if (j.contains("kernel")) cfg.kernel = parse_kernel(j["kernel"]);
    if (j.contains("sigma_p")) cfg.sigma_p = require_positive(j, "sigma_p");
    if (!cfg.kernel && !cfg.sigma_p)
      throw config_error("config: one of 'kernel' or 'sigma_p' is required");
    cfg.dim = j.contains("dim") ? require_positive_int(j, "dim")
                                : (cfg.kernel ? cfg.kernel->dim() : 0);
    if (cfg.dim < 1) throw config_error("config: 'dim' is required without a kernel");
    if (cfg.kernel && cfg.kernel->dim() != cfg.dim)
      throw config_error("config: 'dim' and kernel dimension differ");
    if (j.contains("diameter")) cfg.diameter = require_positive(j, "diameter");
    if (j.contains("box")) {
      cfg.box = parse_box(j["box"]);
      if (cfg.box->dim() != cfg.dim) throw config_error("config: box dimension mismatch");
    }
    if (!cfg.diameter && !cfg.box)
      throw config_error("config: one of 'diameter' or 'box' is required");
    if (j.contains("smooth")) {
      const json& s = j["smooth"];
      cfg.smooth_radius = require_positive(s, "radius");
      cfg.smooth_second_derivative = require_positive(s, "second_derivative");
    }
    if (j.contains("fd")) {
      const json& f = j["fd"];
      cfg.fourth_derivative_bound = require_positive(f, "fourth_derivative_bound");
      for (const json& e : require_array(f, "epsilons")) {
        const double eps = as_double(e, "epsilons");
        if (eps <= 0.0) throw config_error("config: fd epsilons must be > 0");
        cfg.fd_epsilons.push_back(eps);
      }
    }
    return cfg;
  });
}

MercerDemoConfig parse_mercer_demo_config(const std::string& json_text) {
  return rewrap([&] {
    const json j = parse_json(json_text);
    ShiftInvariantKernel kernel = parse_kernel(require(j, "kernel"));
    DomainBox box = parse_box(require(j, "box"));
    if (box.dim() != kernel.dim())
      throw config_error("config: box and kernel dimensions differ");

    std::vector<Eigen::VectorXd> landmarks;
    const json& lm = require(j, "landmarks");
    if (lm.is_object()) {
      // Evenly spaced over the box; 1-d only.
      if (box.dim() != 1)
        throw config_error("config: landmark 'count' form requires a 1-d box");
      const int count = require_positive_int(lm, "count");
      if (count < 2) throw config_error("config: landmark count must be >= 2");
      const double lo = box.lower[0], hi = box.upper[0];
      for (int i = 0; i < count; ++i) {
        Eigen::VectorXd p(1);
        p[0] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        landmarks.push_back(p);
      }
    } else if (lm.is_array()) {
      for (const json& p : lm) {
        Eigen::VectorXd v = as_vector(p, "landmarks");
        if (v.size() != box.dim())
          throw config_error("config: landmark dimension mismatch");
        landmarks.push_back(std::move(v));
      }
      if (landmarks.empty()) throw config_error("config: 'landmarks' must be non-empty");
    } else {
      throw config_error("config: 'landmarks' must be an array or a {count} object");
    }

    std::vector<int> ranks;
    for (const json& r : require_array(j, "ranks")) {
      if (!r.is_number_integer()) throw config_error("config: 'ranks' entries must be integers");
      const std::int64_t v = r.get<std::int64_t>();
      if (v < 1 || v > static_cast<std::int64_t>(landmarks.size()))
        throw config_error("config: ranks must be in [1, landmark count]");
      ranks.push_back(static_cast<int>(v));
    }

    const int grid_count = require_positive_int(j, "grid_count");
    if (grid_count < 2) throw config_error("config: 'grid_count' must be >= 2");
    double grid_total = 1.0;
    for (int a = 0; a < box.dim(); ++a) grid_total *= grid_count;
    if (grid_total > 4096.0)
      throw config_error("config: test grid larger than 4096 points");

    return MercerDemoConfig{std::move(kernel), std::move(landmarks), std::move(ranks),
                            std::move(box), grid_count};
  });
}

RffSweepConfig load_rff_sweep_config(const std::string& path) {
  return parse_rff_sweep_config(read_file(path));
}
QrffVerifyConfig load_qrff_verify_config(const std::string& path) {
  return parse_qrff_verify_config(read_file(path));
}
ProjectedDemoConfig load_projected_demo_config(const std::string& path) {
  return parse_projected_demo_config(read_file(path));
}
PsdCheckConfig load_psd_check_config(const std::string& path) {
  return parse_psd_check_config(read_file(path));
}
BoundsConfig load_bounds_config(const std::string& path) {
  return parse_bounds_config(read_file(path));
}
MercerDemoConfig load_mercer_demo_config(const std::string& path) {
  return parse_mercer_demo_config(read_file(path));
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const char* first = text.data() + start;
    const char* last = text.data() + end;
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last)
      throw config_error("config: bad seed list '" + text + "'");
    seeds.push_back(value);
    start = end + 1;
  }
  if (seeds.empty()) throw config_error("config: empty seed list");
  return seeds;
}

}  // namespace eqk
