#include "eqk/experiments.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "eqk/errors.hpp"
#include "eqk/mercer.hpp"
#include "eqk/parallel.hpp"
#include "eqk/pauli_state.hpp"
#include "eqk/qrff.hpp"

namespace eqk {

namespace {

// Decorrelates the pair-sampling stream from the frequency-sampling stream
// that build_rff_map derives from the same seed.
constexpr std::uint64_t PAIR_STREAM_SALT = 0x9E3779B97F4A7C15ULL;
// Largest Pauli register the mixture paths may allocate.
constexpr int QRFF_QUBIT_CAP = 12;
// Gram eigenvalues above this (negative) threshold count as solver noise.
constexpr double GRAM_PSD_TOL = 1e-8;

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Nearest-rank percentile, p in (0, 1].
double percentile_of(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const auto n = static_cast<double>(v.size());
  const auto rank = static_cast<std::size_t>(std::ceil(p * n));
  return v[std::min(v.size() - 1, rank == 0 ? 0 : rank - 1)];
}

Eigen::VectorXd sample_point(const DomainBox& box, Rng& rng) {
  Eigen::VectorXd x(box.dim());
  for (int a = 0; a < box.dim(); ++a)
    x[a] = box.lower[a] + rng.uniform() * (box.upper[a] - box.lower[a]);
  return x;
}

// Per-axis inclusive linspace, expanded to the full cartesian grid.
std::vector<Eigen::VectorXd> grid_points(const DomainBox& box, int count) {
  const int d = box.dim();
  std::vector<Eigen::VectorXd> pts;
  std::vector<int> idx(d, 0);
  while (true) {
    Eigen::VectorXd p(d);
    for (int a = 0; a < d; ++a)
      p[a] = box.lower[a] +
             (box.upper[a] - box.lower[a]) * static_cast<double>(idx[a]) / (count - 1);
    pts.push_back(std::move(p));
    int a = 0;
    while (a < d && ++idx[a] == count) idx[a++] = 0;
    if (a == d) break;
  }
  return pts;
}

int clamp_threads(int threads) { return threads < 1 ? 1 : threads; }

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string csv_text(const std::vector<ResultRow>& rows) {
  std::string out = CSV_HEADER;
  out += '\n';
  for (const ResultRow& r : rows) {
    out += r.experiment;
    out += ',';
    out += r.kernel;
    out += ',';
    out += std::to_string(r.feature_dim);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += r.metric;
    out += ',';
    out += format_double(r.value);
    out += ',';
    out += format_double(r.wall_time_ms);
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> cmd_rff_sweep(const RffSweepConfig& cfg, int threads) {
  const std::string desc = cfg.kernel.describe();
  struct Task {
    std::int64_t dim;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const std::int64_t dim : cfg.feature_dims)
    for (const std::uint64_t seed : cfg.seeds) tasks.push_back({dim, seed});

  std::vector<ResultRow> rows(tasks.size());
  parallel_for(tasks.size(), clamp_threads(threads), [&](std::size_t i) {
    const Stopwatch sw;
    const auto [dim, seed] = tasks[i];
    const RffMap map = build_rff_map(cfg.kernel, static_cast<int>(dim), seed);
    const double sup = sup_error_estimate(
        map, [&](const Eigen::VectorXd& delta) { return cfg.kernel(delta); }, cfg.box,
        cfg.grid_step);
    rows[i] = {"rff-sweep", desc, dim, static_cast<std::int64_t>(seed),
               "sup_error", sup,  sw.ms()};
  });

  const std::size_t per_dim = cfg.seeds.size();
  for (std::size_t b = 0; b < cfg.feature_dims.size(); ++b) {
    std::vector<double> vals(per_dim);
    for (std::size_t i = 0; i < per_dim; ++i) vals[i] = rows[b * per_dim + i].value;
    rows.push_back({"rff-sweep", desc, cfg.feature_dims[b], -1, "sup_error_median",
                    median_of(vals), 0.0});
    rows.push_back({"rff-sweep", desc, cfg.feature_dims[b], -1, "sup_error_p90",
                    percentile_of(vals, 0.90), 0.0});
  }
  return rows;
}

std::vector<ResultRow> cmd_qrff_verify(const QrffVerifyConfig& cfg, int threads) {
  for (const std::int64_t dim : cfg.feature_dims)
    if (qubit_count_for(dim) > QRFF_QUBIT_CAP)
      throw guard_error("qrff-verify: " + std::to_string(dim) + " features need " +
                        std::to_string(qubit_count_for(dim)) + " qubits; cap is " +
                        std::to_string(QRFF_QUBIT_CAP));

  const std::string desc = cfg.kernel.describe();
  struct Task {
    std::int64_t dim;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const std::int64_t dim : cfg.feature_dims)
    for (const std::uint64_t seed : cfg.seeds) tasks.push_back({dim, seed});

  std::vector<std::vector<ResultRow>> results(tasks.size());
  parallel_for(tasks.size(), clamp_threads(threads), [&](std::size_t i) {
    const Stopwatch sw;
    const auto [dim, seed] = tasks[i];
    const QrffModel model = build_qrff_model(cfg.kernel, static_cast<int>(dim), seed);
    Rng pair_rng(seed ^ PAIR_STREAM_SALT);

    const bool dense = model.qubits <= 5;
    double max_diff = 0.0;
    double dense_max_diff = 0.0;
    double shot_sq_sum = 0.0;
    for (int p = 0; p < cfg.pair_count; ++p) {
      const Eigen::VectorXd x = sample_point(cfg.box, pair_rng);
      const Eigen::VectorXd x_p = sample_point(cfg.box, pair_rng);
      const double classical = rff_kernel_estimate(model.map, x, x_p);
      const double quantum = qrff_kernel_estimate(model, x, x_p);
      max_diff = std::max(max_diff, std::abs(quantum - classical));
      if (dense) {
        const PauliMixtureState rho = qrff_encode(model, x);
        const PauliMixtureState rho_p = qrff_encode(model, x_p);
        const double pauli_trace = hs_inner(rho, rho_p);
        const double dense_trace = mixture_to_dense(rho)
                                       .mat.cwiseProduct(mixture_to_dense(rho_p).mat.conjugate())
                                       .sum()
                                       .real();
        dense_max_diff = std::max(dense_max_diff, std::abs(pauli_trace - dense_trace));
      }
      if (cfg.shots > 0) {
        const double sampled =
            qrff_kernel_estimate_sampled(model, x, x_p, cfg.shots, pair_rng).value;
        shot_sq_sum += (sampled - quantum) * (sampled - quantum);
      }
    }

    std::vector<ResultRow>& out = results[i];
    const std::int64_t s = static_cast<std::int64_t>(seed);
    out.push_back({"qrff-verify", desc, dim, s, "max_abs_diff", max_diff, sw.ms()});
    if (dense)
      out.push_back({"qrff-verify", desc, dim, s, "dense_trace_max_abs_diff", dense_max_diff, 0.0});
    if (cfg.shots > 0)
      out.push_back({"qrff-verify", desc, dim, s, "shots_empirical_se",
                     std::sqrt(shot_sq_sum / cfg.pair_count), 0.0});
  });

  std::vector<ResultRow> rows;
  for (std::vector<ResultRow>& r : results)
    for (ResultRow& row : r) rows.push_back(std::move(row));
  return rows;
}

std::vector<ResultRow> cmd_projected_demo(const ProjectedDemoConfig& cfg, int threads) {
  const double sigma = std::sqrt(0.5 / cfg.gamma);
  const Preprocessor pre = cfg.circuit
                               ? Preprocessor::from_circuit(*cfg.circuit, cfg.box.dim())
                               : Preprocessor::identity(cfg.identity_dim, cfg.identity_bound);
  const CompositionKernel kernel(pre, sigma);

  std::string desc;
  {
    std::ostringstream d;
    if (cfg.circuit)
      d << "circuit(qubits=" << cfg.circuit->qubits() << ";gates=" << cfg.circuit->gates().size();
    else
      d << "identity(d=" << cfg.identity_dim;
    d << ";gamma=" << format_double(cfg.gamma) << ")";
    desc = d.str();
  }

  struct Task {
    std::int64_t dim;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const std::int64_t dim : cfg.feature_dims)
    for (const std::uint64_t seed : cfg.seeds) tasks.push_back({dim, seed});

  std::vector<ResultRow> rows(tasks.size());
  parallel_for(tasks.size(), clamp_threads(threads), [&](std::size_t i) {
    const Stopwatch sw;
    const auto [dim, seed] = tasks[i];
    const RffPpModel model = rff_pp_build(kernel, static_cast<int>(dim), seed);
    Rng pair_rng(seed ^ PAIR_STREAM_SALT);
    double sup = 0.0;
    for (int p = 0; p < cfg.pair_count; ++p) {
      const Eigen::VectorXd x = sample_point(cfg.box, pair_rng);
      const Eigen::VectorXd x_p = sample_point(cfg.box, pair_rng);
      const double exact = cfg.circuit ? projected_kernel_eval(*cfg.circuit, cfg.gamma, x, x_p)
                                       : composition_kernel_eval(kernel, x, x_p);
      sup = std::max(sup, std::abs(exact - rff_pp_estimate(model, x, x_p)));
    }
    rows[i] = {"projected-demo", desc, dim, static_cast<std::int64_t>(seed),
               "sup_error",      sup,  sw.ms()};
  });

  const std::size_t per_dim = cfg.seeds.size();
  for (std::size_t b = 0; b < cfg.feature_dims.size(); ++b) {
    std::vector<double> vals(per_dim);
    for (std::size_t i = 0; i < per_dim; ++i) vals[i] = rows[b * per_dim + i].value;
    rows.push_back({"projected-demo", desc, cfg.feature_dims[b], -1, "sup_error_median",
                    median_of(vals), 0.0});
  }

  const Stopwatch sw;
  const int g1 = pre.output_dim();
  const double bound = cfg.circuit ? 1.0 : cfg.identity_bound;
  const BoundReport report =
      projected_kernel_bound(cfg.box.dim(), cfg.epsilon, bound, g1, sigma, cfg.delta);
  rows.push_back({"projected-demo", desc, -1, -1, "bound_required_dim",
                  static_cast<double>(report.required_dim), sw.ms()});
  return rows;
}

std::string cmd_psd_check(const PsdCheckConfig& cfg) {
  const int dim = cfg.kernel.dim();
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(cfg.gram_points);
  if (dim == 1) {
    // Evenly spaced over one period.
    for (int i = 0; i < cfg.gram_points; ++i) {
      Eigen::VectorXd p(1);
      p[0] = 2.0 * std::numbers::pi * static_cast<double>(i) / cfg.gram_points;
      pts.push_back(std::move(p));
    }
  } else {
    Rng rng(cfg.seed);
    for (int i = 0; i < cfg.gram_points; ++i) {
      Eigen::VectorXd p(dim);
      for (int a = 0; a < dim; ++a) p[a] = 2.0 * std::numbers::pi * rng.uniform();
      pts.push_back(std::move(p));
    }
  }

  const double min_eig = gram_min_eigenvalue(gram_matrix(
      [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return cfg.kernel(a - b); },
      pts));
  const bool gram_psd = min_eig >= -GRAM_PSD_TOL;

  std::ostringstream out;
  out << "psd-check report\n";
  out << "kernel: " << cfg.kernel.describe() << '\n';
  if (cfg.kernel.kind() == ShiftInvariantKernel::Kind::Trig) {
    const bool verdict = trig_poly_is_psd(cfg.kernel.trig_poly());
    out << "psd_by_coefficients: " << (verdict ? "true" : "false") << '\n';
    out << "gram_points: " << cfg.gram_points << '\n';
    out << "gram_min_eigenvalue: " << format_double(min_eig) << '\n';
    out << "gram_psd: " << (gram_psd ? "true" : "false") << '\n';
    out << "agreement: " << (verdict == gram_psd ? "true" : "false") << '\n';
  } else {
    out << "psd_by_coefficients: n/a\n";
    out << "gram_points: " << cfg.gram_points << '\n';
    out << "gram_min_eigenvalue: " << format_double(min_eig) << '\n';
    out << "gram_psd: " << (gram_psd ? "true" : "false") << '\n';
    out << "agreement: n/a\n";
  }
  return out.str();
}

std::string cmd_bounds(const BoundsConfig& cfg) {
  std::ostringstream out;
  out << "bounds report\n";
  out << "dim: " << cfg.dim << '\n';
  out << "epsilon: " << format_double(cfg.epsilon) << '\n';
  out << "delta: " << format_double(cfg.delta) << '\n';

  double sigma_p_sq = 0.0;
  if (cfg.kernel) {
    out << "kernel: " << cfg.kernel->describe() << '\n';
    sigma_p_sq = spectral_variance(*cfg.kernel);
    if (cfg.kernel->kind() == ShiftInvariantKernel::Kind::Gaussian) {
      const double s = cfg.kernel->gaussian_sigma();
      out << "spectral_variance closed form (dim/sigma^2): "
          << format_double(static_cast<double>(cfg.dim) / (s * s)) << '\n';
      out << "spectral_variance alternate form (dim/sigma): "
          << format_double(static_cast<double>(cfg.dim) / s) << '\n';
      out << "spectral_variance quadrature oracle: "
          << format_double(gaussian_second_moment_quadrature(s, cfg.dim)) << '\n';
      out << "note: the dim/sigma form disagrees with the quadrature oracle whenever sigma != 1;"
             " the dim/sigma^2 form matches the oracle and feeds the bound below.\n";
    } else {
      out << "spectral_variance: " << format_double(sigma_p_sq) << '\n';
    }
  } else {
    sigma_p_sq = *cfg.sigma_p * *cfg.sigma_p;
    out << "sigma_p (given): " << format_double(*cfg.sigma_p) << '\n';
  }
  out << "sigma_p_sq: " << format_double(sigma_p_sq) << '\n';

  const double diam = cfg.diameter ? *cfg.diameter : cfg.box->diameter();
  out << "diameter: " << format_double(diam) << '\n';

  const double sigma_p = std::sqrt(sigma_p_sq);
  const BoundReport r8 = required_dimension(cfg.dim, cfg.epsilon, sigma_p, diam, cfg.delta, 8.0);
  const BoundReport r4 = required_dimension(cfg.dim, cfg.epsilon, sigma_p, diam, cfg.delta, 4.0);
  out << "required_dim (exponent factor 8): " << r8.required_dim << '\n';
  out << "required_dim (exponent factor 4): " << r4.required_dim << '\n';
  out << "failure_bound at required_dim (factor 8): "
      << format_double(failure_bound(r8.required_dim, cfg.dim, cfg.epsilon, sigma_p, diam, 8.0))
      << '\n';

  if (cfg.smooth_radius) {
    const BoundReport s = smooth_dimension_bound(cfg.dim, cfg.epsilon, *cfg.smooth_radius,
                                                 *cfg.smooth_second_derivative, cfg.delta);
    out << "smooth bound (radius " << format_double(*cfg.smooth_radius) << "; second derivative "
        << format_double(*cfg.smooth_second_derivative) << "): required_dim " << s.required_dim
        << '\n';
  }
  if (cfg.fourth_derivative_bound) {
    for (const double eps : cfg.fd_epsilons) {
      const int bits = required_precision_bits(*cfg.fourth_derivative_bound, eps);
      out << "required_precision_bits (L=" << format_double(*cfg.fourth_derivative_bound)
          << "; eps=" << format_double(eps) << "): " << bits << " (grid step "
          << format_double(std::ldexp(1.0, -bits)) << ")\n";
    }
  }
  return out.str();
}

std::vector<ResultRow> cmd_mercer_demo(const MercerDemoConfig& cfg) {
  const std::string desc = cfg.kernel.describe();
  const PairKernel k = [kernel = cfg.kernel](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return kernel(a - b);
  };

  std::vector<ResultRow> rows;
  const Stopwatch sw_eigen;
  const GramEigen eigen = gram_eigendecompose(gram_matrix(k, cfg.landmarks));
  const double eigen_ms = sw_eigen.ms();
  const auto m = static_cast<std::int64_t>(cfg.landmarks.size());
  for (std::int64_t j = 0; j < m; ++j)
    rows.push_back({"mercer-demo", desc, j + 1, -1, "eigenvalue", eigen.eigenvalues[j],
                    j == 0 ? eigen_ms : 0.0});
  rows.push_back({"mercer-demo", desc, -1, -1, "psd_violation_count",
                  static_cast<double>(eigen.psd_violations.size()), 0.0});

  const std::vector<Eigen::VectorXd> grid = grid_points(cfg.box, cfg.grid_count);
  for (const int rank : cfg.ranks) {
    const Stopwatch sw;
    const MercerTruncation t{cfg.landmarks, eigen, rank};
    const FiniteFeatureMap fm{t, k};

    std::vector<Eigen::VectorXd> phi;
    phi.reserve(grid.size());
    for (const Eigen::VectorXd& x : grid) phi.push_back(nystrom_features(t, k, x));

    double off_max = 0.0;
    double eqk_vs_classical = 0.0;
    double eqk_vs_kernel = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double classical = phi[i].dot(phi[j]);
        const double kv = k(grid[i], grid[j]);
        const double eqk = mercer_to_eqk(fm, grid[i], grid[j]);
        off_max = std::max(off_max, std::abs(classical - kv));
        eqk_vs_classical = std::max(eqk_vs_classical, std::abs(eqk - classical));
        eqk_vs_kernel = std::max(eqk_vs_kernel, std::abs(eqk - kv));
      }
    }

    rows.push_back({"mercer-demo", desc, rank, -1, "truncation_bound",
                    truncation_error_bound(t, rank), sw.ms()});
    rows.push_back({"mercer-demo", desc, rank, -1, "off_landmark_max_error", off_max, 0.0});
    rows.push_back(
        {"mercer-demo", desc, rank, -1, "eqk_vs_classical_max", eqk_vs_classical, 0.0});
    rows.push_back({"mercer-demo", desc, rank, -1, "eqk_max_error", eqk_vs_kernel, 0.0});
  }
  return rows;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"embedding quantum kernel experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string seeds_override;
  int threads = 1;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_path, "write output here instead of stdout");
    sub->add_option("--seeds", seeds_override, "comma-separated seed list override");
    sub->add_option("--threads", threads, "worker thread count")->check(CLI::PositiveNumber);
  };

  CLI::App* c_rff =
      app.add_subcommand("rff-sweep", "grid sup-error sweep over feature dimensions and seeds");
  CLI::App* c_qrff =
      app.add_subcommand("qrff-verify", "state-encoded vs classical feature map agreement");
  CLI::App* c_proj = app.add_subcommand(
      "projected-demo", "projected kernel vs preprocessed random-feature estimates");
  CLI::App* c_psd =
      app.add_subcommand("psd-check", "coefficient PSD verdict vs Gram eigenvalue oracle");
  CLI::App* c_bounds = app.add_subcommand("bounds", "dimension and precision bound calculator");
  CLI::App* c_mercer =
      app.add_subcommand("mercer-demo", "landmark truncation and state-encoding round trip");
  for (CLI::App* sub : {c_rff, c_qrff, c_proj, c_psd, c_bounds, c_mercer}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    std::string text;
    if (c_rff->parsed()) {
      RffSweepConfig cfg = load_rff_sweep_config(config_path);
      if (!seeds_override.empty()) cfg.seeds = parse_seed_list(seeds_override);
      text = csv_text(cmd_rff_sweep(cfg, threads));
    } else if (c_qrff->parsed()) {
      QrffVerifyConfig cfg = load_qrff_verify_config(config_path);
      if (!seeds_override.empty()) cfg.seeds = parse_seed_list(seeds_override);
      text = csv_text(cmd_qrff_verify(cfg, threads));
    } else if (c_proj->parsed()) {
      ProjectedDemoConfig cfg = load_projected_demo_config(config_path);
      if (!seeds_override.empty()) cfg.seeds = parse_seed_list(seeds_override);
      text = csv_text(cmd_projected_demo(cfg, threads));
    } else if (c_psd->parsed()) {
      text = cmd_psd_check(load_psd_check_config(config_path));
    } else if (c_bounds->parsed()) {
      text = cmd_bounds(load_bounds_config(config_path));
    } else {
      text = csv_text(cmd_mercer_demo(load_mercer_demo_config(config_path)));
    }

    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw config_error("cannot open output file '" + out_path + "'");
      file << text;
    }
    return 0;
  } catch (const guard_error& e) {
    std::cerr << "guard violation: " << e.what() << '\n';
    return 2;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace eqk
