#include "eqk/rff.hpp"

#include <cmath>
#include <stdexcept>

#include "eqk/errors.hpp"

namespace eqk {

namespace {

constexpr double PAIR_COUNT_GUARD = 1e8;

// Number of grid points per axis for span/step, including both endpoints
// when the step divides the span (up to rounding slack).
std::int64_t axis_point_count(double span, double step) {
  return static_cast<std::int64_t>(std::floor(span / step + 1e-9)) + 1;
}

}  // namespace

DomainBox::DomainBox(Eigen::VectorXd lo, Eigen::VectorXd up)
    : lower(std::move(lo)), upper(std::move(up)) {
  if (lower.size() != upper.size() || lower.size() == 0)
    throw std::invalid_argument("DomainBox: bounds must share a positive dimension");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i]))
      throw std::invalid_argument("DomainBox: lower must be strictly below upper");
  }
}

RffMap::RffMap(int input_dim, int feature_dim, std::uint64_t seed,
               std::vector<Eigen::VectorXd> frequencies)
    : input_dim_(input_dim),
      feature_dim_(feature_dim),
      seed_(seed),
      frequencies_(std::move(frequencies)) {
  if (input_dim_ < 1) throw std::invalid_argument("RffMap: input dimension must be >= 1");
  if (feature_dim_ < 2 || feature_dim_ % 2 != 0)
    throw std::invalid_argument("RffMap: feature dimension must be even and >= 2");
  if (frequencies_.size() != static_cast<std::size_t>(feature_dim_ / 2))
    throw std::invalid_argument("RffMap: expected D/2 frequency vectors");
  for (const auto& w : frequencies_) {
    if (w.size() != input_dim_)
      throw std::invalid_argument("RffMap: frequency dimension mismatch");
  }
}

RffMap build_rff_map(const ShiftInvariantKernel& kernel, int feature_dim, std::uint64_t seed) {
  if (feature_dim < 2 || feature_dim % 2 != 0)
    throw std::invalid_argument("build_rff_map: D must be even and >= 2");
  if (!kernel.has_sampler())
    throw std::invalid_argument("build_rff_map: kernel has no spectral sampler");
  Rng rng(seed);
  std::vector<Eigen::VectorXd> frequencies;
  frequencies.reserve(static_cast<std::size_t>(feature_dim / 2));
  for (int j = 0; j < feature_dim / 2; ++j) frequencies.push_back(kernel.sample_frequency(rng));
  return RffMap(kernel.dim(), feature_dim, seed, std::move(frequencies));
}

L2UnitVector rff_features(const RffMap& map, const Eigen::VectorXd& x) {
  if (x.size() != map.input_dim())
    throw std::invalid_argument("rff_features: input dimension mismatch");
  const double scale = std::sqrt(2.0 / static_cast<double>(map.feature_dim()));
  std::vector<double> features;
  features.reserve(static_cast<std::size_t>(map.feature_dim()));
  for (const auto& w : map.frequencies()) {
    const double phase = w.dot(x);
    features.push_back(scale * std::cos(phase));
    features.push_back(scale * std::sin(phase));
  }
  return L2UnitVector(std::move(features));
}

double rff_kernel_estimate_delta(const RffMap& map, const Eigen::VectorXd& delta) {
  if (delta.size() != map.input_dim())
    throw std::invalid_argument("rff_kernel_estimate: input dimension mismatch");
  double total = 0.0;
  for (const auto& w : map.frequencies()) total += std::cos(w.dot(delta));
  return 2.0 * total / static_cast<double>(map.feature_dim());
}

double rff_kernel_estimate(const RffMap& map, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& x_p) {
  if (x.size() != x_p.size())
    throw std::invalid_argument("rff_kernel_estimate: input dimension mismatch");
  return rff_kernel_estimate_delta(map, x - x_p);
}

double failure_bound(std::int64_t feature_dim, int d, double epsilon, double sigma_p,
                     double diam, double exponent_factor) {
  if (feature_dim < 1 || d < 1 || epsilon <= 0.0 || sigma_p <= 0.0 || diam <= 0.0 ||
      exponent_factor <= 0.0)
    throw std::invalid_argument("failure_bound: all arguments must be positive");
  const double prefactor_root = sigma_p * diam / epsilon;
  const double raw = 256.0 * prefactor_root * prefactor_root *
                     std::exp(-static_cast<double>(feature_dim) * epsilon * epsilon /
                              (exponent_factor * (d + 2)));
  return std::min(1.0, raw);
}

BoundReport required_dimension(int d, double epsilon, double sigma_p, double diam,
                               double delta, double exponent_factor) {
  if (d < 1 || epsilon <= 0.0 || epsilon >= 1.0)
    throw std::invalid_argument("required_dimension: need d >= 1 and eps in (0,1)");
  if (sigma_p <= 0.0 || diam <= 0.0)
    throw std::invalid_argument("required_dimension: sigma_p and diam must be positive");
  if (delta <= 0.0 || delta > 1.0)
    throw std::invalid_argument("required_dimension: delta must lie in (0,1]");

  BoundReport report;
  report.epsilon = epsilon;
  report.failure_probability = delta;
  report.sigma_p_sq = sigma_p * sigma_p;
  report.diameter = diam;
  report.dim = d;
  report.exponent_factor = exponent_factor;

  const double prefactor_root = sigma_p * diam / epsilon;
  const double log_argument = 256.0 * prefactor_root * prefactor_root / delta;
  std::int64_t required = 2;
  if (delta < 1.0 && log_argument > 1.0) {
    const double raw =
        exponent_factor * (d + 2) / (epsilon * epsilon) * std::log(log_argument);
    if (raw > 9.0e15)
      throw std::invalid_argument("required_dimension: parameters demand an unrepresentable D");
    std::int64_t up = static_cast<std::int64_t>(std::ceil(raw));
    if (up % 2 != 0) ++up;
    required = std::max<std::int64_t>(2, up);
  }
  report.required_dim = required;
  return report;
}

BoundReport smooth_dimension_bound(int d, double epsilon, double R, double B, double delta) {
  if (R <= 0.0 || B <= 0.0)
    throw std::invalid_argument("smooth_dimension_bound: R and B must be positive");
  const double sigma_p = std::sqrt(static_cast<double>(d) * B);
  const double diam = 2.0 * R * std::sqrt(static_cast<double>(d));
  return required_dimension(d, epsilon, sigma_p, diam, delta);
}

double central_second_derivative(const std::function<double(const Eigen::VectorXd&)>& k,
                                 int axis, const Eigen::VectorXd& point, double h) {
  if (h <= 0.0) throw std::invalid_argument("central_second_derivative: h must be > 0");
  if (axis < 0 || axis >= point.size())
    throw std::invalid_argument("central_second_derivative: axis out of range");
  Eigen::VectorXd plus = point;
  Eigen::VectorXd minus = point;
  plus[axis] += h;
  minus[axis] -= h;
  return (k(plus) + k(minus) - 2.0 * k(point)) / (h * h);
}

int required_precision_bits(double fourth_derivative_bound, double epsilon) {
  if (fourth_derivative_bound <= 0.0 || epsilon <= 0.0)
    throw std::invalid_argument("required_precision_bits: arguments must be positive");
  const double ratio = fourth_derivative_bound / (12.0 * epsilon);
  if (ratio <= 1.0) return 0;
  // Tolerance absorbs representation error when the ratio is an exact power
  // of 4 (e.g. L=192, eps=1 must give exactly 2).
  const double bits = std::log(ratio) / std::log(4.0);
  return std::max(0, static_cast<int>(std::ceil(bits - 1e-12)));
}

double sup_error_estimate(const RffMap& map,
                          const std::function<double(const Eigen::VectorXd&)>& kernel,
                          const DomainBox& box, double grid_step) {
  if (grid_step <= 0.0) throw std::invalid_argument("sup_error_estimate: step must be > 0");
  if (box.dim() != map.input_dim())
    throw std::invalid_argument("sup_error_estimate: box dimension mismatch");

  const int d = box.dim();
  std::vector<std::int64_t> axis_counts(static_cast<std::size_t>(d));
  double log_total_points = 0.0;
  for (int a = 0; a < d; ++a) {
    const std::int64_t count = axis_point_count(box.upper[a] - box.lower[a], grid_step);
    if (count < 2)
      throw std::invalid_argument("sup_error_estimate: grid needs >= 2 points per axis");
    axis_counts[static_cast<std::size_t>(a)] = count;
    log_total_points += std::log(static_cast<double>(count));
  }
  // Slack keeps the boundary case (exactly 1e8 pairs) on the allowed side.
  if (2.0 * log_total_points > std::log(PAIR_COUNT_GUARD) + 1e-9)
    throw guard_error("sup_error_estimate: ordered pair count exceeds 1e8 guard");

  // Differences of two axis grids form the axis grid {-(m-1)s, ..., (m-1)s};
  // the estimate and the kernel both depend only on the difference, so the
  // sup over ordered pairs equals the sup over this grid.
  std::vector<std::int64_t> diff_counts(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a)
    diff_counts[static_cast<std::size_t>(a)] = 2 * axis_counts[static_cast<std::size_t>(a)] - 1;

  std::vector<std::int64_t> cursor(static_cast<std::size_t>(d), 0);
  Eigen::VectorXd delta(d);
  double worst = 0.0;
  for (;;) {
    for (int a = 0; a < d; ++a) {
      const std::int64_t offset =
          cursor[static_cast<std::size_t>(a)] - (axis_counts[static_cast<std::size_t>(a)] - 1);
      delta[a] = static_cast<double>(offset) * grid_step;
    }
    worst = std::max(worst, std::abs(rff_kernel_estimate_delta(map, delta) - kernel(delta)));

    int axis = 0;
    while (axis < d) {
      if (++cursor[static_cast<std::size_t>(axis)] <
          diff_counts[static_cast<std::size_t>(axis)])
        break;
      cursor[static_cast<std::size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == d) break;
  }
  return worst;
}

}  // namespace eqk
