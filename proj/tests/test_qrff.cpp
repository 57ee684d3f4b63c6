#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "eqk/qrff.hpp"
#include "eqk/rng.hpp"
#include "eqk/spectral.hpp"
#include "oracle_utils.hpp"

using namespace eqk;

namespace {

Eigen::VectorXd vec1(double v) {
  Eigen::VectorXd x(1);
  x[0] = v;
  return x;
}

Eigen::VectorXd random_point(int d, double radius, Rng& rng) {
  Eigen::VectorXd x(d);
  for (int a = 0; a < d; ++a) x[a] = radius * (2.0 * rng.uniform() - 1.0);
  return x;
}

}  // namespace

TEST_CASE("qrff models pair the map with ceil(log4(D+1)) qubits") {
  const auto kernel = ShiftInvariantKernel::gaussian(1.0, 2);
  CHECK(build_qrff_model(kernel, 2, 1).qubits == 1);
  CHECK(build_qrff_model(kernel, 14, 1).qubits == 2);
  CHECK(build_qrff_model(kernel, 62, 1).qubits == 3);
  CHECK(build_qrff_model(kernel, 254, 1).qubits == 4);

  const auto map = build_rff_map(kernel, 14, 9);
  const auto model = qrff_from_map(map);
  CHECK(model.qubits == 2);
  CHECK(model.map.seed() == 9);
}

TEST_CASE("g_factor closed forms at a single frequency") {
  const RffMap map(1, 2, 0, {vec1(1.0)});
  const auto model = qrff_from_map(map);
  // |cos 0| + |sin 0| = 1 under the sqrt(2/2) scale.
  CHECK(g_factor(model, vec1(0.0)) == doctest::Approx(1.0).epsilon(1e-14));
  // At pi/4 both legs contribute sqrt(2)/2, the per-pair maximum.
  CHECK(g_factor(model, vec1(std::numbers::pi / 4.0)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("g_factor equals the feature 1-norm and stays in [1, sqrt(D)]") {
  const auto kernel = ShiftInvariantKernel::gaussian(1.0, 3);
  const auto model = build_qrff_model(kernel, 100, 21);
  Rng rng(41);
  for (int rep = 0; rep < 50; ++rep) {
    const auto x = random_point(3, 2.0, rng);
    const double g = g_factor(model, x);
    const auto features = rff_features(model.map, x);
    double l1 = 0.0;
    for (double e : features.entries()) l1 += std::abs(e);
    CHECK(g == doctest::Approx(l1).epsilon(1e-12));
    CHECK(g >= 1.0 - 1e-12);
    CHECK(g <= 10.0 + 1e-12);
  }
  CHECK_THROWS_AS(g_factor(model, vec1(0.0)), std::invalid_argument);
}

TEST_CASE("qrff_encode produces valid density matrices") {
  const auto kernel = ShiftInvariantKernel::gaussian(1.0, 2);
  const auto model = build_qrff_model(kernel, 62, 5);
  Rng rng(42);
  for (int rep = 0; rep < 10; ++rep) {
    const auto rho = qrff_encode(model, random_point(2, 1.5, rng));
    CHECK(rho.qubits() == 3);
    const auto dense = mixture_to_dense(rho);
    CHECK(dense.hermiticity_error() < 1e-12);
    CHECK(dense.trace_error() < 1e-12);
    CHECK(dense.min_eigenvalue() >= -1e-10);
  }
}

TEST_CASE("qrff estimate is 1 on the diagonal") {
  const auto kernel = ShiftInvariantKernel::gaussian(1.0, 2);
  const auto model = build_qrff_model(kernel, 14, 3);
  Rng rng(43);
  for (int rep = 0; rep < 10; ++rep) {
    const auto x = random_point(2, 2.0, rng);
    CHECK(qrff_kernel_estimate(model, x, x) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("qrff reproduces the classical rff estimate") {
  const auto kernel = ShiftInvariantKernel::gaussian(1.0, 2);
  Rng rng(44);
  for (int feature_dim : {2, 14, 62, 254}) {
    const auto model = build_qrff_model(kernel, feature_dim, 7);
    double worst = 0.0;
    for (int rep = 0; rep < 250; ++rep) {
      const auto x = random_point(2, 1.0, rng);
      const auto y = random_point(2, 1.0, rng);
      const double quantum = qrff_kernel_estimate(model, x, y);
      const double classical = rff_kernel_estimate(model.map, x, y);
      worst = std::max(worst, std::abs(quantum - classical));
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("estimate detail reports the amplification factors") {
  const auto kernel = ShiftInvariantKernel::gaussian(1.0, 2);
  const auto model = build_qrff_model(kernel, 14, 11);
  Rng rng(45);
  const auto x = random_point(2, 1.0, rng);
  const auto y = random_point(2, 1.0, rng);
  const auto detail = qrff_kernel_estimate_detail(model, x, y);
  CHECK(detail.value == qrff_kernel_estimate(model, x, y));
  CHECK(detail.g_left == doctest::Approx(g_factor(model, x)).epsilon(1e-14));
  CHECK(detail.g_right == doctest::Approx(g_factor(model, y)).epsilon(1e-14));
  CHECK(qrff_estimate_from_map(model.map, x, y).value == detail.value);
}

TEST_CASE("sampled estimate coverage matches the binomial propagation oracle") {
  const auto kernel = ShiftInvariantKernel::gaussian(1.0, 2);
  const auto model = build_qrff_model(kernel, 14, 13);
  Rng rng(46);
  const std::int64_t shots = 1000000;
  const int trials = 40;
  const double pow2n = std::ldexp(1.0, model.qubits);
  int inside = 0;
  int moved = 0;
  double expected_inside = 0.0;
  double inside_variance = 0.0;
  double max_sigma = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto x = random_point(2, 1.0, rng);
    const auto y = random_point(2, 1.0, rng);
    const auto exact = qrff_kernel_estimate_detail(model, x, y);
    const auto sampled = qrff_kernel_estimate_sampled(model, x, y, shots, rng);
    const double scale = exact.g_left * exact.g_right * pow2n;
    const double budget = 3.0 * scale / std::sqrt(4.0 * static_cast<double>(shots));
    const double deviation = std::abs(sampled.value - exact.value);
    if (deviation <= budget) ++inside;
    if (sampled.value != exact.value) ++moved;

    // The sampled value is scale * (2 B/shots - 1) with B binomial at
    // p = (1 + trace)/2, so the budget sits at z = 1.5 / (2 sqrt(p(1-p)))
    // standard errors and captures the estimate with probability
    // 2 Phi(z) - 1. Accumulate that prediction per trial.
    const double trace = (exact.value / (exact.g_left * exact.g_right) + 1.0) / pow2n;
    const double p = 0.5 * (1.0 + trace);
    const double se = scale * 2.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
    const double z = 1.5 / (2.0 * std::sqrt(p * (1.0 - p)));
    const double coverage = std::erf(z / std::sqrt(2.0));
    expected_inside += coverage;
    inside_variance += coverage * (1.0 - coverage);
    max_sigma = std::max(max_sigma, deviation / se);
  }
  // Shot noise must actually perturb the estimate, land within the budget
  // in the typical case, hit the predicted coverage within 4 sigma of the
  // trial count, and never stray past 5 true standard errors.
  CHECK(moved >= 1);
  CHECK(inside >= trials / 2);
  CHECK(static_cast<double>(inside) >= expected_inside - 4.0 * std::sqrt(inside_variance));
  CHECK(max_sigma <= 5.0);
}

TEST_CASE("qrff rejects mismatched input dimensions") {
  const auto kernel = ShiftInvariantKernel::gaussian(1.0, 2);
  const auto model = build_qrff_model(kernel, 14, 2);
  Eigen::VectorXd good(2), bad(3);
  good << 0.1, 0.2;
  bad << 0.1, 0.2, 0.3;
  CHECK_THROWS_AS(qrff_kernel_estimate(model, good, bad), std::invalid_argument);
  CHECK_THROWS_AS(qrff_encode(model, bad), std::invalid_argument);
}
