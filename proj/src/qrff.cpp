#include "eqk/qrff.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace eqk {

namespace {

double l1_of_features(const L2UnitVector& z) {
  double total = 0.0;
  for (double v : z.entries()) total += std::abs(v);
  return total;
}

PauliMixtureState encode_l1_rescaled(const L2UnitVector& z, double g) {
  std::vector<double> scaled = z.entries();
  for (double& v : scaled) v /= g;
  return c2qe_encode(L1UnitVector(std::move(scaled)));
}

}  // namespace

QrffModel build_qrff_model(const ShiftInvariantKernel& kernel, int feature_dim,
                           std::uint64_t seed) {
  return qrff_from_map(build_rff_map(kernel, feature_dim, seed));
}

QrffModel qrff_from_map(RffMap map) {
  const int n = qubit_count_for(map.feature_dim());
  return QrffModel{std::move(map), n};
}

double g_factor(const QrffModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.map.input_dim())
    throw std::invalid_argument("g_factor: input dimension mismatch");
  const double scale = std::sqrt(2.0 / static_cast<double>(model.map.feature_dim()));
  double total = 0.0;
  for (const auto& w : model.map.frequencies()) {
    const double phase = w.dot(x);
    total += std::abs(std::cos(phase)) + std::abs(std::sin(phase));
  }
  return scale * total;
}

PauliMixtureState qrff_encode(const QrffModel& model, const Eigen::VectorXd& x) {
  const L2UnitVector z = rff_features(model.map, x);
  return encode_l1_rescaled(z, l1_of_features(z));
}

QrffEstimate qrff_estimate_from_map(const RffMap& map, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& x_p) {
  const L2UnitVector z_left = rff_features(map, x);
  const L2UnitVector z_right = rff_features(map, x_p);
  const double g_left = l1_of_features(z_left);
  const double g_right = l1_of_features(z_right);
  const PauliMixtureState rho = encode_l1_rescaled(z_left, g_left);
  const PauliMixtureState rho_p = encode_l1_rescaled(z_right, g_right);
  return {g_left * g_right * euclid_from_states(rho, rho_p), g_left, g_right};
}

QrffEstimate qrff_kernel_estimate_detail(const QrffModel& model, const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& x_p) {
  return qrff_estimate_from_map(model.map, x, x_p);
}

double qrff_kernel_estimate(const QrffModel& model, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& x_p) {
  return qrff_kernel_estimate_detail(model, x, x_p).value;
}

QrffEstimate qrff_kernel_estimate_sampled(const QrffModel& model, const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& x_p, std::int64_t shots,
                                          Rng& rng) {
  const L2UnitVector z_left = rff_features(model.map, x);
  const L2UnitVector z_right = rff_features(model.map, x_p);
  const double g_left = l1_of_features(z_left);
  const double g_right = l1_of_features(z_right);
  const PauliMixtureState rho = encode_l1_rescaled(z_left, g_left);
  const PauliMixtureState rho_p = encode_l1_rescaled(z_right, g_right);
  const double trace = hs_inner_sampled(rho, rho_p, shots, rng);
  const double scale = std::ldexp(1.0, model.qubits);
  return {g_left * g_right * (scale * trace - 1.0), g_left, g_right};
}

}  // namespace eqk
