#include "eqk/composition.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

#include "eqk/errors.hpp"

namespace eqk {

namespace {

constexpr int STATEVECTOR_QUBIT_CAP = 10;
constexpr double PREPROCESSOR_BOX_TOL = 1e-9;
constexpr double RDM_VALIDITY_TOL = 1e-10;

using Cx = std::complex<double>;

void apply_rotation(Eigen::VectorXcd& state, int qubits, const RotationGate& gate,
                    double angle) {
  // 2x2 block action on the target qubit amplitudes.
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  Cx m00, m01, m10, m11;
  switch (gate.axis) {
    case 'x':
      m00 = Cx(c, 0.0); m01 = Cx(0.0, -s);
      m10 = Cx(0.0, -s); m11 = Cx(c, 0.0);
      break;
    case 'y':
      m00 = Cx(c, 0.0); m01 = Cx(-s, 0.0);
      m10 = Cx(s, 0.0); m11 = Cx(c, 0.0);
      break;
    case 'z':
      m00 = Cx(c, -s); m01 = Cx(0.0, 0.0);
      m10 = Cx(0.0, 0.0); m11 = Cx(c, s);
      break;
    default:
      throw std::invalid_argument("statevector_encode: unknown rotation axis");
  }
  const std::int64_t mask = std::int64_t{1} << gate.qubit;
  const std::int64_t dim = std::int64_t{1} << qubits;
  for (std::int64_t i = 0; i < dim; ++i) {
    if (i & mask) continue;
    const Cx a0 = state[i];
    const Cx a1 = state[i | mask];
    state[i] = m00 * a0 + m01 * a1;
    state[i | mask] = m10 * a0 + m11 * a1;
  }
}

void apply_entangler(Eigen::VectorXcd& state, int qubits, const EntanglerGate& gate) {
  const std::int64_t cmask = std::int64_t{1} << gate.control;
  const std::int64_t tmask = std::int64_t{1} << gate.target;
  const std::int64_t dim = std::int64_t{1} << qubits;
  for (std::int64_t i = 0; i < dim; ++i) {
    if (!(i & cmask)) continue;
    if (gate.is_cz) {
      if (i & tmask) state[i] = -state[i];
    } else if (!(i & tmask)) {
      std::swap(state[i], state[i | tmask]);
    }
  }
}

}  // namespace

EmbeddingCircuit::EmbeddingCircuit(int qubits, std::vector<CircuitGate> gates)
    : qubits_(qubits), gates_(std::move(gates)) {
  if (qubits_ < 1) throw std::invalid_argument("EmbeddingCircuit: need at least one qubit");
  if (qubits_ > STATEVECTOR_QUBIT_CAP)
    throw guard_error("EmbeddingCircuit: statevector backend capped at N = 10");
  for (const auto& gate : gates_) {
    if (const auto* rot = std::get_if<RotationGate>(&gate)) {
      if (rot->axis != 'x' && rot->axis != 'y' && rot->axis != 'z')
        throw std::invalid_argument("EmbeddingCircuit: rotation axis must be x, y, or z");
      if (rot->qubit < 0 || rot->qubit >= qubits_)
        throw std::invalid_argument("EmbeddingCircuit: rotation qubit out of range");
      if (rot->data_index < 0)
        throw std::invalid_argument("EmbeddingCircuit: negative data index");
      min_input_dim_ = std::max(min_input_dim_, rot->data_index + 1);
    } else {
      const auto& ent = std::get<EntanglerGate>(gate);
      if (ent.control < 0 || ent.control >= qubits_ || ent.target < 0 ||
          ent.target >= qubits_ || ent.control == ent.target)
        throw std::invalid_argument("EmbeddingCircuit: bad entangler qubit indices");
    }
  }
}

Eigen::VectorXcd statevector_encode(const EmbeddingCircuit& circuit, const Eigen::VectorXd& x) {
  if (x.size() < circuit.min_input_dim())
    throw std::invalid_argument("statevector_encode: input misses referenced data coordinates");
  const std::int64_t dim = std::int64_t{1} << circuit.qubits();
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(dim);
  state[0] = Cx(1.0, 0.0);
  for (const auto& gate : circuit.gates()) {
    if (const auto* rot = std::get_if<RotationGate>(&gate)) {
      apply_rotation(state, circuit.qubits(), *rot, rot->scale * x[rot->data_index]);
    } else {
      apply_entangler(state, circuit.qubits(), std::get<EntanglerGate>(gate));
    }
  }
  return state;
}

ReducedStateVector reduced_density_matrices(const Eigen::VectorXcd& state, int qubits) {
  const std::int64_t dim = std::int64_t{1} << qubits;
  if (state.size() != dim)
    throw std::invalid_argument("reduced_density_matrices: state dimension mismatch");
  ReducedStateVector rs;
  rs.rdms.reserve(static_cast<std::size_t>(qubits));
  for (int q = 0; q < qubits; ++q) {
    const std::int64_t mask = std::int64_t{1} << q;
    Cx r00(0.0, 0.0), r01(0.0, 0.0), r11(0.0, 0.0);
    for (std::int64_t i = 0; i < dim; ++i) {
      if (i & mask) continue;
      const Cx a0 = state[i];
      const Cx a1 = state[i | mask];
      r00 += a0 * std::conj(a0);
      r01 += a0 * std::conj(a1);
      r11 += a1 * std::conj(a1);
    }
    Eigen::Matrix2cd rdm;
    rdm << r00, r01, std::conj(r01), r11;
    if (std::abs(rdm.trace() - Cx(1.0, 0.0)) > RDM_VALIDITY_TOL)
      throw std::invalid_argument("reduced_density_matrices: state is not normalized");
    rs.rdms.push_back(rdm);
  }
  return rs;
}

Eigen::VectorXd rdm_feature_vector(const ReducedStateVector& rs) {
  const int n = static_cast<int>(rs.rdms.size());
  Eigen::VectorXd features(4 * n);
  const double root2 = std::sqrt(2.0);
  for (int q = 0; q < n; ++q) {
    const Eigen::Matrix2cd& rdm = rs.rdms[static_cast<std::size_t>(q)];
    features[4 * q + 0] = rdm(0, 0).real();
    features[4 * q + 1] = rdm(1, 1).real();
    features[4 * q + 2] = root2 * rdm(0, 1).real();
    features[4 * q + 3] = root2 * rdm(0, 1).imag();
  }
  return features;
}

Preprocessor::Preprocessor(int input_dim, int output_dim, double bound, Fn fn)
    : input_dim_(input_dim), output_dim_(output_dim), bound_(bound), fn_(std::move(fn)) {
  if (input_dim_ < 1 || output_dim_ < 1)
    throw std::invalid_argument("Preprocessor: dimensions must be >= 1");
  if (bound_ <= 0.0) throw std::invalid_argument("Preprocessor: bound must be > 0");
  if (!fn_) throw std::invalid_argument("Preprocessor: evaluator required");
}

Preprocessor Preprocessor::identity(int dim, double bound) {
  return Preprocessor(dim, dim, bound, [](const Eigen::VectorXd& x) { return x; });
}

Preprocessor Preprocessor::from_circuit(EmbeddingCircuit circuit, int input_dim) {
  const int qubits = circuit.qubits();
  if (input_dim < 0) input_dim = std::max(1, circuit.min_input_dim());
  if (input_dim < circuit.min_input_dim())
    throw std::invalid_argument("Preprocessor::from_circuit: input_dim below circuit needs");
  auto fn = [circuit = std::move(circuit)](const Eigen::VectorXd& x) {
    return rdm_feature_vector(
        reduced_density_matrices(statevector_encode(circuit, x), circuit.qubits()));
  };
  return Preprocessor(input_dim, 4 * qubits, 1.0, std::move(fn));
}

Eigen::VectorXd Preprocessor::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != input_dim_)
    throw std::invalid_argument("Preprocessor: input dimension mismatch");
  Eigen::VectorXd out = fn_(x);
  if (out.size() != output_dim_)
    throw std::runtime_error("Preprocessor: evaluator returned wrong dimension");
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (!(std::abs(out[i]) <= bound_ + PREPROCESSOR_BOX_TOL))
      throw std::runtime_error("Preprocessor: output escapes the declared [-B, B] box");
  }
  return out;
}

CompositionKernel::CompositionKernel(Preprocessor f, double sigma)
    : f_(std::move(f)), sigma_(sigma) {
  if (sigma_ <= 0.0) throw std::invalid_argument("CompositionKernel: sigma must be > 0");
}

double composition_kernel_eval(const CompositionKernel& k, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& x_p) {
  const Eigen::VectorXd diff = k.preprocessor()(x) - k.preprocessor()(x_p);
  return std::exp(-diff.squaredNorm() / (2.0 * k.sigma() * k.sigma()));
}

RffPpModel rff_pp_build(const CompositionKernel& k, int feature_dim, std::uint64_t seed) {
  const auto gaussian =
      ShiftInvariantKernel::gaussian(k.sigma(), k.preprocessor().output_dim());
  RffMap map = build_rff_map(gaussian, feature_dim, seed);
  const int qubits = qubit_count_for(feature_dim);
  return RffPpModel{std::move(map), k.preprocessor(), qubits};
}

L2UnitVector rff_pp_features(const RffPpModel& model, const Eigen::VectorXd& x) {
  return rff_features(model.map, model.f(x));
}

double rff_pp_estimate(const RffPpModel& model, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& x_p) {
  return rff_kernel_estimate(model.map, model.f(x), model.f(x_p));
}

double qrff_pp_estimate(const RffPpModel& model, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& x_p) {
  return qrff_estimate_from_map(model.map, model.f(x), model.f(x_p)).value;
}

double projected_kernel_eval(const EmbeddingCircuit& circuit, double gamma,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& x_p) {
  if (gamma <= 0.0) throw std::invalid_argument("projected_kernel_eval: gamma must be > 0");
  const ReducedStateVector left =
      reduced_density_matrices(statevector_encode(circuit, x), circuit.qubits());
  const ReducedStateVector right =
      reduced_density_matrices(statevector_encode(circuit, x_p), circuit.qubits());
  double distance_sq = 0.0;
  for (std::size_t q = 0; q < left.rdms.size(); ++q)
    distance_sq += (left.rdms[q] - right.rdms[q]).squaredNorm();
  return std::exp(-gamma * distance_sq);
}

BoundReport projected_kernel_bound(int d, double epsilon, double B, int g1, double sigma,
                                   double delta) {
  if (d < 1 || g1 < 1 || B <= 0.0 || sigma <= 0.0)
    throw std::invalid_argument("projected_kernel_bound: bad arguments");
  const double sigma_p = std::sqrt(static_cast<double>(g1)) / sigma;
  const double diam = 2.0 * B * std::sqrt(static_cast<double>(g1));
  return required_dimension(g1, epsilon, sigma_p, diam, delta);
}

}  // namespace eqk
