#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "eqk/qrff.hpp"
#include "eqk/rff.hpp"

// Composition kernels k_f(x, x') = exp(-||f(x) - f(x')||^2 / (2 sigma^2))
// for a bounded preprocessor f, their randomized feature approximations
// (RFF_pp and QRFF_pp operate in the preprocessed domain), and the projected
// quantum kernel whose preprocessor is the list of single-qubit reduced
// density matrices of a small embedded statevector.

namespace eqk {

// Rotation angle is scale * x[data_index]; axis is one of 'x', 'y', 'z'.
struct RotationGate {
  char axis = 'y';
  int qubit = 0;
  int data_index = 0;
  double scale = 1.0;
};

// Fixed two-qubit entangler, controlled-X or controlled-Z.
struct EntanglerGate {
  bool is_cz = false;
  int control = 0;
  int target = 1;
};

using CircuitGate = std::variant<RotationGate, EntanglerGate>;

// Data-embedding circuit U(x) on N <= 10 qubits.
class EmbeddingCircuit {
 public:
  EmbeddingCircuit(int qubits, std::vector<CircuitGate> gates);
  int qubits() const { return qubits_; }
  // 1 + largest referenced data index; inputs must be at least this long.
  int min_input_dim() const { return min_input_dim_; }
  const std::vector<CircuitGate>& gates() const { return gates_; }

 private:
  int qubits_ = 0;
  int min_input_dim_ = 0;
  std::vector<CircuitGate> gates_;
};

// U(x)|0...0>; unit norm to 1e-12.
Eigen::VectorXcd statevector_encode(const EmbeddingCircuit& circuit, const Eigen::VectorXd& x);

// Per-qubit reduced density matrices; each Hermitian, unit trace, PSD.
struct ReducedStateVector {
  std::vector<Eigen::Matrix2cd> rdms;
};

ReducedStateVector reduced_density_matrices(const Eigen::VectorXcd& state, int qubits);

// Flattens each RDM to (rho00, rho11, sqrt(2) Re rho01, sqrt(2) Im rho01), so
// Euclidean distances between flattened vectors equal Frobenius distances
// between the RDM lists. Dimension 4N.
Eigen::VectorXd rdm_feature_vector(const ReducedStateVector& rs);

// Bounded preprocessor f: R^d -> [-B, B]^{g1}; outputs are checked against
// the declared box on every call.
class Preprocessor {
 public:
  using Fn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  Preprocessor(int input_dim, int output_dim, double bound, Fn fn);

  static Preprocessor identity(int dim, double bound);
  // RDM features of the embedded state; output_dim 4N, bound 1. input_dim
  // defaults to the smallest dimension the circuit can consume; pass a wider
  // one when the data domain has unused trailing coordinates.
  static Preprocessor from_circuit(EmbeddingCircuit circuit, int input_dim = -1);

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }
  double bound() const { return bound_; }

 private:
  int input_dim_ = 0;
  int output_dim_ = 0;
  double bound_ = 0.0;
  Fn fn_;
};

class CompositionKernel {
 public:
  CompositionKernel(Preprocessor f, double sigma);
  const Preprocessor& preprocessor() const { return f_; }
  double sigma() const { return sigma_; }

 private:
  Preprocessor f_;
  double sigma_ = 0.0;
};

double composition_kernel_eval(const CompositionKernel& k, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& x_p);

// RFF model over the preprocessed domain: frequencies live in dimension
// g1(d) and are drawn from the Gaussian spectral density with parameter
// sigma; the feature map is z_f(x) = z(f(x)).
struct RffPpModel {
  RffMap map;  // input dimension g1(d)
  Preprocessor f;
  int qubits = 0;  // for the QRFF_pp path
};

RffPpModel rff_pp_build(const CompositionKernel& k, int feature_dim, std::uint64_t seed);

L2UnitVector rff_pp_features(const RffPpModel& model, const Eigen::VectorXd& x);

// Classical path: <z_f(x), z_f(x')>.
double rff_pp_estimate(const RffPpModel& model, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& x_p);

// Quantum path: g(f(x)) g(f(x')) (2^n Tr{rho_f(x) rho_f(x')} - 1).
double qrff_pp_estimate(const RffPpModel& model, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& x_p);

// k^PQ(x,x') = exp(-gamma sum_k ||rho_k(x) - rho_k(x')||_F^2), evaluated by
// statevector simulation and partial traces. Identical to the composition
// kernel with the RDM preprocessor and sigma^2 = 1/(2 gamma).
double projected_kernel_eval(const EmbeddingCircuit& circuit, double gamma,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& x_p);

// Dimension bound for the projected/composition kernel: the shift-invariant
// required_dimension inversion applied in the preprocessed domain, with
// diam <= 2 B sqrt(g1) and Gaussian spectral variance g1 / sigma^2.
BoundReport projected_kernel_bound(int d, double epsilon, double B, int g1, double sigma,
                                   double delta);

}  // namespace eqk
