#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "eqk/pauli_state.hpp"
#include "eqk/rff.hpp"

// Quantum random Fourier features: the RFF vector z(x) is rescaled to unit
// 1-norm, encoded as a Pauli mixture state on n = ceil(log4(D+1)) qubits,
// and the kernel estimate is read back as
//
//   g(x) g(x') (2^n Tr{rho(x) rho(x')} - 1),    g(x) = ||z(x)||_1.
//
// The exact-trace path reproduces the classical RFF estimate; the sampled
// path replaces the trace with SWAP-test statistics.

namespace eqk {

struct QrffModel {
  RffMap map;
  int qubits = 0;  // ceil(log4(D+1))
};

struct QrffEstimate {
  double value = 0.0;
  double g_left = 0.0;   // ||z(x)||_1; multiplies any trace-estimation error
  double g_right = 0.0;  // ||z(x')||_1
};

QrffModel build_qrff_model(const ShiftInvariantKernel& kernel, int feature_dim,
                           std::uint64_t seed);
QrffModel qrff_from_map(RffMap map);

// g(x) = sqrt(2/D) sum_i (|cos<w_i,x>| + |sin<w_i,x>|), in [1, sqrt(D)].
double g_factor(const QrffModel& model, const Eigen::VectorXd& x);

// C2QE applied to z(x)/||z(x)||_1.
PauliMixtureState qrff_encode(const QrffModel& model, const Eigen::VectorXd& x);

double qrff_kernel_estimate(const QrffModel& model, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& x_p);

QrffEstimate qrff_kernel_estimate_detail(const QrffModel& model, const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& x_p);

// Core shared with the preprocessing variant; avoids copying the map.
QrffEstimate qrff_estimate_from_map(const RffMap& map, const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& x_p);

// Shot-based variant: the Hilbert-Schmidt trace is estimated from `shots`
// simulated SWAP-test outcomes instead of evaluated exactly.
QrffEstimate qrff_kernel_estimate_sampled(const QrffModel& model, const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& x_p, std::int64_t shots,
                                          Rng& rng);

}  // namespace eqk
