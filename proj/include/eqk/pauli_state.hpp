#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "eqk/rng.hpp"

// Pauli-mixture encoding of classical vectors.
//
// A 1-norm unit vector r of length d is carried by the n-qubit state
//
//     rho_r = (I + sum_i r_i P_i) / 2^n,    n = ceil(log4(d+1)),
//
// where P_i runs over the non-identity Pauli words. Two such states expose
// the Euclidean inner product through
//
//     <r, r'> = 2^n Tr{rho_r rho_r'} - 1,
//
// and 2-norm unit vectors are handled by renormalizing to unit 1-norm and
// carrying the two ||.||_1 factors through. This header also provides the
// dense-matrix backend used to cross-check the coefficient-basis arithmetic
// and a simulated SWAP-test (shot-based) trace estimator.

namespace eqk {

// Input vectors may miss exact normalization by this much and are then
// rescaled; stored entries satisfy the tight invariant below.
inline constexpr double UNIT_NORM_INPUT_TOL = 1e-9;
inline constexpr double UNIT_NORM_INVARIANT_TOL = 1e-12;

// Smallest n with 4^n - 1 >= d, i.e. ceil(log4(d+1)).
int qubit_count_for(std::int64_t d);

// Real vector with unit 1-norm. Entries are rescaled by the exact input
// norm on construction, so the stored 1-norm is 1 to machine precision.
class L1UnitVector {
 public:
  explicit L1UnitVector(std::vector<double> entries);
  const std::vector<double>& entries() const { return entries_; }
  int dim() const { return static_cast<int>(entries_.size()); }

 private:
  std::vector<double> entries_;
};

// Real vector with unit Euclidean norm, same rescaling policy.
class L2UnitVector {
 public:
  explicit L2UnitVector(std::vector<double> entries);
  const std::vector<double>& entries() const { return entries_; }
  int dim() const { return static_cast<int>(entries_.size()); }

 private:
  std::vector<double> entries_;
};

// One non-identity Pauli word on `qubits` qubits. The base-4 digits of
// `value`, little-endian over qubits, select the factor on each qubit:
// 0 -> I, 1 -> X, 2 -> Y, 3 -> Z. Value 0 (all identities) is excluded.
struct PauliWordIndex {
  std::uint64_t value = 0;
  int qubits = 0;
};

// Pauli factor of word `w` acting on qubit `qubit`, as a digit in 0..3.
int pauli_digit(const PauliWordIndex& w, int qubit);

// Sparse coefficient representation of rho_r. Coefficients are keyed by
// word index, sorted, nonzero, and sum to 1 in absolute value.
class PauliMixtureState {
 public:
  using Coefficients = std::vector<std::pair<std::uint64_t, double>>;

  // Validates index range, strict ordering, and the unit 1-norm invariant.
  static PauliMixtureState from_parts(int qubits, Coefficients coeffs);

  int qubits() const { return qubits_; }
  const Coefficients& coefficients() const { return coeffs_; }

 private:
  PauliMixtureState(int qubits, Coefficients coeffs)
      : qubits_(qubits), coeffs_(std::move(coeffs)) {}
  int qubits_ = 0;
  Coefficients coeffs_;
};

// Dense backend for validation. Hermiticity and trace are verified on
// construction; the PSD check is an explicit (and cubic-cost) method.
struct DenseDensityMatrix {
  Eigen::MatrixXcd mat;

  static DenseDensityMatrix checked(Eigen::MatrixXcd m);

  double hermiticity_error() const;             // max entrywise |m - m^dagger|
  double trace_error() const;                   // |tr(m) - 1|
  double min_eigenvalue() const;                // smallest eigenvalue
};

// Algorithm: encode r into rho_r. Zero entries are not stored.
PauliMixtureState c2qe_encode(const L1UnitVector& r);

// Draws word index i with probability |r_i| and reports sign(r_i).
std::pair<PauliWordIndex, int> sample_pure_component(const L1UnitVector& r, Rng& rng);

// Expands rho_r as an explicit 2^n x 2^n matrix. Guarded at n <= 12.
DenseDensityMatrix mixture_to_dense(const PauliMixtureState& rho);

// Tr{rho rho'} = (1 + sum_i r_i r'_i) / 2^n, computed in coefficient basis.
double hs_inner(const PauliMixtureState& rho, const PauliMixtureState& rho_p);

// SWAP-test simulation: `shots` Bernoulli draws at success probability
// p = (1 + Tr{rho rho'}) / 2, mapped back through 2*(success fraction) - 1.
double hs_inner_sampled(const PauliMixtureState& rho, const PauliMixtureState& rho_p,
                        std::int64_t shots, Rng& rng);

// <r, r'> recovered from the states alone: 2^n * hs_inner - 1.
double euclid_from_states(const PauliMixtureState& rho, const PauliMixtureState& rho_p);

struct RenormalizedInner {
  double value = 0.0;        // <r, r'> reconstructed through the states
  double factor_left = 0.0;  // ||r||_1, in [1, sqrt(d)]
  double factor_right = 0.0; // ||r'||_1, in [1, sqrt(d)]
};

// 2-norm unit vectors: encode r/||r||_1 and r'/||r'||_1, then undo the
// rescaling, returning the two 1-norm factors alongside the value.
RenormalizedInner renormalized_inner(const L2UnitVector& r, const L2UnitVector& r_p);

}  // namespace eqk
