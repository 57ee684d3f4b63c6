#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "eqk/pauli_state.hpp"

// Empirical Mercer truncation over a finite landmark set. A kernel Gram
// matrix G[i][j] = k(x_i, x_j) is eigendecomposed, the top m' eigenpairs are
// retained, and Nystrom extension turns them into an explicit feature map
//   phi_j(x) = (1 / sqrt(lambda_j)) sum_i v_j[i] k(x, landmark_i),
// so that <phi(x), phi(x')> approximates k(x, x'). The feature vector can
// then be renormalized to unit 1-norm and encoded as a Pauli mixture state,
// which realizes the kernel as a state inner product.

namespace eqk {

using PairKernel = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

// Eigendecomposition of a symmetric Gram matrix with PSD bookkeeping.
// Eigenvalues are sorted non-increasing and negatives are snapped to zero in
// `eigenvalues`; the raw negative values are kept on the side so callers can
// distinguish solver noise (within -1e-8) from genuine PSD violations.
struct GramEigen {
  Eigen::VectorXd eigenvalues;         // non-increasing, all >= 0
  Eigen::MatrixXd eigenvectors;        // orthonormal columns, same order
  std::vector<double> psd_violations;  // raw eigenvalues below -1e-8
  std::vector<double> clipped;         // raw eigenvalues in [-1e-8, 0)
};

// Rejects matrices that are asymmetric beyond 1e-10.
GramEigen gram_eigendecompose(const Eigen::MatrixXd& gram);

// Landmark set plus Gram eigendecomposition, truncated to the leading
// `rank` eigenpairs.
struct MercerTruncation {
  std::vector<Eigen::VectorXd> landmarks;
  GramEigen eigen;
  int rank = 0;  // retained dimension m', 1 <= m' <= landmarks.size()
};

MercerTruncation mercer_truncate(const PairKernel& k, std::vector<Eigen::VectorXd> landmarks,
                                 int rank);

// Smallest m' whose discarded tail sum_{j > m'} lambda_j is at most
// tail_mass; never smaller than 1.
int rank_for_tail_mass(const GramEigen& eigen, double tail_mass);

// Nystrom extension of the retained eigenvectors; dimension t.rank.
// Every retained eigenvalue must be strictly positive.
Eigen::VectorXd nystrom_features(const MercerTruncation& t, const PairKernel& k,
                                 const Eigen::VectorXd& x);

// Discarded eigenvalue mass sum_{j > rank} lambda_j. The Frobenius error of
// the rank-truncated Gram is sqrt(sum of squared discarded values), which
// this dominates.
double truncation_error_bound(const MercerTruncation& t, int rank);

// Truncation plus the kernel evaluator needed to extend features off the
// landmark set.
struct FiniteFeatureMap {
  MercerTruncation truncation;
  PairKernel kernel;

  int dimension() const { return truncation.rank; }
};

// Renormalizes phi(x) and phi(x') to unit 1-norm, encodes both as Pauli
// mixture states, and recovers <phi(x), phi(x')> as
// ||phi(x)||_1 ||phi(x')||_1 (2^n Tr{rho rho'} - 1).
// Throws if either feature vector is exactly zero.
double mercer_to_eqk(const FiniteFeatureMap& fm, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& x_p);

}  // namespace eqk
