#include "eqk/mercer.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "eqk/spectral.hpp"

namespace eqk {

namespace {

constexpr double GRAM_SYMMETRY_TOL = 1e-10;
// Separates eigensolver noise from genuine PSD violations.
constexpr double EIGEN_CLIP_TOL = 1e-8;

}  // namespace

GramEigen gram_eigendecompose(const Eigen::MatrixXd& gram) {
  if (gram.rows() != gram.cols() || gram.rows() < 1)
    throw std::invalid_argument("gram_eigendecompose: matrix must be square and non-empty");
  const double asym = (gram - gram.transpose()).cwiseAbs().maxCoeff();
  if (asym > GRAM_SYMMETRY_TOL)
    throw std::invalid_argument("gram_eigendecompose: matrix asymmetric beyond 1e-10");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("gram_eigendecompose: eigensolver failed to converge");

  // The solver returns eigenvalues ascending; flip to non-increasing.
  const Eigen::Index m = gram.rows();
  GramEigen out;
  out.eigenvalues.resize(m);
  out.eigenvectors.resize(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    out.eigenvalues[j] = solver.eigenvalues()[m - 1 - j];
    out.eigenvectors.col(j) = solver.eigenvectors().col(m - 1 - j);
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    const double raw = out.eigenvalues[j];
    if (raw >= 0.0) continue;
    if (raw < -EIGEN_CLIP_TOL)
      out.psd_violations.push_back(raw);
    else
      out.clipped.push_back(raw);
    out.eigenvalues[j] = 0.0;
  }
  return out;
}

MercerTruncation mercer_truncate(const PairKernel& k, std::vector<Eigen::VectorXd> landmarks,
                                 int rank) {
  if (landmarks.empty()) throw std::invalid_argument("mercer_truncate: no landmarks");
  const int m = static_cast<int>(landmarks.size());
  if (rank < 1 || rank > m)
    throw std::invalid_argument("mercer_truncate: rank must be in [1, landmark count]");
  GramEigen eigen = gram_eigendecompose(gram_matrix(k, landmarks));
  return MercerTruncation{std::move(landmarks), std::move(eigen), rank};
}

int rank_for_tail_mass(const GramEigen& eigen, double tail_mass) {
  if (tail_mass < 0.0) throw std::invalid_argument("rank_for_tail_mass: tail mass must be >= 0");
  const Eigen::Index m = eigen.eigenvalues.size();
  double tail = 0.0;
  // Grow the discarded tail from the smallest eigenvalue upward; stop just
  // before it would exceed the budget.
  for (Eigen::Index rank = m; rank > 1; --rank) {
    if (tail + eigen.eigenvalues[rank - 1] > tail_mass) return static_cast<int>(rank);
    tail += eigen.eigenvalues[rank - 1];
  }
  return 1;
}

Eigen::VectorXd nystrom_features(const MercerTruncation& t, const PairKernel& k,
                                 const Eigen::VectorXd& x) {
  const int m = static_cast<int>(t.landmarks.size());
  if (t.rank < 1 || t.rank > m)
    throw std::invalid_argument("nystrom_features: truncation rank out of range");
  for (int j = 0; j < t.rank; ++j)
    if (t.eigen.eigenvalues[j] <= 0.0)
      throw std::invalid_argument("nystrom_features: retained eigenvalue is not positive");

  Eigen::VectorXd k_vec(m);
  for (int i = 0; i < m; ++i) k_vec[i] = k(x, t.landmarks[i]);

  Eigen::VectorXd features = t.eigen.eigenvectors.leftCols(t.rank).transpose() * k_vec;
  for (int j = 0; j < t.rank; ++j) features[j] /= std::sqrt(t.eigen.eigenvalues[j]);
  return features;
}

double truncation_error_bound(const MercerTruncation& t, int rank) {
  const int m = static_cast<int>(t.landmarks.size());
  if (rank < 0 || rank > m)
    throw std::invalid_argument("truncation_error_bound: rank must be in [0, landmark count]");
  double tail = 0.0;
  for (int j = rank; j < m; ++j) tail += t.eigen.eigenvalues[j];
  return tail;
}

double mercer_to_eqk(const FiniteFeatureMap& fm, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& x_p) {
  const Eigen::VectorXd phi = nystrom_features(fm.truncation, fm.kernel, x);
  const Eigen::VectorXd phi_p = nystrom_features(fm.truncation, fm.kernel, x_p);
  const double norm_left = phi.lpNorm<1>();
  const double norm_right = phi_p.lpNorm<1>();
  if (norm_left == 0.0 || norm_right == 0.0)
    throw std::invalid_argument("mercer_to_eqk: zero feature vector cannot be encoded");

  auto encode = [](const Eigen::VectorXd& v, double norm) {
    std::vector<double> entries(v.data(), v.data() + v.size());
    for (double& e : entries) e /= norm;
    return c2qe_encode(L1UnitVector(std::move(entries)));
  };
  const PauliMixtureState rho = encode(phi, norm_left);
  const PauliMixtureState rho_p = encode(phi_p, norm_right);
  return norm_left * norm_right * euclid_from_states(rho, rho_p);
}

}  // namespace eqk
