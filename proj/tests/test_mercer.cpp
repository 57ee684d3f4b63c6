#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "eqk/mercer.hpp"
#include "eqk/rng.hpp"
#include "eqk/spectral.hpp"

using namespace eqk;

namespace {

Eigen::VectorXd vec1(double v) {
  Eigen::VectorXd x(1);
  x[0] = v;
  return x;
}

PairKernel gaussian_pair_kernel(double sigma) {
  const auto k = ShiftInvariantKernel::gaussian(sigma, 1);
  return [k](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return k(a - b); };
}

const PairKernel constant_kernel = [](const Eigen::VectorXd&, const Eigen::VectorXd&) {
  return 1.0;
};

std::vector<Eigen::VectorXd> linspace_points(double lo, double hi, int count) {
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < count; ++i)
    pts.push_back(vec1(lo + (hi - lo) * i / static_cast<double>(count - 1)));
  return pts;
}

Eigen::MatrixXd landmark_feature_matrix(const MercerTruncation& t, const PairKernel& k) {
  const int m = static_cast<int>(t.landmarks.size());
  Eigen::MatrixXd phi(m, t.rank);
  for (int i = 0; i < m; ++i) phi.row(i) = nystrom_features(t, k, t.landmarks[i]).transpose();
  return phi;
}

}  // namespace

TEST_CASE("gram_eigendecompose reference spectra") {
  SUBCASE("all-ones matrix is rank one") {
    const auto eigen = gram_eigendecompose(Eigen::MatrixXd::Ones(3, 3));
    CHECK(eigen.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(eigen.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eigen.eigenvalues[2] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eigen.psd_violations.empty());
  }

  SUBCASE("identity spectrum is flat") {
    const auto eigen = gram_eigendecompose(Eigen::MatrixXd::Identity(5, 5));
    for (int j = 0; j < 5; ++j) CHECK(eigen.eigenvalues[j] == doctest::Approx(1.0));
  }

  SUBCASE("order is non-increasing and columns stay orthonormal") {
    const auto pts = linspace_points(-1.0, 1.0, 40);
    Eigen::MatrixXd gram(40, 40);
    const auto k = gaussian_pair_kernel(1.0);
    for (int i = 0; i < 40; ++i)
      for (int j = 0; j < 40; ++j) gram(i, j) = k(pts[i], pts[j]);
    const auto eigen = gram_eigendecompose(gram);
    for (int j = 0; j + 1 < 40; ++j) CHECK(eigen.eigenvalues[j] >= eigen.eigenvalues[j + 1]);
    CHECK(eigen.eigenvalues[0] > 10.0);   // mass concentrates fast
    CHECK(eigen.eigenvalues[10] < 1e-4);  // and decays quickly
    CHECK(eigen.psd_violations.empty());
    const Eigen::MatrixXd gramian = eigen.eigenvectors.transpose() * eigen.eigenvectors;
    CHECK((gramian - Eigen::MatrixXd::Identity(40, 40)).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("asymmetric input is rejected") {
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 0.5, 0.2, 1.0;
    CHECK_THROWS_AS(gram_eigendecompose(bad), std::invalid_argument);
  }
}

TEST_CASE("negative eigenvalues are flagged or clipped by size") {
  SUBCASE("genuine violations land in psd_violations") {
    Eigen::MatrixXd flip(2, 2);
    flip << 0.0, 1.0, 1.0, 0.0;  // eigenvalues +1 and -1
    const auto eigen = gram_eigendecompose(flip);
    CHECK(eigen.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(eigen.eigenvalues[1] == 0.0);
    REQUIRE(eigen.psd_violations.size() == 1);
    CHECK(eigen.psd_violations[0] == doctest::Approx(-1.0));
    CHECK(eigen.clipped.empty());
  }

  SUBCASE("solver-scale negatives are clipped silently") {
    Eigen::MatrixXd nearly(2, 2);
    nearly << 1.0, 0.0, 0.0, -5e-9;
    const auto eigen = gram_eigendecompose(nearly);
    CHECK(eigen.eigenvalues[1] == 0.0);
    CHECK(eigen.psd_violations.empty());
    REQUIRE(eigen.clipped.size() == 1);
    CHECK(eigen.clipped[0] == doctest::Approx(-5e-9));
  }
}

TEST_CASE("mercer_truncate validates landmarks and rank") {
  const auto k = gaussian_pair_kernel(1.0);
  const auto pts = linspace_points(-1.0, 1.0, 5);
  const auto t = mercer_truncate(k, pts, 3);
  CHECK(t.rank == 3);
  CHECK(t.landmarks.size() == 5);
  CHECK_THROWS_AS(mercer_truncate(k, {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(mercer_truncate(k, pts, 0), std::invalid_argument);
  CHECK_THROWS_AS(mercer_truncate(k, pts, 6), std::invalid_argument);
}

TEST_CASE("rank_for_tail_mass picks the smallest admissible rank") {
  const auto k = gaussian_pair_kernel(1.0);
  const auto t = mercer_truncate(k, linspace_points(-1.0, 1.0, 40), 1);
  for (double tail : {1e-2, 1e-6, 1e-10}) {
    const int rank = rank_for_tail_mass(t.eigen, tail);
    CHECK(rank >= 1);
    double above = 0.0;
    for (int j = rank; j < 40; ++j) above += t.eigen.eigenvalues[j];
    CHECK(above <= tail);
    if (rank > 1) {
      double loose = above + t.eigen.eigenvalues[rank - 1];
      CHECK(loose > tail);
    }
  }
  // The whole spectrum can be discarded only with the full tail budget.
  CHECK(rank_for_tail_mass(t.eigen, t.eigen.eigenvalues.sum() + 1.0) == 1);
}

TEST_CASE("nystrom_features on the constant kernel collapse to one value") {
  const auto pts = linspace_points(-1.0, 1.0, 6);
  const auto t = mercer_truncate(constant_kernel, pts, 1);
  const auto at_zero = nystrom_features(t, constant_kernel, vec1(0.0));
  REQUIRE(at_zero.size() == 1);
  for (double x : {-0.7, 0.1, 0.9, 5.0}) {
    const auto f = nystrom_features(t, constant_kernel, vec1(x));
    CHECK(f[0] == doctest::Approx(at_zero[0]).epsilon(1e-12));
    CHECK(f.dot(at_zero) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("full-rank landmark features reproduce the Gram matrix") {
  const auto k = gaussian_pair_kernel(1.0);
  const auto pts = linspace_points(-3.5, 3.5, 8);  // wide spacing keeps all eigenvalues positive
  const auto t = mercer_truncate(k, pts, 8);
  const auto phi = landmark_feature_matrix(t, k);
  Eigen::MatrixXd gram(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) gram(i, j) = k(pts[i], pts[j]);
  CHECK((phi * phi.transpose() - gram).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("nystrom reconstruction error obeys the spectral tail bound") {
  const auto k = gaussian_pair_kernel(1.0);
  const auto pts = linspace_points(-1.0, 1.0, 20);
  Eigen::MatrixXd gram(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) gram(i, j) = k(pts[i], pts[j]);
  for (int rank : {2, 5, 9}) {
    const auto t = mercer_truncate(k, pts, rank);
    const auto phi = landmark_feature_matrix(t, k);
    double tail_sq = 0.0;
    for (int j = rank; j < 20; ++j)
      tail_sq += t.eigen.eigenvalues[j] * t.eigen.eigenvalues[j];
    CHECK((phi * phi.transpose() - gram).norm() <= std::sqrt(tail_sq) + 1e-8);
  }
}

TEST_CASE("nystrom_features rejects non-positive retained eigenvalues") {
  // Linear kernel on landmarks {1, 0} has the exactly diagonal Gram
  // diag(1, 0), so retaining rank 2 keeps an exact zero eigenvalue.
  const PairKernel linear = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(b);
  };
  const auto t = mercer_truncate(linear, {vec1(1.0), vec1(0.0)}, 2);
  CHECK(t.eigen.eigenvalues[1] == 0.0);
  CHECK_THROWS_AS(nystrom_features(t, linear, vec1(0.5)), std::invalid_argument);
}

TEST_CASE("off-landmark kernel reconstruction stays accurate at small tail mass") {
  const auto k = gaussian_pair_kernel(1.0);
  const auto pts = linspace_points(-1.0, 1.0, 40);
  const auto probe = mercer_truncate(k, pts, 1);
  const int rank = rank_for_tail_mass(probe.eigen, 1e-6);
  const auto t = mercer_truncate(k, pts, rank);
  double worst = 0.0;
  for (const auto& x : linspace_points(-0.97, 0.97, 15)) {
    for (const auto& y : linspace_points(-0.93, 0.93, 15)) {
      const double approx = nystrom_features(t, k, x).dot(nystrom_features(t, k, y));
      worst = std::max(worst, std::abs(approx - k(x, y)));
    }
  }
  CHECK(worst <= 1e-2);
}

TEST_CASE("truncation_error_bound sums the discarded tail") {
  const auto k = gaussian_pair_kernel(1.0);
  const auto pts = linspace_points(-1.0, 1.0, 20);
  const auto t = mercer_truncate(k, pts, 5);
  CHECK(truncation_error_bound(t, 20) == 0.0);
  CHECK(truncation_error_bound(t, 10) < truncation_error_bound(t, 5));
  CHECK(truncation_error_bound(t, 5) > 0.0);

  const auto ones = mercer_truncate(constant_kernel, linspace_points(-1.0, 1.0, 3), 1);
  CHECK(truncation_error_bound(ones, 1) <= 1e-12);
  CHECK_THROWS_AS(truncation_error_bound(t, 21), std::invalid_argument);
}

TEST_CASE("mercer_to_eqk recovers classical Nystrom inner products") {
  const auto k = gaussian_pair_kernel(1.0);
  const auto t = mercer_truncate(k, linspace_points(-1.0, 1.0, 40), 12);
  const FiniteFeatureMap fm{t, k};
  CHECK(fm.dimension() == 12);

  Rng rng(87);
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = vec1(2.0 * rng.uniform() - 1.0);
    const auto y = vec1(2.0 * rng.uniform() - 1.0);
    const double classical = nystrom_features(t, k, x).dot(nystrom_features(t, k, y));
    CHECK(std::abs(mercer_to_eqk(fm, x, y) - classical) <= 1e-9);
  }
}

TEST_CASE("mercer_to_eqk equals the Gram diagonal at landmarks of a full-rank Gram") {
  const auto k = gaussian_pair_kernel(1.0);
  const auto pts = linspace_points(-3.5, 3.5, 8);
  const auto t = mercer_truncate(k, pts, 8);
  const FiniteFeatureMap fm{t, k};
  for (const auto& p : pts) {
    CHECK(mercer_to_eqk(fm, p, p) == doctest::Approx(k(p, p)).epsilon(1e-8));
  }
}

TEST_CASE("mercer_to_eqk is constant 1 for the constant kernel") {
  const auto t = mercer_truncate(constant_kernel, linspace_points(-1.0, 1.0, 6), 1);
  const FiniteFeatureMap fm{t, constant_kernel};
  for (double x : {-0.9, 0.0, 2.0}) {
    for (double y : {-0.4, 1.3}) {
      CHECK(mercer_to_eqk(fm, vec1(x), vec1(y)) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("mercer_to_eqk rejects zero feature vectors") {
  // Linear kernel over symmetric landmarks: the feature of x = 0 vanishes.
  const PairKernel linear = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(b);
  };
  const auto t = mercer_truncate(linear, {vec1(-1.0), vec1(1.0)}, 1);
  const FiniteFeatureMap fm{t, linear};
  CHECK(mercer_to_eqk(fm, vec1(0.5), vec1(0.5)) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK_THROWS_AS(mercer_to_eqk(fm, vec1(0.0), vec1(0.5)), std::invalid_argument);
}

TEST_CASE("end-to-end kernel recovery through the state encoding") {
  const auto k = gaussian_pair_kernel(1.0);
  const auto t = mercer_truncate(k, linspace_points(-1.0, 1.0, 40), 12);
  const FiniteFeatureMap fm{t, k};
  double worst = 0.0;
  for (const auto& x : linspace_points(-1.0, 1.0, 10)) {
    for (const auto& y : linspace_points(-1.0, 1.0, 10)) {
      worst = std::max(worst, std::abs(mercer_to_eqk(fm, x, y) - k(x, y)));
    }
  }
  CHECK(worst <= 0.02);
}
