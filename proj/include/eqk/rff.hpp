#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "eqk/pauli_state.hpp"
#include "eqk/spectral.hpp"

// Random Fourier features: D/2 i.i.d. spectral samples w_j define the map
//
//   z(x) = sqrt(2/D) (cos<w_1,x>, sin<w_1,x>, ..., cos<w_{D/2},x>, sin<w_{D/2},x>)
//
// whose inner products estimate k(x - x'). This header also carries the
// dimension bound calculators (failure probability, required D, smooth
// kernel specialization), the central finite-difference machinery with its
// precision-bit rule, and the grid sup-error harness.

namespace eqk {

// Axis-aligned compact domain; lower < upper per coordinate.
struct DomainBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  DomainBox(Eigen::VectorXd lo, Eigen::VectorXd up);
  int dim() const { return static_cast<int>(lower.size()); }
  // Euclidean length of the main diagonal.
  double diameter() const { return (upper - lower).norm(); }
};

// Frozen frequency sample set. Rebuilding with the same (kernel, D, seed)
// reproduces the frequencies exactly.
class RffMap {
 public:
  RffMap(int input_dim, int feature_dim, std::uint64_t seed,
         std::vector<Eigen::VectorXd> frequencies);
  int input_dim() const { return input_dim_; }
  int feature_dim() const { return feature_dim_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Eigen::VectorXd>& frequencies() const { return frequencies_; }

 private:
  int input_dim_ = 0;
  int feature_dim_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<Eigen::VectorXd> frequencies_;
};

struct BoundReport {
  std::int64_t required_dim = 0;   // smallest even D meeting the target
  double epsilon = 0.0;
  double failure_probability = 0.0;
  double sigma_p_sq = 0.0;
  double diameter = 0.0;
  int dim = 0;                     // the d entering the exponent
  double exponent_factor = 8.0;    // denominator constant in exp(-D eps^2 / (factor (d+2)))
};

RffMap build_rff_map(const ShiftInvariantKernel& kernel, int feature_dim, std::uint64_t seed);

L2UnitVector rff_features(const RffMap& map, const Eigen::VectorXd& x);

// <z(x), z(x')> = (2/D) sum_j cos<w_j, x - x'>.
double rff_kernel_estimate(const RffMap& map, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& x_p);

// Same estimate as a function of the difference alone.
double rff_kernel_estimate_delta(const RffMap& map, const Eigen::VectorXd& delta);

// 2^8 (sigma_p diam / eps)^2 exp(-D eps^2 / (factor (d+2))), clamped to [0, 1].
double failure_bound(std::int64_t feature_dim, int d, double epsilon, double sigma_p,
                     double diam, double exponent_factor = 8.0);

// Smallest even D with failure_bound <= delta, by closed-form inversion.
BoundReport required_dimension(int d, double epsilon, double sigma_p, double diam,
                               double delta, double exponent_factor = 8.0);

// Smooth shift-invariant specialization: |d^2 k / d delta_i^2 (0)| <= B gives
// sigma_p^2 <= d B, and X in [-R, R]^d gives diam <= 2 R sqrt(d).
BoundReport smooth_dimension_bound(int d, double epsilon, double R, double B, double delta);

// (k(p + h e_i) + k(p - h e_i) - 2 k(p)) / h^2.
double central_second_derivative(const std::function<double(const Eigen::VectorXd&)>& k,
                                 int axis, const Eigen::VectorXd& point, double h);

// P = max(0, ceil(log4(L / (12 eps)))); h = 2^-P then bounds the central
// difference error by eps for any kernel with fourth derivative <= L.
int required_precision_bits(double fourth_derivative_bound, double epsilon);

// Max |estimate - k| over all ordered pairs of grid points. Since both
// sides depend only on the pair difference, the walk runs over the grid of
// differences; the 1e8 guard still counts ordered pairs.
double sup_error_estimate(const RffMap& map,
                          const std::function<double(const Eigen::VectorXd&)>& kernel,
                          const DomainBox& box, double grid_step);

}  // namespace eqk
