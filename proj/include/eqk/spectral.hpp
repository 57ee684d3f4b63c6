#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "eqk/rng.hpp"

// Shift-invariant kernel specifications, Bochner spectral samplers, the
// spectral variance sigma_p^2 = E_p[||w||^2], and the trigonometric
// polynomial PSD test with its brute-force Gram eigenvalue oracle.

namespace eqk {

// A cos/sin pair at one integer frequency vector.
struct TrigTerm {
  Eigen::VectorXi freq;
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};

// Finite trigonometric polynomial
//   p(delta) = sum_w a_w cos<w, delta> + b_w sin<w, delta>
// with pairwise distinct integer frequency vectors.
class TrigPolynomial {
 public:
  TrigPolynomial(int dim, std::vector<TrigTerm> terms);
  double operator()(const Eigen::VectorXd& delta) const;
  int dim() const { return dim_; }
  const std::vector<TrigTerm>& terms() const { return terms_; }

 private:
  int dim_ = 0;
  std::vector<TrigTerm> terms_;
};

// True iff every sine coefficient vanishes (within 1e-12).
bool trig_poly_is_even(const TrigPolynomial& p);

// True iff the polynomial is even and every cosine coefficient is
// nonnegative (within -1e-12). Characterizes PSD for this family.
bool trig_poly_is_psd(const TrigPolynomial& p);

// Normalized shift-invariant kernel k(delta) with k(0) = 1. Gaussian and
// trig variants carry analytic structure; Custom wraps arbitrary
// user-supplied evaluators and (optionally) spectral samplers.
class ShiftInvariantKernel {
 public:
  using Evaluator = std::function<double(const Eigen::VectorXd&)>;
  using Sampler = std::function<Eigen::VectorXd(Rng&)>;
  enum class Kind { Gaussian, Trig, Custom };

  static ShiftInvariantKernel gaussian(double sigma, int dim);
  // Requires p(0) = 1. Sampling is available when the polynomial is PSD.
  static ShiftInvariantKernel trig(TrigPolynomial p);
  static ShiftInvariantKernel custom(int dim, Evaluator evaluator, Sampler sampler = {});

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  double operator()(const Eigen::VectorXd& delta) const;
  bool has_sampler() const;
  Eigen::VectorXd sample_frequency(Rng& rng) const;
  std::string describe() const;

  double gaussian_sigma() const;            // Gaussian only
  const TrigPolynomial& trig_poly() const;  // Trig only

 private:
  ShiftInvariantKernel() = default;
  Kind kind_ = Kind::Custom;
  int dim_ = 0;
  double sigma_ = 0.0;
  std::shared_ptr<const TrigPolynomial> poly_;
  Evaluator evaluator_;
  Sampler sampler_;
};

// One draw from the Gaussian spectral density: i.i.d. N(0, 1/sigma^2)
// coordinates.
Eigen::VectorXd gaussian_spectral_sample(double sigma, int dim, Rng& rng);

// sigma_p^2 = -sum_i d^2 k / d delta_i^2 at 0. Closed form for Gaussian
// (d/sigma^2) and trig (sum_w a_w ||w||^2); finite differences with a
// divergence check for Custom.
double spectral_variance(const ShiftInvariantKernel& k);

// E_p[||w||^2] for the Gaussian spectral density by 1-d adaptive Simpson
// quadrature of the second-moment / normalization integral ratio, times d.
// Cross-checks the closed form used by spectral_variance.
double gaussian_second_moment_quadrature(double sigma, int dim);

// Gram matrix [k(x_i, x_j)]. The upper triangle is evaluated and mirrored,
// so the result is symmetric by construction.
Eigen::MatrixXd gram_matrix(
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& k,
    const std::vector<Eigen::VectorXd>& points);

// Smallest eigenvalue by a dense self-adjoint solver. Rejects matrices
// that are asymmetric beyond 1e-10.
double gram_min_eigenvalue(const Eigen::MatrixXd& gram);

}  // namespace eqk
