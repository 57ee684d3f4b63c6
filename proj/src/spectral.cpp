#include "eqk/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace eqk {

namespace {

constexpr double KERNEL_NORMALIZATION_TOL = 1e-12;
constexpr double SINE_COEFF_TOL = 1e-12;
constexpr double COS_COEFF_PSD_TOL = -1e-12;
constexpr double GRAM_SYMMETRY_TOL = 1e-10;

// Step used for the finite-difference fallback in spectral_variance.
constexpr double FD_PROBE_STEP = 1e-4;

double second_difference(const ShiftInvariantKernel::Evaluator& k, int dim, int axis,
                         double h) {
  Eigen::VectorXd plus = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd minus = Eigen::VectorXd::Zero(dim);
  plus[axis] = h;
  minus[axis] = -h;
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(dim);
  return (k(plus) + k(minus) - 2.0 * k(origin)) / (h * h);
}

}  // namespace

TrigPolynomial::TrigPolynomial(int dim, std::vector<TrigTerm> terms)
    : dim_(dim), terms_(std::move(terms)) {
  if (dim_ < 1) throw std::invalid_argument("TrigPolynomial: dimension must be >= 1");
  std::set<std::vector<int>> seen;
  for (const auto& term : terms_) {
    if (term.freq.size() != dim_)
      throw std::invalid_argument("TrigPolynomial: frequency dimension mismatch");
    std::vector<int> key(term.freq.data(), term.freq.data() + term.freq.size());
    if (!seen.insert(std::move(key)).second)
      throw std::invalid_argument("TrigPolynomial: duplicate frequency vector");
  }
}

double TrigPolynomial::operator()(const Eigen::VectorXd& delta) const {
  if (delta.size() != dim_)
    throw std::invalid_argument("TrigPolynomial: input dimension mismatch");
  double value = 0.0;
  for (const auto& term : terms_) {
    const double phase = term.freq.cast<double>().dot(delta);
    value += term.cos_coeff * std::cos(phase) + term.sin_coeff * std::sin(phase);
  }
  return value;
}

bool trig_poly_is_even(const TrigPolynomial& p) {
  return std::all_of(p.terms().begin(), p.terms().end(), [](const TrigTerm& t) {
    return std::abs(t.sin_coeff) <= SINE_COEFF_TOL;
  });
}

bool trig_poly_is_psd(const TrigPolynomial& p) {
  if (!trig_poly_is_even(p)) return false;
  return std::all_of(p.terms().begin(), p.terms().end(), [](const TrigTerm& t) {
    return t.cos_coeff >= COS_COEFF_PSD_TOL;
  });
}

ShiftInvariantKernel ShiftInvariantKernel::gaussian(double sigma, int dim) {
  if (sigma <= 0.0) throw std::invalid_argument("gaussian kernel: sigma must be > 0");
  if (dim < 1) throw std::invalid_argument("gaussian kernel: dimension must be >= 1");
  ShiftInvariantKernel k;
  k.kind_ = Kind::Gaussian;
  k.dim_ = dim;
  k.sigma_ = sigma;
  k.evaluator_ = [sigma](const Eigen::VectorXd& delta) {
    return std::exp(-delta.squaredNorm() / (2.0 * sigma * sigma));
  };
  k.sampler_ = [sigma, dim](Rng& rng) { return gaussian_spectral_sample(sigma, dim, rng); };
  return k;
}

ShiftInvariantKernel ShiftInvariantKernel::trig(TrigPolynomial p) {
  ShiftInvariantKernel k;
  k.kind_ = Kind::Trig;
  k.dim_ = p.dim();
  k.poly_ = std::make_shared<const TrigPolynomial>(std::move(p));
  double mass_at_zero = 0.0;
  for (const auto& term : k.poly_->terms()) mass_at_zero += term.cos_coeff;
  if (std::abs(mass_at_zero - 1.0) > KERNEL_NORMALIZATION_TOL)
    throw std::invalid_argument("trig kernel: p(0) must equal 1");
  if (trig_poly_is_psd(*k.poly_)) {
    // Spectral measure: mass a_w split evenly between +w and -w; sampling
    // draws a term by weight, then a sign.
    k.sampler_ = [poly = k.poly_](Rng& rng) {
      const auto& terms = poly->terms();
      const double u = rng.uniform();
      double cumulative = 0.0;
      std::size_t chosen = terms.size() - 1;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        cumulative += std::max(terms[i].cos_coeff, 0.0);
        if (u < cumulative) {
          chosen = i;
          break;
        }
      }
      Eigen::VectorXd w = terms[chosen].freq.cast<double>();
      if (rng.uniform() < 0.5) w = -w;
      return w;
    };
  }
  k.evaluator_ = [poly = k.poly_](const Eigen::VectorXd& delta) { return (*poly)(delta); };
  return k;
}

ShiftInvariantKernel ShiftInvariantKernel::custom(int dim, Evaluator evaluator, Sampler sampler) {
  if (dim < 1) throw std::invalid_argument("custom kernel: dimension must be >= 1");
  if (!evaluator) throw std::invalid_argument("custom kernel: evaluator required");
  ShiftInvariantKernel k;
  k.kind_ = Kind::Custom;
  k.dim_ = dim;
  k.evaluator_ = std::move(evaluator);
  k.sampler_ = std::move(sampler);
  const double at_zero = k.evaluator_(Eigen::VectorXd::Zero(dim));
  if (std::abs(at_zero - 1.0) > KERNEL_NORMALIZATION_TOL)
    throw std::invalid_argument("custom kernel: k(0) must equal 1");
  return k;
}

double ShiftInvariantKernel::operator()(const Eigen::VectorXd& delta) const {
  if (delta.size() != dim_)
    throw std::invalid_argument("ShiftInvariantKernel: input dimension mismatch");
  return evaluator_(delta);
}

bool ShiftInvariantKernel::has_sampler() const { return static_cast<bool>(sampler_); }

Eigen::VectorXd ShiftInvariantKernel::sample_frequency(Rng& rng) const {
  if (!sampler_)
    throw std::invalid_argument("ShiftInvariantKernel: no spectral sampler available");
  return sampler_(rng);
}

std::string ShiftInvariantKernel::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Gaussian:
      out << "gaussian(sigma=" << sigma_ << ";d=" << dim_ << ")";
      break;
    case Kind::Trig:
      out << "trig(terms=" << poly_->terms().size() << ";d=" << dim_ << ")";
      break;
    case Kind::Custom:
      out << "custom(d=" << dim_ << ")";
      break;
  }
  return out.str();
}

double ShiftInvariantKernel::gaussian_sigma() const {
  if (kind_ != Kind::Gaussian)
    throw std::logic_error("gaussian_sigma: kernel is not Gaussian");
  return sigma_;
}

const TrigPolynomial& ShiftInvariantKernel::trig_poly() const {
  if (kind_ != Kind::Trig) throw std::logic_error("trig_poly: kernel is not trigonometric");
  return *poly_;
}

Eigen::VectorXd gaussian_spectral_sample(double sigma, int dim, Rng& rng) {
  if (sigma <= 0.0) throw std::invalid_argument("gaussian_spectral_sample: sigma must be > 0");
  if (dim < 1) throw std::invalid_argument("gaussian_spectral_sample: dimension must be >= 1");
  Eigen::VectorXd w(dim);
  for (int i = 0; i < dim; ++i) w[i] = rng.gaussian() / sigma;
  return w;
}

double spectral_variance(const ShiftInvariantKernel& k) {
  switch (k.kind()) {
    case ShiftInvariantKernel::Kind::Gaussian: {
      const double sigma = k.gaussian_sigma();
      return static_cast<double>(k.dim()) / (sigma * sigma);
    }
    case ShiftInvariantKernel::Kind::Trig: {
      double total = 0.0;
      for (const auto& term : k.trig_poly().terms())
        total += term.cos_coeff * term.freq.cast<double>().squaredNorm();
      return total;
    }
    case ShiftInvariantKernel::Kind::Custom: {
      const auto eval = [&k](const Eigen::VectorXd& delta) { return k(delta); };
      double total = 0.0;
      for (int axis = 0; axis < k.dim(); ++axis) {
        const double coarse = second_difference(eval, k.dim(), axis, FD_PROBE_STEP);
        const double fine = second_difference(eval, k.dim(), axis, FD_PROBE_STEP / 2.0);
        // For a C^4 kernel the two estimates differ by O(h^2); a large gap
        // means the second derivative does not exist at the origin.
        if (!std::isfinite(coarse) || !std::isfinite(fine) ||
            std::abs(fine - coarse) > 0.5 * std::max(1.0, std::abs(fine)))
          throw std::runtime_error(
              "spectral_variance: finite-difference divergence, kernel not smooth at 0");
        total -= fine;
      }
      return total;
    }
  }
  throw std::logic_error("spectral_variance: unreachable");
}

namespace {

// Recursive adaptive Simpson on [a, b] with absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fb, double fm, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, fm, flm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, fb, frm, right, tol / 2.0, depth - 1);
}

double simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fb, fm, whole, tol, 48);
}

}  // namespace

double gaussian_second_moment_quadrature(double sigma, int dim) {
  if (sigma <= 0.0 || dim < 1)
    throw std::invalid_argument("gaussian_second_moment_quadrature: bad arguments");
  // Per-coordinate density is proportional to exp(-sigma^2 x^2 / 2); the
  // integrals are even, so integrate on [0, X] with X far in the tail.
  // Summing fixed panels keeps the adaptive refinement from terminating on
  // probe points that all sit past the integrand's bump.
  const double cutoff = 10.0 / sigma;
  const int panels = 20;
  const auto weight = [sigma](double x) { return std::exp(-0.5 * sigma * sigma * x * x); };
  double second = 0.0;
  double mass = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = cutoff * p / panels;
    const double b = cutoff * (p + 1) / panels;
    second += simpson([&](double x) { return x * x * weight(x); }, a, b, 1e-15);
    mass += simpson(weight, a, b, 1e-15);
  }
  return static_cast<double>(dim) * second / mass;
}

Eigen::MatrixXd gram_matrix(
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& k,
    const std::vector<Eigen::VectorXd>& points) {
  if (points.empty()) throw std::invalid_argument("gram_matrix: need at least one point");
  const Eigen::Index m = static_cast<Eigen::Index>(points.size());
  for (const auto& p : points) {
    if (p.size() != points.front().size())
      throw std::invalid_argument("gram_matrix: inconsistent point dimensions");
  }
  Eigen::MatrixXd gram(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const double value = k(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
      gram(i, j) = value;
      gram(j, i) = value;
    }
  }
  return gram;
}

double gram_min_eigenvalue(const Eigen::MatrixXd& gram) {
  if (gram.rows() != gram.cols())
    throw std::invalid_argument("gram_min_eigenvalue: matrix must be square");
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > GRAM_SYMMETRY_TOL)
    throw std::invalid_argument("gram_min_eigenvalue: matrix asymmetric beyond 1e-10");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace eqk
