#include "eqk/pauli_state.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "eqk/errors.hpp"

namespace eqk {

namespace {

constexpr int DENSE_QUBIT_CAP = 12;
constexpr double DENSE_CONSTRUCTION_TOL = 1e-12;

using Cx = std::complex<double>;

double l1_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> rescaled(std::vector<double> v, double (*norm_fn)(const std::vector<double>&),
                             const char* which) {
  if (v.empty()) throw std::invalid_argument(std::string(which) + ": empty vector");
  const double norm = norm_fn(v);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > UNIT_NORM_INPUT_TOL)
    throw std::invalid_argument(std::string(which) + ": norm deviates from 1 beyond 1e-9");
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace

int qubit_count_for(std::int64_t d) {
  if (d < 1) throw std::invalid_argument("qubit_count_for: d must be >= 1");
  int n = 1;
  std::int64_t capacity = 3;  // 4^n - 1
  while (capacity < d) {
    ++n;
    capacity = capacity * 4 + 3;
  }
  return n;
}

L1UnitVector::L1UnitVector(std::vector<double> entries)
    : entries_(rescaled(std::move(entries), &l1_norm, "L1UnitVector")) {}

L2UnitVector::L2UnitVector(std::vector<double> entries)
    : entries_(rescaled(std::move(entries), &l2_norm, "L2UnitVector")) {}

int pauli_digit(const PauliWordIndex& w, int qubit) {
  if (qubit < 0 || qubit >= w.qubits)
    throw std::invalid_argument("pauli_digit: qubit out of range");
  return static_cast<int>((w.value >> (2 * qubit)) & 3u);
}

PauliMixtureState PauliMixtureState::from_parts(int qubits, Coefficients coeffs) {
  if (qubits < 1) throw std::invalid_argument("PauliMixtureState: qubits must be >= 1");
  if (qubits > 31) throw std::invalid_argument("PauliMixtureState: qubit count too large");
  const std::uint64_t max_index = (std::uint64_t{1} << (2 * qubits)) - 1;
  std::uint64_t previous = 0;
  double abs_sum = 0.0;
  for (const auto& [index, value] : coeffs) {
    if (index < 1 || index > max_index)
      throw std::invalid_argument("PauliMixtureState: word index out of range");
    if (index <= previous && previous != 0)
      throw std::invalid_argument("PauliMixtureState: indices must strictly increase");
    if (value == 0.0)
      throw std::invalid_argument("PauliMixtureState: zero coefficients must be dropped");
    previous = index;
    abs_sum += std::abs(value);
  }
  if (std::abs(abs_sum - 1.0) > UNIT_NORM_INVARIANT_TOL)
    throw std::invalid_argument("PauliMixtureState: coefficient 1-norm must be 1");
  return PauliMixtureState(qubits, std::move(coeffs));
}

PauliMixtureState c2qe_encode(const L1UnitVector& r) {
  const auto& entries = r.entries();
  const int n = qubit_count_for(r.dim());
  PauliMixtureState::Coefficients coeffs;
  coeffs.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i] != 0.0) coeffs.emplace_back(static_cast<std::uint64_t>(i) + 1, entries[i]);
  }
  return PauliMixtureState::from_parts(n, std::move(coeffs));
}

std::pair<PauliWordIndex, int> sample_pure_component(const L1UnitVector& r, Rng& rng) {
  const auto& entries = r.entries();
  const int n = qubit_count_for(r.dim());
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t chosen = entries.size();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    cumulative += std::abs(entries[i]);
    if (u < cumulative) {
      chosen = i;
      break;
    }
  }
  if (chosen == entries.size()) {
    // u landed past the rounded cumulative total; take the last support point.
    for (std::size_t i = entries.size(); i-- > 0;) {
      if (entries[i] != 0.0) {
        chosen = i;
        break;
      }
    }
  }
  const int sign = entries[chosen] < 0.0 ? -1 : 1;
  return {PauliWordIndex{static_cast<std::uint64_t>(chosen) + 1, n}, sign};
}

DenseDensityMatrix DenseDensityMatrix::checked(Eigen::MatrixXcd m) {
  DenseDensityMatrix d{std::move(m)};
  if (d.mat.rows() != d.mat.cols())
    throw std::invalid_argument("DenseDensityMatrix: matrix must be square");
  if (d.hermiticity_error() > DENSE_CONSTRUCTION_TOL)
    throw std::invalid_argument("DenseDensityMatrix: not Hermitian within 1e-12");
  if (d.trace_error() > DENSE_CONSTRUCTION_TOL)
    throw std::invalid_argument("DenseDensityMatrix: trace differs from 1 beyond 1e-12");
  return d;
}

double DenseDensityMatrix::hermiticity_error() const {
  return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
}

double DenseDensityMatrix::trace_error() const { return std::abs(mat.trace() - Cx(1.0, 0.0)); }

double DenseDensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mat, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DenseDensityMatrix mixture_to_dense(const PauliMixtureState& rho) {
  const int n = rho.qubits();
  if (n > DENSE_QUBIT_CAP)
    throw guard_error("mixture_to_dense: dense backend capped at n = 12");
  const std::int64_t dim = std::int64_t{1} << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);

  // Each Pauli word is a signed permutation: column j maps to row j XOR
  // xmask with a phase that is a product of per-qubit factors.
  for (const auto& [index, coeff] : rho.coefficients()) {
    std::uint64_t xmask = 0;
    for (int q = 0; q < n; ++q) {
      const int digit = static_cast<int>((index >> (2 * q)) & 3u);
      if (digit == 1 || digit == 2) xmask |= std::uint64_t{1} << q;
    }
    for (std::int64_t col = 0; col < dim; ++col) {
      Cx phase(1.0, 0.0);
      for (int q = 0; q < n; ++q) {
        const int digit = static_cast<int>((index >> (2 * q)) & 3u);
        const bool bit = (col >> q) & 1;
        if (digit == 2) phase *= bit ? Cx(0.0, -1.0) : Cx(0.0, 1.0);
        else if (digit == 3 && bit) phase = -phase;
      }
      m(static_cast<std::int64_t>(col ^ xmask), col) += coeff * phase;
    }
  }
  m /= static_cast<double>(dim);
  return DenseDensityMatrix::checked(std::move(m));
}

double hs_inner(const PauliMixtureState& rho, const PauliMixtureState& rho_p) {
  if (rho.qubits() != rho_p.qubits())
    throw std::invalid_argument("hs_inner: mismatched qubit counts");
  const auto& a = rho.coefficients();
  const auto& b = rho_p.coefficients();
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) ++i;
    else if (a[i].first > b[j].first) ++j;
    else dot += a[i++].second * b[j++].second;
  }
  return (1.0 + dot) / std::ldexp(1.0, rho.qubits());
}

double hs_inner_sampled(const PauliMixtureState& rho, const PauliMixtureState& rho_p,
                        std::int64_t shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("hs_inner_sampled: shots must be >= 1");
  const double p = 0.5 * (1.0 + hs_inner(rho, rho_p));
  std::int64_t successes = 0;
  for (std::int64_t s = 0; s < shots; ++s) {
    if (rng.uniform() < p) ++successes;
  }
  return 2.0 * (static_cast<double>(successes) / static_cast<double>(shots)) - 1.0;
}

double euclid_from_states(const PauliMixtureState& rho, const PauliMixtureState& rho_p) {
  return std::ldexp(1.0, rho.qubits()) * hs_inner(rho, rho_p) - 1.0;
}

RenormalizedInner renormalized_inner(const L2UnitVector& r, const L2UnitVector& r_p) {
  const auto renorm = [](const L2UnitVector& v) {
    const double f = l1_norm(v.entries());
    std::vector<double> scaled = v.entries();
    for (double& x : scaled) x /= f;
    return std::make_pair(f, L1UnitVector(std::move(scaled)));
  };
  auto [f_left, left] = renorm(r);
  auto [f_right, right] = renorm(r_p);

  // For a 2-norm unit vector the 1-norm lies in [1, sqrt(d)] exactly;
  // anything else indicates numerical corruption upstream.
  const auto check_factor = [](double f, int d) {
    if (f < 1.0 - 1e-12 || f > std::sqrt(static_cast<double>(d)) + 1e-12)
      throw std::logic_error("renormalized_inner: 1-norm factor outside [1, sqrt(d)]");
  };
  check_factor(f_left, r.dim());
  check_factor(f_right, r_p.dim());

  const PauliMixtureState rho = c2qe_encode(left);
  const PauliMixtureState rho_p = c2qe_encode(right);
  return {f_left * f_right * euclid_from_states(rho, rho_p), f_left, f_right};
}

}  // namespace eqk
