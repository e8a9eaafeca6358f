#ifndef CODEBOUND_GEGENBAUER_HPP
#define CODEBOUND_GEGENBAUER_HPP

// Gegenbauer polynomials normalized by G_k(1) = 1, indexed by the ambient
// dimension of the sphere they live on. Orthogonal on [-1, 1] under the weight
// (1 - r^2)^((dim - 3) / 2).

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "codebound/errors.hpp"

namespace codebound {

/// Largest degree for which monomial tables (and hence basis expansions) are built.
inline constexpr int kMaxGegenbauerDegree = 40;

namespace detail {

inline void require_dim(int dim) {
  if (dim < 2) {
    throw DomainError("Gegenbauer dimension must be >= 2, got " + std::to_string(dim));
  }
}

inline void require_unit_interval(double r) {
  if (!(r >= -1.0 && r <= 1.0)) {
    throw DomainError("Gegenbauer argument must lie in [-1, 1], got " + std::to_string(r));
  }
}

// Fills out[k] = G_k(r) for k < out.size(). No argument checks.
template <class Real>
void gegenbauer_fill(int dim, Real r, std::span<Real> out) {
  if (out.empty()) return;
  out[0] = Real(1);
  if (out.size() == 1) return;
  out[1] = r;
  for (std::size_t k = 2; k < out.size(); ++k) {
    const Real kk = static_cast<Real>(k);
    out[k] = ((2 * kk + dim - 4) * r * out[k - 1] - (kk - 1) * out[k - 2]) / (kk + dim - 3);
  }
}

}  // namespace detail

/// G_k^{(dim)}(r) by the three-term recursion.
inline double gegenbauer_eval(int dim, int k, double r) {
  detail::require_dim(dim);
  detail::require_unit_interval(r);
  if (k < 0) throw DomainError("Gegenbauer degree must be >= 0");
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = r;
  for (int j = 2; j <= k; ++j) {
    const double next = ((2.0 * j + dim - 4) * r * cur - (j - 1.0) * prev) / (j + dim - 3.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// All of G_0(r), ..., G_max_degree(r).
inline std::vector<double> gegenbauer_eval_all(int dim, int max_degree, double r) {
  detail::require_dim(dim);
  detail::require_unit_interval(r);
  if (max_degree < 0) throw DomainError("Gegenbauer degree must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(max_degree) + 1);
  detail::gegenbauer_fill<double>(dim, r, out);
  return out;
}

/// Polynomial in the monomial basis, coeffs[j] multiplies r^j.
struct MonomialPoly {
  std::vector<double> coeffs;

  MonomialPoly() = default;
  explicit MonomialPoly(std::vector<double> c) : coeffs(std::move(c)) {}
  MonomialPoly(std::initializer_list<double> c) : coeffs(c) {}

  /// prod_i (r - roots[i]).
  static MonomialPoly from_roots(std::span<const double> roots) {
    std::vector<double> c{1.0};
    for (double root : roots) {
      std::vector<double> next(c.size() + 1, 0.0);
      for (std::size_t j = 0; j < c.size(); ++j) {
        next[j + 1] += c[j];
        next[j] -= root * c[j];
      }
      c = std::move(next);
    }
    return MonomialPoly(std::move(c));
  }

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  double operator()(double r) const {
    long double acc = 0.0L;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * r + *it;
    return static_cast<double>(acc);
  }
};

/// Orthogonality weight rho(r) = (1 - r^2)^((dim - 3) / 2) on [-1, 1].
struct Weight {
  int dim;

  explicit Weight(int d) : dim(d) { detail::require_dim(d); }

  double exponent() const { return (dim - 3) / 2.0; }

  double operator()(double r) const { return std::pow(1.0 - r * r, exponent()); }

  /// Integral of rho over [-1, 1], i.e. Beta(1/2, exponent + 1).
  double total_mass() const {
    const double a = exponent();
    return std::sqrt(std::numbers::pi) * std::exp(std::lgamma(a + 1.0) - std::lgamma(a + 1.5));
  }
};

/// Immutable family G_0..G_max_degree for one dimension, with monomial tables.
class GegenbauerBasis {
 public:
  GegenbauerBasis(int dim, int max_degree) : dim_(dim), max_degree_(max_degree) {
    detail::require_dim(dim);
    if (max_degree < 0 || max_degree > kMaxGegenbauerDegree) {
      throw DomainError("Gegenbauer basis degree must lie in [0, " +
                        std::to_string(kMaxGegenbauerDegree) + "]");
    }
    // The recursion is run on coefficient vectors in extended precision; the
    // sign pattern of the recursion means no cancellation occurs here.
    std::vector<std::vector<long double>> ext;
    ext.reserve(static_cast<std::size_t>(max_degree) + 1);
    ext.push_back({1.0L});
    if (max_degree >= 1) ext.push_back({0.0L, 1.0L});
    for (int k = 2; k <= max_degree; ++k) {
      const long double alpha = 2.0L * k + dim - 4;
      const long double beta = k - 1.0L;
      const long double denom = k + dim - 3.0L;
      std::vector<long double> c(static_cast<std::size_t>(k) + 1, 0.0L);
      const auto& p1 = ext[static_cast<std::size_t>(k) - 1];
      const auto& p2 = ext[static_cast<std::size_t>(k) - 2];
      for (std::size_t j = 0; j < p1.size(); ++j) c[j + 1] += alpha * p1[j];
      for (std::size_t j = 0; j < p2.size(); ++j) c[j] -= beta * p2[j];
      for (auto& v : c) v /= denom;
      ext.push_back(std::move(c));
    }
    tables_ = std::move(ext);
  }

  int dim() const { return dim_; }
  int max_degree() const { return max_degree_; }

  /// Monomial coefficients of G_k (k + 1 entries, lowest power first). Kept in
  /// extended precision: at k near 20 the coefficients reach 1e5 and cancel at r = 1.
  const std::vector<long double>& monomial_coeffs(int k) const { return tables_.at(static_cast<std::size_t>(k)); }

  /// G_k(r) by Horner on the cached table.
  double eval_table(int k, double r) const {
    detail::require_unit_interval(r);
    const auto& c = monomial_coeffs(k);
    long double acc = 0.0L;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + *it;
    return static_cast<double>(acc);
  }

  /// G_k(r) by the recursion.
  double eval(int k, double r) const {
    if (k < 0 || k > max_degree_) throw DomainError("degree outside basis range");
    return gegenbauer_eval(dim_, k, r);
  }

 private:
  int dim_;
  int max_degree_;
  std::vector<std::vector<long double>> tables_;
};

/// P(r) = sum_k coeffs[k] * G_k^{(dim)}(r).
class GegenbauerPoly {
 public:
  GegenbauerPoly(int dim, std::vector<double> coeffs) : dim_(dim), coeffs_(std::move(coeffs)) {
    detail::require_dim(dim);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (!std::isfinite(coeffs_[k])) {
        throw StructuralError("Gegenbauer coefficient a_" + std::to_string(k) + " is not finite");
      }
    }
  }

  int dim() const { return dim_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  double operator()(double r) const {
    detail::require_unit_interval(r);
    if (coeffs_.empty()) return 0.0;
    // Running recursion; only the last two G values are kept.
    double prev = 1.0;
    double cur = r;
    double acc = coeffs_[0];
    if (coeffs_.size() > 1) acc += coeffs_[1] * r;
    for (std::size_t k = 2; k < coeffs_.size(); ++k) {
      const double kk = static_cast<double>(k);
      const double next = ((2.0 * kk + dim_ - 4) * r * cur - (kk - 1.0) * prev) / (kk + dim_ - 3.0);
      acc += coeffs_[k] * next;
      prev = cur;
      cur = next;
    }
    return acc;
  }

  /// P(1) = sum of coefficients, since every G_k(1) = 1.
  double value_at_one() const {
    double s = 0.0;
    for (double a : coeffs_) s += a;
    return s;
  }

  /// Canonical form: trailing zero coefficients removed.
  GegenbauerPoly trimmed() const {
    auto c = coeffs_;
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    return GegenbauerPoly(dim_, std::move(c));
  }

  MonomialPoly to_monomial() const {
    if (coeffs_.empty()) return MonomialPoly{};
    const GegenbauerBasis basis(dim_, degree());
    std::vector<long double> acc(coeffs_.size(), 0.0L);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      const auto& t = basis.monomial_coeffs(static_cast<int>(k));
      for (std::size_t j = 0; j < t.size(); ++j) acc[j] += coeffs_[k] * t[j];
    }
    return MonomialPoly(std::vector<double>(acc.begin(), acc.end()));
  }

 private:
  int dim_;
  std::vector<double> coeffs_;
};

/// Gauss rule for the weight (1 - r^2)^((dim - 3) / 2).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch on the Jacobi matrix of the recursion. Valid for dim = 2,
/// where the weight is singular at both endpoints.
inline QuadratureRule gauss_gegenbauer_rule(int dim, int num_nodes) {
  detail::require_dim(dim);
  if (num_nodes < 1) throw DomainError("quadrature needs at least one node");
  const auto n = static_cast<Eigen::Index>(num_nodes);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
  // r G_j = A_j G_{j+1} + C_j G_{j-1}; monic recurrence coefficient is A_{j-1} C_j.
  for (Eigen::Index j = 1; j < n; ++j) {
    const double jd = static_cast<double>(j);
    const double a_prev = (j == 1) ? 1.0 : (jd - 1.0 + dim - 2.0) / (2.0 * (jd - 1.0) + dim - 2.0);
    const double c_j = jd / (2.0 * jd + dim - 2.0);
    sub(j - 1) = std::sqrt(a_prev * c_j);
  }
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double mass = Weight(dim).total_mass();
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = mass;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  for (Eigen::Index i = 0; i < n; ++i) {
    rule.nodes[static_cast<std::size_t>(i)] = std::clamp(solver.eigenvalues()(i), -1.0, 1.0);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[static_cast<std::size_t>(i)] = mass * v0 * v0;
  }
  return rule;
}

/// Node count used by weighted_inner_product for a product of the given degree.
inline int quadrature_node_count(int combined_degree) { return std::max(64, combined_degree + 8); }

template <class P>
concept UnivariatePolynomial = requires(const P& p, double r) {
  { p(r) } -> std::convertible_to<double>;
  { p.degree() } -> std::convertible_to<int>;
};

namespace detail {
template <class P>
void require_matching_dim(const P& p, int dim) {
  if constexpr (requires { { p.dim() } -> std::convertible_to<int>; }) {
    if (p.dim() != dim) {
      throw DomainError("polynomial is tagged with dimension " + std::to_string(p.dim()) +
                        " but the inner product uses " + std::to_string(dim));
    }
  }
}
}  // namespace detail

/// Integral of p(r) q(r) rho(r) over [-1, 1] by Gauss quadrature (exact for polynomials).
template <UnivariatePolynomial P, UnivariatePolynomial Q>
double weighted_inner_product(const P& p, const Q& q, int dim) {
  detail::require_dim(dim);
  detail::require_matching_dim(p, dim);
  detail::require_matching_dim(q, dim);
  const int combined = std::max(0, p.degree()) + std::max(0, q.degree());
  const auto rule = gauss_gegenbauer_rule(dim, quadrature_node_count(combined));
  long double acc = 0.0L;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += static_cast<long double>(rule.weights[i]) * p(rule.nodes[i]) * q(rule.nodes[i]);
  }
  return static_cast<double>(acc);
}

/// Coefficients a_k with sum_k a_k G_k^{(dim)} equal to sum_j mono[j] r^j.
/// Back-substitution on the triangular change of basis.
inline GegenbauerPoly expand_in_basis(std::span<const double> mono, int dim) {
  detail::require_dim(dim);
  for (double b : mono) {
    if (!std::isfinite(b)) throw StructuralError("monomial coefficient is not finite");
  }
  if (mono.empty()) return GegenbauerPoly(dim, {});
  const int degree = static_cast<int>(mono.size()) - 1;
  if (degree > kMaxGegenbauerDegree) {
    throw DomainError("expansion degree exceeds " + std::to_string(kMaxGegenbauerDegree));
  }
  const GegenbauerBasis basis(dim, degree);
  std::vector<long double> residual(mono.begin(), mono.end());
  std::vector<double> a(mono.size(), 0.0);
  for (int k = degree; k >= 0; --k) {
    const auto& t = basis.monomial_coeffs(k);
    const long double ak = residual[static_cast<std::size_t>(k)] / t[static_cast<std::size_t>(k)];
    a[static_cast<std::size_t>(k)] = static_cast<double>(ak);
    for (std::size_t j = 0; j <= static_cast<std::size_t>(k); ++j) residual[j] -= ak * t[j];
  }
  return GegenbauerPoly(dim, std::move(a));
}

inline GegenbauerPoly expand_in_basis(const MonomialPoly& p, int dim) { return expand_in_basis(p.coeffs, dim); }

}  // namespace codebound

#endif  // CODEBOUND_GEGENBAUER_HPP
