#ifndef CODEBOUND_TESTS_ORACLES_HPP
#define CODEBOUND_TESTS_ORACLES_HPP

// Test-only reference computations. None of these call into the library
// code paths they are used to check.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "codebound/linprog.hpp"

namespace codebound::oracle {

/// G_k^{(dim)}(x) from the explicit sum for C_k^lambda, lambda = (dim - 2) / 2,
/// divided by C_k^lambda(1). dim = 2 uses cos(k acos x).
inline double gegenbauer_closed_form(int dim, int k, double x) {
  if (dim == 2) return std::cos(k * std::acos(x));
  const long double lambda = (dim - 2) / 2.0L;
  long double sum = 0.0L;
  for (int m = 0; m <= k / 2; ++m) {
    const long double log_mag = std::lgamma(static_cast<long double>(k - m) + lambda) - std::lgamma(lambda) -
                                std::lgamma(m + 1.0L) - std::lgamma(static_cast<long double>(k - 2 * m) + 1.0L);
    const long double term = std::exp(log_mag) * std::pow(2.0L * x, k - 2 * m);
    sum += (m % 2 == 0 ? term : -term);
  }
  const long double at_one =
      std::exp(std::lgamma(k + 2.0L * lambda) - std::lgamma(2.0L * lambda) - std::lgamma(k + 1.0L));
  return static_cast<double>(sum / at_one);
}

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on std::legendre.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(n, z);
      const double p1 = std::legendre(n - 1, z);
      dp = n * (z * p - p1) / (z * z - 1.0);
      const double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double p1 = std::legendre(n - 1, z);
    dp = n * (z * std::legendre(n, z) - p1) / (z * z - 1.0);
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

/// Integral over [-1, 1] of f(r) (1 - r^2)^((dim - 3) / 2), computed as the
/// smooth integral over t in [0, pi] of f(cos t) sin(t)^(dim - 2).
inline double weighted_integral(const std::function<double(double)>& f, int dim, int panels = 64, int order = 20) {
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(order, x, w);
  const double h = std::numbers::pi / panels;
  long double acc = 0.0L;
  for (int p = 0; p < panels; ++p) {
    const double a = p * h;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = a + 0.5 * h * (x[i] + 1.0);
      acc += 0.5 * h * w[i] * f(std::cos(t)) * std::pow(std::sin(t), dim - 2);
    }
  }
  return static_cast<double>(acc);
}

/// Gegenbauer coefficients of f by orthogonal projection, using the oracle
/// quadrature and closed-form basis.
inline std::vector<double> project(const std::function<double(double)>& f, int dim, int degree) {
  std::vector<double> a(static_cast<std::size_t>(degree) + 1);
  for (int k = 0; k <= degree; ++k) {
    const double num = weighted_integral([&](double r) { return f(r) * gegenbauer_closed_form(dim, k, r); }, dim);
    const double den = weighted_integral(
        [&](double r) {
          const double g = gegenbauer_closed_form(dim, k, r);
          return g * g;
        },
        dim);
    a[static_cast<std::size_t>(k)] = num / den;
  }
  return a;
}

/// Optimal value of a bounded LP by enumerating every vertex (all variables
/// must have finite bounds). Returns +inf when no feasible vertex exists.
inline double vertex_enumeration(const LinearProgram& lp, double tol = 1e-9) {
  const auto n = static_cast<Eigen::Index>(lp.num_variables());
  struct Plane {
    Eigen::VectorXd a;
    double b;
    bool forced;
  };
  std::vector<Plane> planes;
  for (const auto& c : lp.constraints) {
    planes.push_back({Eigen::Map<const Eigen::VectorXd>(c.row.data(), n), c.rhs, c.relation == Relation::kEqual});
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    planes.push_back({Eigen::VectorXd::Unit(n, j), lp.lower_bounds[static_cast<std::size_t>(j)], false});
    planes.push_back({Eigen::VectorXd::Unit(n, j), lp.upper_bounds[static_cast<std::size_t>(j)], false});
  }
  std::vector<std::size_t> forced;
  std::vector<std::size_t> optional;
  for (std::size_t i = 0; i < planes.size(); ++i) (planes[i].forced ? forced : optional).push_back(i);
  const auto need = static_cast<std::size_t>(n);
  double best = std::numeric_limits<double>::infinity();
  if (forced.size() > need) {
    // More equalities than variables: enumerate subsets of all planes and let feasibility decide.
    optional.insert(optional.end(), forced.begin(), forced.end());
    forced.clear();
  }
  const std::size_t pick = need - forced.size();
  std::vector<std::size_t> idx(pick);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == pick) {
      Eigen::MatrixXd a(n, n);
      Eigen::VectorXd b(n);
      Eigen::Index r = 0;
      for (std::size_t f : forced) {
        a.row(r) = planes[f].a.transpose();
        b(r++) = planes[f].b;
      }
      for (std::size_t o : idx) {
        a.row(r) = planes[optional[o]].a.transpose();
        b(r++) = planes[optional[o]].b;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(b);
      std::vector<double> xs(x.data(), x.data() + n);
      if (max_constraint_violation(lp, xs) > tol) return;
      double obj = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) obj += lp.objective[static_cast<std::size_t>(j)] * x(j);
      best = std::min(best, obj);
      return;
    }
    for (std::size_t i = start; i < optional.size(); ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

/// Small feasible LP with box bounds: 1..5 variables, 1..12 constraints, an
/// interior point by construction, occasionally an equality row.
inline LinearProgram random_feasible_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> n_d(1, 5);
  std::uniform_int_distribution<int> m_d(1, 12);
  std::uniform_int_distribution<int> coin(0, 9);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = n_d(rng);
  const int m = m_d(rng);
  std::vector<double> c(static_cast<std::size_t>(n));
  for (auto& v : c) v = normal(rng);
  LinearProgram lp(c);
  std::vector<double> x0(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const bool negative_lower = coin(rng) < 3;
    lp.lower_bounds[static_cast<std::size_t>(j)] = negative_lower ? -5.0 : 0.0;
    lp.upper_bounds[static_cast<std::size_t>(j)] = 10.0;
    x0[static_cast<std::size_t>(j)] = lp.lower_bounds[static_cast<std::size_t>(j)] + (10.0 - lp.lower_bounds[static_cast<std::size_t>(j)]) * (0.1 + 0.8 * unit(rng));
  }
  for (int i = 0; i < m; ++i) {
    std::vector<double> row(static_cast<std::size_t>(n));
    double lhs = 0.0;
    for (int j = 0; j < n; ++j) {
      row[static_cast<std::size_t>(j)] = normal(rng);
      lhs += row[static_cast<std::size_t>(j)] * x0[static_cast<std::size_t>(j)];
    }
    const int kind = coin(rng);
    if (kind == 0) {
      lp.add_constraint(row, Relation::kEqual, lhs);
    } else if (kind < 5) {
      lp.add_constraint(row, Relation::kLessEqual, lhs + 3.0 * unit(rng));
    } else {
      lp.add_constraint(row, Relation::kGreaterEqual, lhs - 3.0 * unit(rng));
    }
  }
  return lp;
}

/// Uniform random unit vectors in R^dim (rows).
inline Eigen::MatrixXd random_unit_vectors(std::mt19937_64& rng, int count, int dim) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd v(count, dim);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < dim; ++j) v(i, j) = normal(rng);
    v.row(i).normalize();
  }
  return v;
}

}  // namespace codebound::oracle

#endif  // CODEBOUND_TESTS_ORACLES_HPP
