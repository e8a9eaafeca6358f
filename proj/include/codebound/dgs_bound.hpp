#ifndef CODEBOUND_DGS_BOUND_HPP
#define CODEBOUND_DGS_BOUND_HPP

// Linear programming bound for spherical codes: find P = sum a_k G_k with
// a_0 = 1, a_k >= 0 and P <= 0 on [-1, cos_theta]; then n <= P(1) / a_0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "codebound/errors.hpp"
#include "codebound/gegenbauer.hpp"
#include "codebound/interval_max.hpp"
#include "codebound/linprog.hpp"

namespace codebound {

inline constexpr double kCoefficientTol = 1e-12;
inline constexpr double kSignTol = 1e-9;
inline constexpr double kBoundIntSlack = 1e-9;
inline constexpr int kMaxRefinementRounds = 10;

struct DGSVerification {
  bool passed = false;
  std::string reason;
  std::size_t grid_size = 0;        // LP grid; the verifier samples 10x as many cells
  double max_violation = 0.0;       // max of P over [-1, cos_theta]
  double worst_location = 0.0;
  int refinement_depth = 0;         // LP re-solves triggered by sign violations
  double min_coefficient = 0.0;     // min over k >= 1 of a_k
};

struct DGSCertificate {
  int dim = 0;
  double cos_theta = 0.0;
  GegenbauerPoly poly{2, {}};
  double a0 = 0.0;
  double bound_real = 0.0;
  long long bound_int = 0;
  DGSVerification verification;
};

enum class BoundStatus { kCertified, kUnverified, kNoCertificate, kNumericalFailure };

inline const char* to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::kCertified: return "certified";
    case BoundStatus::kUnverified: return "unverified";
    case BoundStatus::kNoCertificate: return "no certificate";
    case BoundStatus::kNumericalFailure: return "numerical failure";
  }
  return "?";
}

struct DGSResult {
  BoundStatus status = BoundStatus::kNoCertificate;
  std::optional<DGSCertificate> certificate;
  std::string message;
};

inline long long floor_bound(double bound_real) {
  return static_cast<long long>(std::floor(bound_real + kBoundIntSlack));
}

/// Chebyshev-Lobatto points on [lo, hi], endpoints included.
inline std::vector<double> chebyshev_grid(double lo, double hi, std::size_t count) {
  std::vector<double> pts(count);
  if (count == 1) {
    pts[0] = lo;
    return pts;
  }
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = std::numbers::pi * static_cast<double>(i) / static_cast<double>(count - 1);
    pts[i] = std::clamp(mid - half * std::cos(t), lo, hi);
  }
  pts.front() = lo;
  pts.back() = hi;
  return pts;
}

namespace detail {

inline void validate_dgs_args(int dim, double cos_theta) {
  if (dim < 2) throw DomainError("dimension must be >= 2");
  if (!(cos_theta >= -1.0 && cos_theta < 1.0)) throw DomainError("cos_theta must lie in [-1, 1)");
}

inline IntervalMaxResult sign_scan(const GegenbauerPoly& p, double cos_theta, std::size_t grid) {
  return maximize_on_interval([&](double r) { return p(r); }, -1.0, cos_theta, 10 * std::max<std::size_t>(grid, 64));
}

}  // namespace detail

/// Independent re-check of every hypothesis and of the bound arithmetic.
inline DGSVerification verify_certificate(const DGSCertificate& cert) {
  const auto& a = cert.poly.coeffs();
  if (a.empty()) throw StructuralError("certificate has no Gegenbauer coefficients");
  if (cert.poly.dim() != cert.dim) throw StructuralError("certificate polynomial dimension does not match dim");
  if (!std::isfinite(cert.cos_theta) || !std::isfinite(cert.bound_real)) {
    throw StructuralError("certificate has non-finite fields");
  }
  detail::validate_dgs_args(cert.dim, cert.cos_theta);

  DGSVerification rep;
  rep.grid_size = cert.verification.grid_size;
  rep.refinement_depth = cert.verification.refinement_depth;
  rep.min_coefficient = a.size() > 1 ? *std::min_element(a.begin() + 1, a.end()) : 0.0;

  const auto scan = detail::sign_scan(cert.poly, cert.cos_theta, rep.grid_size);
  rep.max_violation = scan.max_value;
  rep.worst_location = scan.argmax;

  const double recomputed = cert.poly.value_at_one() / a[0];
  std::string reason;
  if (!(a[0] >= kCoefficientTol)) {
    reason = "a_0 must be positive";
  } else if (rep.min_coefficient < -kCoefficientTol) {
    const auto k = std::min_element(a.begin() + 1, a.end()) - a.begin();
    reason = "negative Gegenbauer coefficient a_" + std::to_string(k) + " = " + std::to_string(a[static_cast<std::size_t>(k)]);
  } else if (rep.max_violation > kSignTol) {
    reason = "sign condition violated: P(" + std::to_string(rep.worst_location) +
             ") = " + std::to_string(rep.max_violation) + " > 0";
  } else if (std::abs(cert.a0 - a[0]) > 1e-15 * std::abs(a[0]) ||
             std::abs(cert.bound_real - recomputed) > 1e-9 * std::max(1.0, std::abs(recomputed)) ||
             cert.bound_int != floor_bound(recomputed)) {
    reason = "bound arithmetic mismatch: P(1)/a_0 = " + std::to_string(recomputed);
  }
  rep.passed = reason.empty();
  rep.reason = std::move(reason);
  return rep;
}

/// Fills a0 and the bound fields from the polynomial and runs the verifier.
inline DGSCertificate make_certificate(GegenbauerPoly poly, double cos_theta, std::size_t grid_size,
                                       int refinement_depth = 0) {
  DGSCertificate cert;
  cert.dim = poly.dim();
  cert.cos_theta = cos_theta;
  if (poly.coeffs().empty()) throw StructuralError("certificate has no Gegenbauer coefficients");
  cert.a0 = poly.coeffs()[0];
  cert.bound_real = poly.value_at_one() / cert.a0;
  cert.bound_int = floor_bound(cert.bound_real);
  cert.poly = std::move(poly);
  cert.verification.grid_size = grid_size;
  cert.verification.refinement_depth = refinement_depth;
  cert.verification = verify_certificate(cert);
  return cert;
}

/// Optimal polynomial of degree <= `degree` on a Chebyshev grid of
/// `grid_points` nodes, re-solved with added nodes while the verifier finds
/// sign violations. The LP is solved in its dual form (one column per grid
/// node, one row per k >= 1); a_k are the row multipliers.
inline DGSResult lp_bound(int dim, double cos_theta, int degree, int grid_points = 2000) {
  detail::validate_dgs_args(dim, cos_theta);
  if (degree < 0 || degree > kMaxGegenbauerDegree) {
    throw DomainError("degree must lie in [0, " + std::to_string(kMaxGegenbauerDegree) + "]");
  }
  if (grid_points < 64) throw DomainError("grid must have at least 64 points");

  DGSResult result;
  if (degree == 0) {
    result.status = BoundStatus::kNoCertificate;
    result.message = "no certificate at degree 0: P = a_0 > 0 on [-1, cos_theta]";
    return result;
  }
  const auto grid = static_cast<std::size_t>(grid_points);
  std::vector<double> points = chebyshev_grid(-1.0, cos_theta, grid);
  const auto m = static_cast<std::size_t>(degree);

  std::vector<double> a;
  IntervalMaxResult scan;
  int rounds = 0;
  for (;; ++rounds) {
    LinearProgram lp(std::vector<double>(points.size(), -1.0));
    std::vector<std::vector<double>> rows(m, std::vector<double>(points.size()));
    std::vector<double> g(m + 1);
    for (std::size_t i = 0; i < points.size(); ++i) {
      detail::gegenbauer_fill<double>(dim, points[i], g);
      for (std::size_t k = 1; k <= m; ++k) rows[k - 1][i] = -g[k];
    }
    for (auto& row : rows) lp.add_constraint(std::move(row), Relation::kLessEqual, 1.0);

    const LPSolution sol = solve_lp(lp);
    if (sol.status == LPStatus::kUnbounded) {
      result.status = BoundStatus::kNoCertificate;
      result.message = "no certificate at degree " + std::to_string(degree) + ": LP infeasible";
      return result;
    }
    if (sol.status != LPStatus::kOptimal) {
      result.status = BoundStatus::kNumericalFailure;
      result.message = "LP " + std::string(to_string(sol.status)) + ": " + sol.message;
      return result;
    }
    a.assign(m + 1, 0.0);
    a[0] = 1.0;
    for (std::size_t k = 1; k <= m; ++k) a[k] = std::max(0.0, -sol.duals[k - 1]);

    const GegenbauerPoly p(dim, a);
    scan = detail::sign_scan(p, cos_theta, grid);
    const double refine_tol = 1e-15 * (1.0 + p.value_at_one());
    if (scan.max_value <= refine_tol || rounds == kMaxRefinementRounds) break;
    bool added = false;
    for (const auto& lm : scan.local_maxima) {
      if (lm.value <= refine_tol) break;
      const bool dup = std::any_of(points.begin(), points.end(),
                                   [&](double x) { return std::abs(x - lm.location) < 1e-14; });
      if (!dup) {
        points.push_back(lm.location);
        added = true;
      }
    }
    if (!added) break;
  }

  // Absorb any residual positive part into a_0 and renormalize:
  // (P - delta) / (1 - delta) keeps a_0 = 1 and is <= 0 wherever P <= delta.
  if (scan.max_value > 0.0 && scan.max_value < 0.5) {
    double abs_sum = 0.0;
    for (double v : a) abs_sum += std::abs(v);
    const double delta = scan.max_value + 8.0 * std::numeric_limits<double>::epsilon() * abs_sum;
    for (std::size_t k = 1; k < a.size(); ++k) a[k] /= (1.0 - delta);
  }

  result.certificate = make_certificate(GegenbauerPoly(dim, std::move(a)), cos_theta, grid, rounds);
  const auto& v = result.certificate->verification;
  result.status = v.passed ? BoundStatus::kCertified : BoundStatus::kUnverified;
  result.message = v.passed ? "verified" : v.reason;
  return result;
}

struct BoundTableRow {
  int degree = 0;
  BoundStatus status = BoundStatus::kNoCertificate;
  double bound_real = 0.0;
  std::optional<DGSCertificate> certificate;
  std::string message;
};

/// lp_bound at each degree on a shared grid; rows in input order. Degrees
/// are solved on up to `threads` worker threads.
inline std::vector<BoundTableRow> bound_table(int dim, double cos_theta, std::span<const int> degrees,
                                              int grid_points = 2000, unsigned threads = 1) {
  if (!std::is_sorted(degrees.begin(), degrees.end())) throw DomainError("degrees must be ascending");
  auto run = [=](int degree) {
    const DGSResult r = lp_bound(dim, cos_theta, degree, grid_points);
    BoundTableRow row;
    row.degree = degree;
    row.status = r.status;
    row.certificate = r.certificate;
    row.bound_real = r.certificate ? r.certificate->bound_real : 0.0;
    row.message = r.message;
    return row;
  };
  std::vector<BoundTableRow> rows;
  rows.reserve(degrees.size());
  if (threads <= 1) {
    for (int d : degrees) rows.push_back(run(d));
    return rows;
  }
  for (std::size_t start = 0; start < degrees.size(); start += threads) {
    std::vector<std::future<BoundTableRow>> batch;
    for (std::size_t i = start; i < std::min(degrees.size(), start + threads); ++i) {
      batch.push_back(std::async(std::launch::async, run, degrees[i]));
    }
    for (auto& f : batch) rows.push_back(f.get());
  }
  return rows;
}

}  // namespace codebound

#endif  // CODEBOUND_DGS_BOUND_HPP
