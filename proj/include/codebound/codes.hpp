#ifndef CODEBOUND_CODES_HPP
#define CODEBOUND_CODES_HPP

// Spherical, functional (l_p) and metric (Lipschitz) codes. All three share
// the same four axioms: unit functionals, unit points, f_j(tau_j) = 1 and
// f_j(tau_k) <= cos_theta off the diagonal.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "codebound/errors.hpp"

namespace codebound {

inline constexpr double kUnitTol = 1e-12;
inline constexpr double kAngleTol = 1e-12;
inline constexpr double kLipschitzTol = 1e-9;
inline constexpr double kMetricTol = 1e-12;

/// n unit vectors in R^dim, one per row.
struct SphericalCode {
  int dim = 0;
  Eigen::MatrixXd vectors;
  double cos_theta = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(vectors.rows()); }
};

/// l_p on R^dim; p may be +inf.
struct LpSpace {
  double p = 2.0;
  int dim = 0;

  double dual_exponent() const {
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
  }
};

/// Points tau_j in l_p and functionals f_j in l_q acting by the dual pairing.
struct FunctionalCode {
  LpSpace space;
  Eigen::MatrixXd points;
  Eigen::MatrixXd functionals;
  double cos_theta = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }
};

/// Finite metric space with a distinguished base point.
struct PointedMetricSpace {
  Eigen::MatrixXd distance;
  std::size_t base = 0;

  std::size_t size() const { return static_cast<std::size_t>(distance.rows()); }
};

/// functions(j, x) is f_j evaluated at space point x.
struct MetricCode {
  PointedMetricSpace space;
  std::vector<std::size_t> point_indices;
  Eigen::MatrixXd functions;
  double cos_theta = 0.0;

  std::size_t size() const { return point_indices.size(); }
};

using Code = std::variant<SphericalCode, FunctionalCode, MetricCode>;

inline std::size_t code_size(const Code& code) {
  return std::visit([](const auto& c) { return c.size(); }, code);
}

inline double declared_cos_theta(const Code& code) {
  return std::visit([](const auto& c) { return c.cos_theta; }, code);
}

struct CodeReport {
  bool valid = false;
  std::size_t size = 0;
  double max_offdiag = -std::numeric_limits<double>::infinity();
  std::pair<std::size_t, std::size_t> worst_pair{0, 0};
  std::vector<std::string> axiom_failures;
  std::vector<std::string> warnings;
};

/// ||x||_p for p in [1, inf].
template <class Vec>
double lp_norm(const Vec& x, double p) {
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return x.norm();
  long double s = 0.0L;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(static_cast<long double>(std::abs(x(i))), p);
  return static_cast<double>(std::pow(s, 1.0L / p));
}

/// sup over pairs of |f(x) - f(y)| / d(x, y) on a finite metric space.
template <class Vec>
double lipschitz_norm(const Eigen::MatrixXd& distance, const Vec& values) {
  double best = 0.0;
  const Eigen::Index n = distance.rows();
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = x + 1; y < n; ++y) {
      const double d = distance(x, y);
      if (d <= 0.0) continue;
      best = std::max(best, std::abs(values(x) - values(y)) / d);
    }
  }
  return best;
}

namespace detail {

template <class M>
void require_finite(const M& m, const char* what) {
  if (!m.allFinite()) throw StructuralError(std::string(what) + " contains NaN or infinite entries");
}

inline void require_finite_scalar(double v, const char* what) {
  if (!std::isfinite(v)) throw StructuralError(std::string(what) + " is not finite");
}

class FailureLog {
 public:
  explicit FailureLog(std::vector<std::string>& out) : out_(out) {}
  ~FailureLog() {
    if (dropped_ > 0) out_.push_back("... and " + std::to_string(dropped_) + " more axiom failures");
  }
  FailureLog(const FailureLog&) = delete;
  FailureLog& operator=(const FailureLog&) = delete;

  void add(std::string msg) {
    if (out_.size() < kMaxListed) {
      out_.push_back(std::move(msg));
    } else {
      ++dropped_;
    }
  }

 private:
  static constexpr std::size_t kMaxListed = 32;
  std::vector<std::string>& out_;
  std::size_t dropped_ = 0;
};

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Max off-diagonal entry of an n x n evaluation matrix, plus the cross-condition failures.
inline void scan_offdiag(const Eigen::MatrixXd& m, double cos_theta, CodeReport& rep, FailureLog& log) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (j == k) continue;
      const double v = m(j, k);
      if (v > rep.max_offdiag) {
        rep.max_offdiag = v;
        rep.worst_pair = {static_cast<std::size_t>(j), static_cast<std::size_t>(k)};
      }
      if (v > cos_theta + kAngleTol) {
        log.add("axiom (iv): f_" + std::to_string(j) + "(tau_" + std::to_string(k) + ") = " + fmt(v) +
                " > cos_theta = " + fmt(cos_theta));
      }
    }
  }
}

}  // namespace detail

/// M(j, k) = f_j(tau_k). For spherical codes this is the Gram matrix.
inline Eigen::MatrixXd evaluation_matrix(const Code& code) {
  struct Visitor {
    Eigen::MatrixXd operator()(const SphericalCode& c) const { return c.vectors * c.vectors.transpose(); }
    Eigen::MatrixXd operator()(const FunctionalCode& c) const { return c.functionals * c.points.transpose(); }
    Eigen::MatrixXd operator()(const MetricCode& c) const {
      const auto n = static_cast<Eigen::Index>(c.size());
      Eigen::MatrixXd m(n, n);
      for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) m(j, k) = c.functions(j, static_cast<Eigen::Index>(c.point_indices[static_cast<std::size_t>(k)]));
      }
      return m;
    }
  };
  return std::visit(Visitor{}, code);
}

inline CodeReport verify(const SphericalCode& code, double cos_theta) {
  detail::require_finite(code.vectors, "spherical code vectors");
  detail::require_finite_scalar(cos_theta, "cos_theta");
  if (code.vectors.rows() > 0 && code.vectors.cols() != code.dim) {
    throw StructuralError("spherical code vectors have " + std::to_string(code.vectors.cols()) +
                          " columns, expected dim " + std::to_string(code.dim));
  }
  CodeReport rep;
  rep.size = code.size();
  {
    detail::FailureLog log(rep.axiom_failures);
    for (Eigen::Index j = 0; j < code.vectors.rows(); ++j) {
      const double norm = code.vectors.row(j).norm();
      if (std::abs(norm - 1.0) > kUnitTol) {
        log.add("axiom (ii): ||tau_" + std::to_string(j) + "|| = " + detail::fmt(norm) + " != 1");
      }
    }
    detail::scan_offdiag(code.vectors * code.vectors.transpose(), cos_theta, rep, log);
  }
  rep.valid = rep.axiom_failures.empty();
  return rep;
}

inline CodeReport verify(const FunctionalCode& code, double cos_theta) {
  detail::require_finite(code.points, "functional code points");
  detail::require_finite(code.functionals, "functional code functionals");
  detail::require_finite_scalar(cos_theta, "cos_theta");
  if (!(code.space.p >= 1.0)) throw StructuralError("l_p exponent must be >= 1");
  if (code.points.rows() != code.functionals.rows()) {
    throw StructuralError("functional code needs one functional per point");
  }
  if (code.points.rows() > 0 && (code.points.cols() != code.space.dim || code.functionals.cols() != code.space.dim)) {
    throw StructuralError("functional code vectors do not match the space dimension");
  }
  const double p = code.space.p;
  const double q = code.space.dual_exponent();
  const Eigen::MatrixXd m = code.functionals * code.points.transpose();
  CodeReport rep;
  rep.size = code.size();
  {
    detail::FailureLog log(rep.axiom_failures);
    for (Eigen::Index j = 0; j < code.points.rows(); ++j) {
      const std::string idx = std::to_string(j);
      const double fnorm = lp_norm(code.functionals.row(j), q);
      if (std::abs(fnorm - 1.0) > kUnitTol) log.add("axiom (i): ||f_" + idx + "||_q = " + detail::fmt(fnorm) + " != 1");
      const double xnorm = lp_norm(code.points.row(j), p);
      if (std::abs(xnorm - 1.0) > kUnitTol) log.add("axiom (ii): ||tau_" + idx + "||_p = " + detail::fmt(xnorm) + " != 1");
      if (std::abs(m(j, j) - 1.0) > kUnitTol) {
        log.add("axiom (iii): f_" + idx + "(tau_" + idx + ") = " + detail::fmt(m(j, j)) + " != 1");
      }
    }
    detail::scan_offdiag(m, cos_theta, rep, log);
  }
  rep.valid = rep.axiom_failures.empty();
  return rep;
}

inline CodeReport verify(const MetricCode& code, double cos_theta) {
  const auto& dist = code.space.distance;
  detail::require_finite(dist, "metric distance matrix");
  detail::require_finite(code.functions, "metric code functions");
  detail::require_finite_scalar(cos_theta, "cos_theta");
  const auto npts = static_cast<Eigen::Index>(code.space.size());
  if (dist.cols() != npts) throw StructuralError("distance matrix must be square");
  if (code.space.base >= code.space.size() && npts > 0) throw StructuralError("base point index out of range");
  if (code.functions.rows() != static_cast<Eigen::Index>(code.size()) ||
      (code.size() > 0 && code.functions.cols() != npts)) {
    throw StructuralError("metric code needs one value table (over all points) per selected point");
  }
  for (std::size_t idx : code.point_indices) {
    if (idx >= code.space.size()) throw StructuralError("point index " + std::to_string(idx) + " out of range");
  }

  CodeReport rep;
  rep.size = code.size();
  {
    detail::FailureLog log(rep.axiom_failures);
    for (Eigen::Index x = 0; x < npts; ++x) {
      if (std::abs(dist(x, x)) > kMetricTol) log.add("metric: m(" + std::to_string(x) + "," + std::to_string(x) + ") != 0");
      for (Eigen::Index y = x + 1; y < npts; ++y) {
        if (std::abs(dist(x, y) - dist(y, x)) > kMetricTol) {
          log.add("metric: asymmetric at (" + std::to_string(x) + "," + std::to_string(y) + ")");
        }
        if (dist(x, y) <= 0.0) log.add("metric: distinct points " + std::to_string(x) + "," + std::to_string(y) + " at distance 0");
      }
    }
    for (Eigen::Index x = 0; x < npts; ++x) {
      for (Eigen::Index y = 0; y < npts; ++y) {
        for (Eigen::Index z = 0; z < npts; ++z) {
          if (dist(x, z) > dist(x, y) + dist(y, z) + kMetricTol) {
            log.add("metric: triangle inequality fails for (" + std::to_string(x) + "," + std::to_string(y) + "," +
                    std::to_string(z) + ")");
          }
        }
      }
    }
    const auto base = static_cast<Eigen::Index>(code.space.base);
    for (std::size_t j = 0; j < code.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const auto tau = static_cast<Eigen::Index>(code.point_indices[j]);
      const std::string idx = std::to_string(j);
      if (std::abs(code.functions(jj, base)) > kUnitTol) log.add("Lip0: f_" + idx + "(0) != 0");
      const double lip = lipschitz_norm(dist, code.functions.row(jj));
      if (std::abs(lip - 1.0) > kLipschitzTol) log.add("axiom (i): ||f_" + idx + "||_Lip0 = " + detail::fmt(lip) + " != 1");
      if (std::abs(dist(tau, base) - 1.0) > kUnitTol) {
        log.add("axiom (ii): m(tau_" + idx + ", 0) = " + detail::fmt(dist(tau, base)) + " != 1");
      }
      if (std::abs(code.functions(jj, tau) - 1.0) > kUnitTol) {
        log.add("axiom (iii): f_" + idx + "(tau_" + idx + ") = " + detail::fmt(code.functions(jj, tau)) + " != 1");
      }
    }
    detail::scan_offdiag(evaluation_matrix(code), cos_theta, rep, log);
  }
  // Distinctness of the tau_j is not an axiom.
  std::vector<std::size_t> sorted = code.point_indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    rep.warnings.push_back("selected points tau_j are not distinct");
  }
  rep.valid = rep.axiom_failures.empty();
  return rep;
}

inline CodeReport verify(const Code& code, double cos_theta) {
  return std::visit([&](const auto& c) { return verify(c, cos_theta); }, code);
}

/// Checks the code against its own declared cos_theta.
inline CodeReport verify(const Code& code) { return verify(code, declared_cos_theta(code)); }

/// The unique unit functional f with f(x) = ||x||_p = 1, for 1 < p < inf:
/// f_i = sign(x_i) |x_i|^(p-1).
inline Eigen::VectorXd norming_functional(const Eigen::VectorXd& x, double p) {
  if (!(p > 1.0) || std::isinf(p)) {
    throw DomainError("non-smooth norm: supply the functional explicitly (norming functionals are not unique for p = 1 or p = inf)");
  }
  detail::require_finite(x, "vector");
  const double norm = lp_norm(x, p);
  if (std::abs(norm - 1.0) > kUnitTol) throw DomainError("norming_functional expects ||x||_p = 1, got " + detail::fmt(norm));
  if (p == 2.0) return x;
  Eigen::VectorXd f(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x(i));
    f(i) = a == 0.0 ? 0.0 : std::copysign(std::pow(a, p - 1.0), x(i));
  }
  return f;
}

/// The l_2 functional code with f_j = tau_j (Riesz).
inline FunctionalCode euclidean_to_functional(const SphericalCode& code) {
  const CodeReport rep = verify(code, code.cos_theta);
  if (!rep.valid) throw PreconditionError("euclidean_to_functional needs a valid spherical code: " + rep.axiom_failures.front());
  return FunctionalCode{LpSpace{2.0, code.dim}, code.vectors, code.vectors, code.cos_theta};
}

/// Metric code on {0} u {tau_j} u witnesses with Euclidean distances and
/// f_j(x) = <x, tau_j>. Space point 0 is the origin, point j + 1 is tau_j.
inline MetricCode embed_as_metric_code(const SphericalCode& code, const Eigen::MatrixXd& witnesses = Eigen::MatrixXd()) {
  const CodeReport rep = verify(code, code.cos_theta);
  if (!rep.valid) throw PreconditionError("embed_as_metric_code needs a valid spherical code: " + rep.axiom_failures.front());
  if (witnesses.rows() > 0 && witnesses.cols() != code.dim) throw StructuralError("witness points must lie in R^dim");
  const auto n = static_cast<Eigen::Index>(code.size());
  const Eigen::Index npts = 1 + n + witnesses.rows();
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(npts, code.dim);
  if (n > 0) pts.middleRows(1, n) = code.vectors;
  if (witnesses.rows() > 0) pts.bottomRows(witnesses.rows()) = witnesses;

  MetricCode out;
  out.cos_theta = code.cos_theta;
  out.space.base = 0;
  out.space.distance.resize(npts, npts);
  for (Eigen::Index x = 0; x < npts; ++x) {
    out.space.distance(x, x) = 0.0;
    for (Eigen::Index y = x + 1; y < npts; ++y) {
      const double d = (pts.row(x) - pts.row(y)).norm();
      out.space.distance(x, y) = d;
      out.space.distance(y, x) = d;
    }
  }
  out.functions = code.vectors * pts.transpose();
  for (Eigen::Index j = 0; j < n; ++j) {
    out.point_indices.push_back(static_cast<std::size_t>(j + 1));
    const double lip = lipschitz_norm(out.space.distance, out.functions.row(j));
    if (lip < 1.0 - kLipschitzTol) {
      throw DomainError("Lipschitz norm of f_" + std::to_string(j) + " on the finite point set is " + detail::fmt(lip) +
                        " < 1: add witness points");
    }
  }
  return out;
}

inline const std::vector<std::string>& code_families() {
  static const std::vector<std::string> names{"simplex", "orthonormal", "cross_polytope", "icosahedron", "d4_roots", "e8_roots"};
  return names;
}

namespace detail {

inline SphericalCode normalized(int dim, std::vector<Eigen::VectorXd> vs, double cos_theta) {
  SphericalCode c;
  c.dim = dim;
  c.cos_theta = cos_theta;
  c.vectors.resize(static_cast<Eigen::Index>(vs.size()), dim);
  for (std::size_t i = 0; i < vs.size(); ++i) c.vectors.row(static_cast<Eigen::Index>(i)) = vs[i].normalized().transpose();
  return c;
}

// All vectors with exactly two nonzero entries, each +-1.
inline std::vector<Eigen::VectorXd> two_sparse_signs(int dim) {
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      for (int si : {1, -1}) {
        for (int sj : {1, -1}) {
          Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
          v(i) = si;
          v(j) = sj;
          out.push_back(v);
        }
      }
    }
  }
  return out;
}

}  // namespace detail

/// Catalog codes at their canonical cos_theta. `dim` is used by the
/// dimension-parameterized families (simplex, orthonormal, cross_polytope).
inline SphericalCode generate(std::string_view family, int dim = 0) {
  std::string name(family);
  std::replace(name.begin(), name.end(), '-', '_');
  auto need_dim = [&] {
    if (dim < 1) throw DomainError("family " + name + " needs --dim >= 1");
  };
  if (name == "simplex") {
    need_dim();
    // e_1..e_d plus t(1,..,1) with t chosen so all pairwise distances are sqrt(2); then center.
    const double t = (1.0 - std::sqrt(dim + 1.0)) / dim;
    std::vector<Eigen::VectorXd> vs;
    for (int i = 0; i < dim; ++i) vs.push_back(Eigen::VectorXd::Unit(dim, i));
    vs.push_back(Eigen::VectorXd::Constant(dim, t));
    Eigen::VectorXd center = Eigen::VectorXd::Constant(dim, (1.0 + t) / (dim + 1.0));
    for (auto& v : vs) v -= center;
    return detail::normalized(dim, std::move(vs), -1.0 / dim);
  }
  if (name == "orthonormal") {
    need_dim();
    SphericalCode c;
    c.dim = dim;
    c.vectors = Eigen::MatrixXd::Identity(dim, dim);
    c.cos_theta = 0.0;
    return c;
  }
  if (name == "cross_polytope") {
    need_dim();
    std::vector<Eigen::VectorXd> vs;
    for (int i = 0; i < dim; ++i) {
      vs.push_back(Eigen::VectorXd::Unit(dim, i));
      vs.push_back(-Eigen::VectorXd::Unit(dim, i));
    }
    return detail::normalized(dim, std::move(vs), 0.0);
  }
  if (name == "icosahedron") {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::VectorXd> vs;
    for (double s1 : {1.0, -1.0}) {
      for (double s2 : {phi, -phi}) {
        vs.push_back(Eigen::Vector3d(0.0, s1, s2));
        vs.push_back(Eigen::Vector3d(s1, s2, 0.0));
        vs.push_back(Eigen::Vector3d(s2, 0.0, s1));
      }
    }
    return detail::normalized(3, std::move(vs), 1.0 / std::sqrt(5.0));
  }
  if (name == "d4_roots") {
    return detail::normalized(4, detail::two_sparse_signs(4), 0.5);
  }
  if (name == "e8_roots") {
    auto vs = detail::two_sparse_signs(8);
    for (int mask = 0; mask < 256; ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) % 2 != 0) continue;
      Eigen::VectorXd v(8);
      for (int i = 0; i < 8; ++i) v(i) = (mask >> i) & 1 ? -0.5 : 0.5;
      vs.push_back(v);
    }
    return detail::normalized(8, std::move(vs), 0.5);
  }
  throw DomainError("unknown code family '" + std::string(family) + "'");
}

/// n random unit points in l_p^dim with their norming functionals; cos_theta
/// is set to the code's coherence, so the result is always valid.
inline FunctionalCode random_lp_code(double p, int dim, int n, std::uint64_t seed) {
  if (dim < 1 || n < 1) throw DomainError("random_lp_code needs dim >= 1 and n >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  FunctionalCode code;
  code.space = LpSpace{p, dim};
  code.points.resize(n, dim);
  code.functionals.resize(n, dim);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x(i) = normal(rng);
    x /= lp_norm(x, p);
    code.points.row(j) = x.transpose();
    code.functionals.row(j) = norming_functional(x, p).transpose();
  }
  const Eigen::MatrixXd m = code.functionals * code.points.transpose();
  double coherence = -1.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j != k) coherence = std::max(coherence, m(j, k));
    }
  }
  code.cos_theta = coherence;
  return code;
}

}  // namespace codebound

#endif  // CODEBOUND_CODES_HPP
