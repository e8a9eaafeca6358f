#ifndef CODEBOUND_PFENDER_BOUND_HPP
#define CODEBOUND_PFENDER_BOUND_HPP

// Bound n <= (phi(1) + c) / c from any phi with a nonnegative code double
// sum and phi + c <= 0 on the angle range. Works for spherical, functional
// and metric codes; for the latter two only per-code checks of the double
// sum are available.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "codebound/codes.hpp"
#include "codebound/dgs_bound.hpp"
#include "codebound/errors.hpp"
#include "codebound/gegenbauer.hpp"
#include "codebound/interval_max.hpp"

namespace codebound {

inline constexpr double kPfenderConditionTol = 1e-9;
inline constexpr double kTheoremTol = 1e-9;
inline constexpr std::size_t kPfenderScanCells = 20000;

/// Piecewise-linear interpolant through (nodes[i], values[i]) covering [-1, 1].
struct PiecewiseLinear {
  std::vector<double> nodes;
  std::vector<double> values;

  PiecewiseLinear(std::vector<double> x, std::vector<double> y) : nodes(std::move(x)), values(std::move(y)) {
    if (nodes.size() != values.size() || nodes.size() < 2) {
      throw StructuralError("table phi needs matching node/value lists with at least two entries");
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!std::isfinite(nodes[i]) || !std::isfinite(values[i])) throw StructuralError("table phi has non-finite entries");
      if (i > 0 && !(nodes[i] > nodes[i - 1])) throw StructuralError("table phi nodes must be strictly increasing");
    }
    if (nodes.front() != -1.0 || nodes.back() != 1.0) throw DomainError("table phi nodes must span exactly [-1, 1]");
  }

  double operator()(double r) const {
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), r);
    if (it == nodes.begin()) return values.front();
    if (it == nodes.end()) return values.back();
    const auto i = static_cast<std::size_t>(it - nodes.begin());
    const double t = (r - nodes[i - 1]) / (nodes[i] - nodes[i - 1]);
    return values[i - 1] + t * (values[i] - values[i - 1]);
  }

  double max_spacing() const {
    double s = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i) s = std::max(s, nodes[i] - nodes[i - 1]);
    return s;
  }
};

/// The function phi: [-1, 1] -> R in one of three representations. A
/// dimension tag lets monomial phi be expanded in the Gegenbauer basis.
class PhiSpec {
 public:
  using Representation = std::variant<GegenbauerPoly, MonomialPoly, PiecewiseLinear>;

  static PhiSpec gegenbauer(int dim, std::vector<double> coeffs) {
    return PhiSpec(GegenbauerPoly(dim, std::move(coeffs)), dim);
  }
  static PhiSpec monomial(std::vector<double> coeffs, std::optional<int> dim = std::nullopt) {
    for (double v : coeffs) {
      if (!std::isfinite(v)) throw StructuralError("monomial phi has non-finite coefficients");
    }
    if (dim) detail::require_dim(*dim);
    return PhiSpec(MonomialPoly(std::move(coeffs)), dim);
  }
  static PhiSpec table(std::vector<double> nodes, std::vector<double> values) {
    return PhiSpec(PiecewiseLinear(std::move(nodes), std::move(values)), std::nullopt);
  }

  double operator()(double r) const {
    detail::require_unit_interval(r);
    return std::visit([r](const auto& f) { return static_cast<double>(f(r)); }, rep_);
  }

  double phi_at_1() const { return phi_at_1_; }
  const Representation& representation() const { return rep_; }
  std::optional<int> dim() const { return dim_; }

  const char* basis_name() const {
    switch (rep_.index()) {
      case 0: return "gegenbauer";
      case 1: return "monomial";
      default: return "table";
    }
  }

  /// Gegenbauer coefficients when phi is a polynomial with a dimension tag.
  std::optional<GegenbauerPoly> gegenbauer_form() const {
    if (const auto* g = std::get_if<GegenbauerPoly>(&rep_)) return *g;
    if (const auto* m = std::get_if<MonomialPoly>(&rep_); m && dim_) return expand_in_basis(*m, *dim_);
    return std::nullopt;
  }

  PhiSpec scaled(double lambda) const {
    struct Visitor {
      double lambda;
      std::optional<int> dim;
      PhiSpec operator()(const GegenbauerPoly& g) const {
        auto c = g.coeffs();
        for (auto& v : c) v *= lambda;
        return PhiSpec::gegenbauer(g.dim(), std::move(c));
      }
      PhiSpec operator()(const MonomialPoly& m) const {
        auto c = m.coeffs;
        for (auto& v : c) v *= lambda;
        return PhiSpec::monomial(std::move(c), dim);
      }
      PhiSpec operator()(const PiecewiseLinear& t) const {
        auto v = t.values;
        for (auto& x : v) x *= lambda;
        return PhiSpec::table(t.nodes, std::move(v));
      }
    };
    return std::visit(Visitor{lambda, dim_}, rep_);
  }

 private:
  PhiSpec(Representation rep, std::optional<int> dim) : rep_(std::move(rep)), dim_(dim) {
    phi_at_1_ = std::visit([](const auto& f) { return static_cast<double>(f(1.0)); }, rep_);
  }

  Representation rep_;
  std::optional<int> dim_;
  double phi_at_1_ = 0.0;
};

enum class PfenderMode { kStructural, kPerCode, kFiniteSet };
enum class PfenderVariant { kInterval, kFiniteSet };

inline const char* to_string(PfenderMode m) {
  switch (m) {
    case PfenderMode::kStructural: return "structural";
    case PfenderMode::kPerCode: return "per_code";
    case PfenderMode::kFiniteSet: return "finite_set";
  }
  return "?";
}

inline const char* to_string(PfenderVariant v) { return v == PfenderVariant::kInterval ? "interval" : "finite_set"; }

struct PfenderReport {
  bool verified = false;
  std::string reason;
  bool condition_i_established = false;
  std::string condition_i_evidence;
  bool condition_ii_holds = false;
  double condition_ii_worst_margin = -std::numeric_limits<double>::infinity();  // max of phi + c
  double condition_ii_worst_location = 0.0;
  bool special_case_applies = false;  // phi(1) + c <= 1
  long long special_case_limit = 0;   // floor(1/c)
  double table_max_spacing = 0.0;     // table phi only
};

struct PfenderCertificate {
  PhiSpec phi = PhiSpec::monomial({0.0});
  double c = 1.0;
  double cos_theta = 0.0;
  PfenderMode mode = PfenderMode::kStructural;
  PfenderVariant variant = PfenderVariant::kInterval;
  double bound_real = 0.0;
  long long bound_int = 0;
  PfenderReport verification;
};

namespace detail {

inline void require_positive_c(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("c must be a finite positive number");
}

// max of phi + c on [-1, cos_theta]; table phi are also checked exactly at their nodes.
inline LocalMax condition_ii_interval(const PhiSpec& phi, double c, double cos_theta) {
  const double hi = std::clamp(cos_theta, -1.0, 1.0);
  const auto scan = maximize_on_interval([&](double r) { return phi(r) + c; }, -1.0, hi, kPfenderScanCells);
  LocalMax worst{scan.argmax, scan.max_value};
  if (const auto* t = std::get_if<PiecewiseLinear>(&phi.representation())) {
    for (std::size_t i = 0; i < t->nodes.size() && t->nodes[i] <= hi; ++i) {
      const double v = t->values[i] + c;
      if (v > worst.value) worst = {t->nodes[i], v};
    }
  }
  return worst;
}

inline void fill_bound(PfenderCertificate& cert) {
  const double top = cert.phi.phi_at_1() + cert.c;
  cert.bound_real = top / cert.c;
  cert.bound_int = floor_bound(cert.bound_real);
  auto& rep = cert.verification;
  rep.special_case_applies = top <= 1.0;
  rep.special_case_limit = static_cast<long long>(std::floor(1.0 / cert.c + kBoundIntSlack));
  if (const auto* t = std::get_if<PiecewiseLinear>(&cert.phi.representation())) rep.table_max_spacing = t->max_spacing();
}

}  // namespace detail

/// Structural certificate: condition (i) from nonnegative Gegenbauer
/// coefficients (valid for every spherical code of the tagged dimension),
/// condition (ii) by a refined scan of [-1, cos_theta].
inline PfenderCertificate pfender_bound(const PhiSpec& phi, double c, double cos_theta) {
  detail::require_positive_c(c);
  if (!(cos_theta >= -1.0 && cos_theta <= 1.0)) throw DomainError("cos_theta must lie in [-1, 1]");
  PfenderCertificate cert;
  cert.phi = phi;
  cert.c = c;
  cert.cos_theta = cos_theta;
  cert.mode = PfenderMode::kStructural;
  cert.variant = PfenderVariant::kInterval;
  detail::fill_bound(cert);

  auto& rep = cert.verification;
  const LocalMax worst = detail::condition_ii_interval(phi, c, cos_theta);
  rep.condition_ii_worst_margin = worst.value;
  rep.condition_ii_worst_location = worst.location;
  rep.condition_ii_holds = worst.value <= kPfenderConditionTol;

  if (const auto g = phi.gegenbauer_form()) {
    const auto& a = g->coeffs();
    const auto it = std::min_element(a.begin(), a.end());
    if (it != a.end() && *it < -kCoefficientTol) {
      rep.condition_i_evidence = "negative Gegenbauer coefficient a_" + std::to_string(it - a.begin()) + " = " + detail::fmt(*it);
    } else {
      rep.condition_i_established = true;
      rep.condition_i_evidence = "nonnegative Gegenbauer coefficients in dimension " + std::to_string(g->dim());
    }
  } else {
    rep.condition_i_evidence = "phi has no Gegenbauer expansion (needs a polynomial with a dimension tag)";
  }

  if (!rep.condition_ii_holds) {
    rep.reason = "not a certificate: phi + c = " + detail::fmt(worst.value) + " > 0 at r = " + detail::fmt(worst.location);
  } else if (!rep.condition_i_established) {
    rep.reason = "condition (i) not established: " + rep.condition_i_evidence;
  }
  rep.verified = rep.reason.empty();
  return cert;
}

/// sum over all (j, k), diagonal included, of phi(M(j, k)).
inline double double_sum(const PhiSpec& phi, const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw StructuralError("evaluation matrix must be square");
  long double s = 0.0L;
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      const double v = m(j, k);
      if (!(std::abs(v) <= 1.0 + 1e-12)) {
        throw DomainError("evaluation matrix entry (" + std::to_string(j) + "," + std::to_string(k) + ") = " +
                          detail::fmt(v) + " lies outside [-1, 1]");
      }
      s += phi(std::clamp(v, -1.0, 1.0));
    }
  }
  return static_cast<double>(s);
}

enum class TheoremVerdict { kHolds, kNotApplicable, kViolation };

inline const char* to_string(TheoremVerdict v) {
  switch (v) {
    case TheoremVerdict::kHolds: return "holds";
    case TheoremVerdict::kNotApplicable: return "not applicable";
    case TheoremVerdict::kViolation: return "VIOLATION";
  }
  return "?";
}

struct FunctionalCheck {
  PfenderCertificate certificate;
  TheoremVerdict verdict = TheoremVerdict::kNotApplicable;
  std::size_t n = 0;
  double double_sum = 0.0;
  double slack = 0.0;  // bound_real - n
  std::string message;
};

/// Per-code check of both hypotheses, then of the conclusion n <= bound.
/// The interval variant checks phi + c <= 0 on [-1, cos_theta]; the
/// finite-set variant only at the off-diagonal values f_j(tau_k).
inline FunctionalCheck functional_pfender_check(const Code& code, const PhiSpec& phi, double c, double cos_theta,
                                                PfenderVariant variant) {
  detail::require_positive_c(c);
  const CodeReport code_rep = verify(code, cos_theta);
  if (!code_rep.valid) {
    throw PreconditionError("code is not valid at cos_theta = " + detail::fmt(cos_theta) + ": " + code_rep.axiom_failures.front());
  }
  FunctionalCheck out;
  auto& cert = out.certificate;
  cert.phi = phi;
  cert.c = c;
  cert.cos_theta = cos_theta;
  cert.variant = variant;
  cert.mode = variant == PfenderVariant::kInterval ? PfenderMode::kPerCode : PfenderMode::kFiniteSet;
  detail::fill_bound(cert);
  auto& rep = cert.verification;

  const Eigen::MatrixXd m = evaluation_matrix(code);
  out.n = static_cast<std::size_t>(m.rows());
  const double nn = static_cast<double>(out.n);
  out.double_sum = double_sum(phi, m);
  rep.condition_i_established = out.double_sum >= -1e-9 * nn * nn;
  rep.condition_i_evidence = "code double sum = " + detail::fmt(out.double_sum);

  if (variant == PfenderVariant::kInterval) {
    const LocalMax worst = detail::condition_ii_interval(phi, c, cos_theta);
    rep.condition_ii_worst_margin = worst.value;
    rep.condition_ii_worst_location = worst.location;
  } else {
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
      for (Eigen::Index k = 0; k < m.cols(); ++k) {
        if (j == k) continue;
        const double r = std::clamp(m(j, k), -1.0, 1.0);
        const double v = phi(r) + c;
        if (v > rep.condition_ii_worst_margin) {
          rep.condition_ii_worst_margin = v;
          rep.condition_ii_worst_location = r;
        }
      }
    }
  }
  rep.condition_ii_holds = rep.condition_ii_worst_margin <= kPfenderConditionTol;

  if (!rep.condition_i_established) {
    rep.reason = "certificate not applicable to this code: double sum " + detail::fmt(out.double_sum) + " < 0";
  } else if (!rep.condition_ii_holds) {
    rep.reason = "certificate not applicable to this code: phi + c = " + detail::fmt(rep.condition_ii_worst_margin) +
                 " > 0 at r = " + detail::fmt(rep.condition_ii_worst_location);
  }
  rep.verified = rep.reason.empty();
  out.slack = cert.bound_real - nn;
  if (!rep.verified) {
    out.verdict = TheoremVerdict::kNotApplicable;
    out.message = rep.reason;
  } else if (nn <= cert.bound_real + kTheoremTol) {
    out.verdict = TheoremVerdict::kHolds;
    out.message = "n <= (phi(1) + c) / c";
  } else {
    out.verdict = TheoremVerdict::kViolation;
    out.message = "THEOREM VIOLATION: n = " + std::to_string(out.n) + " exceeds bound " + detail::fmt(cert.bound_real);
  }
  return out;
}

inline FunctionalCheck functional_pfender_check(const Code& code, const PfenderCertificate& cert) {
  return functional_pfender_check(code, cert.phi, cert.c, cert.cos_theta, cert.variant);
}

/// The DGS polynomial read as a Pfender function: phi = P - a_0, c = a_0.
inline PfenderCertificate pfender_from_dgs(const DGSCertificate& dgs) {
  auto coeffs = dgs.poly.coeffs();
  if (coeffs.empty()) throw StructuralError("certificate has no Gegenbauer coefficients");
  const double a0 = coeffs[0];
  coeffs[0] = 0.0;
  return pfender_bound(PhiSpec::gegenbauer(dgs.dim, std::move(coeffs)), a0, dgs.cos_theta);
}

}  // namespace codebound

#endif  // CODEBOUND_PFENDER_BOUND_HPP
