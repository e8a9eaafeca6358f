#ifndef CODEBOUND_TOOLS_CLI_HPP
#define CODEBOUND_TOOLS_CLI_HPP

// Command-line front end. Exit codes: 0 success / verified, 1 unverified,
// invalid or inapplicable, 2 usage or input error.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "codebound/codes.hpp"
#include "codebound/dgs_bound.hpp"
#include "codebound/gegenbauer.hpp"
#include "codebound/pfender_bound.hpp"
#include "codebound/serialization.hpp"

namespace codebound::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Shortest decimal form that reads back to the same double.
inline std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Human-facing summary value: 12 significant digits.
inline std::string summary(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

/// Degrees to cosine, rounded to 15 decimal places so that e.g. 60 degrees gives exactly 0.5.
inline double cos_from_degrees(double degrees) {
  const double c = std::cos(degrees * std::numbers::pi / 180.0);
  return std::round(c * 1e15) / 1e15;
}

struct RunConfig {
  int dim = 0;
  int degree = 0;
  int grid = 2000;
  double at = 0.0;
  std::vector<double> coeffs;
  std::vector<int> degrees;
  unsigned threads = 1;
  double cos_theta = 0.0;
  double theta_degrees = 0.0;
  double c = 0.0;
  double p = 2.0;
  int n = 0;
  std::uint64_t seed = kDefaultSeed;
  bool finite_set = false;
  std::string family;
  std::string as = "spherical";
  std::string in_path;
  std::string out_path;
  std::string phi_path;
  std::string code_path;
  std::string cert_path;
};

namespace detail {

inline void add_angle(CLI::App* sub, RunConfig& cfg) {
  auto* ct = sub->add_option("--cos-theta", cfg.cos_theta, "cosine of the minimal angle");
  auto* td = sub->add_option("--theta-degrees", cfg.theta_degrees, "angle in degrees (cosine rounded to 1e-15)");
  ct->excludes(td);
  td->excludes(ct);
}

inline bool angle_given(CLI::App* sub) { return sub->count("--cos-theta") + sub->count("--theta-degrees") > 0; }

inline void resolve_angle(CLI::App* sub, RunConfig& cfg, bool required) {
  if (required && !angle_given(sub)) throw CLI::RequiredError("--cos-theta or --theta-degrees");
  if (sub->count("--theta-degrees") > 0) cfg.cos_theta = cos_from_degrees(cfg.theta_degrees);
}

inline Code load_code(const std::string& path) { return code_from_json(read_json_file(path)); }

inline void print_report(std::ostream& out, const CodeReport& rep) {
  out << "valid=" << (rep.valid ? "yes" : "no") << " n=" << rep.size << " max_offdiag=" << shortest(rep.max_offdiag);
  if (rep.size > 1) out << " worst_pair=(" << rep.worst_pair.first << "," << rep.worst_pair.second << ")";
  out << '\n';
  for (const auto& f : rep.axiom_failures) out << "  failed " << f << '\n';
  for (const auto& w : rep.warnings) out << "  warning: " << w << '\n';
}

inline double snap_zero(double v, double scale) { return std::abs(v) <= 1e-12 * std::max(1.0, std::abs(scale)) ? 0.0 : v; }

inline int cmd_gegenbauer_eval(const RunConfig& cfg, std::ostream& out) {
  out << shortest(gegenbauer_eval(cfg.dim, cfg.degree, cfg.at)) << '\n';
  return 0;
}

inline int cmd_gegenbauer_expand(const RunConfig& cfg, std::ostream& out) {
  const GegenbauerPoly p = expand_in_basis(cfg.coeffs, cfg.dim);
  out << "k a_k\n";
  for (std::size_t k = 0; k < p.coeffs().size(); ++k) out << k << ' ' << shortest(p.coeffs()[k]) << '\n';
  return 0;
}

inline int cmd_bound_lp(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const DGSResult r = lp_bound(cfg.dim, cfg.cos_theta, cfg.degree, cfg.grid);
  if (r.status == BoundStatus::kNoCertificate) {
    out << r.message << '\n';
    return 1;
  }
  if (r.status == BoundStatus::kNumericalFailure) {
    err << "error: " << r.message << '\n';
    return 2;
  }
  const auto& cert = *r.certificate;
  if (!cfg.out_path.empty()) write_json_file(cfg.out_path, to_json(cert));
  out << "bound_real=" << shortest(cert.bound_real) << " bound_int=" << cert.bound_int
      << " verified=" << (cert.verification.passed ? "yes" : "no") << '\n';
  if (!cert.verification.passed) out << cert.verification.reason << '\n';
  return cert.verification.passed ? 0 : 1;
}

inline int cmd_bound_table(const RunConfig& cfg, std::ostream& out) {
  const auto rows = bound_table(cfg.dim, cfg.cos_theta, cfg.degrees, cfg.grid, cfg.threads);
  for (const auto& row : rows) {
    out << "m=" << row.degree << " status=" << to_string(row.status);
    if (row.certificate) out << " bound_real=" << shortest(row.bound_real) << " bound_int=" << row.certificate->bound_int;
    out << '\n';
  }
  return 0;
}

inline PhiSpec load_phi(const std::string& path) {
  const Json j = read_json_file(path);
  if (j.contains("phi")) return phi_from_json(j.at("phi"));
  return phi_from_json(j);
}

inline int cmd_bound_pfender(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const PhiSpec phi = load_phi(cfg.phi_path);
  if (cfg.code_path.empty()) {
    if (cfg.finite_set) {
      err << "error: --finite-set needs --code\n";
      return 2;
    }
    const PfenderCertificate cert = pfender_bound(phi, cfg.c, cfg.cos_theta);
    if (!cfg.out_path.empty()) write_json_file(cfg.out_path, to_json(cert));
    out << "bound_real=" << summary(cert.bound_real) << " bound_int=" << cert.bound_int
        << " verified=" << (cert.verification.verified ? "yes" : "no") << '\n';
    if (!cert.verification.verified) out << cert.verification.reason << '\n';
    return cert.verification.verified ? 0 : 1;
  }
  const Code code = load_code(cfg.code_path);
  const auto variant = cfg.finite_set ? PfenderVariant::kFiniteSet : PfenderVariant::kInterval;
  const FunctionalCheck chk = functional_pfender_check(code, phi, cfg.c, cfg.cos_theta, variant);
  if (!cfg.out_path.empty()) write_json_file(cfg.out_path, to_json(chk.certificate));
  const bool ok = chk.verdict == TheoremVerdict::kHolds;
  out << "bound_real=" << summary(chk.certificate.bound_real) << " bound_int=" << chk.certificate.bound_int
      << " verified=" << (ok ? "yes" : "no") << '\n';
  if (!ok) out << chk.message << '\n';
  return ok ? 0 : 1;
}

inline int cmd_code_gen(const RunConfig& cfg, std::ostream& out) {
  Json j;
  std::string name = cfg.family;
  std::replace(name.begin(), name.end(), '-', '_');
  if (name == "random_lp") {
    if (cfg.n < 1) throw DomainError("random_lp needs --n >= 1");
    j = to_json(random_lp_code(cfg.p, cfg.dim, cfg.n, cfg.seed));
  } else {
    const SphericalCode code = generate(cfg.family, cfg.dim);
    if (cfg.as == "functional") {
      j = to_json(euclidean_to_functional(code));
    } else if (cfg.as == "metric") {
      j = to_json(embed_as_metric_code(code));
    } else {
      j = to_json(code);
    }
  }
  if (cfg.out_path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    write_json_file(cfg.out_path, j);
    const Code c = code_from_json(j);
    out << "wrote " << cfg.out_path << " n=" << code_size(c) << " cos_theta=" << shortest(declared_cos_theta(c)) << '\n';
  }
  return 0;
}

inline int cmd_code_verify(CLI::App* sub, RunConfig& cfg, std::ostream& out) {
  const Code code = load_code(cfg.in_path);
  const double cos_theta = angle_given(sub) ? cfg.cos_theta : declared_cos_theta(code);
  const CodeReport rep = verify(code, cos_theta);
  print_report(out, rep);
  return rep.valid ? 0 : 1;
}

inline int cmd_code_check_theorem(const RunConfig& cfg, std::ostream& out) {
  const Code code = load_code(cfg.in_path);
  const Json cj = read_json_file(cfg.cert_path);
  const auto kind = cj.value("kind", std::string{});
  PhiSpec phi = PhiSpec::monomial({0.0});
  double c = 0.0;
  double cos_theta = 0.0;
  PfenderVariant variant = PfenderVariant::kInterval;
  if (kind == "dgs") {
    const PfenderCertificate pc = pfender_from_dgs(dgs_certificate_from_json(cj));
    phi = pc.phi;
    c = pc.c;
    cos_theta = pc.cos_theta;
  } else {
    const PfenderClaim claim = pfender_claim_from_json(cj);
    phi = claim.phi;
    c = claim.c;
    cos_theta = claim.cos_theta;
    variant = claim.variant;
  }
  const CodeReport rep = verify(code, cos_theta);
  if (!rep.valid) {
    out << "code invalid at cos_theta=" << shortest(cos_theta) << '\n';
    print_report(out, rep);
    return 1;
  }
  const FunctionalCheck chk = functional_pfender_check(code, phi, c, cos_theta, variant);
  const double bound = chk.certificate.bound_real;
  out << "n=" << chk.n << " bound=" << summary(bound) << " slack=" << summary(snap_zero(chk.slack, bound)) << '\n';
  out << "verdict=" << to_string(chk.verdict) << ": " << chk.message << '\n';
  return chk.verdict == TheoremVerdict::kHolds ? 0 : 1;
}

}  // namespace detail

/// Runs one command line (args excludes the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"codebound: linear programming and Pfender bounds for spherical, functional and metric codes"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::function<int()> action;

  auto* geg = app.add_subcommand("gegenbauer", "Gegenbauer polynomial utilities");
  geg->require_subcommand(1);
  auto* geval = geg->add_subcommand("eval", "evaluate G_k^{(dim)}(r)");
  geval->add_option("--dim", cfg.dim)->required();
  geval->add_option("--degree", cfg.degree)->required();
  geval->add_option("--at", cfg.at)->required();
  geval->callback([&] { action = [&] { return detail::cmd_gegenbauer_eval(cfg, out); }; });
  auto* gexp = geg->add_subcommand("expand", "expand sum_j b_j r^j in the Gegenbauer basis");
  gexp->add_option("--dim", cfg.dim)->required();
  gexp->add_option("--coeffs", cfg.coeffs, "monomial coefficients b_0,b_1,...")->required()->delimiter(',');
  gexp->callback([&] { action = [&] { return detail::cmd_gegenbauer_expand(cfg, out); }; });

  auto* bound = app.add_subcommand("bound", "compute bound certificates");
  bound->require_subcommand(1);
  auto* blp = bound->add_subcommand("lp", "linear programming bound for spherical codes");
  blp->add_option("--dim", cfg.dim)->required();
  detail::add_angle(blp, cfg);
  blp->add_option("--degree", cfg.degree)->required();
  blp->add_option("--grid", cfg.grid, "number of Chebyshev grid points")->capture_default_str();
  blp->add_option("--out", cfg.out_path, "certificate JSON output");
  blp->callback([&, blp] {
    detail::resolve_angle(blp, cfg, true);
    action = [&] { return detail::cmd_bound_lp(cfg, out, err); };
  });
  auto* btab = bound->add_subcommand("table", "linear programming bound for several degrees");
  btab->add_option("--dim", cfg.dim)->required();
  detail::add_angle(btab, cfg);
  btab->add_option("--degrees", cfg.degrees)->required()->delimiter(',');
  btab->add_option("--grid", cfg.grid)->capture_default_str();
  btab->add_option("--threads", cfg.threads, "worker threads for the sweep")->capture_default_str();
  btab->callback([&, btab] {
    detail::resolve_angle(btab, cfg, true);
    action = [&] { return detail::cmd_bound_table(cfg, out); };
  });
  auto* bpf = bound->add_subcommand("pfender", "check a Pfender certificate");
  bpf->add_option("--phi", cfg.phi_path, "phi JSON (or a pfender certificate)")->required();
  bpf->add_option("--c", cfg.c)->required();
  detail::add_angle(bpf, cfg);
  bpf->add_flag("--finite-set", cfg.finite_set, "check condition (ii) only at the code's off-diagonal values");
  bpf->add_option("--code", cfg.code_path, "check against this code instead of structurally");
  bpf->add_option("--out", cfg.out_path);
  bpf->callback([&, bpf] {
    detail::resolve_angle(bpf, cfg, true);
    action = [&] { return detail::cmd_bound_pfender(cfg, out, err); };
  });

  auto* code = app.add_subcommand("code", "generate and verify codes");
  code->require_subcommand(1);
  auto* cgen = code->add_subcommand("gen", "generate a catalog code");
  cgen->add_option("--family", cfg.family, "simplex | orthonormal | cross_polytope | icosahedron | d4_roots | e8_roots | random_lp")
      ->required();
  cgen->add_option("--dim", cfg.dim);
  cgen->add_option("--as", cfg.as, "spherical | functional | metric")
      ->check(CLI::IsMember({"spherical", "functional", "metric"}));
  cgen->add_option("--p", cfg.p, "l_p exponent (random_lp)");
  cgen->add_option("--n", cfg.n, "number of points (random_lp)");
  cgen->add_option("--seed", cfg.seed, "random seed (random_lp)")->capture_default_str();
  cgen->add_option("--out", cfg.out_path);
  cgen->callback([&] { action = [&] { return detail::cmd_code_gen(cfg, out); }; });
  auto* cver = code->add_subcommand("verify", "check the code axioms");
  cver->add_option("--file", cfg.in_path)->required();
  detail::add_angle(cver, cfg);
  cver->callback([&, cver] {
    detail::resolve_angle(cver, cfg, false);
    action = [&, cver] { return detail::cmd_code_verify(cver, cfg, out); };
  });
  auto* cthm = code->add_subcommand("check-theorem", "check n <= (phi(1) + c) / c for a code and certificate");
  cthm->add_option("--file", cfg.in_path)->required();
  cthm->add_option("--cert", cfg.cert_path)->required();
  cthm->callback([&] { action = [&] { return detail::cmd_code_check_theorem(cfg, out); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
  if (!action) {
    err << "usage error: no command\n";
    return 2;
  }
  try {
    return action();
  } catch (const PreconditionError& e) {
    err << "precondition failed: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace codebound::cli

#endif  // CODEBOUND_TOOLS_CLI_HPP
