#ifndef CODEBOUND_SERIALIZATION_HPP
#define CODEBOUND_SERIALIZATION_HPP

// JSON forms of codes and certificates. Doubles are written in shortest
// round-trip form, so every value reads back bit-identical.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "codebound/codes.hpp"
#include "codebound/dgs_bound.hpp"
#include "codebound/errors.hpp"
#include "codebound/pfender_bound.hpp"

namespace codebound {

using Json = nlohmann::json;

namespace detail {

inline Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXd matrix_from_json(const Json& j, const char* field) {
  if (!j.is_array()) throw StructuralError(std::string("field '") + field + "' must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw StructuralError(std::string("field '") + field + "' has ragged rows");
    }
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
  }
  return m;
}

template <class T>
T get_field(const Json& j, const char* key) {
  if (!j.contains(key)) throw StructuralError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw StructuralError(std::string("field '") + key + "': " + e.what());
  }
}

inline Json exponent_to_json(double p) { return std::isinf(p) ? Json("inf") : Json(p); }

inline double exponent_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  if (!j.is_number()) throw StructuralError("l_p exponent must be a number or \"inf\"");
  return j.get<double>();
}

}  // namespace detail

// ---- codes ----

inline Json to_json(const SphericalCode& c) {
  return Json{{"kind", "spherical"}, {"dim", c.dim}, {"cos_theta", c.cos_theta}, {"vectors", detail::matrix_to_json(c.vectors)}};
}

inline Json to_json(const FunctionalCode& c) {
  return Json{{"kind", "functional"},
              {"space", {{"type", "lp"}, {"p", detail::exponent_to_json(c.space.p)}, {"dim", c.space.dim}}},
              {"points", detail::matrix_to_json(c.points)},
              {"functionals", detail::matrix_to_json(c.functionals)},
              {"cos_theta", c.cos_theta}};
}

inline Json to_json(const MetricCode& c) {
  return Json{{"kind", "metric"},
              {"distance", detail::matrix_to_json(c.space.distance)},
              {"base", c.space.base},
              {"point_indices", c.point_indices},
              {"functions", detail::matrix_to_json(c.functions)},
              {"cos_theta", c.cos_theta}};
}

inline Json to_json(const Code& c) {
  return std::visit([](const auto& x) { return to_json(x); }, c);
}

inline Code code_from_json(const Json& j) {
  try {
    const auto kind = detail::get_field<std::string>(j, "kind");
    if (kind == "spherical") {
      SphericalCode c;
      c.dim = detail::get_field<int>(j, "dim");
      c.cos_theta = detail::get_field<double>(j, "cos_theta");
      c.vectors = detail::matrix_from_json(j.at("vectors"), "vectors");
      if (c.vectors.rows() == 0) c.vectors.resize(0, c.dim);
      return c;
    }
    if (kind == "functional") {
      FunctionalCode c;
      const Json& space = j.at("space");
      if (detail::get_field<std::string>(space, "type") != "lp") throw StructuralError("only lp spaces are supported");
      c.space.p = detail::exponent_from_json(space.at("p"));
      c.space.dim = detail::get_field<int>(space, "dim");
      c.points = detail::matrix_from_json(j.at("points"), "points");
      c.functionals = detail::matrix_from_json(j.at("functionals"), "functionals");
      c.cos_theta = detail::get_field<double>(j, "cos_theta");
      return c;
    }
    if (kind == "metric") {
      MetricCode c;
      c.space.distance = detail::matrix_from_json(j.at("distance"), "distance");
      c.space.base = detail::get_field<std::size_t>(j, "base");
      if (c.space.base != 0) throw StructuralError("metric codes use base point index 0");
      c.point_indices = detail::get_field<std::vector<std::size_t>>(j, "point_indices");
      c.functions = detail::matrix_from_json(j.at("functions"), "functions");
      c.cos_theta = detail::get_field<double>(j, "cos_theta");
      return c;
    }
    throw StructuralError("unknown code kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw StructuralError(std::string("malformed code JSON: ") + e.what());
  }
}

// ---- certificates ----

inline Json to_json(const DGSVerification& v) {
  return Json{{"passed", v.passed},
              {"reason", v.reason},
              {"grid_size", v.grid_size},
              {"max_violation", v.max_violation},
              {"worst_location", v.worst_location},
              {"refinement_depth", v.refinement_depth},
              {"min_coefficient", v.min_coefficient}};
}

inline Json to_json(const DGSCertificate& c) {
  return Json{{"kind", "dgs"},
              {"dim", c.dim},
              {"cos_theta", c.cos_theta},
              {"gegenbauer_coeffs", c.poly.coeffs()},
              {"bound_real", c.bound_real},
              {"bound_int", c.bound_int},
              {"verification", to_json(c.verification)}};
}

/// Reads a DGS certificate as stored; call verify_certificate to re-check it.
inline DGSCertificate dgs_certificate_from_json(const Json& j) {
  try {
    if (detail::get_field<std::string>(j, "kind") != "dgs") throw StructuralError("not a dgs certificate");
    DGSCertificate c;
    c.dim = detail::get_field<int>(j, "dim");
    c.cos_theta = detail::get_field<double>(j, "cos_theta");
    c.poly = GegenbauerPoly(c.dim, detail::get_field<std::vector<double>>(j, "gegenbauer_coeffs"));
    c.a0 = c.poly.coeffs().empty() ? 0.0 : c.poly.coeffs()[0];
    c.bound_real = detail::get_field<double>(j, "bound_real");
    c.bound_int = detail::get_field<long long>(j, "bound_int");
    if (j.contains("verification")) {
      const Json& v = j.at("verification");
      c.verification.passed = v.value("passed", false);
      c.verification.reason = v.value("reason", std::string{});
      c.verification.grid_size = v.value("grid_size", std::size_t{0});
      c.verification.max_violation = v.value("max_violation", 0.0);
      c.verification.worst_location = v.value("worst_location", 0.0);
      c.verification.refinement_depth = v.value("refinement_depth", 0);
      c.verification.min_coefficient = v.value("min_coefficient", 0.0);
    }
    return c;
  } catch (const Json::exception& e) {
    throw StructuralError(std::string("malformed dgs certificate: ") + e.what());
  }
}

inline Json to_json(const PhiSpec& phi) {
  Json j{{"basis", phi.basis_name()}};
  if (phi.dim()) j["dim"] = *phi.dim();
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, GegenbauerPoly>) {
          j["coeffs"] = f.coeffs();
        } else if constexpr (std::is_same_v<T, MonomialPoly>) {
          j["coeffs"] = f.coeffs;
        } else {
          j["nodes"] = f.nodes;
          j["coeffs"] = f.values;
        }
      },
      phi.representation());
  return j;
}

/// Accepts {"basis": "gegenbauer" | "monomial" | "table", "dim": d, "coeffs": [...]};
/// table phi carry "nodes" with "coeffs" holding the values at those nodes.
inline PhiSpec phi_from_json(const Json& j) {
  try {
    const auto basis = detail::get_field<std::string>(j, "basis");
    const auto coeffs = detail::get_field<std::vector<double>>(j, "coeffs");
    std::optional<int> dim;
    if (j.contains("dim") && !j.at("dim").is_null()) dim = j.at("dim").get<int>();
    if (basis == "gegenbauer") {
      if (!dim) throw StructuralError("gegenbauer phi needs a 'dim'");
      return PhiSpec::gegenbauer(*dim, coeffs);
    }
    if (basis == "monomial") return PhiSpec::monomial(coeffs, dim);
    if (basis == "table") return PhiSpec::table(detail::get_field<std::vector<double>>(j, "nodes"), coeffs);
    throw StructuralError("unknown phi basis '" + basis + "'");
  } catch (const Json::exception& e) {
    throw StructuralError(std::string("malformed phi: ") + e.what());
  }
}

inline Json to_json(const PfenderReport& r) {
  return Json{{"verified", r.verified},
              {"reason", r.reason},
              {"condition_i_established", r.condition_i_established},
              {"condition_i_evidence", r.condition_i_evidence},
              {"condition_ii_holds", r.condition_ii_holds},
              {"condition_ii_worst_margin", r.condition_ii_worst_margin},
              {"condition_ii_worst_location", r.condition_ii_worst_location},
              {"special_case_applies", r.special_case_applies},
              {"special_case_limit", r.special_case_limit},
              {"table_max_spacing", r.table_max_spacing}};
}

inline Json to_json(const PfenderCertificate& c) {
  return Json{{"kind", "pfender"},
              {"variant", to_string(c.variant)},
              {"mode", to_string(c.mode)},
              {"phi", to_json(c.phi)},
              {"c", c.c},
              {"cos_theta", c.cos_theta},
              {"bound_real", c.bound_real},
              {"bound_int", c.bound_int},
              {"verification", to_json(c.verification)}};
}

/// Hypotheses of a stored Pfender certificate (phi, c, cos_theta, variant);
/// the bound fields are recomputed rather than trusted.
struct PfenderClaim {
  PhiSpec phi;
  double c;
  double cos_theta;
  PfenderVariant variant;
  double stored_bound_real;
};

inline PfenderClaim pfender_claim_from_json(const Json& j) {
  try {
    if (detail::get_field<std::string>(j, "kind") != "pfender") throw StructuralError("not a pfender certificate");
    const auto variant = j.value("variant", std::string("interval"));
    if (variant != "interval" && variant != "finite_set") throw StructuralError("unknown variant '" + variant + "'");
    return PfenderClaim{phi_from_json(j.at("phi")), detail::get_field<double>(j, "c"), detail::get_field<double>(j, "cos_theta"),
                        variant == "interval" ? PfenderVariant::kInterval : PfenderVariant::kFiniteSet,
                        j.value("bound_real", std::numeric_limits<double>::quiet_NaN())};
  } catch (const Json::exception& e) {
    throw StructuralError(std::string("malformed pfender certificate: ") + e.what());
  }
}

// ---- files ----

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw StructuralError("malformed JSON in '" + path + "': " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw StructuralError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace codebound

#endif  // CODEBOUND_SERIALIZATION_HPP
