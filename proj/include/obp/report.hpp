#pragma once

/**
 * @file report.hpp
 * @brief JSON instance files and the "obp-report/1" report document.
 */

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "obp/admissibility.hpp"
#include "obp/core.hpp"
#include "obp/error.hpp"
#include "obp/geometry.hpp"
#include "obp/search.hpp"
#include "obp/spectral.hpp"

namespace obp {

using json = nlohmann::json;

inline constexpr std::string_view kReportSchema = "obp-report/1";
inline constexpr int kDefaultPrecision = 15;

/// Significant digits for reals in reports; OBP_REPORT_PRECISION overrides.
inline int report_precision() {
  if (const char* env = std::getenv("OBP_REPORT_PRECISION")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 17) return static_cast<int>(v);
  }
  return kDefaultPrecision;
}

/// Rounds to the given number of significant digits.
inline double round_sig(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

inline json reals(const std::vector<double>& v, int digits) {
  json out = json::array();
  for (double x : v) out.push_back(round_sig(x, digits));
  return out;
}

// ---------------------------------------------------------------------------
// Instance files

inline json to_json(const ObpInstance& inst) {
  return json{{"n", inst.n()},
              {"sigma", std::vector<int>(inst.sigma().images().begin(), inst.sigma().images().end())},
              {"k", std::vector<int>(inst.k().begin(), inst.k().end())}};
}

namespace detail {

inline std::vector<int> int_array(const json& doc, const char* field, int n) {
  if (!doc.contains(field)) throw Error(ErrorCode::ParseError, std::string("missing field \"") + field + "\"");
  const auto& arr = doc.at(field);
  if (!arr.is_array()) throw Error(ErrorCode::ParseError, std::string("field \"") + field + "\" must be an array");
  if (static_cast<int>(arr.size()) != n) {
    throw Error(ErrorCode::ParseError, std::string("field \"") + field + "\" has " + std::to_string(arr.size()) +
                                           " entries, expected n = " + std::to_string(n));
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number_integer()) {
      throw Error(ErrorCode::ParseError,
                  std::string("field \"") + field + "\"[" + std::to_string(i) + "] must be an integer");
    }
    out.push_back(arr[i].get<int>());
  }
  return out;
}

}  // namespace detail

inline ObpInstance instance_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "instance must be a JSON object");
  if (!doc.contains("n") || !doc.at("n").is_number_integer())
    throw Error(ErrorCode::ParseError, "field \"n\" must be a positive integer");
  const int n = doc.at("n").get<int>();
  if (n < 1) throw Error(ErrorCode::ParseError, "field \"n\" must be a positive integer");
  auto sigma = detail::int_array(doc, "sigma", n);
  auto k = detail::int_array(doc, "k", n);
  try {
    return ObpInstance(std::move(sigma), std::move(k));
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

/// Parses an instance file, reporting the line and column of syntax errors.
inline ObpInstance parse_instance(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed JSON");
  }
  return instance_from_json(doc);
}

// ---------------------------------------------------------------------------
// Admissibility

inline json to_json(const Verdict& v) {
  json out{{"pass", v.pass}, {"witness", v.witness}};
  if (!v.detail.empty()) out["detail"] = v.detail;
  return out;
}

inline json to_json(const AdmissibilityReport& r) {
  json quick = json::array();
  for (auto f : r.quick_filter_failures) quick.push_back(std::string(to_string(f)));
  json first = nullptr;
  if (!r.quick_filter_failures.empty()) first = "quick_filter";
  else if (auto c = r.first_failure()) first = std::string(to_string(*c));
  return json{
      {"admissible", r.overall},
      {"quick_filter_failures", quick},
      {"first_failure", first},
      {"side", r.side ? json(std::string(to_string(*r.side))) : json(nullptr)},
      {"conditions",
       {{"cover", to_json(r.cover)},
        {"first_return", to_json(r.first_return)},
        {"irreducible", to_json(r.irreducible)},
        {"top_bottom", to_json(r.top_bottom)},
        {"no_fake", r.no_fake ? to_json(*r.no_fake) : json(nullptr)}}},
  };
}

inline json to_json(const TransitionMatrix& a) {
  json rows = json::array();
  for (int i = 1; i <= a.n(); ++i) {
    json row = json::array();
    for (int j = 1; j <= a.n(); ++j) row.push_back(a(i, j));
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const IntersectionForm& s) {
  json rows = json::array();
  for (int i = 1; i <= s.n(); ++i) {
    json row = json::array();
    for (int j = 1; j <= s.n(); ++j) row.push_back(s(i, j));
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Full report

struct BuildReport {
  json document;
  bool admissible = false;   ///< combinatorially admissible and lambda not degenerate
  bool invariants_ok = true; ///< every runtime identity held
};

inline BuildReport build_report(const ObpInstance& inst, Normalization normalization = Normalization::SumHOne,
                                int digits = report_precision()) {
  BuildReport out;
  const Combinatorics comb(inst);
  const auto adm = check_admissible(comb);
  const auto a = build_matrix(comb.dec, comb.blocks);

  json& doc = out.document;
  doc["schema"] = kReportSchema;
  doc["input"] = to_json(inst);
  doc["K"] = inst.K();
  doc["admissibility"] = to_json(adm);
  doc["tau"] = std::vector<int>(comb.obp.tau.images().begin(), comb.obp.tau.images().end());
  doc["orbits"] = comb.dec.orbits;
  doc["m"] = comb.dec.m;
  doc["tau_prime"] = comb.dec.tau_prime;
  doc["matrix"] = to_json(a);
  doc["side"] = adm.side ? json(std::string(to_string(*adm.side))) : json(nullptr);
  doc["cycles"] = {{"tau", cycle_count(comb.obp)}, {"sigma", inst.sigma().cycle_count()}};

  const auto s = intersection_form(inst.sigma());
  doc["intersection_form"] = to_json(s);
  const auto symplectic = symplectic_check(a, s);
  doc["symplectic"] = to_json(symplectic);

  if (!adm.overall) {
    doc["status"] = "inadmissible";
    return out;
  }

  json checks = json::array();
  auto add_check = [&](const std::string& name, bool pass, double error) {
    checks.push_back({{"name", name}, {"pass", pass}, {"error", round_sig(error, 3)}});
    if (!pass) out.invariants_ok = false;
  };

  const auto pd = perron(a, normalization);
  const auto bounds = check_lambda_bounds(pd, inst.k(), comb.dec.m);
  doc["spectral"] = {
      {"lambda", round_sig(pd.lambda, digits)},
      {"l", reals(pd.l, digits)},
      {"h", reals(pd.h, digits)},
      {"residual_l", round_sig(pd.residual_l, 3)},
      {"residual_h", round_sig(pd.residual_h, 3)},
      {"normalization", std::string(to_string(normalization))},
      {"aperiodic", is_primitive_power_positive(a)},
      {"bounds",
       {{"status", std::string(to_string(bounds.status))},
        {"k", {bounds.min_k, bounds.max_k}},
        {"m", {bounds.min_m, bounds.max_m}}}},
  };
  if (bounds.status == BoundsStatus::Degenerate) {
    doc["status"] = "degenerate";
    return out;
  }
  add_check("lambda_bounds", bounds.pass(), 0.0);
  add_check("symplectic", symplectic.pass, 0.0);

  const ObpInstance inverse = invert_obp(inst);
  const Combinatorics inverse_comb(inverse);
  add_check("inverse_matrix_conjugate",
            conjugate_matrix(a, inst.sigma()) == build_matrix(inverse_comb.dec, inverse_comb.blocks), 0.0);
  add_check("inverse_tau", inverse_comb.obp.tau == comb.obp.tau_inv, 0.0);
  add_check("cycle_count", cycle_count(comb.obp) == inst.sigma().cycle_count(), 0.0);

  const bool conjugated = *adm.side == Side::Left;
  const ObpInstance& right = conjugated ? inverse : inst;
  doc["conjugated"] = conjugated;
  doc["geometry_instance"] = to_json(right);
  try {
    const Surface surface(right, normalization);
    const auto& e = surface.edges();
    const auto& sd = surface.singularities();
    doc["edges"] = {{"x", reals(e.x, digits)}, {"y", reals(e.y, digits)}};
    doc["geometry_perron"] = {{"lambda", round_sig(surface.lambda(), digits)},
                              {"l", reals(surface.perron_data().l, digits)},
                              {"h", reals(surface.perron_data().h, digits)}};
    doc["singularities"] = {
        {"classes", sd.classes},
        {"multiplicities", sd.multiplicities},
        {"cone_angles", reals(sd.cone_angles, digits)},
        {"nu", sd.nu},
        {"genus", sd.genus},
        {"stratum", sd.stratum},
        {"z0_label", sd.z0_label},
    };
    for (const auto& c : verify_surface(surface)) add_check(c.name, c.pass, c.error);
    add_check("lambda_matches_conjugate", std::abs(surface.lambda() - pd.lambda) <= kEigenTolerance * pd.lambda,
              std::abs(surface.lambda() - pd.lambda) / pd.lambda);
  } catch (const Error& e) {
    add_check(std::string("construction: ") + e.what(), false, 0.0);
  }
  doc["checks"] = checks;
  out.admissible = true;
  doc["status"] = out.invariants_ok ? "ok" : "invariant_failure";
  return out;
}

// ---------------------------------------------------------------------------
// Search output

inline json to_json(const SearchResult& r, int digits = report_precision()) {
  json out = to_json(r.instance);
  out["K"] = r.instance.K();
  out["lambda"] = round_sig(r.lambda, digits);
  out["genus"] = r.genus;
  out["nu"] = r.nu;
  out["stratum"] = r.stratum;
  out["side"] = std::string(to_string(r.side));
  return out;
}

inline json to_json(const SearchCounters& c) {
  return json{
      {"candidates", c.candidates},
      {"quick_filter_rejections", c.quick_filter_rejections},
      {"fail_cover", c.fail_cover},
      {"fail_first_return", c.fail_first_return},
      {"fail_irreducible", c.fail_irreducible},
      {"fail_top_bottom", c.fail_top_bottom},
      {"fail_no_fake", c.fail_no_fake},
      {"degenerate", c.degenerate},
      {"bounds_violations", c.bounds_violations},
      {"construction_failures", c.construction_failures},
      {"admissible", c.admissible},
      {"only_irreducible_fails", c.only_irreducible_fails},
      {"filtered_out", c.filtered_out},
  };
}

}  // namespace obp
