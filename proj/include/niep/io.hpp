#pragma once

// JSON documents exchanged by the command-line tool. Rationals travel as
// "p/q" strings so that no value is rounded on the way through a pipeline.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "niep/conditions.hpp"
#include "niep/error.hpp"
#include "niep/matrix.hpp"
#include "niep/permutative.hpp"
#include "niep/scalar.hpp"
#include "niep/spectra.hpp"
#include "niep/symmetric.hpp"
#include "niep/verify.hpp"

namespace niep::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(Errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Scalars and spectra
// ---------------------------------------------------------------------------

/// Integers and strings are exact; JSON floats are read through their shortest
/// decimal text, so 0.1 becomes 1/10.
inline Scalar scalar_from_json(const Json& j) {
  if (j.is_string()) return parse_scalar(j.get<std::string>());
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Scalar(Integer(std::to_string(j.get<std::uint64_t>()), 10));
    return Scalar(Integer(std::to_string(j.get<std::int64_t>()), 10));
  }
  if (j.is_number_float()) return parse_scalar(j.dump());
  throw Error(Errc::parse_error, "expected a number or rational string, got " + j.dump());
}

inline Json to_json(const Scalar& q) { return format_scalar(q); }

inline Json to_json(std::span<const Scalar> v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_json(q));
  return a;
}

inline Json to_json(const Spectrum& s) { return to_json(std::span<const Scalar>(s.values())); }

inline Json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

inline Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.dump(), 10);
  if (j.is_string()) {
    try {
      return Integer(j.get<std::string>(), 10);
    } catch (const std::invalid_argument&) {
    }
  }
  throw Error(Errc::parse_error, "expected an integer, got " + j.dump());
}

struct SpectrumDocument {
  Spectrum spectrum;
  std::optional<std::string> label;
};

/// Accepts a bare array or {"spectrum": [...], "label": "..."}.
inline SpectrumDocument spectrum_from_json(const Json& j) {
  const Json* arr = &j;
  std::optional<std::string> label;
  if (j.is_object()) {
    if (!j.contains("spectrum")) throw Error(Errc::parse_error, "spectrum document needs a \"spectrum\" array");
    arr = &j.at("spectrum");
    if (j.contains("label") && j.at("label").is_string()) label = j.at("label").get<std::string>();
  }
  if (!arr->is_array() || arr->empty()) throw Error(Errc::parse_error, "spectrum must be a nonempty array");
  std::vector<Scalar> v;
  for (const auto& e : *arr) v.push_back(scalar_from_json(e));
  return {Spectrum(std::move(v)), std::move(label)};
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

inline Json to_json(const RationalMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(to_json(m(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Json to_json(const FloatMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Json to_json(const Surd& s) {
  return Json{{"float", s.value()},
              {"surd", Json{{"radicand", integer_json(s.radicand)}, {"denominator", integer_json(s.denominator)}}}};
}

inline Json to_json(const ExactMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::visit([&](const auto& e) { r.push_back(to_json(e)); }, m(i, j));
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

using AnyMatrix = std::variant<RationalMatrix, FloatMatrix>;

/// Reads [[...]] or {"matrix": [[...]]}. Strings and integers are exact;
/// JSON floats and {"float", "surd"} objects make the whole matrix numeric.
inline AnyMatrix matrix_from_json(const Json& doc) {
  const Json& rows = doc.is_object() ? doc.at("matrix") : doc;
  if (!rows.is_array() || rows.empty()) throw Error(Errc::parse_error, "matrix must be a nonempty array of rows");
  const std::size_t n = rows.size();
  const std::size_t m = rows.front().is_array() ? rows.front().size() : 0;
  if (m == 0) throw Error(Errc::parse_error, "matrix rows must be nonempty arrays");

  std::vector<std::vector<std::optional<Scalar>>> exact(n, std::vector<std::optional<Scalar>>(m));
  FloatMatrix numeric(n, m);
  bool all_exact = true;
  for (std::size_t i = 0; i < n; ++i) {
    const Json& row = rows[i];
    if (!row.is_array() || row.size() != m) throw Error(Errc::parse_error, "ragged matrix");
    for (std::size_t j = 0; j < m; ++j) {
      const Json& e = row[j];
      if (e.is_object()) {
        if (e.contains("surd")) {
          const Json& s = e.at("surd");
          Surd surd{integer_from_json(s.at("radicand")), integer_from_json(s.at("denominator"))};
          if (sgn(surd.radicand) < 0 || sgn(surd.denominator) <= 0) throw Error(Errc::parse_error, "bad surd");
          numeric(i, j) = surd.value();
        } else if (e.contains("float") && e.at("float").is_number()) {
          numeric(i, j) = e.at("float").get<double>();
        } else {
          throw Error(Errc::parse_error, "unrecognized matrix entry " + e.dump());
        }
        all_exact = false;
      } else if (e.is_number_float()) {
        numeric(i, j) = e.get<double>();
        all_exact = false;
      } else {
        exact[i][j] = scalar_from_json(e);
        numeric(i, j) = to_double(*exact[i][j]);
      }
    }
  }
  if (!all_exact) return numeric;
  RationalMatrix r(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) r(i, j) = *exact[i][j];
  return r;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json verdict_json(Verdict v) {
  switch (v) {
    case Verdict::holds: return true;
    case Verdict::fails: return false;
    case Verdict::skipped: return "skipped";
  }
  return nullptr;
}

inline Json to_json(const PerfectPartition& p, const Spectrum& s) {
  auto entry = [&](std::size_t i) { return Json{{"index", i}, {"value", to_json(s[i])}}; };
  Json groups = Json::array();
  for (const auto& g : p.groups) {
    Json members = Json::array();
    for (std::size_t m : g.members) members.push_back(entry(m));
    groups.push_back(Json{{"head", entry(g.head)}, {"members", std::move(members)}});
  }
  Json j{{"dominant", entry(p.dominant)}, {"groups", std::move(groups)}};
  j["residual"] = p.residual ? entry(*p.residual) : Json(nullptr);
  return j;
}

inline Json to_json(const ConeViolation& v, std::size_t n) {
  return Json{{"index", v.index}, {"value", to_json(v.value)}, {"inequality", v.describe(n)}};
}

inline Json to_json(const ConditionReport& r) {
  Json verdicts = Json::object();
  for (Condition c : kAllConditions) verdicts[std::string(to_string(c))] = verdict_json(r[c]);
  Json external = Json::object();
  for (auto name : kExternalConditions) external[std::string(name)] = "external, unimplemented";

  Json witness = Json::object();
  witness["cone_violation"] = r.cone_violation ? to_json(*r.cone_violation, r.spectrum.size()) : Json(nullptr);
  witness["perfect_partition"] = r.perfect_partition ? to_json(*r.perfect_partition, r.spectrum) : Json(nullptr);

  return Json{{"schema", kSchemaVersion},
              {"spectrum", to_json(r.spectrum)},
              {"input_order", r.permutation},
              {"verdicts", std::move(verdicts)},
              {"external", std::move(external)},
              {"witness", std::move(witness)}};
}

inline Json optional_json(const std::optional<bool>& b) { return b ? Json(*b) : Json(nullptr); }

inline Json to_json(const VerificationReport& r) {
  Json traces = Json::array();
  for (const auto& [k, t] : r.trace_conditions) traces.push_back(Json{{"k", k}, {"trace", t}});
  return Json{{"passed", r.passed},
              {"spectrum_match_distance",
               r.spectrum_match_distance ? Json(*r.spectrum_match_distance) : Json(nullptr)},
              {"spectrum_ok", r.spectrum_ok},
              {"exact_residual_ok", optional_json(r.exact_residual_ok)},
              {"nonnegative", r.nonnegative},
              {"min_entry", r.min_entry},
              {"symmetric", r.symmetric},
              {"doubly_stochastic", optional_json(r.doubly_stochastic)},
              {"trace_conditions", std::move(traces)},
              {"traces_ok", r.traces_ok},
              {"perron_in_list", r.perron_in_list},
              {"computed_spectrum", r.computed_spectrum}};
}

inline Json to_json(const GlueParameters& p) {
  return Json{{"m", p.m},
              {"n", p.n},
              {"theta", to_json(p.theta)},
              {"alpha1", to_json(p.alpha1)},
              {"beta1", to_json(p.beta1)},
              {"rho_squared", to_json(p.rho_squared)},
              {"rho", p.rho},
              {"c_hat", p.c_hat},
              {"gamma", p.gamma}};
}

inline Json trace_json(const PermutativeRealization& r) {
  return Json{{"x", to_json(std::span<const Scalar>(r.x))},
              {"sigma", to_json(r.sigma)},
              {"deltas", to_json(std::span<const Scalar>(r.deltas))}};
}

inline Json trace_json(const SymmetricRealization& r) {
  Json glue = Json::array();
  for (const auto& g : r.glue_trace) glue.push_back(to_json(g));
  return Json{{"y", to_json(std::span<const Scalar>(r.y.y))},
              {"glue", std::move(glue)},
              {"perron_value", r.perron_value},
              {"perron_vector", r.perron_vector}};
}

inline Json to_json(const AtlasReport& a) {
  auto spectra = [](const std::vector<Spectrum>& v) {
    Json arr = Json::array();
    for (const auto& s : v) arr.push_back(to_json(s));
    return arr;
  };

  Json tallies = Json::object();
  for (std::size_t c = 0; c < kConditionCount; ++c) {
    tallies[std::string(to_string(kAllConditions[c]))] =
        Json{{"true", a.tallies[c][0]}, {"false", a.tallies[c][1]}, {"skipped", a.tallies[c][2]}};
  }

  Json pairs = Json::array();
  for (const auto& p : a.pairs) {
    Json j{{"a", to_string(p.a)}, {"b", to_string(p.b)}, {"relation", to_string(p.kind)}};
    if (p.kind == PairRelation::Kind::implies) {
      j["from"] = to_string(p.from);
      j["to"] = to_string(p.to);
    }
    j["a_not_b"] = p.a_not_b;
    j["b_not_a"] = p.b_not_a;
    j["a_not_b_witnesses"] = spectra(p.a_not_b_witnesses);
    j["b_not_a_witnesses"] = spectra(p.b_not_a_witnesses);
    pairs.push_back(std::move(j));
  }

  Json relations = Json::array();
  for (const auto& r : a.relations) {
    relations.push_back(Json{
        {"item", r.relation.item},
        {"statement", r.relation.statement},
        {"kind", r.relation.kind == KnownRelation::Kind::independent ? "independent" : "implies_strictly"},
        {"a", to_string(r.relation.a)},
        {"b", to_string(r.relation.b)},
        {"status", r.confirmed ? "confirmed" : (r.violations > 0 ? "FAILURE" : "unconfirmed")},
        {"violations", r.violations},
        {"witnesses", spectra(r.witnesses)},
        {"violating", spectra(r.violating)}});
  }

  Json external = Json::array();
  for (auto name : kExternalConditions) external.push_back(std::string(name) + ": external, unimplemented");

  return Json{{"schema", kSchemaVersion},
              {"samples", a.options.samples},
              {"n_range", Json::array({a.options.n_min, a.options.n_max})},
              {"seed", a.options.seed},
              {"evaluated", a.evaluated},
              {"implication_violations", a.implication_violations},
              {"all_relations_confirmed", a.all_relations_confirmed()},
              {"tallies", std::move(tallies)},
              {"relations", std::move(relations)},
              {"pairs", std::move(pairs)},
              {"external", std::move(external)}};
}

}  // namespace niep::io
