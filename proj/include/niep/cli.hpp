#pragma once

// Command dispatch for the `niep` tool, kept in a header so tests can drive
// it in-process with string streams.
//
// Exit codes: 0 ok, 1 verification failed, 2 malformed input or usage,
// 3 spectrum not realizable by the requested construction, 4 internal audit
// failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "niep/conditions.hpp"
#include "niep/error.hpp"
#include "niep/io.hpp"
#include "niep/permutative.hpp"
#include "niep/spectra.hpp"
#include "niep/symmetric.hpp"
#include "niep/verify.hpp"

namespace niep::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kParseError = 2,
  kNotRealizable = 3,
  kAuditFailure = 4,
};

using io::Json;

namespace detail {

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

inline std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::parse_error, "cannot open " + path);
  return read_all(f);
}

/// Positional literal, then --file, then standard input.
inline std::string input_text(const std::vector<std::string>& positional, std::size_t index,
                              const std::string& file, std::istream& in) {
  if (index == 0 && !file.empty()) return read_file(file);
  const std::size_t slot = (!file.empty() && index > 0) ? index - 1 : index;
  if (slot < positional.size()) return positional[slot];
  if (index == 0) return read_all(in);
  throw Error(Errc::parse_error, "missing input document");
}

inline void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

inline std::optional<std::pair<std::size_t, std::size_t>> parse_pair(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  try {
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const auto a = std::stoul(text.substr(0, colon), &used_a);
    const auto b = std::stoul(text.substr(colon + 1), &used_b);
    if (used_a != colon || used_b != text.size() - colon - 1) return std::nullopt;
    return std::pair<std::size_t, std::size_t>{a, b};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

/// Largest Walsh order m < len whose complement is also a Walsh order.
inline std::optional<std::pair<std::size_t, std::size_t>> default_split(std::size_t len) {
  for (std::size_t m = std::size_t{1} << 30; m >= 1; m >>= 1) {
    if (m < len && is_power_of_two(len - m)) return std::pair{m, len - m};
  }
  return std::nullopt;
}

inline Json realization_doc(std::string_view method, const Spectrum& ordered, const Json& matrix,
                            bool exact, const Json& trace, const VerificationReport& report) {
  return Json{{"schema", io::kSchemaVersion},
              {"method", method},
              {"spectrum", io::to_json(ordered)},
              {"exact", exact},
              {"matrix", matrix},
              {"trace", trace},
              {"verification", io::to_json(report)}};
}

inline Json realize_with(const std::string& method, const Spectrum& s, std::optional<std::pair<std::size_t, std::size_t>> split,
                         const AuditOptions& base) {
  AuditOptions opts = base;
  if (method == "permutative") {
    const auto r = realize_permutative(s);
    return realization_doc(method, s, io::to_json(r.P), true, io::trace_json(r), audit(r.P, s, opts));
  }
  if (method == "hadamard") {
    opts.require_symmetric = true;
    opts.check_doubly_stochastic = true;
    const auto a = hadamard_realize(s, walsh(log2_exact(s.size())));
    Json trace{{"y", io::to_json(std::span<const Scalar>(cone_coordinates(s).y))},
               {"hadamard_order", s.size()}};
    return realization_doc(method, s, io::to_json(a), true, trace, audit(a, s, opts));
  }
  if (method == "two-hadamard") {
    opts.require_symmetric = true;
    const auto [m, n] = *split;
    const auto r = realize_two_hadamard_orders(s, m, n);
    Json trace = io::trace_json(r);
    trace["split"] = Json::array({m, n});
    return realization_doc(method, s, io::to_json(*r.exact), true, trace, audit(r.matrix, s, opts));
  }
  // recursive
  opts.require_symmetric = true;
  const auto r = realize_recursive(s);
  return realization_doc(method, s, io::to_json(r.matrix), false, io::trace_json(r), audit(r.matrix, s, opts));
}

inline bool doc_passed(const Json& doc) {
  if (!doc.at("verification").at("passed").get<bool>()) return false;
  if (doc.contains("alternatives")) {
    for (const auto& alt : doc.at("alternatives")) {
      if (!doc_passed(alt)) return false;
    }
  }
  return true;
}

inline std::optional<double> env_tolerance() {
  const char* v = std::getenv("NIEP_TOL");
  if (v == nullptr || *v == '\0') return std::nullopt;
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace detail

inline int cmd_classify(const Spectrum& spec, detail::Streams io_) {
  detail::emit(io_.out, io::to_json(classify(spec)));
  return kOk;
}

inline int cmd_realize(const Spectrum& input, const std::string& method, const std::string& split_text,
                       const AuditOptions& opts, detail::Streams io_) {
  const auto normalized = normalize_descending(input);
  const Spectrum& s = normalized.spectrum;
  const std::size_t len = s.size();

  std::optional<std::pair<std::size_t, std::size_t>> split;
  if (method == "two-hadamard") {
    split = split_text.empty() ? detail::default_split(len) : detail::parse_pair(split_text);
    if (!split) {
      io_.err << "niep: --split must be m:n with Walsh orders summing to " << len << '\n';
      return kParseError;
    }
    if (split->first + split->second != len || !is_power_of_two(split->first) || !is_power_of_two(split->second)) {
      io_.err << "niep: split " << split->first << ':' << split->second << " needs powers of two summing to " << len
              << '\n';
      return kParseError;
    }
  }
  if (method == "hadamard" && !is_power_of_two(len)) {
    io_.err << "niep: hadamard method needs a power-of-two length, got " << len << '\n';
    return kParseError;
  }

  if (auto violation = first_cone_violation(s)) {
    io_.err << "niep: not in the permutative cone: " << violation->describe(len) << '\n';
    detail::emit(io_.out, Json{{"schema", io::kSchemaVersion},
                               {"realizable", false},
                               {"spectrum", io::to_json(s)},
                               {"violation", io::to_json(*violation, len)}});
    return kNotRealizable;
  }

  Json doc;
  if (method == "auto") {
    doc = detail::realize_with("permutative", s, std::nullopt, opts);
    doc["method"] = "auto";
    Json alternatives = Json::array();
    alternatives.push_back(detail::realize_with(is_power_of_two(len) ? "hadamard" : "recursive", s, std::nullopt, opts));
    doc["alternatives"] = std::move(alternatives);
  } else {
    doc = detail::realize_with(method, s, split, opts);
  }
  doc["input_order"] = normalized.permutation;
  detail::emit(io_.out, doc);
  if (!detail::doc_passed(doc)) {
    io_.err << "niep: realization failed its own audit\n";
    return kAuditFailure;
  }
  return kOk;
}

/// Verifies a matrix against a spectrum. A realization document carries both.
inline int cmd_verify(const Json& first, const std::optional<Json>& second, AuditOptions opts, bool doubly_stochastic,
                      bool require_symmetric, detail::Streams io_) {
  auto audit_doc = [&](const Json& matrix_doc, const Spectrum& spec, const std::string& method) {
    AuditOptions o = opts;
    o.check_doubly_stochastic = doubly_stochastic || method == "hadamard";
    o.require_symmetric = require_symmetric || method == "hadamard" || method == "two-hadamard" || method == "recursive";
    const auto m = io::matrix_from_json(matrix_doc);
    return std::visit([&](const auto& mat) { return audit(mat, spec, o); }, m);
  };

  Json out{{"schema", io::kSchemaVersion}};
  bool passed = true;
  if (first.is_object() && first.contains("matrix") && first.contains("spectrum") && !second) {
    const Spectrum spec = io::spectrum_from_json(first.at("spectrum")).spectrum;
    const std::string method = first.value("method", "");
    const auto report = audit_doc(first.at("matrix"), spec, method == "auto" ? "permutative" : method);
    passed = report.passed;
    out["verification"] = io::to_json(report);
    if (first.contains("alternatives")) {
      Json alts = Json::array();
      for (const auto& alt : first.at("alternatives")) {
        const auto r = audit_doc(alt.at("matrix"), io::spectrum_from_json(alt.at("spectrum")).spectrum,
                                 alt.value("method", ""));
        passed = passed && r.passed;
        alts.push_back(Json{{"method", alt.value("method", "")}, {"verification", io::to_json(r)}});
      }
      out["alternatives"] = std::move(alts);
    }
  } else {
    if (!second) throw Error(Errc::parse_error, "verify needs a matrix document and a spectrum document");
    const Spectrum spec = io::spectrum_from_json(*second).spectrum;
    const auto report = audit_doc(first, spec, "");
    passed = report.passed;
    out["verification"] = io::to_json(report);
  }
  out["passed"] = passed;
  detail::emit(io_.out, out);
  return passed ? kOk : kCheckFailed;
}

inline int cmd_atlas(const AtlasOptions& options, detail::Streams io_) {
  const auto report = relation_atlas(options);
  detail::emit(io_.out, io::to_json(report));
  if (report.implication_violations > 0) {
    io_.err << "niep: " << report.implication_violations << " implication violations\n";
    return kAuditFailure;
  }
  return kOk;
}

/// Entry point; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  detail::Streams streams{in, out, err};
  CLI::App app{"Nonnegative inverse eigenvalue toolkit: classify and realize real spectra", "niep"};
  app.require_subcommand(1);

  std::optional<double> tol_flag;
  app.add_option("--tol", tol_flag, "Absolute and relative tolerance (default 1e-10, env NIEP_TOL)");

  // Separate string slots: a vector option would split "[1,2]" into elements.
  std::string first_doc;
  std::string second_doc;
  std::string file;
  std::string method = "auto";
  std::string split_text;
  AtlasOptions atlas;
  std::string n_range = "2:8";
  bool doubly_stochastic = false;
  bool require_symmetric = false;

  auto* classify_cmd = app.add_subcommand("classify", "Evaluate every implemented sufficient condition");
  classify_cmd->add_option("spectrum", first_doc, "JSON spectrum literal");
  classify_cmd->add_option("--file", file, "Read the spectrum document from a file");

  auto* realize_cmd = app.add_subcommand("realize", "Construct a nonnegative matrix with the given spectrum");
  realize_cmd->add_option("spectrum", first_doc, "JSON spectrum literal");
  realize_cmd->add_option("--file", file, "Read the spectrum document from a file");
  realize_cmd->add_option("--method", method, "permutative | hadamard | two-hadamard | recursive | auto")
      ->check(CLI::IsMember({"permutative", "hadamard", "two-hadamard", "recursive", "auto"}));
  realize_cmd->add_option("--split", split_text, "Block orders m:n for two-hadamard");

  auto* verify_cmd = app.add_subcommand("verify", "Audit a matrix against a spectrum");
  verify_cmd->add_option("matrix", first_doc, "Matrix or realization document");
  verify_cmd->add_option("spectrum", second_doc, "Spectrum document");
  verify_cmd->add_option("--file", file, "Read the first document from a file");
  verify_cmd->add_flag("--doubly-stochastic", doubly_stochastic, "Also require equal row and column sums");
  verify_cmd->add_flag("--symmetric", require_symmetric, "Also require symmetry");

  auto* atlas_cmd = app.add_subcommand("atlas", "Sample spectra and tabulate relations between conditions");
  atlas_cmd->add_option("--samples", atlas.samples, "Number of random spectra (0: published witnesses only)");
  atlas_cmd->add_option("--n-range", n_range, "Length range a:b");
  atlas_cmd->add_option("--seed", atlas.seed, "Random seed");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  AuditOptions opts;
  if (auto t = tol_flag ? tol_flag : detail::env_tolerance()) {
    opts.tol.atol = *t;
    opts.tol.rtol = *t;
  }

  std::vector<std::string> positional;
  for (const auto* doc : {&first_doc, &second_doc}) {
    if (!doc->empty()) positional.push_back(*doc);
  }

  try {
    if (*classify_cmd || *realize_cmd) {
      const Json doc = io::parse_json(detail::input_text(positional, 0, file, in));
      const Spectrum spec = io::spectrum_from_json(doc).spectrum;
      if (*classify_cmd) return cmd_classify(spec, streams);
      return cmd_realize(spec, method, split_text, opts, streams);
    }
    if (*verify_cmd) {
      const Json first = io::parse_json(detail::input_text(positional, 0, file, in));
      std::optional<Json> second;
      const std::size_t available = positional.size() + (file.empty() ? 0 : 1);
      if (available >= 2) second = io::parse_json(detail::input_text(positional, 1, file, in));
      return cmd_verify(first, second, opts, doubly_stochastic, require_symmetric, streams);
    }
    const auto range = detail::parse_pair(n_range);
    if (!range || range->first < 1 || range->first > range->second) {
      err << "niep: --n-range must be a:b with 1 <= a <= b\n";
      return kParseError;
    }
    atlas.n_min = range->first;
    atlas.n_max = range->second;
    return cmd_atlas(atlas, streams);
  } catch (const Error& e) {
    err << "niep: " << e.what() << '\n';
    if (e.code() == Errc::not_in_cone || e.code() == Errc::not_hadamard_order) return kNotRealizable;
    if (e.code() == Errc::parse_error || e.code() == Errc::dimension_mismatch) return kParseError;
    return kAuditFailure;
  } catch (const Json::exception& e) {
    err << "niep: malformed document: " << e.what() << '\n';
    return kParseError;
  } catch (const std::invalid_argument& e) {
    err << "niep: " << e.what() << '\n';
    return kParseError;
  }
}

}  // namespace niep::cli
