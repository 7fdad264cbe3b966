#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "niep/error.hpp"
#include "niep/scalar.hpp"
#include "niep/spectra.hpp"

namespace niep {

// ---------------------------------------------------------------------------
// Individual sufficient conditions. Each one reads spec[0] as lambda_1 where
// the condition singles it out; classify() sorts first.
// ---------------------------------------------------------------------------

/// Nonnegative sum and exactly one strictly positive entry.
inline bool is_suleimanova_spectrum(const Spectrum& spec) {
  if (sgn(power_sum(spec, 1)) < 0) return false;
  auto positives = std::count_if(spec.values().begin(), spec.values().end(),
                                 [](const Scalar& x) { return sgn(x) > 0; });
  return positives == 1;
}

namespace detail {

inline bool first_dominates(const Spectrum& spec) {
  return std::all_of(spec.values().begin(), spec.values().end(),
                     [&](const Scalar& x) { return spec[0] >= abs(x); });
}

}  // namespace detail

/// lambda_1 >= |lambda_i| and |lambda_i| <= lambda_1 / (n-1). A single entry
/// passes iff it is nonnegative.
inline bool check_ciarlet(const Spectrum& spec) {
  const std::size_t n = spec.size();
  if (n == 1) return sgn(spec[0]) >= 0;
  if (!detail::first_dominates(spec)) return false;
  const Scalar bound = spec[0] / Scalar(static_cast<long>(n - 1));
  for (std::size_t i = 1; i < n; ++i) {
    if (abs(spec[i]) > bound) return false;
  }
  return true;
}

/// lambda_1 >= |lambda_i| and lambda_1 + (sum of negative entries) >= 0.
inline bool check_suleimanova_condition(const Spectrum& spec) {
  if (!detail::first_dominates(spec)) return false;
  Scalar acc = spec[0];
  for (std::size_t i = 1; i < spec.size(); ++i) {
    if (sgn(spec[i]) < 0) acc += spec[i];
  }
  return sgn(acc) >= 0;
}

/// s1 >= 0 and lambda_k + lambda_{n-k+1} <= (2/n) s1 for 2 <= k <= floor((n+1)/2),
/// evaluated on the descending rearrangement.
inline bool check_salzmann(const Spectrum& spec) {
  const Spectrum sorted = spec.sorted_descending() ? spec : normalize_descending(spec).spectrum;
  const std::size_t n = sorted.size();
  const Scalar s1 = power_sum(sorted, 1);
  if (sgn(s1) < 0) return false;
  const Scalar rhs = Scalar(2) * s1 / Scalar(static_cast<long>(n));
  for (std::size_t k = 2; k <= (n + 1) / 2; ++k) {
    if (sorted[k - 1] + sorted[n - k] > rhs) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Perfect's first condition
// ---------------------------------------------------------------------------

/// A witnessing arrangement {lambda_0; (lambda_j | lambda_j1..lambda_jt); delta}.
/// All indices refer to positions in the classified spectrum.
struct PerfectPartition {
  struct Group {
    std::size_t head;
    std::vector<std::size_t> members;
  };

  std::size_t dominant = 0;
  std::vector<Group> groups;
  // Absent only for single-entry lists.
  std::optional<std::size_t> residual;
};

inline constexpr std::size_t kPerfectSearchBound = 12;

namespace detail {

class PerfectSearch {
 public:
  PerfectSearch(const Spectrum& spec, std::vector<std::size_t> heads, std::vector<std::size_t> members)
      : spec_(spec), heads_(std::move(heads)), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end(),
              [&](std::size_t a, std::size_t b) { return spec_[a] < spec_[b]; });
    sums_.reserve(heads_.size());
    for (std::size_t h : heads_) sums_.push_back(spec_[h]);
    assigned_.assign(heads_.size(), {});
    suffix_.assign(members_.size() + 1, Scalar(0));
    for (std::size_t i = members_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + spec_[members_[i]];
  }

  std::optional<std::vector<PerfectPartition::Group>> run() {
    if (heads_.empty()) {
      if (!members_.empty()) return std::nullopt;
      return std::vector<PerfectPartition::Group>{};
    }
    if (!descend(0)) return std::nullopt;
    std::vector<PerfectPartition::Group> groups;
    for (std::size_t j = 0; j < heads_.size(); ++j) groups.push_back({heads_[j], assigned_[j]});
    return groups;
  }

 private:
  bool descend(std::size_t next) {
    const std::size_t remaining = members_.size() - next;
    std::size_t empty = 0;
    Scalar deficit = 0;
    for (std::size_t j = 0; j < heads_.size(); ++j) {
      if (assigned_[j].empty()) ++empty;
      if (sgn(sums_[j]) > 0) deficit += sums_[j];
    }
    if (empty > remaining) return false;
    if (deficit > -suffix_[next]) return false;
    if (remaining == 0) return true;  // empty == 0 and deficit == 0 here

    const std::size_t m = members_[next];
    for (std::size_t j = 0; j < heads_.size(); ++j) {
      if (duplicate_state(j)) continue;
      sums_[j] += spec_[m];
      assigned_[j].push_back(m);
      if (descend(next + 1)) return true;
      assigned_[j].pop_back();
      sums_[j] -= spec_[m];
    }
    return false;
  }

  // Heads with identical value, running sum and emptiness are interchangeable.
  bool duplicate_state(std::size_t j) const {
    for (std::size_t k = 0; k < j; ++k) {
      if (spec_[heads_[k]] == spec_[heads_[j]] && sums_[k] == sums_[j] &&
          assigned_[k].empty() == assigned_[j].empty()) {
        return true;
      }
    }
    return false;
  }

  const Spectrum& spec_;
  std::vector<std::size_t> heads_;
  std::vector<std::size_t> members_;
  std::vector<Scalar> sums_;
  std::vector<std::vector<std::size_t>> assigned_;
  std::vector<Scalar> suffix_;
};

}  // namespace detail

/// Searches every arrangement allowed by Perfect's first condition: a
/// dominant lambda_0 >= |lambda|, one residual delta <= 0, and groups headed
/// by a nonnegative lambda_j with at least one nonpositive member, such that
/// lambda_j + delta <= 0 and lambda_j + sum(members) <= 0 for every group.
/// Zeros may act as heads, members or delta.
inline std::optional<PerfectPartition> check_perfect_1(const Spectrum& spec,
                                                       std::size_t search_bound = kPerfectSearchBound) {
  const std::size_t n = spec.size();
  if (n > search_bound) {
    throw Error(Errc::size_exceeded, "perfect-1 search limited to n <= " + std::to_string(search_bound));
  }
  if (n == 1) {
    if (sgn(spec[0]) < 0) return std::nullopt;
    return PerfectPartition{0, {}, std::nullopt};
  }
  if (sgn(power_sum(spec, 1)) < 0) return std::nullopt;

  const Scalar radius = spectral_radius(spec);
  std::size_t dominant = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (spec[i] == radius) {
      dominant = i;
      break;
    }
  }
  if (dominant == n) return std::nullopt;

  std::vector<Scalar> tried_residuals;
  for (std::size_t d = 0; d < n; ++d) {
    if (d == dominant || sgn(spec[d]) > 0) continue;
    if (std::find(tried_residuals.begin(), tried_residuals.end(), spec[d]) != tried_residuals.end()) continue;
    tried_residuals.push_back(spec[d]);

    std::vector<std::size_t> positives, negatives, zeros;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == dominant || i == d) continue;
      const int s = sgn(spec[i]);
      (s > 0 ? positives : s < 0 ? negatives : zeros).push_back(i);
    }
    bool heads_ok = std::all_of(positives.begin(), positives.end(),
                                [&](std::size_t j) { return sgn(spec[j] + spec[d]) <= 0; });
    if (!heads_ok) continue;

    // Zeros are interchangeable: only the number promoted to heads matters.
    for (std::size_t zero_heads = 0; zero_heads <= zeros.size(); ++zero_heads) {
      std::vector<std::size_t> heads = positives;
      std::vector<std::size_t> members = negatives;
      heads.insert(heads.end(), zeros.begin(), zeros.begin() + static_cast<std::ptrdiff_t>(zero_heads));
      members.insert(members.end(), zeros.begin() + static_cast<std::ptrdiff_t>(zero_heads), zeros.end());
      if (auto groups = detail::PerfectSearch(spec, std::move(heads), std::move(members)).run()) {
        return PerfectPartition{dominant, std::move(*groups), d};
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

enum class Condition : std::size_t {
  suleimanova_spectrum,
  permutative_cone,
  suleimanova_condition,
  ciarlet,
  salzmann,
  perfect_1,
};

inline constexpr std::size_t kConditionCount = 6;

inline constexpr std::array<Condition, kConditionCount> kAllConditions{
    Condition::suleimanova_spectrum, Condition::permutative_cone, Condition::suleimanova_condition,
    Condition::ciarlet,              Condition::salzmann,         Condition::perfect_1};

constexpr std::string_view to_string(Condition c) noexcept {
  switch (c) {
    case Condition::suleimanova_spectrum: return "suleimanova_spectrum";
    case Condition::permutative_cone: return "permutative_cone";
    case Condition::suleimanova_condition: return "suleimanova_condition";
    case Condition::ciarlet: return "ciarlet";
    case Condition::salzmann: return "salzmann";
    case Condition::perfect_1: return "perfect_1";
  }
  return "unknown";
}

/// Conditions that appear in the published relation map but are not
/// implemented here.
inline constexpr std::array<std::string_view, 6> kExternalConditions{
    "fiedler", "soto_1", "soto_2", "kellogg", "borobia", "suleimanova_perfect"};

enum class Verdict { holds, fails, skipped };

constexpr std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::holds: return "true";
    case Verdict::fails: return "false";
    case Verdict::skipped: return "skipped";
  }
  return "unknown";
}

inline Verdict verdict(bool b) { return b ? Verdict::holds : Verdict::fails; }

struct ConditionReport {
  Spectrum spectrum;  // descending rearrangement that was classified
  std::vector<std::size_t> permutation;
  std::array<Verdict, kConditionCount> verdicts{};
  std::optional<ConeViolation> cone_violation;
  std::optional<PerfectPartition> perfect_partition;

  [[nodiscard]] Verdict operator[](Condition c) const { return verdicts[static_cast<std::size_t>(c)]; }
  [[nodiscard]] bool holds(Condition c) const { return (*this)[c] == Verdict::holds; }
};

/// Runs every implemented classifier on the descending rearrangement of spec.
inline ConditionReport classify(const Spectrum& spec, std::size_t perfect_bound = kPerfectSearchBound) {
  auto normalized = normalize_descending(spec);
  ConditionReport r{normalized.spectrum, std::move(normalized.permutation), {}, {}, {}};
  const Spectrum& s = r.spectrum;
  auto set = [&](Condition c, Verdict v) { r.verdicts[static_cast<std::size_t>(c)] = v; };

  set(Condition::suleimanova_spectrum, verdict(is_suleimanova_spectrum(s)));
  r.cone_violation = first_cone_violation(s);
  set(Condition::permutative_cone, verdict(!r.cone_violation));
  set(Condition::suleimanova_condition, verdict(check_suleimanova_condition(s)));
  set(Condition::ciarlet, verdict(check_ciarlet(s)));
  set(Condition::salzmann, verdict(check_salzmann(s)));
  try {
    r.perfect_partition = check_perfect_1(s, perfect_bound);
    set(Condition::perfect_1, verdict(r.perfect_partition.has_value()));
  } catch (const Error& e) {
    if (e.code() != Errc::size_exceeded) throw;
    set(Condition::perfect_1, Verdict::skipped);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Relation atlas
// ---------------------------------------------------------------------------

/// The six published relations between the cone condition and the classical
/// sufficient conditions.
struct KnownRelation {
  enum class Kind { independent, implies_strictly };
  int item;
  Kind kind;
  Condition a;
  Condition b;
  std::string_view statement;
};

inline constexpr std::array<KnownRelation, 6> kKnownRelations{{
    {1, KnownRelation::Kind::independent, Condition::permutative_cone, Condition::ciarlet,
     "permutative cone is independent of Ciarlet"},
    {2, KnownRelation::Kind::independent, Condition::permutative_cone, Condition::perfect_1,
     "permutative cone is independent of Perfect 1"},
    {3, KnownRelation::Kind::independent, Condition::suleimanova_spectrum, Condition::ciarlet,
     "Suleimanova spectra are independent of Ciarlet"},
    {4, KnownRelation::Kind::implies_strictly, Condition::suleimanova_spectrum, Condition::permutative_cone,
     "Suleimanova spectra satisfy the permutative cone condition, strictly"},
    {5, KnownRelation::Kind::implies_strictly, Condition::permutative_cone, Condition::suleimanova_condition,
     "permutative cone implies the Suleimanova condition, strictly"},
    {6, KnownRelation::Kind::implies_strictly, Condition::permutative_cone, Condition::salzmann,
     "permutative cone implies Salzmann, strictly"},
}};

/// The witness lists printed with the six relations.
inline std::vector<Spectrum> published_witnesses() {
  return {Spectrum::of({2, 0, -2}),    Spectrum::of({2, 1, -1}),  Spectrum::of({3, 1, -1}),
          Spectrum::of({3, 1, -1, -1}), Spectrum::of({3, -1, -2}), Spectrum::of({3, 1, -2, -2})};
}

struct AtlasOptions {
  std::size_t samples = 1000;
  std::size_t n_min = 2;
  std::size_t n_max = 8;
  std::uint64_t seed = 42;
  std::size_t witness_limit = 3;
  std::size_t perfect_bound = kPerfectSearchBound;
};

struct PairRelation {
  enum class Kind { implies, independent, unknown };
  Condition a;
  Condition b;
  Kind kind;
  // For Kind::implies: from => to.
  Condition from;
  Condition to;
  std::size_t a_not_b = 0;
  std::size_t b_not_a = 0;
  std::vector<Spectrum> a_not_b_witnesses;
  std::vector<Spectrum> b_not_a_witnesses;
};

constexpr std::string_view to_string(PairRelation::Kind k) noexcept {
  switch (k) {
    case PairRelation::Kind::implies: return "implies";
    case PairRelation::Kind::independent: return "independent";
    case PairRelation::Kind::unknown: return "unknown";
  }
  return "unknown";
}

struct RelationCheck {
  KnownRelation relation;
  bool confirmed = false;
  std::size_t violations = 0;  // implications only
  std::vector<Spectrum> witnesses;
  std::vector<Spectrum> violating;
};

struct AtlasReport {
  AtlasOptions options;
  std::size_t evaluated = 0;  // published witnesses + samples
  std::array<std::array<std::size_t, 3>, kConditionCount> tallies{};  // holds / fails / skipped
  std::vector<PairRelation> pairs;
  std::vector<RelationCheck> relations;
  std::size_t implication_violations = 0;

  [[nodiscard]] bool all_relations_confirmed() const {
    return std::all_of(relations.begin(), relations.end(), [](const RelationCheck& c) { return c.confirmed; });
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Scalar random_rational(std::mt19937_64& rng, long lo, long hi, long max_den) {
  std::uniform_int_distribution<long> den(1, max_den);
  const long d = den(rng);
  std::uniform_int_distribution<long> num(lo * d, hi * d);
  return make_scalar(num(rng), d);
}

}  // namespace detail

/// Deterministic sample i of an atlas run: the generator is seeded from
/// (seed, i) alone so samples can be drawn in any order. Alternates between
/// box-uniform lists, cone members and Suleimanova-shaped lists.
inline Spectrum atlas_sample(std::uint64_t seed, std::size_t index, std::size_t n_min, std::size_t n_max) {
  std::mt19937_64 rng(detail::splitmix64(seed ^ detail::splitmix64(index)));
  std::uniform_int_distribution<std::size_t> size_dist(n_min, n_max);
  const std::size_t n = size_dist(rng);
  std::vector<Scalar> lam(n);
  std::bernoulli_distribution make_zero(0.2);

  switch (index % 3) {
    case 0:
      for (auto& v : lam) v = detail::random_rational(rng, -10, 10, 3);
      break;
    case 1: {
      ConeCoordinates y;
      y.y.resize(n);
      for (auto& v : y.y) v = make_zero(rng) ? Scalar(0) : detail::random_rational(rng, 0, 10, 4);
      lam = reconstruct(y).values();
      break;
    }
    default: {
      Scalar negative_sum = 0;
      for (std::size_t i = 1; i < n; ++i) {
        lam[i] = make_zero(rng) ? Scalar(0) : detail::random_rational(rng, -10, 0, 3);
        negative_sum += lam[i];
      }
      lam[0] = -negative_sum + detail::random_rational(rng, 0, 5, 3);
      if (sgn(lam[0]) == 0) lam[0] = 1;
      break;
    }
  }
  std::shuffle(lam.begin(), lam.end(), rng);
  return Spectrum(std::move(lam));
}

/// Classifies the published witnesses plus `samples` random lists, tallies
/// pairwise implications between the implemented conditions, and checks the
/// six published relations. Any sampled counterexample to an implication is
/// counted in implication_violations.
inline AtlasReport relation_atlas(const AtlasOptions& options) {
  AtlasReport report;
  report.options = options;

  std::vector<Spectrum> lists = published_witnesses();
  const std::size_t n_min = std::max<std::size_t>(1, options.n_min);
  const std::size_t n_max = std::max(n_min, options.n_max);
  for (std::size_t i = 0; i < options.samples; ++i) lists.push_back(atlas_sample(options.seed, i, n_min, n_max));

  std::vector<ConditionReport> reports;
  reports.reserve(lists.size());
  for (const auto& s : lists) reports.push_back(classify(s, options.perfect_bound));
  report.evaluated = reports.size();

  for (const auto& r : reports) {
    for (std::size_t c = 0; c < kConditionCount; ++c) {
      report.tallies[c][static_cast<std::size_t>(r.verdicts[c])]++;
    }
  }

  auto push_witness = [&](std::vector<Spectrum>& out, const Spectrum& s) {
    if (out.size() < options.witness_limit) out.push_back(s);
  };

  for (std::size_t i = 0; i < kConditionCount; ++i) {
    for (std::size_t j = i + 1; j < kConditionCount; ++j) {
      PairRelation p{kAllConditions[i], kAllConditions[j], PairRelation::Kind::unknown,
                     kAllConditions[i], kAllConditions[j], 0, 0, {}, {}};
      for (const auto& r : reports) {
        const Verdict va = r.verdicts[i];
        const Verdict vb = r.verdicts[j];
        if (va == Verdict::skipped || vb == Verdict::skipped) continue;
        if (va == Verdict::holds && vb == Verdict::fails) {
          ++p.a_not_b;
          push_witness(p.a_not_b_witnesses, r.spectrum);
        } else if (vb == Verdict::holds && va == Verdict::fails) {
          ++p.b_not_a;
          push_witness(p.b_not_a_witnesses, r.spectrum);
        }
      }
      if (p.a_not_b > 0 && p.b_not_a > 0) {
        p.kind = PairRelation::Kind::independent;
      } else if (p.a_not_b == 0 && p.b_not_a > 0) {
        p.kind = PairRelation::Kind::implies;
      } else if (p.b_not_a == 0 && p.a_not_b > 0) {
        p.kind = PairRelation::Kind::implies;
        p.from = p.b;
        p.to = p.a;
      }
      report.pairs.push_back(std::move(p));
    }
  }

  for (const auto& known : kKnownRelations) {
    RelationCheck check{known, false, 0, {}, {}};
    std::vector<Spectrum> a_not_b, b_not_a;
    for (const auto& r : reports) {
      const Verdict va = r[known.a];
      const Verdict vb = r[known.b];
      if (va == Verdict::skipped || vb == Verdict::skipped) continue;
      if (va == Verdict::holds && vb == Verdict::fails) {
        push_witness(a_not_b, r.spectrum);
        if (known.kind == KnownRelation::Kind::implies_strictly) {
          ++check.violations;
          push_witness(check.violating, r.spectrum);
        }
      } else if (vb == Verdict::holds && va == Verdict::fails) {
        push_witness(b_not_a, r.spectrum);
      }
    }
    if (known.kind == KnownRelation::Kind::independent) {
      check.confirmed = !a_not_b.empty() && !b_not_a.empty();
      check.witnesses = a_not_b;
      check.witnesses.insert(check.witnesses.end(), b_not_a.begin(), b_not_a.end());
    } else {
      check.confirmed = check.violations == 0 && !b_not_a.empty();
      check.witnesses = b_not_a;
      report.implication_violations += check.violations;
    }
    report.relations.push_back(std::move(check));
  }
  return report;
}

}  // namespace niep
