#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "niep/error.hpp"
#include "niep/matrix.hpp"
#include "niep/scalar.hpp"

namespace niep {

/// Ordered list of real (rational) candidate eigenvalues. Entry 0 plays the
/// role of the Perron candidate in every cone-related operation.
class Spectrum {
 public:
  explicit Spectrum(std::vector<Scalar> values, bool sorted_descending = false)
      : values_(std::move(values)), sorted_descending_(sorted_descending) {
    if (values_.empty()) throw std::invalid_argument("spectrum must have at least one entry");
    if (sorted_descending_ && !std::is_sorted(values_.begin(), values_.end(), std::greater<>{})) {
      throw std::invalid_argument("spectrum flagged descending but is not sorted");
    }
  }

  static Spectrum of(std::initializer_list<long> values) {
    std::vector<Scalar> v;
    v.reserve(values.size());
    for (long x : values) v.emplace_back(x);
    return Spectrum(std::move(v));
  }

  static Spectrum parse(std::span<const std::string> texts) {
    std::vector<Scalar> v;
    v.reserve(texts.size());
    for (const auto& t : texts) v.push_back(parse_scalar(t));
    return Spectrum(std::move(v));
  }

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] const Scalar& operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] const std::vector<Scalar>& values() const noexcept { return values_; }
  [[nodiscard]] bool sorted_descending() const noexcept { return sorted_descending_; }

  [[nodiscard]] Spectrum scaled(const Scalar& c) const {
    std::vector<Scalar> v = values_;
    for (auto& x : v) x *= c;
    return Spectrum(std::move(v));
  }

  friend bool operator==(const Spectrum& a, const Spectrum& b) { return a.values_ == b.values_; }

 private:
  std::vector<Scalar> values_;
  bool sorted_descending_;
};

struct NormalizedSpectrum {
  Spectrum spectrum;
  // permutation[i] is the original index of sorted entry i.
  std::vector<std::size_t> permutation;
};

/// Stable descending sort, remembering where each entry came from.
inline NormalizedSpectrum normalize_descending(const Spectrum& spec) {
  std::vector<std::size_t> perm(spec.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return spec[a] > spec[b]; });
  std::vector<Scalar> v;
  v.reserve(spec.size());
  for (std::size_t i : perm) v.push_back(spec[i]);
  return {Spectrum(std::move(v), true), std::move(perm)};
}

inline Scalar power_sum(const Spectrum& spec, unsigned k) {
  if (k == 0) throw std::invalid_argument("power_sum requires k >= 1");
  Scalar acc = 0;
  for (const auto& x : spec.values()) {
    Scalar p = 1;
    for (unsigned i = 0; i < k; ++i) p *= x;
    acc += p;
  }
  return acc;
}

inline Scalar spectral_radius(const Spectrum& spec) {
  Scalar r = 0;
  for (const auto& x : spec.values()) r = std::max(r, abs(x));
  return r;
}

/// True when max |lambda_i| is itself an entry of the list.
inline bool spectral_radius_in_list(const Spectrum& spec) {
  const Scalar r = spectral_radius(spec);
  return std::any_of(spec.values().begin(), spec.values().end(), [&](const Scalar& x) { return x == r; });
}

/// M_n: ones in the first row and column, -I in the trailing block.
inline RationalMatrix generator_matrix(std::size_t n) {
  if (n == 0) throw std::invalid_argument("generator_matrix requires n >= 1");
  RationalMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) m(0, j) = 1;
  for (std::size_t i = 1; i < n; ++i) {
    m(i, 0) = 1;
    m(i, i) = -1;
  }
  return m;
}

/// M_n^{-1} = (1/n) [1 e^T; e J - nI].
inline RationalMatrix generator_inverse(std::size_t n) {
  if (n == 0) throw std::invalid_argument("generator_inverse requires n >= 1");
  const Scalar inv_n = make_scalar(1, static_cast<long>(n));
  RationalMatrix m(n, n, inv_n);
  for (std::size_t i = 1; i < n; ++i) m(i, i) = inv_n - 1;
  return m;
}

/// Coordinates y with lambda = M_n y. The spectrum lies in the cone
/// coni(M_n) exactly when every y_i >= 0.
struct ConeCoordinates {
  std::vector<Scalar> y;

  [[nodiscard]] bool nonnegative() const {
    return std::all_of(y.begin(), y.end(), [](const Scalar& v) { return sgn(v) >= 0; });
  }
};

inline ConeCoordinates cone_coordinates(const Spectrum& spec) {
  const std::size_t n = spec.size();
  const Scalar s1 = power_sum(spec, 1);
  const Scalar nn(static_cast<long>(n));
  ConeCoordinates c;
  c.y.reserve(n);
  c.y.push_back(s1 / nn);
  for (std::size_t i = 1; i < n; ++i) c.y.push_back((s1 - nn * spec[i]) / nn);
  return c;
}

/// M_n y, computed directly from the column structure y_1 e + sum y_i (e_1 - e_i).
inline Spectrum reconstruct(const ConeCoordinates& coords) {
  const auto& y = coords.y;
  if (y.empty()) throw std::invalid_argument("empty cone coordinates");
  std::vector<Scalar> lam(y.size());
  lam[0] = std::accumulate(y.begin(), y.end(), Scalar(0));
  for (std::size_t i = 1; i < y.size(); ++i) lam[i] = y[0] - y[i];
  return Spectrum(std::move(lam));
}

inline bool in_cone(const Spectrum& spec) { return cone_coordinates(spec).nonnegative(); }

/// The first failing cone inequality: index 0 means s1 < 0, index i >= 1
/// means s1 - n * lambda_i < 0.
struct ConeViolation {
  std::size_t index;
  Scalar s1;
  Scalar value;  // the (negative) left-hand side

  [[nodiscard]] std::string describe(std::size_t n) const {
    if (index == 0) return "s1 = " + format_scalar(s1) + " < 0";
    return "s1 - n*lambda_" + std::to_string(index + 1) + " = " + format_scalar(s1) + " - " +
           std::to_string(n) + "*" + format_scalar((s1 - value) / Scalar(static_cast<long>(n))) + " = " +
           format_scalar(value) + " < 0";
  }
};

inline std::optional<ConeViolation> first_cone_violation(const Spectrum& spec) {
  const Scalar s1 = power_sum(spec, 1);
  if (sgn(s1) < 0) return ConeViolation{0, s1, s1};
  const Scalar nn(static_cast<long>(spec.size()));
  for (std::size_t i = 1; i < spec.size(); ++i) {
    Scalar lhs = s1 - nn * spec[i];
    if (sgn(lhs) < 0) return ConeViolation{i, s1, lhs};
  }
  return std::nullopt;
}

}  // namespace niep
