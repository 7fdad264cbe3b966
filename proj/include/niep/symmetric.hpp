#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <span>
#include <type_traits>
#include <variant>
#include <vector>

#include "niep/error.hpp"
#include "niep/matrix.hpp"
#include "niep/scalar.hpp"
#include "niep/spectra.hpp"

namespace niep {

// ---------------------------------------------------------------------------
// Hadamard matrices
// ---------------------------------------------------------------------------

/// +-1 matrix with H H^T = n I.
class HadamardMatrix {
 public:
  HadamardMatrix(std::size_t order, std::vector<int> entries)
      : order_(order), entries_(std::move(entries)) {
    if (entries_.size() != order_ * order_) throw Error(Errc::dimension_mismatch, "hadamard entry count");
    normalized_ = true;
    for (std::size_t i = 0; i < order_; ++i) {
      if ((*this)(0, i) != 1 || (*this)(i, 0) != 1) normalized_ = false;
    }
  }

  [[nodiscard]] std::size_t order() const noexcept { return order_; }
  [[nodiscard]] bool normalized() const noexcept { return normalized_; }
  [[nodiscard]] int operator()(std::size_t i, std::size_t j) const { return entries_[i * order_ + j]; }

  /// Integer check of H H^T = n I.
  [[nodiscard]] bool orthogonal() const {
    for (std::size_t i = 0; i < order_; ++i) {
      for (std::size_t j = 0; j < order_; ++j) {
        long dot = 0;
        for (std::size_t k = 0; k < order_; ++k) dot += (*this)(i, k) * (*this)(j, k);
        if (dot != (i == j ? static_cast<long>(order_) : 0)) return false;
      }
    }
    return true;
  }

  [[nodiscard]] RationalMatrix to_rational() const {
    RationalMatrix m(order_, order_);
    for (std::size_t i = 0; i < order_; ++i)
      for (std::size_t j = 0; j < order_; ++j) m(i, j) = (*this)(i, j);
    return m;
  }

 private:
  std::size_t order_;
  std::vector<int> entries_;
  bool normalized_ = false;
};

inline constexpr unsigned kMaxWalshExponent = 12;

/// Sylvester doubling W_{2^k} = [[W, W], [W, -W]] starting from [1].
inline HadamardMatrix walsh(unsigned k) {
  if (k > kMaxWalshExponent) {
    throw Error(Errc::size_exceeded, "walsh order 2^" + std::to_string(k) + " exceeds 2^" +
                                         std::to_string(kMaxWalshExponent));
  }
  const std::size_t n = std::size_t{1} << k;
  std::vector<int> w(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // Entry sign is the parity of the shared bits of i and j.
      w[i * n + j] = (__builtin_popcountll(i & j) % 2 == 0) ? 1 : -1;
    }
  }
  return HadamardMatrix(n, std::move(w));
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline unsigned log2_exact(std::size_t n) {
  unsigned k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

/// n^{-1} H diag(lambda) H^T. Symmetric, nonnegative, with all row and column
/// sums equal to lambda_1, for any lambda in the cone and normalized H.
inline RationalMatrix hadamard_realize(const Spectrum& spec, const HadamardMatrix& h) {
  const std::size_t n = spec.size();
  if (h.order() != n) {
    throw Error(Errc::order_mismatch, "hadamard order " + std::to_string(h.order()) + " != spectrum length " +
                                          std::to_string(n));
  }
  if (!h.normalized()) throw Error(Errc::order_mismatch, "hadamard matrix must be normalized");
  if (auto violation = first_cone_violation(spec)) {
    throw Error(Errc::not_in_cone, violation->describe(n));
  }
  const Scalar inv_n = make_scalar(1, static_cast<long>(n));
  RationalMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Scalar acc = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (h(i, k) * h(j, k) > 0) acc += spec[k];
        else acc -= spec[k];
      }
      acc *= inv_n;
      a(i, j) = acc;
      a(j, i) = acc;
    }
  }
  return a;
}

// ---------------------------------------------------------------------------
// Splitting and gluing
// ---------------------------------------------------------------------------

struct SpectrumSplit {
  Spectrum alpha;  // (lambda_1 - theta, lambda_2, ..., lambda_m)
  Spectrum beta;   // (lambda_{m+1} + theta, ..., lambda_{m+n})
  Scalar theta;
};

/// theta = n/(m+n) * s1 - (lambda_{m+1} + ... + lambda_{m+n}); both halves
/// land in their own cones whenever the whole list is in the cone.
inline SpectrumSplit split_spectrum(const Spectrum& spec, std::size_t m, std::size_t n) {
  if (m == 0 || n == 0 || m + n != spec.size()) {
    throw Error(Errc::order_mismatch, "split " + std::to_string(m) + ":" + std::to_string(n) +
                                          " does not match length " + std::to_string(spec.size()));
  }
  if (auto violation = first_cone_violation(spec)) {
    throw Error(Errc::not_in_cone, violation->describe(spec.size()));
  }
  Scalar tail = 0;
  for (std::size_t i = m; i < m + n; ++i) tail += spec[i];
  const Scalar theta = make_scalar(static_cast<long>(n), static_cast<long>(m + n)) * power_sum(spec, 1) - tail;

  std::vector<Scalar> a(spec.values().begin(), spec.values().begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<Scalar> b(spec.values().begin() + static_cast<std::ptrdiff_t>(m), spec.values().end());
  a[0] -= theta;
  b[0] += theta;
  SpectrumSplit split{Spectrum(std::move(a)), Spectrum(std::move(b)), theta};
  if (sgn(theta) < 0 || !in_cone(split.alpha) || !in_cone(split.beta)) {
    throw Error(Errc::not_in_cone, "split halves left the cone");
  }
  return split;
}

/// Square root of a nonnegative rational written as sqrt(radicand)/denominator
/// with the smallest possible denominator.
struct Surd {
  // Denominators with square factors above this are left unreduced.
  static constexpr unsigned long kTrialDivisionLimit = 1'000'000;

  Integer radicand;
  Integer denominator;

  static Surd sqrt_of(const Scalar& square) {
    if (sgn(square) < 0) throw Error(Errc::negative_radicand, format_scalar(square));
    if (sgn(square) == 0) return {Integer(0), Integer(1)};
    // sqrt(p/q) = sqrt(p q)/q. Since gcd(p, q) = 1, a factor k can leave the
    // denominator exactly when k^2 | q.
    const Integer d = square.get_den();
    const Integer r = square.get_num() * d;
    Integer k = 1;
    Integer rest = d;
    for (unsigned long f = 2; f < kTrialDivisionLimit && Integer(f) * f <= rest; ++f) {
      unsigned e = 0;
      while (mpz_divisible_ui_p(rest.get_mpz_t(), f)) {
        rest /= f;
        ++e;
      }
      for (unsigned i = 0; i < e / 2; ++i) k *= f;
    }
    return {r / (k * k), d / k};
  }

  [[nodiscard]] double value() const {
    return std::sqrt(radicand.get_d()) / denominator.get_d();
  }

  [[nodiscard]] Scalar square() const { return make_scalar(radicand, denominator * denominator); }

  friend bool operator==(const Surd&, const Surd&) = default;
};

/// Exact entry of a symmetric realization: rational, or a surd on the glue blocks.
using ExactEntry = std::variant<Scalar, Surd>;
using ExactMatrix = Matrix<ExactEntry>;

inline double to_double(const ExactEntry& e) {
  return std::visit([](const auto& v) -> double {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Surd>) return v.value();
    else return v.get_d();
  }, e);
}

/// Construction record for one glue step.
struct GlueParameters {
  std::size_t m = 0;
  std::size_t n = 0;
  Scalar theta;
  Scalar alpha1;
  Scalar beta1;
  Scalar rho_squared;  // theta (alpha1 - beta1 + theta)
  double rho = 0.0;
  std::array<double, 4> c_hat{};  // [alpha1, rho; rho, beta1] row-major
  std::array<double, 2> gamma{};  // alpha1 + theta, beta1 - theta
};

struct GlueResult {
  FloatMatrix C;
  GlueParameters params;
  double perron_value = 0.0;
  std::vector<double> perron_vector;
};

/// C = [[A, rho u v^T], [rho v u^T, B]] with rho = sqrt(theta (alpha1 - beta1 + theta)).
/// Moves the Perron roots to alpha1 + theta and beta1 - theta and leaves the
/// rest of both spectra in place. The returned Perron vector is (a u, b v)
/// with (a, b) proportional to (rho, theta).
inline GlueResult fiedler_glue(const FloatMatrix& a, const Scalar& alpha1, std::span<const double> u,
                               const FloatMatrix& b, const Scalar& beta1, std::span<const double> v,
                               const Scalar& theta) {
  const std::size_t m = a.rows();
  const std::size_t n = b.rows();
  if (!a.is_square() || !b.is_square() || u.size() != m || v.size() != n) {
    throw Error(Errc::dimension_mismatch, "glue blocks and Perron vectors disagree in size");
  }
  if (alpha1 < beta1) {
    throw Error(Errc::perron_order_violation,
                "alpha1 = " + format_scalar(alpha1) + " < beta1 = " + format_scalar(beta1));
  }
  if (sgn(theta) < 0) throw Error(Errc::negative_radicand, "theta = " + format_scalar(theta) + " < 0");
  const Scalar rho_sq = theta * (alpha1 - beta1 + theta);
  if (sgn(rho_sq) < 0) throw Error(Errc::negative_radicand, "rho^2 = " + format_scalar(rho_sq));

  GlueResult out;
  auto& p = out.params;
  p.m = m;
  p.n = n;
  p.theta = theta;
  p.alpha1 = alpha1;
  p.beta1 = beta1;
  p.rho_squared = rho_sq;
  p.rho = std::sqrt(to_double(rho_sq));
  p.c_hat = {to_double(alpha1), p.rho, p.rho, to_double(beta1)};
  p.gamma = {to_double(Scalar(alpha1 + theta)), to_double(Scalar(beta1 - theta))};

  out.C = FloatMatrix(m + n, m + n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out.C(i, j) = a(i, j);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.C(m + i, m + j) = b(i, j);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = p.rho * u[i] * v[j];
      out.C(i, m + j) = w;
      out.C(m + j, i) = w;
    }
  }

  double ca = 1.0;
  double cb = 0.0;
  if (sgn(theta) > 0) {
    const double t = to_double(theta);
    const double norm = std::hypot(p.rho, t);
    ca = p.rho / norm;
    cb = t / norm;
  }
  out.perron_value = p.gamma[0];
  out.perron_vector.reserve(m + n);
  for (double ui : u) out.perron_vector.push_back(ca * ui);
  for (double vi : v) out.perron_vector.push_back(cb * vi);
  return out;
}

// ---------------------------------------------------------------------------
// Symmetric realizations
// ---------------------------------------------------------------------------

struct SymmetricRealization {
  FloatMatrix matrix;
  std::optional<ExactMatrix> exact;  // present when every entry is rational or a surd
  ConeCoordinates y;
  std::vector<GlueParameters> glue_trace;
  double perron_value = 0.0;
  std::vector<double> perron_vector;
};

/// Two Hadamard-conjugated blocks of Walsh orders m and n joined by a constant
/// off-diagonal block with entries sqrt(theta (lambda_1 - lambda_{m+1} - theta) / (mn)).
inline SymmetricRealization realize_two_hadamard_orders(const Spectrum& spec, std::size_t m, std::size_t n) {
  if (!is_power_of_two(m) || !is_power_of_two(n)) {
    throw Error(Errc::not_hadamard_order,
                "split " + std::to_string(m) + ":" + std::to_string(n) + " needs Walsh orders (powers of two)");
  }
  if (m + n != spec.size()) {
    throw Error(Errc::order_mismatch, "split " + std::to_string(m) + ":" + std::to_string(n) +
                                          " does not match length " + std::to_string(spec.size()));
  }
  const SpectrumSplit split = split_spectrum(spec, m, n);
  const RationalMatrix a = hadamard_realize(split.alpha, walsh(log2_exact(m)));
  const RationalMatrix b = hadamard_realize(split.beta, walsh(log2_exact(n)));
  const std::vector<double> u(m, 1.0 / std::sqrt(static_cast<double>(m)));
  const std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  const Scalar& alpha1 = split.alpha[0];
  const Scalar& beta1 = split.beta[0];

  SymmetricRealization out;
  out.y = cone_coordinates(spec);
  if (alpha1 >= beta1) {
    GlueResult g = fiedler_glue(to_float(a), alpha1, u, to_float(b), beta1, v, split.theta);
    out.matrix = std::move(g.C);
    out.glue_trace.push_back(g.params);
    out.perron_value = g.perron_value;
    out.perron_vector = std::move(g.perron_vector);
  } else {
    // Same matrix with the blocks' roles exchanged: theta' = alpha1 - beta1 + theta
    // gives the identical rho and shifted roots; restore the block order after.
    const Scalar theta_swapped = alpha1 - beta1 + split.theta;
    GlueResult g = fiedler_glue(to_float(b), beta1, v, to_float(a), alpha1, u, theta_swapped);
    out.matrix = FloatMatrix(m + n, m + n);
    auto src = [&](std::size_t i) { return i < m ? n + i : i - m; };
    for (std::size_t i = 0; i < m + n; ++i)
      for (std::size_t j = 0; j < m + n; ++j) out.matrix(i, j) = g.C(src(i), src(j));
    out.glue_trace.push_back(g.params);
    out.perron_value = g.perron_value;
    out.perron_vector.resize(m + n);
    for (std::size_t i = 0; i < m + n; ++i) out.perron_vector[i] = g.perron_vector[src(i)];
  }

  const Scalar entry_square = out.glue_trace.back().rho_squared / Scalar(static_cast<long>(m * n));
  const Surd off = Surd::sqrt_of(entry_square);
  ExactMatrix exact(m + n, m + n);
  for (std::size_t i = 0; i < m + n; ++i) {
    for (std::size_t j = 0; j < m + n; ++j) {
      if (i < m && j < m) exact(i, j) = a(i, j);
      else if (i >= m && j >= m) exact(i, j) = b(i - m, j - m);
      else exact(i, j) = off;
      out.matrix(i, j) = to_double(exact(i, j));
    }
  }
  out.exact = std::move(exact);
  return out;
}

/// Symmetric realization of any cone member by repeated gluing: start from
/// [[y1, y2], [y2, y1]] and at step k glue the current block to [y1] with
/// theta = y_{k+1}.
inline SymmetricRealization realize_recursive(const Spectrum& spec) {
  if (auto violation = first_cone_violation(spec)) {
    throw Error(Errc::not_in_cone, violation->describe(spec.size()));
  }
  SymmetricRealization out;
  out.y = cone_coordinates(spec);
  const auto& y = out.y.y;
  const std::size_t n = y.size();

  if (n == 1) {
    out.matrix = FloatMatrix{{to_double(spec[0])}};
    out.exact = ExactMatrix(1, 1, ExactEntry(spec[0]));
    out.perron_value = to_double(spec[0]);
    out.perron_vector = {1.0};
    return out;
  }

  const double y1 = to_double(y[0]);
  const double y2 = to_double(y[1]);
  FloatMatrix current{{y1, y2}, {y2, y1}};
  Scalar perron = y[0] + y[1];
  std::vector<double> perron_vector(2, 1.0 / std::sqrt(2.0));

  const FloatMatrix single{{y1}};
  const std::vector<double> unit{1.0};
  for (std::size_t k = 2; k < n; ++k) {
    GlueResult g = fiedler_glue(current, perron, perron_vector, single, y[0], unit, y[k]);
    perron += y[k];
    current = std::move(g.C);
    perron_vector = std::move(g.perron_vector);
    out.glue_trace.push_back(std::move(g.params));
  }

  out.matrix = std::move(current);
  out.perron_value = to_double(perron);
  out.perron_vector = std::move(perron_vector);
  return out;
}

}  // namespace niep
