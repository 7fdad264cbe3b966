#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the routines it is used to check.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "niep/matrix.hpp"
#include "niep/scalar.hpp"
#include "niep/spectra.hpp"

namespace niep::oracle {

/// Leibniz expansion over all permutations; fine for n <= 7.
inline Scalar leibniz_determinant(const RationalMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Scalar det = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Scalar term = inversions % 2 == 0 ? 1 : -1;
    for (std::size_t i = 0; i < n; ++i) term *= a(i, perm[i]);
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

/// Faddeev-LeVerrier: coefficients of det(tI - A), lowest degree first.
inline std::vector<Scalar> leverrier_charpoly(const RationalMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<Scalar> c(n + 1);
  c[n] = 1;
  RationalMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    RationalMatrix next(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Scalar acc = 0;
        for (std::size_t l = 0; l < n; ++l) acc += a(i, l) * m(l, j);
        next(i, j) = acc;
      }
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    m = next;
    Scalar tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += a(i, l) * m(l, i);
    c[n - k] = -tr / Scalar(static_cast<long>(k));
  }
  return c;
}

/// Solves A y = b by Gauss-Jordan elimination with exact pivoting.
inline std::vector<Scalar> solve(RationalMatrix a, std::vector<Scalar> b) {
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (a(piv, col) == 0) ++piv;
    for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
    std::swap(b[col], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col) == 0) continue;
      Scalar f = a(r, col) / a(col, col);
      for (std::size_t j = 0; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a(i, i);
  return b;
}

/// Plain matrix-vector product, written out independently of the library.
inline std::vector<Scalar> apply(const RationalMatrix& a, const std::vector<Scalar>& x) {
  std::vector<Scalar> y(a.rows(), Scalar(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

/// Every set partition of {0..n-1} as a block label per element
/// (restricted growth strings).
inline void for_each_set_partition(std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> label(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t blocks) {
    if (i == n) {
      f(label);
      return;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
      label[i] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  if (n == 0) {
    f(label);
    return;
  }
  label[0] = 0;
  rec(1, 1);
}

/// Perfect's first condition by enumerating set partitions: one singleton
/// block is lambda_0, one singleton block is delta, and every other block is
/// a group with a chosen head and at least one member.
inline bool brute_force_perfect_1(const Spectrum& s) {
  const std::size_t n = s.size();
  if (n == 1) return sgn(s[0]) >= 0;
  Scalar total = 0;
  Scalar radius = 0;
  for (const auto& v : s.values()) {
    total += v;
    radius = std::max(radius, abs(v));
  }
  if (sgn(total) < 0) return false;

  bool found = false;
  for_each_set_partition(n, [&](const std::vector<std::size_t>& label) {
    if (found) return;
    const std::size_t blocks = *std::max_element(label.begin(), label.end()) + 1;
    std::vector<std::vector<std::size_t>> members(blocks);
    for (std::size_t i = 0; i < n; ++i) members[label[i]].push_back(i);

    for (std::size_t b0 = 0; b0 < blocks && !found; ++b0) {
      if (members[b0].size() != 1 || s[members[b0][0]] != radius) continue;
      for (std::size_t bd = 0; bd < blocks && !found; ++bd) {
        if (bd == b0 || members[bd].size() != 1 || sgn(s[members[bd][0]]) > 0) continue;
        const Scalar delta = s[members[bd][0]];
        // Choose a head in every remaining block.
        std::vector<std::size_t> groups;
        for (std::size_t b = 0; b < blocks; ++b)
          if (b != b0 && b != bd) groups.push_back(b);
        std::function<bool(std::size_t)> choose = [&](std::size_t g) -> bool {
          if (g == groups.size()) return true;
          const auto& blk = members[groups[g]];
          if (blk.size() < 2) return false;
          for (std::size_t h : blk) {
            if (sgn(s[h]) < 0) continue;
            if (sgn(s[h] + delta) > 0) continue;
            Scalar sum = s[h];
            bool ok = true;
            for (std::size_t m : blk) {
              if (m == h) continue;
              if (sgn(s[m]) > 0) ok = false;
              sum += s[m];
            }
            if (ok && sgn(sum) <= 0 && choose(g + 1)) return true;
          }
          return false;
        };
        if (choose(0)) found = true;
      }
    }
  });
  return found;
}

}  // namespace niep::oracle

namespace niep::testing {

/// Random rational with numerator in [lo*den, hi*den] and den in [1, max_den].
inline Scalar random_rational(std::mt19937_64& rng, long lo, long hi, long max_den) {
  std::uniform_int_distribution<long> den(1, max_den);
  const long d = den(rng);
  std::uniform_int_distribution<long> num(lo * d, hi * d);
  return make_scalar(num(rng), d);
}

/// y >= 0 with numerators up to max_num, occasionally exactly zero.
inline std::vector<Scalar> random_cone_coordinates(std::mt19937_64& rng, std::size_t n, long max_num, long max_den,
                                                   double zero_probability = 0.1) {
  std::bernoulli_distribution zero(zero_probability);
  std::uniform_int_distribution<long> num(0, max_num);
  std::uniform_int_distribution<long> den(1, max_den);
  std::vector<Scalar> y(n);
  for (auto& v : y) v = zero(rng) ? Scalar(0) : make_scalar(num(rng), den(rng));
  return y;
}

/// lambda = M_n y written out from the column structure.
inline Spectrum cone_member(const std::vector<Scalar>& y) {
  std::vector<Scalar> lam(y.size());
  lam[0] = std::accumulate(y.begin(), y.end(), Scalar(0));
  for (std::size_t i = 1; i < y.size(); ++i) lam[i] = y[0] - y[i];
  return Spectrum(std::move(lam));
}

inline Spectrum random_spectrum(std::mt19937_64& rng, std::size_t n, long box = 10, long max_den = 3) {
  std::vector<Scalar> v(n);
  for (auto& x : v) x = random_rational(rng, -box, box, max_den);
  return Spectrum(std::move(v));
}

}  // namespace niep::testing
