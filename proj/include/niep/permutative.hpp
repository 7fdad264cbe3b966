#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "niep/error.hpp"
#include "niep/matrix.hpp"
#include "niep/scalar.hpp"
#include "niep/spectra.hpp"

namespace niep {

/// Permutative realization of a cone member: P_x built from the coordinate
/// vector x, its row sum Sigma, the remaining eigenvalues delta_i = x_1 - x_i,
/// and the exact diagonalization P S = S D.
struct PermutativeRealization {
  std::vector<Scalar> x;
  RationalMatrix P;
  Scalar sigma;
  std::vector<Scalar> deltas;  // deltas[i - 1] = x_1 - x_{i+1}
  RationalMatrix S;
  RationalMatrix D;
};

/// x_1 = s1/n, x_i = (s1 - n lambda_i)/n; the same numbers as the cone coordinates.
inline std::vector<Scalar> build_coordinates(const Spectrum& spec) { return cone_coordinates(spec).y; }

/// Row i of P_x is x with entries 1 and i transposed.
inline RationalMatrix build_matrix(std::span<const Scalar> x) {
  const std::size_t n = x.size();
  if (n == 0) throw Error(Errc::dimension_mismatch, "coordinate vector must be nonempty");
  RationalMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) p(i, j) = x[j];
    std::swap(p(i, 0), p(i, i));
  }
  return p;
}

inline Scalar coordinate_sum(std::span<const Scalar> x) {
  return std::accumulate(x.begin(), x.end(), Scalar(0));
}

/// Eigenvector for delta_i = x_1 - x_i (i is a 0-based index >= 1): x_1 - Sigma
/// at position i and x_i everywhere else.
inline std::vector<Scalar> eigenvector(std::span<const Scalar> x, std::size_t i) {
  if (i == 0 || i >= x.size()) throw Error(Errc::dimension_mismatch, "eigenvector index out of range");
  const Scalar sigma = coordinate_sum(x);
  const Scalar delta = x[0] - x[i];
  if (delta == sigma) {
    throw Error(Errc::degenerate_eigenpair, "delta_" + std::to_string(i + 1) + " equals Sigma");
  }
  std::vector<Scalar> v(x.size(), x[i]);
  v[i] = x[0] - sigma;
  return v;
}

struct Diagonalization {
  RationalMatrix S;
  RationalMatrix D;
};

/// S = [e v_2 ... v_n], D = diag(Sigma, delta_2, ..., delta_n); when Sigma = x_1
/// the matrix is already x_1 I and S = I.
inline Diagonalization diagonalize(std::span<const Scalar> x) {
  const std::size_t n = x.size();
  if (n == 0) throw Error(Errc::dimension_mismatch, "coordinate vector must be nonempty");
  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(x[i]) < 0) {
      throw Error(Errc::negative_coordinates, "x_" + std::to_string(i + 1) + " = " + format_scalar(x[i]) + " < 0");
    }
  }
  const Scalar sigma = coordinate_sum(x);
  if (sigma == x[0]) {
    return {RationalMatrix::identity(n), scaled(RationalMatrix::identity(n), x[0])};
  }
  RationalMatrix s(n, n);
  RationalMatrix d(n, n);
  for (std::size_t r = 0; r < n; ++r) s(r, 0) = 1;
  d(0, 0) = sigma;
  for (std::size_t i = 1; i < n; ++i) {
    const auto v = eigenvector(x, i);
    for (std::size_t r = 0; r < n; ++r) s(r, i) = v[r];
    d(i, i) = x[0] - x[i];
  }
  return {std::move(s), std::move(d)};
}

/// Full permutative construction for a spectrum whose entry 0 is the Perron
/// candidate. Throws not_in_cone when some coordinate is negative.
inline PermutativeRealization realize_permutative(const Spectrum& spec) {
  if (auto violation = first_cone_violation(spec)) {
    throw Error(Errc::not_in_cone, violation->describe(spec.size()));
  }
  PermutativeRealization r;
  r.x = build_coordinates(spec);
  r.P = build_matrix(r.x);
  r.sigma = coordinate_sum(r.x);
  for (std::size_t i = 1; i < r.x.size(); ++i) r.deltas.push_back(r.x[0] - r.x[i]);
  auto diag = diagonalize(r.x);
  r.S = std::move(diag.S);
  r.D = std::move(diag.D);
  return r;
}

}  // namespace niep
