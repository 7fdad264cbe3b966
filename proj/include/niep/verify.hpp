#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "niep/error.hpp"
#include "niep/matrix.hpp"
#include "niep/scalar.hpp"
#include "niep/spectra.hpp"

namespace niep {

/// Mixed absolute/relative comparison |a - b| <= atol + rtol * max(|a|, |b|).
struct Tolerance {
  double atol = 1e-10;
  double rtol = 1e-10;

  [[nodiscard]] bool close(double a, double b) const {
    return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
  }
};

inline double frobenius_norm(const FloatMatrix& a) {
  double s = 0.0;
  for (double v : a.entries()) s += v * v;
  return std::sqrt(s);
}

inline constexpr int kJacobiMaxSweeps = 100;

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// descending. Sweeps stop once the off-diagonal Frobenius norm drops below
/// tol * ||A||_F.
inline std::vector<double> symmetric_eigenvalues(const FloatMatrix& input, double tol = 1e-12) {
  if (!input.is_square()) throw Error(Errc::dimension_mismatch, "eigenvalues of a non-square matrix");
  if (!all_finite(input)) throw Error(Errc::dimension_mismatch, "matrix has non-finite entries");
  const std::size_t n = input.rows();
  const double norm = frobenius_norm(input);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(input(i, j) - input(j, i)) > tol * std::max(1.0, norm)) {
        throw Error(Errc::not_symmetric, "entries (" + std::to_string(i) + "," + std::to_string(j) + ") differ");
      }
    }
  }

  FloatMatrix a = input;
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_norm() <= tol * norm) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - s * akq;
          a(k, q) = a(q, k) = s * akp + c * akq;
        }
      }
    }
  }
  if (sweep == kJacobiMaxSweeps && off_norm() > tol * norm) {
    throw Error(Errc::no_convergence, "off-diagonal norm " + std::to_string(off_norm()) + " after " +
                                          std::to_string(kJacobiMaxSweeps) + " sweeps");
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>{});
  return eig;
}

/// P v == value v in exact arithmetic.
inline bool exact_eigen_residual(const RationalMatrix& p, const Scalar& value, std::span<const Scalar> vector) {
  if (!p.is_square() || p.cols() != vector.size()) {
    throw Error(Errc::dimension_mismatch, "eigenpair dimension mismatch");
  }
  if (std::all_of(vector.begin(), vector.end(), [](const Scalar& v) { return sgn(v) == 0; })) {
    throw Error(Errc::zero_vector, "eigenvector must be nonzero");
  }
  const auto pv = multiply(p, vector);
  for (std::size_t i = 0; i < pv.size(); ++i) {
    if (pv[i] != value * vector[i]) return false;
  }
  return true;
}

struct SpectrumMatch {
  double distance = 0.0;
  bool within = false;
};

/// Sorted comparison; for real multisets this is the optimal matching under
/// the max-distance criterion.
inline SpectrumMatch match_spectra(std::vector<double> computed, std::vector<double> expected, const Tolerance& tol) {
  if (computed.size() != expected.size()) {
    throw Error(Errc::dimension_mismatch, "spectra of different lengths");
  }
  std::sort(computed.begin(), computed.end(), std::greater<>{});
  std::sort(expected.begin(), expected.end(), std::greater<>{});
  SpectrumMatch m{0.0, true};
  for (std::size_t i = 0; i < computed.size(); ++i) {
    m.distance = std::max(m.distance, std::abs(computed[i] - expected[i]));
    if (!tol.close(computed[i], expected[i])) m.within = false;
  }
  return m;
}

inline std::vector<double> to_doubles(const Spectrum& spec) {
  std::vector<double> v;
  v.reserve(spec.size());
  for (const auto& x : spec.values()) v.push_back(to_double(x));
  return v;
}

struct AuditOptions {
  Tolerance tol;
  bool check_doubly_stochastic = false;
  bool require_symmetric = false;
  unsigned max_trace_power = 4;
  double trace_tol = 1e-9;
  double jacobi_tol = 1e-12;
};

struct VerificationReport {
  std::optional<double> spectrum_match_distance;  // absent when no numerical spectrum is available
  bool spectrum_ok = false;
  std::optional<bool> exact_residual_ok;  // rational matrices only
  bool nonnegative = false;
  double min_entry = 0.0;
  bool symmetric = false;
  std::optional<bool> doubly_stochastic;
  std::vector<std::pair<unsigned, double>> trace_conditions;
  bool traces_ok = false;
  bool perron_in_list = false;
  std::vector<double> computed_spectrum;
  bool passed = false;
};

namespace detail {

inline void finish(VerificationReport& r, const AuditOptions& opts) {
  r.passed = r.spectrum_ok && r.nonnegative && r.traces_ok && r.perron_in_list &&
             (!opts.require_symmetric || r.symmetric) && r.doubly_stochastic.value_or(true);
}

inline void check_shape(std::size_t rows, std::size_t cols, const Spectrum& expected) {
  if (rows != cols) throw Error(Errc::dimension_mismatch, "audited matrix is not square");
  if (rows != expected.size()) {
    throw Error(Errc::dimension_mismatch, "matrix order " + std::to_string(rows) + " != spectrum length " +
                                              std::to_string(expected.size()));
  }
}

}  // namespace detail

/// Exact audit of a rational matrix: the characteristic polynomial is compared
/// with prod (t - lambda_i), and every structural check is exact. Symmetric
/// inputs additionally get a Jacobi spectrum for the distance figure.
inline VerificationReport audit(const RationalMatrix& a, const Spectrum& expected, const AuditOptions& opts = {}) {
  detail::check_shape(a.rows(), a.cols(), expected);
  const std::size_t n = a.rows();
  VerificationReport r;

  r.symmetric = true;
  Scalar min_entry = a(0, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      min_entry = std::min(min_entry, a(i, j));
      if (j > i && a(i, j) != a(j, i)) r.symmetric = false;
    }
  }
  r.min_entry = to_double(min_entry);
  r.nonnegative = sgn(min_entry) >= 0;

  r.exact_residual_ok = characteristic_polynomial(a) == polynomial_from_roots(expected.values());
  r.spectrum_ok = *r.exact_residual_ok;
  if (r.symmetric) {
    r.computed_spectrum = symmetric_eigenvalues(to_float(a), opts.jacobi_tol);
    r.spectrum_match_distance = match_spectra(r.computed_spectrum, to_doubles(expected), opts.tol).distance;
  } else if (*r.exact_residual_ok) {
    r.spectrum_match_distance = 0.0;
  }

  if (opts.check_doubly_stochastic) {
    const Scalar target = *std::max_element(expected.values().begin(), expected.values().end());
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      Scalar row = 0;
      Scalar col = 0;
      for (std::size_t j = 0; j < n; ++j) {
        row += a(i, j);
        col += a(j, i);
      }
      ok = row == target && col == target;
    }
    r.doubly_stochastic = ok;
  }

  r.traces_ok = true;
  const auto traces = power_traces(a, opts.max_trace_power);
  for (std::size_t k = 0; k < traces.size(); ++k) {
    r.trace_conditions.emplace_back(static_cast<unsigned>(k + 1), to_double(traces[k]));
    if (sgn(traces[k]) < 0) r.traces_ok = false;
  }
  r.perron_in_list = spectral_radius_in_list(expected);
  detail::finish(r, opts);
  return r;
}

/// Numerical audit of a float matrix. Only symmetric inputs can have their
/// spectrum checked; entries >= -atol count as nonnegative.
inline VerificationReport audit(const FloatMatrix& a, const Spectrum& expected, const AuditOptions& opts = {}) {
  detail::check_shape(a.rows(), a.cols(), expected);
  if (!all_finite(a)) throw Error(Errc::dimension_mismatch, "matrix has non-finite entries");
  const std::size_t n = a.rows();
  VerificationReport r;

  r.symmetric = true;
  r.min_entry = a(0, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      r.min_entry = std::min(r.min_entry, a(i, j));
      if (j > i && !opts.tol.close(a(i, j), a(j, i))) r.symmetric = false;
    }
  }
  r.nonnegative = r.min_entry >= -opts.tol.atol;

  if (r.symmetric) {
    r.computed_spectrum = symmetric_eigenvalues(a, std::max(opts.jacobi_tol, opts.tol.rtol * 1e-2));
    const auto m = match_spectra(r.computed_spectrum, to_doubles(expected), opts.tol);
    r.spectrum_match_distance = m.distance;
    r.spectrum_ok = m.within;
  }

  if (opts.check_doubly_stochastic) {
    const double target = to_double(*std::max_element(expected.values().begin(), expected.values().end()));
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      double row = 0.0;
      double col = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        row += a(i, j);
        col += a(j, i);
      }
      ok = opts.tol.close(row, target) && opts.tol.close(col, target);
    }
    r.doubly_stochastic = ok;
  }

  r.traces_ok = true;
  const auto traces = power_traces(a, opts.max_trace_power);
  for (std::size_t k = 0; k < traces.size(); ++k) {
    r.trace_conditions.emplace_back(static_cast<unsigned>(k + 1), traces[k]);
    if (traces[k] < -opts.trace_tol) r.traces_ok = false;
  }
  r.perron_in_list = spectral_radius_in_list(expected);
  detail::finish(r, opts);
  return r;
}

}  // namespace niep
