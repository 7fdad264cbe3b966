#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "niep/symmetric.hpp"
#include "niep/verify.hpp"
#include "oracles.hpp"

namespace niep {
namespace {

Scalar q(long n, long d = 1) { return make_scalar(n, d); }

const Spectrum kWorked = Spectrum::of({20, 1, -2, -3, -4, -5});

// Sorted multiset distance through the Jacobi solver.
double spectrum_distance(const FloatMatrix& c, const Spectrum& expected) {
  auto got = symmetric_eigenvalues(c);
  auto want = to_doubles(expected);
  std::sort(want.begin(), want.end(), std::greater<>{});
  double d = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) d = std::max(d, std::abs(got[i] - want[i]));
  return d;
}

TEST(Walsh, SmallOrders) {
  const auto w0 = walsh(0);
  EXPECT_EQ(w0.order(), 1u);
  EXPECT_EQ(w0(0, 0), 1);
  const auto w1 = walsh(1);
  EXPECT_EQ(w1.to_rational(), (RationalMatrix{{1, 1}, {1, -1}}));
  const auto w2 = walsh(2);
  EXPECT_EQ(w2.to_rational(), (RationalMatrix{{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}}));
  EXPECT_TRUE(w2.normalized());
}

TEST(Walsh, OrthogonalUpTo1024) {
  for (unsigned k = 0; k <= 10; ++k) {
    const auto w = walsh(k);
    EXPECT_TRUE(w.normalized()) << k;
    EXPECT_TRUE(w.orthogonal()) << k;
  }
  EXPECT_THROW(walsh(kMaxWalshExponent + 1), Error);
}

TEST(HadamardRealize, Examples) {
  EXPECT_EQ(hadamard_realize(Spectrum::of({1, 0}), walsh(1)), (RationalMatrix{{q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2)}}));
  EXPECT_EQ(hadamard_realize(Spectrum::of({1, 1}), walsh(1)), RationalMatrix::identity(2));
}

TEST(HadamardRealize, Errors) {
  try {
    hadamard_realize(Spectrum::of({1, 0, 0}), walsh(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::order_mismatch);
  }
  try {
    hadamard_realize(Spectrum::of({1, 2}), walsh(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_in_cone);
  }
  const HadamardMatrix unnormalized(2, {1, -1, 1, 1});
  EXPECT_TRUE(unnormalized.orthogonal());
  EXPECT_FALSE(unnormalized.normalized());
  EXPECT_THROW(hadamard_realize(Spectrum::of({1, 0}), unnormalized), Error);
}

TEST(HadamardRealize, ExactProperties) {
  std::mt19937_64 rng(211);
  for (int trial = 0; trial < 120; ++trial) {
    const unsigned k = static_cast<unsigned>(trial % 5);
    const std::size_t n = std::size_t{1} << k;
    const auto y = testing::random_cone_coordinates(rng, n, 30, 5, 0.2);
    const Spectrum lam = testing::cone_member(y);
    const auto h = walsh(k);
    const auto a = hadamard_realize(lam, h);
    const auto hr = h.to_rational();
    EXPECT_EQ(a, transpose(a));
    for (std::size_t i = 0; i < n; ++i) {
      Scalar row = 0;
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_GE(a(i, j), 0);
        row += a(i, j);
      }
      EXPECT_EQ(row, lam[0]);
      // A (H e_i) = lambda_i (H e_i)
      const auto col = hr.column(i);
      const auto image = oracle::apply(a, col);
      for (std::size_t r = 0; r < n; ++r) EXPECT_EQ(image[r], lam[i] * col[r]);
    }
  }
}

TEST(SplitSpectrum, WorkedExample) {
  const auto s = split_spectrum(kWorked, 4, 2);
  EXPECT_EQ(s.theta, q(34, 3));
  EXPECT_EQ(s.alpha.values(), (std::vector<Scalar>{q(26, 3), Scalar(1), Scalar(-2), Scalar(-3)}));
  EXPECT_EQ(s.beta.values(), (std::vector<Scalar>{q(22, 3), Scalar(-5)}));
}

TEST(SplitSpectrum, SmallCases) {
  const auto c = split_spectrum(Spectrum::of({5, 5}), 1, 1);
  // theta = (1/2)(10) - 5 = 0
  EXPECT_EQ(c.theta, 0);
  EXPECT_EQ(c.alpha, Spectrum::of({5}));
  EXPECT_EQ(c.beta, Spectrum::of({5}));

  const auto flat = split_spectrum(Spectrum::of({1, 1, 1}), 2, 1);
  EXPECT_EQ(flat.theta, 0);
  EXPECT_EQ(flat.alpha, Spectrum::of({1, 1}));
  EXPECT_EQ(flat.beta, Spectrum::of({1}));

  const auto two = split_spectrum(Spectrum::of({2, 0}), 1, 1);
  EXPECT_EQ(two.theta, 1);
  EXPECT_EQ(two.alpha, Spectrum::of({1}));
  EXPECT_EQ(two.beta, Spectrum::of({1}));

  EXPECT_THROW(split_spectrum(kWorked, 3, 2), Error);
  EXPECT_THROW(split_spectrum(Spectrum::of({2, 1, -1}), 2, 1), Error);
}

TEST(SplitSpectrum, HalvesStayInConeAndMergeBack) {
  std::mt19937_64 rng(223);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t total = 2 + trial % 10;
    const auto y = testing::random_cone_coordinates(rng, total, 25, 4, 0.2);
    const Spectrum lam = testing::cone_member(y);
    const std::size_t m = 1 + static_cast<std::size_t>(trial) % (total - 1);
    const std::size_t n = total - m;
    const auto s = split_spectrum(lam, m, n);
    EXPECT_GE(s.theta, 0);
    const auto ya = cone_coordinates(s.alpha).y;
    const auto yb = cone_coordinates(s.beta).y;
    EXPECT_TRUE(std::all_of(ya.begin(), ya.end(), [](const Scalar& v) { return sgn(v) >= 0; }));
    EXPECT_TRUE(std::all_of(yb.begin(), yb.end(), [](const Scalar& v) { return sgn(v) >= 0; }));
    // Both halves share y1 and keep their own tails of y.
    EXPECT_EQ(ya[0], y[0]);
    EXPECT_EQ(yb[0], y[0]);
    for (std::size_t i = 1; i < m; ++i) EXPECT_EQ(ya[i], y[i]);
    for (std::size_t i = 1; i < n; ++i) EXPECT_EQ(yb[i], y[m + i]);
    // Merged spectrum is the original list.
    std::vector<Scalar> merged = s.alpha.values();
    merged.insert(merged.end(), s.beta.values().begin(), s.beta.values().end());
    merged[0] += s.theta;
    merged[m] -= s.theta;
    EXPECT_EQ(merged, lam.values());
  }
}

TEST(Surd, ReducesDenominator) {
  // 646/36 -> sqrt(646)/6
  const auto s = Surd::sqrt_of(q(646, 36));
  EXPECT_EQ(s.radicand, 646);
  EXPECT_EQ(s.denominator, 6);
  EXPECT_EQ(Surd::sqrt_of(q(1, 2)), (Surd{Integer(2), Integer(2)}));
  EXPECT_EQ(Surd::sqrt_of(Scalar(4)), (Surd{Integer(4), Integer(1)}));
  EXPECT_EQ(Surd::sqrt_of(q(49, 9)).square(), q(49, 9));
  EXPECT_THROW(Surd::sqrt_of(Scalar(-1)), Error);
}

TEST(FiedlerGlue, ZeroThetaIsBlockDiagonal) {
  const FloatMatrix a{{1, 1}, {1, 1}};
  const FloatMatrix b{{3}};
  const double r = 1.0 / std::sqrt(2.0);
  const std::vector<double> u{r, r};
  const std::vector<double> v{1.0};
  const auto g = fiedler_glue(a, Scalar(2), u, b, Scalar(3) - 1, v, Scalar(0));
  EXPECT_EQ(g.params.rho, 0.0);
  const FloatMatrix expected{{1, 1, 0}, {1, 1, 0}, {0, 0, 3}};
  EXPECT_EQ(g.C, expected);
}

TEST(FiedlerGlue, TwoByTwo) {
  const FloatMatrix a{{2}};
  const FloatMatrix b{{1}};
  const std::vector<double> one{1.0};
  const auto g = fiedler_glue(a, Scalar(2), one, b, Scalar(1), one, Scalar(1));
  EXPECT_EQ(g.params.rho_squared, 2);
  EXPECT_NEAR(g.C(0, 1), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(g.C(0, 1), g.C(1, 0));
  const auto eig = symmetric_eigenvalues(g.C);
  EXPECT_NEAR(eig[0], 3.0, 1e-12);
  EXPECT_NEAR(eig[1], 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(g.perron_value, 3.0);
  // Perron vector really is one.
  const auto cv = multiply(g.C, std::span<const double>(g.perron_vector));
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(cv[i], 3.0 * g.perron_vector[i], 1e-12);
}

TEST(FiedlerGlue, Errors) {
  const FloatMatrix a{{1}};
  const FloatMatrix b{{2}};
  const std::vector<double> one{1.0};
  try {
    fiedler_glue(a, Scalar(1), one, b, Scalar(2), one, Scalar(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::perron_order_violation);
  }
  try {
    fiedler_glue(b, Scalar(2), one, a, Scalar(1), one, Scalar(-1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::negative_radicand);
  }
}

TEST(FiedlerGlue, SpectrumOfGluedRandomBlocks) {
  std::mt19937_64 rng(227);
  for (int trial = 0; trial < 100; ++trial) {
    const unsigned km = static_cast<unsigned>(trial % 3);
    const unsigned kn = static_cast<unsigned>((trial / 3) % 3);
    const std::size_t m = std::size_t{1} << km;
    const std::size_t n = std::size_t{1} << kn;
    auto ya = testing::random_cone_coordinates(rng, m, 20, 3, 0.2);
    auto yb = testing::random_cone_coordinates(rng, n, 20, 3, 0.2);
    Spectrum alpha = testing::cone_member(ya);
    Spectrum beta = testing::cone_member(yb);
    if (alpha[0] < beta[0]) std::swap(alpha, beta);
    const std::size_t ma = alpha.size();
    const std::size_t nb = beta.size();
    const auto a = to_float(hadamard_realize(alpha, walsh(log2_exact(ma))));
    const auto b = to_float(hadamard_realize(beta, walsh(log2_exact(nb))));
    const std::vector<double> u(ma, 1.0 / std::sqrt(static_cast<double>(ma)));
    const std::vector<double> v(nb, 1.0 / std::sqrt(static_cast<double>(nb)));
    const Scalar theta = testing::random_rational(rng, 0, 5, 3);
    const auto g = fiedler_glue(a, alpha[0], u, b, beta[0], v, theta);

    std::vector<Scalar> expected = alpha.values();
    expected.insert(expected.end(), beta.values().begin(), beta.values().end());
    expected[0] += theta;
    expected[ma] -= theta;
    const Spectrum want(expected);
    const double scale = std::max(1.0, std::abs(to_double(want[0])));
    EXPECT_LE(spectrum_distance(g.C, want), 1e-10 * scale) << trial;
    for (double e : g.C.entries()) EXPECT_GE(e, -1e-14);
  }
}

TEST(TwoHadamard, WorkedExampleExact) {
  const auto r = realize_two_hadamard_orders(kWorked, 4, 2);
  ASSERT_TRUE(r.exact);
  const auto& e = *r.exact;
  const long a[4][4] = {{7, 13, 22, 10}, {13, 7, 10, 22}, {22, 10, 7, 13}, {10, 22, 13, 7}};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(std::get<Scalar>(e(i, j)), q(a[i][j], 6));
  EXPECT_EQ(std::get<Scalar>(e(4, 4)), q(7, 6));
  EXPECT_EQ(std::get<Scalar>(e(4, 5)), q(37, 6));
  const Surd off{Integer(646), Integer(6)};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 4; j < 6; ++j) {
      EXPECT_EQ(std::get<Surd>(e(i, j)), off);
      EXPECT_EQ(std::get<Surd>(e(j, i)), off);
    }
  }
  EXPECT_NEAR(r.matrix(0, 4), std::sqrt(646.0) / 6.0, 1e-15);
  EXPECT_LE(spectrum_distance(r.matrix, kWorked), 1e-10 * 20);
}

TEST(TwoHadamard, SmallCases) {
  const auto two = realize_two_hadamard_orders(Spectrum::of({2, 0}), 1, 1);
  EXPECT_EQ(two.matrix, (FloatMatrix{{1, 1}, {1, 1}}));
  const auto flat = realize_two_hadamard_orders(Spectrum::of({3, 3}), 1, 1);
  EXPECT_EQ(flat.matrix, (FloatMatrix{{3, 0}, {0, 3}}));
}

TEST(TwoHadamard, Errors) {
  try {
    realize_two_hadamard_orders(Spectrum::of({3, 0, 0}), 3, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_hadamard_order);
  }
  try {
    realize_two_hadamard_orders(kWorked, 4, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::order_mismatch);
  }
  try {
    realize_two_hadamard_orders(Spectrum::of({2, 1, -1}), 2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_in_cone);
  }
}

TEST(TwoHadamard, RandomConeMembersIncludingSwappedBlocks) {
  std::mt19937_64 rng(229);
  std::size_t swapped = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = std::size_t{1} << (trial % 4);
    const std::size_t n = std::size_t{1} << ((trial / 4) % 3);
    const auto y = testing::random_cone_coordinates(rng, m + n, 30, 4, 0.2);
    const Spectrum lam = testing::cone_member(y);
    const auto split = split_spectrum(lam, m, n);
    if (split.alpha[0] < split.beta[0]) ++swapped;
    const auto r = realize_two_hadamard_orders(lam, m, n);
    const double scale = std::max(1.0, to_double(lam[0]));
    EXPECT_LE(spectrum_distance(r.matrix, lam), 1e-8 * scale) << trial;
    for (double e : r.matrix.entries()) EXPECT_GE(e, 0.0);
    EXPECT_EQ(r.matrix, transpose(r.matrix));
    const auto traces = power_traces(r.matrix, 4);
    for (double t : traces) EXPECT_GE(t, -1e-9);
  }
  EXPECT_GT(swapped, 0u);
}

TEST(Recursive, SmallCases) {
  const auto one = realize_recursive(Spectrum::of({4}));
  EXPECT_EQ(one.matrix, (FloatMatrix{{4}}));

  // (y1 + y2, y1 - y2) with y = (3, 1)
  const auto two = realize_recursive(Spectrum::of({4, 2}));
  EXPECT_EQ(two.matrix, (FloatMatrix{{3, 1}, {1, 3}}));

  const auto three = realize_recursive(Spectrum::of({3, 0, 0}));
  EXPECT_LE(spectrum_distance(three.matrix, Spectrum::of({3, 0, 0})), 1e-10);
  for (double e : three.matrix.entries()) EXPECT_GE(e, 0.0);

  EXPECT_THROW(realize_recursive(Spectrum::of({-1})), Error);
  EXPECT_THROW(realize_recursive(Spectrum::of({2, 1, -1})), Error);
}

TEST(Recursive, RandomConeMembers) {
  std::mt19937_64 rng(233);
  for (int trial = 0; trial < 250; ++trial) {
    const std::size_t n = 1 + trial % 12;
    const auto y = testing::random_cone_coordinates(rng, n, 50, 5, 0.15);
    const Spectrum lam = testing::cone_member(y);
    const auto r = realize_recursive(lam);
    const double scale = std::max(1.0, to_double(lam[0]));
    EXPECT_LE(spectrum_distance(r.matrix, lam), 1e-8 * scale) << trial;
    EXPECT_EQ(r.matrix, transpose(r.matrix));
    for (double e : r.matrix.entries()) EXPECT_GE(e, -1e-14);
    for (double t : power_traces(r.matrix, 4)) EXPECT_GE(t, -1e-9);
    EXPECT_NEAR(r.perron_value, to_double(lam[0]), 1e-9 * scale);
    const auto cv = multiply(r.matrix, std::span<const double>(r.perron_vector));
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(cv[i], r.perron_value * r.perron_vector[i], 1e-8 * scale);
    EXPECT_EQ(r.glue_trace.size(), n >= 2 ? n - 2 : 0);
  }
}

}  // namespace
}  // namespace niep
