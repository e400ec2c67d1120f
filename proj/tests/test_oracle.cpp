#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "shiftapprox/certify.hpp"
#include "shiftapprox/errors.hpp"
#include "shiftapprox/oracle.hpp"

using namespace shiftapprox;

namespace {

TruncatedSpectrum random_polynomial(std::mt19937_64& rng, int degree) {
  std::normal_distribution<double> g;
  TruncatedSpectrum::Coefficients c;
  for (Frequency k = -degree; k <= degree; ++k) c[k] = Complex(g(rng), g(rng));
  return TruncatedSpectrum::trigonometric(c);
}

std::vector<TruncatedSpectrum> spectra(const std::vector<BasisElement>& b) {
  std::vector<TruncatedSpectrum> out;
  for (const auto& e : b) out.push_back(e.spectrum);
  return out;
}

}  // namespace

TEST(Oracle, SineSpaceOverDirichlet) {
  for (int m = 1; m <= 4; ++m) {
    for (int r = 1; r <= 3; ++r) {
      const RatioProblem p{{KernelSpec::dirichlet(m), m + 1, SpaceVariant::Sym0, m},
                           {ClassVariant::H0, r}, 512};
      const RatioResult res = worst_case_ratio(p);
      EXPECT_NEAR(res.value, std::pow(m + 1.0, -2 * r), 1e-14);
    }
  }
}

TEST(Oracle, OddHarmonicSpaceOverDirichlet) {
  for (int m = 1; m <= 3; ++m) {
    const int n = 2 * m + 1;
    const RatioProblem p{{KernelSpec::dirichlet(n - 1), n, SpaceVariant::Sym2, m},
                         {ClassVariant::H2, 2}, 512};
    EXPECT_NEAR(worst_case_ratio(p).value, std::pow(2.0 * m + 1, -4), 1e-14);
  }
}

TEST(Oracle, CosineSpaceOverDirichlet) {
  const int n = 4;
  const RatioProblem p{{KernelSpec::dirichlet(n - 1), n, SpaceVariant::Sym1, n},
                       {ClassVariant::H1, 1}, 512};
  EXPECT_NEAR(worst_case_ratio(p).value, 1.0 / (n * n), 1e-14);
}

TEST(Oracle, BSplineSineSpaceAttainsWidth) {
  for (int n = 3; n <= 5; ++n) {
    for (int r = 1; r <= 2; ++r) {
      const RatioProblem p{{KernelSpec::bspline(n, r), n, SpaceVariant::Sym0, n - 1},
                           {ClassVariant::H0, r}, 1024};
      const RatioResult res = worst_case_ratio(p);
      const double width = std::pow(static_cast<double>(n), -2 * r);
      EXPECT_LE(res.value, width * (1 + 1e-6));
      EXPECT_GE(res.value, width * (1 - 1e-6));
      EXPECT_GE(res.truncation_gap, 0.0);
      EXPECT_GT(res.iterations, 0u);
    }
  }
}

TEST(Oracle, DeterministicForSeed) {
  const RatioProblem p{{KernelSpec::bspline(4, 1), 4, SpaceVariant::CrossM, 4},
                       {ClassVariant::Periodic, 2}, 256, true};
  EXPECT_EQ(worst_case_ratio(p).value, worst_case_ratio(p).value);
}

TEST(Oracle, RejectsSmallCutoffAndMissingConstants) {
  RatioProblem p{{KernelSpec::bspline(4, 1), 4, SpaceVariant::Sym0, 3}, {ClassVariant::H0, 1}, 8};
  EXPECT_THROW(worst_case_ratio(p), std::invalid_argument);
  // Sym0 contains no constants, so the even class is unbounded there.
  RatioProblem q{{KernelSpec::bspline(4, 1), 4, SpaceVariant::Sym0, 3}, {ClassVariant::H1, 1}, 64};
  EXPECT_THROW(worst_case_ratio(q), std::invalid_argument);
}

TEST(Oracle, EllipsoidWidths) {
  for (int n = 1; n <= 6; ++n) {
    for (int r = 1; r <= 3; ++r) {
      EXPECT_DOUBLE_EQ(ellipsoid_width({ClassVariant::H0, r}, n, 4096), std::pow(n + 1.0, -r));
      EXPECT_DOUBLE_EQ(ellipsoid_width({ClassVariant::H1, r}, n, 4096), std::pow(n, -r));
      EXPECT_DOUBLE_EQ(ellipsoid_width({ClassVariant::H2, r}, n, 4096), std::pow(2.0 * n + 1, -r));
    }
  }
  EXPECT_THROW(ellipsoid_width({ClassVariant::H0, 1}, 10, 5), TruncationTooSmall);
}

TEST(Oracle, BruteForceMatchesProjectionOnOrthogonalBasis) {
  std::mt19937_64 rng(21);
  const ShiftSpaceSpec s{KernelSpec::bspline(6, 2), 6, SpaceVariant::Cross, 0};
  const auto b = basis(s, 128);
  for (int i = 0; i < 5; ++i) {
    const auto f = random_polynomial(rng, 15);
    const LeastSquares ls = brute_force_projection(f, spectra(b));
    const Projection p = project(f, b);
    EXPECT_NEAR(ls.error, p.error, 1e-9 * p.error);
    EXPECT_LE(max_coefficient_difference(ls.approximant, p.approximant), 1e-9);
  }
}

TEST(Oracle, RawShiftsSpanFullSpace) {
  std::mt19937_64 rng(22);
  for (int n : {2, 3, 5}) {
    const auto k = KernelSpec::bspline(n, 2);
    const auto raw = raw_shifts(k, n, 128);
    EXPECT_EQ(raw.size(), static_cast<std::size_t>(2 * n));
    const ShiftSpaceSpec s{k, n, SpaceVariant::Full, 0};
    const auto f = random_polynomial(rng, 3 * n);
    const LeastSquares ls = brute_force_projection(f, raw);
    const Projection p = project(f, s, 128);
    EXPECT_NEAR(ls.error, p.error, 1e-9 * p.error);
  }
}

TEST(Oracle, DuplicatedColumnIsIllConditioned) {
  const auto raw = raw_shifts(KernelSpec::bspline(3, 1), 3, 64);
  auto dup = raw;
  dup.push_back(raw.front());
  const auto f = TruncatedSpectrum::trigonometric({{1, 1.0}});
  EXPECT_THROW(brute_force_projection(f, dup), IllConditioned);
}
