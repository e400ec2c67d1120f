#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "shiftapprox/errors.hpp"
#include "shiftapprox/splines.hpp"

using namespace shiftapprox;

namespace {

const Complex I{0.0, 1.0};

void expect_knots(const KnotVector& kv, std::vector<double> expected) {
  ASSERT_EQ(kv.knots.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(kv.knots[i], expected[i], 1e-15);
}

SampledFunction sample(double segment, std::size_t points, double (*fn)(double)) {
  SampledFunction u = SampledFunction::uniform(segment, points);
  for (std::size_t i = 0; i < points; ++i) u.values[i] = fn(u.grid[i]);
  return u;
}

double sin_fn(double x) { return std::sin(x); }
double cos_fn(double x) { return std::cos(x); }

}  // namespace

TEST(Splines, KnotTables) {
  expect_knots(knots_for_degree(0, 3, 3), {kPi / 4, kPi / 2, 3 * kPi / 4});
  expect_knots(knots_for_degree(1, 3, 2), {kPi / 4, 3 * kPi / 4});
  expect_knots(knots_for_degree(2, 3, 2), {kPi / 5, 2 * kPi / 5});
  EXPECT_DOUBLE_EQ(knots_for(2, 2, KnotParity::Integer).segment, kPi / 2);
}

TEST(Splines, NaturalParity) {
  EXPECT_EQ(natural_parity(0, 3), KnotParity::Integer);
  EXPECT_EQ(natural_parity(0, 2), KnotParity::Half);
  EXPECT_EQ(natural_parity(1, 2), KnotParity::Integer);
  EXPECT_EQ(natural_parity(1, 3), KnotParity::Half);
  EXPECT_EQ(natural_parity(2, 1), KnotParity::Integer);
}

TEST(Splines, QIndex) {
  EXPECT_EQ((SplineSpaceSpec{3, 0, 2, KnotParity::Integer}.q_index()), 1);
  EXPECT_EQ((SplineSpaceSpec{3, 0, 2, KnotParity::Half}.q_index()), 2);
  EXPECT_EQ((SplineSpaceSpec{2, 1, 2, KnotParity::Integer}.q_index()), 3);
  EXPECT_EQ((SplineSpaceSpec{2, 2, 2, KnotParity::Half}.q_index()), 6);
  EXPECT_THROW((SplineSpaceSpec{2, 3, 2, KnotParity::Half}.validate()), std::invalid_argument);
}

TEST(Splines, PeriodizeSineOnHalfPeriod) {
  const auto s = periodize(sample(kPi, 65, sin_fn), 0, 32);
  EXPECT_NEAR(std::abs(s[1] + 0.5 * I), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s[-1] - 0.5 * I), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s[3]), 0.0, 1e-14);
  EXPECT_TRUE(belongs_to_class(s, ClassVariant::H0));
}

TEST(Splines, PeriodizeCosine) {
  const auto s = periodize(sample(kPi, 65, cos_fn), 1, 32);
  EXPECT_NEAR(std::abs(s[1] - 0.5), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s[-1] - 0.5), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s[0]), 0.0, 1e-14);
  EXPECT_TRUE(belongs_to_class(s, ClassVariant::H1));
}

TEST(Splines, PeriodizeQuarterPeriod) {
  const auto s = periodize(sample(kPi / 2, 33, sin_fn), 2, 32);
  EXPECT_NEAR(std::abs(s[1] + 0.5 * I), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s[2]), 0.0, 1e-14);
  EXPECT_TRUE(belongs_to_class(s, ClassVariant::H2));
}

TEST(Splines, RoundTrips) {
  const std::tuple<int, double, double (*)(double)> cases[] = {
      {0, kPi, sin_fn}, {1, kPi, cos_fn}, {2, kPi / 2, sin_fn}};
  for (const auto& [family, segment, fn] : cases) {
    const auto u = sample(segment, 41, fn);
    const auto back = restrict(periodize(u, family, 64), family, 41);
    ASSERT_EQ(back.values.size(), u.values.size());
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      EXPECT_NEAR(std::abs(back.values[i] - u.values[i]), 0.0, 1e-13) << family << ' ' << i;
    }
  }
}

TEST(Splines, PeriodizeRejectsBoundaryViolation) {
  EXPECT_THROW(periodize(sample(kPi, 65, cos_fn), 0, 32), BoundaryViolation);
  EXPECT_THROW(periodize(sample(kPi / 2, 33, cos_fn), 2, 32), BoundaryViolation);
}

TEST(Splines, TransferenceFactor) {
  EXPECT_DOUBLE_EQ(transference_factor(0), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(transference_factor(1), std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(transference_factor(2), 2.0);
}

TEST(Splines, DimensionEqualsN) {
  for (int family = 0; family <= 2; ++family) {
    for (int d = 0; d <= 3; ++d) {
      for (int n = 1; n <= 4; ++n) {
        for (auto parity : {KnotParity::Integer, KnotParity::Half}) {
          const SplineSpaceSpec spec{d, family, n, parity};
          EXPECT_EQ(dimension_check(spec, 512 * n), n) << spec.describe();
        }
      }
    }
  }
}

TEST(Splines, EqualsQForNaturalParity) {
  EXPECT_TRUE((SplineSpaceSpec{3, 0, 3, KnotParity::Integer}.equals_q()));
  EXPECT_FALSE((SplineSpaceSpec{2, 0, 3, KnotParity::Integer}.equals_q()));
  EXPECT_TRUE((SplineSpaceSpec{2, 1, 3, KnotParity::Integer}.equals_q()));
}

TEST(Splines, OddElementVanishesAtOrigin) {
  const SplineSpaceSpec spec{3, 0, 3, KnotParity::Integer};
  for (const auto& s : q_space_basis(spec, 1024)) {
    EXPECT_NEAR(std::abs(evaluate(s, 0.0).value), 0.0, 1e-14);
  }
}

TEST(Splines, BoundaryConditionsHold) {
  for (int family = 0; family <= 2; ++family) {
    for (int d = 1; d <= 4; ++d) {
      const SplineSpaceSpec spec{d, family, 3, natural_parity(family, d)};
      for (const auto& s : q_space_basis(spec, 512 * 3)) {
        EXPECT_TRUE(verify_boundary(s, spec).ok()) << spec.describe();
      }
    }
  }
}

TEST(Splines, DerivativeOrderLimit) {
  const SplineSpaceSpec spec{2, 1, 3, KnotParity::Integer};
  const auto b = q_space_basis(spec, 512);
  EXPECT_NO_THROW(spline_derivative(b.back(), 2, 1, 0.3));
  EXPECT_THROW(spline_derivative(b.back(), 2, 2, 0.3), InsufficientDecay);
}

TEST(Splines, KnotsDetected) {
  const SplineSpaceSpec spec{2, 1, 3, KnotParity::Integer};
  const KnotReport rep = detect_knots(spec, 512 * 3);
  EXPECT_TRUE(rep.ok());
  EXPECT_TRUE(rep.all_found);
  EXPECT_EQ(rep.expected.size(), 2u);
}

TEST(Splines, ComplexFormatting) {
  for (Complex z : {Complex(1.5, -2.0), Complex(-0.1, 0.0), Complex(1e-300, 3.25e10)}) {
    EXPECT_EQ(parse_complex(format_complex(z)), z);
  }
  EXPECT_THROW(parse_complex("abc"), std::invalid_argument);
}

TEST(Splines, CsvRoundTrip) {
  const auto u = sample(kPi, 17, sin_fn);
  std::ostringstream os;
  write_csv(os, u);
  EXPECT_EQ(os.str().rfind("x,value\n", 0), 0u);
  std::istringstream is(os.str());
  const auto back = read_sampled_csv(is);
  EXPECT_EQ(back.grid, u.grid);
  EXPECT_EQ(back.values, u.values);
}
