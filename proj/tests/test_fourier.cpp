#include <gtest/gtest.h>

#include <cmath>

#include "shiftapprox/errors.hpp"
#include "shiftapprox/fourier.hpp"

using namespace shiftapprox;

namespace {

const Complex I{0.0, 1.0};

TruncatedSpectrum sine() { return TruncatedSpectrum::trigonometric({{1, -0.5 * I}, {-1, 0.5 * I}}); }
TruncatedSpectrum cosine() { return TruncatedSpectrum::trigonometric({{1, 0.5}, {-1, 0.5}}); }

}  // namespace

TEST(Fourier, InnerProductOfSineWithItself) {
  const Complex ip = inner_product(sine(), sine());
  EXPECT_NEAR(ip.real(), kPi, 1e-15);
  EXPECT_NEAR(ip.imag(), 0.0, 1e-15);
}

TEST(Fourier, SineAndCosineAreOrthogonal) {
  EXPECT_NEAR(std::abs(inner_product(sine(), cosine())), 0.0, 1e-15);
}

TEST(Fourier, SingleExponential) {
  const auto e3 = TruncatedSpectrum::trigonometric({{3, 1.0}});
  EXPECT_NEAR(inner_product(e3, e3).real(), kTwoPi, 1e-14);
  EXPECT_EQ(e3.cutoff(), 3);
}

TEST(Fourier, NormOfConstant) {
  const auto one = TruncatedSpectrum::trigonometric({{0, 1.0}});
  const Estimate est = l2_norm(one);
  EXPECT_NEAR(est.value, std::sqrt(kTwoPi), 1e-15);
  EXPECT_EQ(est.error, 0.0);
}

TEST(Fourier, NormCarriesTailBound) {
  TruncatedSpectrum s(4, 0.25);
  s.set(1, 1.0);
  EXPECT_DOUBLE_EQ(l2_norm(s).error, std::sqrt(kTwoPi) * 0.25);
  EXPECT_FALSE(s.exact());
}

TEST(Fourier, DerivativeOfSineIsCosine) {
  EXPECT_LE(max_coefficient_difference(derivative(sine(), 1), cosine()), 1e-16);
  const auto second = derivative(sine(), 2);
  EXPECT_LE(max_coefficient_difference(second, Complex(-1.0) * sine()), 1e-16);
}

TEST(Fourier, DerivativeNeedsDecay) {
  TruncatedSpectrum s(8, 1e-3, DecayBound{1.0, 1.0});
  s.set(1, 1.0);
  EXPECT_THROW(derivative(s, 1), InsufficientDecay);
  TruncatedSpectrum t(8, 1e-3, DecayBound{1.0, 3.0});
  t.set(1, 1.0);
  EXPECT_NO_THROW(derivative(t, 1));
}

TEST(Fourier, EvenAndOddParts) {
  const auto f = sine() + cosine();
  EXPECT_LE(max_coefficient_difference(even_part(f), cosine()), 1e-16);
  EXPECT_LE(max_coefficient_difference(odd_part(f), sine()), 1e-16);
  EXPECT_LE(max_coefficient_difference(reflect(sine()), Complex(-1.0) * sine()), 1e-16);
}

TEST(Fourier, ShiftSineByHalfPi) {
  // sin(x - π/2) = -cos x
  const auto shifted = shift(sine(), kPi / 2);
  EXPECT_LE(max_coefficient_difference(shifted, Complex(-1.0) * cosine()), 1e-15);
}

TEST(Fourier, EvaluateSine) {
  const ComplexEstimate v = evaluate(sine(), kPi / 2);
  EXPECT_NEAR(v.value.real(), 1.0, 1e-15);
  EXPECT_NEAR(v.value.imag(), 0.0, 1e-15);
  EXPECT_EQ(v.error, 0.0);
}

TEST(Fourier, ParsevalAgainstQuadrature) {
  const auto f = TruncatedSpectrum::trigonometric(
      {{0, 0.3}, {2, Complex(0.1, -0.4)}, {-2, Complex(0.1, 0.4)}, {5, 0.7}});
  const int points = 64;
  double sum = 0.0;
  for (int j = 0; j < points; ++j) {
    sum += std::norm(evaluate(f, kTwoPi * j / points).value);
  }
  const double quad = kTwoPi * sum / points;
  EXPECT_NEAR(l2_norm(f).value * l2_norm(f).value, quad, 1e-13);
}

TEST(Fourier, SetRejectsFrequencyBeyondCutoff) {
  TruncatedSpectrum s(2);
  EXPECT_THROW(s.set(3, 1.0), std::out_of_range);
  s.set(1, 0.0);
  EXPECT_EQ(s.size(), 0u);
}

TEST(Fourier, ScaledProgressionSumMatchesZeta) {
  // q = 1, s = 2 gives ζ(2).
  EXPECT_NEAR(scaled_progression_sum(2.0, 1.0), kPi * kPi / 6, 1e-14);
  EXPECT_GE(scaled_progression_sum(2.0, 1.0), kPi * kPi / 6);
  EXPECT_NEAR(progression_power_sum(1.0, 1.0, 4.0), std::pow(kPi, 4) / 90, 1e-14);
}

TEST(Fourier, EnvelopeTailSum) {
  // Σ_{|k|>1} (k^{-1})^2 = 2 (ζ(2) - 1)
  const double t = envelope_tail_sum(DecayBound{1.0, 1.0}, 1, 2.0);
  EXPECT_NEAR(t, 2 * (kPi * kPi / 6 - 1), 1e-13);
  EXPECT_TRUE(std::isinf(envelope_tail_sum(DecayBound{1.0, 0.5}, 1, 2.0)));
}

TEST(Fourier, ExactRationalPhases) {
  EXPECT_EQ(cis_pi_rational(1, 2), Complex(0.0, 1.0));
  EXPECT_EQ(cis_pi_rational(3, 1), Complex(-1.0, 0.0));
  EXPECT_EQ(sin_pi_rational(4, 2), 0.0);
  EXPECT_NEAR(sin_pi_rational(1, 6), 0.5, 1e-16);
}

TEST(Fourier, ClassMembership) {
  EXPECT_TRUE(belongs_to_class(sine(), ClassVariant::H0));
  EXPECT_FALSE(belongs_to_class(sine(), ClassVariant::H1));
  EXPECT_TRUE(belongs_to_class(cosine(), ClassVariant::H1));
  EXPECT_TRUE(belongs_to_class(sine(), ClassVariant::H2));
  EXPECT_TRUE(belongs_to_class(cosine(), ClassVariant::H2Even));
  const auto sin2 = TruncatedSpectrum::trigonometric({{2, -0.5 * I}, {-2, 0.5 * I}});
  EXPECT_FALSE(belongs_to_class(sin2, ClassVariant::H2));
  EXPECT_TRUE(belongs_to_class(sin2 + cosine(), ClassVariant::Periodic));
}

TEST(Fourier, ClassNamesRoundTrip) {
  for (auto v : {ClassVariant::H0, ClassVariant::H1, ClassVariant::H2,
                 ClassVariant::H2Even, ClassVariant::Periodic}) {
    EXPECT_EQ(parse_class(to_string(v)), v);
  }
  EXPECT_FALSE(parse_class("H9").has_value());
}
