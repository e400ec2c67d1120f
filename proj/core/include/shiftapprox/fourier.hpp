#pragma once

// Complex Fourier-series arithmetic on truncated spectra.
//
// A function f on the circle is stored through its coefficients
//   c_k(f) = (1/2π) ∫_{-π}^{π} f(t) e^{-ikt} dt,   |k| <= cutoff,
// together with a certified bound on the L2 norm of everything that was
// discarded.  Inner products and norms follow the unnormalised convention
// ‖f‖² = ∫_{-π}^{π} |f|², so by Parseval ‖f‖² = 2π Σ |c_k|².

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace shiftapprox {

using Complex = std::complex<double>;
using Frequency = std::int64_t;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// Power-law envelope |c_k| <= scale * |k|^{-exponent}, valid for every
// frequency beyond the cutoff of the spectrum that carries it.
struct DecayBound {
  double scale = 0.0;
  double exponent = 0.0;
};

// Default comparison tolerances for coefficientwise identities.
struct Tolerance {
  double relative = 1e-12;
  double absolute = 1e-14;
};

bool approx_equal(Complex a, Complex b, Tolerance tol = {});

// Value together with a pointwise or normwise error bound.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

struct ComplexEstimate {
  Complex value{};
  double error = 0.0;
};

class TruncatedSpectrum {
 public:
  using Coefficients = std::map<Frequency, Complex>;

  TruncatedSpectrum() = default;
  explicit TruncatedSpectrum(Frequency cutoff, double tail_bound = 0.0,
                             std::optional<DecayBound> decay = std::nullopt);

  // Exact trigonometric polynomial; the cutoff is the largest |k| present
  // (at least 1).
  static TruncatedSpectrum trigonometric(const Coefficients& coeffs);

  Frequency cutoff() const { return cutoff_; }
  double tail_bound() const { return tail_bound_; }
  const std::optional<DecayBound>& decay() const { return decay_; }
  bool exact() const { return tail_bound_ == 0.0; }

  const Coefficients& coefficients() const { return coeffs_; }
  Complex operator[](Frequency k) const;
  std::size_t size() const { return coeffs_.size(); }

  // Stores c_k; |k| must not exceed the cutoff.  Exact zeros are dropped.
  void set(Frequency k, Complex value);
  void add(Frequency k, Complex value);

  void set_tail_bound(double tail);
  void set_decay(std::optional<DecayBound> decay) { decay_ = decay; }

  // Σ |c_k|² over stored frequencies.
  double coefficient_energy() const;

 private:
  Frequency cutoff_ = 0;
  double tail_bound_ = 0.0;
  std::optional<DecayBound> decay_;
  Coefficients coeffs_;
};

TruncatedSpectrum operator+(const TruncatedSpectrum& a,
                            const TruncatedSpectrum& b);
TruncatedSpectrum operator-(const TruncatedSpectrum& a,
                            const TruncatedSpectrum& b);
TruncatedSpectrum operator*(Complex s, const TruncatedSpectrum& a);

// 2π Σ_k a_k conj(b_k) over the frequencies stored in both.
Complex inner_product(const TruncatedSpectrum& a, const TruncatedSpectrum& b);

// Norm of the stored part; the error is the certified tail bound.
Estimate l2_norm(const TruncatedSpectrum& a);

// Coefficient k becomes (ik)^r a_k.  A spectrum with a nonzero tail needs a
// decay envelope with exponent > r + 1/2, otherwise InsufficientDecay.
TruncatedSpectrum derivative(const TruncatedSpectrum& a, int r);

TruncatedSpectrum even_part(const TruncatedSpectrum& a);
TruncatedSpectrum odd_part(const TruncatedSpectrum& a);

// x ↦ a(-x).
TruncatedSpectrum reflect(const TruncatedSpectrum& a);

// x ↦ a(x - h): coefficient k is multiplied by e^{-ikh}.
TruncatedSpectrum shift(const TruncatedSpectrum& a, double h);

// Σ_k a_k e^{ikx}; the error is a pointwise bound on the discarded tail
// (infinite when the tail cannot be bounded pointwise).
ComplexEstimate evaluate(const TruncatedSpectrum& a, double x);

// Certified Σ_{|k|>K} (scale |k|^{-exponent})^q.  Infinite when the series
// diverges.
double envelope_tail_sum(const DecayBound& env, Frequency cutoff, double power);

// Σ_{k>=0} (first + step k)^{-s} for s > 1, first > 0 (Hurwitz zeta).
double progression_power_sum(double first, double step, double s);
// Σ_{k>=0} (1 + k/q)^{-s} = q^s ζ(s, q), rounded upwards; s > 1, q > 0.
double scaled_progression_sum(double s, double q);

// Largest coefficientwise difference |a_k - b_k| over the union of supports.
double max_coefficient_difference(const TruncatedSpectrum& a,
                                  const TruncatedSpectrum& b);

// e^{iπ p/q} with exact values at multiples of π/2.
Complex cis_pi_rational(std::int64_t p, std::int64_t q);
// sin(π p/q) with exact zeros at integer multiples of π.
double sin_pi_rational(std::int64_t p, std::int64_t q);

// Smoothness class of a function (which symmetry, which derivative order).
enum class ClassVariant {
  H0,      // odd
  H1,      // even
  H2,      // odd, u(· + π/2) even  (odd harmonics only)
  H2Even,  // even, u(· + π/2) odd (odd harmonics only)
  Periodic // no symmetry constraint
};

struct FunctionClassTag {
  ClassVariant variant = ClassVariant::H0;
  int r = 1;
};

const char* to_string(ClassVariant v);
std::optional<ClassVariant> parse_class(std::string_view name);

// Whether the spectrum has the coefficient symmetry of the class, within a
// relative tolerance of the largest coefficient.
bool belongs_to_class(const TruncatedSpectrum& a, ClassVariant v,
                      double rel_tol = 1e-12);

}  // namespace shiftapprox
