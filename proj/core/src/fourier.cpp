#include "shiftapprox/fourier.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "shiftapprox/errors.hpp"
#include "summation.hpp"

namespace shiftapprox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

Complex i_pow(int r) {
  switch (floor_mod(r, 4)) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

struct GslHandlerGuard {
  GslHandlerGuard() : previous(gsl_set_error_handler_off()) {}
  ~GslHandlerGuard() { gsl_set_error_handler(previous); }
  gsl_error_handler_t* previous;
};

}  // namespace

bool approx_equal(Complex a, Complex b, Tolerance tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= std::max(tol.absolute, tol.relative * scale);
}

TruncatedSpectrum::TruncatedSpectrum(Frequency cutoff, double tail_bound,
                                     std::optional<DecayBound> decay)
    : cutoff_(cutoff), decay_(decay) {
  if (cutoff < 0) throw std::invalid_argument("cutoff must be nonnegative");
  set_tail_bound(tail_bound);
}

TruncatedSpectrum TruncatedSpectrum::trigonometric(const Coefficients& coeffs) {
  Frequency cutoff = 1;
  for (const auto& [k, c] : coeffs) cutoff = std::max(cutoff, k < 0 ? -k : k);
  TruncatedSpectrum s(cutoff);
  for (const auto& [k, c] : coeffs) s.set(k, c);
  return s;
}

Complex TruncatedSpectrum::operator[](Frequency k) const {
  const auto it = coeffs_.find(k);
  return it == coeffs_.end() ? Complex{} : it->second;
}

void TruncatedSpectrum::set(Frequency k, Complex value) {
  if (k > cutoff_ || -k > cutoff_) {
    throw std::out_of_range("frequency " + std::to_string(k) +
                            " beyond cutoff " + std::to_string(cutoff_));
  }
  if (value == Complex{}) {
    coeffs_.erase(k);
  } else {
    coeffs_[k] = value;
  }
}

void TruncatedSpectrum::add(Frequency k, Complex value) {
  set(k, (*this)[k] + value);
}

void TruncatedSpectrum::set_tail_bound(double tail) {
  if (!(tail >= 0.0)) throw std::invalid_argument("tail bound must be >= 0");
  tail_bound_ = tail;
}

double TruncatedSpectrum::coefficient_energy() const {
  detail::CompensatedSum sum;
  for (const auto& [k, c] : coeffs_) sum.add(std::norm(c));
  return sum.value();
}

namespace {

TruncatedSpectrum combine(const TruncatedSpectrum& a, const TruncatedSpectrum& b,
                          double sign) {
  TruncatedSpectrum out(std::max(a.cutoff(), b.cutoff()),
                        a.tail_bound() + b.tail_bound());
  for (const auto& [k, c] : a.coefficients()) out.set(k, c);
  for (const auto& [k, c] : b.coefficients()) out.add(k, sign * c);
  return out;
}

}  // namespace

TruncatedSpectrum operator+(const TruncatedSpectrum& a,
                            const TruncatedSpectrum& b) {
  return combine(a, b, 1.0);
}

TruncatedSpectrum operator-(const TruncatedSpectrum& a,
                            const TruncatedSpectrum& b) {
  return combine(a, b, -1.0);
}

TruncatedSpectrum operator*(Complex s, const TruncatedSpectrum& a) {
  std::optional<DecayBound> decay = a.decay();
  if (decay) decay->scale *= std::abs(s);
  TruncatedSpectrum out(a.cutoff(), std::abs(s) * a.tail_bound(), decay);
  for (const auto& [k, c] : a.coefficients()) out.set(k, s * c);
  return out;
}

Complex inner_product(const TruncatedSpectrum& a, const TruncatedSpectrum& b) {
  detail::CompensatedComplexSum sum;
  if (a.size() <= b.size()) {
    for (const auto& [k, c] : a.coefficients()) {
      const auto it = b.coefficients().find(k);
      if (it != b.coefficients().end()) sum.add(c * std::conj(it->second));
    }
  } else {
    for (const auto& [k, c] : b.coefficients()) {
      const auto it = a.coefficients().find(k);
      if (it != a.coefficients().end()) sum.add(it->second * std::conj(c));
    }
  }
  return kTwoPi * sum.value();
}

Estimate l2_norm(const TruncatedSpectrum& a) {
  return {std::sqrt(kTwoPi * a.coefficient_energy()),
          std::sqrt(kTwoPi) * a.tail_bound()};
}

TruncatedSpectrum derivative(const TruncatedSpectrum& a, int r) {
  if (r < 0) throw std::invalid_argument("derivative order must be >= 0");
  if (r == 0) return a;
  double tail = 0.0;
  std::optional<DecayBound> decay;
  if (a.decay()) decay = DecayBound{a.decay()->scale, a.decay()->exponent - r};
  if (!a.exact()) {
    if (!decay || !(decay->exponent > 0.5)) {
      throw InsufficientDecay(
          "cannot certify the tail of an order-" + std::to_string(r) +
          " derivative without a decay envelope of exponent > r + 1/2");
    }
    tail = std::sqrt(envelope_tail_sum(*decay, a.cutoff(), 2.0));
  }
  TruncatedSpectrum out(a.cutoff(), tail, decay);
  const Complex ir = i_pow(r);
  for (const auto& [k, c] : a.coefficients()) {
    out.set(k, ir * std::pow(static_cast<double>(k), r) * c);
  }
  return out;
}

namespace {

TruncatedSpectrum symmetric_part(const TruncatedSpectrum& a, double sign) {
  TruncatedSpectrum out(a.cutoff(), a.tail_bound(), a.decay());
  for (const auto& [k, c] : a.coefficients()) {
    out.add(k, 0.5 * c);
    out.add(-k, 0.5 * sign * c);
  }
  return out;
}

}  // namespace

TruncatedSpectrum even_part(const TruncatedSpectrum& a) {
  return symmetric_part(a, 1.0);
}

TruncatedSpectrum odd_part(const TruncatedSpectrum& a) {
  return symmetric_part(a, -1.0);
}

TruncatedSpectrum reflect(const TruncatedSpectrum& a) {
  TruncatedSpectrum out(a.cutoff(), a.tail_bound(), a.decay());
  for (const auto& [k, c] : a.coefficients()) out.set(-k, c);
  return out;
}

TruncatedSpectrum shift(const TruncatedSpectrum& a, double h) {
  TruncatedSpectrum out(a.cutoff(), a.tail_bound(), a.decay());
  for (const auto& [k, c] : a.coefficients()) {
    out.set(k, c * std::polar(1.0, -static_cast<double>(k) * h));
  }
  return out;
}

ComplexEstimate evaluate(const TruncatedSpectrum& a, double x) {
  detail::CompensatedComplexSum sum;
  for (const auto& [k, c] : a.coefficients()) {
    sum.add(c * std::polar(1.0, static_cast<double>(k) * x));
  }
  double error = 0.0;
  if (!a.exact()) {
    error = a.decay() ? envelope_tail_sum(*a.decay(), a.cutoff(), 1.0) : kInf;
  }
  return {sum.value(), error};
}

double scaled_progression_sum(double s, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("progression must be positive");
  if (!(s > 1.0)) return kInf;
  // Integral comparison: Σ (1 + k/q)^{-s} <= 1 + q/(s-1).
  const double fallback = 1.0 + q / (s - 1.0);
  if (s * std::log(q) > 600.0) return fallback;
  GslHandlerGuard guard;
  gsl_sf_result result;
  const int status = gsl_sf_hzeta_e(s, q, &result);
  if (status != GSL_SUCCESS) return fallback;
  // Absorb the reported rounding error so the value stays an upper bound.
  const double scale = std::pow(q, s);
  return std::min(fallback, scale * (result.val + std::abs(result.err)));
}

double progression_power_sum(double first, double step, double s) {
  if (!(first > 0.0) || !(step > 0.0)) {
    throw std::invalid_argument("progression must be positive");
  }
  if (!(s > 1.0)) return kInf;
  return std::pow(first, -s) * scaled_progression_sum(s, first / step);
}

double envelope_tail_sum(const DecayBound& env, Frequency cutoff, double power) {
  if (env.scale == 0.0) return 0.0;
  const double s = env.exponent * power;
  if (!(s > 1.0)) return kInf;
  return 2.0 * std::pow(env.scale, power) *
         progression_power_sum(static_cast<double>(cutoff + 1), 1.0, s);
}

double max_coefficient_difference(const TruncatedSpectrum& a,
                                  const TruncatedSpectrum& b) {
  double diff = 0.0;
  for (const auto& [k, c] : a.coefficients()) {
    diff = std::max(diff, std::abs(c - b[k]));
  }
  for (const auto& [k, c] : b.coefficients()) {
    if (!a.coefficients().contains(k)) diff = std::max(diff, std::abs(c));
  }
  return diff;
}

Complex cis_pi_rational(std::int64_t p, std::int64_t q) {
  if (q <= 0) throw std::invalid_argument("denominator must be positive");
  // Reduce to p/q in [0, 2).
  const std::int64_t r = floor_mod(p, 2 * q);
  if ((2 * r) % q == 0) {
    switch ((2 * r) / q) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = kPi * static_cast<double>(r > q ? r - 2 * q : r) /
                       static_cast<double>(q);
  return std::polar(1.0, angle);
}

double sin_pi_rational(std::int64_t p, std::int64_t q) {
  return cis_pi_rational(p, q).imag();
}

const char* to_string(ClassVariant v) {
  switch (v) {
    case ClassVariant::H0: return "H0";
    case ClassVariant::H1: return "H1";
    case ClassVariant::H2: return "H2";
    case ClassVariant::H2Even: return "H2Even";
    case ClassVariant::Periodic: return "Periodic";
  }
  return "?";
}

std::optional<ClassVariant> parse_class(std::string_view name) {
  if (name == "H0" || name == "h0") return ClassVariant::H0;
  if (name == "H1" || name == "h1") return ClassVariant::H1;
  if (name == "H2" || name == "h2") return ClassVariant::H2;
  if (name == "H2Even" || name == "h2even") return ClassVariant::H2Even;
  if (name == "Periodic" || name == "periodic") return ClassVariant::Periodic;
  return std::nullopt;
}

bool belongs_to_class(const TruncatedSpectrum& a, ClassVariant v,
                      double rel_tol) {
  double scale = 0.0;
  for (const auto& [k, c] : a.coefficients()) scale = std::max(scale, std::abs(c));
  const double tol = rel_tol * scale;
  for (const auto& [k, c] : a.coefficients()) {
    const Complex mirror = a[-k];
    switch (v) {
      case ClassVariant::Periodic:
        break;
      case ClassVariant::H0:
        if (std::abs(c + mirror) > tol) return false;
        break;
      case ClassVariant::H1:
        if (std::abs(c - mirror) > tol) return false;
        break;
      case ClassVariant::H2:
        if (std::abs(c + mirror) > tol) return false;
        if (k % 2 == 0 && std::abs(c) > tol) return false;
        break;
      case ClassVariant::H2Even:
        if (std::abs(c - mirror) > tol) return false;
        if (k % 2 == 0 && std::abs(c) > tol) return false;
        break;
    }
  }
  return true;
}

}  // namespace shiftapprox
