#include "shiftapprox/shift_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "shiftapprox/errors.hpp"
#include "summation.hpp"

namespace shiftapprox {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Smallest frequency >= -cutoff congruent to l mod period.
Frequency first_in_class(Frequency l, std::int64_t period, Frequency cutoff) {
  return -cutoff + floor_mod(l + cutoff, period);
}

}  // namespace

const char* to_string(SpaceVariant v) {
  switch (v) {
    case SpaceVariant::Full: return "Full";
    case SpaceVariant::Cross: return "Cross";
    case SpaceVariant::CrossM: return "CrossM";
    case SpaceVariant::Sym0: return "Sym0";
    case SpaceVariant::Sym1: return "Sym1";
    case SpaceVariant::Sym2: return "Sym2";
    case SpaceVariant::Sym2Even: return "Sym2Even";
    case SpaceVariant::EvenParts: return "EvenParts";
  }
  return "?";
}

std::optional<SpaceVariant> parse_space_variant(std::string_view name) {
  for (SpaceVariant v : {SpaceVariant::Full, SpaceVariant::Cross, SpaceVariant::CrossM,
                         SpaceVariant::Sym0, SpaceVariant::Sym1, SpaceVariant::Sym2,
                         SpaceVariant::Sym2Even, SpaceVariant::EvenParts}) {
    if (name == to_string(v)) return v;
  }
  return std::nullopt;
}

const char* to_string(ElementKind k) {
  switch (k) {
    case ElementKind::Phi: return "phi";
    case ElementKind::PhiEven: return "phi_even";
    case ElementKind::PhiOdd: return "phi_odd";
  }
  return "?";
}

void ShiftSpaceSpec::validate() const {
  if (n < 1) throw std::invalid_argument("space parameter n must be >= 1");
  auto fail = [&](const char* rule) {
    throw std::invalid_argument(std::string(to_string(variant)) + " requires " + rule +
                                " (n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
  };
  switch (variant) {
    case SpaceVariant::Full:
    case SpaceVariant::Cross:
      break;
    case SpaceVariant::CrossM:
    case SpaceVariant::Sym1:
      if (m < 1 || m > n) fail("1 <= m <= n");
      break;
    case SpaceVariant::Sym0:
    case SpaceVariant::EvenParts:
      if (m < 0 || m + 1 > n) fail("m + 1 <= n");
      break;
    case SpaceVariant::Sym2:
    case SpaceVariant::Sym2Even:
      if (m < 0 || 2 * m + 1 > n) fail("2m + 1 <= n");
      break;
  }
}

int ShiftSpaceSpec::dimension() const {
  switch (variant) {
    case SpaceVariant::Full: return 2 * n;
    case SpaceVariant::Cross: return 2 * n - 1;
    case SpaceVariant::CrossM: return 2 * m - 1;
    default: return m;
  }
}

BasisElement phi(const KernelSpec& kernel, int n, Frequency l, Frequency cutoff) {
  if (n < 1) throw std::invalid_argument("space parameter n must be >= 1");
  if (cutoff < 2 * static_cast<Frequency>(n)) {
    throw std::invalid_argument("truncation cutoff must satisfy K >= 2n");
  }
  const std::int64_t period = 2 * static_cast<std::int64_t>(n);
  const double tail_energy = class_tail_energy(kernel, n, l, cutoff);
  TruncatedSpectrum spectrum(cutoff, std::sqrt(tail_energy),
                             global_envelope(kernel, cutoff));
  for (Frequency k = first_in_class(l, period, cutoff); k <= cutoff; k += period) {
    spectrum.set(k, coeff(kernel, k));
  }
  BasisElement e;
  e.kind = ElementKind::Phi;
  e.l = l;
  e.d_norm = spectrum.coefficient_energy();
  e.d_tail = tail_energy;
  e.spectrum = std::move(spectrum);
  return e;
}

namespace {

BasisElement symmetric_phi(const KernelSpec& kernel, int n, Frequency l,
                           Frequency cutoff, bool even) {
  BasisElement base = phi(kernel, n, l, cutoff);
  BasisElement e;
  e.kind = even ? ElementKind::PhiEven : ElementKind::PhiOdd;
  e.l = l;
  e.spectrum = even ? even_part(base.spectrum) : odd_part(base.spectrum);
  e.d_norm = e.spectrum.coefficient_energy();
  // ‖(g ± g(-·))/2‖ <= ‖g‖ for the discarded part g.
  e.d_tail = base.d_tail;
  return e;
}

}  // namespace

BasisElement phi_even(const KernelSpec& kernel, int n, Frequency l, Frequency cutoff) {
  return symmetric_phi(kernel, n, l, cutoff, true);
}

BasisElement phi_odd(const KernelSpec& kernel, int n, Frequency l, Frequency cutoff) {
  return symmetric_phi(kernel, n, l, cutoff, false);
}

DValue d_value(const KernelSpec& kernel, int n, Frequency l, Frequency cutoff) {
  if (n < 1) throw std::invalid_argument("space parameter n must be >= 1");
  if (cutoff < 2 * static_cast<Frequency>(n)) {
    throw std::invalid_argument("truncation cutoff must satisfy K >= 2n");
  }
  const std::int64_t period = 2 * static_cast<std::int64_t>(n);
  // Accumulate from the smallest |k| outward so small terms are added last.
  const Frequency start = floor_mod(l, period);
  detail::CompensatedSum sum;
  Frequency up = start;
  Frequency down = start - period;
  while (up <= cutoff || -down <= cutoff) {
    const bool take_up = up <= cutoff && (-down > cutoff || up <= -down);
    const Frequency k = take_up ? up : down;
    sum.add(std::norm(coeff(kernel, k)));
    if (take_up) {
      up += period;
    } else {
      down -= period;
    }
  }
  const double lower = sum.value();
  return {lower, lower + class_tail_energy(kernel, n, l, cutoff)};
}

std::vector<BasisElement> basis(const ShiftSpaceSpec& space, Frequency cutoff) {
  space.validate();
  const int n = space.n;
  const int m = space.m;
  std::vector<BasisElement> out;
  auto add_phi_pair = [&](int lo, int hi) {
    // l = 0, 1, -1, 2, -2, ... restricted to [lo, hi].
    for (int a = 0; a <= std::max(-lo, hi); ++a) {
      if (a <= hi && a >= lo) out.push_back(phi(space.kernel, n, a, cutoff));
      if (a != 0 && -a >= lo && -a <= hi) out.push_back(phi(space.kernel, n, -a, cutoff));
    }
  };
  switch (space.variant) {
    case SpaceVariant::Full:
      add_phi_pair(1 - n, n);
      break;
    case SpaceVariant::Cross:
      add_phi_pair(1 - n, n - 1);
      break;
    case SpaceVariant::CrossM:
      add_phi_pair(1 - m, m - 1);
      break;
    case SpaceVariant::Sym0:
      for (int l = 1; l <= m; ++l) out.push_back(phi_odd(space.kernel, n, l, cutoff));
      break;
    case SpaceVariant::Sym1:
      out.push_back(phi(space.kernel, n, 0, cutoff));
      for (int l = 1; l <= m - 1; ++l) out.push_back(phi_even(space.kernel, n, l, cutoff));
      break;
    case SpaceVariant::Sym2:
      for (int l = 1; l <= m; ++l) out.push_back(phi_odd(space.kernel, n, 2 * l - 1, cutoff));
      break;
    case SpaceVariant::Sym2Even:
      for (int l = 1; l <= m; ++l) out.push_back(phi_even(space.kernel, n, 2 * l - 1, cutoff));
      break;
    case SpaceVariant::EvenParts:
      for (int l = 1; l <= m; ++l) out.push_back(phi_even(space.kernel, n, l, cutoff));
      break;
  }
  for (const BasisElement& e : out) {
    if (!(e.d_norm >= kDegenerateThreshold)) {
      throw DegenerateBasis(std::string(to_string(e.kind)) + " with l=" + std::to_string(e.l) +
                            " of kernel " + space.kernel.describe() +
                            " vanishes; the shifts are linearly dependent");
    }
  }
  return out;
}

Projection project(const TruncatedSpectrum& f, std::span<const BasisElement> elements) {
  Projection result;
  Frequency cutoff = f.cutoff();
  for (const BasisElement& e : elements) cutoff = std::max(cutoff, e.spectrum.cutoff());
  result.approximant = TruncatedSpectrum(cutoff);
  double tail_excess = 0.0;
  for (const BasisElement& e : elements) {
    const Complex overlap = inner_product(f, e.spectrum);
    const Complex a = overlap / (kTwoPi * e.d_norm);
    result.coefficients.push_back(a);
    for (const auto& [k, c] : e.spectrum.coefficients()) result.approximant.add(k, a * c);
    // Energy the untruncated element would capture less than the truncated one.
    if (e.d_tail > 0.0) {
      tail_excess += std::norm(overlap) / kTwoPi *
                     (1.0 / e.d_norm - 1.0 / (e.d_norm + e.d_tail));
    }
  }
  if (!elements.empty()) {
    double tail = 0.0;
    for (std::size_t j = 0; j < elements.size(); ++j) {
      tail += std::abs(result.coefficients[j]) * elements[j].spectrum.tail_bound();
    }
    result.approximant.set_tail_bound(tail);
  }
  const TruncatedSpectrum residual = f - result.approximant;
  result.error = std::sqrt(kTwoPi * residual.coefficient_energy());
  // Part of f beyond its cutoff shifts the distance by at most its norm.
  const double f_tail = std::sqrt(kTwoPi) * f.tail_bound();
  result.error_lower = std::max(0.0, result.error - f_tail);
  result.error_upper = std::sqrt(result.error * result.error + tail_excess) + f_tail;
  return result;
}

Projection project(const TruncatedSpectrum& f, const ShiftSpaceSpec& space,
                   Frequency cutoff) {
  const auto elements = basis(space, std::max(cutoff, f.cutoff()));
  return project(f, elements);
}

GammaResult gamma_symmetry(const KernelSpec& kernel, int n, Frequency l,
                           Frequency cutoff, double tol) {
  if (n < 1) throw std::invalid_argument("space parameter n must be >= 1");
  if (cutoff < 2 * static_cast<Frequency>(n)) {
    throw std::invalid_argument("truncation cutoff must satisfy K >= 2n");
  }
  const std::int64_t period = 2 * static_cast<std::int64_t>(n);
  std::vector<std::pair<Complex, Complex>> pairs;  // (c_{l+2nk}, c_{-l-2nk})
  for (Frequency k = first_in_class(l, period, cutoff); k <= cutoff; k += period) {
    pairs.emplace_back(coeff(kernel, k), coeff(kernel, -k));
  }
  detail::CompensatedComplexSum num;
  detail::CompensatedSum plus_energy;
  detail::CompensatedSum minus_energy;
  for (const auto& [p, q] : pairs) {
    num.add(std::conj(p) * q);
    plus_energy.add(std::norm(p));
    minus_energy.add(std::norm(q));
  }
  const double e_plus = plus_energy.value();
  const double e_minus = minus_energy.value();
  GammaResult result;
  constexpr double kZeroEnergy = 1e-300;
  if (e_plus <= kZeroEnergy && e_minus <= kZeroEnergy) {
    result.gamma = Complex{1.0, 0.0};
    result.arbitrary = true;
    return result;
  }
  if (e_plus <= kZeroEnergy || e_minus <= kZeroEnergy) {
    result.residual = 1.0;
    return result;
  }
  const Complex gamma = num.value() / e_plus;
  detail::CompensatedSum res;
  for (const auto& [p, q] : pairs) res.add(std::norm(q - gamma * p));
  result.residual = std::sqrt(res.value() / std::max(e_plus, e_minus));
  if (result.residual <= tol && gamma != Complex{}) result.gamma = gamma;
  return result;
}

}  // namespace shiftapprox
