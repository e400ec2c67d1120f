#pragma once

// Generator kernels B with closed-form Fourier coefficients.
//
// Every kernel knows c_k(B) exactly and a power-law envelope for the
// coefficients it does not store, so truncations carry a certified tail.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "shiftapprox/fourier.hpp"

namespace shiftapprox {

// Multiplier sequences η_k of the smoothing kernels K in B = Steklov
// average of K.
struct PoissonWeight {
  double alpha = 1.0;  // η_k = e^{-α|k|}
};
struct HeatWeight {
  double alpha = 1.0;  // η_k = e^{-αk²}
};
struct DiffOperatorWeight {
  // Roots of the monic polynomial P; η_k = 1 / P(ik), η_0 = 1.
  std::vector<Complex> roots;
};
struct BernoulliWeight {
  double s = 1.0;     // η_k = |k|^{-s} e^{-iβ sign k}, η_0 = 1
  double beta = 0.0;
};

using WeightSeq =
    std::variant<PoissonWeight, HeatWeight, DiffOperatorWeight, BernoulliWeight>;

// Throws std::invalid_argument when parameters leave their admissible
// range (including a root of P at ik for some integer k != 0).
void validate(const WeightSeq& w);
Complex weight(const WeightSeq& w, Frequency k);
// sup_{|k| > cutoff} |η_k|.
double weight_tail_sup(const WeightSeq& w, Frequency cutoff);

class KernelSpec;

namespace kernels {

// D_{degree}(t) = Σ_{|k|<=degree} e^{ikt}.
struct Dirichlet {
  int degree = 0;
};
// Periodic B-spline of degree mu with knots kπ/n.
struct BSpline {
  int n = 1;
  int mu = 0;
};
// B-spline translated by π/(2n).
struct ShiftedBSpline {
  int n = 1;
  int mu = 0;
};
// B-spline (optionally shifted) coefficients multiplied by η_k.
struct Weighted {
  int n = 1;
  int mu = 0;
  WeightSeq weight = PoissonWeight{};
  bool shifted = false;
};
struct Custom {
  std::function<Complex(Frequency)> rule;
  std::optional<DecayBound> decay;  // required for truncation
  std::string name = "custom";
};
// r-th derivative of another kernel: c_k = (ik)^r c_k(base).
struct Derivative {
  std::shared_ptr<const KernelSpec> base;
  int order = 1;
};

}  // namespace kernels

class KernelSpec {
 public:
  using Variant =
      std::variant<kernels::Dirichlet, kernels::BSpline, kernels::ShiftedBSpline,
                   kernels::Weighted, kernels::Custom, kernels::Derivative>;

  KernelSpec(Variant v);  // NOLINT: implicit by design of the factories below
  template <typename Alternative>
    requires std::is_constructible_v<Variant, Alternative> &&
             (!std::is_same_v<std::remove_cvref_t<Alternative>, Variant>) &&
             (!std::is_same_v<std::remove_cvref_t<Alternative>, KernelSpec>)
  KernelSpec(Alternative&& a)  // NOLINT
      : KernelSpec(Variant(std::forward<Alternative>(a))) {}

  static KernelSpec dirichlet(int degree) { return kernels::Dirichlet{degree}; }
  static KernelSpec bspline(int n, int mu) { return kernels::BSpline{n, mu}; }
  static KernelSpec shifted_bspline(int n, int mu) {
    return kernels::ShiftedBSpline{n, mu};
  }
  static KernelSpec weighted(int n, int mu, WeightSeq w, bool shifted = false) {
    return kernels::Weighted{n, mu, std::move(w), shifted};
  }
  static KernelSpec custom(std::function<Complex(Frequency)> rule,
                           std::optional<DecayBound> decay,
                           std::string name = "custom") {
    return kernels::Custom{std::move(rule), decay, std::move(name)};
  }

  const Variant& variant() const { return v_; }

  // Number of shifts per half period the kernel is built for (knot spacing
  // π/n); Dirichlet of degree n-1 reports n; 0 when not applicable.
  int natural_n() const;

  // Copy with the knot parameter replaced (B-spline families only).
  KernelSpec with_n(int n) const;

  // Human-readable, parseable by parse_kernel for the built-in families.
  std::string describe() const;

 private:
  Variant v_;
};

Complex coeff(const KernelSpec& spec, Frequency k);

// Envelope valid for every |k| > cutoff, or nullopt when the kernel carries
// no decay information.
std::optional<DecayBound> global_envelope(const KernelSpec& spec,
                                          Frequency cutoff);

// Envelope valid for |k| > cutoff with k ≡ l (mod 2 n_space).  Tighter than
// the global one for B-spline families, where it is attained exactly.
std::optional<DecayBound> class_envelope(const KernelSpec& spec, int n_space,
                                         Frequency l, Frequency cutoff);

// Certified Σ |c_k|² over |k| > cutoff, k ≡ l (mod 2 n_space).
double class_tail_energy(const KernelSpec& spec, int n_space, Frequency l,
                         Frequency cutoff);

// Stores c_k for |k| <= cutoff; requires cutoff >= 2n for kernels with a
// natural n.  Throws InsufficientDecay for kernels without decay data.
TruncatedSpectrum truncate(const KernelSpec& spec, Frequency cutoff);

KernelSpec differentiate(const KernelSpec& spec, int order);

// |η_{l+2nk}| <= |η_l| and η_l != 0 for |l| < n, checked for |l+2nk| <= cutoff.
bool weight_monotone_on_classes(const WeightSeq& w, int n, Frequency cutoff);

// Parses "dirichlet:deg=7", "bspline:n=8,mu=3", "shifted-bspline:n=4,mu=1",
// "poisson:n=4,mu=2,alpha=0.5", "heat:...,alpha=", "diffop:...,roots=1;-2",
// "bernoulli:...,s=1,beta=0" (weighted families accept shifted=1).  The
// knot parameter n may be omitted, leaving a template whose n is 0.
KernelSpec parse_kernel(std::string_view text);

struct KernelCatalogEntry {
  std::string name;
  std::string parameters;
  std::string coefficients;
};
std::vector<KernelCatalogEntry> kernel_catalog();

}  // namespace shiftapprox
