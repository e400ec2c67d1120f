#pragma once

// Spaces spanned by the 2n equidistant shifts B(· - jπ/n) and their
// symmetric subspaces, represented through the orthogonal exponential
// basis Φ_l = Σ_ν c_{l+2nν}(B) e^{i(l+2nν)x}, which lives on the single
// residue class l mod 2n.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shiftapprox/fourier.hpp"
#include "shiftapprox/generators.hpp"

namespace shiftapprox {

enum class SpaceVariant {
  Full,      // {Φ_l}, l = 1-n..n
  Cross,     // {Φ_l}, l = 1-n..n-1
  CrossM,    // {Φ_l}, l = 1-m..m-1
  Sym0,      // {Φ^o_l}, l = 1..m          (m + 1 <= n)
  Sym1,      // {Φ_0} ∪ {Φ^e_l}, l = 1..m-1 (m <= n)
  Sym2,      // {Φ^o_{2l-1}}, l = 1..m     (2m + 1 <= n)
  Sym2Even,  // {Φ^e_{2l-1}}, l = 1..m     (2m + 1 <= n)
  EvenParts  // {Φ^e_l}, l = 1..m          (m + 1 <= n)
};

const char* to_string(SpaceVariant v);
std::optional<SpaceVariant> parse_space_variant(std::string_view name);

struct ShiftSpaceSpec {
  KernelSpec kernel;
  int n = 1;
  SpaceVariant variant = SpaceVariant::Full;
  int m = 0;

  // Throws std::invalid_argument when (variant, n, m) is inadmissible.
  void validate() const;
  // Dimension of the space when every basis element is nonzero.
  int dimension() const;
};

enum class ElementKind { Phi, PhiEven, PhiOdd };

const char* to_string(ElementKind k);

struct BasisElement {
  ElementKind kind = ElementKind::Phi;
  Frequency l = 0;
  TruncatedSpectrum spectrum;
  double d_norm = 0.0;  // ‖stored part‖² / 2π
  double d_tail = 0.0;  // certified bound on the discarded part of ‖·‖² / 2π
};

// Stored-sum lower end and certified upper end of D_{B,l}.
struct DValue {
  double lower = 0.0;
  double upper = 0.0;
};

inline constexpr double kDegenerateThreshold = 1e-20;

BasisElement phi(const KernelSpec& kernel, int n, Frequency l, Frequency cutoff);
BasisElement phi_even(const KernelSpec& kernel, int n, Frequency l, Frequency cutoff);
BasisElement phi_odd(const KernelSpec& kernel, int n, Frequency l, Frequency cutoff);

DValue d_value(const KernelSpec& kernel, int n, Frequency l, Frequency cutoff);

// Ordered by increasing |l| (l before -l).  Throws DegenerateBasis when an
// element has d_norm below kDegenerateThreshold.
std::vector<BasisElement> basis(const ShiftSpaceSpec& space, Frequency cutoff);

struct Projection {
  TruncatedSpectrum approximant;
  std::vector<Complex> coefficients;  // one per basis element
  double error = 0.0;        // ‖f - approximant‖ for the stored problem
  double error_lower = 0.0;  // certified bracket for the untruncated problem
  double error_upper = 0.0;
};

// Orthogonal projection onto an orthogonal family.
Projection project(const TruncatedSpectrum& f, std::span<const BasisElement> elements);

// Builds the basis at cutoff max(cutoff, f.cutoff()) and projects.
Projection project(const TruncatedSpectrum& f, const ShiftSpaceSpec& space,
                   Frequency cutoff);

struct GammaResult {
  std::optional<Complex> gamma;  // nullopt: no symmetry constant exists
  double residual = 0.0;         // relative least-squares residual
  bool arbitrary = false;        // both classes vanish; γ = 1 by convention
};

// Least-squares γ_l with c_{-l-2nk} = γ_l c_{l+2nk} over |l+2nk| <= cutoff.
GammaResult gamma_symmetry(const KernelSpec& kernel, int n, Frequency l,
                           Frequency cutoff, double tol = 1e-10);

}  // namespace shiftapprox
