#pragma once

// Nonperiodic spline spaces on [0, π] or [0, π/2] realised as restrictions
// of symmetric periodic shift spaces of B-splines.
//
// Families: 0 → odd functions on [0, π], 1 → even functions on [0, π],
// 2 → odd functions symmetric about π/2, restricted to [0, π/2].

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "shiftapprox/fourier.hpp"
#include "shiftapprox/generators.hpp"
#include "shiftapprox/shift_spaces.hpp"

namespace shiftapprox {

enum class KnotParity { Integer, Half };

const char* to_string(KnotParity p);

// Segment length: π for families 0 and 1, π/2 for family 2.
double segment_length(int family);

// Parity for which the shift space equals the full spline space Q.
KnotParity natural_parity(int family, int degree);

struct KnotVector {
  std::vector<double> knots;  // strictly increasing, inside (0, segment)
  double segment = kPi;
};

KnotVector knots_for(int family, int n, KnotParity parity);
// The table entry selected by the parity of the degree.
KnotVector knots_for_degree(int family, int degree, int n);

struct SplineSpaceSpec {
  int degree = 1;
  int family = 0;
  int n = 1;
  KnotParity parity = KnotParity::Integer;

  void validate() const;
  double segment() const { return segment_length(family); }
  // Index j of the boundary-condition space Q_{d,j}, j in 1..6.
  int q_index() const;
  // True when the constructed space is all of Q_{d,j}; otherwise it is an
  // n-dimensional subspace of the (n+1)-dimensional Q_{d,j}.
  bool equals_q() const { return parity == natural_parity(family, degree); }
  std::string describe() const;
};

// The symmetric periodic space whose restrictions span the spline space.
ShiftSpaceSpec q_shift_space(const SplineSpaceSpec& spec);
std::vector<TruncatedSpectrum> q_space_basis(const SplineSpaceSpec& spec, Frequency cutoff);

// sqrt(2π / segment): the factor between periodic and segment norms of a
// symmetric function.
double transference_factor(int family);

struct SampledFunction {
  std::vector<double> grid;
  std::vector<Complex> values;
  double grid_step = 0.0;

  // points >= 2 uniform points on [0, segment], endpoints included.
  static SampledFunction uniform(double segment, std::size_t points);
};

// Symmetric extension of the samples to a period, trigonometric
// interpolation by the discrete transform and exact symmetrisation.  The
// result carries no tail bound.  Throws BoundaryViolation when a value
// condition needed for the extension (u(0) = 0 for families 0 and 2,
// u(π) = 0 for family 0) fails by more than tol relative to max |u|.
TruncatedSpectrum periodize(const SampledFunction& u, int family, Frequency cutoff,
                            double tol = 1e-8);

// Values of the series on a uniform grid of the family's segment.
SampledFunction restrict(const TruncatedSpectrum& s, int family, std::size_t points);

// s^{(order)}(x) from the stored coefficients.  Throws InsufficientDecay for
// orders >= degree, where the series of a degree-d spline stops converging
// absolutely.
Complex spline_derivative(const TruncatedSpectrum& s, int degree, int order, double x);

struct BoundaryCheck {
  int order = 0;
  double x = 0.0;
  double value = 0.0;       // |s^{(order)}(x)|, or the symmetry defect
  bool structural = false;  // order d: implied by symmetry and x not a knot
  bool ok = false;
};

struct BoundaryReport {
  std::vector<BoundaryCheck> checks;
  bool ok() const;
};

BoundaryReport verify_boundary(const TruncatedSpectrum& s, const SplineSpaceSpec& spec,
                               double tol = 1e-8);

// Numerical rank of the restricted basis on 4(n+d)+1 uniform points
// (grid_points overrides), singular values above 1e-8 after column
// normalisation.
int dimension_check(const SplineSpaceSpec& spec, Frequency cutoff,
                    std::size_t grid_points = 0);

struct KnotReport {
  std::vector<double> expected;
  std::vector<double> detected;  // union over the basis
  double resolution = 0.0;       // grid step
  std::vector<double> missing;   // expected knots no basis element breaks at
  bool detected_subset = false;  // every detection near an expected knot
  bool all_found = false;
  // A knot can be inactive: at the symmetry centre π/2 a symmetric spline
  // of matching parity has no jump there.  Only spurious detections fail.
  bool ok() const { return detected_subset; }
};

// Break points of s^{(d-1)} (jumps of s for d = 0) located by finite
// differences on a grid aligned with the knot lattice.
KnotReport detect_knots(const SplineSpaceSpec& spec, Frequency cutoff);

// "re±im i" text with 17 significant digits.
std::string format_complex(Complex z);
Complex parse_complex(std::string_view text);

// Two columns "x,value" with a header line.
void write_csv(std::ostream& os, const SampledFunction& u);
SampledFunction read_sampled_csv(std::istream& is);

}  // namespace shiftapprox
