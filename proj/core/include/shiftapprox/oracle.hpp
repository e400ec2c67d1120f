#pragma once

// Independent numerical oracles: the worst-case error ratio of a shift space
// over a smoothness class, ellipsoid widths, and least squares on a raw
// (non-orthogonal) spanning family.

#include <cstdint>
#include <vector>

#include "shiftapprox/fourier.hpp"
#include "shiftapprox/generators.hpp"
#include "shiftapprox/shift_spaces.hpp"

namespace shiftapprox {

struct RatioProblem {
  ShiftSpaceSpec space;
  FunctionClassTag cls;
  Frequency cutoff = 4096;    // K >= 4n
  bool zero_mean = false;     // Periodic class only: restrict to c_0(u) = 0
};

struct RatioResult {
  double value = 0.0;            // largest eigenvalue found, E(u)² / ‖u^{(r)}‖²
  double truncation_gap = 0.0;   // admissible increase from frequencies > K
  double basis_tail = 0.0;       // relative energy discarded from the basis
  std::size_t iterations = 0;
};

inline constexpr std::uint64_t kOracleSeed = 0x5EED;

// sup E(u, space)² / ‖u^{(r)}‖² over the class, truncated at K, by power
// iteration on W^{-1/2}(I - P)W^{-1/2}, one block per residue pair
// {l, -l mod 2n}.  For H1 (and Periodic without zero_mean) the space must
// contain the constants; frequencies with zero weight are then excluded.
// Throws NonConvergence when a block exceeds the iteration cap.
RatioResult worst_case_ratio(const RatioProblem& problem, std::uint64_t seed = kOracleSeed);

// (nDim+1)-th largest semiaxis |k|^{-r} of the class, constants counting as
// an infinite semiaxis.  Throws TruncationTooSmall when it lies beyond K.
double ellipsoid_width(const FunctionClassTag& cls, int dimension, Frequency cutoff);

struct LeastSquares {
  TruncatedSpectrum approximant;
  double error = 0.0;
  double condition = 0.0;  // of the column-normalised Gram matrix
};

// Normal equations on the full Gram matrix.  Throws IllConditioned when its
// condition number reaches max_condition.
LeastSquares brute_force_projection(const TruncatedSpectrum& f,
                                    const std::vector<TruncatedSpectrum>& raw_basis,
                                    double max_condition = 1e12);

// B(· - jπ/n), j = 0..2n-1, truncated at K.  Spans the Full space.
std::vector<TruncatedSpectrum> raw_shifts(const KernelSpec& kernel, int n, Frequency cutoff);

}  // namespace shiftapprox
