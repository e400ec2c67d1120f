#pragma once

// Machine-checkable verdicts for the coefficient conditions that make a
// shift space extremal, and empirical checks of the resulting
// Jackson-type inequalities.
//
// Every condition item reports a margin and a truncation slack such that
//   pass          <=>  margin >  slack
//   fail          <=>  margin < -slack
//   inconclusive  otherwise.
// For inequalities "Q >= 0" the certified interval for Q is
// [margin - slack - tol, margin + slack - tol], i.e. the margin is the
// interval midpoint plus the declared rounding allowance tol.  Margins are
// normalised by the kernel's stored coefficient energy, so multiplying B by
// a constant changes no verdict.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "shiftapprox/fourier.hpp"
#include "shiftapprox/generators.hpp"
#include "shiftapprox/shift_spaces.hpp"

namespace shiftapprox {

enum class Verdict { Pass, Fail, Inconclusive };

const char* to_string(Verdict v);

struct ConditionItem {
  std::string id;
  std::optional<Frequency> l;
  Verdict verdict = Verdict::Inconclusive;
  double margin = 0.0;
  double slack = 0.0;
  std::string note;
};

struct ConditionReport {
  std::string theorem;
  std::vector<ConditionItem> items;
  Verdict overall = Verdict::Pass;

  void add(ConditionItem item);
  // Items carrying this id (e.g. "signed_sum").
  std::vector<const ConditionItem*> find(std::string_view id) const;
  bool passed() const { return overall == Verdict::Pass; }
};

// Verdict of a single (margin, slack) pair.
Verdict classify(double margin, double slack);

struct CertifyOptions {
  Frequency cutoff = 1024;
  double tol = 1e-12;        // zero tests and rounding allowance (relative)
  double gamma_tol = 1e-10;  // relative residual admitted for γ_l
};

// E(f, S^×_{B,n,m}) <= m^{-r} ‖f^{(r)}‖ for all f.
ConditionReport check_theorem1(const KernelSpec& kernel, int n, int m, int r,
                               const CertifyOptions& opt = {});
// Same inequality restricted to zero-mean f.
ConditionReport check_corollary1(const KernelSpec& kernel, int n, int m, int r,
                                 const CertifyOptions& opt = {});
// Odd functions and S̃⁰ (m + 1 <= n), bound (m+1)^{-r}.
ConditionReport check_theorem2(const KernelSpec& kernel, int n, int m, int r,
                               const CertifyOptions& opt = {});
// Even functions and S̃¹ (m <= n), bound m^{-r}.
ConditionReport check_theorem3(const KernelSpec& kernel, int n, int m, int r,
                               const CertifyOptions& opt = {});
// Odd functions symmetric about π/2 and S̃² (2m + 1 <= n), bound (2m+1)^{-r}.
ConditionReport check_theorem4(const KernelSpec& kernel, int n, int m, int r,
                               const CertifyOptions& opt = {});
// |l+2nk|^r |c_{l+2nk}| <= |l|^r |c_l| for |l| in [1:m-1].
ConditionReport check_sufficient_decay(const KernelSpec& kernel, int n, int m, int r,
                                       const CertifyOptions& opt = {});

// Dispatch by name: "1", "c1", "2", "3", "4", "decay".
ConditionReport check_by_name(std::string_view theorem, const KernelSpec& kernel, int n,
                              int m, int r, const CertifyOptions& opt = {});

// Serialisation: one row per item with columns theorem,l,id,margin,slack,verdict.
void write_csv(std::ostream& os, const ConditionReport& report, bool header = true);
std::string to_json(const ConditionReport& report);

// Jackson constant denominator M for a symmetric space (bound = M^{-r}):
// Sym0 → m+1, Sym1 → m, Sym2/Sym2Even → 2m+1, CrossM → m.
int jackson_denominator(const ShiftSpaceSpec& space);
// The function class a space is extremal for.
ClassVariant jackson_class(const ShiftSpaceSpec& space);
// sin((m+1)x), cos(mx), sin((2m+1)x), cos((2m+1)x), e^{imx}.
TruncatedSpectrum sharpness_witness(const ShiftSpaceSpec& space);

// Random trigonometric polynomial of degree <= max_degree whose coefficients
// carry the class symmetry exactly.
TruncatedSpectrum random_class_sample(ClassVariant cls, int max_degree, std::mt19937_64& rng);

struct JacksonRow {
  std::size_t index = 0;
  double error = 0.0;        // E(u, space) for the truncated basis
  double error_upper = 0.0;  // certified upper end
  double derivative_norm = 0.0;
  double rhs = 0.0;          // M^{-r} ‖u^{(r)}‖
  bool holds = false;        // error <= rhs + slack
  bool strict = false;       // error_upper <= rhs
};

struct JacksonReport {
  double bound = 0.0;  // M^{-r}
  std::vector<JacksonRow> rows;
  JacksonRow witness;
  bool witness_equal = false;  // |error - rhs| <= 1e-10 rhs
  std::size_t violations = 0;
  bool ok() const { return violations == 0 && witness_equal; }
};

// Throws SampleOutsideClass when a sample lacks the symmetry of the class
// the space is built for.
JacksonReport verify_jackson(const ShiftSpaceSpec& space, const FunctionClassTag& cls,
                             const std::vector<TruncatedSpectrum>& samples,
                             Frequency cutoff);

struct CorollaryRow {
  double lhs = 0.0;            // E(u, S_B)
  double refined_rhs = 0.0;    // M^{-r} E(u^{(r)}, derived space of B^{(r)})
  double refined_rhs_upper = 0.0;
  double unrefined_rhs = 0.0;  // M^{-r} ‖u^{(r)}‖
  bool holds = false;
  bool refined_not_worse = false;
};

struct CorollaryReport {
  int theorem = 2;
  ShiftSpaceSpec space;    // S̃ⁱ over B
  ShiftSpaceSpec derived;  // space over B^{(r)} on the right-hand side
  Verdict theorem_verdict = Verdict::Inconclusive;
  double identity_max_difference = 0.0;  // derivative identity, relative
  bool identity_holds = false;
  std::vector<CorollaryRow> rows;
  bool ok() const;
};

// theorem ∈ {2, 3, 4}.  Throws InsufficientDecay when B^{(r)} has no
// square-summable certified tail (envelope exponent <= r + 1/2).
CorollaryReport verify_corollaries_234(const KernelSpec& kernel, int theorem, int n, int m,
                                       int r, const std::vector<TruncatedSpectrum>& samples,
                                       const CertifyOptions& opt = {});

}  // namespace shiftapprox
