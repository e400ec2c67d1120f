#include "shiftapprox/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "shiftapprox/errors.hpp"
#include "summation.hpp"

namespace shiftapprox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Frequencies of the class l mod 2n inside [-cutoff, cutoff], by increasing |k|.
std::vector<Frequency> class_members(int n, Frequency l, Frequency cutoff) {
  const std::int64_t period = 2 * static_cast<std::int64_t>(n);
  std::vector<Frequency> out;
  for (Frequency k = -cutoff + floor_mod(l + cutoff, period); k <= cutoff; k += period) {
    out.push_back(k);
  }
  std::stable_sort(out.begin(), out.end(), [](Frequency a, Frequency b) {
    return std::abs(a) < std::abs(b);
  });
  return out;
}

// Stored coefficient energy Σ_{|k|<=K} |c_k|², the normalisation scale.
double kernel_energy(const KernelSpec& kernel, Frequency cutoff) {
  detail::CompensatedSum sum;
  for (Frequency k = -cutoff; k <= cutoff; ++k) sum.add(std::norm(coeff(kernel, k)));
  const double e = sum.value();
  if (!(e > 0.0)) throw std::invalid_argument("kernel " + kernel.describe() + " vanishes");
  return e;
}

// Certified interval for a quantity Q that must satisfy Q >= 0.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

ConditionItem nonnegative_item(std::string id, std::optional<Frequency> l, Interval q,
                               double tol, std::string note = {}) {
  ConditionItem item{std::move(id), l, Verdict::Inconclusive, 0.0, 0.0, std::move(note)};
  if (std::isinf(q.lo) && q.lo < 0.0) {
    if (q.hi < -tol) {
      item.margin = q.hi + tol;
      item.slack = 0.0;
    } else {
      item.margin = 0.0;
      item.slack = kInf;
    }
  } else {
    item.margin = 0.5 * (q.lo + q.hi) + tol;
    item.slack = 0.5 * (q.hi - q.lo);
  }
  item.verdict = classify(item.margin, item.slack);
  return item;
}

// Strict test: margin = q, no slack.
ConditionItem strict_item(std::string id, std::optional<Frequency> l, double q,
                          std::string note = {}) {
  ConditionItem item{std::move(id), l, Verdict::Inconclusive, q, 0.0, std::move(note)};
  item.verdict = classify(q, 0.0);
  return item;
}

struct Context {
  const KernelSpec& kernel;
  int n;
  int r;
  const CertifyOptions& opt;
  double energy;  // normalisation
  double scale;   // sqrt(energy)
};

Context make_context(const KernelSpec& kernel, int n, int r, const CertifyOptions& opt) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (r < 1) throw std::invalid_argument("r must be >= 1");
  if (opt.cutoff < 2 * static_cast<Frequency>(n)) {
    throw std::invalid_argument("truncation cutoff must satisfy K >= 2n");
  }
  if (!(opt.tol > 0.0) || !(opt.gamma_tol > 0.0)) {
    throw std::invalid_argument("tolerances must be positive");
  }
  const double energy = kernel_energy(kernel, opt.cutoff);
  return {kernel, n, r, opt, energy, std::sqrt(energy)};
}

ConditionItem nonzero_item(const Context& ctx, Frequency l) {
  const double q = std::abs(coeff(ctx.kernel, l)) / ctx.scale - ctx.opt.tol;
  return strict_item("coeff_nonzero", l, q);
}

ConditionItem vanishing_item(const Context& ctx) {
  const Frequency step = 2 * static_cast<Frequency>(ctx.n);
  double worst = 0.0;
  for (Frequency k = step; k <= ctx.opt.cutoff; k += step) {
    worst = std::max({worst, std::abs(coeff(ctx.kernel, k)), std::abs(coeff(ctx.kernel, -k))});
  }
  return strict_item("c_2nv_zero", std::nullopt, ctx.opt.tol - worst / ctx.scale,
                     "checked for 0 < |2nv| <= K");
}

ConditionItem symmetric_multiples_item(const Context& ctx) {
  const Frequency step = 2 * static_cast<Frequency>(ctx.n);
  double worst = 0.0;
  for (Frequency k = step; k <= ctx.opt.cutoff; k += step) {
    worst = std::max(worst, std::abs(coeff(ctx.kernel, k) - coeff(ctx.kernel, -k)));
  }
  return strict_item("c_2nv_symmetric", std::nullopt, ctx.opt.tol - worst / ctx.scale,
                     "checked for 0 < 2nv <= K");
}

ConditionItem gamma_item(const Context& ctx, Frequency l) {
  const GammaResult g = gamma_symmetry(ctx.kernel, ctx.n, l, ctx.opt.cutoff, ctx.opt.gamma_tol);
  std::string note;
  if (g.arbitrary) note = "both classes vanish; gamma = 1 by convention";
  double margin = ctx.opt.gamma_tol - g.residual;
  if (!g.gamma && margin > 0.0) margin = -ctx.opt.gamma_tol;  // γ would be 0
  return strict_item("gamma_exists", l, margin, std::move(note));
}

// Σ_k |c_{l+2nk}|² / (|l+2nk|^{-2r} - M^{-2r}), normalised by the energy.
// Every term with k != 0 is negative, so the stored sum is an upper end and
// the envelope of the discarded terms gives the lower end.
Interval signed_sum(const Context& ctx, Frequency l, int denominator) {
  const double M = denominator;
  const double M_neg = std::pow(M, -2.0 * ctx.r);
  detail::CompensatedSum sum;
  for (const Frequency a : class_members(ctx.n, l, ctx.opt.cutoff)) {
    const double c2 = std::norm(coeff(ctx.kernel, a));
    if (c2 == 0.0) continue;
    const double denom = std::pow(std::abs(static_cast<double>(a)), -2.0 * ctx.r) - M_neg;
    sum.add(c2 / denom);
  }
  const double stored = sum.value() / ctx.energy;

  const auto env = class_envelope(ctx.kernel, ctx.n, l, ctx.opt.cutoff);
  if (!env) return {-kInf, stored};
  if (env->scale == 0.0) return {stored, stored};
  const double p = env->exponent;
  if (!(2.0 * p > 1.0)) return {-kInf, stored};
  // |term| <= E² M^{2r} a^{-2p} / (1 - (M/a)^{2r})
  //         = E² M^{2r} Σ_j (M/a)^{2rj} a^{-2p}.
  const std::int64_t period = 2 * static_cast<std::int64_t>(ctx.n);
  const Frequency K = ctx.opt.cutoff;
  double tail = 0.0;
  for (const std::int64_t residue : {floor_mod(l, period), floor_mod(-l, period)}) {
    const double first = static_cast<double>(K + 1 + floor_mod(residue - (K + 1), period));
    const double ratio = M / first;
    double part = 0.0;
    for (int j = 0; j < 400; ++j) {
      const double s = 2.0 * p + 2.0 * ctx.r * j;
      const double term = std::pow(ratio, 2.0 * ctx.r * j) * std::pow(first, -2.0 * p) *
                          scaled_progression_sum(s, first / static_cast<double>(period));
      part += term;
      if (term <= 1e-18 * part) break;
    }
    tail += part;
  }
  tail *= env->scale * env->scale * std::pow(M, 2.0 * ctx.r) / ctx.energy;
  return {stored - tail, stored};
}

ConditionItem signed_sum_item(const Context& ctx, Frequency l, int denominator) {
  return nonnegative_item("signed_sum", l, signed_sum(ctx, l, denominator), ctx.opt.tol,
                          "M=" + std::to_string(denominator));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict classify(double margin, double slack) {
  if (margin > slack) return Verdict::Pass;
  if (margin < -slack) return Verdict::Fail;
  return Verdict::Inconclusive;
}

void ConditionReport::add(ConditionItem item) {
  if (item.verdict == Verdict::Fail) {
    overall = Verdict::Fail;
  } else if (item.verdict == Verdict::Inconclusive && overall == Verdict::Pass) {
    overall = Verdict::Inconclusive;
  }
  items.push_back(std::move(item));
}

std::vector<const ConditionItem*> ConditionReport::find(std::string_view id) const {
  std::vector<const ConditionItem*> out;
  for (const ConditionItem& item : items) {
    if (item.id == id) out.push_back(&item);
  }
  return out;
}

ConditionReport check_theorem1(const KernelSpec& kernel, int n, int m, int r,
                               const CertifyOptions& opt) {
  require(m >= 1 && m <= n, "theorem 1 requires 1 <= m <= n");
  const Context ctx = make_context(kernel, n, r, opt);
  ConditionReport report{"1", {}, Verdict::Pass};
  report.add(nonzero_item(ctx, 0));
  for (Frequency l = 1; l <= m - 1; ++l) {
    report.add(nonzero_item(ctx, l));
    report.add(nonzero_item(ctx, -l));
  }
  report.add(vanishing_item(ctx));
  for (Frequency l = 1; l <= m - 1; ++l) {
    report.add(signed_sum_item(ctx, l, m));
    report.add(signed_sum_item(ctx, -l, m));
  }
  return report;
}

ConditionReport check_corollary1(const KernelSpec& kernel, int n, int m, int r,
                                 const CertifyOptions& opt) {
  require(m >= 1 && m <= n, "corollary 1 requires 1 <= m <= n");
  const Context ctx = make_context(kernel, n, r, opt);
  ConditionReport report{"c1", {}, Verdict::Pass};
  for (Frequency l = 1; l <= m - 1; ++l) {
    report.add(nonzero_item(ctx, l));
    report.add(nonzero_item(ctx, -l));
  }
  for (Frequency l = 1; l <= m - 1; ++l) {
    report.add(signed_sum_item(ctx, l, m));
    report.add(signed_sum_item(ctx, -l, m));
  }
  return report;
}

ConditionReport check_theorem2(const KernelSpec& kernel, int n, int m, int r,
                               const CertifyOptions& opt) {
  require(m >= 1 && m + 1 <= n, "theorem 2 requires m + 1 <= n");
  const Context ctx = make_context(kernel, n, r, opt);
  ConditionReport report{"2", {}, Verdict::Pass};
  for (Frequency l = 1; l <= m; ++l) report.add(gamma_item(ctx, l));
  report.add(symmetric_multiples_item(ctx));
  for (Frequency l = 1; l <= m; ++l) report.add(nonzero_item(ctx, l));
  for (Frequency l = 1; l <= m; ++l) report.add(signed_sum_item(ctx, l, m + 1));
  return report;
}

ConditionReport check_theorem3(const KernelSpec& kernel, int n, int m, int r,
                               const CertifyOptions& opt) {
  require(m >= 1 && m <= n, "theorem 3 requires 1 <= m <= n");
  const Context ctx = make_context(kernel, n, r, opt);
  ConditionReport report{"3", {}, Verdict::Pass};
  for (Frequency l = 1; l <= m - 1; ++l) report.add(gamma_item(ctx, l));
  for (Frequency l = 0; l <= m - 1; ++l) report.add(nonzero_item(ctx, l));
  report.add(vanishing_item(ctx));
  for (Frequency l = 1; l <= m - 1; ++l) report.add(signed_sum_item(ctx, l, m));
  return report;
}

ConditionReport check_theorem4(const KernelSpec& kernel, int n, int m, int r,
                               const CertifyOptions& opt) {
  require(m >= 1 && 2 * m + 1 <= n, "theorem 4 requires 2m + 1 <= n");
  const Context ctx = make_context(kernel, n, r, opt);
  ConditionReport report{"4", {}, Verdict::Pass};
  for (Frequency l = 1; l <= 2 * m; ++l) report.add(gamma_item(ctx, l));
  report.add(symmetric_multiples_item(ctx));
  for (Frequency l = 1; l <= 2 * m; ++l) report.add(nonzero_item(ctx, l));
  for (Frequency l = 1; l <= 2 * m; ++l) report.add(signed_sum_item(ctx, l, 2 * m + 1));
  return report;
}

ConditionReport check_sufficient_decay(const KernelSpec& kernel, int n, int m, int r,
                                       const CertifyOptions& opt) {
  require(m >= 1 && m <= n, "the decay condition requires 1 <= m <= n");
  make_context(kernel, n, r, opt);  // validates the arguments
  const std::int64_t period = 2 * static_cast<std::int64_t>(n);
  ConditionReport report{"decay", {}, Verdict::Pass};
  for (Frequency a = 1; a <= m - 1; ++a) {
    for (const Frequency l : {a, -a}) {
      // Q_l = inf_k (1 - |l+2nk|^r |c_{l+2nk}| / (|l|^r |c_l|)) >= 0.
      const double base =
          std::pow(static_cast<double>(a), r) * std::abs(coeff(kernel, l));
      if (base == 0.0) {
        report.add(strict_item("decay", l, -1.0, "c_l vanishes"));
        continue;
      }
      double stored = kInf;
      for (const Frequency k : class_members(n, l, opt.cutoff)) {
        if (k == l) continue;
        const double v =
            std::pow(std::abs(static_cast<double>(k)), r) * std::abs(coeff(kernel, k));
        stored = std::min(stored, 1.0 - v / base);
      }
      double tail_q = -kInf;
      const auto env = class_envelope(kernel, n, l, opt.cutoff);
      if (env) {
        if (env->scale == 0.0) {
          tail_q = 1.0;
        } else if (env->exponent >= r) {
          // sup_{|a|>K} |a|^{r-p} E is attained at the smallest such |a|.
          const Frequency K = opt.cutoff;
          const double first = static_cast<double>(std::min(
              K + 1 + floor_mod(floor_mod(l, period) - (K + 1), period),
              K + 1 + floor_mod(floor_mod(-l, period) - (K + 1), period)));
          tail_q = 1.0 - env->scale * std::pow(first, r - env->exponent) / base;
        }
      }
      report.add(nonnegative_item("decay", l, {std::min(stored, tail_q), stored}, opt.tol,
                                  env && env->exponent < r ? "tail not certifiable: p < r"
                                                           : ""));
    }
  }
  return report;
}

ConditionReport check_by_name(std::string_view theorem, const KernelSpec& kernel, int n,
                              int m, int r, const CertifyOptions& opt) {
  if (theorem == "1") return check_theorem1(kernel, n, m, r, opt);
  if (theorem == "c1") return check_corollary1(kernel, n, m, r, opt);
  if (theorem == "2") return check_theorem2(kernel, n, m, r, opt);
  if (theorem == "3") return check_theorem3(kernel, n, m, r, opt);
  if (theorem == "4") return check_theorem4(kernel, n, m, r, opt);
  if (theorem == "decay") return check_sufficient_decay(kernel, n, m, r, opt);
  throw std::invalid_argument("unknown theorem '" + std::string(theorem) + "'");
}

void write_csv(std::ostream& os, const ConditionReport& report, bool header) {
  const auto old_precision = os.precision(17);
  if (header) os << "theorem,l,id,margin,slack,verdict\n";
  for (const ConditionItem& item : report.items) {
    os << report.theorem << ',';
    if (item.l) os << *item.l;
    os << ',' << item.id << ',' << item.margin << ',' << item.slack << ','
       << to_string(item.verdict) << '\n';
  }
  os.precision(old_precision);
}

std::string to_json(const ConditionReport& report) {
  nlohmann::ordered_json j;
  j["theorem"] = report.theorem;
  j["overall"] = to_string(report.overall);
  j["items"] = nlohmann::ordered_json::array();
  for (const ConditionItem& item : report.items) {
    nlohmann::ordered_json row;
    row["theorem"] = report.theorem;
    row["l"] = item.l ? nlohmann::ordered_json(*item.l) : nlohmann::ordered_json(nullptr);
    row["id"] = item.id;
    row["margin"] = item.margin;
    row["slack"] = std::isinf(item.slack) ? nlohmann::ordered_json("inf")
                                          : nlohmann::ordered_json(item.slack);
    row["verdict"] = to_string(item.verdict);
    if (!item.note.empty()) row["note"] = item.note;
    j["items"].push_back(std::move(row));
  }
  return j.dump(2);
}

int jackson_denominator(const ShiftSpaceSpec& space) {
  switch (space.variant) {
    case SpaceVariant::Sym0: return space.m + 1;
    case SpaceVariant::Sym1: return space.m;
    case SpaceVariant::Sym2:
    case SpaceVariant::Sym2Even: return 2 * space.m + 1;
    case SpaceVariant::CrossM: return space.m;
    default:
      throw std::invalid_argument(std::string("no Jackson bound is attached to ") +
                                  to_string(space.variant));
  }
}

ClassVariant jackson_class(const ShiftSpaceSpec& space) {
  switch (space.variant) {
    case SpaceVariant::Sym0: return ClassVariant::H0;
    case SpaceVariant::Sym1: return ClassVariant::H1;
    case SpaceVariant::Sym2: return ClassVariant::H2;
    case SpaceVariant::Sym2Even: return ClassVariant::H2Even;
    case SpaceVariant::CrossM: return ClassVariant::Periodic;
    default:
      throw std::invalid_argument(std::string("no function class is attached to ") +
                                  to_string(space.variant));
  }
}

TruncatedSpectrum sharpness_witness(const ShiftSpaceSpec& space) {
  const Frequency M = jackson_denominator(space);
  TruncatedSpectrum::Coefficients c;
  switch (jackson_class(space)) {
    case ClassVariant::H0:
    case ClassVariant::H2:
      c[M] = Complex(0.0, -0.5);
      c[-M] = Complex(0.0, 0.5);
      break;
    case ClassVariant::H1:
    case ClassVariant::H2Even:
      c[M] = 0.5;
      c[-M] = 0.5;
      break;
    case ClassVariant::Periodic:
      c[M] = 1.0;
      break;
  }
  return TruncatedSpectrum::trigonometric(c);
}

TruncatedSpectrum random_class_sample(ClassVariant cls, int max_degree, std::mt19937_64& rng) {
  if (max_degree < 1) throw std::invalid_argument("max_degree must be >= 1");
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> degree_dist(1, max_degree);
  std::uniform_real_distribution<double> decay_dist(0.0, 3.0);
  const int degree = degree_dist(rng);
  const double decay = decay_dist(rng);
  TruncatedSpectrum::Coefficients c;
  const bool odd_only = cls == ClassVariant::H2 || cls == ClassVariant::H2Even;
  for (int k = 1; k <= degree; ++k) {
    const Complex b = Complex(normal(rng), normal(rng)) * std::pow(k, -decay);
    if (odd_only && k % 2 == 0) continue;
    switch (cls) {
      case ClassVariant::H0:
      case ClassVariant::H2:
        c[k] = b;
        c[-k] = -b;
        break;
      case ClassVariant::H1:
      case ClassVariant::H2Even:
        c[k] = b;
        c[-k] = b;
        break;
      case ClassVariant::Periodic:
        c[k] = b;
        c[-k] = Complex(normal(rng), normal(rng)) * std::pow(k, -decay);
        break;
    }
  }
  if (cls == ClassVariant::H1) c[0] = Complex(normal(rng), normal(rng));
  if (c.empty()) {
    // Degree 1 with an even-only draw cannot happen; keep a nonzero sample.
    c[1] = 1.0;
  }
  return TruncatedSpectrum::trigonometric(c);
}

JacksonReport verify_jackson(const ShiftSpaceSpec& space, const FunctionClassTag& cls,
                             const std::vector<TruncatedSpectrum>& samples,
                             Frequency cutoff) {
  if (cls.r < 1) throw std::invalid_argument("r must be >= 1");
  const ClassVariant expected = jackson_class(space);
  if (cls.variant != expected) {
    throw std::invalid_argument(std::string("space ") + to_string(space.variant) +
                                " is extremal for class " + to_string(expected) +
                                ", not " + to_string(cls.variant));
  }
  const int M = jackson_denominator(space);
  JacksonReport report;
  report.bound = std::pow(static_cast<double>(M), -cls.r);

  Frequency K = cutoff;
  for (const TruncatedSpectrum& u : samples) {
    if (!belongs_to_class(u, cls.variant)) {
      throw SampleOutsideClass(std::string("sample lacks the symmetry of class ") +
                               to_string(cls.variant));
    }
    if (!u.exact()) throw std::invalid_argument("samples must be trigonometric polynomials");
    K = std::max(K, u.cutoff());
  }
  const TruncatedSpectrum witness = sharpness_witness(space);
  K = std::max(K, witness.cutoff());
  const auto elements = basis(space, K);

  auto evaluate_row = [&](const TruncatedSpectrum& u, std::size_t index) {
    JacksonRow row;
    row.index = index;
    const Projection p = project(u, elements);
    row.error = p.error;
    row.error_upper = p.error_upper;
    row.derivative_norm = l2_norm(derivative(u, cls.r)).value;
    row.rhs = report.bound * row.derivative_norm;
    const double rounding = 1e-12 * (row.rhs + row.error);
    const double slack = (p.error_upper - p.error) + rounding;
    row.holds = row.error <= row.rhs + slack;
    row.strict = row.error_upper <= row.rhs + rounding;
    return row;
  };

  for (std::size_t i = 0; i < samples.size(); ++i) {
    report.rows.push_back(evaluate_row(samples[i], i));
    if (!report.rows.back().holds) ++report.violations;
  }
  report.witness = evaluate_row(witness, samples.size());
  report.witness_equal =
      std::abs(report.witness.error - report.witness.rhs) <= 1e-10 * report.witness.rhs;
  return report;
}

bool CorollaryReport::ok() const {
  if (theorem_verdict != Verdict::Pass || !identity_holds) return false;
  return std::all_of(rows.begin(), rows.end(), [](const CorollaryRow& row) {
    return row.holds && row.refined_not_worse;
  });
}

CorollaryReport verify_corollaries_234(const KernelSpec& kernel, int theorem, int n, int m,
                                       int r, const std::vector<TruncatedSpectrum>& samples,
                                       const CertifyOptions& opt) {
  if (r < 1) throw std::invalid_argument("r must be >= 1");
  const auto env = global_envelope(kernel, opt.cutoff);
  if (!env || !(env->exponent > r + 0.5)) {
    throw InsufficientDecay("kernel " + kernel.describe() +
                            " is not differentiable r times with a square-summable tail");
  }
  const KernelSpec derived_kernel = differentiate(kernel, r);
  const bool even_r = r % 2 == 0;

  CorollaryReport report{theorem,
                         ShiftSpaceSpec{kernel, n, SpaceVariant::Sym0, m},
                         ShiftSpaceSpec{derived_kernel, n, SpaceVariant::Sym0, m},
                         Verdict::Inconclusive,
                         0.0,
                         false,
                         {}};
  switch (theorem) {
    case 2:
      report.space.variant = SpaceVariant::Sym0;
      report.derived = {derived_kernel, n, even_r ? SpaceVariant::Sym0 : SpaceVariant::EvenParts,
                        m};
      report.theorem_verdict = check_theorem2(kernel, n, m, r, opt).overall;
      break;
    case 3:
      report.space.variant = SpaceVariant::Sym1;
      report.derived = {derived_kernel, n, even_r ? SpaceVariant::EvenParts : SpaceVariant::Sym0,
                        m - 1};
      report.theorem_verdict = check_theorem3(kernel, n, m, r, opt).overall;
      break;
    case 4:
      report.space.variant = SpaceVariant::Sym2;
      report.derived = {derived_kernel, n, even_r ? SpaceVariant::Sym2 : SpaceVariant::Sym2Even,
                        m};
      report.theorem_verdict = check_theorem4(kernel, n, m, r, opt).overall;
      break;
    default:
      throw std::invalid_argument("corollary checks exist for theorems 2, 3 and 4");
  }
  report.space.validate();
  report.derived.validate();

  Frequency K = opt.cutoff;
  const ClassVariant cls = jackson_class(report.space);
  for (const TruncatedSpectrum& u : samples) {
    if (!belongs_to_class(u, cls)) {
      throw SampleOutsideClass(std::string("sample lacks the symmetry of class ") +
                               to_string(cls));
    }
    K = std::max(K, u.cutoff());
  }
  const auto elements = basis(report.space, K);
  const auto derived_elements = basis(report.derived, K);

  // (Φ^o_{B,l})^{(r)} = Φ^o_{B^{(r)},l} for even r and Φ^e_{B^{(r)},l} for odd r;
  // even parts swap the other way, Φ_l stays Φ_l.
  double worst = 0.0;
  for (const BasisElement& e : elements) {
    BasisElement expected;
    switch (e.kind) {
      case ElementKind::Phi:
        expected = phi(derived_kernel, n, e.l, K);
        break;
      case ElementKind::PhiOdd:
        expected = even_r ? phi_odd(derived_kernel, n, e.l, K)
                          : phi_even(derived_kernel, n, e.l, K);
        break;
      case ElementKind::PhiEven:
        expected = even_r ? phi_even(derived_kernel, n, e.l, K)
                          : phi_odd(derived_kernel, n, e.l, K);
        break;
    }
    const TruncatedSpectrum d = derivative(e.spectrum, r);
    double scale = 0.0;
    for (const auto& [k, c] : d.coefficients()) scale = std::max(scale, std::abs(c));
    if (scale > 0.0) worst = std::max(worst, max_coefficient_difference(d, expected.spectrum) / scale);
  }
  report.identity_max_difference = worst;
  report.identity_holds = worst <= 1e-12;

  const int M = jackson_denominator(report.space);
  const double bound = std::pow(static_cast<double>(M), -r);
  for (const TruncatedSpectrum& u : samples) {
    CorollaryRow row;
    const Projection left = project(u, elements);
    const TruncatedSpectrum du = derivative(u, r);
    const Projection right = project(du, derived_elements);
    row.lhs = left.error;
    row.refined_rhs = bound * right.error;
    row.refined_rhs_upper = bound * right.error_upper;
    row.unrefined_rhs = bound * l2_norm(du).value;
    const double rounding = 1e-12 * (row.unrefined_rhs + row.lhs);
    row.holds = row.lhs <= row.refined_rhs_upper + rounding;
    row.refined_not_worse = row.refined_rhs <= row.unrefined_rhs + rounding;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace shiftapprox
