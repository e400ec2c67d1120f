#include "shiftapprox/generators.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "shiftapprox/errors.hpp"

namespace shiftapprox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

void require_bspline_params(int n, int mu) {
  if (n < 1) throw std::invalid_argument("kernel parameter n must be >= 1");
  if (mu < 0) throw std::invalid_argument("kernel parameter mu must be >= 0");
}

// ((e^{iπk/n} - 1)/(iπk/n))^{p} times the optional shift factor e^{-ikπ/(2n)}.
Complex bspline_coeff(int n, int mu, bool shifted, Frequency k) {
  require_bspline_params(n, mu);
  if (k == 0) return {1.0, 0.0};
  const int p = mu + 1;
  const double half_angle = kPi * static_cast<double>(k) / (2.0 * n);
  const double sinc = sin_pi_rational(k, 2 * n) / half_angle;
  if (sinc == 0.0) return {};
  // Phase e^{iπ k p / (2n)}, combined with e^{-iπ k / (2n)} when shifted.
  const Complex phase = cis_pi_rational(k * (shifted ? p - 1 : p), 2 * n);
  return phase * std::pow(sinc, p);
}

// Envelope of the plain B-spline factor on the class l mod 2 n_space.
DecayBound bspline_class_envelope(int n, int mu, int n_space, Frequency l) {
  const double p = mu + 1;
  const double base = 2.0 * n / kPi;
  if (n_space > 0 && n_space % n == 0) {
    return {std::pow(std::abs(sin_pi_rational(l, 2 * n)) * base, p), p};
  }
  return {std::pow(base, p), p};
}

}  // namespace

void validate(const WeightSeq& w) {
  std::visit(
      Overloaded{
          [](const PoissonWeight& p) {
            if (!(p.alpha > 0.0)) throw std::invalid_argument("Poisson weight needs alpha > 0");
          },
          [](const HeatWeight& h) {
            if (!(h.alpha > 0.0)) throw std::invalid_argument("heat weight needs alpha > 0");
          },
          [](const DiffOperatorWeight& d) {
            for (const Complex& root : d.roots) {
              if (!std::isfinite(root.real()) || !std::isfinite(root.imag())) {
                throw std::invalid_argument("polynomial roots must be finite");
              }
              const double im = root.imag();
              if (root.real() == 0.0 && im != 0.0 && std::round(im) == im) {
                throw std::invalid_argument(
                    "polynomial has a root at ik for integer k != 0; 1/P(ik) is undefined");
              }
            }
          },
          [](const BernoulliWeight& b) {
            if (!(b.s > 0.0)) throw std::invalid_argument("Bernoulli weight needs s > 0");
            if (!std::isfinite(b.beta)) throw std::invalid_argument("Bernoulli beta must be finite");
          }},
      w);
}

Complex weight(const WeightSeq& w, Frequency k) {
  validate(w);
  const double kd = static_cast<double>(k);
  return std::visit(
      Overloaded{
          [&](const PoissonWeight& p) -> Complex { return std::exp(-p.alpha * std::abs(kd)); },
          [&](const HeatWeight& h) -> Complex { return std::exp(-h.alpha * kd * kd); },
          [&](const DiffOperatorWeight& d) -> Complex {
            if (k == 0) return 1.0;
            Complex p = 1.0;
            for (const Complex& root : d.roots) p *= Complex(0.0, kd) - root;
            return 1.0 / p;
          },
          [&](const BernoulliWeight& b) -> Complex {
            if (k == 0) return 1.0;
            const double sign = k > 0 ? 1.0 : -1.0;
            return std::pow(std::abs(kd), -b.s) * std::polar(1.0, -b.beta * sign);
          }},
      w);
}

double weight_tail_sup(const WeightSeq& w, Frequency cutoff) {
  const double a = static_cast<double>(cutoff + 1);
  return std::visit(
      Overloaded{
          [&](const PoissonWeight& p) { return std::exp(-p.alpha * a); },
          [&](const HeatWeight& h) { return std::exp(-h.alpha * a * a); },
          [&](const DiffOperatorWeight& d) {
            // inf_{|k|>=a} |ik - x| = hypot(Re x, distance of Im x to |t| >= a).
            double sup = 1.0;
            for (const Complex& root : d.roots) {
              const double im = std::abs(root.imag());
              const double gap = std::max(0.0, a - im);
              const double dist = std::hypot(root.real(), gap);
              if (dist == 0.0) return kInf;
              sup /= dist;
            }
            return sup;
          },
          [&](const BernoulliWeight& b) { return std::pow(a, -b.s); }},
      w);
}

KernelSpec::KernelSpec(Variant v) : v_(std::move(v)) {
  std::visit(Overloaded{
                 [](const kernels::Dirichlet& d) {
                   if (d.degree < 0) throw std::invalid_argument("Dirichlet degree must be >= 0");
                 },
                 [](const kernels::BSpline& b) {
                   if (b.n != 0) require_bspline_params(b.n, b.mu);
                 },
                 [](const kernels::ShiftedBSpline& b) {
                   if (b.n != 0) require_bspline_params(b.n, b.mu);
                 },
                 [](const kernels::Weighted& w) {
                   if (w.n != 0) require_bspline_params(w.n, w.mu);
                   validate(w.weight);
                 },
                 [](const kernels::Custom& c) {
                   if (!c.rule) throw std::invalid_argument("custom kernel needs a rule");
                   if (c.decay && !(c.decay->exponent > 0.5)) {
                     throw std::invalid_argument("custom decay exponent must exceed 1/2");
                   }
                 },
                 [](const kernels::Derivative& d) {
                   if (!d.base) throw std::invalid_argument("derivative needs a base kernel");
                   if (d.order < 0) throw std::invalid_argument("derivative order must be >= 0");
                 }},
             v_);
}

int KernelSpec::natural_n() const {
  return std::visit(Overloaded{
                        [](const kernels::Dirichlet& d) { return d.degree + 1; },
                        [](const kernels::BSpline& b) { return b.n; },
                        [](const kernels::ShiftedBSpline& b) { return b.n; },
                        [](const kernels::Weighted& w) { return w.n; },
                        [](const kernels::Custom&) { return 0; },
                        [](const kernels::Derivative& d) { return d.base->natural_n(); }},
                    v_);
}

KernelSpec KernelSpec::with_n(int n) const {
  return std::visit(
      Overloaded{
          [&](const kernels::Dirichlet&) -> KernelSpec { return kernels::Dirichlet{n - 1}; },
          [&](const kernels::BSpline& b) -> KernelSpec { return kernels::BSpline{n, b.mu}; },
          [&](const kernels::ShiftedBSpline& b) -> KernelSpec {
            return kernels::ShiftedBSpline{n, b.mu};
          },
          [&](const kernels::Weighted& w) -> KernelSpec {
            return kernels::Weighted{n, w.mu, w.weight, w.shifted};
          },
          [&](const kernels::Custom& c) -> KernelSpec { return c; },
          [&](const kernels::Derivative& d) -> KernelSpec {
            return kernels::Derivative{std::make_shared<KernelSpec>(d.base->with_n(n)), d.order};
          }},
      v_);
}

namespace {

std::string describe_weight(const WeightSeq& w) {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const PoissonWeight& p) { os << "poisson:alpha=" << p.alpha; },
                 [&](const HeatWeight& h) { os << "heat:alpha=" << h.alpha; },
                 [&](const DiffOperatorWeight& d) {
                   os << "diffop:roots=";
                   for (std::size_t i = 0; i < d.roots.size(); ++i) {
                     if (i) os << ';';
                     os << d.roots[i].real();
                   }
                 },
                 [&](const BernoulliWeight& b) { os << "bernoulli:s=" << b.s << ",beta=" << b.beta; }},
             w);
  return os.str();
}

}  // namespace

std::string KernelSpec::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const kernels::Dirichlet& d) { os << "dirichlet:deg=" << d.degree; },
                 [&](const kernels::BSpline& b) { os << "bspline:n=" << b.n << ",mu=" << b.mu; },
                 [&](const kernels::ShiftedBSpline& b) {
                   os << "shifted-bspline:n=" << b.n << ",mu=" << b.mu;
                 },
                 [&](const kernels::Weighted& w) {
                   const std::string weight = describe_weight(w.weight);
                   const auto colon = weight.find(':');
                   os << weight.substr(0, colon) << ":n=" << w.n << ",mu=" << w.mu << ','
                      << weight.substr(colon + 1);
                   if (w.shifted) os << ",shifted=1";
                 },
                 [&](const kernels::Custom& c) { os << c.name; },
                 [&](const kernels::Derivative& d) {
                   os << "d" << d.order << "(" << d.base->describe() << ")";
                 }},
             v_);
  return os.str();
}

Complex coeff(const KernelSpec& spec, Frequency k) {
  return std::visit(
      Overloaded{
          [&](const kernels::Dirichlet& d) -> Complex {
            return (k <= d.degree && -k <= d.degree) ? 1.0 : 0.0;
          },
          [&](const kernels::BSpline& b) { return bspline_coeff(b.n, b.mu, false, k); },
          [&](const kernels::ShiftedBSpline& b) { return bspline_coeff(b.n, b.mu, true, k); },
          [&](const kernels::Weighted& w) {
            return bspline_coeff(w.n, w.mu, w.shifted, k) * weight(w.weight, k);
          },
          [&](const kernels::Custom& c) { return c.rule(k); },
          [&](const kernels::Derivative& d) {
            const double kd = static_cast<double>(k);
            Complex ik_r = 1.0;
            for (int i = 0; i < d.order; ++i) ik_r *= Complex(0.0, kd);
            return ik_r * coeff(*d.base, k);
          }},
      spec.variant());
}

namespace {

std::optional<DecayBound> envelope_impl(const KernelSpec& spec, int n_space,
                                        Frequency l, Frequency cutoff,
                                        bool per_class) {
  return std::visit(
      Overloaded{
          [&](const kernels::Dirichlet& d) -> std::optional<DecayBound> {
            if (cutoff >= d.degree) return DecayBound{0.0, 1.0};
            return DecayBound{1.0, 0.0};
          },
          [&](const kernels::BSpline& b) -> std::optional<DecayBound> {
            return bspline_class_envelope(b.n, b.mu, per_class ? n_space : 0, l);
          },
          [&](const kernels::ShiftedBSpline& b) -> std::optional<DecayBound> {
            return bspline_class_envelope(b.n, b.mu, per_class ? n_space : 0, l);
          },
          [&](const kernels::Weighted& w) -> std::optional<DecayBound> {
            DecayBound env = bspline_class_envelope(w.n, w.mu, per_class ? n_space : 0, l);
            env.scale *= weight_tail_sup(w.weight, cutoff);
            return env;
          },
          [&](const kernels::Custom& c) -> std::optional<DecayBound> { return c.decay; },
          [&](const kernels::Derivative& d) -> std::optional<DecayBound> {
            auto env = envelope_impl(*d.base, n_space, l, cutoff, per_class);
            if (env) env->exponent -= d.order;
            return env;
          }},
      spec.variant());
}

void require_cutoff(const KernelSpec& spec, Frequency cutoff) {
  const int n = spec.natural_n();
  if (std::holds_alternative<kernels::Dirichlet>(spec.variant())) {
    if (cutoff < n) throw std::invalid_argument("truncation cutoff must satisfy K >= n");
    return;
  }
  if (n > 0 && cutoff < 2 * static_cast<Frequency>(n)) {
    throw std::invalid_argument("truncation cutoff must satisfy K >= 2n");
  }
  if (cutoff < 1) throw std::invalid_argument("truncation cutoff must be >= 1");
}

}  // namespace

std::optional<DecayBound> global_envelope(const KernelSpec& spec, Frequency cutoff) {
  return envelope_impl(spec, 0, 0, cutoff, false);
}

std::optional<DecayBound> class_envelope(const KernelSpec& spec, int n_space,
                                         Frequency l, Frequency cutoff) {
  if (n_space < 1) throw std::invalid_argument("space parameter n must be >= 1");
  return envelope_impl(spec, n_space, l, cutoff, true);
}

double class_tail_energy(const KernelSpec& spec, int n_space, Frequency l,
                         Frequency cutoff) {
  const auto env = class_envelope(spec, n_space, l, cutoff);
  if (!env) throw InsufficientDecay("kernel " + spec.describe() + " has no decay bound");
  if (env->scale == 0.0) return 0.0;
  const double s = 2.0 * env->exponent;
  if (!(s > 1.0)) return kInf;
  const std::int64_t period = 2 * static_cast<std::int64_t>(n_space);
  double total = 0.0;
  // Positive frequencies ≡ l and magnitudes of negative frequencies ≡ -l.
  for (const std::int64_t residue : {floor_mod(l, period), floor_mod(-l, period)}) {
    std::int64_t first = cutoff + 1 + floor_mod(residue - (cutoff + 1), period);
    total += progression_power_sum(static_cast<double>(first),
                                   static_cast<double>(period), s);
  }
  return env->scale * env->scale * total;
}

TruncatedSpectrum truncate(const KernelSpec& spec, Frequency cutoff) {
  require_cutoff(spec, cutoff);
  const auto env = global_envelope(spec, cutoff);
  if (!env) {
    throw InsufficientDecay("kernel " + spec.describe() +
                            " has no decay metadata; its tail cannot be certified");
  }
  const double tail = std::sqrt(envelope_tail_sum(*env, cutoff, 2.0));
  if (!std::isfinite(tail)) {
    throw InsufficientDecay("kernel " + spec.describe() + " is not square summable");
  }
  TruncatedSpectrum out(cutoff, tail, env);
  for (Frequency k = -cutoff; k <= cutoff; ++k) out.set(k, coeff(spec, k));
  return out;
}

KernelSpec differentiate(const KernelSpec& spec, int order) {
  return kernels::Derivative{std::make_shared<KernelSpec>(spec), order};
}

bool weight_monotone_on_classes(const WeightSeq& w, int n, Frequency cutoff) {
  const std::int64_t period = 2 * static_cast<std::int64_t>(n);
  for (Frequency l = 1 - n; l < n; ++l) {
    const double base = std::abs(weight(w, l));
    if (base == 0.0) return false;
    for (Frequency k = l - period * (cutoff / period + 1); k <= cutoff; k += period) {
      if (k == l || k > cutoff || -k > cutoff) continue;
      if (std::abs(weight(w, k)) > base * (1.0 + 1e-14)) return false;
    }
  }
  return true;
}

namespace {

std::map<std::string, std::string, std::less<>> parse_params(std::string_view text) {
  std::map<std::string, std::string, std::less<>> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(pos, end - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw std::invalid_argument("malformed kernel parameter '" + std::string(item) + "'");
    }
    out.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    pos = end + 1;
  }
  return out;
}

double to_double(const std::string& s, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw std::invalid_argument("kernel parameter " + key + " is not a number: '" + s + "'");
  }
  return v;
}

int to_int(const std::string& s, const std::string& key) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("kernel parameter " + key + " is not an integer: '" + s + "'");
  }
  return v;
}

}  // namespace

KernelSpec parse_kernel(std::string_view text) {
  const std::size_t colon = text.find(':');
  const std::string family(text.substr(0, colon));
  auto params = parse_params(colon == std::string_view::npos ? std::string_view{}
                                                             : text.substr(colon + 1));
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    std::string v = it->second;
    params.erase(it);
    return v;
  };
  auto take_int = [&](const std::string& key, int fallback) {
    const auto v = take(key);
    return v ? to_int(*v, key) : fallback;
  };
  auto take_double = [&](const std::string& key, double fallback) {
    const auto v = take(key);
    return v ? to_double(*v, key) : fallback;
  };

  auto finish = [&](KernelSpec spec) {
    if (!params.empty()) {
      throw std::invalid_argument("unknown kernel parameter '" + params.begin()->first + "'");
    }
    return spec;
  };

  if (family == "dirichlet") {
    return finish(KernelSpec::dirichlet(take_int("deg", 0)));
  }
  if (family == "bspline" || family == "shifted-bspline" || family == "sbspline") {
    const int n = take_int("n", 0);
    const int mu = take_int("mu", 0);
    if (family == "bspline") return finish(kernels::BSpline{n, mu});
    return finish(kernels::ShiftedBSpline{n, mu});
  }
  const int n = take_int("n", 0);
  const int mu = take_int("mu", 0);
  const bool shifted = take_int("shifted", 0) != 0;
  WeightSeq w;
  if (family == "poisson") {
    w = PoissonWeight{take_double("alpha", 1.0)};
  } else if (family == "heat") {
    w = HeatWeight{take_double("alpha", 1.0)};
  } else if (family == "diffop") {
    DiffOperatorWeight d;
    if (const auto roots = take("roots")) {
      std::size_t pos = 0;
      while (pos <= roots->size()) {
        std::size_t end = roots->find(';', pos);
        if (end == std::string::npos) end = roots->size();
        d.roots.emplace_back(to_double(roots->substr(pos, end - pos), "roots"), 0.0);
        pos = end + 1;
      }
    }
    w = d;
  } else if (family == "bernoulli") {
    w = BernoulliWeight{take_double("s", 1.0), take_double("beta", 0.0)};
  } else {
    throw std::invalid_argument("unknown kernel family '" + family + "'");
  }
  return finish(kernels::Weighted{n, mu, w, shifted});
}

std::vector<KernelCatalogEntry> kernel_catalog() {
  return {
      {"dirichlet", "deg>=0", "c_k = 1 for |k| <= deg, else 0"},
      {"bspline", "n>=1, mu>=0", "c_k = ((e^{i pi k/n} - 1)/(i pi k/n))^{mu+1}, c_0 = 1"},
      {"shifted-bspline", "n>=1, mu>=0", "c_k = e^{-i k pi/(2n)} * bspline c_k"},
      {"poisson", "n, mu, alpha>0, shifted=0|1", "bspline c_k * e^{-alpha |k|}"},
      {"heat", "n, mu, alpha>0, shifted=0|1", "bspline c_k * e^{-alpha k^2}"},
      {"diffop", "n, mu, roots=x1;x2;... (real), shifted=0|1",
       "bspline c_k / P(ik), P(t) = prod (t - x_j), eta_0 = 1"},
      {"bernoulli", "n, mu, s>0, beta, shifted=0|1",
       "bspline c_k * |k|^{-s} e^{-i beta sign k}, eta_0 = 1"},
  };
}

}  // namespace shiftapprox
