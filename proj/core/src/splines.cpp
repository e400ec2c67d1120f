#include "shiftapprox/splines.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "shiftapprox/errors.hpp"
#include "summation.hpp"

namespace shiftapprox {

namespace {

void check_family(int family) {
  if (family < 0 || family > 2) throw std::invalid_argument("spline family must be 0, 1 or 2");
}

// n of the periodic space: n+1, n, 2n+1.
int periodic_n(int family, int n) {
  switch (family) {
    case 0: return n + 1;
    case 1: return n;
    default: return 2 * n + 1;
  }
}

ClassVariant family_class(int family) {
  switch (family) {
    case 0: return ClassVariant::H0;
    case 1: return ClassVariant::H1;
    default: return ClassVariant::H2;
  }
}

// Position of x on the knot lattice of the periodic space, in units of the
// knot spacing; knots sit at integers (or half-integers for Half).
bool on_lattice(const SplineSpaceSpec& spec, double x) {
  const double h = kPi / periodic_n(spec.family, spec.n);
  double t = x / h;
  if (spec.parity == KnotParity::Half) t -= 0.5;
  return std::abs(t - std::round(t)) < 1e-9;
}

Complex sum_series(const TruncatedSpectrum& s, int order, double x) {
  detail::CompensatedComplexSum sum;
  for (const auto& [k, c] : s.coefficients()) {
    const Complex factor = std::pow(Complex(0.0, static_cast<double>(k)), order);
    const double angle = std::fmod(static_cast<double>(k) * x, kTwoPi);
    sum.add(factor * c * std::polar(1.0, angle));
  }
  return sum.value();
}

}  // namespace

const char* to_string(KnotParity p) {
  return p == KnotParity::Integer ? "integer" : "half";
}

double segment_length(int family) {
  check_family(family);
  return family == 2 ? kPi / 2.0 : kPi;
}

KnotParity natural_parity(int family, int degree) {
  check_family(family);
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  const bool odd = degree % 2 == 1;
  switch (family) {
    case 1: return odd ? KnotParity::Half : KnotParity::Integer;
    default: return odd ? KnotParity::Integer : KnotParity::Half;
  }
}

KnotVector knots_for(int family, int n, KnotParity parity) {
  check_family(family);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  KnotVector out;
  out.segment = segment_length(family);
  const int ns = periodic_n(family, n);
  const double h = kPi / ns;
  const bool half = parity == KnotParity::Half;
  // Integer knots k h, k = 1..count; half knots k h + h/2, k = 0..count-1.
  int count = 0;
  switch (family) {
    case 0: count = half ? n + 1 : n; break;
    case 1: count = half ? n : n - 1; break;
    default: count = n; break;
  }
  for (int k = half ? 0 : 1; out.knots.size() < static_cast<std::size_t>(count); ++k) {
    out.knots.push_back(half ? k * h + h / 2.0 : k * h);
  }
  return out;
}

KnotVector knots_for_degree(int family, int degree, int n) {
  return knots_for(family, n, natural_parity(family, degree));
}

void SplineSpaceSpec::validate() const {
  check_family(family);
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
}

int SplineSpaceSpec::q_index() const {
  validate();
  return 2 * family + (parity == KnotParity::Integer ? 1 : 2);
}

std::string SplineSpaceSpec::describe() const {
  std::ostringstream os;
  os << "Q_{" << degree << ',' << q_index() << "} family=" << family << " n=" << n
     << " knots=" << to_string(parity);
  os << (equals_q() ? " (equals Q)" : " (n-dimensional subspace of Q)");
  return os.str();
}

ShiftSpaceSpec q_shift_space(const SplineSpaceSpec& spec) {
  spec.validate();
  const int ns = periodic_n(spec.family, spec.n);
  const KernelSpec kernel = spec.parity == KnotParity::Integer
                                ? KernelSpec::bspline(ns, spec.degree)
                                : KernelSpec::shifted_bspline(ns, spec.degree);
  static constexpr SpaceVariant variants[] = {SpaceVariant::Sym0, SpaceVariant::Sym1,
                                              SpaceVariant::Sym2};
  ShiftSpaceSpec space{kernel, ns, variants[spec.family], spec.n};
  space.validate();
  return space;
}

std::vector<TruncatedSpectrum> q_space_basis(const SplineSpaceSpec& spec, Frequency cutoff) {
  std::vector<TruncatedSpectrum> out;
  for (BasisElement& e : basis(q_shift_space(spec), cutoff)) out.push_back(std::move(e.spectrum));
  return out;
}

double transference_factor(int family) {
  return std::sqrt(kTwoPi / segment_length(family));
}

SampledFunction SampledFunction::uniform(double segment, std::size_t points) {
  if (points < 2) throw std::invalid_argument("a grid needs at least two points");
  if (!(segment > 0.0)) throw std::invalid_argument("segment length must be positive");
  SampledFunction u;
  u.grid_step = segment / static_cast<double>(points - 1);
  for (std::size_t j = 0; j < points; ++j) u.grid.push_back(u.grid_step * static_cast<double>(j));
  u.grid.back() = segment;
  u.values.assign(points, Complex{});
  return u;
}

TruncatedSpectrum periodize(const SampledFunction& u, int family, Frequency cutoff,
                            double tol) {
  check_family(family);
  const std::size_t points = u.values.size();
  if (points < 2 || u.grid.size() != points) {
    throw std::invalid_argument("samples and grid must have equal length >= 2");
  }
  const double segment = segment_length(family);
  if (std::abs(u.grid.front()) > 1e-12 || std::abs(u.grid.back() - segment) > 1e-9 * segment) {
    throw std::invalid_argument("grid must cover the family's segment");
  }
  double scale = 0.0;
  for (const Complex& v : u.values) scale = std::max(scale, std::abs(v));
  const double limit = tol * std::max(scale, 1e-300);
  auto require_zero = [&](const Complex& v, const char* where) {
    if (std::abs(v) > limit) {
      throw BoundaryViolation(std::string("sample at ") + where + " is " +
                              format_complex(v) + ", expected 0 for the odd extension");
    }
  };

  const std::size_t N = points - 1;
  std::vector<Complex> half_period;  // samples on [0, π], N_half + 1 points
  switch (family) {
    case 0:
      require_zero(u.values.front(), "0");
      require_zero(u.values.back(), "pi");
      half_period = u.values;
      break;
    case 1:
      half_period = u.values;
      break;
    default:
      require_zero(u.values.front(), "0");
      half_period = u.values;
      for (std::size_t j = 1; j <= N; ++j) half_period.push_back(u.values[N - j]);
      break;
  }
  const std::size_t H = half_period.size() - 1;
  const std::size_t M = 2 * H;
  std::vector<Complex> full(M);
  const bool odd = family != 1;
  for (std::size_t j = 0; j <= H; ++j) full[j] = half_period[j];
  for (std::size_t j = H + 1; j < M; ++j) {
    full[j] = odd ? -half_period[M - j] : half_period[M - j];
  }
  if (odd) {
    full[0] = 0.0;
    full[H] = 0.0;
  }

  const Frequency K = std::min<Frequency>(cutoff, static_cast<Frequency>(H) - 1);
  if (K < 1) throw std::invalid_argument("too few samples for a nonconstant spectrum");
  TruncatedSpectrum out(K);
  const double step = kTwoPi / static_cast<double>(M);
  std::vector<Complex> c(static_cast<std::size_t>(K) + 1);
  std::vector<Complex> c_neg(static_cast<std::size_t>(K) + 1);
  for (Frequency k = 0; k <= K; ++k) {
    detail::CompensatedComplexSum pos;
    detail::CompensatedComplexSum neg;
    for (std::size_t j = 0; j < M; ++j) {
      const auto phase = static_cast<double>((static_cast<std::size_t>(k) * j) % M) * step;
      const Complex e = std::polar(1.0, -phase);
      pos.add(full[j] * e);
      neg.add(full[j] * std::conj(e));
    }
    c[static_cast<std::size_t>(k)] = pos.value() / static_cast<double>(M);
    c_neg[static_cast<std::size_t>(k)] = neg.value() / static_cast<double>(M);
  }
  for (Frequency k = 0; k <= K; ++k) {
    const auto i = static_cast<std::size_t>(k);
    Complex a = c[i];
    Complex b = c_neg[i];
    if (odd) {
      a = 0.5 * (a - b);
      b = -a;
      if (k == 0 || (family == 2 && k % 2 == 0)) a = b = 0.0;
    } else {
      a = b = 0.5 * (a + b);
    }
    out.set(k, a);
    if (k != 0) out.set(-k, b);
  }
  return out;
}

SampledFunction restrict(const TruncatedSpectrum& s, int family, std::size_t points) {
  SampledFunction u = SampledFunction::uniform(segment_length(family), points);
  for (std::size_t j = 0; j < points; ++j) u.values[j] = sum_series(s, 0, u.grid[j]);
  return u;
}

Complex spline_derivative(const TruncatedSpectrum& s, int degree, int order, double x) {
  if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
  if (order >= degree && !s.exact()) {
    throw InsufficientDecay("derivative of order " + std::to_string(order) +
                            " of a degree " + std::to_string(degree) +
                            " spline has no absolutely convergent series");
  }
  return sum_series(s, order, x);
}

bool BoundaryReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundaryCheck& c) { return c.ok; });
}

BoundaryReport verify_boundary(const TruncatedSpectrum& s, const SplineSpaceSpec& spec,
                               double tol) {
  spec.validate();
  const int d = spec.degree;
  const int q = spec.q_index();
  // (parity of the order, inclusive upper order, points)
  struct Rule {
    int parity;
    bool inclusive;
    std::vector<double> points;
  };
  std::vector<Rule> rules;
  switch (q) {
    case 1: rules = {{0, false, {0.0, kPi}}}; break;
    case 2: rules = {{0, true, {0.0, kPi}}}; break;
    case 3: rules = {{1, false, {0.0, kPi}}}; break;
    case 4: rules = {{1, true, {0.0, kPi}}}; break;
    case 5: rules = {{0, false, {0.0}}, {1, true, {kPi / 2.0}}}; break;
    default: rules = {{0, true, {0.0}}, {1, false, {kPi / 2.0}}}; break;
  }
  double symmetry_defect = 0.0;
  double scale = 0.0;
  for (const auto& [k, c] : s.coefficients()) scale = std::max(scale, std::abs(c));
  const ClassVariant cls = family_class(spec.family);
  for (const auto& [k, c] : s.coefficients()) {
    const Complex mirror = s[-k];
    double defect = cls == ClassVariant::H1 ? std::abs(c - mirror) : std::abs(c + mirror);
    if (cls == ClassVariant::H2 && k % 2 == 0) defect = std::max(defect, std::abs(c));
    symmetry_defect = std::max(symmetry_defect, defect);
  }
  if (scale > 0.0) symmetry_defect /= scale;

  BoundaryReport report;
  for (const Rule& rule : rules) {
    const int top = rule.inclusive ? d : d - 1;
    for (int order = rule.parity; order <= top; order += 2) {
      for (const double x : rule.points) {
        BoundaryCheck check;
        check.order = order;
        check.x = x;
        if (order < d || s.exact()) {
          check.value = std::abs(spline_derivative(s, d, order, x));
          check.ok = check.value <= tol;
        } else {
          check.structural = true;
          check.value = symmetry_defect;
          check.ok = symmetry_defect <= tol && !on_lattice(spec, x);
        }
        report.checks.push_back(check);
      }
    }
  }
  return report;
}

int dimension_check(const SplineSpaceSpec& spec, Frequency cutoff, std::size_t grid_points) {
  spec.validate();
  if (grid_points == 0) grid_points = static_cast<std::size_t>(4 * (spec.n + spec.degree) + 1);
  const auto elements = q_space_basis(spec, cutoff);
  const auto rows = static_cast<Eigen::Index>(grid_points);
  const auto cols = static_cast<Eigen::Index>(elements.size());
  Eigen::MatrixXcd a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const SampledFunction u =
        restrict(elements[static_cast<std::size_t>(j)], spec.family, grid_points);
    for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = u.values[static_cast<std::size_t>(i)];
    const double norm = a.col(j).norm();
    if (norm > 0.0) a.col(j) /= norm;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const auto& sv = svd.singularValues();
  return static_cast<int>((sv.array() > 1e-8).count());
}

KnotReport detect_knots(const SplineSpaceSpec& spec, Frequency cutoff) {
  spec.validate();
  KnotReport report;
  report.expected = knots_for(spec.family, spec.n, spec.parity).knots;
  const int ns = periodic_n(spec.family, spec.n);
  const int per_half = 32;
  const double delta = kPi / ns / (2.0 * per_half);
  report.resolution = delta;
  const double segment = spec.segment();
  const auto N = static_cast<std::size_t>(std::llround(segment / delta));
  const int d = spec.degree;
  const int order = std::max(d - 1, 0);
  // Endpoints may be knots of the periodic extension; their ripple is kept
  // out of the interior scan.
  constexpr std::size_t kGuard = 4;
  constexpr std::size_t kWindow = 3;

  std::vector<bool> found(report.expected.size(), false);
  bool subset = true;
  for (const TruncatedSpectrum& s : q_space_basis(spec, cutoff)) {
    const TruncatedSpectrum g = derivative(TruncatedSpectrum::trigonometric(s.coefficients()), order);
    // Difference sequence located at grid positions j δ, j = 1..N-1.  The
    // detection scale is the size of the sampled values (jumps, d = 0) or of
    // their first differences (slope changes).
    std::vector<Complex> diff(N + 1, Complex{});
    double scale = 0.0;
    if (d == 0) {
      std::vector<Complex> v(N);
      for (std::size_t j = 0; j < N; ++j) v[j] = sum_series(g, 0, (j + 0.5) * delta);
      for (std::size_t j = 1; j < N; ++j) diff[j] = v[j] - v[j - 1];
      for (const Complex& x : v) scale = std::max(scale, std::abs(x));
    } else {
      std::vector<Complex> v(N + 1);
      for (std::size_t j = 0; j <= N; ++j) v[j] = sum_series(g, 0, j * delta);
      for (std::size_t j = 1; j < N; ++j) diff[j] = v[j + 1] - 2.0 * v[j] + v[j - 1];
      for (std::size_t j = 0; j < N; ++j) scale = std::max(scale, std::abs(v[j + 1] - v[j]));
    }
    // Spike measure: the smooth part of the differences varies slowly and
    // cancels against the neighbours two steps away.
    std::vector<double> spike(N + 1, 0.0);
    for (std::size_t j = kGuard; j + kGuard <= N; ++j) {
      spike[j] = std::abs(diff[j] - 0.5 * (diff[j - 2] + diff[j + 2]));
    }
    const double threshold = (d == 0 ? 0.1 : 0.02) * scale;
    if (!(threshold > 0.0)) continue;
    for (std::size_t j = kGuard; j + kGuard <= N; ++j) {
      if (spike[j] < threshold) continue;
      const auto lo = j - kWindow;
      const auto hi = std::min(N, j + kWindow);
      const bool is_max = std::all_of(spike.begin() + static_cast<std::ptrdiff_t>(lo),
                                      spike.begin() + static_cast<std::ptrdiff_t>(hi) + 1,
                                      [&](double v) { return v <= spike[j]; });
      if (!is_max) continue;
      const double x = static_cast<double>(j) * delta;
      report.detected.push_back(x);
      bool near = false;
      for (std::size_t i = 0; i < report.expected.size(); ++i) {
        if (std::abs(report.expected[i] - x) <= 1.5 * delta) {
          near = true;
          found[i] = true;
        }
      }
      subset = subset && near;
    }
  }
  std::sort(report.detected.begin(), report.detected.end());
  report.detected.erase(std::unique(report.detected.begin(), report.detected.end(),
                                    [&](double a, double b) { return std::abs(a - b) < 0.5 * delta; }),
                        report.detected.end());
  report.detected_subset = subset;
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (!found[i]) report.missing.push_back(report.expected[i]);
  }
  report.all_found = report.missing.empty();
  return report;
}

std::string format_complex(Complex z) {
  std::ostringstream os;
  os << std::setprecision(17) << z.real() << (std::signbit(z.imag()) ? '-' : '+')
     << std::abs(z.imag()) << 'i';
  return os.str();
}

Complex parse_complex(std::string_view text) {
  const std::string s(text);
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double re = std::strtod(begin, &end);
  if (end == begin || errno == ERANGE) {
    throw std::invalid_argument("malformed complex value '" + s + "'");
  }
  const char* p = end;
  while (*p == ' ') ++p;
  if (*p == '\0') return {re, 0.0};
  if (*p != '+' && *p != '-') throw std::invalid_argument("malformed complex value '" + s + "'");
  const double sign = *p == '-' ? -1.0 : 1.0;
  ++p;
  while (*p == ' ') ++p;
  const char* im_begin = p;
  double im = std::strtod(im_begin, &end);
  if (end == im_begin) {
    im = 1.0;  // "a+i"
  }
  p = end;
  while (*p == ' ') ++p;
  if (*p != 'i') throw std::invalid_argument("malformed complex value '" + s + "'");
  ++p;
  while (*p == ' ') ++p;
  if (*p != '\0') throw std::invalid_argument("malformed complex value '" + s + "'");
  return {re, sign * im};
}

void write_csv(std::ostream& os, const SampledFunction& u) {
  const auto old_precision = os.precision(17);
  os << "x,value\n";
  for (std::size_t j = 0; j < u.grid.size(); ++j) {
    os << u.grid[j] << ',' << format_complex(u.values[j]) << '\n';
  }
  os.precision(old_precision);
}

SampledFunction read_sampled_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("empty sample file");
  if (line.rfind("x,", 0) != 0) throw std::invalid_argument("missing header 'x,value'");
  SampledFunction u;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("malformed row '" + line + "'");
    std::size_t used = 0;
    const double x = std::stod(line.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("malformed abscissa in '" + line + "'");
    u.grid.push_back(x);
    u.values.push_back(parse_complex(line.substr(comma + 1)));
  }
  if (u.grid.size() < 2) throw std::invalid_argument("a sampled function needs two points");
  u.grid_step = (u.grid.back() - u.grid.front()) / static_cast<double>(u.grid.size() - 1);
  return u;
}

}  // namespace shiftapprox
