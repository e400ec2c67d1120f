#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>
#include <variant>
#include <vector>

#include "shiftapprox/certify.hpp"
#include "shiftapprox/errors.hpp"
#include "shiftapprox/generators.hpp"
#include "shiftapprox/oracle.hpp"
#include "shiftapprox/shift_spaces.hpp"
#include "shiftapprox/splines.hpp"

namespace shiftapprox::cli {

namespace {

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string csv_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string quoted = "\"";
          for (char ch : v) {
            if (ch == '"') quoted += '"';
            quoted += ch;
          }
          return quoted + '"';
        } else if constexpr (std::is_same_v<T, double>) {
          if (std::isnan(v)) return "nan";
          if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
          std::ostringstream os;
          os << std::setprecision(17) << v;
          return os.str();
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return csv_cell(v);
        }
        return v;
      },
      c);
}

void emit(const Table& t, const std::string& format, std::ostream& out) {
  if (format == "json") {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = json_cell(row[i]);
      rows.push_back(std::move(obj));
    }
    out << rows.dump(2) << '\n';
    return;
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

void check_format(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json") {
    throw ConfigError("--format must be csv or json, got '" + cfg.format + "'");
  }
}

template <typename T>
const T& need(const std::optional<T>& v, const char* flag) {
  if (!v) throw ConfigError(std::string("missing required option --") + flag);
  return *v;
}

// Runs task(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

KernelSpec kernel_for(const std::string& text, int n) {
  KernelSpec k = parse_kernel(text);
  if (k.natural_n() == 0) {
    if (n < 1) throw ConfigError("kernel '" + text + "' needs n");
    k = k.with_n(n);
  }
  return k;
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Pass: return kExitPass;
    case Verdict::Fail: return kExitFail;
    case Verdict::Inconclusive: return kExitInconclusive;
  }
  return kExitError;
}

ClassVariant class_from(const std::string& name) {
  const auto c = parse_class(name);
  if (!c) throw ConfigError("unknown class '" + name + "'");
  return *c;
}

KnotParity parity_from(const std::string& name) {
  if (name == "integer") return KnotParity::Integer;
  if (name == "half") return KnotParity::Half;
  throw ConfigError("unknown knot parity '" + name + "'");
}

}  // namespace

void apply_json(RunConfig& cfg, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  auto get_int = [](const nlohmann::json& v, const std::string& key) {
    if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
    return v.get<std::int64_t>();
  };
  auto get_string = [](const nlohmann::json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
    return v.get<std::string>();
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "command") cfg.command = get_string(v, key);
    else if (key == "kernel") cfg.kernel = get_string(v, key);
    else if (key == "n") cfg.n = static_cast<int>(get_int(v, key));
    else if (key == "m") cfg.m = static_cast<int>(get_int(v, key));
    else if (key == "r") cfg.r = static_cast<int>(get_int(v, key));
    else if (key == "K") cfg.K = get_int(v, key);
    else if (key == "class") cfg.cls = get_string(v, key);
    else if (key == "tol") {
      if (!v.is_number()) throw ConfigError("'tol' must be a number");
      cfg.tol = v.get<double>();
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ConfigError("'seed' must be a nonnegative integer");
      cfg.seed = v.get<std::uint64_t>();
    } else if (key == "out") cfg.out = get_string(v, key);
    else if (key == "format") cfg.format = get_string(v, key);
    else if (key == "theorem") cfg.theorem = get_string(v, key);
    else if (key == "r-max") cfg.r_max = static_cast<int>(get_int(v, key));
    else if (key == "n-max") cfg.n_max = static_cast<int>(get_int(v, key));
    else if (key == "family") cfg.family = static_cast<int>(get_int(v, key));
    else if (key == "d") cfg.degree = static_cast<int>(get_int(v, key));
    else if (key == "parity") cfg.parity = get_string(v, key);
    else if (key == "input") cfg.input = get_string(v, key);
    else throw ConfigError("unknown configuration key '" + key + "'");
  }
}

int threads_from_env() {
  if (const char* env = std::getenv("SHIFTAPPROX_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
    throw ConfigError(std::string("SHIFTAPPROX_THREADS must be a positive integer, got '") +
                      env + "'");
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int run_certify(const RunConfig& cfg, std::ostream& out) {
  check_format(cfg);
  const std::string& theorem = need(cfg.theorem, "theorem");
  const KernelSpec kernel = kernel_for(need(cfg.kernel, "kernel"), cfg.n.value_or(0));
  const int n = cfg.n.value_or(kernel.natural_n());
  if (n < 1) throw ConfigError("--n is required for kernel " + kernel.describe());
  CertifyOptions opt;
  opt.cutoff = cfg.K.value_or(opt.cutoff);
  opt.tol = cfg.tol.value_or(opt.tol);
  if (opt.cutoff < 2 * static_cast<Frequency>(n)) throw ConfigError("K must be >= 2n");
  if (!(opt.tol > 0.0)) throw ConfigError("tol must be positive");
  const ConditionReport report =
      check_by_name(theorem, kernel, n, need(cfg.m, "m"), cfg.r.value_or(1), opt);
  if (cfg.format == "json") {
    out << to_json(report) << '\n';
  } else {
    write_csv(out, report);
  }
  return verdict_exit(report.overall);
}

int run_widths(const RunConfig& cfg, std::ostream& out) {
  check_format(cfg);
  const Frequency K = cfg.K.value_or(4096);
  const double tol = cfg.tol.value_or(1e-8);
  std::vector<ClassVariant> classes;
  if (cfg.cls) {
    classes.push_back(class_from(*cfg.cls));
  } else {
    classes = {ClassVariant::H0, ClassVariant::H1, ClassVariant::H2};
  }
  if (cfg.r_max < 1 || cfg.n_max < 1) throw ConfigError("r-max and n-max must be >= 1");

  struct Task {
    ClassVariant cls;
    int r;
    int n;
  };
  std::vector<Task> tasks;
  for (const ClassVariant c : classes) {
    if (c == ClassVariant::Periodic) throw ConfigError("widths supports H0, H1, H2, H2Even");
    for (int r = 1; r <= cfg.r_max; ++r) {
      for (int n = 1; n <= cfg.n_max; ++n) tasks.push_back({c, r, n});
    }
  }
  std::vector<std::vector<Cell>> rows(tasks.size());
  std::vector<bool> ok(tasks.size());
  parallel_for(tasks.size(), cfg.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    int ns = 0;
    SpaceVariant variant = SpaceVariant::Sym0;
    switch (t.cls) {
      case ClassVariant::H0: ns = t.n + 1; variant = SpaceVariant::Sym0; break;
      case ClassVariant::H1: ns = t.n; variant = SpaceVariant::Sym1; break;
      case ClassVariant::H2: ns = 2 * t.n + 1; variant = SpaceVariant::Sym2; break;
      default: ns = 2 * t.n + 1; variant = SpaceVariant::Sym2Even; break;
    }
    const KernelSpec kernel =
        cfg.kernel ? kernel_for(*cfg.kernel, ns) : KernelSpec::dirichlet(ns - 1);
    const ShiftSpaceSpec space{kernel, ns, variant, t.n};
    const FunctionClassTag tag{t.cls, t.r};
    const double width = ellipsoid_width(tag, t.n, K);
    const RatioResult ratio = worst_case_ratio({space, tag, K}, cfg.seed);
    const double root = std::sqrt(ratio.value);
    const double diff = std::abs(root - width);
    ok[i] = diff <= tol;
    rows[i] = {std::string(to_string(t.cls)), std::int64_t{t.r}, std::int64_t{t.n},
               kernel.describe(), width, root, diff, ratio.truncation_gap};
  });
  Table table{{"class", "r", "n", "kernel", "width", "ratio_sqrt", "abs_diff", "truncation_gap"},
              std::move(rows)};
  emit(table, cfg.format, out);
  return std::all_of(ok.begin(), ok.end(), [](bool b) { return b; }) ? kExitPass : kExitFail;
}

int run_project(const RunConfig& cfg, std::ostream& out) {
  check_format(cfg);
  const std::string& path = need(cfg.input, "input");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open input '" + path + "'");
  SampledFunction u;
  try {
    u = read_sampled_csv(in);
  } catch (const std::exception& e) {
    throw ConfigError("input '" + path + "': " + e.what());
  }
  const int family = cfg.family.value_or(0);
  if (family < 0 || family > 2) throw ConfigError("family must be 0, 1 or 2");
  const KernelSpec kernel = kernel_for(cfg.kernel.value_or("bspline:mu=3"), cfg.n.value_or(0));
  const int n = cfg.n.value_or(kernel.natural_n());
  if (n < 1) throw ConfigError("--n is required for kernel " + kernel.describe());
  const int r = cfg.r.value_or(1);
  const Frequency K = cfg.K.value_or(1024);
  static constexpr SpaceVariant variants[] = {SpaceVariant::Sym0, SpaceVariant::Sym1,
                                              SpaceVariant::Sym2};
  const int default_m = family == 0 ? n - 1 : family == 1 ? n : (n - 1) / 2;
  const ShiftSpaceSpec space{kernel, n, variants[family], cfg.m.value_or(default_m)};
  space.validate();

  const TruncatedSpectrum f = periodize(u, family, K, cfg.tol.value_or(1e-8));
  const Projection p = project(f, space, K);
  const double factor = transference_factor(family);
  const int M = jackson_denominator(space);
  const double bound =
      std::pow(static_cast<double>(M), -r) * l2_norm(derivative(f, r)).value / factor;
  const ConditionReport cert = check_by_name(std::to_string(family + 2), kernel, n, space.m, r);
  const double error = p.error / factor;
  const bool holds = error <= bound * (1.0 + 1e-12) + 1e-15;

  Table table{{"family", "kernel", "n", "m", "r", "error", "error_upper", "bound", "theorem",
               "theorem_verdict", "bound_holds"},
              {{std::int64_t{family}, kernel.describe(), std::int64_t{n}, std::int64_t{space.m},
                std::int64_t{r}, error, p.error_upper / factor, bound, cert.theorem,
                std::string(to_string(cert.overall)), holds}}};
  emit(table, cfg.format, out);
  if (cert.overall != Verdict::Pass) return kExitInconclusive;
  return holds ? kExitPass : kExitFail;
}

int run_splines(const RunConfig& cfg, std::ostream& out) {
  check_format(cfg);
  const double tol = cfg.tol.value_or(1e-8);
  std::vector<int> families = cfg.family ? std::vector<int>{*cfg.family} : std::vector<int>{0, 1, 2};
  std::vector<int> degrees;
  std::vector<int> ns;
  if (cfg.degree) degrees = {*cfg.degree}; else degrees = {0, 1, 2, 3, 4, 5};
  if (cfg.n) ns = {*cfg.n}; else ns = {1, 2, 3, 4, 5};
  const std::string parity = cfg.parity.value_or("natural");
  std::vector<SplineSpaceSpec> specs;
  for (const int family : families) {
    for (const int d : degrees) {
      for (const int n : ns) {
        if (family < 0 || family > 2 || d < 0 || n < 1) {
          throw ConfigError("splines need family in 0..2, d >= 0, n >= 1");
        }
        if (parity == "natural") {
          specs.push_back({d, family, n, natural_parity(family, d)});
        } else if (parity == "both") {
          specs.push_back({d, family, n, KnotParity::Integer});
          specs.push_back({d, family, n, KnotParity::Half});
        } else {
          specs.push_back({d, family, n, parity_from(parity)});
        }
      }
    }
  }

  std::vector<std::vector<Cell>> rows(specs.size());
  std::vector<bool> ok(specs.size());
  parallel_for(specs.size(), cfg.threads, [&](std::size_t i) {
    const SplineSpaceSpec& s = specs[i];
    const Frequency K = cfg.K.value_or(512 * s.n);
    const int dim = dimension_check(s, K);
    bool boundary_ok = true;
    double worst = 0.0;
    for (const TruncatedSpectrum& e : q_space_basis(s, K)) {
      const BoundaryReport b = verify_boundary(e, s, tol);
      boundary_ok = boundary_ok && b.ok();
      for (const BoundaryCheck& c : b.checks) worst = std::max(worst, c.value);
    }
    const KnotReport knots = detect_knots(s, K);
    ok[i] = dim == s.n && boundary_ok && knots.ok();
    rows[i] = {std::int64_t{s.family},
               std::int64_t{s.degree},
               std::int64_t{s.n},
               std::string(to_string(s.parity)),
               "Q_{" + std::to_string(s.degree) + "," + std::to_string(s.q_index()) + "}",
               s.equals_q(),
               std::int64_t{dim},
               boundary_ok,
               worst,
               knots.ok(),
               static_cast<std::int64_t>(knots.detected.size()),
               static_cast<std::int64_t>(knots.missing.size())};
  });
  Table table{{"family", "d", "n", "parity", "q_space", "equals_q", "dimension", "boundary_ok",
               "boundary_max", "knots_ok", "knots_detected", "knots_inactive"},
              std::move(rows)};
  emit(table, cfg.format, out);
  return std::all_of(ok.begin(), ok.end(), [](bool b) { return b; }) ? kExitPass : kExitFail;
}

int run_kernels(const RunConfig& cfg, std::ostream& out) {
  check_format(cfg);
  Table table{{"name", "parameters", "coefficients"}, {}};
  for (const KernelCatalogEntry& e : kernel_catalog()) {
    table.rows.push_back({e.name, e.parameters, e.coefficients});
  }
  emit(table, cfg.format, out);
  return kExitPass;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "certify") return run_certify(cfg, out);
    if (cfg.command == "widths") return run_widths(cfg, out);
    if (cfg.command == "project") return run_project(cfg, out);
    if (cfg.command == "splines") return run_splines(cfg, out);
    if (cfg.command == "kernels") return run_kernels(cfg, out);
    throw ConfigError("unknown command '" + cfg.command + "'");
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace shiftapprox::cli
