#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

namespace sc = shiftapprox::cli;

namespace {

struct Flags {
  std::string config;
  std::string kernel;
  int n = 0, m = 0, r = 0, r_max = 0, n_max = 0, family = 0, degree = 0;
  std::int64_t K = 0;
  std::string cls, theorem, parity, input, out, format;
  double tol = 0.0;
  std::uint64_t seed = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shift-space approximation: certificates, widths and spline checks"};
  app.require_subcommand(1);
  Flags f;
  std::vector<std::pair<CLI::App*, std::vector<CLI::Option*>>> subs;

  auto common = [&](CLI::App* sub) {
    std::vector<CLI::Option*> opts;
    opts.push_back(sub->add_option("--config", f.config, "JSON configuration file"));
    opts.push_back(sub->add_option("--kernel", f.kernel, "kernel, e.g. bspline:n=8,mu=3"));
    opts.push_back(sub->add_option("--n", f.n, "shift parameter n"));
    opts.push_back(sub->add_option("--m", f.m, "space parameter m"));
    opts.push_back(sub->add_option("--r", f.r, "smoothness order r"));
    opts.push_back(sub->add_option("--K", f.K, "truncation frequency"));
    opts.push_back(sub->add_option("--class", f.cls, "function class H0|H1|H2|H2Even|Periodic"));
    opts.push_back(sub->add_option("--tol", f.tol, "tolerance"));
    opts.push_back(sub->add_option("--seed", f.seed, "random seed"));
    opts.push_back(sub->add_option("--out", f.out, "output file (default stdout)"));
    opts.push_back(sub->add_option("--format", f.format, "csv or json"));
    return opts;
  };

  auto* certify = app.add_subcommand("certify", "check the coefficient conditions of a theorem");
  auto certify_opts = common(certify);
  certify_opts.push_back(certify->add_option("--theorem", f.theorem, "1, c1, 2, 3, 4 or decay"));
  subs.emplace_back(certify, certify_opts);

  auto* widths = app.add_subcommand("widths", "ellipsoid widths against worst-case ratios");
  auto widths_opts = common(widths);
  widths_opts.push_back(widths->add_option("--r-max", f.r_max, "largest r (default 3)"));
  widths_opts.push_back(widths->add_option("--n-max", f.n_max, "largest n (default 6)"));
  subs.emplace_back(widths, widths_opts);

  auto* project = app.add_subcommand("project", "approximate sampled data by a symmetric space");
  auto project_opts = common(project);
  project_opts.push_back(project->add_option("--input", f.input, "CSV samples x,value"));
  project_opts.push_back(project->add_option("--family", f.family, "0, 1 or 2"));
  subs.emplace_back(project, project_opts);

  auto* splines = app.add_subcommand("splines", "dimension, boundary and knot checks");
  auto splines_opts = common(splines);
  splines_opts.push_back(splines->add_option("--family", f.family, "0, 1 or 2 (default all)"));
  splines_opts.push_back(splines->add_option("--d", f.degree, "degree (default 0..5)"));
  splines_opts.push_back(
      splines->add_option("--parity", f.parity, "natural, integer, half or both"));
  subs.emplace_back(splines, splines_opts);

  auto* kernels = app.add_subcommand("kernels", "list the kernel families");
  kernels->add_subcommand("list", "list the kernel families")->fallthrough();
  subs.emplace_back(kernels, common(kernels));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sc::kExitConfig;
  }

  sc::RunConfig cfg;
  try {
    for (const auto& [sub, opts] : subs) {
      if (!sub->parsed()) continue;
      cfg.command = sub->get_name();
      auto given = [&](const std::string& name) {
        for (const CLI::Option* o : opts) {
          if (o->get_name() == name) return o->count() > 0;
        }
        return false;
      };
      if (given("--config")) {
        std::ifstream in(f.config);
        if (!in) throw sc::ConfigError("cannot open config '" + f.config + "'");
        nlohmann::json j;
        try {
          in >> j;
        } catch (const nlohmann::json::exception& e) {
          throw sc::ConfigError("config '" + f.config + "': " + e.what());
        }
        sc::apply_json(cfg, j);
        cfg.command = sub->get_name();
      }
      if (given("--kernel")) cfg.kernel = f.kernel;
      if (given("--n")) cfg.n = f.n;
      if (given("--m")) cfg.m = f.m;
      if (given("--r")) cfg.r = f.r;
      if (given("--K")) cfg.K = f.K;
      if (given("--class")) cfg.cls = f.cls;
      if (given("--tol")) cfg.tol = f.tol;
      if (given("--seed")) cfg.seed = f.seed;
      if (given("--out")) cfg.out = f.out;
      if (given("--format")) cfg.format = f.format;
      if (given("--theorem")) cfg.theorem = f.theorem;
      if (given("--r-max")) cfg.r_max = f.r_max;
      if (given("--n-max")) cfg.n_max = f.n_max;
      if (given("--family")) cfg.family = f.family;
      if (given("--d")) cfg.degree = f.degree;
      if (given("--parity")) cfg.parity = f.parity;
      if (given("--input")) cfg.input = f.input;
    }
    cfg.threads = sc::threads_from_env();
  } catch (const sc::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return sc::kExitConfig;
  }

  if (cfg.out) {
    std::ofstream file(*cfg.out);
    if (!file) {
      std::cerr << "configuration error: cannot write '" << *cfg.out << "'\n";
      return sc::kExitConfig;
    }
    return sc::run(cfg, file, std::cerr);
  }
  return sc::run(cfg, std::cout, std::cerr);
}
