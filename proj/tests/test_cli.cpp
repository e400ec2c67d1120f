#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "shiftapprox/splines.hpp"

using namespace shiftapprox;
using namespace shiftapprox::cli;

namespace {

RunConfig certify(const std::string& kernel, const std::string& theorem, int m, int r) {
  RunConfig c;
  c.command = "certify";
  c.kernel = kernel;
  c.theorem = theorem;
  c.m = m;
  c.r = r;
  return c;
}

int run_quiet(const RunConfig& cfg, std::string* out_text = nullptr) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(cfg, out, err);
  if (out_text) *out_text = out.str();
  return code;
}

}  // namespace

TEST(Cli, CertifyExitCodes) {
  RunConfig pass = certify("bspline:n=8,mu=3", "2", 7, 2);
  pass.K = 1024;
  EXPECT_EQ(run_quiet(pass), kExitPass);
  EXPECT_EQ(run_quiet(certify("bspline:n=8,mu=0", "1", 8, 3)), kExitFail);
  EXPECT_EQ(run_quiet(certify("dirichlet:deg=7", "4", 3, 1)), kExitPass);
  RunConfig open = certify("poisson:n=4,mu=0,alpha=0.5", "decay", 4, 2);
  open.K = 8;
  EXPECT_EQ(run_quiet(open), kExitInconclusive);
}

TEST(Cli, ConfigErrors) {
  EXPECT_EQ(run_quiet(certify("bspline:n=8,mu=0", "7", 8, 3)), kExitConfig);
  EXPECT_EQ(run_quiet(certify("nonsense", "1", 8, 3)), kExitConfig);
  RunConfig missing;
  missing.command = "certify";
  missing.kernel = "bspline:n=8,mu=3";
  EXPECT_EQ(run_quiet(missing), kExitConfig);
  RunConfig unknown;
  unknown.command = "frobnicate";
  EXPECT_EQ(run_quiet(unknown), kExitConfig);
}

TEST(Cli, CertifyRowsHaveVerdictColumns) {
  std::string text;
  run_quiet(certify("bspline:n=8,mu=3", "2", 7, 2), &text);
  EXPECT_EQ(text.rfind("theorem,l,id,margin,slack,verdict\n", 0), 0u);
  RunConfig js = certify("bspline:n=8,mu=3", "2", 7, 2);
  js.format = "json";
  run_quiet(js, &text);
  const auto j = nlohmann::json::parse(text);
  EXPECT_TRUE(j.is_object() || j.is_array());
}

TEST(Cli, ApplyJsonUsesFlagNames) {
  RunConfig c;
  apply_json(c, nlohmann::json::parse(
                    R"({"command":"widths","r-max":2,"n-max":3,"class":"H0","seed":7})"));
  EXPECT_EQ(c.command, "widths");
  EXPECT_EQ(c.r_max, 2);
  EXPECT_EQ(c.n_max, 3);
  EXPECT_EQ(c.cls, "H0");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"colour":"blue"})")), ConfigError);
  EXPECT_THROW(apply_json(c, nlohmann::json::parse(R"({"n":"four"})")), ConfigError);
}

TEST(Cli, WidthsReproduceTable) {
  RunConfig c;
  c.command = "widths";
  c.r_max = 2;
  c.n_max = 3;
  c.K = 1024;
  std::string text;
  EXPECT_EQ(run_quiet(c, &text), kExitPass);
  EXPECT_NE(text.find("H2"), std::string::npos);
}

TEST(Cli, DeterministicOutput) {
  RunConfig c;
  c.command = "widths";
  c.r_max = 2;
  c.n_max = 4;
  c.K = 512;
  std::string a;
  std::string b;
  c.threads = 1;
  run_quiet(c, &a);
  c.threads = 4;
  run_quiet(c, &b);
  EXPECT_EQ(a, b);
}

TEST(Cli, SplinesSweep) {
  RunConfig c;
  c.command = "splines";
  c.family = 2;
  c.degree = 4;
  c.n = 3;
  EXPECT_EQ(run_quiet(c), kExitPass);
}

TEST(Cli, KernelCatalog) {
  RunConfig c;
  c.command = "kernels";
  std::string text;
  EXPECT_EQ(run_quiet(c, &text), kExitPass);
  EXPECT_NE(text.find("bspline"), std::string::npos);
}

TEST(Cli, ProjectSampledFunction) {
  const auto path = std::filesystem::temp_directory_path() / "shiftapprox_project_input.csv";
  {
    SampledFunction u = SampledFunction::uniform(kPi, 129);
    for (std::size_t i = 0; i < u.grid.size(); ++i) {
      const double x = u.grid[i];
      u.values[i] = x * (kPi - x);
    }
    std::ofstream f(path);
    write_csv(f, u);
  }
  RunConfig c;
  c.command = "project";
  c.input = path.string();
  c.family = 0;
  c.n = 4;
  c.r = 1;
  std::string text;
  EXPECT_EQ(run_quiet(c, &text), kExitPass);
  EXPECT_FALSE(text.empty());
  std::filesystem::remove(path);
}
