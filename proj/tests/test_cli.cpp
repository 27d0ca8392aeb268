#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "disclab/cli.hpp"

using namespace disclab;
namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "disclab_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, ConstructThenVerify) {
  const std::string path = scratch("w3.json").string();
  Result c = run({"construct", "--steps", "3", "--nu-schedule", "1/k", "--out", path});
  ASSERT_EQ(c.status, 0) << c.err;
  EXPECT_EQ(nlohmann::json::parse(c.out), nlohmann::json::parse(slurp(path)));
  Result v = run({"verify", "--witness", path});
  EXPECT_EQ(v.status, 0) << v.err;
  EXPECT_TRUE(nlohmann::json::parse(v.out)["pass"].get<bool>());
}

TEST(Cli, CorruptedWitnessExitsThree) {
  const std::string path = scratch("bad.json").string();
  ASSERT_EQ(run({"construct", "--steps", "3", "--out", path}).status, 0);
  nlohmann::json j = nlohmann::json::parse(slurp(path));
  j["steps"][2]["c"] = "3";
  std::ofstream(path) << j.dump();
  Result v = run({"verify", "--witness", path, "--margins-csv", scratch("m.csv").string()});
  EXPECT_EQ(v.status, 3);
  nlohmann::json report = nlohmann::json::parse(v.out);
  EXPECT_FALSE(report["pass"].get<bool>());
  EXPECT_EQ(report["failure"]["check"], "1");
  EXPECT_EQ(report["failure"]["step"], 3);
  EXPECT_NE(slurp(scratch("m.csv")).find("k,check,margin"), std::string::npos);
}

TEST(Cli, CrBoundMatchesLibrary) {
  Result r = run({"cr-bound", "--p", "3", "--r", "0.5"});
  ASSERT_EQ(r.status, 0) << r.err;
  nlohmann::json j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(std::stod(j["value"].get<std::string>()), c_of_r(3.0, Real(0.5)), 1e-12);
  Result g = run({"cr-bound", "--p", "3", "--gap", "0.5"});
  EXPECT_EQ(g.out, r.out);
  EXPECT_EQ(run({"cr-bound", "--p", "2", "--r", "0.5"}).status, 2);
  EXPECT_EQ(run({"cr-bound", "--p", "3"}).status, 2);
}

TEST(Cli, NormAndKernelBound) {
  Result n = run({"norm", "--space", "dirichlet", "--p", "2", "--alpha", "1", "--coeffs", "0,0,1"});
  ASSERT_EQ(n.status, 0) << n.err;
  EXPECT_NEAR(nlohmann::json::parse(n.out)["value"].get<double>(), std::sqrt(4.0 / 3.0), 1e-8);
  Result k = run({"kernel-bound", "--nu", "0", "--gap", "0.5"});
  ASSERT_EQ(k.status, 0) << k.err;
  EXPECT_NEAR(std::stod(nlohmann::json::parse(k.out)["value"].get<std::string>()), std::sqrt(4.0 / 3.0), 1e-12);
  EXPECT_EQ(run({"norm", "--space", "nowhere", "--coeffs", "1"}).status, 2);
}

TEST(Cli, UnknownFlagIsUsageError) {
  Result r = run({"construct", "--bogus", "1"});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("construct"), std::string::npos);
  EXPECT_EQ(run({}).status, 2);
  EXPECT_EQ(run({"verify"}).status, 2);
}

TEST(Cli, ConfigFileFillsMissingFlags) {
  const fs::path cfg = scratch("cfg.json");
  std::ofstream(cfg) << R"({"p": 4, "r": 0.9})";
  Result a = run({"cr-bound", "--config", cfg.string()});
  ASSERT_EQ(a.status, 0) << a.err;
  Result b = run({"cr-bound", "--p", "4", "--r", "0.9"});
  EXPECT_EQ(a.out, b.out);
  Result c = run({"cr-bound", "--config", cfg.string(), "--p", "3"});
  EXPECT_EQ(c.out, run({"cr-bound", "--p", "3", "--r", "0.9"}).out);
}

TEST(Cli, DumpLoadAndProfile) {
  const std::string path = scratch("w4.json").string();
  ASSERT_EQ(run({"construct", "--steps", "4", "--out", path}).status, 0);
  Result d = run({"dump", "--witness", path});
  ASSERT_EQ(d.status, 0);
  EXPECT_EQ(d.out, slurp(path));
  Result l = run({"load", "--witness", path});
  EXPECT_EQ(nlohmann::json::parse(l.out)["steps"], 4);
  const std::string csv = scratch("profile.csv").string();
  const std::string radial = scratch("radial.csv").string();
  Result p = run({"radial-profile", "--witness", path, "--step", "4", "--grid", "256", "--csv", csv,
                  "--radial-csv", radial});
  ASSERT_EQ(p.status, 0) << p.err;
  nlohmann::json j = nlohmann::json::parse(p.out);
  EXPECT_GE(std::stod(j["min"].get<std::string>()), 4.0);
  EXPECT_EQ(slurp(csv).rfind("theta,modulus\n", 0), 0u);
  EXPECT_EQ(slurp(radial).rfind("r,gap,min_modulus,lower_bound\n", 0), 0u);
}

TEST(Cli, MembershipAndBaire) {
  const std::string path = scratch("w6.json").string();
  ASSERT_EQ(run({"construct", "--out", path}).status, 0);
  Result m = run({"membership", "--witness", path, "--nu", "1", "1/2", "1/3"});
  ASSERT_EQ(m.status, 0) << m.err;
  EXPECT_EQ(nlohmann::json::parse(m.out)["membership"].size(), 3u);
  EXPECT_EQ(run({"membership", "--witness", path, "--nu", "1/6"}).status, 3);
  Result a = run({"baire-a", "--witness", path, "--n-range", "0", "1", "--k-range", "2", "2", "--samples", "2",
                  "--grid", "512"});
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_TRUE(nlohmann::json::parse(a.out)["pass"].get<bool>());
  Result again = run({"baire-a", "--witness", path, "--n-range", "0", "1", "--k-range", "2", "2", "--samples",
                      "2", "--grid", "512"});
  EXPECT_EQ(again.out, a.out);
  EXPECT_EQ(run({"baire-h", "--witness", path, "--samples", "1", "--grid", "64"}).status, 2);
}

TEST(Cli, PhiWitnessAndBaireH) {
  const std::string path = scratch("phi.json").string();
  Result c = run({"construct", "--steps", "10", "--nu-schedule", "const:1", "--growth", "phi", "--phi", "log",
                  "--out", path});
  ASSERT_EQ(c.status, 0) << c.err;
  const fs::path exp = scratch("exp.json");
  std::ofstream(exp) << nlohmann::json{{"witness", path}, {"mode", "l1-average"}, {"space", {{"kind", "dirichlet"}, {"p", 3}, {"alpha", 2}}},
                                      {"n_range", {0, 1}}, {"k_range", {1, 1}}, {"samples", 2}, {"grid", 256}, {"seed", 5}, {"phi", "log"}}
                              .dump();
  Result h = run({"baire-h", "--experiment", exp.string()});
  ASSERT_EQ(h.status, 0) << h.err;
  EXPECT_TRUE(nlohmann::json::parse(h.out)["pass"].get<bool>());
}

TEST(Cli, PrecisionFromEnvironment) {
  ::setenv(cli::kPrecisionEnv, "320", 1);
  Result r = run({"kernel-bound", "--nu", "0", "--gap", "0.5"});
  ::unsetenv(cli::kPrecisionEnv);
  EXPECT_EQ(r.status, 0);
  ::setenv(cli::kPrecisionEnv, "abc", 1);
  EXPECT_EQ(run({"kernel-bound", "--nu", "0", "--gap", "0.5"}).status, 2);
  ::unsetenv(cli::kPrecisionEnv);
}
