#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "fcmac/json_io.hpp"
#include "fcmac_tools/cli.hpp"
#include "fcmac_tools/experiments.hpp"

using namespace fcmac;
using namespace fcmac::tools;

namespace {

std::string data(const std::string& name) {
  return (std::filesystem::path(FCMAC_TEST_DATA_DIR) / name).string();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, ExperimentsExitZeroAndEmitCsv) {
  for (const std::string id : {"section5", "gauss-binary"}) {
    const auto r = run({"experiment", id});
    EXPECT_EQ(r.code, tools::kExitOk) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), tools::kCsvHeader);
  }
  const auto r = run({"experiment", "gauss-diff", "--samples", "20000", "--format", "json"});
  EXPECT_EQ(r.code, tools::kExitOk) << r.err;
  EXPECT_NO_THROW(Json::parse(r.out));
}

TEST(Cli, SameSeedSameBytes) {
  const std::vector<std::string> args{"experiment", "uniform-grid", "--samples", "20000", "--seed", "9"};
  const auto a = run(args), b = run(args);
  EXPECT_EQ(a.code, tools::kExitOk);
  EXPECT_EQ(a.out, b.out);
  auto other = args;
  other.back() = "10";
  EXPECT_NE(run(other).out, a.out);
}

TEST(Cli, SeedFromEnvironment) {
  const std::vector<std::string> args{"experiment", "gauss-diff", "--samples", "20000"};
  ::setenv("FCMAC_SEED", "5", 1);
  const auto env = run(args);
  ::unsetenv("FCMAC_SEED");
  auto explicit_args = args;
  explicit_args.insert(explicit_args.end(), {"--seed", "5"});
  EXPECT_EQ(env.out, run(explicit_args).out);
  EXPECT_NE(env.out, run(args).out);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, tools::kExitUsage);
  EXPECT_EQ(run({"experiment", "nope"}).code, tools::kExitUsage);
  EXPECT_EQ(run({"experiment", "section5", "--format", "xml"}).code, tools::kExitUsage);
  EXPECT_EQ(run({"--help"}).code, tools::kExitOk);
}

TEST(Cli, CheckTheorem1) {
  const auto joint = run({"check", "theorem1", "--spec", data("section5_joint_code.json"), "--allow-boundary"});
  EXPECT_EQ(joint.code, tools::kExitOk) << joint.err;
  EXPECT_TRUE(Json::parse(joint.out).at("feasible").get<bool>());
  EXPECT_EQ(run({"check", "theorem1", "--spec", data("section5_joint_code.json")}).code, tools::kExitFailed);
  EXPECT_EQ(run({"check", "theorem1", "--spec", data("section5_independent_code.json"), "--allow-boundary"}).code,
            tools::kExitFailed);
  const auto csv = run({"check", "theorem1", "--spec", data("section5_joint_code.json"), "--allow-boundary",
                        "--format", "csv"});
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "name,lhs_bits,rhs_bits,margin_bits,verdict");
  const auto bad = run({"check", "theorem1", "--spec", data("malformed_spec.json")});
  EXPECT_EQ(bad.code, tools::kExitUsage);
  EXPECT_NE(bad.err.find("/distortion/matrix"), std::string::npos) << bad.err;
}

TEST(Cli, GraphCommands) {
  const auto built = run({"graph", "build", "--joint", data("section5_joint.json"), "--function",
                          data("section5_function.json")});
  ASSERT_EQ(built.code, tools::kExitOk) << built.err;
  EXPECT_EQ(Json::parse(built.out).at("edges"), Json::parse(R"([["1","3"]])"));

  const auto threshold = run({"graph", "build", "--joint", data("section5_joint.json"), "--function",
                              data("section5_function.json"), "--delta", "0.5"});
  EXPECT_EQ(threshold.code, tools::kExitOk);

  const auto color = run({"graph", "color", "--graph", data("section5_graph.json"), "--joint", data("section5_joint.json")});
  ASSERT_EQ(color.code, tools::kExitOk) << color.err;
  EXPECT_NEAR(Json::parse(color.out).at("entropy_bits").get<double>(), 0.9183, 1e-4);

  const auto ent = run({"graph", "entropy", "--graph", data("section5_graph.json"), "--joint",
                        data("section5_joint.json"), "--n", "1"});
  ASSERT_EQ(ent.code, tools::kExitOk) << ent.err;
  const auto j = Json::parse(ent.out);
  EXPECT_NEAR(j.at("conditional_chromatic_entropy_bits").get<double>(), 2.0 / 3.0, 1e-9);
  EXPECT_FALSE(j.at("zigzag_holds").get<bool>());
}

TEST(Cli, ChannelCommands) {
  const auto cap = run({"channel", "capacity", "--mac", data("adder_mac.json")});
  ASSERT_EQ(cap.code, tools::kExitOk) << cap.err;
  EXPECT_NEAR(Json::parse(cap.out).at("sum_capacity_bits").get<double>(), 1.5, 1e-4);
  const auto g = run({"channel", "gmac", "--power", "5", "--rho", "0.3"});
  EXPECT_NEAR(Json::parse(g.out).at("sum_rate_bits").get<double>(), 1.9037, 1e-4);
  EXPECT_EQ(run({"channel", "gmac", "--power", "5", "--rho", "1.5"}).code, tools::kExitUsage);
}
