#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <algorithm>
#include <random>

#include "fcmac/error.hpp"
#include "fcmac/json_io.hpp"
#include "oracles.hpp"

using namespace fcmac;

namespace {

std::filesystem::path data(const std::string& name) { return std::filesystem::path(FCMAC_TEST_DATA_DIR) / name; }

std::string schema_path(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const SchemaError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST(Json, PmfRoundTrip) {
  std::mt19937_64 rng(5);
  const auto p = oracle::random_pmf(rng, {oracle::labeled("a", 2), oracle::labeled("b", 3), oracle::labeled("c", 2)});
  const auto back = pmf_from_json(to_json(p));
  EXPECT_EQ(back.axis_names(), p.axis_names());
  EXPECT_TRUE(std::ranges::equal(back.mass(), p.mass()));
}

TEST(Json, KernelGraphFunctionDistortionRoundTrip) {
  std::mt19937_64 rng(6);
  const auto k = oracle::random_kernel(rng, {oracle::labeled("x", 2), oracle::labeled("s", 2)}, {oracle::labeled("y", 3)});
  const auto k2 = kernel_from_json(to_json(k));
  EXPECT_EQ(std::vector<double>(k2.data().begin(), k2.data().end()), std::vector<double>(k.data().begin(), k.data().end()));
  EXPECT_EQ(k2.to()[0], k.to()[0]);

  const auto g = oracle::random_graph(rng, 6, 0.4);
  EXPECT_EQ(graph_from_json(to_json(g)), g);
  const Coloring c{{0, 1, 0, 2, 1, 1}};
  EXPECT_EQ(coloring_from_json(coloring_to_json(g, c), g).color_of, c.color_of);

  const auto f = section5_function();
  const auto f2 = function_from_json(to_json(f));
  EXPECT_EQ(f2.values(), f.values());

  const auto d = DistortionTable::absolute({"0", "0.5", "1"});
  EXPECT_EQ(distortion_from_json(to_json(d)).matrix(), d.matrix());
}

TEST(Json, SpecRoundTripPreservesReport) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 5; ++t) {
    const auto spec = oracle::random_spec(rng);
    const auto again = spec_from_json(to_json(spec));
    const auto a = check_feasibility(spec), b = check_feasibility(again);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(a.inequalities[i].lhs, b.inequalities[i].lhs);
    EXPECT_EQ(a.achieved_distortion, b.achieved_distortion);
  }
}

TEST(Json, FractionStrings) {
  const Json j = Json::parse(R"({"axes":[{"name":"u","symbols":["a","b","c"]}],"mass":["1/6","1/3",0.5]})");
  const auto p = pmf_from_json(j);
  EXPECT_DOUBLE_EQ(p.mass()[0], 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(p.mass()[1], 1.0 / 3.0);
  EXPECT_EQ(schema_path([] { pmf_from_json(Json::parse(R"({"axes":[{"name":"u","symbols":["a"]}],"mass":["1/0"]})")); }),
            "/mass/0");
}

TEST(Json, SchemaErrorsNameTheField) {
  EXPECT_EQ(schema_path([] { alphabet_from_json(Json::parse(R"({"name":"u"})")); }), "/symbols");
  EXPECT_EQ(schema_path([] { pmf_from_json(Json::parse(R"({"axes":[{"name":"u","symbols":["a","b"]}],"mass":[1]})")); }),
            "/mass");
  EXPECT_EQ(schema_path([] { config_from_json(Json::parse(R"({"experiment":"section5","pwer":3})")); }), "/pwer");
  EXPECT_EQ(schema_path([] { spec_from_json(read_json_file(data("malformed_spec.json"))); }), "/distortion/matrix");
}

TEST(Json, InvariantViolationsKeepTheirTypes) {
  EXPECT_THROW(pmf_from_json(Json::parse(R"({"axes":[{"name":"u","symbols":["a","b"]}],"mass":[0.5,0.6]})")),
               InvalidDistribution);
}

TEST(Json, MalformedFile) {
  const auto path = std::filesystem::temp_directory_path() / "fcmac_bad.json";
  std::ofstream(path) << "{\"axes\": [";
  EXPECT_THROW(read_json_file(path), SchemaError);
  EXPECT_THROW(read_json_file(data("does_not_exist.json")), Error);
  std::filesystem::remove(path);
}

TEST(Json, DataFilesLoad) {
  const auto spec = spec_from_json(read_json_file(data("section5_joint_code.json")));
  EXPECT_NEAR(spec.target_d, 1.0 / 6.0, 1e-15);
  EXPECT_EQ(mac_from_json(read_json_file(data("adder_mac.json"))).output().size(), 3u);
  EXPECT_EQ(graph_from_json(read_json_file(data("section5_graph.json"))).edges().size(), 1u);
}

TEST(Json, ConfigRoundTrip) {
  SchemeConfig c;
  c.experiment = "uniform-grid";
  c.delta = 1.0 / 6.0;
  c.cells = 3;
  c.seed = 42;
  const auto back = config_from_json(to_json(c));
  EXPECT_EQ(back.experiment, "uniform-grid");
  EXPECT_EQ(back.delta, c.delta);
  EXPECT_EQ(back.cells, c.cells);
  EXPECT_EQ(back.seed, 42u);
  EXPECT_FALSE(back.rho.has_value());
}
