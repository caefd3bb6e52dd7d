#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "fcmac/error.hpp"
#include "fcmac/graph.hpp"
#include "fcmac/schemes.hpp"
#include "oracles.hpp"

using namespace fcmac;

namespace {

std::vector<double> weights_of(const JointPMF& p) { return {p.mass().begin(), p.mass().end()}; }

JointPMF grid_cells() { return exact_cell_pmf(BlockDensity::off_diagonal(3), GridQuantizer{0.0, 1.0, 3}); }

FunctionTable grid_abs_diff(const JointPMF& w) {
  const GridQuantizer q{0.0, 1.0, 3};
  return FunctionTable::from(w.axes(), [&](std::span<const std::size_t> i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", std::abs(q.center(i[0]) - q.center(i[1])));
    return std::string(buf);
  });
}

}  // namespace

TEST(CharGraph, NormalizesAndRejectsBadEdges) {
  const auto v = Alphabet::integers("u", 1, 3);
  const CharGraph g(v, {{2, 0}, {0, 2}});
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 2}}));
  EXPECT_THROW(CharGraph(v, {{1, 1}}), Error);
  EXPECT_THROW(CharGraph(v, {{0, 5}}), Error);
}

TEST(CharacteristicGraph, TernarySingleEdge) {
  const auto g = characteristic_graph(section5_joint(), section5_function());
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 2}}));
  const auto g2 = characteristic_graph(transpose(section5_joint()), transpose(section5_function()));
  EXPECT_EQ(g2.edges(), (std::vector<Edge>{{0, 2}}));
}

TEST(CharacteristicGraph, ThresholdOnQuantizedGrid) {
  const auto w = grid_cells();
  const auto g = characteristic_graph(w, grid_abs_diff(w), Fidelity::threshold(1.0 / 6.0));
  EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
  // cells 1 and 3 agree on their only common peer, so exact mode adds nothing
  EXPECT_EQ(characteristic_graph(w, grid_abs_diff(w)).edges(), g.edges());
}

TEST(CharacteristicGraph, ConstantAndInjectiveFunctions) {
  std::mt19937_64 rng(5);
  const auto u1 = oracle::labeled("u1", 4), u2 = oracle::labeled("u2", 3);
  const auto full = oracle::random_pmf(rng, {u1, u2});
  const auto constant = FunctionTable::from({u1, u2}, [](auto) { return std::string("k"); });
  EXPECT_TRUE(characteristic_graph(full, constant).edges().empty());
  const auto injective = FunctionTable::from({u1, u2}, [](auto i) { return std::to_string(i[0] * 10 + i[1]); });
  EXPECT_EQ(characteristic_graph(full, injective), CharGraph::complete(u1));
}

TEST(CharacteristicGraph, AlphabetMismatch) {
  const auto f = FunctionTable::from({Alphabet::integers("u1", 1, 2), Alphabet::integers("u2", 1, 3)},
                                     [](auto) { return std::string("0"); });
  EXPECT_THROW(characteristic_graph(section5_joint(), f), AlphabetMismatch);
}

TEST(OrProduct, IdentityAtOneAndDirectCount) {
  const auto g = characteristic_graph(section5_joint(), section5_function());
  EXPECT_EQ(or_product(g, 1).edges(), g.edges());
  const auto g2 = or_product(g, 2);
  ASSERT_EQ(g2.size(), 9u);
  std::size_t expected = 0;
  for (std::size_t a = 0; a < 9; ++a) {
    for (std::size_t b = a + 1; b < 9; ++b) {
      if (g.adjacent(a / 3, b / 3) || g.adjacent(a % 3, b % 3)) ++expected;
    }
  }
  EXPECT_EQ(g2.edges().size(), expected);
  EXPECT_EQ(g2.vertices()[0], "(1,1)");
  EXPECT_TRUE(or_product(CharGraph::edgeless(Alphabet::integers("u", 1, 3)), 3).edges().empty());
  EXPECT_THROW(or_product(g, 9), SizeCapError);
}

TEST(OrProduct, MonotoneInEdges) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto g = oracle::random_graph(rng, 3, 0.4);
    auto edges = g.edges();
    edges.emplace_back(0, 1);
    const CharGraph bigger(g.vertices(), edges);
    const auto small = or_product(g, 2).edges();
    const auto large = or_product(bigger, 2).edges();
    const std::set<Edge> big_set(large.begin(), large.end());
    for (const auto& e : small) EXPECT_TRUE(big_set.count(e));
  }
}

TEST(Coloring, TernaryExact) {
  const auto g = characteristic_graph(section5_joint(), section5_function());
  const auto r = min_entropy_coloring(g, marginalize(section5_joint(), {"u1"}));
  EXPECT_NEAR(r.entropy_bits, 0.9182958340544896, 1e-6);
  EXPECT_TRUE(is_proper(g, r.coloring));
  // lexicographically smallest optimal partition: {1,2} | {3}
  EXPECT_EQ(r.coloring.color_of, (std::vector<std::size_t>{0, 0, 1}));
}

TEST(Coloring, EdgelessAndClique) {
  const auto v = Alphabet::integers("u", 1, 3);
  const auto uniform = JointPMF::uniform({v});
  EXPECT_DOUBLE_EQ(min_entropy_coloring(CharGraph::edgeless(v), uniform).entropy_bits, 0.0);
  EXPECT_NEAR(min_entropy_coloring(CharGraph::complete(v), uniform).entropy_bits, std::log2(3.0), 1e-12);
}

TEST(Coloring, SizeCapAndMarginalMismatch) {
  const auto big = oracle::labeled("v", kExactColoringCap + 1);
  const auto p = JointPMF::uniform({big});
  EXPECT_THROW(min_entropy_coloring(CharGraph::edgeless(big), p), SizeCapError);
  EXPECT_NO_THROW(min_entropy_coloring(CharGraph::edgeless(big), p, ColoringMode::Greedy));
  EXPECT_THROW(min_entropy_coloring(CharGraph::edgeless(oracle::labeled("v", 3)), p), Error);
}

TEST(Coloring, RandomGraphsExactMatchesOracleAndBeatsGreedy) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 10;
    const auto g = oracle::random_graph(rng, n, std::uniform_real_distribution<double>(0.1, 0.9)(rng));
    const auto p = oracle::random_pmf(rng, {g.vertices()}, 0.1);
    const auto exact = min_entropy_coloring(g, p);
    const auto greedy = min_entropy_coloring(g, p, ColoringMode::Greedy);
    ASSERT_TRUE(is_proper(g, exact.coloring));
    ASSERT_TRUE(is_proper(g, greedy.coloring));
    EXPECT_EQ(exact.coloring.color_of.size(), n);
    EXPECT_LE(exact.entropy_bits, greedy.entropy_bits + 1e-12);
    if (n <= 8) EXPECT_NEAR(exact.entropy_bits, oracle::min_coloring_entropy(g, weights_of(p)), 1e-9) << "trial " << t;
  }
}

TEST(ConditionalChromatic, Ternary) {
  const auto g = characteristic_graph(section5_joint(), section5_function());
  const auto one = conditional_chromatic_entropy(g, section5_joint(), 1);
  EXPECT_NEAR(one.bits_per_symbol, 2.0 / 3.0, 1e-12);
  const auto two = conditional_chromatic_entropy(g, section5_joint(), 2);
  EXPECT_NEAR(two.bits_per_symbol, oracle::conditional_chromatic_entropy(g, section5_joint(), 2), 1e-9);
  EXPECT_LE(two.bits_per_symbol, one.bits_per_symbol + 1e-12);
  EXPECT_TRUE(is_proper(or_product(g, 2), two.coloring));
}

TEST(ConditionalChromatic, CliqueAndEdgeless) {
  std::mt19937_64 rng(3);
  const auto u1 = oracle::labeled("u1", 3), u2 = oracle::labeled("u2", 2);
  const auto p = oracle::random_pmf(rng, {u1, u2});
  EXPECT_NEAR(conditional_chromatic_entropy(CharGraph::complete(u1), p, 1).bits_per_symbol,
              conditional_entropy(p, {"u1"}, {"u2"}), 1e-12);
  EXPECT_NEAR(conditional_chromatic_entropy(CharGraph::edgeless(u1), p, 2).bits_per_symbol, 0.0, 1e-12);
}

TEST(ConditionalChromatic, SubadditiveOnRandomInstances) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 50; ++t) {
    const auto u1 = oracle::labeled("u1", 3), u2 = oracle::labeled("u2", 3);
    const auto g = oracle::random_graph(rng, 3, 0.5);
    const CharGraph gu(u1, g.edges());
    const auto p = oracle::random_pmf(rng, {u1, u2}, 0.3);
    const double one = conditional_chromatic_entropy(gu, p, 1).bits_per_symbol;
    const double two = conditional_chromatic_entropy(gu, p, 2).bits_per_symbol;
    EXPECT_LE(two, one + 1e-9) << "trial " << t;
    if (t < 10) EXPECT_NEAR(two, oracle::conditional_chromatic_entropy(gu, p, 2), 1e-9);
  }
}

TEST(StableSets, TernaryGraph) {
  const auto g = characteristic_graph(section5_joint(), section5_function());
  EXPECT_EQ(maximal_stable_sets(g), (std::vector<std::vector<std::size_t>>{{0, 1}, {1, 2}}));
}

TEST(GraphEntropy, TrivialCases) {
  std::mt19937_64 rng(8);
  const auto u1 = oracle::labeled("u1", 3), u2 = oracle::labeled("u2", 3);
  const auto p = oracle::random_pmf(rng, {u1, u2});
  EXPECT_NEAR(conditional_graph_entropy(CharGraph::complete(u1), p).bits, conditional_entropy(p, {"u1"}, {"u2"}), 1e-6);
  EXPECT_NEAR(conditional_graph_entropy(CharGraph::edgeless(u1), p).bits, 0.0, 1e-6);
}

TEST(GraphEntropy, TernaryAgreesWithGridOracle) {
  const auto g = characteristic_graph(section5_joint(), section5_function());
  const auto r = conditional_graph_entropy(g, section5_joint());
  const double grid = oracle::section5_graph_entropy_grid();
  EXPECT_GT(r.bits, 0.0);
  EXPECT_LE(r.bits, 2.0 / 3.0 + 1e-12);
  EXPECT_NEAR(r.bits, grid, 1e-3);
  EXPECT_LE(r.bits, grid + 1e-9);  // the grid can only overestimate the minimum
  EXPECT_NEAR(r.chromatic_upper_bound, 2.0 / 3.0, 1e-12);
}

TEST(GraphEntropy, BoundedByChromaticOnRandomInstances) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 25; ++t) {
    const auto u1 = oracle::labeled("u1", 3 + t % 2), u2 = oracle::labeled("u2", 3);
    const CharGraph g(u1, oracle::random_graph(rng, u1.size(), 0.5).edges());
    const auto p = oracle::random_pmf(rng, {u1, u2}, 0.2);
    const double hg = conditional_graph_entropy(g, p).bits;
    EXPECT_GE(hg, 0.0);
    EXPECT_LE(hg, conditional_chromatic_entropy(g, p, 1).bits_per_symbol + 1e-12);
  }
}

TEST(Zigzag, Examples) {
  const auto u1 = Alphabet::integers("u1", 1, 2), u2 = Alphabet::integers("u2", 1, 2);
  const auto diag = zigzag_check(JointPMF({u1, u2}, {0.5, 0.0, 0.0, 0.5}));
  ASSERT_FALSE(diag.holds);
  const auto w = *diag.witness;
  EXPECT_EQ(w[0], (std::pair<std::size_t, std::size_t>{0, 0}));
  EXPECT_EQ(w[1], (std::pair<std::size_t, std::size_t>{1, 1}));
  std::mt19937_64 rng(2);
  EXPECT_TRUE(zigzag_check(oracle::random_pmf(rng, {u1, u2})).holds);
}

TEST(Zigzag, TernarySupportFails) {
  // Off-diagonal support: (1,2) and (2,1) are in it, (1,1) and (2,2) are not.
  const auto r = zigzag_check(section5_joint());
  ASSERT_FALSE(r.holds);
  EXPECT_EQ((*r.witness)[0], (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_EQ((*r.witness)[1], (std::pair<std::size_t, std::size_t>{1, 0}));
}
