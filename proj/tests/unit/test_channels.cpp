#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fcmac/channels.hpp"
#include "fcmac/error.hpp"
#include "oracles.hpp"

using namespace fcmac;

namespace {

Alphabet bits(const std::string& name) { return Alphabet::integers(name, 0, 1); }

}  // namespace

TEST(AdderMac, LawEntries) {
  const auto mac = adder_mac();
  const auto& law = mac.law();
  EXPECT_DOUBLE_EQ(law.prob(1, 1), 1.0);  // (0,1) -> 1
  EXPECT_DOUBLE_EQ(law.prob(3, 2), 1.0);  // (1,1) -> 2
  for (std::size_t r = 0; r < law.rows(); ++r) {
    const auto row = law.row(r);
    EXPECT_EQ(std::count(row.begin(), row.end(), 1.0), 1);
  }
}

TEST(DiscreteMAC, RejectsWrongShapes) {
  EXPECT_THROW(DiscreteMAC(Kernel({bits("x1")}, {bits("y")}, {1, 0, 0, 1})), Error);
  EXPECT_THROW(DiscreteMAC(Kernel({bits("x1"), bits("x2")}, {bits("y")}, {1, 0, 0, 1, 1, 0, 0.5, 0.6})),
               InvalidDistribution);
}

TEST(MacMutualInfo, Examples) {
  const auto mac = adder_mac();
  EXPECT_NEAR(mac_mutual_info(mac, JointPMF::uniform({bits("x1"), bits("x2")})), 1.5, 1e-12);
  const JointPMF corr({bits("x1"), bits("x2")}, {1.0 / 3, 1.0 / 3, 0.0, 1.0 / 3});
  EXPECT_NEAR(mac_mutual_info(mac, corr), std::log2(3.0), 1e-12);
  const Index at{1, 0};
  EXPECT_DOUBLE_EQ(mac_mutual_info(mac, JointPMF::point_mass({bits("x1"), bits("x2")}, at)), 0.0);
  EXPECT_THROW(mac_mutual_info(mac, JointPMF::uniform({Alphabet::integers("x1", 0, 2), bits("x2")})),
               AlphabetMismatch);
}

TEST(MacMutualInfo, BoundsOnRandomChannels) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    const auto y = oracle::labeled("y", 2 + t % 3);
    const DiscreteMAC mac(oracle::random_kernel(rng, {bits("x1"), bits("x2")}, {y}, 0.2));
    const auto inputs = oracle::random_pmf(rng, {bits("x1"), bits("x2")}, 0.2);
    const double mi = mac_mutual_info(mac, inputs);
    EXPECT_GE(mi, 0.0);
    EXPECT_LE(mi, std::min(entropy(inputs, {"x1", "x2"}), std::log2(double(y.size()))) + 1e-12);
  }
}

TEST(SumCapacity, Adder) {
  const auto cap = mac_sum_capacity_independent(adder_mac());
  EXPECT_NEAR(cap.bits, 1.5, 1e-4);
  EXPECT_NEAR(cap.p1[1], 0.5, 1e-3);
  EXPECT_NEAR(cap.p2[1], 0.5, 1e-3);
  // independent inputs cannot beat the correlated color mapping
  EXPECT_LT(cap.bits, std::log2(3.0));
}

TEST(SumCapacity, UselessAndCleanChannels) {
  const auto y = Alphabet::integers("y", 0, 1);
  EXPECT_NEAR(mac_sum_capacity_independent(DiscreteMAC(Kernel::constant({bits("x1"), bits("x2")}, {y}, {0.3, 0.7}))).bits,
              0.0, 1e-12);
  const DiscreteMAC copy_x1(
      Kernel::deterministic({bits("x1"), bits("x2")}, {y}, [](std::span<const std::size_t> i) { return i[0]; }));
  EXPECT_NEAR(mac_sum_capacity_independent(copy_x1).bits, 1.0, 1e-4);
}

TEST(SumCapacity, MatchesFineGridOnRandomBinaryChannels) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 15; ++t) {
    const DiscreteMAC mac(oracle::random_kernel(rng, {bits("x1"), bits("x2")}, {oracle::labeled("y", 3)}, 0.2));
    const double grid = oracle::binary_mac_capacity_grid(mac.law(), 0.002);
    const double cap = mac_sum_capacity_independent(mac).bits;
    EXPECT_GE(cap, grid - 1e-9) << "trial " << t;
    EXPECT_NEAR(cap, grid, 1e-4) << "trial " << t;
  }
}

TEST(SumCapacity, LargerAlphabetsAndCap) {
  const auto t3 = Alphabet::integers("x1", 0, 2), s3 = Alphabet::integers("x2", 0, 2);
  const DiscreteMAC add3(Kernel::deterministic({t3, s3}, {Alphabet::integers("y", 0, 4)},
                                               [](std::span<const std::size_t> i) { return i[0] + i[1]; }));
  const auto cap = mac_sum_capacity_independent(add3);
  const double at_uniform = mac_mutual_info(add3, JointPMF::uniform({t3, s3}));
  EXPECT_GE(cap.bits, at_uniform - 1e-9);
  EXPECT_LE(cap.bits, std::log2(5.0) + 1e-12);

  const auto wide = oracle::labeled("x1", kCapacityAlphabetCap + 1);
  EXPECT_THROW(mac_sum_capacity_independent(DiscreteMAC(Kernel::constant({wide, bits("x2")}, {bits("y")}, {0.5, 0.5}))),
               SizeCapError);
}

TEST(Gmac, PrintedRates) {
  EXPECT_NEAR(gmac_sum_rate(GaussianMAC{5.0, 1.0}, 0.0), 1.7297, 1e-4);
  EXPECT_NEAR(gmac_sum_rate(GaussianMAC{5.0, 1.0}, 0.3), 1.9037, 1e-4);
  EXPECT_DOUBLE_EQ(gmac_sum_rate(GaussianMAC{0.0, 1.0}, 0.5), 0.0);
  EXPECT_THROW(gmac_sum_rate(GaussianMAC{5.0, 1.0}, 1.2), Error);
  EXPECT_THROW(gmac_sum_rate(GaussianMAC{-1.0, 1.0}, 0.0), Error);
  EXPECT_THROW(gmac_sum_rate(GaussianMAC{1.0, 0.0}, 0.0), Error);
}

TEST(Gmac, MonotoneInCorrelationAndPower) {
  double prev = -1.0;
  for (int k = -10; k <= 10; ++k) {
    const double r = gmac_sum_rate(GaussianMAC{3.0, 1.0}, k / 10.0);
    EXPECT_GE(r, prev);
    prev = r;
  }
  prev = -1.0;
  for (int p = 0; p <= 20; ++p) {
    const double r = gmac_sum_rate(GaussianMAC{double(p), 1.0}, 0.3);
    EXPECT_GE(r, prev);
    prev = r;
  }
}
