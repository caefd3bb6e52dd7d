#include <gtest/gtest.h>

#include <cmath>

#include "fcmac/error.hpp"
#include "fcmac/schemes.hpp"
#include "oracles.hpp"

using namespace fcmac;

namespace {

const SchemeReport& find(const std::vector<SchemeReport>& rs, SchemeId id) {
  for (const auto& r : rs) {
    if (r.id == id) return r;
  }
  throw std::runtime_error("scheme missing");
}

SchemeConfig config(const std::string& id) {
  SchemeConfig c;
  c.experiment = id;
  return c;
}

}  // namespace

TEST(ClosedForms, Examples) {
  EXPECT_NEAR(centralized_bound(5.0, 0.5, 1.0), 1.0 / 11.0, 1e-15);
  EXPECT_NEAR(af_distortion(5.0, 0.5, 1.0), 1.0 / 6.0, 1e-15);
  EXPECT_DOUBLE_EQ(af_distortion(5.0, 1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(centralized_bound(0.0, 0.3, 2.0), af_distortion(0.0, 0.3, 2.0));
  EXPECT_DOUBLE_EQ(centralized_bound(3.0, 0.0, 1.0), af_distortion(3.0, 0.0, 1.0));
  EXPECT_THROW(af_distortion(-1.0, 0.5, 1.0), Error);
  EXPECT_THROW(centralized_bound(1.0, 1.5, 1.0), Error);
}

TEST(ClosedForms, AmplifyForwardMatchesCovarianceAndDominatesCentralized) {
  for (double rho : {-0.9, -0.3, 0.0, 0.4, 0.75, 0.99}) {
    for (double p : {0.1, 1.0, 5.0, 20.0}) {
      for (double s2 : {0.5, 1.0, 3.0}) {
        EXPECT_NEAR(af_distortion(p, rho, s2), oracle::af_mse_from_covariance(p, rho, s2), 1e-12);
        // the ordering needs nonnegative correlation
        if (rho >= 0.0) EXPECT_GE(af_distortion(p, rho, s2), centralized_bound(p, rho, s2) - 1e-15);
      }
    }
  }
}

TEST(ClosedForms, CurvesAreLinearlySpaced) {
  const auto pts = gauss_diff_curves(0.5, 1.0, 0.5, 20.0, 40);
  ASSERT_EQ(pts.size(), 40u);
  EXPECT_DOUBLE_EQ(pts.front().power, 0.5);
  EXPECT_DOUBLE_EQ(pts.back().power, 20.0);
  for (const auto& p : pts) EXPECT_DOUBLE_EQ(p.af, af_distortion(p.power, 0.5, 1.0));
  EXPECT_THROW(gauss_diff_curves(0.5, 1.0, 1.0, 2.0, 1), Error);
}

TEST(MonteCarloAf, MatchesClosedFormAndIsReproducible) {
  const auto a = monte_carlo_af(5.0, 0.5, 1.0, 200000, 7);
  EXPECT_NEAR(a.mean, 1.0 / 6.0, 4 * a.half_width);
  const auto b = monte_carlo_af(5.0, 0.5, 1.0, 200000, 7);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_NE(a.mean, monte_carlo_af(5.0, 0.5, 1.0, 200000, 8).mean);
  EXPECT_NEAR(monte_carlo_af(5.0, 1.0, 1.0, 20000, 1).mean, 0.0, 1e-12);
  EXPECT_THROW(monte_carlo_af(5.0, 0.5, 1.0, 10, 1), Error);
}

TEST(QuadrantPmf, MatchesQuadrature) {
  for (double rho : {-0.8, -0.2, 0.0, 0.3, 0.75, 0.95}) {
    const auto p = binary_quadrant_pmf(rho);
    EXPECT_NEAR(p.at({1, 1}), oracle::positive_quadrant(rho), 1e-10);
    EXPECT_NEAR(p.at({0, 0}), p.at({1, 1}), 1e-15);
    EXPECT_NEAR(p.at({0, 1}), 0.5 - p.at({1, 1}), 1e-15);
  }
  EXPECT_NEAR(binary_quadrant_pmf(0.0).at({1, 1}), 0.25, 1e-15);
  const auto p = binary_quadrant_pmf(0.75);
  EXPECT_NEAR(entropy(p, {"w1", "w2"}), 1.778, 5e-4);
  EXPECT_NEAR(pearson_correlation(p), 0.540, 5e-3);
}

TEST(Pearson, IndependentIsZeroAndCopyIsOne) {
  const auto a = Alphabet::integers("a", 0, 2), b = Alphabet::integers("b", 0, 2);
  EXPECT_NEAR(pearson_correlation(JointPMF::uniform({a, b})), 0.0, 1e-15);
  const auto diag = JointPMF::from_weights({a, b}, [](auto i) { return i[0] == i[1] ? 1.0 : 0.0; });
  EXPECT_NEAR(pearson_correlation(diag), 1.0, 1e-12);
}

TEST(Quantizer, CentersAndClamping) {
  const GridQuantizer q{0.0, 1.0, 3};
  EXPECT_DOUBLE_EQ(q.center(0), 1.0 / 6.0);
  EXPECT_EQ(q.index(-0.5), 0u);
  EXPECT_EQ(q.index(1.0), 2u);
  EXPECT_EQ(q.index(0.5), 1u);
  EXPECT_THROW((GridQuantizer{1.0, 0.0, 3}.validate()), Error);
  EXPECT_THROW((GridQuantizer{0.0, 1.0, 0}.validate()), Error);
}

TEST(Quantizer, EmpiricalPmfConvergesToExact) {
  const auto density = BlockDensity::off_diagonal(3);
  const GridQuantizer q{0.0, 1.0, 3};
  const auto exact = exact_cell_pmf(density, q);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) EXPECT_NEAR(exact.at({a, b}), a == b ? 0.0 : 1.0 / 6.0, 1e-15);
  }
  const auto samples = sample_block_density(density, 1000000, 3);
  const auto qs = quantize_grid(q, samples);
  double tv = 0.0;
  for (std::size_t k = 0; k < exact.size(); ++k) tv += std::abs(exact.mass()[k] - qs.empirical.mass()[k]);
  EXPECT_LT(tv / 2, 0.01);
  EXPECT_EQ(qs.cells.size(), samples.size());
}

TEST(Quantizer, FinerGridSplitsBlocks) {
  const auto exact = exact_cell_pmf(BlockDensity::off_diagonal(3), GridQuantizer{0.0, 1.0, 6});
  EXPECT_NEAR(exact.at({0, 0}), 0.0, 1e-15);
  EXPECT_NEAR(exact.at({0, 2}), 1.0 / 24.0, 1e-15);
  const auto coarse = exact_cell_pmf(BlockDensity::off_diagonal(3), GridQuantizer{0.0, 1.0, 2});
  EXPECT_NEAR(coarse.at({0, 1}), 1.0 / 3.0, 1e-12);
}

TEST(AbsDiffDistortion, UniformRectanglesMatchQuadrature) {
  const auto qd = [](double a0, double a1, double b0, double b1, double e) {
    const int m = 1200;
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const double x = a0 + (a1 - a0) * (i + 0.5) / m, y = b0 + (b1 - b0) * (j + 0.5) / m;
        s += std::abs(std::abs(x - y) - e);
      }
    }
    return s / (double(m) * m);
  };
  for (auto [a0, a1, b0, b1, e] : std::vector<std::array<double, 5>>{
           {0, 1, 0, 1, 0.3}, {0, 1.0 / 3, 1.0 / 3, 2.0 / 3, 1.0 / 3}, {0.2, 0.5, 0.1, 0.9, 0.0}, {0, 1, 0, 0.5, 2.0}}) {
    EXPECT_NEAR(uniform_rect_abs_diff_error(a0, a1, b0, b1, e), qd(a0, a1, b0, b1, e), 2e-6);
  }
  EXPECT_NEAR(uniform_rect_abs_diff_error(0, 1, 0, 1, 0.0), 1.0 / 3.0, 1e-12);
}

TEST(AbsDiffDistortion, GridDecoderGivesOneNinth) {
  const GridQuantizer q{0.0, 1.0, 3};
  const auto est = [&](std::size_t i, std::size_t j) { return std::abs(q.center(i) - q.center(j)); };
  const double exact = exact_abs_diff_distortion(BlockDensity::off_diagonal(3), q, est);
  EXPECT_NEAR(exact, 1.0 / 9.0, 1e-12);
  EXPECT_NEAR(exact, oracle::abs_diff_distortion_quadrature(3, est, 900), 1e-5);
  const auto zero = [](std::size_t, std::size_t) { return 0.0; };
  EXPECT_NEAR(exact_abs_diff_distortion(BlockDensity::off_diagonal(3), q, zero),
              oracle::abs_diff_distortion_quadrature(3, zero, 900), 1e-5);
}

TEST(Lipschitz, Budget) {
  EXPECT_DOUBLE_EQ(lipschitz_budget(2.0, 1.0 / 3.0), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(lipschitz_budget(1.0, 0.25), 0.25);
  EXPECT_THROW(lipschitz_budget(0.0, 0.1), Error);
  EXPECT_THROW(lipschitz_budget(1.0, -0.1), Error);
}

TEST(Labeling, FromColoringAndIdentity) {
  const auto l = Labeling::from_coloring(Coloring{{0, 0, 1}});
  EXPECT_EQ(l.labels, 2u);
  EXPECT_EQ(Labeling::identity(4).label_of[3], 3u);
}

TEST(Transpose, SwapsAxes) {
  const auto j = section5_joint();
  const auto t = transpose(j);
  EXPECT_EQ(t.axes()[0].name(), "u2");
  const auto f = transpose(section5_function());
  EXPECT_EQ(f.at({0, 2}), section5_function().at({2, 0}));
  EXPECT_DOUBLE_EQ(t.at({0, 1}), j.at({1, 0}));
}

TEST(RunScheme, TernaryLadder) {
  const auto rs = run_scheme(config("section5"));
  EXPECT_NEAR(*find(rs, SchemeId::Uncoded).rate_bits, std::log2(9.0), 1e-12);
  EXPECT_NEAR(*find(rs, SchemeId::SlepianWolfSources).rate_bits, std::log2(6.0), 1e-12);
  EXPECT_EQ(*find(rs, SchemeId::SlepianWolfSources).verdict, Verdict::Violated);
  EXPECT_NEAR(*find(rs, SchemeId::IndependentColors).rate_bits, 2 * binary_entropy(1.0 / 3), 1e-12);
  EXPECT_EQ(*find(rs, SchemeId::Scheme2).verdict, Verdict::Violated);
  EXPECT_EQ(*find(rs, SchemeId::Scheme3).verdict, Verdict::Boundary);
  const auto& side = find(rs, SchemeId::SideInfoColors);
  EXPECT_NEAR(*side.color_entropy_bits, 4.0 / 3.0, 1e-9);
  EXPECT_EQ(*side.verdict, Verdict::Strict);
}

TEST(RunScheme, GaussBinaryVerdicts) {
  const auto rs = run_scheme(config("gauss-binary"));
  EXPECT_EQ(*find(rs, SchemeId::Scheme2).verdict, Verdict::Violated);
  EXPECT_EQ(*find(rs, SchemeId::Scheme3).verdict, Verdict::Strict);
}

TEST(RunScheme, UniformGridVerdictsAndDistortion) {
  auto c = config("uniform-grid");
  c.samples = 100000;
  const auto rs = run_scheme(c);
  EXPECT_EQ(*find(rs, SchemeId::Scheme1).verdict, Verdict::Violated);
  EXPECT_NEAR(*find(rs, SchemeId::Scheme1).rate_bits, std::log2(6.0), 1e-9);
  EXPECT_EQ(*find(rs, SchemeId::Scheme2).verdict, Verdict::Violated);
  const auto& s3 = find(rs, SchemeId::Scheme3);
  EXPECT_EQ(*s3.verdict, Verdict::Boundary);
  EXPECT_NEAR(*s3.distortion_analytic, 1.0 / 9.0, 1e-12);
  ASSERT_TRUE(s3.distortion_mc.has_value());
  EXPECT_NEAR(s3.distortion_mc->mean, 1.0 / 9.0, 0.005);
}

TEST(RunScheme, GaussDiffAndErrors) {
  auto c = config("gauss-diff");
  c.samples = 20000;
  const auto rs = run_scheme(c);
  EXPECT_NEAR(*find(rs, SchemeId::Centralized).distortion_analytic, 1.0 / 11.0, 1e-15);
  EXPECT_NEAR(*find(rs, SchemeId::AmplifyForward).distortion_analytic, 1.0 / 6.0, 1e-15);
  EXPECT_THROW(run_scheme(config("nope")), Error);
  auto bad = config("gauss-diff");
  bad.rho = 2.0;
  EXPECT_THROW(run_scheme(bad), Error);
}
