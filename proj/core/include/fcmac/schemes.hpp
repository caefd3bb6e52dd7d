#pragma once

// Continuous-source pipelines: Gaussian closed forms, sign thresholding,
// grid quantization, and the three quantize/color/transmit schemes run on
// the named experiments.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fcmac/channels.hpp"
#include "fcmac/feasibility.hpp"
#include "fcmac/graph.hpp"
#include "fcmac/prob.hpp"

namespace fcmac {

struct GaussianPairSource {
  double sigma2 = 1.0;
  double rho = 0.0;

  void validate() const;
};

// Uniform scalar quantizer on [lo, hi] with `cells` equal cells per axis.
struct GridQuantizer {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t cells = 3;

  void validate() const;
  double width() const { return (hi - lo) / double(cells); }
  double center(std::size_t i) const { return lo + (double(i) + 0.5) * width(); }
  // floor(cells (x - lo) / (hi - lo)) clamped to [0, cells - 1].
  std::size_t index(double x) const;
};

// Distortion of the centralized encoder: 2 s2 (1 - rho) / (1 + 2P).
double centralized_bound(double power, double rho, double sigma2);
// Amplify-and-forward with conditional-mean decoding: 2 s2 (1 - rho) / (1 + 2P(1 - rho)).
double af_distortion(double power, double rho, double sigma2);

struct MonteCarloEstimate {
  double mean = 0.0;
  double half_width = 0.0;  // 95% normal-approximation half-width
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kMinMonteCarloSamples = 10000;

// Simulates X1 = sqrt(P/s2) U1, X2 = -sqrt(P/s2) U2, Y = X1 + X2 + V and the
// linear conditional-mean estimate of U1 - U2 from Y; reports the MSE.
MonteCarloEstimate monte_carlo_af(double power, double rho, double sigma2, std::size_t samples, std::uint64_t seed);

// Joint of the sign bits W_i = 1{U_i > 0} for a standard bivariate normal
// at correlation rho, axes w1, w2 over {0, 1}.
JointPMF binary_quadrant_pmf(double rho);

// Pearson correlation of a two-axis pmf whose symbols parse as numbers.
double pearson_correlation(const JointPMF& pmf);

struct QuantizedSamples {
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  JointPMF empirical;  // axes w1, w2, symbols "1".."cells"
};

QuantizedSamples quantize_grid(const GridQuantizer& q, std::span<const std::pair<double, double>> samples);

// Per-coordinate-pair quantization budget delta = D / alpha for an
// alpha-Lipschitz function.
double lipschitz_budget(double alpha, double target_d);

// Density on [0,1]^2 that is uniform inside each of blocks x blocks equal
// squares, with `mass[b1 * blocks + b2]` the probability of each square.
struct BlockDensity {
  std::size_t blocks = 1;
  std::vector<double> mass;

  // Zero on the diagonal squares, uniform elsewhere.
  static BlockDensity off_diagonal(std::size_t blocks);
  void validate() const;
};

// Exact probability of each quantizer cell pair under the density; the
// quantizer must cover [0, 1].
JointPMF exact_cell_pmf(const BlockDensity& density, const GridQuantizer& q);

std::vector<std::pair<double, double>> sample_block_density(const BlockDensity& density, std::size_t samples,
                                                            std::uint64_t seed);

// E | |U1 - U2| - estimate | for U1 ~ U[a_lo, a_hi], U2 ~ U[b_lo, b_hi]
// independent. Exact: the integrand is piecewise quadratic between the
// breakpoints of the difference density and of the absolute values.
double uniform_rect_abs_diff_error(double a_lo, double a_hi, double b_lo, double b_hi, double estimate);

// E | |U1 - U2| - estimate(cell1, cell2) | under the block density, exact.
double exact_abs_diff_distortion(const BlockDensity& density, const GridQuantizer& q,
                                 const std::function<double(std::size_t, std::size_t)>& estimate);

// ---------------------------------------------------------------------------
// Systems built from labelings of the two sources.

// Maps every source symbol to a label index (a coloring, a quantizer cell,
// or the identity).
struct Labeling {
  std::vector<std::size_t> label_of;
  std::size_t labels = 0;

  static Labeling identity(std::size_t n);
  static Labeling from_coloring(const Coloring& c);
};

// How the labels W1, W2 reach the binary MAC inputs.
struct ChannelInputs {
  // X1 = W1, X2 = 1 - W2 (labels must be binary). Otherwise X_i is drawn
  // from p_i independently of W_i, the single-letter picture of independent
  // channel codebooks.
  bool joint_complement = false;
  std::vector<double> p1;
  std::vector<double> p2;

  static ChannelInputs complement() { return {true, {}, {}}; }
  static ChannelInputs independent(std::vector<double> p1, std::vector<double> p2) {
    return {false, std::move(p1), std::move(p2)};
  }
};

// Decoder side information Z = side(u1, u2) taking values in `alphabet`.
struct SideInformation {
  Alphabet alphabet;
  std::function<std::size_t(std::size_t, std::size_t)> side;
};

// Full system for a pair joint over (u1, u2): deterministic W_i = label(U_i),
// the chosen channel inputs, the decoder from optimal_decoder(), trivial
// encoder side information.
SystemSpec build_labeled_system(const JointPMF& pair, const FunctionTable& f, const Labeling& l1, const Labeling& l2,
                                const ChannelInputs& inputs, const DiscreteMAC& channel,
                                const DistortionTable& distortion, double target_d,
                                const std::optional<SideInformation>& side = std::nullopt);

// ---------------------------------------------------------------------------
// Named experiments

enum class SchemeId {
  Uncoded,
  SlepianWolfSources,
  IndependentColors,
  Scheme1,
  Scheme2,
  Scheme3,
  SideInfoColors,
  AmplifyForward,
  Centralized,
};

const char* to_string(SchemeId id);

struct SchemeReport {
  SchemeId id = SchemeId::Scheme1;
  std::string label;
  std::optional<double> source_entropy_bits;
  std::optional<double> color_entropy_bits;
  std::optional<double> rate_bits;
  std::optional<double> channel_sum_rate_bits;
  std::optional<Verdict> verdict;
  std::optional<double> margin_bits;
  std::optional<FeasibilityReport> theorem;
  std::optional<double> distortion_analytic;
  std::optional<MonteCarloEstimate> distortion_mc;
  std::optional<double> lipschitz_alpha;
  std::string note;
};

// Unset fields take the experiment's defaults.
struct SchemeConfig {
  std::string experiment;
  std::optional<double> rho;
  std::optional<double> power;
  std::optional<double> sigma2;
  std::optional<double> input_rho;
  std::optional<double> target_d;
  std::optional<double> delta;
  std::optional<double> alpha;
  std::optional<std::size_t> cells;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 1;
};

const std::vector<std::string>& experiment_ids();

// Runs section5 | gauss-diff | gauss-binary | uniform-grid. Infeasible
// schemes are reported, not thrown; unknown ids throw Error.
std::vector<SchemeReport> run_scheme(const SchemeConfig& config);

struct CurvePoint {
  double power = 0.0;
  double centralized = 0.0;
  double af = 0.0;
};

// Linearly spaced power sweep of the two closed-form distortions.
std::vector<CurvePoint> gauss_diff_curves(double rho, double sigma2, double power_min, double power_max,
                                          std::size_t steps);

// The worked discrete instance: U1, U2 on {1,2,3}, p = 1/6 off the
// diagonal, f = 1{u1 > u2}.
JointPMF section5_joint();
FunctionTable section5_function();

// Peer-relative view for encoder 2: joint over (u2, u1) and f(u2, u1).
JointPMF transpose(const JointPMF& pair);
FunctionTable transpose(const FunctionTable& f);

}  // namespace fcmac
