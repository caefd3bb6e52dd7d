#include "fcmac/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "fcmac/error.hpp"
#include "fcmac/random.hpp"

namespace fcmac {

namespace {

std::string format_value(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Alphabet index_alphabet(std::string name, std::size_t n, std::size_t first = 0) {
  std::vector<std::string> symbols;
  for (std::size_t i = 0; i < n; ++i) symbols.push_back(std::to_string(first + i));
  return Alphabet(std::move(name), std::move(symbols));
}

SchemeReport make_report(SchemeId id, std::string label) {
  SchemeReport r;
  r.id = id;
  r.label = std::move(label);
  return r;
}

void check_rho(double rho) {
  if (!(std::abs(rho) <= 1.0)) throw Error("correlation must lie in [-1, 1]");
}

void check_power_sigma(double power, double sigma2) {
  if (!(power >= 0.0)) throw Error("power must be nonnegative");
  if (!(sigma2 > 0.0)) throw Error("sigma2 must be positive");
}

// Worst verdict and smallest margin over the three inequalities.
void summarize(SchemeReport& r, const FeasibilityReport& t) {
  Verdict worst = Verdict::Strict;
  double margin = t.inequalities[0].margin;
  for (const auto& ineq : t.inequalities) {
    worst = std::max(worst, ineq.verdict);  // enum order is best to worst
    margin = std::min(margin, ineq.margin);
  }
  r.verdict = worst;
  r.margin_bits = margin;
  r.rate_bits = t.inequalities[2].lhs;
  r.channel_sum_rate_bits = t.inequalities[2].rhs;
  r.theorem = t;
}

void rate_arithmetic(SchemeReport& r, double rate, double capacity) {
  r.rate_bits = rate;
  r.channel_sum_rate_bits = capacity;
  r.margin_bits = capacity - rate;
  r.verdict = classify_margin(capacity - rate);
}

double labeled_joint_entropy(const JointPMF& pair, const Labeling& l1, const Labeling& l2) {
  std::vector<double> mass(l1.labels * l2.labels, 0.0);
  const std::size_t n2 = pair.axes()[1].size();
  for (std::size_t a = 0; a < pair.axes()[0].size(); ++a) {
    for (std::size_t b = 0; b < n2; ++b) mass[l1.label_of[a] * l2.labels + l2.label_of[b]] += pair.mass()[a * n2 + b];
  }
  return entropy_bits(mass);
}

struct EncoderColorings {
  CharGraph g1;
  CharGraph g2;
  ColoringResult c1;
  ColoringResult c2;
};

EncoderColorings color_both(const JointPMF& pair, const FunctionTable& f, const Fidelity& fidelity) {
  const JointPMF swapped = transpose(pair);
  CharGraph g1 = characteristic_graph(pair, f, fidelity);
  CharGraph g2 = characteristic_graph(swapped, transpose(f), fidelity);
  auto c1 = min_entropy_coloring(g1, marginalize(pair, {pair.axes()[0].name()}));
  auto c2 = min_entropy_coloring(g2, marginalize(pair, {pair.axes()[1].name()}));
  return {std::move(g1), std::move(g2), std::move(c1), std::move(c2)};
}

std::vector<SchemeReport> run_section5(const SchemeConfig& cfg) {
  const JointPMF pair = section5_joint();
  const FunctionTable f = section5_function();
  const DiscreteMAC mac = adder_mac();
  const SumCapacity cap = mac_sum_capacity_independent(mac);
  const auto indep = ChannelInputs::independent(cap.p1, cap.p2);
  const DistortionTable hamming = DistortionTable::hamming({"0", "1"});
  const double target = cfg.target_d.value_or(0.0);

  const auto colors = color_both(pair, f, Fidelity::exact_values());
  const Labeling l1 = Labeling::from_coloring(colors.c1.coloring);
  const Labeling l2 = Labeling::from_coloring(colors.c2.coloring);
  const Labeling id = Labeling::identity(3);

  const double h_sources = entropy(pair, {"u1", "u2"});
  const double h_colors = labeled_joint_entropy(pair, l1, l2);
  std::vector<SchemeReport> out;

  {
    SchemeReport r = make_report(SchemeId::Uncoded, "sources sent separately, no compression");
    r.source_entropy_bits = h_sources;
    rate_arithmetic(r, entropy(pair, {"u1"}) + entropy(pair, {"u2"}), cap.bits);
    r.note = "sum of log2|U_i| against the independent-input sum capacity";
    out.push_back(std::move(r));
  }
  {
    SchemeReport r = make_report(SchemeId::SlepianWolfSources, "Slepian-Wolf on the sources, independent codewords");
    r.source_entropy_bits = h_sources;
    summarize(r, check_feasibility(build_labeled_system(pair, f, id, id, indep, mac, hamming, target)));
    out.push_back(std::move(r));
  }
  {
    SchemeReport r = make_report(SchemeId::IndependentColors, "colors compressed separately");
    r.source_entropy_bits = h_sources;
    r.color_entropy_bits = h_colors;
    rate_arithmetic(r, colors.c1.entropy_bits + colors.c2.entropy_bits, cap.bits);
    out.push_back(std::move(r));
  }
  {
    SchemeReport r = make_report(SchemeId::Scheme2, "Slepian-Wolf on the colors, independent codewords");
    r.source_entropy_bits = h_sources;
    r.color_entropy_bits = h_colors;
    summarize(r, check_feasibility(build_labeled_system(pair, f, l1, l2, indep, mac, hamming, target)));
    out.push_back(std::move(r));
  }
  {
    SchemeReport r = make_report(SchemeId::Scheme3, "colors on a joint code X1 = C1, X2 = 1 - C2");
    r.source_entropy_bits = h_sources;
    r.color_entropy_bits = h_colors;
    const auto t = check_feasibility(build_labeled_system(pair, f, l1, l2, ChannelInputs::complement(), mac, hamming, target));
    summarize(r, t);
    r.distortion_analytic = t.achieved_distortion;
    if (!t.distortion_ok) {
      r.note = "the color pair does not determine f on the support; best decoder Hamming distortion " +
               format_value(t.achieved_distortion);
    }
    out.push_back(std::move(r));
  }
  {
    SchemeReport r = make_report(SchemeId::SideInfoColors, "Slepian-Wolf on the colors with Z = |U1 - U2| at the decoder");
    r.source_entropy_bits = h_sources;
    const SideInformation z{index_alphabet("z", 2, 1), [](std::size_t a, std::size_t b) {
                              // the diagonal carries no mass; park it on the first symbol
                              return a == b ? 0 : (a > b ? a - b : b - a) - 1;
                            }};
    const auto t = check_feasibility(build_labeled_system(pair, f, l1, l2, indep, mac, hamming, target, z));
    r.color_entropy_bits = t.inequalities[2].lhs;
    summarize(r, t);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SchemeReport> run_gauss_diff(const SchemeConfig& cfg) {
  const double rho = cfg.rho.value_or(0.5);
  const double power = cfg.power.value_or(5.0);
  const double sigma2 = cfg.sigma2.value_or(1.0);
  const std::size_t samples = cfg.samples.value_or(1000000);

  std::vector<SchemeReport> out;
  {
    SchemeReport r = make_report(SchemeId::Centralized, "centralized encoder lower bound");
    r.distortion_analytic = centralized_bound(power, rho, sigma2);
    out.push_back(std::move(r));
  }
  {
    SchemeReport r = make_report(SchemeId::AmplifyForward, "amplify and forward, conditional-mean decoder");
    r.distortion_analytic = af_distortion(power, rho, sigma2);
    r.distortion_mc = monte_carlo_af(power, rho, sigma2, samples, cfg.seed);
    r.note = "graph is complete for the difference; schemes 1-3 reduce to quantize-and-transmit";
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SchemeReport> run_gauss_binary(const SchemeConfig& cfg) {
  const double rho = cfg.rho.value_or(0.75);
  const double power = cfg.power.value_or(5.0);
  const double input_rho = cfg.input_rho.value_or(0.3);
  const GaussianMAC gmac{power, 1.0};

  const JointPMF w = binary_quadrant_pmf(rho);
  // f = 1{min(U1, U2) > 0} = W1 AND W2.
  const FunctionTable f = FunctionTable::from(w.axes(), [](std::span<const std::size_t> i) {
    return std::string(i[0] == 1 && i[1] == 1 ? "1" : "0");
  });
  const auto colors = color_both(w, f, Fidelity::exact_values());
  const Labeling l1 = Labeling::from_coloring(colors.c1.coloring);
  const Labeling l2 = Labeling::from_coloring(colors.c2.coloring);
  const double h_w = entropy(w, {"w1", "w2"});
  const double h_c = labeled_joint_entropy(w, l1, l2);
  const bool complete = colors.g1 == CharGraph::complete(colors.g1.vertices());

  std::vector<SchemeReport> out;
  {
    SchemeReport r = make_report(SchemeId::Scheme2, "Slepian-Wolf on the sign bits, independent Gaussian codewords");
    r.source_entropy_bits = h_w;
    r.color_entropy_bits = h_c;
    rate_arithmetic(r, h_c, gmac_sum_rate(gmac, 0.0));
    out.push_back(std::move(r));
  }
  for (SchemeId id : {SchemeId::Scheme1, SchemeId::Scheme3}) {
    SchemeReport r = make_report(id, id == SchemeId::Scheme1 ? "sign bits on correlated Gaussian codewords"
                                                          : "colors on correlated Gaussian codewords");
    r.source_entropy_bits = h_w;
    r.color_entropy_bits = h_c;
    rate_arithmetic(r, id == SchemeId::Scheme1 ? h_w : h_c, gmac_sum_rate(gmac, input_rho));
    r.note = "input correlation " + format_value(input_rho) + (complete ? "; graph complete, schemes 1 and 3 coincide" : "");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SchemeReport> run_uniform_grid(const SchemeConfig& cfg) {
  const std::size_t cells = cfg.cells.value_or(3);
  const double delta = cfg.delta.value_or(1.0 / 6.0);
  const double target = cfg.target_d.value_or(1.0 / 6.0);
  const double alpha = cfg.alpha.value_or(2.0);
  const std::size_t samples = cfg.samples.value_or(1000000);

  const GridQuantizer q{0.0, 1.0, cells};
  const BlockDensity density = BlockDensity::off_diagonal(3);
  const JointPMF w = exact_cell_pmf(density, q);
  auto quantized_f = [&](std::size_t a, std::size_t b) { return std::abs(q.center(a) - q.center(b)); };
  const FunctionTable f = FunctionTable::from(w.axes(), [&](std::span<const std::size_t> i) {
    return format_value(quantized_f(i[0], i[1]));
  });
  const DistortionTable dist = DistortionTable::absolute(f.range());
  const DiscreteMAC mac = adder_mac();
  const SumCapacity cap = mac_sum_capacity_independent(mac);
  const auto indep = ChannelInputs::independent(cap.p1, cap.p2);

  const auto colors = color_both(w, f, Fidelity::threshold(delta));
  const Labeling l1 = Labeling::from_coloring(colors.c1.coloring);
  const Labeling l2 = Labeling::from_coloring(colors.c2.coloring);
  const Labeling id = Labeling::identity(cells);
  const double h_w = entropy(w, {"w1", "w2"});
  const double h_c = labeled_joint_entropy(w, l1, l2);

  auto estimator_of = [&](const SystemSpec& spec, const Labeling& a, const Labeling& b) {
    return [&spec, &a, &b](std::size_t i, std::size_t j) {
      return std::stod(spec.decoder.at({a.label_of[i], b.label_of[j], 0}));
    };
  };

  std::vector<SchemeReport> out;
  auto finish = [&](SchemeReport& r, const SystemSpec& spec, const Labeling& a, const Labeling& b) {
    summarize(r, check_feasibility(spec));
    r.source_entropy_bits = h_w;
    r.distortion_analytic = exact_abs_diff_distortion(density, q, estimator_of(spec, a, b));
    r.lipschitz_alpha = alpha;
    r.note = "distortion budget " + format_value(target) + ", Lipschitz per-pair budget " +
             format_value(lipschitz_budget(alpha, target));
  };

  {
    SchemeReport r = make_report(SchemeId::Scheme1, "quantized pair on independent codewords at capacity");
    const SystemSpec spec = build_labeled_system(w, f, id, id, indep, mac, dist, target);
    finish(r, spec, id, id);
    out.push_back(std::move(r));
  }
  {
    SchemeReport r = make_report(SchemeId::Scheme2, "Slepian-Wolf on the colors, independent codewords");
    const SystemSpec spec = build_labeled_system(w, f, l1, l2, indep, mac, dist, target);
    finish(r, spec, l1, l2);
    r.color_entropy_bits = h_c;
    out.push_back(std::move(r));
  }
  {
    SchemeReport r = make_report(SchemeId::Scheme3, "colors on a joint code X1 = C1, X2 = 1 - C2");
    const SystemSpec spec = build_labeled_system(w, f, l1, l2, ChannelInputs::complement(), mac, dist, target);
    finish(r, spec, l1, l2);
    r.color_entropy_bits = h_c;

    // Monte Carlo through the same quantizer, colors and decoder.
    const auto points = sample_block_density(density, samples, cfg.seed);
    const auto estimate = estimator_of(spec, l1, l2);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
      const auto [u1, u2] = points[k];
      const double err = std::abs(std::abs(u1 - u2) - estimate(q.index(u1), q.index(u2)));
      const double d = err - mean;
      mean += d / double(k + 1);
      m2 += d * (err - mean);
    }
    const double sd = points.size() > 1 ? std::sqrt(m2 / double(points.size() - 1)) : 0.0;
    r.distortion_mc = MonteCarloEstimate{mean, 1.96 * sd / std::sqrt(double(points.size())), points.size(), cfg.seed};
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

void GaussianPairSource::validate() const {
  if (!(sigma2 > 0.0)) throw Error("GaussianPairSource: sigma2 must be positive");
  check_rho(rho);
}

void GridQuantizer::validate() const {
  if (!(hi > lo)) throw Error("GridQuantizer: hi must exceed lo");
  if (cells == 0) throw Error("GridQuantizer: needs at least one cell");
}

std::size_t GridQuantizer::index(double x) const {
  const double t = std::floor(double(cells) * (x - lo) / (hi - lo));
  if (!(t > 0.0)) return 0;
  return std::min(cells - 1, std::size_t(t));
}

double centralized_bound(double power, double rho, double sigma2) {
  check_power_sigma(power, sigma2);
  check_rho(rho);
  return 2.0 * sigma2 * (1.0 - rho) / (1.0 + 2.0 * power);
}

double af_distortion(double power, double rho, double sigma2) {
  check_power_sigma(power, sigma2);
  check_rho(rho);
  return 2.0 * sigma2 * (1.0 - rho) / (1.0 + 2.0 * power * (1.0 - rho));
}

MonteCarloEstimate monte_carlo_af(double power, double rho, double sigma2, std::size_t samples, std::uint64_t seed) {
  check_power_sigma(power, sigma2);
  check_rho(rho);
  if (samples < kMinMonteCarloSamples) {
    throw Error("monte_carlo_af: needs at least " + std::to_string(kMinMonteCarloSamples) + " samples");
  }
  const double sigma = std::sqrt(sigma2);
  const double gain = std::sqrt(power / sigma2);
  const double diff_var = 2.0 * sigma2 * (1.0 - rho);
  const double coef = gain * diff_var / (gain * gain * diff_var + 1.0);
  const double mix = std::sqrt(std::max(0.0, 1.0 - rho * rho));

  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    CounterRng rng(seed, k);
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    const double v = rng.normal();
    const double u1 = sigma * z1;
    const double u2 = sigma * (rho * z1 + mix * z2);
    const double y = gain * u1 - gain * u2 + v;
    const double e = (u1 - u2) - coef * y;
    const double err = e * e;
    const double d = err - mean;
    mean += d / double(k + 1);
    m2 += d * (err - mean);
  }
  const double sd = std::sqrt(m2 / double(samples - 1));
  return {mean, 1.96 * sd / std::sqrt(double(samples)), samples, seed};
}

JointPMF binary_quadrant_pmf(double rho) {
  check_rho(rho);
  const double same = 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
  const double diff = 0.5 - same;
  return JointPMF({Alphabet::integers("w1", 0, 1), Alphabet::integers("w2", 0, 1)},
                  {same, std::max(0.0, diff), std::max(0.0, diff), same});
}

double pearson_correlation(const JointPMF& pmf) {
  if (pmf.rank() != 2) throw AxisError("pearson_correlation: expected two axes");
  std::vector<double> xs, ys;
  for (const auto& s : pmf.axes()[0].symbols()) xs.push_back(std::stod(s));
  for (const auto& s : pmf.axes()[1].symbols()) ys.push_back(std::stod(s));
  double ex = 0, ey = 0, exx = 0, eyy = 0, exy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double p = pmf.mass()[i * ys.size() + j];
      ex += p * xs[i];
      ey += p * ys[j];
      exx += p * xs[i] * xs[i];
      eyy += p * ys[j] * ys[j];
      exy += p * xs[i] * ys[j];
    }
  }
  const double vx = exx - ex * ex;
  const double vy = eyy - ey * ey;
  if (vx <= 0.0 || vy <= 0.0) throw Error("pearson_correlation: degenerate marginal");
  return (exy - ex * ey) / std::sqrt(vx * vy);
}

QuantizedSamples quantize_grid(const GridQuantizer& q, std::span<const std::pair<double, double>> samples) {
  q.validate();
  if (samples.empty()) throw Error("quantize_grid: no samples");
  QuantizedSamples out{{}, JointPMF::uniform({index_alphabet("w1", q.cells, 1), index_alphabet("w2", q.cells, 1)})};
  std::vector<double> counts(q.cells * q.cells, 0.0);
  out.cells.reserve(samples.size());
  for (const auto& [a, b] : samples) {
    if (a < q.lo || a > q.hi || b < q.lo || b > q.hi) throw Error("quantize_grid: sample outside [lo, hi]^2");
    const std::size_t i = q.index(a);
    const std::size_t j = q.index(b);
    out.cells.emplace_back(i, j);
    counts[i * q.cells + j] += 1.0;
  }
  for (auto& c : counts) c /= double(samples.size());
  out.empirical = JointPMF(out.empirical.axes(), std::move(counts));
  return out;
}

double lipschitz_budget(double alpha, double target_d) {
  if (!(alpha > 0.0)) throw Error("lipschitz_budget: alpha must be positive");
  if (!(target_d >= 0.0)) throw Error("lipschitz_budget: target distortion must be nonnegative");
  return target_d / alpha;
}

BlockDensity BlockDensity::off_diagonal(std::size_t blocks) {
  if (blocks < 2) throw Error("BlockDensity::off_diagonal: needs at least two blocks");
  BlockDensity d{blocks, std::vector<double>(blocks * blocks, 0.0)};
  const double each = 1.0 / double(blocks * (blocks - 1));
  for (std::size_t a = 0; a < blocks; ++a) {
    for (std::size_t b = 0; b < blocks; ++b) d.mass[a * blocks + b] = a == b ? 0.0 : each;
  }
  return d;
}

void BlockDensity::validate() const {
  if (blocks == 0 || mass.size() != blocks * blocks) throw Error("BlockDensity: mass must be blocks x blocks");
  double total = 0.0;
  for (double m : mass) {
    if (m < 0.0) throw InvalidDistribution("BlockDensity: negative block mass");
    total += m;
  }
  if (std::abs(total - 1.0) > kProbTolerance) throw InvalidDistribution("BlockDensity: masses do not sum to 1");
}

namespace {

void require_unit_cover(const GridQuantizer& q) {
  q.validate();
  if (q.lo != 0.0 || q.hi != 1.0) throw Error("quantizer must cover [0, 1] to match the block density");
}

// Calls visit(cell_i, cell_j, rect a0,a1,b0,b1, density) for every nonempty
// intersection of a quantizer cell pair with a density block.
template <typename Visit>
void for_each_piece(const BlockDensity& density, const GridQuantizer& q, Visit&& visit) {
  const double bw = 1.0 / double(density.blocks);
  const double block_area = bw * bw;
  for (std::size_t i = 0; i < q.cells; ++i) {
    const double a0 = q.lo + double(i) * q.width(), a1 = a0 + q.width();
    for (std::size_t j = 0; j < q.cells; ++j) {
      const double b0 = q.lo + double(j) * q.width(), b1 = b0 + q.width();
      for (std::size_t x = 0; x < density.blocks; ++x) {
        const double ox0 = std::max(a0, double(x) * bw), ox1 = std::min(a1, double(x + 1) * bw);
        if (ox1 <= ox0) continue;
        for (std::size_t y = 0; y < density.blocks; ++y) {
          const double m = density.mass[x * density.blocks + y];
          if (m <= 0.0) continue;
          const double oy0 = std::max(b0, double(y) * bw), oy1 = std::min(b1, double(y + 1) * bw);
          if (oy1 <= oy0) continue;
          visit(i, j, ox0, ox1, oy0, oy1, m / block_area);
        }
      }
    }
  }
}

}  // namespace

JointPMF exact_cell_pmf(const BlockDensity& density, const GridQuantizer& q) {
  density.validate();
  require_unit_cover(q);
  std::vector<double> mass(q.cells * q.cells, 0.0);
  for_each_piece(density, q, [&](std::size_t i, std::size_t j, double a0, double a1, double b0, double b1, double rho) {
    mass[i * q.cells + j] += rho * (a1 - a0) * (b1 - b0);
  });
  return JointPMF({index_alphabet("w1", q.cells, 1), index_alphabet("w2", q.cells, 1)}, std::move(mass));
}

std::vector<std::pair<double, double>> sample_block_density(const BlockDensity& density, std::size_t samples,
                                                            std::uint64_t seed) {
  density.validate();
  std::vector<double> cdf(density.mass.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < cdf.size(); ++k) cdf[k] = (acc += density.mass[k]);
  const double bw = 1.0 / double(density.blocks);
  std::vector<std::pair<double, double>> out;
  out.reserve(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    CounterRng rng(seed, k);
    const double pick = rng.uniform() * acc;
    std::size_t block = std::size_t(std::lower_bound(cdf.begin(), cdf.end(), pick) - cdf.begin());
    block = std::min(block, cdf.size() - 1);
    while (density.mass[block] <= 0.0 && block + 1 < cdf.size()) ++block;
    const double x = (double(block / density.blocks) + rng.uniform()) * bw;
    const double y = (double(block % density.blocks) + rng.uniform()) * bw;
    out.emplace_back(x, y);
  }
  return out;
}

double uniform_rect_abs_diff_error(double a_lo, double a_hi, double b_lo, double b_hi, double estimate) {
  const double wa = a_hi - a_lo;
  const double wb = b_hi - b_lo;
  if (!(wa > 0.0 && wb > 0.0)) throw Error("uniform_rect_abs_diff_error: empty interval");
  // Density of D = U1 - U2: trapezoid on [lo, hi] with plateau [lo + m, hi - m].
  const double lo = a_lo - b_hi;
  const double hi = a_hi - b_lo;
  const double m = std::min(wa, wb);
  const double top = 1.0 / std::max(wa, wb);
  auto density = [&](double t) {
    if (t <= lo || t >= hi) return 0.0;
    if (t < lo + m) return top * (t - lo) / m;
    if (t > hi - m) return top * (hi - t) / m;
    return top;
  };
  auto integrand = [&](double t) { return std::abs(std::abs(t) - estimate) * density(t); };

  std::vector<double> cuts{lo, lo + m, hi - m, hi, 0.0, estimate, -estimate};
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double x0 = std::max(cuts[k], lo);
    const double x1 = std::min(cuts[k + 1], hi);
    if (x1 <= x0) continue;
    total += (x1 - x0) / 6.0 * (integrand(x0) + 4.0 * integrand(0.5 * (x0 + x1)) + integrand(x1));
  }
  return total;
}

double exact_abs_diff_distortion(const BlockDensity& density, const GridQuantizer& q,
                                 const std::function<double(std::size_t, std::size_t)>& estimate) {
  density.validate();
  require_unit_cover(q);
  double total = 0.0;
  for_each_piece(density, q, [&](std::size_t i, std::size_t j, double a0, double a1, double b0, double b1, double rho) {
    const double p = rho * (a1 - a0) * (b1 - b0);
    total += p * uniform_rect_abs_diff_error(a0, a1, b0, b1, estimate(i, j));
  });
  return total;
}

// ---------------------------------------------------------------------------

Labeling Labeling::identity(std::size_t n) {
  Labeling l{std::vector<std::size_t>(n), n};
  for (std::size_t i = 0; i < n; ++i) l.label_of[i] = i;
  return l;
}

Labeling Labeling::from_coloring(const Coloring& c) { return {c.color_of, c.num_colors()}; }

SystemSpec build_labeled_system(const JointPMF& pair, const FunctionTable& f, const Labeling& l1, const Labeling& l2,
                                const ChannelInputs& inputs, const DiscreteMAC& channel,
                                const DistortionTable& distortion, double target_d,
                                const std::optional<SideInformation>& side) {
  if (pair.rank() != 2) throw AxisError("build_labeled_system: pair joint must have two axes");
  const Alphabet u1 = pair.axes()[0].renamed("u1");
  const Alphabet u2 = pair.axes()[1].renamed("u2");
  if (l1.label_of.size() != u1.size() || l2.label_of.size() != u2.size()) {
    throw AlphabetMismatch("build_labeled_system: labeling size does not match the source alphabet");
  }
  const Alphabet z1 = Alphabet::singleton("z1");
  const Alphabet z2 = Alphabet::singleton("z2");
  const Alphabet z = side ? side->alphabet.renamed("z") : Alphabet::singleton("z");

  std::vector<double> mass(u1.size() * u2.size() * z.size(), 0.0);
  for (std::size_t a = 0; a < u1.size(); ++a) {
    for (std::size_t b = 0; b < u2.size(); ++b) {
      const std::size_t zi = side ? side->side(a, b) : 0;
      if (zi >= z.size()) throw Error("build_labeled_system: side information out of range");
      mass[(a * u2.size() + b) * z.size() + zi] = pair.mass()[a * u2.size() + b];
    }
  }
  JointPMF source({u1, u2, z1, z2, z}, std::move(mass));

  const Alphabet w1 = index_alphabet("w1", l1.labels);
  const Alphabet w2 = index_alphabet("w2", l2.labels);
  Kernel w1k = Kernel::deterministic({u1, z1}, {w1}, [&](std::span<const std::size_t> i) { return l1.label_of[i[0]]; });
  Kernel w2k = Kernel::deterministic({u2, z2}, {w2}, [&](std::span<const std::size_t> i) { return l2.label_of[i[0]]; });

  const Alphabet& x1 = channel.input1();
  const Alphabet& x2 = channel.input2();
  auto make_x = [&]() -> std::pair<Kernel, Kernel> {
    if (inputs.joint_complement) {
      if (l1.labels > 2 || l2.labels > 2 || x1.size() != 2 || x2.size() != 2) {
        throw Error("build_labeled_system: the complement mapping needs binary labels and binary inputs");
      }
      return {Kernel::deterministic({w1}, {x1}, [](std::span<const std::size_t> i) { return i[0]; }),
              Kernel::deterministic({w2}, {x2}, [](std::span<const std::size_t> i) { return 1 - i[0]; })};
    }
    if (inputs.p1.size() != x1.size() || inputs.p2.size() != x2.size()) {
      throw AlphabetMismatch("build_labeled_system: input distributions do not match the channel inputs");
    }
    return {Kernel::constant({w1}, {x1}, inputs.p1), Kernel::constant({w2}, {x2}, inputs.p2)};
  };
  auto [x1k, x2k] = make_x();

  const FunctionTable fn({u1, u2}, f.values());
  FunctionTable decoder = optimal_decoder(source, w1k, w2k, fn, distortion);
  return SystemSpec{std::move(source), std::move(w1k), std::move(w2k), std::move(x1k), std::move(x2k),
                    channel,           fn,             std::move(decoder), distortion, target_d};
}

const char* to_string(SchemeId id) {
  switch (id) {
    case SchemeId::Uncoded: return "uncoded";
    case SchemeId::SlepianWolfSources: return "sw-sources";
    case SchemeId::IndependentColors: return "independent-colors";
    case SchemeId::Scheme1: return "scheme1";
    case SchemeId::Scheme2: return "scheme2";
    case SchemeId::Scheme3: return "scheme3";
    case SchemeId::SideInfoColors: return "sw-colors-side-info";
    case SchemeId::AmplifyForward: return "af";
    case SchemeId::Centralized: return "centralized";
  }
  return "?";
}

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{"section5", "gauss-diff", "gauss-binary", "uniform-grid"};
  return ids;
}

std::vector<SchemeReport> run_scheme(const SchemeConfig& config) {
  if (config.experiment == "section5") return run_section5(config);
  if (config.experiment == "gauss-diff") return run_gauss_diff(config);
  if (config.experiment == "gauss-binary") return run_gauss_binary(config);
  if (config.experiment == "uniform-grid") return run_uniform_grid(config);
  throw Error("unknown experiment '" + config.experiment + "'");
}

std::vector<CurvePoint> gauss_diff_curves(double rho, double sigma2, double power_min, double power_max,
                                          std::size_t steps) {
  if (steps < 2) throw Error("gauss_diff_curves: needs at least two steps");
  if (!(power_max >= power_min)) throw Error("gauss_diff_curves: power range is reversed");
  std::vector<CurvePoint> out;
  out.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const double p = power_min + (power_max - power_min) * double(k) / double(steps - 1);
    out.push_back({p, centralized_bound(p, rho, sigma2), af_distortion(p, rho, sigma2)});
  }
  return out;
}

JointPMF section5_joint() {
  return JointPMF::from_weights({Alphabet::integers("u1", 1, 3), Alphabet::integers("u2", 1, 3)},
                                [](std::span<const std::size_t> i) { return i[0] == i[1] ? 0.0 : 1.0; });
}

FunctionTable section5_function() {
  return FunctionTable::from({Alphabet::integers("u1", 1, 3), Alphabet::integers("u2", 1, 3)},
                             [](std::span<const std::size_t> i) { return std::string(i[0] > i[1] ? "1" : "0"); });
}

JointPMF transpose(const JointPMF& pair) {
  if (pair.rank() != 2) throw AxisError("transpose: expected two axes");
  return marginalize(pair, {pair.axes()[1].name(), pair.axes()[0].name()});
}

FunctionTable transpose(const FunctionTable& f) {
  if (f.domain().size() != 2) throw AxisError("transpose: expected a two-argument function");
  const auto& d = f.domain();
  return FunctionTable::from({d[1], d[0]}, [&](std::span<const std::size_t> i) { return f.at({i[1], i[0]}); });
}

}  // namespace fcmac
