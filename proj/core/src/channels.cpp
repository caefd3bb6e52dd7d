#include "fcmac/channels.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fcmac/error.hpp"

namespace fcmac {

namespace {

// I(X1,X2;Y) for product inputs, straight from the law.
double product_mutual_info(const Kernel& law, const std::vector<double>& p1, const std::vector<double>& p2) {
  const std::size_t n1 = p1.size();
  const std::size_t n2 = p2.size();
  const std::size_t ny = law.cols();
  std::vector<double> py(ny, 0.0);
  double conditional = 0.0;
  for (std::size_t a = 0; a < n1; ++a) {
    for (std::size_t b = 0; b < n2; ++b) {
      const double w = p1[a] * p2[b];
      if (w <= 0.0) continue;
      const auto row = law.row(a * n2 + b);
      conditional += w * entropy_bits(row);
      for (std::size_t y = 0; y < ny; ++y) py[y] += w * row[y];
    }
  }
  return std::max(0.0, entropy_bits(py) - conditional);
}

// One Blahut-Arimoto step on `p` (the free input) with `other` fixed.
// `first` says whether `p` is the x1 distribution.
void ba_step(const Kernel& law, std::vector<double>& p, const std::vector<double>& other, bool first) {
  const std::size_t n2 = first ? other.size() : p.size();
  const std::size_t ny = law.cols();
  auto row_of = [&](std::size_t free, std::size_t fixed) {
    return first ? law.row(free * n2 + fixed) : law.row(fixed * n2 + free);
  };
  std::vector<double> py(ny, 0.0);
  for (std::size_t a = 0; a < p.size(); ++a) {
    for (std::size_t b = 0; b < other.size(); ++b) {
      const auto row = row_of(a, b);
      for (std::size_t y = 0; y < ny; ++y) py[y] += p[a] * other[b] * row[y];
    }
  }
  std::vector<double> score(p.size(), 0.0);
  for (std::size_t a = 0; a < p.size(); ++a) {
    double d = 0.0;
    for (std::size_t b = 0; b < other.size(); ++b) {
      const auto row = row_of(a, b);
      for (std::size_t y = 0; y < ny; ++y) {
        if (row[y] > 0.0) d += other[b] * row[y] * std::log(row[y] / py[y]);
      }
    }
    score[a] = d;
  }
  const double top = *std::max_element(score.begin(), score.end());
  double total = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) total += (p[a] *= std::exp(score[a] - top));
  for (auto& x : p) x /= total;
}

void refine(const Kernel& law, std::vector<double>& p1, std::vector<double>& p2) {
  double value = product_mutual_info(law, p1, p2);
  for (int it = 0; it < 20000; ++it) {
    ba_step(law, p1, p2, true);
    ba_step(law, p2, p1, false);
    const double next = product_mutual_info(law, p1, p2);
    if (std::abs(next - value) < 1e-14) break;
    value = next;
  }
}

}  // namespace

DiscreteMAC::DiscreteMAC(Kernel law) : law_(std::move(law)) {
  if (law_.from().size() != 2 || law_.to().size() != 1) {
    throw Error("DiscreteMAC: law must map two input axes to one output axis");
  }
  if (const auto report = validate(law_); !report.ok()) {
    throw InvalidDistribution("DiscreteMAC: " + report.summary());
  }
}

DiscreteMAC adder_mac() {
  return DiscreteMAC(Kernel::deterministic({Alphabet::integers("x1", 0, 1), Alphabet::integers("x2", 0, 1)},
                                           {Alphabet::integers("y", 0, 2)},
                                           [](std::span<const std::size_t> x) { return x[0] + x[1]; }));
}

double mac_mutual_info(const DiscreteMAC& mac, const JointPMF& input_joint) {
  if (input_joint.rank() != 2 || !input_joint.axes()[0].same_symbols(mac.input1()) ||
      !input_joint.axes()[1].same_symbols(mac.input2())) {
    throw AlphabetMismatch("mac_mutual_info: input joint alphabets do not match the MAC inputs");
  }
  // Rename to the MAC's axis names so compose can line them up.
  const JointPMF inputs({mac.input1(), mac.input2()},
                        std::vector<double>(input_joint.mass().begin(), input_joint.mass().end()));
  const JointPMF full = compose(inputs, {mac.law()});
  return mutual_information(full, {mac.input1().name(), mac.input2().name()}, {mac.output().name()});
}

SumCapacity mac_sum_capacity_independent(const DiscreteMAC& mac) {
  const std::size_t n1 = mac.input1().size();
  const std::size_t n2 = mac.input2().size();
  if (n1 > kCapacityAlphabetCap || n2 > kCapacityAlphabetCap) {
    throw SizeCapError("mac_sum_capacity_independent: input alphabets limited to " +
                       std::to_string(kCapacityAlphabetCap) + " symbols");
  }
  const Kernel& law = mac.law();
  std::vector<std::pair<std::vector<double>, std::vector<double>>> starts;

  if (n1 == 2 && n2 == 2) {
    constexpr int kGrid = 51;
    double best = -1.0;
    std::pair<std::vector<double>, std::vector<double>> arg;
    for (int i = 0; i < kGrid; ++i) {
      for (int j = 0; j < kGrid; ++j) {
        const double a = double(i) / (kGrid - 1);
        const double b = double(j) / (kGrid - 1);
        std::vector<double> p1{1.0 - a, a}, p2{1.0 - b, b};
        const double v = product_mutual_info(law, p1, p2);
        if (v > best + 1e-15) {
          best = v;
          arg = {p1, p2};
        }
      }
    }
    starts.push_back(std::move(arg));
  } else {
    starts.emplace_back(std::vector<double>(n1, 1.0 / double(n1)), std::vector<double>(n2, 1.0 / double(n2)));
    std::mt19937_64 rng(0xcafe);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    for (int r = 0; r < 8; ++r) {
      std::vector<double> p1(n1), p2(n2);
      double t1 = 0.0, t2 = 0.0;
      for (auto& x : p1) t1 += (x = unit(rng));
      for (auto& x : p2) t2 += (x = unit(rng));
      for (auto& x : p1) x /= t1;
      for (auto& x : p2) x /= t2;
      starts.emplace_back(std::move(p1), std::move(p2));
    }
  }

  SumCapacity out;
  out.bits = -1.0;
  for (auto& [p1, p2] : starts) {
    // A start sitting on a vertex of the simplex cannot move under the
    // multiplicative update; nudge it inside first.
    for (auto* p : {&p1, &p2}) {
      double total = 0.0;
      for (auto& x : *p) total += (x = 0.999 * x + 0.001 / double(p->size()));
      for (auto& x : *p) x /= total;
    }
    refine(law, p1, p2);
    const double v = product_mutual_info(law, p1, p2);
    if (v > out.bits) {
      out.bits = v;
      out.p1 = p1;
      out.p2 = p2;
    }
  }
  return out;
}

void GaussianMAC::validate() const {
  if (!(power >= 0.0)) throw Error("GaussianMAC: power must be nonnegative");
  if (!(noise_var > 0.0)) throw Error("GaussianMAC: noise variance must be positive");
}

double gmac_sum_rate(const GaussianMAC& mac, double rho) {
  mac.validate();
  if (!(std::abs(rho) <= 1.0)) throw Error("gmac_sum_rate: |rho| must not exceed 1");
  return 0.5 * std::log2(1.0 + 2.0 * mac.power * (1.0 + rho) / mac.noise_var);
}

}  // namespace fcmac
