#pragma once

#include <vector>

#include "fcmac/prob.hpp"

namespace fcmac {

// Two-user discrete memoryless MAC, law p(y | x1, x2).
class DiscreteMAC {
 public:
  // `law` must map exactly two input axes to one output axis.
  explicit DiscreteMAC(Kernel law);

  const Kernel& law() const noexcept { return law_; }
  const Alphabet& input1() const { return law_.from()[0]; }
  const Alphabet& input2() const { return law_.from()[1]; }
  const Alphabet& output() const { return law_.to()[0]; }

 private:
  Kernel law_;
};

// Y = X1 + X2 over binary inputs named x1, x2 and ternary output y.
DiscreteMAC adder_mac();

// I(X1, X2; Y) for the given input joint (axes matching the MAC inputs).
double mac_mutual_info(const DiscreteMAC& mac, const JointPMF& input_joint);

struct SumCapacity {
  double bits = 0.0;
  std::vector<double> p1;  // maximizing p(x1)
  std::vector<double> p2;  // maximizing p(x2)
};

inline constexpr std::size_t kCapacityAlphabetCap = 16;

// max over product inputs p(x1) p(x2) of I(X1, X2; Y). Binary inputs start
// from the best point of a 51 x 51 grid; larger alphabets from uniform and
// a few fixed random points. Each start is refined by alternating
// Blahut-Arimoto steps on one input with the other held fixed.
SumCapacity mac_sum_capacity_independent(const DiscreteMAC& mac);

struct GaussianMAC {
  double power = 0.0;      // per-input power constraint P
  double noise_var = 1.0;  // receiver noise variance

  void validate() const;
};

// (1/2) log2(1 + 2P(1 + rho) / N): I(X1, X2; Y) for jointly Gaussian
// inputs at correlation rho, each at full power.
double gmac_sum_rate(const GaussianMAC& mac, double rho);

}  // namespace fcmac
