#pragma once

// Sufficient-condition checker for lossy transmission of a function of two
// correlated sources over a discrete MAC, with encoder and decoder side
// information, plus its source-coding and remote-source specializations.

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fcmac/channels.hpp"
#include "fcmac/graph.hpp"
#include "fcmac/prob.hpp"

namespace fcmac {

// Square table d(g, g_hat) over one label set, with d(a, a') = 0 iff a = a'.
class DistortionTable {
 public:
  DistortionTable(std::vector<std::string> labels, std::vector<double> matrix);

  static DistortionTable hamming(std::vector<std::string> labels);
  // |a - b| for numeric labels.
  static DistortionTable absolute(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t index_of(std::string_view label) const;
  bool contains(std::string_view label) const;
  double at(std::size_t a, std::size_t b) const { return matrix_[a * size() + b]; }
  double at(std::string_view a, std::string_view b) const { return at(index_of(a), index_of(b)); }
  const std::vector<double>& matrix() const noexcept { return matrix_; }

 private:
  std::vector<std::string> labels_;
  std::vector<double> matrix_;
};

// Axis roles are positional: source_joint is over (u1, u2, z1, z2, z);
// w1_kernel maps (u1, z1) -> w1, w2_kernel (u2, z2) -> w2, x1_kernel
// w1 -> x1, x2_kernel w2 -> x2; the channel maps (x1, x2) -> y. Axis names
// are whatever the alphabets carry but must chain consistently. Trivial
// side information is a singleton alphabet.
struct SystemSpec {
  JointPMF source_joint;
  Kernel w1_kernel;
  Kernel w2_kernel;
  Kernel x1_kernel;
  Kernel x2_kernel;
  DiscreteMAC channel;
  FunctionTable function;  // over (u1, u2)
  FunctionTable decoder;   // over (w1, w2, z)
  DistortionTable distortion;
  double target_d = 0.0;
};

// Throws (AlphabetMismatch, AxisError, InvalidDistribution, Error) with a
// message naming the first broken link.
void validate_spec(const SystemSpec& spec);

enum class Verdict { Strict, Boundary, Violated };

const char* to_string(Verdict v);
Verdict classify_margin(double margin);

struct InequalityRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  Verdict verdict = Verdict::Violated;
};

struct FeasibilityReport {
  std::array<InequalityRecord, 3> inequalities;
  double achieved_distortion = 0.0;
  double target_d = 0.0;
  bool distortion_ok = false;

  // Every inequality strict (or at the boundary when allowed) and the
  // distortion target met.
  bool feasible(bool allow_boundary) const;
};

// Ten-axis joint p(u1,u2,z1,z2,z) p(w1|u1,z1) p(w2|u2,z2) p(x1|w1) p(x2|w2) p(y|x1,x2).
JointPMF assemble_joint(const SystemSpec& spec);

FeasibilityReport check_feasibility(const SystemSpec& spec);

struct RateBounds {
  double r1 = 0.0;   // I(U1,Z1; W1 | W2, Z)
  double r2 = 0.0;   // I(U2,Z2; W2 | W1, Z)
  double sum = 0.0;  // I(U1,U2,Z1,Z2; W1,W2 | Z)
};

// The source-coding region obtained with Y = (X1, X2) and X_i = W_i.
RateBounds source_coding_region(const JointPMF& source_joint, const Kernel& w1_kernel, const Kernel& w2_kernel);

// Decoder over (w1, w2, z) that picks, for every input, the label of
// `distortion` with the smallest expected distortion against f(U1, U2).
// Ties and unreachable inputs resolve to the earliest label.
FunctionTable optimal_decoder(const JointPMF& source_joint, const Kernel& w1_kernel, const Kernel& w2_kernel,
                              const FunctionTable& function, const DistortionTable& distortion);

// Dense real table over named axes (used for induced distortions).
struct RealTable {
  std::vector<Alphabet> axes;
  Shape shape;
  std::vector<double> values;

  double at(std::initializer_list<std::size_t> idx) const {
    return values[shape.ravel(std::span<const std::size_t>(idx.begin(), idx.size()))];
  }
};

// d~(u1~, z~, w1) = sum_{u1,z} p(u1, z | u1~, z~) d(f(u1, z), g(w1, z~)).
// posterior maps (u1~, z~) -> (u1, z); f is over (u1, z); g over (w1, z~).
RealTable induce_remote_distortion(const Kernel& posterior, const FunctionTable& f, const FunctionTable& g,
                                   const DistortionTable& d);
// Same, with a distortion table per symbol of z (the measure may depend on z).
RealTable induce_remote_distortion(const Kernel& posterior, const FunctionTable& f, const FunctionTable& g,
                                   const std::vector<DistortionTable>& d_per_z);

// Rates (h(q), h(q)) of the linear-code scheme for the XOR of two uniform
// bits that differ with probability q. Comparison baseline only.
std::pair<double, double> korner_marton_bounds(double q);

}  // namespace fcmac
