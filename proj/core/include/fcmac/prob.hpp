#pragma once

// Finite-alphabet probability calculus: alphabets, dense joint pmfs,
// stochastic kernels and the information measures built on them.
// All logarithms are base 2.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fcmac {

// Normalization / sign tolerance for pmfs and kernel rows.
inline constexpr double kProbTolerance = 1e-9;
// Absolute tolerance used when comparing information quantities.
inline constexpr double kInfoTolerance = 1e-9;

using AxisList = std::vector<std::string>;
using Index = std::vector<std::size_t>;

class Alphabet {
 public:
  Alphabet(std::string name, std::vector<std::string> symbols);

  // Symbols "lo", "lo+1", ..., "hi".
  static Alphabet integers(std::string name, int lo, int hi);
  static Alphabet singleton(std::string name, std::string symbol = "*");

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& operator[](std::size_t i) const { return symbols_.at(i); }

  std::optional<std::size_t> find(std::string_view symbol) const;
  std::size_t index_of(std::string_view symbol) const;  // throws AlphabetMismatch

  Alphabet renamed(std::string name) const { return Alphabet(std::move(name), symbols_); }
  bool same_symbols(const Alphabet& other) const { return symbols_ == other.symbols_; }

  bool operator==(const Alphabet&) const = default;

 private:
  std::string name_;
  std::vector<std::string> symbols_;
};

// Row-major shape helper shared by pmfs, kernels and tables: the last axis
// varies fastest.
class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<std::size_t> dims);

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t volume() const noexcept { return volume_; }

  std::size_t ravel(std::span<const std::size_t> idx) const;
  Index unravel(std::size_t flat) const;
  // Advances `idx` to the next multi-index; returns false after the last one.
  bool next(Index& idx) const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::size_t volume_ = 1;
};

// Dense probability tensor over an ordered list of named alphabets.
//
// Construction only checks the shape and the axis names; use validate() to
// check the probability invariants. Every operation in this header that
// returns a JointPMF returns one that validates.
class JointPMF {
 public:
  JointPMF(std::vector<Alphabet> axes, std::vector<double> mass);

  static JointPMF uniform(std::vector<Alphabet> axes);
  static JointPMF point_mass(std::vector<Alphabet> axes, std::span<const std::size_t> at);
  // Builds the tensor by evaluating `weight` at every multi-index and
  // normalizing the result. Throws InvalidDistribution if the total is zero.
  static JointPMF from_weights(std::vector<Alphabet> axes,
                               const std::function<double(std::span<const std::size_t>)>& weight);
  // Independent product p(a) p(b); axis names must be disjoint.
  static JointPMF product(const JointPMF& a, const JointPMF& b);

  const std::vector<Alphabet>& axes() const noexcept { return axes_; }
  const Shape& shape() const noexcept { return shape_; }
  std::span<const double> mass() const noexcept { return mass_; }
  std::size_t rank() const noexcept { return axes_.size(); }
  std::size_t size() const noexcept { return mass_.size(); }

  bool has_axis(std::string_view name) const;
  std::size_t axis_position(std::string_view name) const;  // throws AxisError
  const Alphabet& axis(std::string_view name) const;
  AxisList axis_names() const;

  double at(std::span<const std::size_t> idx) const { return mass_[shape_.ravel(idx)]; }
  double at(std::initializer_list<std::size_t> idx) const {
    return at(std::span<const std::size_t>(idx.begin(), idx.size()));
  }
  // Mass at a tuple of symbol labels, one per axis.
  double at_symbols(std::initializer_list<std::string_view> symbols) const;

 private:
  std::vector<Alphabet> axes_;
  Shape shape_;
  std::vector<double> mass_;
};

// Conditional distribution p(to | from). Rows are indexed by the flattened
// source tuple, columns by the flattened target tuple.
class Kernel {
 public:
  Kernel(std::vector<Alphabet> from, std::vector<Alphabet> to, std::vector<double> rows);

  // Point-mass rows: target = map(source), both as flat indices.
  static Kernel deterministic(std::vector<Alphabet> from, std::vector<Alphabet> to,
                              const std::function<std::size_t(std::span<const std::size_t>)>& map);
  // Every row equals `row`.
  static Kernel constant(std::vector<Alphabet> from, std::vector<Alphabet> to, std::vector<double> row);
  // from -> copy of itself under the names in `to` (alphabets must match).
  static Kernel identity(const Alphabet& from, const Alphabet& to);

  const std::vector<Alphabet>& from() const noexcept { return from_; }
  const std::vector<Alphabet>& to() const noexcept { return to_; }
  const Shape& from_shape() const noexcept { return from_shape_; }
  const Shape& to_shape() const noexcept { return to_shape_; }
  std::size_t rows() const noexcept { return from_shape_.volume(); }
  std::size_t cols() const noexcept { return to_shape_.volume(); }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols(), cols()}; }
  double prob(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::vector<Alphabet> from_;
  std::vector<Alphabet> to_;
  Shape from_shape_;
  Shape to_shape_;
  std::vector<double> data_;
};

struct Violation {
  Index index;  // multi-index into the pmf, or {row, col} for a kernel
  double value = 0.0;
  std::string what;
};

struct ValidationReport {
  double total = 0.0;  // pmf total (or worst row total for kernels)
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate(const JointPMF& pmf);
ValidationReport validate(const Kernel& kernel);

// Keeps `keep` in the listed order and sums out everything else.
JointPMF marginalize(const JointPMF& pmf, const AxisList& keep);

// Appends each kernel's target axes to the joint: p(base) * prod p(to | from).
// Every kernel's source axes must already be present (same name and symbols).
JointPMF compose(const JointPMF& base, std::span<const Kernel> kernels);
JointPMF compose(const JointPMF& base, std::initializer_list<Kernel> kernels);

double entropy(const JointPMF& pmf, const AxisList& axes);
double conditional_entropy(const JointPMF& pmf, const AxisList& target, const AxisList& given);
double mutual_information(const JointPMF& pmf, const AxisList& a, const AxisList& b,
                          const AxisList& given = {});

struct SlepianWolfBounds {
  double first_given_second = 0.0;  // H(1 | 2, given)
  double second_given_first = 0.0;  // H(2 | 1, given)
  double sum = 0.0;                 // H(1, 2 | given)
};

SlepianWolfBounds slepian_wolf_bounds(const JointPMF& pmf, const AxisList& first,
                                      const AxisList& second, const AxisList& given = {});

// Entropy of a raw probability vector, bits.
double entropy_bits(std::span<const double> p);
// h(q) = -q log q - (1-q) log(1-q).
double binary_entropy(double q);

}  // namespace fcmac
