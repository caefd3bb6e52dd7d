#include "fcmac/prob.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "fcmac/error.hpp"

namespace fcmac {

namespace {

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

std::vector<std::size_t> dims_of(const std::vector<Alphabet>& axes) {
  std::vector<std::size_t> dims;
  dims.reserve(axes.size());
  for (const auto& a : axes) dims.push_back(a.size());
  return dims;
}

void require_unique_names(const std::vector<Alphabet>& axes, const char* what) {
  std::set<std::string> seen;
  for (const auto& a : axes) {
    if (!seen.insert(a.name()).second) {
      throw AxisError(std::string(what) + ": duplicate axis '" + a.name() + "'");
    }
  }
}

void require_disjoint(const AxisList& a, const AxisList& b, const char* what) {
  for (const auto& x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) {
      throw AxisError(std::string(what) + ": axis '" + x + "' appears in two argument sets");
    }
  }
}

AxisList join(const AxisList& a, const AxisList& b) {
  AxisList out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Entropy of the marginal on `axes`; the empty set has entropy 0.
double joint_entropy(const JointPMF& pmf, const AxisList& axes) {
  if (axes.empty()) return 0.0;
  const JointPMF m = marginalize(pmf, axes);
  return entropy_bits(m.mass());
}

}  // namespace

// ---------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::string name, std::vector<std::string> symbols)
    : name_(std::move(name)), symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw Error("alphabet '" + name_ + "' has no symbols");
  std::unordered_set<std::string> seen;
  for (const auto& s : symbols_) {
    if (!seen.insert(s).second) {
      throw Error("alphabet '" + name_ + "' repeats symbol '" + s + "'");
    }
  }
}

Alphabet Alphabet::integers(std::string name, int lo, int hi) {
  std::vector<std::string> symbols;
  for (int v = lo; v <= hi; ++v) symbols.push_back(std::to_string(v));
  return Alphabet(std::move(name), std::move(symbols));
}

Alphabet Alphabet::singleton(std::string name, std::string symbol) {
  return Alphabet(std::move(name), {std::move(symbol)});
}

std::optional<std::size_t> Alphabet::find(std::string_view symbol) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] == symbol) return i;
  }
  return std::nullopt;
}

std::size_t Alphabet::index_of(std::string_view symbol) const {
  if (auto i = find(symbol)) return *i;
  throw AlphabetMismatch("symbol '" + std::string(symbol) + "' not in alphabet '" + name_ + "'");
}

// ---------------------------------------------------------------------------
// Shape

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)), strides_(dims_.size()) {
  volume_ = 1;
  for (std::size_t k = dims_.size(); k-- > 0;) {
    strides_[k] = volume_;
    volume_ *= dims_[k];
  }
}

std::size_t Shape::ravel(std::span<const std::size_t> idx) const {
  if (idx.size() != dims_.size()) throw Error("index rank does not match shape");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= dims_[k]) throw Error("index out of range");
    flat += idx[k] * strides_[k];
  }
  return flat;
}

Index Shape::unravel(std::size_t flat) const {
  Index idx(dims_.size());
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    idx[k] = flat / strides_[k];
    flat %= strides_[k];
  }
  return idx;
}

bool Shape::next(Index& idx) const {
  for (std::size_t k = dims_.size(); k-- > 0;) {
    if (++idx[k] < dims_[k]) return true;
    idx[k] = 0;
  }
  return false;
}

// ---------------------------------------------------------------------------
// JointPMF

JointPMF::JointPMF(std::vector<Alphabet> axes, std::vector<double> mass)
    : axes_(std::move(axes)), shape_(dims_of(axes_)), mass_(std::move(mass)) {
  require_unique_names(axes_, "JointPMF");
  if (mass_.size() != shape_.volume()) {
    throw Error("JointPMF: mass has " + std::to_string(mass_.size()) + " entries, axes need " +
                std::to_string(shape_.volume()));
  }
}

JointPMF JointPMF::uniform(std::vector<Alphabet> axes) {
  const Shape s(dims_of(axes));
  return JointPMF(std::move(axes), std::vector<double>(s.volume(), 1.0 / double(s.volume())));
}

JointPMF JointPMF::point_mass(std::vector<Alphabet> axes, std::span<const std::size_t> at) {
  const Shape s(dims_of(axes));
  std::vector<double> mass(s.volume(), 0.0);
  mass[s.ravel(at)] = 1.0;
  return JointPMF(std::move(axes), std::move(mass));
}

JointPMF JointPMF::from_weights(std::vector<Alphabet> axes,
                                const std::function<double(std::span<const std::size_t>)>& weight) {
  const Shape s(dims_of(axes));
  std::vector<double> mass(s.volume());
  Index idx(s.rank(), 0);
  double total = 0.0;
  std::size_t flat = 0;
  do {
    const double w = weight(idx);
    if (w < 0.0) throw InvalidDistribution("from_weights: negative weight");
    mass[flat++] = w;
    total += w;
  } while (s.next(idx));
  if (total <= 0.0) throw InvalidDistribution("from_weights: weights sum to zero");
  for (auto& m : mass) m /= total;
  return JointPMF(std::move(axes), std::move(mass));
}

JointPMF JointPMF::product(const JointPMF& a, const JointPMF& b) {
  std::vector<Alphabet> axes = a.axes();
  axes.insert(axes.end(), b.axes().begin(), b.axes().end());
  std::vector<double> mass;
  mass.reserve(a.size() * b.size());
  for (double x : a.mass()) {
    for (double y : b.mass()) mass.push_back(x * y);
  }
  return JointPMF(std::move(axes), std::move(mass));
}

bool JointPMF::has_axis(std::string_view name) const {
  return std::any_of(axes_.begin(), axes_.end(), [&](const Alphabet& a) { return a.name() == name; });
}

std::size_t JointPMF::axis_position(std::string_view name) const {
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    if (axes_[k].name() == name) return k;
  }
  throw AxisError("unknown axis '" + std::string(name) + "'");
}

const Alphabet& JointPMF::axis(std::string_view name) const { return axes_[axis_position(name)]; }

AxisList JointPMF::axis_names() const {
  AxisList names;
  for (const auto& a : axes_) names.push_back(a.name());
  return names;
}

double JointPMF::at_symbols(std::initializer_list<std::string_view> symbols) const {
  if (symbols.size() != axes_.size()) throw Error("at_symbols: wrong number of symbols");
  Index idx;
  std::size_t k = 0;
  for (auto s : symbols) idx.push_back(axes_[k++].index_of(s));
  return at(idx);
}

// ---------------------------------------------------------------------------
// Kernel

Kernel::Kernel(std::vector<Alphabet> from, std::vector<Alphabet> to, std::vector<double> rows)
    : from_(std::move(from)),
      to_(std::move(to)),
      from_shape_(dims_of(from_)),
      to_shape_(dims_of(to_)),
      data_(std::move(rows)) {
  if (to_.empty()) throw Error("Kernel: needs at least one target axis");
  std::vector<Alphabet> all = from_;
  all.insert(all.end(), to_.begin(), to_.end());
  require_unique_names(all, "Kernel");
  if (data_.size() != from_shape_.volume() * to_shape_.volume()) {
    throw Error("Kernel: rows have " + std::to_string(data_.size()) + " entries, expected " +
                std::to_string(from_shape_.volume() * to_shape_.volume()));
  }
}

Kernel Kernel::deterministic(std::vector<Alphabet> from, std::vector<Alphabet> to,
                             const std::function<std::size_t(std::span<const std::size_t>)>& map) {
  const Shape fs(dims_of(from));
  const Shape ts(dims_of(to));
  std::vector<double> data(fs.volume() * ts.volume(), 0.0);
  Index idx(fs.rank(), 0);
  std::size_t r = 0;
  do {
    const std::size_t c = map(idx);
    if (c >= ts.volume()) throw Error("Kernel::deterministic: target index out of range");
    data[r * ts.volume() + c] = 1.0;
    ++r;
  } while (fs.next(idx));
  return Kernel(std::move(from), std::move(to), std::move(data));
}

Kernel Kernel::constant(std::vector<Alphabet> from, std::vector<Alphabet> to, std::vector<double> row) {
  const Shape fs(dims_of(from));
  std::vector<double> data;
  data.reserve(fs.volume() * row.size());
  for (std::size_t r = 0; r < fs.volume(); ++r) data.insert(data.end(), row.begin(), row.end());
  return Kernel(std::move(from), std::move(to), std::move(data));
}

Kernel Kernel::identity(const Alphabet& from, const Alphabet& to) {
  if (!from.same_symbols(to)) throw AlphabetMismatch("identity kernel needs matching symbols");
  return deterministic({from}, {to}, [](std::span<const std::size_t> i) { return i[0]; });
}

// ---------------------------------------------------------------------------
// Validation

std::string ValidationReport::summary() const {
  std::ostringstream os;
  if (ok()) {
    os << "ok (total " << total << ")";
    return os.str();
  }
  os << violations.size() << " violation(s); first: " << violations.front().what << " at [";
  for (std::size_t k = 0; k < violations.front().index.size(); ++k) {
    os << (k ? "," : "") << violations.front().index[k];
  }
  os << "] value " << violations.front().value;
  return os.str();
}

ValidationReport validate(const JointPMF& pmf) {
  ValidationReport report;
  const auto mass = pmf.mass();
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const double m = mass[i];
    if (!std::isfinite(m)) {
      report.violations.push_back({pmf.shape().unravel(i), m, "non-finite entry"});
    } else if (m < -kProbTolerance) {
      report.violations.push_back({pmf.shape().unravel(i), m, "negative entry"});
    }
    report.total += m;
  }
  if (std::abs(report.total - 1.0) > kProbTolerance) {
    report.violations.push_back({{}, report.total, "entries do not sum to 1"});
  }
  return report;
}

ValidationReport validate(const Kernel& kernel) {
  ValidationReport report;
  report.total = 1.0;
  for (std::size_t r = 0; r < kernel.rows(); ++r) {
    double total = 0.0;
    const auto row = kernel.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!std::isfinite(row[c])) {
        report.violations.push_back({{r, c}, row[c], "non-finite entry"});
      } else if (row[c] < -kProbTolerance) {
        report.violations.push_back({{r, c}, row[c], "negative entry"});
      }
      total += row[c];
    }
    if (std::abs(total - 1.0) > std::abs(report.total - 1.0)) report.total = total;
    if (std::abs(total - 1.0) > kProbTolerance) {
      report.violations.push_back({{r}, total, "row does not sum to 1"});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Marginals and composition

JointPMF marginalize(const JointPMF& pmf, const AxisList& keep) {
  std::vector<std::size_t> positions;
  std::vector<Alphabet> axes;
  for (const auto& name : keep) {
    const std::size_t p = pmf.axis_position(name);
    if (std::find(positions.begin(), positions.end(), p) != positions.end()) {
      throw AxisError("marginalize: axis '" + name + "' listed twice");
    }
    positions.push_back(p);
    axes.push_back(pmf.axes()[p]);
  }
  const Shape out_shape(dims_of(axes));
  // Stride in the output for each input axis (0 when summed out).
  std::vector<std::size_t> out_stride(pmf.rank(), 0);
  {
    std::size_t s = 1;
    for (std::size_t k = positions.size(); k-- > 0;) {
      out_stride[positions[k]] = s;
      s *= axes[k].size();
    }
  }
  std::vector<double> mass(out_shape.volume(), 0.0);
  const auto in = pmf.mass();
  Index idx(pmf.rank(), 0);
  std::size_t flat = 0;
  do {
    std::size_t o = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) o += idx[k] * out_stride[k];
    mass[o] += in[flat++];
  } while (pmf.shape().next(idx));
  return JointPMF(std::move(axes), std::move(mass));
}

JointPMF compose(const JointPMF& base, std::span<const Kernel> kernels) {
  std::vector<Alphabet> axes = base.axes();
  std::vector<double> mass(base.mass().begin(), base.mass().end());

  for (std::size_t n = 0; n < kernels.size(); ++n) {
    const Kernel& kernel = kernels[n];
    const std::string tag = "compose: kernel " + std::to_string(n);
    if (const auto report = validate(kernel); !report.ok()) {
      throw InvalidDistribution(tag + " invalid: " + report.summary());
    }
    std::vector<std::size_t> src_pos;
    for (const auto& a : kernel.from()) {
      auto it = std::find_if(axes.begin(), axes.end(), [&](const Alphabet& b) { return b.name() == a.name(); });
      if (it == axes.end()) throw AxisError(tag + " reads axis '" + a.name() + "' not present in the joint");
      if (!it->same_symbols(a)) throw AlphabetMismatch(tag + " disagrees on the symbols of axis '" + a.name() + "'");
      src_pos.push_back(std::size_t(it - axes.begin()));
    }
    for (const auto& a : kernel.to()) {
      if (std::any_of(axes.begin(), axes.end(), [&](const Alphabet& b) { return b.name() == a.name(); })) {
        throw AxisError(tag + " writes axis '" + a.name() + "' already present in the joint");
      }
    }

    const Shape shape(dims_of(axes));
    const std::size_t cols = kernel.cols();
    std::vector<double> next(mass.size() * cols, 0.0);
    Index idx(shape.rank(), 0);
    Index src(src_pos.size());
    std::size_t flat = 0;
    do {
      const double m = mass[flat];
      if (m != 0.0) {
        for (std::size_t k = 0; k < src_pos.size(); ++k) src[k] = idx[src_pos[k]];
        const auto row = kernel.row(kernel.from_shape().ravel(src));
        for (std::size_t c = 0; c < cols; ++c) next[flat * cols + c] = m * row[c];
      }
      ++flat;
    } while (shape.next(idx));

    axes.insert(axes.end(), kernel.to().begin(), kernel.to().end());
    mass = std::move(next);
  }
  return JointPMF(std::move(axes), std::move(mass));
}

JointPMF compose(const JointPMF& base, std::initializer_list<Kernel> kernels) {
  return compose(base, std::span<const Kernel>(kernels.begin(), kernels.size()));
}

// ---------------------------------------------------------------------------
// Information measures

double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) h += plogp(x);
  return h;
}

double binary_entropy(double q) { return plogp(q) + plogp(1.0 - q); }

double entropy(const JointPMF& pmf, const AxisList& axes) {
  if (axes.empty()) throw AxisError("entropy: empty axis set");
  return joint_entropy(pmf, axes);
}

double conditional_entropy(const JointPMF& pmf, const AxisList& target, const AxisList& given) {
  if (target.empty()) throw AxisError("conditional_entropy: empty target set");
  require_disjoint(target, given, "conditional_entropy");
  return joint_entropy(pmf, join(target, given)) - joint_entropy(pmf, given);
}

double mutual_information(const JointPMF& pmf, const AxisList& a, const AxisList& b, const AxisList& given) {
  if (a.empty() || b.empty()) throw AxisError("mutual_information: empty axis set");
  require_disjoint(a, b, "mutual_information");
  require_disjoint(a, given, "mutual_information");
  require_disjoint(b, given, "mutual_information");
  const double value = joint_entropy(pmf, join(a, given)) + joint_entropy(pmf, join(b, given)) -
                       joint_entropy(pmf, join(join(a, b), given)) - joint_entropy(pmf, given);
  if (value < 0.0 && value > -kInfoTolerance) return 0.0;
  return value;
}

SlepianWolfBounds slepian_wolf_bounds(const JointPMF& pmf, const AxisList& first, const AxisList& second,
                                      const AxisList& given) {
  if (first.empty() || second.empty()) throw AxisError("slepian_wolf_bounds: empty axis set");
  require_disjoint(first, second, "slepian_wolf_bounds");
  require_disjoint(first, given, "slepian_wolf_bounds");
  require_disjoint(second, given, "slepian_wolf_bounds");
  SlepianWolfBounds b;
  b.first_given_second = conditional_entropy(pmf, first, join(second, given));
  b.second_given_first = conditional_entropy(pmf, second, join(first, given));
  b.sum = conditional_entropy(pmf, join(first, second), given);
  return b;
}

}  // namespace fcmac
