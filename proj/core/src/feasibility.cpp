#include "fcmac/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fcmac/error.hpp"

namespace fcmac {

namespace {

void require_same(const Alphabet& expected, const Alphabet& got, const std::string& where) {
  if (expected.name() != got.name() || !expected.same_symbols(got)) {
    throw AlphabetMismatch(where + ": expected axis '" + expected.name() + "' with matching symbols, got '" +
                           got.name() + "'");
  }
}

void require_symbols(const Alphabet& expected, const Alphabet& got, const std::string& where) {
  if (!expected.same_symbols(got)) {
    throw AlphabetMismatch(where + ": symbols of '" + got.name() + "' do not match '" + expected.name() + "'");
  }
}

void require_valid(const Kernel& k, const std::string& where) {
  if (const auto report = validate(k); !report.ok()) throw InvalidDistribution(where + ": " + report.summary());
}

void check_source_chain(const JointPMF& source, const Kernel& w1, const Kernel& w2) {
  if (source.rank() != 5) throw AxisError("source_joint: expected axes (u1, u2, z1, z2, z)");
  if (const auto report = validate(source); !report.ok()) {
    throw InvalidDistribution("source_joint: " + report.summary());
  }
  const auto& ax = source.axes();
  require_valid(w1, "w1_kernel");
  require_valid(w2, "w2_kernel");
  if (w1.from().size() != 2 || w1.to().size() != 1) throw AxisError("w1_kernel: must map (u1, z1) to one axis");
  if (w2.from().size() != 2 || w2.to().size() != 1) throw AxisError("w2_kernel: must map (u2, z2) to one axis");
  require_same(ax[0], w1.from()[0], "w1_kernel.from[0]");
  require_same(ax[2], w1.from()[1], "w1_kernel.from[1]");
  require_same(ax[1], w2.from()[0], "w2_kernel.from[0]");
  require_same(ax[3], w2.from()[1], "w2_kernel.from[1]");
}

struct SourceNames {
  std::string u1, u2, z1, z2, z, w1, w2;
};

SourceNames names_of(const JointPMF& source, const Kernel& w1, const Kernel& w2) {
  const auto& ax = source.axes();
  return {ax[0].name(), ax[1].name(), ax[2].name(), ax[3].name(), ax[4].name(), w1.to()[0].name(),
          w2.to()[0].name()};
}

RealTable induce_impl(const Kernel& posterior, const FunctionTable& f, const FunctionTable& g,
                      const std::function<double(std::size_t z, const std::string& a, const std::string& b)>& d) {
  if (posterior.from().size() != 2 || posterior.to().size() != 2) {
    throw AxisError("induce_remote_distortion: posterior must map (u1~, z~) to (u1, z)");
  }
  require_valid(posterior, "posterior");
  if (f.domain().size() != 2 || g.domain().size() != 2) {
    throw AxisError("induce_remote_distortion: f over (u1, z) and g over (w1, z~) expected");
  }
  require_symbols(posterior.to()[0], f.domain()[0], "f.domain[0]");
  require_symbols(posterior.to()[1], f.domain()[1], "f.domain[1]");
  require_symbols(posterior.from()[1], g.domain()[1], "g.domain[1]");

  const std::size_t nut = posterior.from()[0].size();
  const std::size_t nzt = posterior.from()[1].size();
  const std::size_t nw = g.domain()[0].size();
  const std::size_t nu = posterior.to()[0].size();
  const std::size_t nz = posterior.to()[1].size();

  RealTable out{{posterior.from()[0], posterior.from()[1], g.domain()[0]}, Shape({nut, nzt, nw}), {}};
  out.values.assign(out.shape.volume(), 0.0);
  for (std::size_t ut = 0; ut < nut; ++ut) {
    for (std::size_t zt = 0; zt < nzt; ++zt) {
      const auto row = posterior.row(ut * nzt + zt);
      for (std::size_t w = 0; w < nw; ++w) {
        const std::string& estimate = g.at({w, zt});
        double total = 0.0;
        for (std::size_t u = 0; u < nu; ++u) {
          for (std::size_t z = 0; z < nz; ++z) {
            const double p = row[u * nz + z];
            if (p > 0.0) total += p * d(z, f.at({u, z}), estimate);
          }
        }
        out.values[(ut * nzt + zt) * nw + w] = total;
      }
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

DistortionTable::DistortionTable(std::vector<std::string> labels, std::vector<double> matrix)
    : labels_(std::move(labels)), matrix_(std::move(matrix)) {
  const std::size_t n = labels_.size();
  if (n == 0) throw Error("distortion: empty label set");
  if (matrix_.size() != n * n) throw Error("distortion: matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  Alphabet("distortion labels", labels_);  // rejects duplicates
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double v = matrix_[a * n + b];
      if (!std::isfinite(v) || v < 0.0) {
        throw Error("distortion: entry (" + labels_[a] + ", " + labels_[b] + ") must be finite and nonnegative");
      }
      if (a == b && v != 0.0) throw Error("distortion: d(" + labels_[a] + ", " + labels_[a] + ") must be 0");
      if (a != b && v == 0.0) {
        throw Error("distortion: d(" + labels_[a] + ", " + labels_[b] + ") is 0 for distinct labels");
      }
    }
  }
}

DistortionTable DistortionTable::hamming(std::vector<std::string> labels) {
  const std::size_t n = labels.size();
  std::vector<double> m(n * n, 1.0);
  for (std::size_t a = 0; a < n; ++a) m[a * n + a] = 0.0;
  return DistortionTable(std::move(labels), std::move(m));
}

DistortionTable DistortionTable::absolute(std::vector<std::string> labels) {
  const std::size_t n = labels.size();
  std::vector<double> m(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) m[a * n + b] = numeric_absolute_distance(labels[a], labels[b]);
  }
  return DistortionTable(std::move(labels), std::move(m));
}

std::size_t DistortionTable::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  throw AlphabetMismatch("distortion: no label '" + std::string(label) + "'");
}

bool DistortionTable::contains(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Strict: return "strict";
    case Verdict::Boundary: return "boundary";
    case Verdict::Violated: return "violated";
  }
  return "?";
}

Verdict classify_margin(double margin) {
  if (margin > kInfoTolerance) return Verdict::Strict;
  if (margin >= -kInfoTolerance) return Verdict::Boundary;
  return Verdict::Violated;
}

bool FeasibilityReport::feasible(bool allow_boundary) const {
  const bool rates = std::all_of(inequalities.begin(), inequalities.end(), [&](const InequalityRecord& r) {
    return r.verdict == Verdict::Strict || (allow_boundary && r.verdict == Verdict::Boundary);
  });
  return rates && distortion_ok;
}

void validate_spec(const SystemSpec& spec) {
  check_source_chain(spec.source_joint, spec.w1_kernel, spec.w2_kernel);
  const auto& ax = spec.source_joint.axes();
  require_valid(spec.x1_kernel, "x1_kernel");
  require_valid(spec.x2_kernel, "x2_kernel");
  if (spec.x1_kernel.from().size() != 1 || spec.x1_kernel.to().size() != 1) {
    throw AxisError("x1_kernel: must map w1 to one axis");
  }
  if (spec.x2_kernel.from().size() != 1 || spec.x2_kernel.to().size() != 1) {
    throw AxisError("x2_kernel: must map w2 to one axis");
  }
  require_same(spec.w1_kernel.to()[0], spec.x1_kernel.from()[0], "x1_kernel.from[0]");
  require_same(spec.w2_kernel.to()[0], spec.x2_kernel.from()[0], "x2_kernel.from[0]");
  require_same(spec.x1_kernel.to()[0], spec.channel.input1(), "channel input 1");
  require_same(spec.x2_kernel.to()[0], spec.channel.input2(), "channel input 2");

  if (spec.function.domain().size() != 2) throw AxisError("function: must be over (u1, u2)");
  require_symbols(ax[0], spec.function.domain()[0], "function.domain[0]");
  require_symbols(ax[1], spec.function.domain()[1], "function.domain[1]");
  if (spec.decoder.domain().size() != 3) throw AxisError("decoder: must be over (w1, w2, z)");
  require_symbols(spec.w1_kernel.to()[0], spec.decoder.domain()[0], "decoder.domain[0]");
  require_symbols(spec.w2_kernel.to()[0], spec.decoder.domain()[1], "decoder.domain[1]");
  require_symbols(ax[4], spec.decoder.domain()[2], "decoder.domain[2]");

  for (const auto& v : spec.function.values()) {
    if (!spec.distortion.contains(v)) throw AlphabetMismatch("function value '" + v + "' missing from distortion labels");
  }
  for (const auto& v : spec.decoder.values()) {
    if (!spec.distortion.contains(v)) throw AlphabetMismatch("decoder value '" + v + "' missing from distortion labels");
  }
  if (!(spec.target_d >= 0.0)) throw Error("target_d: must be nonnegative");
}

JointPMF assemble_joint(const SystemSpec& spec) {
  validate_spec(spec);
  return compose(spec.source_joint,
                 {spec.w1_kernel, spec.w2_kernel, spec.x1_kernel, spec.x2_kernel, spec.channel.law()});
}

FeasibilityReport check_feasibility(const SystemSpec& spec) {
  const JointPMF joint = assemble_joint(spec);
  const auto n = names_of(spec.source_joint, spec.w1_kernel, spec.w2_kernel);
  const std::string x1 = spec.x1_kernel.to()[0].name();
  const std::string x2 = spec.x2_kernel.to()[0].name();
  const std::string y = spec.channel.output().name();

  FeasibilityReport report;
  auto fill = [](InequalityRecord& r, std::string name, double lhs, double rhs) {
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.verdict = classify_margin(r.margin);
  };
  fill(report.inequalities[0], "I(U1,Z1;W1|W2,Z) < I(X1;Y|X2,W2,Z)",
       mutual_information(joint, {n.u1, n.z1}, {n.w1}, {n.w2, n.z}),
       mutual_information(joint, {x1}, {y}, {x2, n.w2, n.z}));
  fill(report.inequalities[1], "I(U2,Z2;W2|W1,Z) < I(X2;Y|X1,W1,Z)",
       mutual_information(joint, {n.u2, n.z2}, {n.w2}, {n.w1, n.z}),
       mutual_information(joint, {x2}, {y}, {x1, n.w1, n.z}));
  fill(report.inequalities[2], "I(U1,U2,Z1,Z2;W1,W2|Z) < I(X1,X2;Y|Z)",
       mutual_information(joint, {n.u1, n.u2, n.z1, n.z2}, {n.w1, n.w2}, {n.z}),
       mutual_information(joint, {x1, x2}, {y}, {n.z}));

  // E[d(f(U1,U2), decoder(W1,W2,Z))]
  const JointPMF m = marginalize(joint, {n.u1, n.u2, n.w1, n.w2, n.z});
  Index idx(5, 0);
  std::size_t flat = 0;
  double distortion = 0.0;
  do {
    const double p = m.mass()[flat++];
    if (p <= 0.0) continue;
    const std::string& g = spec.function.at({idx[0], idx[1]});
    const std::string& g_hat = spec.decoder.at({idx[2], idx[3], idx[4]});
    distortion += p * spec.distortion.at(g, g_hat);
  } while (m.shape().next(idx));

  report.achieved_distortion = distortion;
  report.target_d = spec.target_d;
  report.distortion_ok = distortion <= spec.target_d + kProbTolerance;
  return report;
}

RateBounds source_coding_region(const JointPMF& source_joint, const Kernel& w1_kernel, const Kernel& w2_kernel) {
  check_source_chain(source_joint, w1_kernel, w2_kernel);
  const JointPMF joint = compose(source_joint, {w1_kernel, w2_kernel});
  const auto n = names_of(source_joint, w1_kernel, w2_kernel);
  RateBounds b;
  b.r1 = mutual_information(joint, {n.u1, n.z1}, {n.w1}, {n.w2, n.z});
  b.r2 = mutual_information(joint, {n.u2, n.z2}, {n.w2}, {n.w1, n.z});
  b.sum = mutual_information(joint, {n.u1, n.u2, n.z1, n.z2}, {n.w1, n.w2}, {n.z});
  return b;
}

FunctionTable optimal_decoder(const JointPMF& source_joint, const Kernel& w1_kernel, const Kernel& w2_kernel,
                              const FunctionTable& function, const DistortionTable& distortion) {
  check_source_chain(source_joint, w1_kernel, w2_kernel);
  const JointPMF joint = compose(source_joint, {w1_kernel, w2_kernel});
  const auto n = names_of(source_joint, w1_kernel, w2_kernel);
  const JointPMF m = marginalize(joint, {n.w1, n.w2, n.z, n.u1, n.u2});
  const std::size_t inner = m.axes()[3].size() * m.axes()[4].size();
  const std::size_t outer = m.size() / inner;

  std::vector<std::string> values;
  values.reserve(outer);
  for (std::size_t o = 0; o < outer; ++o) {
    std::size_t best_label = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < distortion.size(); ++l) {
      double cost = 0.0;
      for (std::size_t i = 0; i < inner; ++i) {
        const double p = m.mass()[o * inner + i];
        if (p <= 0.0) continue;
        const std::size_t u1 = i / m.axes()[4].size();
        const std::size_t u2 = i % m.axes()[4].size();
        cost += p * distortion.at(distortion.index_of(function.at({u1, u2})), l);
      }
      if (cost < best_cost - 1e-15) {
        best_cost = cost;
        best_label = l;
      }
    }
    values.push_back(distortion.labels()[best_label]);
  }
  return FunctionTable({m.axes()[0], m.axes()[1], m.axes()[2]}, std::move(values));
}

RealTable induce_remote_distortion(const Kernel& posterior, const FunctionTable& f, const FunctionTable& g,
                                   const DistortionTable& d) {
  return induce_impl(posterior, f, g,
                     [&](std::size_t, const std::string& a, const std::string& b) { return d.at(a, b); });
}

RealTable induce_remote_distortion(const Kernel& posterior, const FunctionTable& f, const FunctionTable& g,
                                   const std::vector<DistortionTable>& d_per_z) {
  if (posterior.to().size() == 2 && d_per_z.size() != posterior.to()[1].size()) {
    throw AlphabetMismatch("induce_remote_distortion: need one distortion table per symbol of z");
  }
  return induce_impl(posterior, f, g,
                     [&](std::size_t z, const std::string& a, const std::string& b) { return d_per_z[z].at(a, b); });
}

std::pair<double, double> korner_marton_bounds(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw Error("korner_marton_bounds: q must lie in [0, 1]");
  const double h = binary_entropy(q);
  return {h, h};
}

}  // namespace fcmac
