#include "fcmac/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "fcmac/error.hpp"

namespace fcmac {

namespace {

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

void require_two_axes(const JointPMF& joint, const char* what) {
  if (joint.rank() != 2) throw AxisError(std::string(what) + ": expected a joint over exactly two axes");
}

void require_vertex_axis(const CharGraph& g, const JointPMF& joint, const char* what) {
  require_two_axes(joint, what);
  if (!joint.axes()[0].same_symbols(g.vertices())) {
    throw AlphabetMismatch(std::string(what) + ": first axis of the joint does not match the graph's vertices");
  }
}

// Row-major |U1| x |U2| copy of a two-axis pmf.
std::vector<std::vector<double>> as_matrix(const JointPMF& joint) {
  const std::size_t rows = joint.axes()[0].size();
  const std::size_t cols = joint.axes()[1].size();
  std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m[i][j] = joint.mass()[i * cols + j];
  }
  return m;
}

// Exhaustive search over partitions of the vertices into stable sets,
// minimizing sum_columns sum_classes phi(class mass in column). Vertices
// are assigned in index order, classes as a restricted growth string, so
// the first optimum reached is the lexicographically smallest one.
class PartitionSearch {
 public:
  PartitionSearch(const CharGraph& g, std::vector<std::vector<double>> weights, double initial_bound)
      : g_(g), w_(std::move(weights)), n_(g.size()), cols_(w_.empty() ? 0 : w_[0].size()) {
    neighbors_.assign(n_, 0);
    for (const auto& [a, b] : g.edges()) {
      neighbors_[a] |= std::uint64_t{1} << b;
      neighbors_[b] |= std::uint64_t{1} << a;
    }
    remaining_.assign(n_ + 1, std::vector<double>(cols_, 0.0));
    for (std::size_t v = n_; v-- > 0;) {
      for (std::size_t c = 0; c < cols_; ++c) remaining_[v][c] = remaining_[v + 1][c] + w_[v][c];
    }
    best_ = initial_bound;
    rgs_.assign(n_, 0);
  }

  void run() {
    if (n_ == 0) {
      best_ = 0.0;
      found_ = true;
      return;
    }
    dfs(0);
  }

  bool found() const { return found_; }
  double best() const { return best_; }
  const std::vector<std::size_t>& best_assignment() const { return best_rgs_; }

 private:
  static constexpr double kEps = 1e-12;

  double current_value() const {
    double value = 0.0;
    for (const auto& cls : mass_) {
      for (double m : cls) value += plogp(m);
    }
    return value;
  }

  // Placing all remaining column mass on a single class (existing or new)
  // minimizes the concave objective over the relaxed problem.
  double lower_bound(std::size_t v) const {
    double bound = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) {
      const double r = remaining_[v][c];
      double column = 0.0;
      double best_add = plogp(r);
      for (const auto& cls : mass_) {
        column += plogp(cls[c]);
        best_add = std::min(best_add, plogp(cls[c] + r) - plogp(cls[c]));
      }
      bound += column + best_add;
    }
    return bound;
  }

  void dfs(std::size_t v) {
    if (v == n_) {
      const double value = current_value();
      if (value < best_ - kEps) {
        best_ = value;
        best_rgs_ = rgs_;
        found_ = true;
      }
      return;
    }
    if (lower_bound(v) >= best_ - kEps) return;

    for (std::size_t k = 0; k < members_.size(); ++k) {
      if (members_[k] & neighbors_[v]) continue;
      place(v, k);
      dfs(v + 1);
      unplace(v, k);
    }
    members_.push_back(0);
    mass_.emplace_back(cols_, 0.0);
    place(v, members_.size() - 1);
    dfs(v + 1);
    members_.pop_back();
    mass_.pop_back();
  }

  void place(std::size_t v, std::size_t k) {
    members_[k] |= std::uint64_t{1} << v;
    for (std::size_t c = 0; c < cols_; ++c) mass_[k][c] += w_[v][c];
    rgs_[v] = k;
  }

  void unplace(std::size_t v, std::size_t k) {
    members_[k] &= ~(std::uint64_t{1} << v);
    for (std::size_t c = 0; c < cols_; ++c) mass_[k][c] -= w_[v][c];
  }

  const CharGraph& g_;
  std::vector<std::vector<double>> w_;
  std::size_t n_;
  std::size_t cols_;
  std::vector<std::uint64_t> neighbors_;
  std::vector<std::vector<double>> remaining_;
  std::vector<std::uint64_t> members_;
  std::vector<std::vector<double>> mass_;
  std::vector<std::size_t> rgs_;
  std::vector<std::size_t> best_rgs_;
  double best_ = std::numeric_limits<double>::infinity();
  bool found_ = false;
};

Coloring greedy_coloring(const CharGraph& g, std::span<const double> weight) {
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weight[a] > weight[b]; });

  constexpr std::size_t kUncolored = std::numeric_limits<std::size_t>::max();
  Coloring c{std::vector<std::size_t>(g.size(), kUncolored)};
  for (std::size_t v : order) {
    std::vector<bool> used(g.size() + 1, false);
    for (std::size_t u = 0; u < g.size(); ++u) {
      if (c.color_of[u] != kUncolored && g.adjacent(u, v)) used[c.color_of[u]] = true;
    }
    std::size_t color = 0;
    while (used[color]) ++color;
    c.color_of[v] = color;
  }
  return c;
}

double coloring_entropy(const Coloring& c, std::span<const double> weight) {
  std::vector<double> mass(c.num_colors(), 0.0);
  for (std::size_t v = 0; v < c.color_of.size(); ++v) mass[c.color_of[v]] += weight[v];
  return entropy_bits(mass);
}

double objective_bits(const std::vector<std::vector<double>>& joint, const std::vector<double>& pu2,
                      const std::vector<std::vector<std::size_t>>& allowed, const std::vector<std::vector<double>>& q_kernel,
                      std::size_t sets) {
  const std::size_t n1 = joint.size();
  const std::size_t n2 = pu2.size();
  // p(s | u2)
  std::vector<std::vector<double>> ps(sets, std::vector<double>(n2, 0.0));
  for (std::size_t u = 0; u < n1; ++u) {
    for (std::size_t s : allowed[u]) {
      for (std::size_t j = 0; j < n2; ++j) ps[s][j] += joint[u][j] * q_kernel[u][s];
    }
  }
  double value = 0.0;
  for (std::size_t u = 0; u < n1; ++u) {
    for (std::size_t s : allowed[u]) {
      const double k = q_kernel[u][s];
      if (k <= 0.0) continue;
      for (std::size_t j = 0; j < n2; ++j) {
        if (joint[u][j] <= 0.0) continue;
        value += joint[u][j] * k * std::log2(k * pu2[j] / ps[s][j]);
      }
    }
  }
  return value;
}

}  // namespace

// ---------------------------------------------------------------------------

CharGraph::CharGraph(Alphabet vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), adj_(vertices_.size() * vertices_.size(), 0) {
  const std::size_t n = vertices_.size();
  for (auto& [a, b] : edges) {
    if (a >= n || b >= n) throw Error("CharGraph: edge endpoint out of range");
    if (a == b) throw Error("CharGraph: self-loop at vertex '" + vertices_[a] + "'");
    if (a > b) std::swap(a, b);
    adj_[a * n + b] = adj_[b * n + a] = 1;
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
}

CharGraph CharGraph::complete(Alphabet vertices) {
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    for (std::size_t b = a + 1; b < vertices.size(); ++b) edges.emplace_back(a, b);
  }
  return CharGraph(std::move(vertices), std::move(edges));
}

CharGraph CharGraph::edgeless(Alphabet vertices) { return CharGraph(std::move(vertices), {}); }

std::size_t Coloring::num_colors() const {
  if (color_of.empty()) return 0;
  return *std::max_element(color_of.begin(), color_of.end()) + 1;
}

bool is_proper(const CharGraph& g, const Coloring& c) {
  if (c.color_of.size() != g.size()) return false;
  return std::none_of(g.edges().begin(), g.edges().end(),
                      [&](const Edge& e) { return c.color_of[e.first] == c.color_of[e.second]; });
}

// ---------------------------------------------------------------------------

FunctionTable::FunctionTable(std::vector<Alphabet> domain, std::vector<std::string> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  std::vector<std::size_t> dims;
  for (const auto& a : domain_) dims.push_back(a.size());
  shape_ = Shape(std::move(dims));
  if (values_.size() != shape_.volume()) {
    throw Error("FunctionTable: " + std::to_string(values_.size()) + " values for a domain of " +
                std::to_string(shape_.volume()) + " points");
  }
}

FunctionTable FunctionTable::from(std::vector<Alphabet> domain,
                                  const std::function<std::string(std::span<const std::size_t>)>& fn) {
  std::vector<std::size_t> dims;
  for (const auto& a : domain) dims.push_back(a.size());
  const Shape shape(dims);
  std::vector<std::string> values;
  values.reserve(shape.volume());
  Index idx(shape.rank(), 0);
  do {
    values.push_back(fn(idx));
  } while (shape.next(idx));
  return FunctionTable(std::move(domain), std::move(values));
}

std::vector<std::string> FunctionTable::range() const {
  std::vector<std::string> out;
  for (const auto& v : values_) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

double numeric_absolute_distance(std::string_view a, std::string_view b) {
  auto parse = [](std::string_view s) {
    const std::string str(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(str, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != str.size() || str.empty()) throw Error("label '" + str + "' is not a number");
    return v;
  };
  return std::abs(parse(a) - parse(b));
}

Fidelity Fidelity::threshold(double delta, DistanceFn distance) {
  if (delta < 0.0) throw Error("Fidelity::threshold: delta must be nonnegative");
  return Fidelity{false, delta, std::move(distance)};
}

CharGraph characteristic_graph(const JointPMF& joint, const FunctionTable& f, const Fidelity& fidelity) {
  require_two_axes(joint, "characteristic_graph");
  if (f.domain().size() != 2 || !f.domain()[0].same_symbols(joint.axes()[0]) ||
      !f.domain()[1].same_symbols(joint.axes()[1])) {
    throw AlphabetMismatch("characteristic_graph: function domain does not match the joint's alphabets");
  }
  const auto p = as_matrix(joint);
  const std::size_t n1 = p.size();
  const std::size_t n2 = joint.axes()[1].size();
  auto differ = [&](const std::string& a, const std::string& b) {
    if (fidelity.exact) return a != b;
    return fidelity.distance(a, b) > fidelity.delta;
  };
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < n1; ++a) {
    for (std::size_t b = a + 1; b < n1; ++b) {
      for (std::size_t u2 = 0; u2 < n2; ++u2) {
        if (p[a][u2] > 0.0 && p[b][u2] > 0.0 && differ(f.at({a, u2}), f.at({b, u2}))) {
          edges.emplace_back(a, b);
          break;
        }
      }
    }
  }
  return CharGraph(joint.axes()[0], std::move(edges));
}

CharGraph or_product(const CharGraph& g, int n, std::size_t vertex_cap) {
  if (n < 1) throw Error("or_product: block length must be at least 1");
  if (n == 1) return g;
  double count = std::pow(double(g.size()), n);
  if (count > double(vertex_cap)) {
    throw SizeCapError("or_product: " + std::to_string(std::size_t(count)) + " vertices exceeds cap " +
                       std::to_string(vertex_cap));
  }
  const Shape shape(std::vector<std::size_t>(std::size_t(n), g.size()));
  std::vector<std::string> labels;
  std::vector<Index> tuples;
  Index idx(shape.rank(), 0);
  do {
    std::string label = "(";
    for (std::size_t k = 0; k < idx.size(); ++k) label += (k ? "," : "") + g.vertices()[idx[k]];
    labels.push_back(label + ")");
    tuples.push_back(idx);
  } while (shape.next(idx));

  std::vector<Edge> edges;
  for (std::size_t a = 0; a < tuples.size(); ++a) {
    for (std::size_t b = a + 1; b < tuples.size(); ++b) {
      for (std::size_t k = 0; k < std::size_t(n); ++k) {
        if (g.adjacent(tuples[a][k], tuples[b][k])) {
          edges.emplace_back(a, b);
          break;
        }
      }
    }
  }
  return CharGraph(Alphabet(g.vertices().name() + "^" + std::to_string(n), std::move(labels)), std::move(edges));
}

ColoringResult min_entropy_coloring(const CharGraph& g, const JointPMF& marginal, ColoringMode mode) {
  if (marginal.size() != g.size()) {
    throw AlphabetMismatch("min_entropy_coloring: marginal has " + std::to_string(marginal.size()) +
                           " entries for " + std::to_string(g.size()) + " vertices");
  }
  const auto weight = marginal.mass();
  Coloring greedy = greedy_coloring(g, weight);
  const double greedy_bits = coloring_entropy(greedy, weight);
  if (mode == ColoringMode::Greedy) return {std::move(greedy), greedy_bits};

  if (g.size() > kExactColoringCap) {
    throw SizeCapError("min_entropy_coloring: exact search limited to " + std::to_string(kExactColoringCap) +
                       " vertices, got " + std::to_string(g.size()));
  }
  std::vector<std::vector<double>> w(g.size(), std::vector<double>(1));
  for (std::size_t v = 0; v < g.size(); ++v) w[v][0] = weight[v];
  PartitionSearch search(g, std::move(w), greedy_bits + 1e-9);
  search.run();
  if (!search.found()) return {std::move(greedy), greedy_bits};
  return {Coloring{search.best_assignment()}, std::max(0.0, search.best())};
}

ConditionalColoringResult conditional_chromatic_entropy(const CharGraph& g, const JointPMF& joint, int n) {
  require_vertex_axis(g, joint, "conditional_chromatic_entropy");
  const CharGraph gn = or_product(g, n);
  if (gn.size() > kExactColoringCap) {
    throw SizeCapError("conditional_chromatic_entropy: OR-product has " + std::to_string(gn.size()) +
                       " vertices, exact search limited to " + std::to_string(kExactColoringCap));
  }
  const auto p = as_matrix(joint);
  const std::size_t n1 = p.size();
  const std::size_t n2 = joint.axes()[1].size();
  const Shape rows(std::vector<std::size_t>(std::size_t(n), n1));
  const Shape cols(std::vector<std::size_t>(std::size_t(n), n2));

  std::vector<std::vector<double>> w(rows.volume(), std::vector<double>(cols.volume(), 0.0));
  std::vector<double> column_mass(cols.volume(), 0.0);
  for (std::size_t r = 0; r < rows.volume(); ++r) {
    const Index a = rows.unravel(r);
    for (std::size_t c = 0; c < cols.volume(); ++c) {
      const Index b = cols.unravel(c);
      double m = 1.0;
      for (std::size_t k = 0; k < std::size_t(n); ++k) m *= p[a[k]][b[k]];
      w[r][c] = m;
      column_mass[c] += m;
    }
  }
  double column_entropy = 0.0;
  for (double m : column_mass) column_entropy += plogp(m);

  PartitionSearch search(gn, std::move(w), std::numeric_limits<double>::infinity());
  search.run();
  const double bits = std::max(0.0, (search.best() - column_entropy) / double(n));
  return {Coloring{search.best_assignment()}, bits};
}

std::vector<std::vector<std::size_t>> maximal_stable_sets(const CharGraph& g) {
  constexpr std::size_t kCap = 20;
  const std::size_t n = g.size();
  if (n > kCap) throw SizeCapError("maximal_stable_sets: limited to " + std::to_string(kCap) + " vertices");
  std::vector<std::uint32_t> nbr(n, 0);
  for (const auto& [a, b] : g.edges()) {
    nbr[a] |= 1u << b;
    nbr[b] |= 1u << a;
  }
  std::vector<std::vector<std::size_t>> sets;
  const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
  for (std::uint32_t s = 1; s <= full && s != 0; ++s) {
    bool stable = true;
    for (std::size_t v = 0; v < n && stable; ++v) {
      if ((s >> v & 1u) && (nbr[v] & s)) stable = false;
    }
    if (!stable) continue;
    bool maximal = true;
    for (std::size_t v = 0; v < n && maximal; ++v) {
      if (!(s >> v & 1u) && !(nbr[v] & s)) maximal = false;
    }
    if (!maximal) continue;
    std::vector<std::size_t> members;
    for (std::size_t v = 0; v < n; ++v) {
      if (s >> v & 1u) members.push_back(v);
    }
    sets.push_back(std::move(members));
  }
  std::sort(sets.begin(), sets.end());
  return sets;
}

GraphEntropyResult conditional_graph_entropy(const CharGraph& g, const JointPMF& joint,
                                             const GraphEntropyOptions& options) {
  require_vertex_axis(g, joint, "conditional_graph_entropy");
  if (g.size() > kExactColoringCap) {
    throw SizeCapError("conditional_graph_entropy: limited to " + std::to_string(kExactColoringCap) + " vertices");
  }
  const auto p = as_matrix(joint);
  const std::size_t n1 = p.size();
  const std::size_t n2 = joint.axes()[1].size();
  std::vector<double> pu1(n1, 0.0), pu2(n2, 0.0);
  for (std::size_t u = 0; u < n1; ++u) {
    for (std::size_t j = 0; j < n2; ++j) {
      pu1[u] += p[u][j];
      pu2[j] += p[u][j];
    }
  }

  GraphEntropyResult result;
  result.stable_sets = maximal_stable_sets(g);
  const std::size_t sets = result.stable_sets.size();
  std::vector<std::vector<std::size_t>> allowed(n1);
  for (std::size_t s = 0; s < sets; ++s) {
    for (std::size_t v : result.stable_sets[s]) allowed[v].push_back(s);
  }

  using KernelRows = std::vector<std::vector<double>>;
  auto evaluate = [&](const KernelRows& q) { return objective_bits(p, pu2, allowed, q, sets); };

  // One alternating-minimization run; returns (value, converged).
  auto descend = [&](KernelRows& q) {
    double value = evaluate(q);
    std::vector<std::vector<double>> ps(sets, std::vector<double>(n2));
    for (int it = 0; it < options.max_iterations; ++it) {
      for (auto& row : ps) std::fill(row.begin(), row.end(), 0.0);
      for (std::size_t u = 0; u < n1; ++u) {
        for (std::size_t s : allowed[u]) {
          for (std::size_t j = 0; j < n2; ++j) ps[s][j] += p[u][j] * q[u][s];
        }
      }
      for (std::size_t u = 0; u < n1; ++u) {
        if (pu1[u] <= 0.0) continue;
        std::vector<double> expo(allowed[u].size(), 0.0);
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < allowed[u].size(); ++k) {
          const std::size_t s = allowed[u][k];
          double e = 0.0;
          for (std::size_t j = 0; j < n2; ++j) {
            if (p[u][j] <= 0.0) continue;
            const double cond = ps[s][j] / pu2[j];
            e += cond > 0.0 ? (p[u][j] / pu1[u]) * std::log(cond) : -std::numeric_limits<double>::infinity();
          }
          expo[k] = e;
          top = std::max(top, e);
        }
        if (!std::isfinite(top)) continue;
        double total = 0.0;
        for (double& e : expo) total += (e = std::exp(e - top));
        for (std::size_t k = 0; k < allowed[u].size(); ++k) q[u][allowed[u][k]] = expo[k] / total;
      }
      const double next = evaluate(q);
      const double gain = value - next;
      value = std::min(value, next);
      if (gain < options.tolerance) return std::pair{value, true};
    }
    return std::pair{value, false};
  };

  double best = std::numeric_limits<double>::infinity();
  KernelRows best_kernel;

  // Incumbent from the optimal n = 1 conditional coloring: each color class
  // sits inside some maximal stable set.
  const auto chromatic = conditional_chromatic_entropy(g, joint, 1);
  result.chromatic_upper_bound = chromatic.bits_per_symbol;
  {
    KernelRows q(n1, std::vector<double>(sets, 0.0));
    const std::size_t colors = chromatic.coloring.num_colors();
    for (std::size_t c = 0; c < colors; ++c) {
      std::vector<std::size_t> cls;
      for (std::size_t v = 0; v < n1; ++v) {
        if (chromatic.coloring.color_of[v] == c) cls.push_back(v);
      }
      for (std::size_t s = 0; s < sets; ++s) {
        if (std::includes(result.stable_sets[s].begin(), result.stable_sets[s].end(), cls.begin(), cls.end())) {
          for (std::size_t v : cls) q[v][s] = 1.0;
          break;
        }
      }
    }
    const auto [value, converged] = descend(q);
    result.converged = converged;
    best = value;
    best_kernel = q;
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (int r = 0; r < options.restarts; ++r) {
    KernelRows q(n1, std::vector<double>(sets, 0.0));
    for (std::size_t u = 0; u < n1; ++u) {
      double total = 0.0;
      for (std::size_t s : allowed[u]) total += (q[u][s] = r == 0 ? 1.0 : unit(rng));
      for (std::size_t s : allowed[u]) q[u][s] /= total;
    }
    const auto [value, converged] = descend(q);
    result.converged = result.converged || converged;
    if (value < best) {
      best = value;
      best_kernel = std::move(q);
    }
  }

  result.bits = std::clamp(best, 0.0, result.chromatic_upper_bound);
  result.kernel.reserve(n1 * sets);
  for (const auto& row : best_kernel) result.kernel.insert(result.kernel.end(), row.begin(), row.end());
  return result;
}

ZigzagResult zigzag_check(const JointPMF& joint) {
  require_two_axes(joint, "zigzag_check");
  const auto p = as_matrix(joint);
  std::vector<std::pair<std::size_t, std::size_t>> support;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p[i].size(); ++j) {
      if (p[i][j] > 0.0) support.emplace_back(i, j);
    }
  }
  for (std::size_t a = 0; a < support.size(); ++a) {
    for (std::size_t b = a + 1; b < support.size(); ++b) {
      const auto [x1, y1] = support[a];
      const auto [x2, y2] = support[b];
      if (p[x1][y2] <= 0.0 && p[x2][y1] <= 0.0) {
        return {false, std::array{support[a], support[b]}};
      }
    }
  }
  return {};
}

}  // namespace fcmac
