#pragma once

// Characteristic graphs of a function with respect to a peer source,
// OR-products, minimum-entropy colorings and graph entropies.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fcmac/prob.hpp"

namespace fcmac {

using Edge = std::pair<std::size_t, std::size_t>;

// Simple undirected graph whose vertices are the symbols of an alphabet.
class CharGraph {
 public:
  // Edges are normalized to (min, max), sorted and deduplicated. Throws on
  // self-loops and out-of-range endpoints.
  CharGraph(Alphabet vertices, std::vector<Edge> edges);

  static CharGraph complete(Alphabet vertices);
  static CharGraph edgeless(Alphabet vertices);

  const Alphabet& vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool adjacent(std::size_t a, std::size_t b) const { return adj_[a * size() + b] != 0; }

  bool operator==(const CharGraph& other) const {
    return vertices_ == other.vertices_ && edges_ == other.edges_;
  }

 private:
  Alphabet vertices_;
  std::vector<Edge> edges_;
  std::vector<std::uint8_t> adj_;
};

// color_of[v] is the color of vertex v; colors are 0-based.
struct Coloring {
  std::vector<std::size_t> color_of;

  std::size_t num_colors() const;
};

bool is_proper(const CharGraph& g, const Coloring& c);

// Total function over the product of its domain alphabets, values as labels.
class FunctionTable {
 public:
  FunctionTable(std::vector<Alphabet> domain, std::vector<std::string> values);

  static FunctionTable from(std::vector<Alphabet> domain,
                            const std::function<std::string(std::span<const std::size_t>)>& fn);

  const std::vector<Alphabet>& domain() const noexcept { return domain_; }
  const Shape& shape() const noexcept { return shape_; }
  const std::vector<std::string>& values() const noexcept { return values_; }
  const std::string& at(std::span<const std::size_t> idx) const { return values_[shape_.ravel(idx)]; }
  const std::string& at(std::initializer_list<std::size_t> idx) const {
    return at(std::span<const std::size_t>(idx.begin(), idx.size()));
  }
  // Distinct values in first-appearance order.
  std::vector<std::string> range() const;

 private:
  std::vector<Alphabet> domain_;
  Shape shape_;
  std::vector<std::string> values_;
};

using DistanceFn = std::function<double(std::string_view, std::string_view)>;

// |a - b| for labels that parse as real numbers.
double numeric_absolute_distance(std::string_view a, std::string_view b);

// When two function values count as "different" for the characteristic
// graph: exact inequality, or a distance strictly above delta.
struct Fidelity {
  bool exact = true;
  double delta = 0.0;
  DistanceFn distance;

  static Fidelity exact_values() { return {}; }
  static Fidelity threshold(double delta, DistanceFn distance = numeric_absolute_distance);
};

// Graph on the alphabet of the joint's first axis: u and v are adjacent when
// some u2 with p(u,u2) p(v,u2) > 0 separates f(u,u2) from f(v,u2).
CharGraph characteristic_graph(const JointPMF& joint, const FunctionTable& f,
                               const Fidelity& fidelity = Fidelity::exact_values());

inline constexpr std::size_t kOrProductVertexCap = 4096;

// Vertices are n-tuples (labels "(a,b,...)"); adjacent iff adjacent in some
// coordinate.
CharGraph or_product(const CharGraph& g, int n, std::size_t vertex_cap = kOrProductVertexCap);

inline constexpr std::size_t kExactColoringCap = 12;

enum class ColoringMode { Exact, Greedy };

struct ColoringResult {
  Coloring coloring;
  double entropy_bits = 0.0;
};

// `marginal` is the vertex distribution; its flattened order must follow the
// vertex order (any axis layout with g.size() entries).
ColoringResult min_entropy_coloring(const CharGraph& g, const JointPMF& marginal,
                                    ColoringMode mode = ColoringMode::Exact);

struct ConditionalColoringResult {
  Coloring coloring;     // coloring of the n-fold OR-product
  double bits_per_symbol = 0.0;
};

// (1/n) min over proper colorings c of G^n of H(c(U1^n) | U2^n), with
// (U1^n, U2^n) the n-fold iid extension of `joint` (axes u1, u2 in order).
ConditionalColoringResult conditional_chromatic_entropy(const CharGraph& g, const JointPMF& joint, int n);

// Maximal stable sets, each sorted ascending; the family is sorted
// lexicographically.
std::vector<std::vector<std::size_t>> maximal_stable_sets(const CharGraph& g);

struct GraphEntropyOptions {
  int restarts = 16;
  int max_iterations = 10000;
  double tolerance = 1e-8;
  std::uint64_t seed = 0x5eed;
};

struct GraphEntropyResult {
  double bits = 0.0;
  bool converged = false;  // false: best incumbent returned, treat as a warning
  std::vector<std::vector<std::size_t>> stable_sets;
  std::vector<double> kernel;  // p(set | u1), row-major |U1| x |sets|
  double chromatic_upper_bound = 0.0;
};

// min I(W; U1 | U2) over W <-> U1 <-> U2 with U1 in W and W ranging over
// the maximal stable sets, by alternating minimization with restarts. The
// result never exceeds the n = 1 conditional chromatic entropy.
GraphEntropyResult conditional_graph_entropy(const CharGraph& g, const JointPMF& joint,
                                             const GraphEntropyOptions& options = {});

struct ZigzagResult {
  bool holds = true;
  // (x1, y1), (x2, y2) in the support with both cross terms outside it.
  std::optional<std::array<std::pair<std::size_t, std::size_t>, 2>> witness;
};

ZigzagResult zigzag_check(const JointPMF& joint);

}  // namespace fcmac
