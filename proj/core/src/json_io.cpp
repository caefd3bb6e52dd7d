#include "fcmac/json_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fcmac/error.hpp"

namespace fcmac {

namespace {

std::string child(const std::string& path, std::string_view key) { return path + "/" + std::string(key); }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(child(path, key), "missing field");
  return *it;
}

const Json& array_at(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

double parse_decimal(std::string_view s, const std::string& path) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw SchemaError(path, "not a number: '" + std::string(s) + "'");
  return v;
}

double number(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (auto slash = s.find('/'); slash != std::string::npos) {
      const double num = parse_decimal(std::string_view(s).substr(0, slash), path);
      const double den = parse_decimal(std::string_view(s).substr(slash + 1), path);
      if (den == 0.0) throw SchemaError(path, "zero denominator");
      return num / den;
    }
    return parse_decimal(s, path);
  }
  throw SchemaError(path, "expected a number or a fraction string");
}

std::size_t count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw SchemaError(path, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

std::string label(const Json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number()) return j.dump();
  throw SchemaError(path, "expected a string label");
}

template <typename T, typename Read>
void read_nested(const Json& j, const std::vector<std::size_t>& dims, std::size_t depth, const std::string& path,
                 std::vector<T>& out, Read&& read) {
  if (depth == dims.size()) {
    out.push_back(read(j, path));
    return;
  }
  if (!j.is_array()) throw SchemaError(path, "expected a nested array of depth " + std::to_string(dims.size()));
  if (j.size() != dims[depth]) {
    throw SchemaError(path, "expected " + std::to_string(dims[depth]) + " entries, found " + std::to_string(j.size()));
  }
  for (std::size_t i = 0; i < j.size(); ++i) read_nested(j[i], dims, depth + 1, child(path, i), out, read);
}

template <typename T, typename Write>
Json write_nested(std::span<const T> flat, const std::vector<std::size_t>& dims, std::size_t depth, std::size_t& pos,
                  Write&& write) {
  if (depth == dims.size()) return write(flat[pos++]);
  Json arr = Json::array();
  for (std::size_t i = 0; i < dims[depth]; ++i) arr.push_back(write_nested(flat, dims, depth + 1, pos, write));
  return arr;
}

std::vector<Alphabet> alphabets(const Json& j, const std::string& path) {
  array_at(j, path);
  std::vector<Alphabet> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(alphabet_from_json(j[i], child(path, i)));
  return out;
}

Json alphabets_json(const std::vector<Alphabet>& axes) {
  Json arr = Json::array();
  for (const auto& a : axes) arr.push_back(to_json(a));
  return arr;
}

std::vector<std::size_t> dims_of(const std::vector<Alphabet>& axes) {
  std::vector<std::size_t> dims;
  for (const auto& a : axes) dims.push_back(a.size());
  return dims;
}

// Re-raises a library error thrown while building an object as a schema
// error located at `path`.
template <typename F>
auto at_path(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
}

template <class T>
T validated(T value, const std::string& path) {
  if (const auto report = validate(value); !report.ok()) {
    throw InvalidDistribution((path.empty() ? std::string("/") : path) + ": " + report.summary());
  }
  return value;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
}

Alphabet alphabet_from_json(const Json& j, const std::string& path) {
  const Json& name = field(j, "name", path);
  if (!name.is_string()) throw SchemaError(child(path, "name"), "expected a string");
  const Json& syms = array_at(field(j, "symbols", path), child(path, "symbols"));
  std::vector<std::string> symbols;
  for (std::size_t i = 0; i < syms.size(); ++i) symbols.push_back(label(syms[i], child(child(path, "symbols"), i)));
  return at_path(path, [&] { return Alphabet(name.get<std::string>(), std::move(symbols)); });
}

Json to_json(const Alphabet& a) { return Json{{"name", a.name()}, {"symbols", a.symbols()}}; }

JointPMF pmf_from_json(const Json& j, const std::string& path) {
  auto axes = alphabets(field(j, "axes", path), child(path, "axes"));
  if (axes.empty()) throw SchemaError(child(path, "axes"), "needs at least one axis");
  std::vector<double> mass;
  read_nested(field(j, "mass", path), dims_of(axes), 0, child(path, "mass"), mass, number);
  return validated(at_path(path, [&] { return JointPMF(std::move(axes), std::move(mass)); }), path);
}

Json to_json(const JointPMF& p) {
  std::size_t pos = 0;
  return Json{{"axes", alphabets_json(p.axes())},
              {"mass", write_nested(p.mass(), p.shape().dims(), 0, pos, [](double v) { return Json(v); })}};
}

Kernel kernel_from_json(const Json& j, const std::string& path) {
  auto from = alphabets(field(j, "from", path), child(path, "from"));
  auto to = alphabets(field(j, "to", path), child(path, "to"));
  const Shape fs(dims_of(from)), ts(dims_of(to));
  std::vector<double> data;
  read_nested(field(j, "rows", path), {fs.volume(), ts.volume()}, 0, child(path, "rows"), data, number);
  return validated(at_path(path, [&] { return Kernel(std::move(from), std::move(to), std::move(data)); }), path);
}

Json to_json(const Kernel& k) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < k.rows(); ++r) {
    const auto row = k.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return Json{{"from", alphabets_json(k.from())}, {"to", alphabets_json(k.to())}, {"rows", rows}};
}

DiscreteMAC mac_from_json(const Json& j, const std::string& path) {
  Kernel law = kernel_from_json(j, path);
  return at_path(path, [&] { return DiscreteMAC(std::move(law)); });
}

CharGraph graph_from_json(const Json& j, const std::string& path) {
  std::string name = "u";
  if (j.is_object() && j.contains("name")) name = label(j["name"], child(path, "name"));
  const Json& verts = array_at(field(j, "vertices", path), child(path, "vertices"));
  std::vector<std::string> symbols;
  for (std::size_t i = 0; i < verts.size(); ++i) symbols.push_back(label(verts[i], child(child(path, "vertices"), i)));
  Alphabet vertices = at_path(child(path, "vertices"), [&] { return Alphabet(name, std::move(symbols)); });

  const std::string epath = child(path, "edges");
  const Json& edges = array_at(field(j, "edges", path), epath);
  std::vector<Edge> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string p = child(epath, i);
    if (!edges[i].is_array() || edges[i].size() != 2) throw SchemaError(p, "expected a pair of vertex labels");
    auto end = [&](std::size_t k) {
      const auto v = vertices.find(label(edges[i][k], child(p, k)));
      if (!v) throw SchemaError(child(p, k), "unknown vertex");
      return *v;
    };
    out.emplace_back(end(0), end(1));
  }
  return at_path(epath, [&] { return CharGraph(std::move(vertices), std::move(out)); });
}

Json to_json(const CharGraph& g) {
  Json edges = Json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back(Json::array({g.vertices()[a], g.vertices()[b]}));
  return Json{{"name", g.vertices().name()}, {"vertices", g.vertices().symbols()}, {"edges", edges}};
}

Coloring coloring_from_json(const Json& j, const CharGraph& g, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object mapping vertex to color");
  std::vector<std::string> names;
  Coloring c;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& vertex = g.vertices()[v];
    auto it = j.find(vertex);
    if (it == j.end()) throw SchemaError(child(path, vertex), "vertex has no color");
    const std::string color = label(*it, child(path, vertex));
    auto pos = std::find(names.begin(), names.end(), color);
    if (pos == names.end()) pos = names.insert(names.end(), color);
    c.color_of.push_back(std::size_t(pos - names.begin()));
  }
  for (const auto& [key, value] : j.items()) {
    if (!g.vertices().find(key)) throw SchemaError(child(path, key), "not a vertex of the graph");
  }
  return c;
}

Json coloring_to_json(const CharGraph& g, const Coloring& c) {
  Json out = Json::object();
  for (std::size_t v = 0; v < g.size(); ++v) out[g.vertices()[v]] = std::to_string(c.color_of.at(v));
  return out;
}

FunctionTable function_from_json(const Json& j, const std::string& path) {
  auto axes = alphabets(field(j, "axes", path), child(path, "axes"));
  std::vector<std::string> values;
  read_nested(field(j, "values", path), dims_of(axes), 0, child(path, "values"), values, label);
  return at_path(path, [&] { return FunctionTable(std::move(axes), std::move(values)); });
}

Json to_json(const FunctionTable& f) {
  std::size_t pos = 0;
  return Json{{"axes", alphabets_json(f.domain())},
              {"values", write_nested(std::span<const std::string>(f.values()), f.shape().dims(), 0, pos,
                                      [](const std::string& v) { return Json(v); })}};
}

DistortionTable distortion_from_json(const Json& j, const std::string& path) {
  const Json& labels_json = array_at(field(j, "labels", path), child(path, "labels"));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < labels_json.size(); ++i) labels.push_back(label(labels_json[i], child(child(path, "labels"), i)));
  std::vector<double> matrix;
  read_nested(field(j, "matrix", path), {labels.size(), labels.size()}, 0, child(path, "matrix"), matrix, number);
  return at_path(path, [&] { return DistortionTable(std::move(labels), std::move(matrix)); });
}

Json to_json(const DistortionTable& d) {
  Json rows = Json::array();
  for (std::size_t a = 0; a < d.size(); ++a) {
    Json row = Json::array();
    for (std::size_t b = 0; b < d.size(); ++b) row.push_back(d.at(a, b));
    rows.push_back(row);
  }
  return Json{{"labels", d.labels()}, {"matrix", rows}};
}

SystemSpec spec_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  const Json& target = field(j, "target_d", path);
  const double target_d = number(target, child(path, "target_d"));
  if (!(target_d >= 0.0)) throw SchemaError(child(path, "target_d"), "must be nonnegative");
  SystemSpec spec{pmf_from_json(field(j, "source_joint", path), child(path, "source_joint")),
                  kernel_from_json(field(j, "w1_kernel", path), child(path, "w1_kernel")),
                  kernel_from_json(field(j, "w2_kernel", path), child(path, "w2_kernel")),
                  kernel_from_json(field(j, "x1_kernel", path), child(path, "x1_kernel")),
                  kernel_from_json(field(j, "x2_kernel", path), child(path, "x2_kernel")),
                  mac_from_json(field(j, "channel", path), child(path, "channel")),
                  function_from_json(field(j, "function", path), child(path, "function")),
                  function_from_json(field(j, "decoder", path), child(path, "decoder")),
                  distortion_from_json(field(j, "distortion", path), child(path, "distortion")),
                  target_d};
  return spec;
}

Json to_json(const SystemSpec& s) {
  return Json{{"source_joint", to_json(s.source_joint)}, {"w1_kernel", to_json(s.w1_kernel)},
              {"w2_kernel", to_json(s.w2_kernel)},       {"x1_kernel", to_json(s.x1_kernel)},
              {"x2_kernel", to_json(s.x2_kernel)},       {"channel", to_json(s.channel.law())},
              {"function", to_json(s.function)},         {"decoder", to_json(s.decoder)},
              {"distortion", to_json(s.distortion)},     {"target_d", s.target_d}};
}

Json to_json(const FeasibilityReport& r) {
  Json ineqs = Json::array();
  for (const auto& i : r.inequalities) {
    ineqs.push_back(Json{{"name", i.name},
                         {"lhs_bits", i.lhs},
                         {"rhs_bits", i.rhs},
                         {"margin_bits", i.margin},
                         {"verdict", to_string(i.verdict)}});
  }
  return Json{{"inequalities", ineqs},
              {"achieved_distortion", r.achieved_distortion},
              {"target_d", r.target_d},
              {"distortion_ok", r.distortion_ok}};
}

SchemeConfig config_from_json(const Json& j, const std::string& path) {
  SchemeConfig c;
  const Json& id = field(j, "experiment", path);
  if (!id.is_string()) throw SchemaError(child(path, "experiment"), "expected a string");
  c.experiment = id.get<std::string>();
  static const std::vector<std::string> known{"experiment", "rho",   "power", "sigma2",  "input_rho", "target_d",
                                              "delta",      "alpha", "cells", "samples", "seed"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw SchemaError(child(path, key), "unknown field");
  }
  auto real = [&](const char* key, std::optional<double>& out) {
    if (j.contains(key)) out = number(j[key], child(path, key));
  };
  real("rho", c.rho);
  real("power", c.power);
  real("sigma2", c.sigma2);
  real("input_rho", c.input_rho);
  real("target_d", c.target_d);
  real("delta", c.delta);
  real("alpha", c.alpha);
  if (j.contains("cells")) c.cells = count(j["cells"], child(path, "cells"));
  if (j.contains("samples")) c.samples = count(j["samples"], child(path, "samples"));
  if (j.contains("seed")) c.seed = j["seed"].is_number_unsigned() ? j["seed"].get<std::uint64_t>() : count(j["seed"], child(path, "seed"));
  return c;
}

Json to_json(const SchemeConfig& c) {
  Json j{{"experiment", c.experiment}};
  auto put = [&](const char* key, const auto& opt) {
    if (opt) j[key] = *opt;
  };
  put("rho", c.rho);
  put("power", c.power);
  put("sigma2", c.sigma2);
  put("input_rho", c.input_rho);
  put("target_d", c.target_d);
  put("delta", c.delta);
  put("alpha", c.alpha);
  put("cells", c.cells);
  put("samples", c.samples);
  j["seed"] = c.seed;
  return j;
}

}  // namespace fcmac
