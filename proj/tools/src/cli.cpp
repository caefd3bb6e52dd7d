#include "fcmac_tools/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "fcmac/error.hpp"
#include "fcmac/json_io.hpp"
#include "fcmac_tools/experiments.hpp"

namespace fcmac::tools {

namespace {

struct ExperimentArgs {
  std::string id;
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<double> rho, power, sigma2, input_rho, target_d, delta, alpha;
  std::optional<double> power_min, power_max;
  std::optional<std::size_t> steps, samples, cells;
};

struct CheckArgs {
  std::string spec_path;
  std::string format = "json";
  bool allow_boundary = false;
};

struct GraphArgs {
  std::string joint_path, function_path, graph_path, out_path;
  std::optional<double> delta;
  int encoder = 1;
  std::string mode = "exact";
  int n = 1;
};

struct ChannelArgs {
  std::string mac_path;
  double power = 0.0;
  double rho = 0.0;
  double noise = 1.0;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::uint64_t env_seed() {
  const char* s = std::getenv("FCMAC_SEED");
  if (!s || !*s) return 1;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 10);
    if (used != std::string(s).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("FCMAC_SEED is not an unsigned integer: '") + s + "'");
  }
}

void write_to(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write " + path);
  file << text;
}

std::string pretty(const Json& j) { return j.dump(2) + "\n"; }

int run_experiment_cmd(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  SchemeConfig cfg;
  std::optional<std::uint64_t> file_seed;
  if (!a.config_path.empty()) {
    const Json j = read_json_file(a.config_path);
    cfg = config_from_json(j);
    if (j.contains("seed")) file_seed = cfg.seed;
    if (!a.id.empty() && a.id != cfg.experiment) {
      throw UsageError("experiment id '" + a.id + "' does not match config '" + cfg.experiment + "'");
    }
  } else if (a.id.empty()) {
    throw UsageError("experiment needs an id or --config");
  } else {
    cfg.experiment = a.id;
  }
  const auto& ids = experiment_ids();
  if (std::find(ids.begin(), ids.end(), cfg.experiment) == ids.end()) {
    throw UsageError("unknown experiment '" + cfg.experiment + "'");
  }
  cfg.seed = a.seed ? *a.seed : file_seed ? *file_seed : env_seed();
  auto override = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  override(cfg.rho, a.rho);
  override(cfg.power, a.power);
  override(cfg.sigma2, a.sigma2);
  override(cfg.input_rho, a.input_rho);
  override(cfg.target_d, a.target_d);
  override(cfg.delta, a.delta);
  override(cfg.alpha, a.alpha);
  override(cfg.cells, a.cells);
  override(cfg.samples, a.samples);

  ExperimentResult res;
  try {
    res = run_experiment(cfg, SweepOptions{a.power_min, a.power_max, a.steps});
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const std::string data = a.format == "json" ? pretty(to_json(res)) : to_csv(res);
  write_to(a.out_path, data, out);
  const bool data_on_stdout = a.out_path.empty() || a.out_path == "-";
  (data_on_stdout ? err : out) << summary_table(res);
  return res.passed() ? kExitOk : kExitFailed;
}

int run_check_cmd(const CheckArgs& a, std::ostream& out) {
  const SystemSpec spec = spec_from_json(read_json_file(a.spec_path));
  validate_spec(spec);
  const FeasibilityReport report = check_feasibility(spec);
  const bool ok = report.feasible(a.allow_boundary);
  if (a.format == "csv") {
    out << "name,lhs_bits,rhs_bits,margin_bits,verdict\n";
    for (const auto& i : report.inequalities) {
      out << '"' << i.name << "\"," << format_number(i.lhs) << ',' << format_number(i.rhs) << ','
          << format_number(i.margin) << ',' << to_string(i.verdict) << '\n';
    }
    out << "distortion," << format_number(report.achieved_distortion) << ',' << format_number(report.target_d) << ','
        << format_number(report.target_d - report.achieved_distortion) << ','
        << (report.distortion_ok ? "met" : "exceeded") << '\n';
  } else {
    Json j = to_json(report);
    j["allow_boundary"] = a.allow_boundary;
    j["feasible"] = ok;
    out << pretty(j);
  }
  return ok ? kExitOk : kExitFailed;
}

JointPMF encoder_view(const JointPMF& joint, int encoder) {
  if (joint.rank() != 2) throw UsageError("joint must have exactly two axes");
  return encoder == 1 ? joint : transpose(joint);
}

int run_graph_build(const GraphArgs& a, std::ostream& out) {
  const JointPMF joint = encoder_view(pmf_from_json(read_json_file(a.joint_path)), a.encoder);
  FunctionTable f = function_from_json(read_json_file(a.function_path));
  if (a.encoder == 2) f = transpose(f);
  const Fidelity fidelity = a.delta ? Fidelity::threshold(*a.delta) : Fidelity::exact_values();
  write_to(a.out_path, pretty(to_json(characteristic_graph(joint, f, fidelity))), out);
  return kExitOk;
}

int run_graph_color(const GraphArgs& a, std::ostream& out) {
  const CharGraph g = graph_from_json(read_json_file(a.graph_path));
  const JointPMF joint = encoder_view(pmf_from_json(read_json_file(a.joint_path)), a.encoder);
  if (!joint.axes()[0].same_symbols(g.vertices())) throw UsageError("graph vertices do not match the joint's axis");
  const auto mode = a.mode == "greedy" ? ColoringMode::Greedy : ColoringMode::Exact;
  const auto result = min_entropy_coloring(g, marginalize(joint, {joint.axes()[0].name()}), mode);
  const Json j{{"mode", a.mode},
               {"coloring", coloring_to_json(g, result.coloring)},
               {"colors", result.coloring.num_colors()},
               {"entropy_bits", result.entropy_bits}};
  write_to(a.out_path, pretty(j), out);
  return kExitOk;
}

int run_graph_entropy(const GraphArgs& a, std::ostream& out) {
  const CharGraph g = graph_from_json(read_json_file(a.graph_path));
  const JointPMF joint = encoder_view(pmf_from_json(read_json_file(a.joint_path)), a.encoder);
  if (!joint.axes()[0].same_symbols(g.vertices())) throw UsageError("graph vertices do not match the joint's axis");
  const auto cce = conditional_chromatic_entropy(g, joint, a.n);
  const auto hg = conditional_graph_entropy(g, joint);
  const auto zz = zigzag_check(joint);
  Json j{{"n", a.n},
         {"conditional_chromatic_entropy_bits", cce.bits_per_symbol},
         {"conditional_graph_entropy_bits", hg.bits},
         {"graph_entropy_converged", hg.converged},
         {"zigzag_holds", zz.holds}};
  if (zz.witness) {
    const auto& w = *zz.witness;
    auto sym = [&](std::size_t axis, std::size_t i) { return joint.axes()[axis][i]; };
    j["zigzag_witness"] = Json::array({Json::array({sym(0, w[0].first), sym(1, w[0].second)}),
                                       Json::array({sym(0, w[1].first), sym(1, w[1].second)})});
  }
  write_to(a.out_path, pretty(j), out);
  return kExitOk;
}

int run_channel_capacity(const ChannelArgs& a, std::ostream& out) {
  const DiscreteMAC mac = mac_from_json(read_json_file(a.mac_path));
  const SumCapacity cap = mac_sum_capacity_independent(mac);
  out << pretty(Json{{"sum_capacity_bits", cap.bits}, {"p1", cap.p1}, {"p2", cap.p2}});
  return kExitOk;
}

int run_channel_gmac(const ChannelArgs& a, std::ostream& out) {
  const GaussianMAC mac{a.power, a.noise};
  out << pretty(Json{{"power", a.power}, {"noise_var", a.noise}, {"rho", a.rho}, {"sum_rate_bits", gmac_sum_rate(mac, a.rho)}});
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"fcmac: functional compression over multiple access channels"};
  app.name("fcmac");
  app.require_subcommand(1);

  ExperimentArgs ea;
  auto* exp = app.add_subcommand("experiment", "run a named experiment and emit CSV or JSON");
  exp->add_option("id", ea.id, "section5 | gauss-diff | gauss-binary | uniform-grid");
  exp->add_option("--config", ea.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  exp->add_option("--out", ea.out_path, "output file (default stdout)");
  exp->add_option("--format", ea.format)->check(CLI::IsMember({"csv", "json"}));
  exp->add_option("--seed", ea.seed, "Monte Carlo seed (default $FCMAC_SEED, else 1)");
  exp->add_option("--rho", ea.rho);
  exp->add_option("--power", ea.power);
  exp->add_option("--power-min", ea.power_min);
  exp->add_option("--power-max", ea.power_max);
  exp->add_option("--steps", ea.steps);
  exp->add_option("--samples", ea.samples);
  exp->add_option("--sigma2", ea.sigma2);
  exp->add_option("--input-rho", ea.input_rho);
  exp->add_option("--target-d", ea.target_d);
  exp->add_option("--delta", ea.delta);
  exp->add_option("--alpha", ea.alpha);
  exp->add_option("--cells", ea.cells);

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "check a system specification");
  check->require_subcommand(1);
  auto* theorem = check->add_subcommand("theorem1", "evaluate the three rate inequalities and the distortion");
  theorem->add_option("--spec", ca.spec_path)->required();
  theorem->add_flag("--allow-boundary", ca.allow_boundary, "accept inequalities that hold with equality");
  theorem->add_option("--format", ca.format)->check(CLI::IsMember({"json", "csv"}));

  GraphArgs ga;
  auto* graph = app.add_subcommand("graph", "characteristic graphs, colorings and graph entropies");
  graph->require_subcommand(1);
  auto* gbuild = graph->add_subcommand("build", "characteristic graph of one encoder");
  gbuild->add_option("--joint", ga.joint_path)->required();
  gbuild->add_option("--function", ga.function_path)->required();
  gbuild->add_option("--delta", ga.delta, "threshold mode: join values further apart than delta");
  auto* gcolor = graph->add_subcommand("color", "minimum-entropy coloring");
  gcolor->add_option("--mode", ga.mode)->check(CLI::IsMember({"exact", "greedy"}));
  auto* gentropy = graph->add_subcommand("entropy", "conditional chromatic and graph entropy, zigzag check");
  gentropy->add_option("--n", ga.n, "block length for the chromatic entropy")->check(CLI::Range(1, 4));
  for (auto* sub : {gcolor, gentropy}) {
    sub->add_option("--graph", ga.graph_path)->required();
    sub->add_option("--joint", ga.joint_path)->required();
  }
  for (auto* sub : {gbuild, gcolor, gentropy}) {
    sub->add_option("--encoder", ga.encoder, "1 or 2; encoder 2 sees the joint transposed")->check(CLI::Range(1, 2));
    sub->add_option("--out", ga.out_path);
  }

  ChannelArgs cha;
  auto* channel = app.add_subcommand("channel", "multiple access channel rates");
  channel->require_subcommand(1);
  auto* capacity = channel->add_subcommand("capacity", "sum capacity with independent inputs");
  capacity->add_option("--mac", cha.mac_path)->required();
  auto* gmac = channel->add_subcommand("gmac", "Gaussian MAC sum rate at input correlation rho");
  gmac->add_option("--power", cha.power)->required();
  gmac->add_option("--rho", cha.rho)->required();
  gmac->add_option("--noise", cha.noise);

  std::vector<std::string> argv_store{"fcmac"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (exp->parsed()) return run_experiment_cmd(ea, out, err);
    if (theorem->parsed()) return run_check_cmd(ca, out);
    if (gbuild->parsed()) return run_graph_build(ga, out);
    if (gcolor->parsed()) return run_graph_color(ga, out);
    if (gentropy->parsed()) return run_graph_entropy(ga, out);
    if (capacity->parsed()) return run_channel_capacity(cha, out);
    if (gmac->parsed()) return run_channel_gmac(cha, out);
  } catch (const SchemaError& e) {
    err << "schema error at " << (e.path().empty() ? std::string("/") : e.path()) << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace fcmac::tools
