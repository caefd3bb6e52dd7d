#include "fcmac_tools/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "fcmac/error.hpp"

namespace fcmac::tools {

namespace {

const double kLog2of3 = std::log2(3.0);

Quantity measured(std::string label, double value, std::string units = "bits") {
  Quantity q;
  q.label = std::move(label);
  q.value = value;
  q.units = std::move(units);
  return q;
}

Quantity expect(std::string label, double value, double expected, double tol, std::string units = "bits") {
  Quantity q = measured(std::move(label), value, std::move(units));
  q.expected = expected;
  q.tolerance = tol;
  return q;
}

Quantity& printed(Quantity& q, double value, double tol = 5e-3) {
  q.printed = value;
  q.printed_tolerance = tol;
  return q;
}

const SchemeReport& find_report(const std::vector<SchemeReport>& rs, SchemeId id) {
  for (const auto& r : rs) {
    if (r.id == id) return r;
  }
  throw Error(std::string("experiment did not produce scheme ") + to_string(id));
}

double verdict_code(const SchemeReport& r) {
  // 1 strict, 0 boundary, -1 violated
  switch (*r.verdict) {
    case Verdict::Strict: return 1.0;
    case Verdict::Boundary: return 0.0;
    case Verdict::Violated: return -1.0;
  }
  return -1.0;
}

void scheme_rows(ExperimentResult& res, const std::string& param) {
  for (const auto& s : res.schemes) {
    CsvRow row{param, to_string(s.id), s.rate_bits, s.channel_sum_rate_bits, s.margin_bits, s.distortion_analytic, {}};
    if (!s.distortion_analytic && s.distortion_mc) {
      row.distortion = s.distortion_mc->mean;
      row.ci_halfwidth = s.distortion_mc->half_width;
      res.rows.push_back(row);
      continue;
    }
    res.rows.push_back(row);
    if (s.distortion_mc) {
      res.rows.push_back(CsvRow{param, std::string(to_string(s.id)) + "-mc", {}, {}, {}, s.distortion_mc->mean,
                                s.distortion_mc->half_width});
    }
  }
}

bool same(const std::optional<double>& v, double preset) { return !v || std::abs(*v - preset) < 1e-12; }

// -------------------------------------------------------------------------

void section5(ExperimentResult& res) {
  res.schemes = run_scheme(res.config);
  const bool preset_point = same(res.config.target_d, 0.0);
  const auto& uncoded = find_report(res.schemes, SchemeId::Uncoded);
  const auto& indep = find_report(res.schemes, SchemeId::IndependentColors);
  const auto& s2 = find_report(res.schemes, SchemeId::Scheme2);
  const auto& s3 = find_report(res.schemes, SchemeId::Scheme3);
  const auto& side = find_report(res.schemes, SchemeId::SideInfoColors);

  const JointPMF joint = section5_joint();
  const FunctionTable f = section5_function();
  const CharGraph g = characteristic_graph(joint, f);
  const auto coloring = min_entropy_coloring(g, marginalize(joint, {"u1"}));
  const DiscreteMAC mac = adder_mac();
  const SumCapacity cap = mac_sum_capacity_independent(mac);
  const JointPMF color_inputs({mac.input1(), mac.input2()}, {1.0 / 3, 1.0 / 3, 0.0, 1.0 / 3});

  auto& q = res.quantities;
  q.push_back(expect("H(U1,U2)", *uncoded.source_entropy_bits, std::log2(6.0), 5e-4));
  printed(q.back(), 2.58);
  q.push_back(expect("uncoded sum rate log2|U1| + log2|U2|", *uncoded.rate_bits, 2 * kLog2of3, 5e-4));
  printed(q.back(), 3.16);
  q.back().known_discrepancy = true;
  q.back().note = "exact value 3.1699; the printed 3.16 truncates rather than rounds";
  q.push_back(expect("characteristic graph edges", double(g.edges().size()), 1.0, 0.0, "count"));
  q.back().note = "single edge {1,3}";
  q.push_back(expect("per-encoder color entropy H(C1)", coloring.entropy_bits, -(2.0 / 3) * std::log2(2.0 / 3) - (1.0 / 3) * std::log2(1.0 / 3), 5e-4));
  printed(q.back(), 0.918);
  q.push_back(expect("independent color sum H(C1) + H(C2)", *indep.rate_bits, 2 * 0.9182958340544896, 5e-4));
  printed(q.back(), 1.8366);
  q.push_back(expect("H(C1,C2)", *s2.color_entropy_bits, kLog2of3, 5e-4));
  printed(q.back(), 1.58);
  q.push_back(expect("adder MAC independent sum capacity", cap.bits, 1.5, 1e-4));
  printed(q.back(), 1.5);
  q.push_back(expect("I(X1,X2;Y) at the correlated color inputs", mac_mutual_info(mac, color_inputs), kLog2of3, 5e-4));
  printed(q.back(), 1.58);
  q.push_back(expect("scheme 3 sum margin (boundary)", s3.theorem->inequalities[2].margin, 0.0, 1e-9));
  q.push_back(expect("scheme 2 sum margin", *s2.margin_bits, 1.5 - kLog2of3, 1e-6));
  q.back().note = "separation with independent channel codes falls 0.08496 bits short";
  q.push_back(expect("H(C1,C2|Z), Z = |U1 - U2|", *side.rate_bits, 4.0 / 3.0, 1e-9));
  printed(q.back(), 1.32);
  q.back().known_discrepancy = true;
  q.back().note = "exact enumeration gives 4/3; the printed 1.32 does not match";
  q.push_back(expect("side-information margin against 1.5", *side.margin_bits, 1.5 - 4.0 / 3.0, 1e-6));

  const auto cce1 = conditional_chromatic_entropy(g, joint, 1);
  const auto cce2 = conditional_chromatic_entropy(g, joint, 2);
  q.push_back(expect("conditional chromatic entropy, n = 1", cce1.bits_per_symbol, 2.0 / 3.0, 1e-9));
  q.push_back(measured("conditional chromatic entropy, n = 2 (per symbol)", cce2.bits_per_symbol));
  const auto hg = conditional_graph_entropy(g, joint);
  q.push_back(measured("conditional graph entropy H_G(U1|U2)", hg.bits));
  q.back().note = hg.converged ? "alternating minimization, best of restarts" : "restart budget exhausted";

  const auto zz = zigzag_check(joint);
  q.push_back(expect("zigzag condition holds (1 = yes)", zz.holds ? 1.0 : 0.0, 0.0, 0.0, "flag"));
  printed(q.back(), 1.0, 0.0);
  q.back().known_discrepancy = true;
  q.back().note = "support pair (1,2),(2,1) has both cross terms on the zero diagonal";

  q.push_back(expect("scheme 3 best-decoder Hamming distortion", *s3.distortion_analytic, 1.0 / 6.0, 1e-9, "prob"));
  if (preset_point) {
    printed(q.back(), 0.0, 0.0);
    q.back().known_discrepancy = true;
    q.back().note = "colors collide on (1,2) and (2,1), so f is not recovered losslessly";
  }
  scheme_rows(res, "default");
}

void gauss_diff(ExperimentResult& res, const SweepOptions& sweep) {
  auto& cfg = res.config;
  res.schemes = run_scheme(cfg);
  const double rho = cfg.rho.value_or(0.5);
  const double power = cfg.power.value_or(5.0);
  const double sigma2 = cfg.sigma2.value_or(1.0);
  const auto curve = gauss_diff_curves(rho, sigma2, sweep.power_min.value_or(0.5), sweep.power_max.value_or(20.0),
                                       sweep.steps.value_or(40));

  for (const auto& p : curve) {
    res.rows.push_back(CsvRow{format_number(p.power), "centralized", {}, {}, {}, p.centralized, {}});
    res.rows.push_back(CsvRow{format_number(p.power), "af", {}, {}, {}, p.af, {}});
  }
  std::size_t below = 0;
  for (const auto& p : curve) {
    if (p.af < p.centralized - 1e-15) ++below;
  }
  auto& q = res.quantities;
  if (rho >= 0.0) {
    q.push_back(expect("sweep points with D_AF < D_cen", double(below), 0.0, 0.0, "count"));
  } else {
    // negative correlation: the centralized formula is no longer a lower bound
    q.push_back(measured("sweep points with D_AF < D_cen", double(below), "count"));
    q.back().note = "ordering holds only for rho >= 0";
  }

  const auto& cen = find_report(res.schemes, SchemeId::Centralized);
  const auto& af = find_report(res.schemes, SchemeId::AmplifyForward);
  q.push_back(measured("D_cen at the operating point", *cen.distortion_analytic, "mse"));
  q.push_back(measured("D_AF at the operating point", *af.distortion_analytic, "mse"));
  q.push_back(expect("Monte Carlo AF", af.distortion_mc->mean, *af.distortion_analytic, 0.01 * *af.distortion_analytic,
                     "mse"));
  q.back().note = std::to_string(af.distortion_mc->samples) + " samples, 95% half-width " +
                  format_number(af.distortion_mc->half_width);
  if (same(cfg.rho, 0.5) && same(cfg.power, 5.0) && same(cfg.sigma2, 1.0)) {
    q[1].expected = 1.0 / 11.0;
    q[1].tolerance = 1e-12;
    q[2].expected = 1.0 / 6.0;
    q[2].tolerance = 1e-12;
  }
  scheme_rows(res, "rho=" + format_number(rho) + ";power=" + format_number(power));
}

void gauss_binary(ExperimentResult& res) {
  auto& cfg = res.config;
  res.schemes = run_scheme(cfg);
  const double rho = cfg.rho.value_or(0.75);
  const double power = cfg.power.value_or(5.0);
  const double input_rho = cfg.input_rho.value_or(0.3);
  const bool preset_point = same(cfg.rho, 0.75) && same(cfg.power, 5.0) && same(cfg.input_rho, 0.3);

  const JointPMF w = binary_quadrant_pmf(rho);
  const auto& s2 = find_report(res.schemes, SchemeId::Scheme2);
  const auto& s3 = find_report(res.schemes, SchemeId::Scheme3);
  auto& q = res.quantities;

  const double same_sign = 0.25 + std::asin(rho) / (2 * std::numbers::pi);
  q.push_back(expect("P(W1 = W2 = 1)", w.at({1, 1}), same_sign, 1e-12, "prob"));
  q.push_back(measured("H(W1,W2)", entropy(w, {"w1", "w2"})));
  q.push_back(measured("Pearson correlation of (W1,W2)", pearson_correlation(w), "corr"));
  q.back().note = "the printed 0.54 is read as the Pearson coefficient of the sign bits";
  q.push_back(measured("GMAC sum rate, independent inputs", *s2.channel_sum_rate_bits));
  q.push_back(measured("GMAC sum rate at input correlation " + format_number(input_rho), *s3.channel_sum_rate_bits));
  q.push_back(measured("scheme 2 verdict (1 strict, 0 boundary, -1 violated)", verdict_code(s2), "flag"));
  q.push_back(measured("scheme 3 verdict (1 strict, 0 boundary, -1 violated)", verdict_code(s3), "flag"));
  if (preset_point) {
    const double p11 = same_sign, p01 = 0.5 - same_sign;
    const double h = -2 * p11 * std::log2(p11) - 2 * p01 * std::log2(p01);
    q[1].expected = h;
    q[1].tolerance = 5e-4;
    printed(q[1], 1.778);
    q[2].expected = 4 * same_sign - 1;
    q[2].tolerance = 5e-3;
    printed(q[2], 0.54);
    q[3].expected = 0.5 * std::log2(11.0);
    q[3].tolerance = 1e-4;
    printed(q[3], 1.729, 1e-3);
    q[4].expected = 0.5 * std::log2(14.0);
    q[4].tolerance = 1e-4;
    printed(q[4], 1.903, 1e-3);
    q[5].expected = -1.0;
    q[6].expected = 1.0;
  }
  scheme_rows(res, "rho=" + format_number(rho) + ";power=" + format_number(power) + ";input_rho=" +
                       format_number(input_rho));
}

void uniform_grid(ExperimentResult& res) {
  auto& cfg = res.config;
  res.schemes = run_scheme(cfg);
  const std::size_t cells = cfg.cells.value_or(3);
  const double delta = cfg.delta.value_or(1.0 / 6.0);
  const double target = cfg.target_d.value_or(1.0 / 6.0);
  const bool preset_point = cells == 3 && same(cfg.delta, 1.0 / 6.0) && same(cfg.target_d, 1.0 / 6.0);

  const GridQuantizer grid{0.0, 1.0, cells};
  const JointPMF w = exact_cell_pmf(BlockDensity::off_diagonal(3), grid);
  const FunctionTable f = FunctionTable::from(w.axes(), [&](std::span<const std::size_t> i) {
    return format_number(std::abs(grid.center(i[0]) - grid.center(i[1])));
  });
  const CharGraph g = characteristic_graph(w, f, Fidelity::threshold(delta));
  const auto& s1 = find_report(res.schemes, SchemeId::Scheme1);
  const auto& s2 = find_report(res.schemes, SchemeId::Scheme2);
  const auto& s3 = find_report(res.schemes, SchemeId::Scheme3);
  auto& q = res.quantities;

  double off = 0.0, diag = 0.0;
  for (std::size_t a = 0; a < cells; ++a) {
    for (std::size_t b = 0; b < cells; ++b) (a == b ? diag : off) = std::max(a == b ? diag : off, w.at({a, b}));
  }
  q.push_back(measured("largest off-diagonal cell mass", off, "prob"));
  q.push_back(measured("largest diagonal cell mass", diag, "prob"));
  q.push_back(measured("threshold graph edges", double(g.edges().size()), "count"));
  q.push_back(measured("H(W1,W2)", *s1.rate_bits));
  q.push_back(measured("H(C1,C2)", *s3.color_entropy_bits));
  q.push_back(measured("scheme 1 verdict (1 strict, 0 boundary, -1 violated)", verdict_code(s1), "flag"));
  q.push_back(measured("scheme 2 verdict (1 strict, 0 boundary, -1 violated)", verdict_code(s2), "flag"));
  q.push_back(measured("scheme 3 verdict (1 strict, 0 boundary, -1 violated)", verdict_code(s3), "flag"));
  q.push_back(measured("scheme 3 expected |f - f_hat|, exact", *s3.distortion_analytic, "abs"));
  q.push_back(measured("scheme 3 expected |f - f_hat|, Monte Carlo", s3.distortion_mc->mean, "abs"));
  q.back().note = std::to_string(s3.distortion_mc->samples) + " samples, 95% half-width " +
                  format_number(s3.distortion_mc->half_width);
  q.push_back(expect("distortion budget met (1 = yes)", *s3.distortion_analytic <= target + 1e-12 ? 1.0 : 0.0, 1.0, 0.0,
                     "flag"));
  printed(q.back(), 1.0, 0.0);
  q.back().note = "budget " + format_number(target);
  if (preset_point) {
    q[0].expected = 1.0 / 6.0;
    q[0].tolerance = 1e-12;
    q[1].expected = 0.0;
    q[1].tolerance = 1e-12;
    q[2].expected = 2.0;
    q[2].note = "edges {1,2} and {2,3}";
    q[3].expected = std::log2(6.0);
    q[3].tolerance = 5e-4;
    q[4].expected = kLog2of3;
    q[4].tolerance = 5e-4;
    q[5].expected = -1.0;
    q[6].expected = -1.0;
    q[7].expected = 0.0;
    q[8].expected = 1.0 / 9.0;
    q[8].tolerance = 1e-9;
    q[9].expected = 1.0 / 9.0;
    q[9].tolerance = 0.005;
  }
  scheme_rows(res, "cells=" + format_number(double(cells)) + ";delta=" + format_number(delta));
}

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

bool Quantity::passes() const { return !expected || std::abs(value - *expected) <= tolerance; }

bool Quantity::matches_printed() const { return !printed || std::abs(value - *printed) <= printed_tolerance; }

bool ExperimentResult::passed() const {
  for (const auto& q : quantities) {
    if (!q.ok()) return false;
  }
  return true;
}

ExperimentResult run_experiment(const SchemeConfig& config, const SweepOptions& sweep) {
  ExperimentResult res;
  res.id = config.experiment;
  res.config = config;
  if (config.experiment == "section5") {
    section5(res);
  } else if (config.experiment == "gauss-diff") {
    gauss_diff(res, sweep);
  } else if (config.experiment == "gauss-binary") {
    gauss_binary(res);
  } else if (config.experiment == "uniform-grid") {
    uniform_grid(res);
  } else {
    throw Error("unknown experiment '" + config.experiment + "'");
  }
  return res;
}

std::string to_csv(const ExperimentResult& r) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& row : r.rows) {
    out << row.param << ',' << row.scheme << ',' << cell(row.rate_bits) << ',' << cell(row.capacity_bits) << ','
        << cell(row.margin_bits) << ',' << cell(row.distortion) << ',' << cell(row.ci_halfwidth) << '\n';
  }
  return out.str();
}

Json to_json(const ExperimentResult& r) {
  Json quantities = Json::array();
  for (const auto& q : r.quantities) {
    Json j{{"label", q.label}, {"value", q.value}, {"units", q.units}};
    if (q.expected) {
      j["expected"] = *q.expected;
      j["tolerance"] = q.tolerance;
    }
    if (q.printed) {
      j["printed"] = *q.printed;
      j["printed_tolerance"] = q.printed_tolerance;
      j["printed_matches"] = q.matches_printed();
    }
    if (q.known_discrepancy) j["flagged_discrepancy"] = true;
    if (!q.note.empty()) j["note"] = q.note;
    j["pass"] = q.ok();
    quantities.push_back(j);
  }
  Json schemes = Json::array();
  for (const auto& s : r.schemes) {
    Json j{{"scheme", to_string(s.id)}, {"label", s.label}};
    auto put = [&](const char* key, const std::optional<double>& v) {
      if (v) j[key] = *v;
    };
    put("source_entropy_bits", s.source_entropy_bits);
    put("color_entropy_bits", s.color_entropy_bits);
    put("rate_bits", s.rate_bits);
    put("channel_sum_rate_bits", s.channel_sum_rate_bits);
    if (s.verdict) j["verdict"] = to_string(*s.verdict);
    put("margin_bits", s.margin_bits);
    if (s.theorem) j["theorem"] = fcmac::to_json(*s.theorem);
    put("distortion_analytic", s.distortion_analytic);
    if (s.distortion_mc) {
      j["distortion_mc"] = Json{{"mean", s.distortion_mc->mean},
                                {"half_width", s.distortion_mc->half_width},
                                {"samples", s.distortion_mc->samples},
                                {"seed", s.distortion_mc->seed}};
    }
    put("lipschitz_alpha", s.lipschitz_alpha);
    if (!s.note.empty()) j["note"] = s.note;
    schemes.push_back(j);
  }
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j{{"param", row.param}, {"scheme", row.scheme}};
    auto put = [&](const char* key, const std::optional<double>& v) { j[key] = v ? Json(*v) : Json(nullptr); };
    put("rate_bits", row.rate_bits);
    put("capacity_bits", row.capacity_bits);
    put("margin_bits", row.margin_bits);
    put("distortion", row.distortion);
    put("ci_halfwidth", row.ci_halfwidth);
    rows.push_back(j);
  }
  return Json{{"experiment", r.id},   {"config", fcmac::to_json(r.config)}, {"passed", r.passed()},
              {"quantities", quantities}, {"schemes", schemes},            {"rows", rows}};
}

std::string summary_table(const ExperimentResult& r) {
  std::size_t width = 0;
  for (const auto& q : r.quantities) width = std::max(width, q.label.size());
  std::ostringstream out;
  out << "experiment " << r.id << '\n';
  for (const auto& q : r.quantities) {
    std::string mark = "    ";
    if (q.expected) mark = q.passes() ? "pass" : "FAIL";
    out << "  " << mark << "  " << q.label << std::string(width - q.label.size() + 2, ' ') << format_number(q.value)
        << ' ' << q.units;
    if (q.expected) out << "  (expected " << format_number(*q.expected) << " +- " << format_number(q.tolerance) << ')';
    if (q.printed) {
      out << "  printed " << format_number(*q.printed);
      if (!q.matches_printed()) out << (q.known_discrepancy ? " [flagged discrepancy]" : " [MISMATCH]");
    }
    if (!q.note.empty()) out << "  -- " << q.note;
    out << '\n';
  }
  out << (r.passed() ? "all expectations pass" : "some expectations FAIL") << '\n';
  return out.str();
}

}  // namespace fcmac::tools
