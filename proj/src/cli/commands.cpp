#include "jetex/cli/commands.hpp"

#include "jetex/cli/parallel.hpp"
#include "jetex/hull_oracle.hpp"
#include "jetex/jet_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

namespace jetex::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json pair_json(const std::optional<IndexPair>& p) {
  if (!p) return nullptr;
  return json::array({p->first, p->second});
}

json to_json(const ConditionReport& r) {
  return {{"satisfied", r.satisfied},
          {"margin", r.margin},
          {"worst_pair", pair_json(r.worst_pair)},
          {"constant_used", r.constant_used},
          {"tolerance", r.tolerance}};
}

json to_json(const GammaReport& r) {
  return {{"gamma", r.gamma}, {"attaining_pair", pair_json(r.attaining_pair)}, {"A", r.A},
          {"B", r.B}};
}

json to_json(const MinimalConstant& m) {
  json j = {{"feasible", m.feasible}, {"witness", pair_json(m.witness)}};
  j["value"] = m.feasible ? json(m.value) : json(nullptr);
  return j;
}

std::string csv_row(const std::vector<double>& vals) {
  std::string s;
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (k) s += ',';
    s += format_number(vals[k]);
  }
  return s;
}

/// Options shared by the commands that build an extension.
struct Common {
  std::string jet_path;
  std::string cls_name = "c11_conv";
  std::optional<double> M;
  bool auto_M = false;
  double alpha = 1.0;
  unsigned long long seed = 0;
  double tolerance = SolverSettings{}.tolerance;
};

void add_jet_options(CLI::App* sub, Common& c) {
  sub->add_option("--jet", c.jet_path, "Jet file (JSON)")->required();
  sub->add_option("--seed", c.seed, "Seed for randomised internals")->capture_default_str();
}

void add_class_options(CLI::App* sub, Common& c) {
  sub->add_option("--class", c.cls_name,
                  "w11|cw11|cw1omega|cw1alpha or c11|c11_conv|c1omega_conv|c1alpha_conv_lp")
      ->capture_default_str();
  sub->add_option("--M", c.M, "Extension constant");
  sub->add_flag("--auto-M", c.auto_M, "Use the minimal feasible constant");
  sub->add_option("--alpha", c.alpha, "Power modulus exponent in (0,1]")->capture_default_str();
}

void add_solver_options(CLI::App* sub, Common& c) {
  sub->add_option("--tolerance", c.tolerance, "Relative solver tolerance")->capture_default_str();
}

/// Outcome of resolving the extension constant.
struct Setup {
  JetSet jet;
  ExtensionClass cls;
  Modulus mod;
  double M = 0.0;
  std::optional<MinimalConstant> minimal;
};

class CommandFailure : public std::runtime_error {
public:
  CommandFailure(int code, json report)
      : std::runtime_error("command failed"), code_(code), report_(std::move(report)) {}
  int code() const { return code_; }
  const json& report() const { return report_; }

private:
  int code_;
  json report_;
};

Setup resolve(const Common& c, const std::string& command) {
  Setup s{read_jet_file(c.jet_path, c.seed), parse_class(c.cls_name), Modulus(c.alpha), 0.0, {}};
  if (c.auto_M) {
    MinimalConstant mc = min_constant_class(s.jet, s.cls, s.mod);
    s.minimal = mc;
    if (!mc.feasible) {
      throw CommandFailure(kInfeasible, {{"command", command},
                                         {"class", to_string(s.cls)},
                                         {"minimal_constant", to_json(mc)},
                                         {"status", "infeasible"}});
    }
    // A zero constant (affine jet) admits any M > 0.
    s.M = mc.value > 0.0 ? mc.value : 1.0;
  } else if (c.M) {
    s.M = *c.M;
  } else {
    throw ParseError("either --M or --auto-M is required");
  }
  if (!(s.M > 0.0)) throw ParseError("--M must be positive");
  return s;
}

Extension build(const Setup& s, const Common& c, const std::string& command) {
  try {
    return extend(s.jet, s.cls, s.mod, s.M, SolverSettings{c.tolerance});
  } catch (const InfeasibleJet& e) {
    json rep = {{"command", command},
                {"class", to_string(s.cls)},
                {"M", s.M},
                {"condition", to_json(e.report())},
                {"status", "infeasible"}};
    rep["minimal_constant"] = to_json(min_constant_class(s.jet, s.cls, s.mod));
    throw CommandFailure(kInfeasible, rep);
  }
}

json base_report(const std::string& command, const Setup& s) {
  json r = {{"command", command}, {"class", to_string(s.cls)}, {"M", s.M}};
  if (s.cls == ExtensionClass::C1OmegaConv) r["alpha"] = s.mod.alpha();
  if (s.minimal) r["minimal_constant"] = to_json(*s.minimal);
  return r;
}

// ---------------------------------------------------------------- commands

int cmd_check(const Common& c, std::ostream& out, std::ostream& err) {
  const auto t0 = Clock::now();
  Setup s = resolve(c, "check");
  ConditionReport rep = check_class(s.jet, s.cls, s.mod, s.M);
  json r = base_report("check", s);
  r["condition"] = to_json(rep);
  if (s.cls == ExtensionClass::C11) r["gamma"] = to_json(gamma_functional(s.jet));
  if (!rep.satisfied && !s.minimal) {
    r["minimal_constant"] = to_json(min_constant_class(s.jet, s.cls, s.mod));
  }
  r["status"] = rep.satisfied ? "feasible" : "infeasible";
  r["timing_seconds"] = seconds_since(t0);
  out << r.dump(2) << '\n';
  if (!rep.satisfied && rep.worst_pair) {
    err << "infeasible: witness pair (" << rep.worst_pair->first << ", " << rep.worst_pair->second
        << ")\n";
  }
  return rep.satisfied ? kOk : kInfeasible;
}

int cmd_constants(const Common& c, std::ostream& out) {
  const auto t0 = Clock::now();
  const JetSet jet = read_jet_file(c.jet_path, c.seed);
  json r = {{"command", "constants"}, {"points", jet.size()}, {"dimension", jet.dim()}};
  if (jet.norm().kind == NormKind::Euclidean) {
    const Modulus mod(c.alpha);
    r["gamma"] = to_json(gamma_functional(jet));
    r["c11"] = to_json(min_constant_w11(jet));
    r["c11_conv"] = to_json(min_constant_cw11(jet));
    r["c1omega_conv"] = to_json(min_constant_cw1omega(jet, mod));
    r["alpha"] = c.alpha;
  } else {
    r["p"] = jet.norm().p;
    r["smoothness_constant"] = jet.norm().smoothness;
    r["c1alpha_conv_lp"] = to_json(min_constant_cw1alpha_lp(jet));
  }
  r["timing_seconds"] = seconds_since(t0);
  out << r.dump(2) << '\n';
  return kOk;
}

struct EvalRows {
  std::vector<std::string> rows;
  std::size_t nonconverged = 0;
  double max_residual = 0.0;
};

EvalRows evaluate_rows(const Extension& ext, const std::vector<Eigen::VectorXd>& pts,
                       bool with_bounds) {
  EvalRows res;
  res.rows.resize(pts.size());
  std::vector<char> bad(pts.size(), 0);
  std::vector<double> resid(pts.size(), 0.0);
  parallel_for(pts.size(), [&](std::size_t i) {
    const Eigen::VectorXd& x = pts[i];
    const ExtensionValue v = ext.evaluate(x);
    std::vector<double> vals(x.data(), x.data() + x.size());
    vals.push_back(v.value);
    vals.insert(vals.end(), v.gradient.data(), v.gradient.data() + v.gradient.size());
    if (with_bounds) {
      vals.push_back(ext.upper(x));
      vals.push_back(ext.lower(x));
    }
    vals.push_back(v.residual);
    res.rows[i] = csv_row(vals);
    bad[i] = v.converged ? 0 : 1;
    resid[i] = v.residual;
  });
  for (std::size_t i = 0; i < pts.size(); ++i) {
    res.nonconverged += static_cast<std::size_t>(bad[i]);
    res.max_residual = std::max(res.max_residual, resid[i]);
  }
  return res;
}

std::string csv_header(int n, bool with_bounds) {
  std::string h;
  for (int k = 0; k < n; ++k) h += "x" + std::to_string(k) + ",";
  h += "F";
  for (int k = 0; k < n; ++k) h += ",g" + std::to_string(k);
  if (with_bounds) h += ",g_upper,m_lower";
  return h + ",residual";
}

void write_output(const std::string& path, const std::string& body, std::ostream& out) {
  if (path.empty()) {
    out << body;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + path + "'");
  f << body;
}

void write_report(const std::string& path, const json& report) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (!f) throw ParseError("cannot write '" + path + "'");
  f << report.dump(2) << '\n';
}

int emit_rows(const std::string& command, const Setup& s, const Extension& ext,
              const std::vector<Eigen::VectorXd>& pts, bool with_bounds,
              const std::string& output, const std::string& report_path, Clock::time_point t0,
              std::ostream& out, std::ostream& err) {
  const EvalRows res = evaluate_rows(ext, pts, with_bounds);
  std::string body = csv_header(s.jet.dim(), with_bounds) + "\n";
  for (const auto& row : res.rows) body += row + "\n";
  write_output(output, body, out);

  json r = base_report(command, s);
  r["rows"] = pts.size();
  r["solver"] = {{"max_residual", res.max_residual}, {"nonconverged", res.nonconverged}};
  r["timing_seconds"] = seconds_since(t0);
  write_report(report_path, r);
  if (res.nonconverged > 0) {
    err << "solver did not converge at " << res.nonconverged << " point(s), max residual "
        << format_number(res.max_residual) << '\n';
    return kNoConvergence;
  }
  return kOk;
}

int cmd_eval(const Common& c, const std::string& points_path, const std::string& output,
             const std::string& report_path, std::ostream& out, std::ostream& err) {
  const auto t0 = Clock::now();
  Setup s = resolve(c, "eval");
  const Extension ext = build(s, c, "eval");
  const auto pts = read_points_file(points_path, s.jet.dim());
  return emit_rows("eval", s, ext, pts, false, output, report_path, t0, out, err);
}

int cmd_grid(const Common& c, const std::vector<double>& bbox, int resolution,
             const std::string& output, const std::string& report_path, std::ostream& out,
             std::ostream& err) {
  const auto t0 = Clock::now();
  Setup s = resolve(c, "grid");
  if (s.jet.dim() > 3) throw ParseError("grid export supports dimension <= 3");
  if (resolution < 2) throw ParseError("--resolution must be at least 2");
  const Box box = parse_box(bbox, s.jet.dim());
  const Extension ext = build(s, c, "grid");
  const auto pts = grid_nodes(box, resolution);
  return emit_rows("grid", s, ext, pts, true, output, report_path, t0, out, err);
}

int cmd_oracle_check(const Common& c, const std::vector<double>& bbox,
                     std::optional<int> resolution, std::ostream& out) {
  const auto t0 = Clock::now();
  Setup s = resolve(c, "oracle-check");
  if (s.jet.dim() > 2) throw ParseError("oracle-check supports dimension 1 and 2 only");
  const int res = resolution.value_or(s.jet.dim() == 1 ? 401 : 201);
  if (res < 2) throw ParseError("--resolution must be at least 2");
  const Box box = parse_box(bbox, s.jet.dim());
  const Extension ext = build(s, c, "oracle-check");
  const OracleCheckResult oc = oracle_check(ext, box, res);

  json r = base_report("oracle-check", s);
  r["oracle"] = {{"pass", oc.pass},
                 {"max_gap", oc.max_gap},
                 {"grid_chord_bound", oc.bound},
                 {"solver_slack", oc.solver_slack},
                 {"queries", oc.queries},
                 {"resolution", oc.resolution},
                 {"sample_box", {{"lo", oc.sample_box.lo}, {"hi", oc.sample_box.hi}}},
                 {"worst_point", std::vector<double>(oc.worst_point.data(),
                                                     oc.worst_point.data() +
                                                         oc.worst_point.size())}};
  r["solver"] = {{"max_residual", oc.max_residual}, {"nonconverged", oc.nonconverged}};
  r["timing_seconds"] = seconds_since(t0);
  out << r.dump(2) << '\n';
  if (oc.nonconverged > 0) return kNoConvergence;
  return oc.pass ? kOk : kInfeasible;
}

// ---------------------------------------------------------------- selftest

JetPoint point1(double x, double f, double g) {
  JetPoint p;
  p.x = Eigen::VectorXd::Constant(1, x);
  p.f = f;
  p.g = Eigen::VectorXd::Constant(1, g);
  return p;
}

int cmd_selftest(std::ostream& out) {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok, double err) {
    out << (ok ? "PASS " : "FAIL ") << name << " (error " << format_number(err) << ")\n";
    if (!ok) ++failures;
  };
  auto at = [](double x) { return Eigen::VectorXd::Constant(1, x); };

  const JetSet abs_jet = make_jet({point1(-1, 1, -1), point1(1, 1, 1)});
  for (const bool shifted : {false, true}) {
    const Extension ext = shifted ? extend_c11(abs_jet, 1.0) : extend_c11_convex(abs_jet, 1.0);
    double worst = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double x = -2.0 + 0.04 * k;
      const ExtensionValue v = ext(at(x));
      worst = std::max({worst, std::abs(v.value - (0.5 * x * x + 0.5)),
                        std::abs(v.gradient[0] - x)});
    }
    report(shifted ? "c11 two-point closed form" : "c11_conv two-point closed form",
           worst <= 1e-8, worst);
  }

  const JetSet step = make_jet({point1(0, 0, 0), point1(1, 1, 0)});
  {
    const ExtensionValue v = extend_c11(step, 4.0)(at(0.5));
    const double e = std::max(std::abs(v.value - 0.5), std::abs(v.gradient[0] - 2.0));
    report("c11 step jet midpoint", e <= 1e-10, e);
    const GammaReport gr = gamma_functional(step);
    report("gamma of step jet", std::abs(gr.gamma - 4.0) <= 1e-14, std::abs(gr.gamma - 4.0));
  }
  {
    const JetSet j = make_jet({point1(0, 0, 0), point1(1, 0.5, 1)});
    const ExtensionValue v = extend_c1omega_convex(j, Modulus(0.5), 1.0)(at(0.5));
    const double e = std::max(std::abs(v.value - 5.0 / 24.0), std::abs(v.gradient[0] - 0.5));
    report("c1omega_conv half-power midpoint", e <= 1e-10, e);
  }
  {
    const ExtensionValue v =
        extend_c1omega_convex(make_jet({point1(0, 0, 0)}), Modulus(0.5), 1.0)(at(1.0));
    const double e = std::max(std::abs(v.value - 2.0 / 3.0), std::abs(v.gradient[0] - 1.0));
    report("c1omega_conv single point", e <= 1e-12, e);
  }
  {
    const Modulus m(0.5);
    const double e = std::abs(m.phi(4.0) + m.phi_star(m.omega(4.0)) - 4.0 * m.omega(4.0));
    report("fenchel equality", e <= 1e-12 * 8.0, e);
  }
  out << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? kOk : kInfeasible;
}

int map_error(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  return kUsage;
}

} // namespace

ExtensionClass parse_class(const std::string& name) {
  static const std::map<std::string, ExtensionClass> names = {
      {"w11", ExtensionClass::C11},
      {"c11", ExtensionClass::C11},
      {"cw11", ExtensionClass::C11Conv},
      {"c11_conv", ExtensionClass::C11Conv},
      {"cw1omega", ExtensionClass::C1OmegaConv},
      {"c1omega_conv", ExtensionClass::C1OmegaConv},
      {"cw1alpha", ExtensionClass::C1AlphaConvLp},
      {"cw1alpha_lp", ExtensionClass::C1AlphaConvLp},
      {"c1alpha_conv_lp", ExtensionClass::C1AlphaConvLp},
  };
  std::string key = name;
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  const auto it = names.find(key);
  if (it == names.end()) throw ParseError("unknown class '" + name + "'");
  return it->second;
}

Box parse_box(const std::vector<double>& flat, int dim) {
  if (static_cast<int>(flat.size()) != 2 * dim) {
    throw ParseError("--bbox needs " + std::to_string(2 * dim) + " numbers (lo hi per axis)");
  }
  Box b;
  for (int k = 0; k < dim; ++k) {
    const double lo = flat[2 * k];
    const double hi = flat[2 * k + 1];
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
      throw ParseError("degenerate bbox on axis " + std::to_string(k));
    }
    b.lo.push_back(lo);
    b.hi.push_back(hi);
  }
  return b;
}

std::vector<Eigen::VectorXd> grid_nodes(const Box& box, int resolution) {
  const int n = static_cast<int>(box.lo.size());
  std::size_t total = 1;
  for (int k = 0; k < n; ++k) total *= static_cast<std::size_t>(resolution);
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(total);
  std::vector<int> idx(n, 0);
  for (std::size_t c = 0; c < total; ++c) {
    Eigen::VectorXd x(n);
    for (int k = 0; k < n; ++k) {
      const double w = static_cast<double>(idx[k]) / (resolution - 1);
      x[k] = idx[k] == resolution - 1 ? box.hi[k] : box.lo[k] + w * (box.hi[k] - box.lo[k]);
    }
    pts.push_back(std::move(x));
    for (int k = n - 1; k >= 0; --k) {
      if (++idx[k] < resolution) break;
      idx[k] = 0;
    }
  }
  return pts;
}

OracleCheckResult oracle_check(const Extension& ext, const Box& query, int resolution) {
  const EnvelopeEvaluator& ev = ext.evaluator();
  const UpperFunction& g = ev.upper();
  const JetSet& jet = g.jet();
  const int n = jet.dim();
  if (n != 1 && n != 2) throw DimensionMismatch("oracle check supports dimension 1 and 2");
  if (static_cast<int>(query.lo.size()) != n) throw DimensionMismatch("bbox dimension");
  if (resolution < 2) throw DegenerateGrid("oracle grid needs at least two nodes per axis");

  OracleCheckResult res;
  res.resolution = resolution;
  const double diam = jet.diameter();
  std::vector<std::vector<double>> axes(n);
  Eigen::VectorXd spacing(n);
  for (int k = 0; k < n; ++k) {
    double lo = query.lo[k];
    double hi = query.hi[k];
    for (const auto& pt : jet.points()) {
      lo = std::min(lo, pt.x[k]);
      hi = std::max(hi, pt.x[k]);
    }
    const double pad = std::max(0.25 * (hi - lo), diam);
    lo -= pad;
    hi += pad;
    res.sample_box.lo.push_back(lo);
    res.sample_box.hi.push_back(hi);
    spacing[k] = (hi - lo) / (resolution - 1);
    for (int i = 0; i < resolution; ++i) {
      axes[k].push_back(i == resolution - 1 ? hi : lo + i * spacing[k]);
    }
  }
  res.bound = grid_chord_bound(g.kernel(), spacing);

  auto inside = [&](const Eigen::VectorXd& x) {
    for (int k = 0; k < n; ++k) {
      const double slack = 1e-12 * (1.0 + std::abs(query.lo[k]) + std::abs(query.hi[k]));
      if (x[k] < query.lo[k] - slack || x[k] > query.hi[k] + slack) return false;
    }
    return true;
  };

  std::vector<Eigen::VectorXd> queries;
  std::vector<double> oracle;
  if (n == 1) {
    std::vector<double> vals(axes[0].size());
    parallel_for(vals.size(), [&](std::size_t i) {
      vals[i] = g.eval(Eigen::VectorXd::Constant(1, axes[0][i])).value;
    });
    const LowerHull1d hull(axes[0], vals);
    for (double t : axes[0]) {
      Eigen::VectorXd x = Eigen::VectorXd::Constant(1, t);
      if (!inside(x)) continue;
      oracle.push_back(hull(t));
      queries.push_back(std::move(x));
    }
  } else {
    GridSamples2d s{axes[0], axes[1], std::vector<double>(axes[0].size() * axes[1].size())};
    parallel_for(axes[0].size(), [&](std::size_t i) {
      Eigen::VectorXd x(2);
      x[0] = axes[0][i];
      for (std::size_t j = 0; j < axes[1].size(); ++j) {
        x[1] = axes[1][j];
        s.values[i * axes[1].size() + j] = g.eval(x).value;
      }
    });
    const LowerHull2d hull(std::move(s));
    for (double a : axes[0]) {
      for (double b : axes[1]) {
        Eigen::VectorXd x(2);
        x << a, b;
        if (inside(x)) queries.push_back(std::move(x));
      }
    }
    oracle.resize(queries.size());
    parallel_for(queries.size(),
                 [&](std::size_t i) { oracle[i] = hull(queries[i][0], queries[i][1]); });
  }

  res.queries = queries.size();
  std::vector<EnvelopePoint> vals(queries.size());
  parallel_for(queries.size(), [&](std::size_t i) { vals[i] = ev.evaluate(queries[i]); });
  const double tol = ev.settings().tolerance;
  res.worst_point = queries.empty() ? Eigen::VectorXd() : queries.front();
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const EnvelopePoint& v = vals[i];
    if (!v.converged) ++res.nonconverged;
    res.max_residual = std::max(res.max_residual, v.residual);
    const double gap = std::abs(v.value - oracle[i]);
    const double slack = tol * (1.0 + std::abs(v.value));
    res.solver_slack = std::max(res.solver_slack, slack);
    if (gap > res.max_gap) {
      res.max_gap = gap;
      res.worst_point = queries[i];
    }
    if (gap > res.bound + slack) res.pass = false;
  }
  return res;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"jetex: extension of finite 1-jets through convex envelopes"};
  app.require_subcommand(1);

  Common common;
  std::string points_path;
  std::string output_path;
  std::string report_path;
  std::vector<double> bbox;
  int grid_resolution = 101;
  std::optional<int> oracle_resolution;

  auto* check = app.add_subcommand("check", "Run the condition check of a class");
  add_jet_options(check, common);
  add_class_options(check, common);

  auto* constants = app.add_subcommand("constants", "Minimal constants for every class");
  add_jet_options(constants, common);
  constants->add_option("--alpha", common.alpha, "Power modulus exponent")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Evaluate F and grad F at listed points (CSV)");
  add_jet_options(eval, common);
  add_class_options(eval, common);
  add_solver_options(eval, common);
  eval->add_option("--points", points_path, "Points file")->required();
  eval->add_option("--output", output_path, "CSV destination (default stdout)");
  eval->add_option("--report", report_path, "Write the run report (JSON) here");

  auto* grid = app.add_subcommand("grid", "Evaluate on a tensor grid (CSV with g and m)");
  add_jet_options(grid, common);
  add_class_options(grid, common);
  add_solver_options(grid, common);
  grid->add_option("--bbox", bbox, "lo0 hi0 [lo1 hi1 ...]")->required()->expected(2, 6);
  grid->add_option("--resolution", grid_resolution, "Nodes per axis")->capture_default_str();
  grid->add_option("--output", output_path, "CSV destination (default stdout)");
  grid->add_option("--report", report_path, "Write the run report (JSON) here");

  auto* oracle = app.add_subcommand("oracle-check", "Compare F with a sampled lower hull");
  add_jet_options(oracle, common);
  add_class_options(oracle, common);
  add_solver_options(oracle, common);
  oracle->add_option("--bbox", bbox, "lo0 hi0 [lo1 hi1]")->required()->expected(2, 4);
  oracle->add_option("--resolution", oracle_resolution,
                     "Oracle nodes per axis (default 401 in 1-D, 201 in 2-D)");

  auto* selftest = app.add_subcommand("selftest", "Closed-form regression checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*check) return cmd_check(common, out, err);
    if (*constants) return cmd_constants(common, out);
    if (*eval) return cmd_eval(common, points_path, output_path, report_path, out, err);
    if (*grid) {
      return cmd_grid(common, bbox, grid_resolution, output_path, report_path, out, err);
    }
    if (*oracle) return cmd_oracle_check(common, bbox, oracle_resolution, out);
    if (*selftest) return cmd_selftest(out);
  } catch (const CommandFailure& f) {
    out << f.report().dump(2) << '\n';
    const json& rep = f.report();
    if (rep.contains("condition") && !rep["condition"]["worst_pair"].is_null()) {
      err << "infeasible: witness pair " << rep["condition"]["worst_pair"].dump() << '\n';
    } else if (rep.contains("minimal_constant")) {
      err << "infeasible: witness pair " << rep["minimal_constant"]["witness"].dump() << '\n';
    }
    return f.code();
  } catch (const SolverDidNotConverge& e) {
    err << "error: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const Error& e) {
    return map_error(e, err);
  } catch (const std::exception& e) {
    return map_error(e, err);
  }
  return kUsage;
}

} // namespace jetex::cli
