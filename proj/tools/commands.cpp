#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "levylap/errors.hpp"
#include "levylap/rng.hpp"
#include "levylap/transport.hpp"

namespace levylap::cli {

namespace {

constexpr double kTransportTol = 1e-8;
constexpr double kOrder4Ratio = 16.0;
constexpr double kRatioSlack = 0.3;
constexpr double kDualityTol = 1e-10;
constexpr double kYmTol = 1e-8;
constexpr double kBianchiAnalyticTol = 1e-9;
constexpr double kBianchiFdTol = 1e-6;
constexpr double kDecayRatio = 0.6;
constexpr double kConvergedZero = 1e-14;
constexpr double kOrthonormalityTol = 1e-6;

const std::string& pass_or_fail(bool ok) {
  static const std::string pass = "pass", fail = "fail";
  return ok ? pass : fail;
}

std::vector<Curve> select_curves(const ExperimentConfig& cfg, const std::string& id) {
  std::vector<Curve> curves = build_curves(cfg.curves, cfg.connection.center);
  if (id == "all") return curves;
  for (const auto& c : curves)
    if (c.id() == id) return {c};
  throw ConfigError("unknown curve id '" + id + "'");
}

std::string num(double x) { return format_number(x); }

}  // namespace

CommandOutput run_curvature(const ExperimentConfig& cfg, const CurvatureOptions& o) {
  if (o.points < 1 || !(o.radius > 0.0)) throw ConfigError("curvature: need points >= 1, radius > 0");
  const Connection a = build_connection(cfg.connection);
  const Metric metric = build_metric(cfg.metric);
  const std::string& kind = cfg.connection.kind;
  const bool dual = kind == "sd" || kind == "asd";
  const bool harmonic = dual || kind == "flat";
  const double bianchi_tol = a.has_analytic_hessian() ? kBianchiAnalyticTol : kBianchiFdTol;

  CsvTable t({"index", "x0", "x1", "x2", "x3", "F", "F_plus", "F_minus", "ym_residual",
              "bianchi_residual", "action_density"});
  double worst_dual = 0.0, worst_ym = 0.0, worst_bianchi = 0.0;
  for (int i = 0; i < o.points; ++i) {
    SplitMix64 rng = SplitMix64::stream(cfg.curves.seed, static_cast<std::uint64_t>(i));
    Vec4 d;
    do {
      for (int m = 0; m < 4; ++m) d[m] = rng.uniform(-1.0, 1.0);
    } while (d.norm() > 1.0);
    const Vec4 x = cfg.connection.center + o.radius * d;
    const GaugeTwoForm f = curvature(a, x);
    const auto [plus, minus] = sd_split(metric, x, f);
    const double ym = max_norm(ym_residual(a, metric, x));
    const double bianchi = max_norm(bianchi_residual(a, x, metric));
    if (f.norm() > 0.0) {
      const double ratio = (kind == "sd" ? minus.norm() : plus.norm()) / f.norm();
      if (dual) worst_dual = std::max(worst_dual, ratio);
    }
    worst_ym = std::max(worst_ym, ym);
    worst_bianchi = std::max(worst_bianchi, bianchi);
    t.add({std::to_string(i), num(x[0]), num(x[1]), num(x[2]), num(x[3]), num(f.norm()),
           num(plus.norm()), num(minus.norm()), num(ym), num(bianchi),
           num(action_density(a, metric, x))});
  }
  bool ok = worst_bianchi <= bianchi_tol;
  if (dual) ok = ok && worst_dual <= kDualityTol;
  if (harmonic) ok = ok && worst_ym <= kYmTol;
  CommandOutput out;
  out.status = pass_or_fail(ok);
  out.result = {{"connection", a.name()},
                {"metric", metric.name()},
                {"points", o.points},
                {"radius", o.radius},
                {"analytic_derivatives", a.has_analytic_hessian()},
                {"max_duality_defect", dual ? json(worst_dual) : json(nullptr)},
                {"max_ym_residual", worst_ym},
                {"max_bianchi_residual", worst_bianchi},
                {"thresholds",
                 {{"duality", kDualityTol}, {"ym", kYmTol}, {"bianchi", bianchi_tol}}}};
  out.tables.emplace_back("", std::move(t));
  return out;
}

CommandOutput run_transport(const ExperimentConfig& cfg, const CurveSelection& o) {
  const Connection a = build_connection(cfg.connection);
  CsvTable t({"curve_id", "unitarity", "determinant", "multiplicativity", "reparameterization",
              "constant_restriction", "splice_endpoint", "convergence_ratio"});
  json rows = json::array();
  bool ok = true;
  for (const Curve& c : select_curves(cfg, o.curve)) {
    const TransportProperties p = transport_properties(a, c, cfg.numerics.transport_steps);
    const double worst = std::max({p.unitarity, p.determinant, p.multiplicativity,
                                   p.reparameterization, p.constant_restriction, p.splice_endpoint});
    const bool converged = std::abs(p.convergence_ratio - kOrder4Ratio) <= kRatioSlack * kOrder4Ratio;
    ok = ok && worst <= kTransportTol && converged;
    t.add({c.id(), num(p.unitarity), num(p.determinant), num(p.multiplicativity),
           num(p.reparameterization), num(p.constant_restriction), num(p.splice_endpoint),
           num(p.convergence_ratio)});
    rows.push_back({{"curve_id", c.id()},
                    {"unitarity", p.unitarity},
                    {"determinant", p.determinant},
                    {"multiplicativity", p.multiplicativity},
                    {"reparameterization", p.reparameterization},
                    {"constant_restriction", p.constant_restriction},
                    {"splice_endpoint", p.splice_endpoint},
                    {"convergence_ratio", p.convergence_ratio}});
  }
  CommandOutput out;
  out.status = pass_or_fail(ok);
  out.result = {{"connection", a.name()},
                {"steps", cfg.numerics.transport_steps},
                {"tolerance", kTransportTol},
                {"ratio_range", {kOrder4Ratio * (1 - kRatioSlack), kOrder4Ratio * (1 + kRatioSlack)}},
                {"curves", rows}};
  out.tables.emplace_back("", std::move(t));
  return out;
}

std::function<double(double)> basis_weight(const std::string& name) {
  if (name == "t") return [](double t) { return t; };
  if (name == "t2") return [](double t) { return t * t; };
  if (name == "step") return [](double t) { return t >= 0.5 ? 1.0 : 0.0; };
  if (name == "step13") return [](double t) { return t >= 1.0 / 3.0 ? 1.0 : 0.0; };
  throw ConfigError("unknown basis-check weight '" + name + "'");
}

CommandOutput run_basis_check(const ExperimentConfig& cfg, const BasisCheckOptions& o) {
  if (o.n.empty()) throw ConfigError("basis-check: empty n list");
  for (std::size_t i = 0; i < o.n.size(); ++i)
    if (o.n[i] < 1 || (i > 0 && o.n[i] <= o.n[i - 1]))
      throw ConfigError("basis-check: n must be positive and increasing");
  const auto h = basis_weight(o.weight);
  const BasisFamily basis = build_basis(cfg.basis, o.n.back());
  CsvTable t({"n", "residual", "ratio"});
  json rows = json::array();
  bool ok = true;
  double prev = 0.0;
  for (std::size_t i = 0; i < o.n.size(); ++i) {
    const double r = equidensity_residual(basis, h, o.n[i]);
    double ratio = NAN;
    if (i > 0) {
      const bool zero = std::abs(r) <= kConvergedZero && std::abs(prev) <= kConvergedZero;
      ratio = zero ? 0.0 : std::abs(r) / std::abs(prev);
      ok = ok && (zero || ratio <= kDecayRatio);
    }
    t.add({std::to_string(o.n[i]), num(r), i > 0 ? num(ratio) : ""});
    rows.push_back({{"n", o.n[i]}, {"residual", r}, {"ratio", i > 0 ? json(ratio) : json(nullptr)}});
    prev = r;
  }
  CommandOutput out;
  out.result = {{"basis", basis.name()}, {"weight", o.weight}, {"rows", rows},
                {"decay_ratio_limit", kDecayRatio}};
  if (basis.kind() == BasisKind::kSturmLiouville) {
    const Eigen::MatrixXd g = gram_matrix(basis, o.n.back());
    const double defect = (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
    out.result["orthonormality_defect"] = defect;
    ok = ok && defect <= kOrthonormalityTol;
  }
  out.status = pass_or_fail(ok);
  out.tables.emplace_back("", std::move(t));
  return out;
}

CommandOutput run_levy(const ExperimentConfig& cfg, const LevyOptions& o) {
  const Connection a = build_connection(cfg.connection);
  const Metric metric = build_metric(cfg.metric);
  const RotationCurve w = RotationCurve::parse(o.w);
  const BasisFamily basis = build_basis(cfg.basis, cfg.numerics.modes);
  ClosedFormOptions closed;
  closed.pairing.pairing_constant = cfg.numerics.pairing_constant;
  closed.pairing.right_invariant = cfg.rotation.right_invariant;
  closed.panels = cfg.numerics.panels;
  std::optional<CesaroOptions> ces;
  if (cfg.numerics.cesaro) {
    CesaroOptions co;
    co.modes = cfg.numerics.modes;
    co.fd_step = cfg.numerics.fd_step;
    co.exp_steps = cfg.numerics.exp_steps;
    co.threads = cfg.numerics.threads;
    ces = co;
  }
  CsvTable t({"curve_id", "w_id", "closed_norm", "first_norm", "second_norm", "cesaro_norm",
              "increment_norm", "difference", "unitarity_drift", "quadrature_flagged"});
  CsvTable partials({"curve_id", "n", "partial_norm"});
  json reports = json::array();
  bool ok = true;
  for (const Curve& c : select_curves(cfg, o.curve)) {
    const LevyReport r = levy_report(a, metric, c, w, basis, closed, ces,
                                     cfg.numerics.transport_steps, cfg.numerics.cesaro_steps);
    ok = ok && !r.quadrature_flagged;
    std::string ces_norm, inc_norm, diff;
    if (r.cesaro_estimate) {
      const CMat value = cfg.numerics.estimator == CesaroEstimator::kTailMean
                             ? *r.cesaro_estimate
                             : *r.cesaro_increment_estimate;
      const double d = (value - r.closed_form).norm();
      const double bound = std::max(cfg.tolerances.cesaro_relative * r.closed_form.norm(),
                                    cfg.tolerances.cesaro_absolute);
      ok = ok && d <= bound;
      ces_norm = num(r.cesaro_estimate->norm());
      inc_norm = num(r.cesaro_increment_estimate->norm());
      diff = num(d);
      for (std::size_t n = 0; n < r.cesaro_partials.size(); ++n)
        partials.add({c.id(), std::to_string(n + 1), num(r.cesaro_partials[n].norm())});
    }
    t.add({c.id(), w.id(), num(r.closed_form.norm()), num(r.first_term.norm()),
           num(r.second_term.norm()), ces_norm, inc_norm, diff, num(r.unitarity_drift),
           r.quadrature_flagged ? "1" : "0"});
    reports.push_back(levy_report_json(r));
  }
  CommandOutput out;
  out.status = pass_or_fail(ok);
  out.result = {{"w", w.id()}, {"span", w.span()}, {"reports", reports}};
  out.tables.emplace_back("", std::move(t));
  if (partials.rows() > 0) out.tables.emplace_back("partials", std::move(partials));
  return out;
}

CommandOutput run_theorem(const ExperimentConfig& cfg) {
  const TheoremVerdict v = theorem_check(cfg);
  CsvTable t({"curve_id", "left_norm", "right_norm", "vote"});
  if (v.factors.size() == 2 && !v.factors[0].reports.empty()) {
    for (std::size_t i = 0; i < v.votes.size(); ++i)
      t.add({v.factors[0].reports[i].curve_id, num(v.factors[0].norms[i]),
             num(v.factors[1].norms[i]), v.votes[i]});
  }
  CommandOutput out;
  out.status = v.status;
  out.result = theorem_json(v);
  out.tables.emplace_back("", std::move(t));
  return out;
}

CommandOutput run_lemmas(const ExperimentConfig& cfg) {
  const LemmaVerdict v = lemma_suite(cfg);
  CsvTable t({"curve_id", "w_id", "factor", "check", "status", "value", "threshold"});
  for (const auto& row : v.curves)
    for (const auto& c : row.checks)
      t.add({row.curve_id, row.w_id, to_string(row.factor), c.name, c.status, num(c.value),
             num(c.threshold)});
  CommandOutput out;
  out.status = v.status;
  out.result = lemma_json(v);
  out.tables.emplace_back("", std::move(t));
  return out;
}

CommandOutput run_calibrate(const ExperimentConfig& cfg) {
  const CalibrationResult c = calibrate(cfg);
  CsvTable t({"c0", "max_residual", "chosen"});
  for (const auto& k : c.candidates)
    t.add({num(k.c0), num(k.max_residual), k.c0 == c.chosen ? "1" : "0"});
  CommandOutput out;
  out.status = pass_or_fail(c.matches_frozen);
  out.result = calibration_json(c);
  out.tables.emplace_back("", std::move(t));
  return out;
}

int exit_code(const std::string& status) {
  return status == "fail" ? kExitCriterion : kExitPass;
}

json write_outputs(const std::string& command, const ExperimentConfig& cfg,
                   const CommandOutput& output, const std::string& out_dir,
                   const std::string& timestamp) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> paths;
  const std::string json_path = (fs::path(out_dir) / (command + ".json")).string();
  paths.push_back(json_path);
  for (const auto& [suffix, table] : output.tables) {
    const std::string stem = suffix.empty() ? command : command + "_" + suffix;
    const std::string p = (fs::path(out_dir) / (stem + ".csv")).string();
    table.write(p);
    paths.push_back(p);
  }
  json doc = report_document(command, output.status, cfg, paths, output.result, timestamp);
  write_json(json_path, doc);
  return doc;
}

}  // namespace levylap::cli
