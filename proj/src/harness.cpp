#include "levylap/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levylap/errors.hpp"
#include "levylap/parallel.hpp"
#include "levylap/rng.hpp"
#include "levylap/transport.hpp"

namespace levylap {

const char* to_string(CesaroEstimator e) {
  return e == CesaroEstimator::kTailMean ? "tail_mean" : "increment_tail";
}

CesaroEstimator parse_estimator(const std::string& s) {
  if (s == "tail_mean") return CesaroEstimator::kTailMean;
  if (s == "increment_tail") return CesaroEstimator::kIncrementTail;
  throw ConfigError("unknown Cesaro estimator '" + s + "'");
}

Connection build_connection(const ConnectionSpec& spec) {
  const std::string& k = spec.kind;
  if (k == "flat") return flat_connection(2);
  if (k == "sd") return make_instanton(Duality::kSelfDual, spec.rho, spec.center);
  if (k == "asd") return make_instanton(Duality::kAntiSelfDual, spec.rho, spec.center);
  if (k == "perturbed_sd" || k == "perturbed_asd") {
    const Duality d = k == "perturbed_sd" ? Duality::kSelfDual : Duality::kAntiSelfDual;
    const Vec4 bump = spec.center + Vec4(0.3, -0.2, 0.1, 0.4);
    return perturbed_connection(make_instanton(d, spec.rho, spec.center), spec.epsilon, bump);
  }
  if (k == "random_polynomial") return random_polynomial_connection(spec.seed);
  throw ConfigError("unknown connection kind '" + k + "'");
}

Metric build_metric(const MetricSpec& spec) {
  if (spec.kind == "flat") return Metric::flat();
  if (spec.kind == "conformal") {
    if (spec.axis < 0 || spec.axis > 3) throw ConfigError("metric.axis must be in 0..3");
    return Metric::conformal_linear(spec.alpha, spec.axis);
  }
  throw ConfigError("unknown metric kind '" + spec.kind + "'");
}

BasisFamily build_basis(const BasisSpec& spec, int modes) {
  if (spec.kind == "sine") return BasisFamily::sine();
  if (spec.kind != "sturm_liouville") throw ConfigError("unknown basis kind '" + spec.kind + "'");
  BasisFamily::Fn r;
  if (spec.potential == "zero") {
    r = [](double) { return 0.0; };
  } else if (spec.potential == "sin2pi") {
    r = [](double t) { return std::sin(2.0 * std::numbers::pi * t); };
  } else if (spec.potential == "t") {
    r = [](double t) { return t; };
  } else {
    throw ConfigError("unknown Sturm-Liouville potential '" + spec.potential + "'");
  }
  return BasisFamily::sturm_liouville(r, spec.potential, modes, spec.grid);
}

RotationCurve build_rotation(const RotationSpec& spec, Isoclinic factor) {
  std::vector<Profile> profiles;
  for (const auto& p : spec.profiles) profiles.push_back(Profile::parse(p));
  return RotationCurve::make(factor, profiles);
}

std::vector<RotationCurve> build_rotations(const RotationSpec& spec) {
  if (spec.factor == "left") return {build_rotation(spec, Isoclinic::kLeft)};
  if (spec.factor == "right") return {build_rotation(spec, Isoclinic::kRight)};
  if (spec.factor == "both")
    return {build_rotation(spec, Isoclinic::kLeft), build_rotation(spec, Isoclinic::kRight)};
  if (spec.factor == "identity") return {RotationCurve::identity()};
  if (spec.factor == "mixed") {
    std::string joined;
    for (const auto& p : spec.profiles) joined += (joined.empty() ? "" : ",") + p;
    return {RotationCurve::parse("mixed:" + joined)};
  }
  throw ConfigError("unknown rotation factor '" + spec.factor + "'");
}

namespace {

constexpr int kExtentSamples = 257;

// Largest |x(t) - center| over a uniform sample of a curve given relative
// to the center.
template <class Fn>
double extent(Fn&& rel) {
  double m = 0.0;
  for (int i = 0; i < kExtentSamples; ++i)
    m = std::max(m, rel(static_cast<double>(i) / (kExtentSamples - 1)).norm());
  return m;
}

Curve random_polynomial_curve(int index, SplitMix64 rng, const Vec4& center, double limit) {
  std::vector<Vec4> c(4);
  for (auto& v : c)
    for (int m = 0; m < 4; ++m) v[m] = rng.uniform(-1.0, 1.0);
  const double e = extent([&](double t) { return Vec4(c[0] + t * (c[1] + t * (c[2] + t * c[3]))); });
  if (e > limit)
    for (auto& v : c) v *= limit / e;
  c[0] += center;
  return Curve::polynomial("poly-" + std::to_string(index), c);
}

Curve random_trigonometric_curve(int index, SplitMix64 rng, const Vec4& center, double limit) {
  Vec4 offset, amplitude, frequency, phase;
  for (int m = 0; m < 4; ++m) offset[m] = rng.uniform(-0.4, 0.4);
  for (int m = 0; m < 4; ++m) amplitude[m] = rng.uniform(0.2, 0.6);
  for (int m = 0; m < 4; ++m) frequency[m] = rng.uniform() < 0.5 ? 1.0 : 2.0;
  for (int m = 0; m < 4; ++m) phase[m] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double e = extent([&](double t) {
    Vec4 x;
    for (int m = 0; m < 4; ++m)
      x[m] = offset[m] + amplitude[m] * std::sin(std::numbers::pi * frequency[m] * t + phase[m]);
    return x;
  });
  if (e > limit) {
    offset *= limit / e;
    amplitude *= limit / e;
  }
  return Curve::trigonometric("trig-" + std::to_string(index), Vec4(offset + center), amplitude,
                              frequency, phase);
}

}  // namespace

std::vector<Curve> build_curves(const CurveSetSpec& spec, const Vec4& center) {
  if (spec.polynomial < 0 || spec.trigonometric < 0)
    throw ConfigError("curve counts must be non-negative");
  if (!(spec.radius > 0.0)) throw ConfigError("curves.radius must be positive");
  const double limit = 0.9 * spec.radius;
  std::vector<Curve> out;
  int i = 0;
  for (int p = 0; p < spec.polynomial; ++p, ++i)
    out.push_back(random_polynomial_curve(i, SplitMix64::stream(spec.seed, i), center, limit));
  for (int q = 0; q < spec.trigonometric; ++q, ++i)
    out.push_back(random_trigonometric_curve(i, SplitMix64::stream(spec.seed, i), center, limit));
  return out;
}

SectorCorrespondence sector_correspondence() {
  const Metric flat = Metric::flat();
  const Vec4 origin = Vec4::Zero();
  // Relative distance of each generator to the self-dual and the
  // anti-self-dual sector.
  auto defects = [&](Isoclinic f) {
    double sd = 0.0, asd = 0.0;
    for (int i = 0; i < 3; ++i) {
      const RealTwoForm g = to_two_form(So4Element::generator(f, i));
      const RealTwoForm star = hodge_star2(flat, origin, g);
      sd = std::max(sd, (g - star).norm() / g.norm());
      asd = std::max(asd, (g + star).norm() / g.norm());
    }
    return std::pair{sd, asd};
  };
  const auto [left_sd, left_asd] = defects(Isoclinic::kLeft);
  const auto [right_sd, right_asd] = defects(Isoclinic::kRight);
  SectorCorrespondence s;
  if (left_sd + right_asd <= left_asd + right_sd) {
    s.self_dual_factor = Isoclinic::kLeft;
    s.max_defect = std::max(left_sd, right_asd);
  } else {
    s.self_dual_factor = Isoclinic::kRight;
    s.max_defect = std::max(right_sd, left_asd);
  }
  return s;
}

DualityEvidence duality_evidence(const Connection& a, const Metric& metric,
                                 const std::vector<Curve>& curves, double tolerance,
                                 int samples_per_curve) {
  constexpr double kFlatCurvature = 1e-12;
  DualityEvidence d;
  for (const auto& c : curves) {
    for (int i = 0; i < samples_per_curve; ++i) {
      const double t = (i + 0.5) / samples_per_curve;
      const Vec4 x = c.position(t);
      const GaugeTwoForm f = curvature(a, x);
      const double norm = f.norm();
      d.max_curvature = std::max(d.max_curvature, norm);
      if (norm <= kFlatCurvature) continue;
      const auto [plus, minus] = sd_split(metric, x, f);
      d.max_sd_defect = std::max(d.max_sd_defect, minus.norm() / norm);
      d.max_asd_defect = std::max(d.max_asd_defect, plus.norm() / norm);
    }
  }
  if (d.max_curvature <= kFlatCurvature)
    d.label = "flat";
  else if (d.max_sd_defect <= tolerance)
    d.label = "sd";
  else if (d.max_asd_defect <= tolerance)
    d.label = "asd";
  else
    d.label = "non_dual";
  return d;
}

CMat cesaro_value(const CesaroResult& r, CesaroEstimator e) {
  return e == CesaroEstimator::kTailMean ? r.estimate : r.increment_estimate;
}

namespace {

const char* kQuantifierNote =
    "Curve-set quantifier: harmonicity for all curves is only sampled on a finite set. "
    "A failure on one curve falsifies it; a pass on every curve does not verify it.";

ClosedFormOptions closed_options(const ExperimentConfig& cfg) {
  ClosedFormOptions o;
  o.pairing.pairing_constant = cfg.numerics.pairing_constant;
  o.pairing.right_invariant = cfg.rotation.right_invariant;
  o.panels = cfg.numerics.panels;
  return o;
}

CesaroOptions cesaro_options(const ExperimentConfig& cfg) {
  CesaroOptions o;
  o.modes = cfg.numerics.modes;
  o.fd_step = cfg.numerics.fd_step;
  o.exp_steps = cfg.numerics.exp_steps;
  o.threads = cfg.numerics.threads;
  return o;
}

// The factor expected to annihilate a connection with this duality label.
std::optional<Isoclinic> expected_factor(const DualityEvidence& d, const SectorCorrespondence& s) {
  if (d.label == "asd") return s.self_dual_factor;
  if (d.label == "sd") return other(s.self_dual_factor);
  return std::nullopt;
}

std::string expected_outcome(const DualityEvidence& d) {
  if (d.label == "flat") return "both_harmonic";
  if (d.label == "non_dual") return "neither";
  return "exclusive_or";
}

// Closed form for every curve in parallel (Cesaro sequentially afterwards,
// since it is parallel internally). Reports come back in curve order.
std::vector<LevyReport> run_reports(const ExperimentConfig& cfg, const Connection& a,
                                    const Metric& metric, const std::vector<Curve>& curves,
                                    const RotationCurve& w, const BasisFamily& basis) {
  const ClosedFormOptions closed = closed_options(cfg);
  std::vector<LevyReport> out(curves.size());
  parallel_for(
      curves.size(),
      [&](std::size_t i) {
        out[i] = levy_report(a, metric, curves[i], w, basis, closed, std::nullopt,
                             cfg.numerics.transport_steps, cfg.numerics.cesaro_steps);
      },
      cfg.numerics.threads);
  if (cfg.numerics.cesaro) {
    const CesaroOptions co = cesaro_options(cfg);
    for (std::size_t i = 0; i < curves.size(); ++i) {
      const CesaroResult cr =
          levy_cesaro_transport(a, curves[i], w, basis, metric, co, cfg.numerics.cesaro_steps);
      out[i].modes = co.modes;
      out[i].fd_step = co.fd_step;
      out[i].cesaro_partials = cr.partials;
      out[i].cesaro_estimate = cr.estimate;
      out[i].cesaro_increment_estimate = cr.increment_estimate;
    }
  }
  return out;
}

int basis_modes(const ExperimentConfig& cfg) { return std::max(cfg.numerics.modes, 1); }

}  // namespace

TheoremVerdict theorem_check(const ExperimentConfig& cfg) {
  const ToleranceSpec& tol = cfg.tolerances;
  if (!(tol.zero > 0.0) || !(tol.separation_ratio > 1.0))
    throw ConfigError("tolerances: need zero > 0 and separation_ratio > 1");
  TheoremVerdict v;
  v.tol_zero = tol.zero;
  v.tol_nonzero = tol.zero * tol.separation_ratio;
  v.notes.push_back(kQuantifierNote);

  const Connection a = build_connection(cfg.connection);
  const Metric metric = build_metric(cfg.metric);
  const std::vector<Curve> curves = build_curves(cfg.curves, cfg.connection.center);
  if (curves.empty()) throw ConfigError("theorem: empty curve set");
  const BasisFamily basis = build_basis(cfg.basis, basis_modes(cfg));

  v.sectors = sector_correspondence();
  v.duality = duality_evidence(a, metric, curves, tol.duality);
  v.expected_outcome = expected_outcome(v.duality);
  v.expected_annihilating = expected_factor(v.duality, v.sectors);

  const std::vector<RotationCurve> ws = {build_rotation(cfg.rotation, Isoclinic::kLeft),
                                         build_rotation(cfg.rotation, Isoclinic::kRight)};
  bool span_ok = true;
  for (const auto& w : ws) {
    FactorResult fr;
    fr.factor = v.factors.empty() ? Isoclinic::kLeft : Isoclinic::kRight;
    fr.w_id = w.id();
    fr.span = w.span();
    span_ok = span_ok && fr.span >= 2;
    v.factors.push_back(std::move(fr));
  }
  if (!span_ok) {
    v.status = "hypothesis_not_met";
    v.outcome = "not_evaluated";
    v.notes.push_back("W spans fewer than 2 directions of its factor; no verdict is issued.");
    return v;
  }

  for (std::size_t f = 0; f < ws.size(); ++f) {
    FactorResult& fr = v.factors[f];
    fr.reports = run_reports(cfg, a, metric, curves, ws[f], basis);
    for (const auto& r : fr.reports) {
      fr.norms.push_back(r.closed_form.norm());
      fr.max_norm = std::max(fr.max_norm, fr.norms.back());
    }
  }

  const FactorResult& left = v.factors[0];
  const FactorResult& right = v.factors[1];
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const bool l = left.norms[i] <= tol.zero, r = right.norms[i] <= tol.zero;
    v.votes.push_back(l && r ? "both" : l ? "left" : r ? "right" : "none");
  }
  v.consistent_labeling =
      std::all_of(v.votes.begin(), v.votes.end(), [&](const auto& s) { return s == v.votes[0]; });

  const bool lz = left.max_norm <= tol.zero, rz = right.max_norm <= tol.zero;
  const bool lbig = left.max_norm >= v.tol_nonzero, rbig = right.max_norm >= v.tol_nonzero;
  if (lz && rbig) {
    v.outcome = "exclusive_or";
    v.annihilating = Isoclinic::kLeft;
  } else if (rz && lbig) {
    v.outcome = "exclusive_or";
    v.annihilating = Isoclinic::kRight;
  } else if (lz && rz) {
    v.outcome = "both_harmonic";
  } else if (std::min(left.max_norm, right.max_norm) >= tol.non_dual_floor) {
    v.outcome = "neither";
  } else {
    v.outcome = "inconclusive";
  }
  if (!v.consistent_labeling && v.outcome != "neither")
    v.notes.push_back("curves disagree on the annihilating factor; see votes");

  bool ok = v.consistent_labeling && v.outcome == v.expected_outcome;
  if (ok && v.outcome == "exclusive_or") ok = v.annihilating == v.expected_annihilating;
  v.status = ok ? "pass" : "fail";
  return v;
}

SpliceProbe splice_probe(const Connection& a, const Metric& metric, const Curve& curve,
                         const RotationCurve& w, double t, double r,
                         const std::vector<double>& eps, const PairingOptions& pairing, int steps,
                         int panels) {
  if (eps.size() < 2) throw DomainError("splice_probe: need at least two eps values");
  const CurveContext base(a, metric, curve, steps);
  auto lw_const = [&](double at, double lo, double hi) {
    return integrate<GaugeMatrix>([&](double tau) { return lw_density(base, w, at, tau, pairing); },
                                  {lo, hi}, panels)
        .value;
  };
  const GaugeMatrix limit = lw_const(0.0, 0.0, r) + lw_const(t, r, 1.0);
  SpliceProbe p;
  p.eps = eps;
  for (double e : eps) {
    const Curve s = splice(curve, t, r, e);
    const CurveContext ctx(a, metric, s, steps);
    const GaugeMatrix value =
        integrate<GaugeMatrix>([&](double tau) { return lw_density(ctx, w, tau, tau, pairing); },
                               cuts_with(s.breakpoints()), panels)
            .value;
    p.defect.push_back((value - limit).norm());
  }
  // Least-squares slope in log-log coordinates; undefined when a defect is 0.
  const bool positive =
      std::all_of(p.defect.begin(), p.defect.end(), [](double d) { return d > 0.0; });
  if (positive) {
    double mx = 0.0, my = 0.0;
    const double n = static_cast<double>(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
      mx += std::log(eps[i]) / n;
      my += std::log(p.defect[i]) / n;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const double dx = std::log(eps[i]) - mx;
      sxy += dx * (std::log(p.defect[i]) - my);
      sxx += dx * dx;
    }
    p.order = sxy / sxx;
  }
  return p;
}

namespace {

constexpr double kSpliceT = 0.6;
constexpr double kSpliceR = 0.5;
const std::vector<double> kSpliceEps{0.02, 0.01, 0.005};
constexpr int kGrid = 8;

SubCheck make_check(std::string name, bool premise, bool ok, double value, double threshold,
                    std::string detail = {}) {
  SubCheck c{std::move(name), "", value, threshold, std::move(detail)};
  c.status = !premise ? "premise_not_met" : ok ? "pass" : "fail";
  return c;
}

double grid_point(int i) { return (i + 0.5) / kGrid; }

}  // namespace

LemmaVerdict lemma_suite(const ExperimentConfig& cfg) {
  const ToleranceSpec& tol = cfg.tolerances;
  LemmaVerdict v;
  v.notes.push_back(kQuantifierNote);

  const Connection a = build_connection(cfg.connection);
  const Metric metric = build_metric(cfg.metric);
  const std::vector<Curve> curves = build_curves(cfg.curves, cfg.connection.center);
  const BasisFamily basis = build_basis(cfg.basis, basis_modes(cfg));
  const ClosedFormOptions closed = closed_options(cfg);
  v.sectors = sector_correspondence();
  v.duality = duality_evidence(a, metric, curves, tol.duality);
  const std::optional<Isoclinic> expected = expected_factor(v.duality, v.sectors);

  for (const RotationCurve& w : build_rotations(cfg.rotation)) {
    const bool single = w.factor() == RotationFactor::kLeft || w.factor() == RotationFactor::kRight;
    const Isoclinic factor = w.factor() == RotationFactor::kRight ? Isoclinic::kRight : Isoclinic::kLeft;
    // Whether duality predicts that this W annihilates the connection.
    const bool predicted_zero = v.duality.label == "flat" || w.factor() == RotationFactor::kConstant ||
                                (single && expected && *expected == factor);

    std::vector<LemmaCurveResult> rows(curves.size());
    parallel_for(
        curves.size(),
        [&](std::size_t i) {
          const Curve& c = curves[i];
          LemmaCurveResult& row = rows[i];
          row.curve_id = c.id();
          row.w_id = w.id();
          row.factor = factor;
          const CurveContext ctx(a, metric, c, cfg.numerics.transport_steps);
          const ClosedFormResult cf = levy_closed_form(ctx, w, closed);
          row.closed_norm = cf.value.norm();
          const bool harmonic = row.closed_norm <= tol.zero;

          // The Cesaro agreement check is filled in afterwards (it runs outside this loop).
          row.checks.push_back({"cesaro-agreement", "skipped", 0.0, 0.0, "numerics.cesaro is off"});

          const double first = cf.first_term.norm(), lw = cf.lw_integral.norm();
          row.checks.push_back(make_check("term-split", harmonic,
                                          first <= tol.zero && lw <= tol.zero, std::max(first, lw),
                                          tol.zero, "max of first-term and lw-integral norms"));

          const SpliceProbe sp = splice_probe(a, metric, c, w, kSpliceT, kSpliceR, kSpliceEps,
                                              closed.pairing, cfg.numerics.transport_steps,
                                              cfg.numerics.panels);
          const double worst = *std::max_element(sp.defect.begin(), sp.defect.end());
          const bool vanishing = worst <= tol.pointwise;
          const bool linear = sp.order >= tol.splice_order_low && sp.order <= tol.splice_order_high;
          row.checks.push_back(make_check("splice-decay", true, vanishing || linear,
                                          vanishing ? worst : sp.order,
                                          vanishing ? tol.pointwise : tol.splice_order_low,
                                          vanishing ? "defect identically zero"
                                                    : "fitted order of the splice defect"));

          double relation = 0.0, pointwise = 0.0;
          for (int ti = 0; ti < kGrid; ++ti) {
            for (int ri = 0; ri < kGrid; ++ri) {
              const double t = grid_point(ti), r = grid_point(ri);
              const GaugeMatrix at = lw_density(ctx, w, t, r, closed.pairing);
              const GaugeMatrix at0 = lw_density(ctx, w, 0.0, r, closed.pairing);
              relation = std::max(relation, (at - at0).norm());
              pointwise = std::max(pointwise, at.norm());
            }
          }
          const bool premise = harmonic && row.checks[1].status == "pass";
          row.checks.push_back(make_check("splice-pointwise", premise, relation <= tol.pointwise,
                                          relation, tol.pointwise,
                                          "max |L^W(t,r) - L^W(0,r)| on the 8x8 grid"));

          SubCheck l4{"pointwise-zero", "", pointwise, tol.pointwise,
                      "max |L^W(t,r)| on the 8x8 grid"};
          if (pointwise <= tol.pointwise)
            l4.status = "pass";
          else
            l4.status = predicted_zero ? "fail" : "hypothesis_not_met";
          row.checks.push_back(l4);

          const bool agree = harmonic == predicted_zero;
          row.checks.push_back(make_check(
              "duality-agreement", true, agree, row.closed_norm, tol.zero,
              std::string("duality label ") + v.duality.label +
                  (predicted_zero ? " predicts a harmonic transport" : " predicts a non-harmonic transport")));
        },
        cfg.numerics.threads);

    if (cfg.numerics.cesaro) {
      const CesaroOptions co = cesaro_options(cfg);
      for (std::size_t i = 0; i < curves.size(); ++i) {
        const CurveContext ctx(a, metric, curves[i], cfg.numerics.transport_steps);
        const GaugeMatrix closed_value = levy_closed_form(ctx, w, closed).value;
        const CesaroResult cr =
            levy_cesaro_transport(a, curves[i], w, basis, metric, co, cfg.numerics.cesaro_steps);
        const double diff = (cesaro_value(cr, cfg.numerics.estimator) - closed_value).norm();
        const double bound = std::max(tol.cesaro_relative * closed_value.norm(), tol.cesaro_absolute);
        rows[i].cesaro_difference = diff;
        rows[i].checks[0] = make_check("cesaro-agreement", true, diff <= bound, diff, bound,
                                       std::string("estimator ") + to_string(cfg.numerics.estimator));
      }
    }
    for (auto& row : rows) v.curves.push_back(std::move(row));
  }

  bool failed = false, unmet = false;
  for (const auto& row : v.curves)
    for (const auto& c : row.checks) {
      failed = failed || c.status == "fail";
      unmet = unmet || c.status == "hypothesis_not_met";
    }
  v.status = failed ? "fail" : unmet ? "hypothesis_not_met" : "pass";
  return v;
}

std::vector<Curve> calibration_curves(const ExperimentConfig& cfg) {
  CurveSetSpec spec = cfg.curves;
  spec.polynomial = 2;
  spec.trigonometric = 1;
  spec.seed = cfg.curves.seed + 1;
  std::vector<Curve> out = build_curves(spec, cfg.connection.center);
  return out;
}

CalibrationResult calibrate(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.metric = MetricSpec{};
  if (c.connection.kind != "sd" && c.connection.kind != "asd") c.connection.kind = "asd";
  const Connection a = build_connection(c.connection);
  const Metric flat = Metric::flat();
  const std::vector<Curve> curves = calibration_curves(c);
  const BasisFamily basis = build_basis(c.basis, basis_modes(c));
  const SectorCorrespondence sectors = sector_correspondence();
  const Isoclinic annihilating =
      c.connection.kind == "asd" ? sectors.self_dual_factor : other(sectors.self_dual_factor);

  CalibrationResult res;
  res.factor = other(annihilating);
  res.frozen = cfg.numerics.pairing_constant;
  const RotationCurve w = build_rotation(c.rotation, res.factor);
  res.w_id = w.id();

  ClosedFormOptions unit = closed_options(c);
  unit.pairing.pairing_constant = 1.0;
  std::vector<GaugeMatrix> first, second;
  for (const Curve& curve : curves) {
    res.curve_ids.push_back(curve.id());
    const ClosedFormResult cf = levy_closed_form(a, flat, curve, w, unit);
    first.push_back(cf.first_term);
    second.push_back(cf.second_term);
    res.closed_unit.push_back(cf.value);
    const CesaroResult cr = levy_cesaro_transport(a, curve, w, basis, flat, cesaro_options(c),
                                                  c.numerics.cesaro_steps);
    res.cesaro.push_back(cesaro_value(cr, c.numerics.estimator));
  }
  double best = INFINITY;
  for (double c0 : {1.0, -1.0, 0.5, -0.5}) {
    CalibrationCandidate cand{c0, 0.0};
    // The second term is linear in c0.
    for (std::size_t i = 0; i < curves.size(); ++i)
      cand.max_residual =
          std::max(cand.max_residual, (res.cesaro[i] - (first[i] - c0 * second[i])).norm());
    if (cand.max_residual < best) {
      best = cand.max_residual;
      res.chosen = c0;
    }
    res.candidates.push_back(cand);
  }
  res.matches_frozen = res.chosen == res.frozen;
  return res;
}

}  // namespace levylap
