// Acceptance run: one PASS/FAIL line per criterion, with informational lines
// underneath. Exit status is non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "commands.hpp"
#include "levylap/harness.hpp"
#include "levylap/rng.hpp"

using namespace levylap;
using namespace levylap::cli;

namespace {

// Pinned tolerances.
constexpr double kDualityTol = 1e-10;
constexpr double kYmTol = 1e-8;
constexpr double kBianchiTol = 1e-9;
constexpr double kBianchiFdTol = 1e-6;
constexpr double kCesaroRel = 0.02;
constexpr double kCesaroAbs = 1e-3;
constexpr int kCesaroModes = 256;
constexpr double kCesaroStep = 1e-3;
constexpr double kTheoremZero = 1e-6;
constexpr double kTheoremNonzero = 1e-2;
constexpr double kPerturbedFloor = 1e-3;
constexpr double kTransportTol = 1e-8;
constexpr double kRatioTarget = 16.0;
constexpr double kRatioSpread = 0.3;
constexpr double kExample1Flat = 0.02;
constexpr double kExample1Conformal = 0.03;
constexpr int kExample1Modes = 128;
constexpr double kDecayRatio = 0.6;
constexpr double kConvergedZero = 1e-14;
constexpr double kOrthonormalityTol = 1e-6;
constexpr double kAlgebraTol = 1e-10;

// Runtime budgets in seconds.
constexpr double kBudget[11] = {0, 1, 5, 600, 120, 120, 30, 60, 10, 1, 240};

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> info;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::vector<Vec4> ball_points(int n, double radius, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Vec4> pts;
  while (static_cast<int>(pts.size()) < n) {
    Vec4 x;
    for (int i = 0; i < 4; ++i) x[i] = rng.uniform(-radius, radius);
    if (x.norm() <= radius) pts.push_back(x);
  }
  return pts;
}

const std::vector<Vec4>& sample_points() {
  static const std::vector<Vec4> pts = ball_points(100, 3.0, 20240611);
  return pts;
}

Outcome criterion1() {
  double worst = 0.0;
  for (Duality d : {Duality::kAntiSelfDual, Duality::kSelfDual}) {
    const Connection a = make_instanton(d, 1.0);
    for (const Vec4& x : sample_points()) {
      const GaugeTwoForm f = curvature(a, x);
      const auto [fp, fm] = sd_split(Metric::flat(), x, f);
      worst = std::max(worst, (d == Duality::kAntiSelfDual ? fp.norm() : fm.norm()) / f.norm());
    }
  }
  return {worst <= kDualityTol, fmt("max wrong-sector ratio %.3g (tol %.0e)", worst, kDualityTol)};
}

Outcome criterion2() {
  double ym = 0.0, bianchi = 0.0, bianchi_fd = 0.0;
  for (Duality d : {Duality::kAntiSelfDual, Duality::kSelfDual}) {
    const Connection a = make_instanton(d, 1.0);
    for (const Vec4& x : sample_points()) {
      ym = std::max(ym, max_norm(ym_residual(a, Metric::flat(), x)));
      bianchi = std::max(bianchi, max_norm(bianchi_residual(a, x)));
    }
  }
  Connection r = random_polynomial_connection(1);
  r.set_fd_step(1e-4);
  for (const Vec4& x : sample_points()) bianchi_fd = std::max(bianchi_fd, max_norm(bianchi_residual(r, x)));
  Outcome o;
  o.pass = ym <= kYmTol && bianchi <= kBianchiTol && bianchi_fd <= kBianchiFdTol;
  o.summary = fmt("ym %.3g, bianchi %.3g", ym, bianchi) + fmt(", bianchi (fd) %.3g", bianchi_fd);
  return o;
}

Outcome criterion3() {
  Outcome o;
  ExperimentConfig cfg;
  cfg.connection.kind = "asd";
  cfg.numerics.modes = kCesaroModes;
  cfg.numerics.fd_step = kCesaroStep;
  cfg.numerics.threads = 0;

  const CalibrationResult cal = calibrate(cfg);
  o.info.push_back(fmt("calibration: chose c0 = %g (frozen %g)", cal.chosen, cal.frozen));
  for (const auto& c : cal.candidates)
    o.info.push_back(fmt("  c0 = %5.2f: worst residual %.4g", c.c0, c.max_residual));
  cfg.numerics.pairing_constant = cal.chosen;

  const Connection a = build_connection(cfg.connection);
  const Metric flat = Metric::flat();
  const std::vector<Curve> curves = build_curves(cfg.curves, cfg.connection.center);
  const BasisFamily basis = build_basis(cfg.basis, kCesaroModes);
  ClosedFormOptions closed;
  closed.pairing.pairing_constant = cal.chosen;
  CesaroOptions ces;
  ces.modes = kCesaroModes;
  ces.fd_step = kCesaroStep;

  auto run = [&](Isoclinic factor, bool gate) {
    const RotationCurve w = build_rotation(cfg.rotation, factor);
    int misses = 0;
    double worst_tail = 0.0, worst_increment = 0.0;
    for (const Curve& c : curves) {
      const LevyReport r = levy_report(a, flat, c, w, basis, closed, ces, cfg.numerics.transport_steps,
                                       cfg.numerics.cesaro_steps);
      const double ref = r.closed_form.norm();
      const double bound = std::max(kCesaroRel * ref, kCesaroAbs);
      const double tail = (*r.cesaro_estimate - r.closed_form).norm();
      const double inc = (*r.cesaro_increment_estimate - r.closed_form).norm();
      worst_tail = std::max(worst_tail, tail / bound);
      worst_increment = std::max(worst_increment, inc / bound);
      if (tail > bound) ++misses;
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "  %s %-7s |closed| %.4g  tail-mean diff %.3g  increment diff %.3g  bound %.3g%s",
                    to_string(factor), c.id().c_str(), ref, tail, inc, bound,
                    tail > bound ? "  MISS" : "");
      o.info.push_back(buf);
    }
    const std::string tag = std::string(to_string(factor)) + ":" + (gate ? "gate" : "info");
    o.info.push_back(tag + fmt(": worst tail-mean diff / bound %.3g, worst increment diff / bound %.3g",
                               worst_tail, worst_increment));
    return misses;
  };
  // The asd connection is annihilated by the left factor; the right factor
  // gives a non-trivial closed form to compare against.
  const int misses = run(Isoclinic::kRight, true);
  run(Isoclinic::kLeft, false);
  o.pass = misses == 0;
  o.summary = fmt("tail-mean estimate outside max(2%%, 1e-3) on %g of %g curves (N=256, h=1e-3)",
                  misses, static_cast<double>(curves.size()));
  return o;
}

Outcome criterion4() {
  Outcome o;
  bool ok = true;
  for (const char* kind : {"asd", "sd", "perturbed_asd"}) {
    ExperimentConfig cfg;
    cfg.connection.kind = kind;
    cfg.connection.epsilon = 0.05;
    const TheoremVerdict v = theorem_check(cfg);
    double left = 0.0, right = 0.0, min_norm = 1e300;
    for (const FactorResult& f : v.factors) {
      (f.factor == Isoclinic::kLeft ? left : right) = f.max_norm;
      for (double n : f.norms) min_norm = std::min(min_norm, n);
    }
    bool good;
    if (std::string(kind) == "perturbed_asd") {
      good = left >= kPerturbedFloor && right >= kPerturbedFloor;
    } else {
      const bool left_zero = left <= kTheoremZero, right_zero = right <= kTheoremZero;
      const bool left_big = left >= kTheoremNonzero, right_big = right >= kTheoremNonzero;
      const bool expect_left = std::string(kind) == "asd";
      good = expect_left ? (left_zero && right_big) : (right_zero && left_big);
    }
    good = good && v.status == "pass";
    ok = ok && good;
    char buf[200];
    std::snprintf(buf, sizeof buf, "  %-13s max|left| %.3g  max|right| %.3g  min over curves %.3g  %s / %s",
                  kind, left, right, min_norm, v.outcome.c_str(), v.status.c_str());
    o.info.push_back(buf);
  }
  o.pass = ok;
  o.summary = "exclusive-or for asd/sd, both factors non-zero for the perturbed connection";
  return o;
}

Outcome criterion5() {
  ExperimentConfig cfg;
  cfg.rotation.profiles = {"t"};
  const TheoremVerdict v = theorem_check(cfg);
  return {v.status == "hypothesis_not_met" && !v.annihilating,
          "single-generator W reports status '" + v.status + "'"};
}

Outcome criterion6() {
  const Connection a = make_instanton(Duality::kAntiSelfDual, 1.0);
  double defect = 0.0, lo = 1e300, hi = 0.0;
  for (const Curve& c : build_curves(CurveSetSpec{}, Vec4::Zero())) {
    const TransportProperties p = transport_properties(a, c);
    defect = std::max({defect, p.unitarity, p.determinant, p.multiplicativity, p.reparameterization,
                       p.constant_restriction, p.splice_endpoint});
    lo = std::min(lo, p.convergence_ratio);
    hi = std::max(hi, p.convergence_ratio);
  }
  Outcome o;
  o.pass = defect <= kTransportTol && lo >= kRatioTarget * (1 - kRatioSpread) &&
           hi <= kRatioTarget * (1 + kRatioSpread);
  o.summary = fmt("max property defect %.3g, convergence ratios ", defect) + fmt("[%.2f, %.2f]", lo, hi);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto f = [](const Vec4& x) { return x.squaredNorm(); };
  const CurveFunctional fn = integral_functional(f);
  const std::vector<Curve> curves = build_curves(CurveSetSpec{}, Vec4::Zero());
  const BasisFamily basis = BasisFamily::sine();
  CesaroOptions opt;
  opt.modes = kExample1Modes;
  double flat_err = 0.0, conf_err = 0.0;
  for (const Curve& c : {curves[0], curves[5]})
    for (const char* w : {"left:t,t2", "right:t,t2", "identity"}) {
      const CesaroResult r = levy_cesaro(fn, c, RotationCurve::parse(w), basis, Metric::flat(), opt);
      flat_err = std::max(flat_err, std::abs(r.estimate(0, 0).real() - 8.0) / 8.0);
    }
  const Metric conf = Metric::conformal_linear(0.1);
  for (const Curve& c : {curves[0], curves[5]}) {
    const CesaroResult r = levy_cesaro(fn, c, RotationCurve::parse("left:t,t2"), basis, conf, opt);
    const double ref = laplace_beltrami_integral(
        conf, c, [](const Vec4&) { return 8.0; }, [](const Vec4& x) { return Vec4(2.0 * x); });
    const double err = std::abs(r.estimate(0, 0).real() - ref) / std::abs(ref);
    conf_err = std::max(conf_err, err);
    o.info.push_back("  conformal " + c.id() +
                     fmt(": Cesaro %.6g, Laplace-Beltrami %.6g", r.estimate(0, 0).real(), ref));
  }
  o.pass = flat_err <= kExample1Flat && conf_err <= kExample1Conformal;
  o.summary = fmt("flat max rel. error %.3g, conformal max rel. error %.3g", flat_err, conf_err);
  return o;
}

Outcome criterion8() {
  Outcome o;
  bool ok = true;
  const std::vector<int> ns{8, 16, 32, 64};
  auto trend = [&](const BasisFamily& b, const std::string& label, const std::function<double(double)>& h) {
    std::string line = "  " + label + ":";
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const double r = equidensity_residual(b, h, ns[i]);
      line += fmt(" %.3g", r);
      if (i == 0) continue;
      const double prev = equidensity_residual(b, h, ns[i - 1]);
      const bool converged = std::abs(r) <= kConvergedZero && std::abs(prev) <= kConvergedZero;
      if (!converged && std::abs(r) > kDecayRatio * std::abs(prev)) ok = false;
    }
    o.info.push_back(line);
  };
  const BasisFamily sine = BasisFamily::sine();
  trend(sine, "sine h=t", [](double t) { return t; });
  trend(sine, "sine h=t^2", [](double t) { return t * t; });
  trend(sine, "sine h=1[t>=1/3]", [](double t) { return t >= 1.0 / 3.0 ? 1.0 : 0.0; });
  const BasisFamily sl = BasisFamily::sturm_liouville(
      [](double t) { return std::sin(2.0 * std::numbers::pi * t); }, "sin2pi", 64);
  trend(sl, "sturm-liouville h=t", [](double t) { return t; });
  trend(sl, "sturm-liouville h=t^2", [](double t) { return t * t; });
  const double defect =
      (gram_matrix(sl, 32) - Eigen::MatrixXd::Identity(32, 32)).cwiseAbs().maxCoeff();
  o.pass = ok && defect <= kOrthonormalityTol;
  o.summary = fmt("residual ratio <= %.1f at each doubling; SL orthonormality defect %.3g", kDecayRatio, defect);
  return o;
}

Outcome criterion9() {
  SplitMix64 rng(99);
  double cross = 0.0, decomposition = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Mat4 m = Mat4::Zero();
    GaugeTwoForm l = zero_gauge_form(2);
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        m(a, b) = rng.uniform(-1, 1);
        GaugeMatrix v = zero_gauge(2);
        for (int i = 0; i < 3; ++i) v += rng.uniform(-1, 1) * su2_generator(i);
        l.set(a, b, v);
      }
    const auto [op, om] = so4_project(So4Element(m));
    const auto [lp, lm] = sd_split(Metric::flat(), Vec4::Zero(), l);
    cross = std::max(cross, pair_form(op, lm).norm() / (op.norm() * lm.norm()));
    cross = std::max(cross, pair_form(om, lp).norm() / (om.norm() * lp.norm()));
  }
  const std::vector<Curve> curves = build_curves(CurveSetSpec{}, Vec4::Zero());
  const RotationCurve w = RotationCurve::parse("mixed:t,t2,sin");
  const PairingOptions pairing{kCalibratedPairingConstant, true};
  for (Duality d : {Duality::kAntiSelfDual, Duality::kSelfDual}) {
    const CurveContext ctx(make_instanton(d, 1.0), Metric::flat(), curves[d == Duality::kSelfDual ? 7 : 2]);
    for (double t : {0.1, 0.45, 0.8})
      for (double r : {0.2, 0.6, 0.9}) {
        const auto [op, om] = so4_project(pairing_element(w, r));
        const auto [lp, lm] = sd_split(Metric::flat(), Vec4::Zero(), ctx.transported_curvature(t));
        const GaugeMatrix split = pair_form(op, lp, pairing.pairing_constant) +
                                  pair_form(om, lm, pairing.pairing_constant);
        decomposition = std::max(decomposition, (lw_density(ctx, w, t, r, pairing) - split).norm());
      }
  }
  const SectorCorrespondence s = sector_correspondence();
  Outcome o;
  o.pass = cross <= kAlgebraTol && decomposition <= kAlgebraTol && s.max_defect <= kAlgebraTol;
  o.summary = fmt("cross-annihilation %.3g, L^W decomposition %.3g", cross, decomposition) +
              fmt(", sector defect %.3g", s.max_defect) + " (self-dual factor: " +
              to_string(s.self_dual_factor) + ")";
  return o;
}

Outcome criterion10() {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "levylap_acceptance_c10";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg;
  cfg.connection.kind = "asd";
  cfg.curves.seed = 7;
  std::vector<std::string> dumps;
  for (const char* stamp : {"2000-01-01T00:00:00Z", "2000-01-01T00:00:01Z"})
    dumps.push_back(without_timestamp(write_outputs("theorem", cfg, run_theorem(cfg), dir.string(), stamp)).dump(2));
  std::filesystem::remove_all(dir);
  return {dumps[0] == dumps[1], fmt("two theorem runs, %g bytes of JSON each, compared without timestamp",
                                    static_cast<double>(dumps[0].size()))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"duality construction", criterion1},
      {"Yang-Mills and Bianchi residuals", criterion2},
      {"Cesaro mean vs closed form", criterion3},
      {"theorem exclusive-or", criterion4},
      {"span hypothesis negative control", criterion5},
      {"transport properties", criterion6},
      {"|x|^2 functional", criterion7},
      {"equidensity", criterion8},
      {"algebraic identities", criterion9},
      {"determinism", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool in_budget = secs <= kBudget[i + 1];
    const bool pass = o.pass && in_budget;
    if (!pass) ++failed;
    std::printf("criterion %2zu %s  %s: %s  [%.1f s, budget %.0f s%s]\n", i + 1, pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), o.summary.c_str(), secs, kBudget[i + 1],
                in_budget ? "" : ", exceeded");
    for (const std::string& line : o.info) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
