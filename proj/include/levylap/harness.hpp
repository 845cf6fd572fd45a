#pragma once

// Scripted experiments: the duality / Levy-harmonicity equivalence check,
// the per-lemma sub-checks, and the calibration of the pairing constant.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levylap/basis.hpp"
#include "levylap/curve.hpp"
#include "levylap/gauge.hpp"
#include "levylap/geometry.hpp"
#include "levylap/levy.hpp"
#include "levylap/rotation.hpp"

namespace levylap {

/// Pairing constant selected by the calibration procedure and frozen as the
/// configuration default.
inline constexpr double kCalibratedPairingConstant = -1.0;

struct ConnectionSpec {
  /// flat | sd | asd | perturbed_sd | perturbed_asd | random_polynomial
  std::string kind = "asd";
  double rho = 1.0;
  Vec4 center = Vec4::Zero();
  /// Bump amplitude for the perturbed kinds.
  double epsilon = 0.05;
  /// Seed for random_polynomial.
  std::uint64_t seed = 1;
};

struct MetricSpec {
  /// flat | conformal (phi = alpha x^(axis+1))
  std::string kind = "flat";
  double alpha = 0.1;
  int axis = 0;
};

struct CurveSetSpec {
  int polynomial = 5;
  int trigonometric = 5;
  std::uint64_t seed = 7;
  /// Curves stay inside this ball around the connection center.
  double radius = 2.0;
};

struct RotationSpec {
  /// left | right | both | mixed | identity
  std::string factor = "both";
  std::vector<std::string> profiles{"t", "t2"};
  /// Pair with W' W^{-1} (true) or W^{-1} W' (false).
  bool right_invariant = true;
};

struct BasisSpec {
  /// sine | sturm_liouville
  std::string kind = "sine";
  /// Potential r(t) for sturm_liouville: zero | sin2pi | t
  std::string potential = "sin2pi";
  int grid = 2048;
};

enum class CesaroEstimator {
  /// Mean of the partial means c_n over the last quarter.
  kTailMean,
  /// Mean of the mode terms d_k over the last quarter.
  kIncrementTail,
};

const char* to_string(CesaroEstimator e);
CesaroEstimator parse_estimator(const std::string& s);

struct NumericsSpec {
  int modes = 256;
  double fd_step = 1e-3;
  int transport_steps = kDefaultOdeSteps;
  int cesaro_steps = 4096;
  int panels = kDefaultPanels;
  int exp_steps = 4;
  double pairing_constant = kCalibratedPairingConstant;
  /// Also run the Cesaro evaluator where a command supports it.
  bool cesaro = false;
  CesaroEstimator estimator = CesaroEstimator::kTailMean;
  /// 0 selects the hardware concurrency.
  unsigned threads = 0;
};

struct ToleranceSpec {
  /// Norms at or below this count as zero.
  double zero = 1e-6;
  /// A factor is non-annihilating when its max norm is >= ratio * zero.
  double separation_ratio = 1e4;
  /// Both factors of a non-dual connection must reach this.
  double non_dual_floor = 1e-3;
  /// Cesaro versus closed form: max(relative * |closed|, absolute).
  double cesaro_relative = 0.02;
  double cesaro_absolute = 1e-3;
  /// Pointwise L^W checks.
  double pointwise = 1e-8;
  /// Curvature duality classification: |F_-|/|F| (or |F_+|/|F|) below this.
  double duality = 1e-8;
  /// Accepted range of the fitted decay order of the splice defect.
  double splice_order_low = 0.8;
  double splice_order_high = 1.2;
};

struct ExperimentConfig {
  ConnectionSpec connection;
  MetricSpec metric;
  CurveSetSpec curves;
  RotationSpec rotation;
  BasisSpec basis;
  NumericsSpec numerics;
  ToleranceSpec tolerances;
};

Connection build_connection(const ConnectionSpec& spec);
Metric build_metric(const MetricSpec& spec);
BasisFamily build_basis(const BasisSpec& spec, int modes);
/// The W curve for one factor with the configured profiles.
RotationCurve build_rotation(const RotationSpec& spec, Isoclinic factor);
/// Rotation curves named by spec.factor ("both" gives left then right).
std::vector<RotationCurve> build_rotations(const RotationSpec& spec);

/// Seeded curve set: `polynomial` cubic curves followed by `trigonometric`
/// curves with one harmonic per axis. Curve i draws from
/// SplitMix64::stream(seed, i).
std::vector<Curve> build_curves(const CurveSetSpec& spec, const Vec4& center);

/// Which isoclinic factor spans the self-dual 2-forms under the fixed
/// orientation, with the largest deviation of any generator from its sector.
struct SectorCorrespondence {
  Isoclinic self_dual_factor = Isoclinic::kLeft;
  double max_defect = 0.0;
};
SectorCorrespondence sector_correspondence();

/// Curvature duality observed at sample points along the curves.
struct DualityEvidence {
  /// sd | asd | flat | non_dual
  std::string label;
  double max_sd_defect = 0.0;   ///< max |F_-| / |F|
  double max_asd_defect = 0.0;  ///< max |F_+| / |F|
  double max_curvature = 0.0;
};
DualityEvidence duality_evidence(const Connection& a, const Metric& metric,
                                 const std::vector<Curve>& curves, double tolerance,
                                 int samples_per_curve = 16);

/// Cesaro estimate selected by the estimator.
CMat cesaro_value(const CesaroResult& r, CesaroEstimator e);

struct FactorResult {
  Isoclinic factor = Isoclinic::kLeft;
  std::string w_id;
  int span = 0;
  /// Closed-form Laplacian norm per curve.
  std::vector<double> norms;
  double max_norm = 0.0;
  std::vector<LevyReport> reports;
};

struct TheoremVerdict {
  /// pass | fail | hypothesis_not_met
  std::string status;
  /// exclusive_or | both_harmonic | neither | inconclusive
  std::string outcome;
  std::string expected_outcome;
  std::optional<Isoclinic> annihilating;
  std::optional<Isoclinic> expected_annihilating;
  DualityEvidence duality;
  SectorCorrespondence sectors;
  std::vector<FactorResult> factors;
  /// Per curve: left | right | both | none (factors at or below tol_zero).
  std::vector<std::string> votes;
  bool consistent_labeling = true;
  double tol_zero = 0.0;
  double tol_nonzero = 0.0;
  std::vector<std::string> notes;
};

TheoremVerdict theorem_check(const ExperimentConfig& cfg);

/// pass | fail | premise_not_met | hypothesis_not_met | skipped
struct SubCheck {
  std::string name;
  std::string status;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct LemmaCurveResult {
  std::string curve_id;
  std::string w_id;
  Isoclinic factor = Isoclinic::kLeft;
  double closed_norm = 0.0;
  std::optional<double> cesaro_difference;
  std::vector<SubCheck> checks;
};

struct LemmaVerdict {
  /// pass | fail | hypothesis_not_met
  std::string status;
  DualityEvidence duality;
  SectorCorrespondence sectors;
  std::vector<LemmaCurveResult> curves;
  std::vector<std::string> notes;
};

LemmaVerdict lemma_suite(const ExperimentConfig& cfg);

/// Splice defect |I(eps) - I(0)| for I(eps) = int_0^1 L^W(splice(curve, t,
/// r, eps), tau, tau) dtau and its limit
/// I(0) = int_0^r L^W(curve, 0, tau) dtau + int_r^1 L^W(curve, t, tau) dtau.
struct SpliceProbe {
  std::vector<double> eps;
  std::vector<double> defect;
  /// Least-squares slope of log(defect) against log(eps).
  double order = 0.0;
};
SpliceProbe splice_probe(const Connection& a, const Metric& metric, const Curve& curve,
                         const RotationCurve& w, double t, double r,
                         const std::vector<double>& eps, const PairingOptions& pairing,
                         int steps = kDefaultOdeSteps, int panels = kDefaultPanels);

struct CalibrationCandidate {
  double c0 = 0.0;
  /// max over calibration curves of |Cesaro - closed form(c0)|.
  double max_residual = 0.0;
};

struct CalibrationResult {
  double chosen = 0.0;
  double frozen = kCalibratedPairingConstant;
  bool matches_frozen = false;
  Isoclinic factor = Isoclinic::kLeft;
  std::string w_id;
  std::vector<std::string> curve_ids;
  std::vector<CalibrationCandidate> candidates;
  /// Per calibration curve, the Cesaro result (for reuse in reports).
  std::vector<CMat> cesaro;
  std::vector<CMat> closed_unit;
};

/// Flat metric, the configured (anti-)self-dual connection, W in the factor
/// that does not annihilate it, three seeded calibration curves; picks c0 in
/// {1, -1, 1/2, -1/2} minimizing the worst Cesaro / closed-form mismatch.
CalibrationResult calibrate(const ExperimentConfig& cfg);

/// Curve set used by calibrate(): 2 polynomial + 1 trigonometric from a seed
/// derived from cfg.curves.seed.
std::vector<Curve> calibration_curves(const ExperimentConfig& cfg);

}  // namespace levylap
