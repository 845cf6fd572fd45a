#pragma once

// The modified Levy Laplacian of curve functionals: the direct Cesaro-mean
// evaluator over lifted basis directions, and the closed form for the
// parallel transport U_{1,0} in terms of D_A^* F and the L^W density.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "levylap/basis.hpp"
#include "levylap/curve.hpp"
#include "levylap/gauge.hpp"
#include "levylap/geometry.hpp"
#include "levylap/linalg4.hpp"
#include "levylap/quadrature.hpp"
#include "levylap/rotation.hpp"
#include "levylap/transport.hpp"

namespace levylap {

/// A function on curves with matrix values; scalar functionals return 1x1.
using CurveFunctional = std::function<CMat(const Curve&)>;

/// gamma -> U^A_{1,0}(gamma), RK4 with `steps` steps, no re-projection.
CurveFunctional transport_functional(const Connection& a, int steps = kDefaultOdeSteps);

/// gamma -> int_0^1 f(gamma(t)) dt by composite Gauss-Legendre.
CurveFunctional integral_functional(std::function<double(const Vec4&)> f, int panels = 512);

/// A vector field along a curve together with its t-derivative.
struct FieldAlongCurve {
  std::function<Vec4(double)> value;
  std::function<Vec4(double)> derivative;
};

/// X(t) = Q(t) Z W(t) e_k(t) zhat_mu: the basis direction e_k zhat_mu,
/// rotated by W in the fixed orthonormal frame Z at the basepoint, then
/// carried along the curve by Levi-Civita transport Q.
FieldAlongCurve lift_direction(std::shared_ptr<const LcTransport> q, int mu, int k,
                               const RotationCurve& w, const BasisFamily& basis);
FieldAlongCurve lift_direction(const Metric& metric, const Curve& curve, int mu, int k,
                               const RotationCurve& w, const BasisFamily& basis);

/// t -> exp_{gamma(t)}(s X(t)). Geodesics use `exp_steps` RK4 steps (the
/// displacement is small); the velocity comes from the linearized geodesic.
Curve perturbed_curve(const Metric& metric, const Curve& curve, const FieldAlongCurve& x,
                      double s, int exp_steps = 4);

/// Central second difference of s -> f(perturbed_curve(s)) at s = 0 with
/// steps h and h/2, combined by one Richardson step. `base` is f(curve) when
/// already known.
CMat second_directional_derivative(const CurveFunctional& f, const Curve& curve,
                                   const FieldAlongCurve& x, const Metric& metric, double h,
                                   int exp_steps = 4, const CMat* base = nullptr);

struct CesaroOptions {
  int modes = 256;
  double fd_step = 1e-3;
  int exp_steps = 4;
  /// 0 selects the hardware concurrency.
  unsigned threads = 0;
};

struct CesaroResult {
  /// c_n = (1/n) sum_{k<=n} sum_mu d^2/ds^2 f, n = 1..N.
  std::vector<CMat> partials;
  /// sum_mu d^2/ds^2 f for mode k = 1..N.
  std::vector<CMat> mode_terms;
  /// Mean of c_n over n = ceil(3N/4)..N.
  CMat estimate;
  /// Mean of the mode terms over the same range. Unlike `estimate` it does
  /// not carry the O(1/n) bias from the early modes.
  CMat increment_estimate;
  int tail_start = 0;
};

CesaroResult levy_cesaro(const CurveFunctional& f, const Curve& curve, const RotationCurve& w,
                         const BasisFamily& basis, const Metric& metric,
                         const CesaroOptions& options = {});

/// levy_cesaro for f = U^A_{1,0} with `steps` RK4 steps. On the flat metric
/// and curves without breakpoints the curve, W and its derivative are
/// sampled once on the RK4 grid and shared by all directions; otherwise this
/// is levy_cesaro(transport_functional(a, steps), ...).
CesaroResult levy_cesaro_transport(const Connection& a, const Curve& curve, const RotationCurve& w,
                                   const BasisFamily& basis, const Metric& metric,
                                   const CesaroOptions& options = {}, int steps = 4096);

/// Transport tables and frames shared by every density evaluation along one
/// curve.
class CurveContext {
 public:
  CurveContext(const Connection& a, const Metric& metric, const Curve& curve,
               int steps = kDefaultOdeSteps);

  const Connection& connection() const { return a_; }
  const Metric& metric() const { return metric_; }
  const Curve& curve() const { return curve_; }
  const TransportTable& transport() const { return transport_; }
  std::shared_ptr<const LcTransport> lc() const { return lc_; }

  /// L(gamma, t): components of U_{t,0}^{-1} F(gamma(t)) U_{t,0} in the
  /// transported orthonormal frame.
  GaugeTwoForm transported_curvature(double t) const;
  /// U_{1,t} (D_A^* F)_nu(gamma(t)) gamma'^nu(t) U_{t,0}.
  GaugeMatrix first_term_density(double t) const;

 private:
  Connection a_;
  Metric metric_;
  Curve curve_;
  TransportTable transport_;
  std::shared_ptr<const LcTransport> lc_;
};

struct PairingOptions {
  /// c0 in c0 * sum_{a,b} Omega_ab L_ab.
  double pairing_constant = 1.0;
  /// Pair with W' W^{-1} (true) or W^{-1} W' (false).
  bool right_invariant = true;
};

So4Element pairing_element(const RotationCurve& w, double r, bool right_invariant = true);

/// L^W(gamma, t, r) = pair_form(Omega(r), L(gamma, t)).
GaugeMatrix lw_density(const CurveContext& ctx, const RotationCurve& w, double t, double r,
                       const PairingOptions& pairing = {});
GaugeMatrix lw_density(const Connection& a, const Metric& metric, const Curve& curve,
                       const RotationCurve& w, double t, double r,
                       const PairingOptions& pairing = {});

struct ClosedFormOptions {
  PairingOptions pairing;
  int panels = kDefaultPanels;
  /// Quadrature error estimates above this flag the result.
  double quadrature_tolerance = 1e-8;
};

struct ClosedFormResult {
  GaugeMatrix value;
  /// int_0^1 U_{1,t} (D_A^* F)<gamma'> U_{t,0} dt.
  GaugeMatrix first_term;
  /// U_{1,0} int_0^1 L^W(gamma, t, t) dt.
  GaugeMatrix second_term;
  /// int_0^1 L^W(gamma, t, t) dt.
  GaugeMatrix lw_integral;
  double first_error = 0.0;
  double second_error = 0.0;
  bool flagged = false;
};

ClosedFormResult levy_closed_form(const CurveContext& ctx, const RotationCurve& w,
                                  const ClosedFormOptions& options = {});
ClosedFormResult levy_closed_form(const Connection& a, const Metric& metric, const Curve& curve,
                                  const RotationCurve& w, const ClosedFormOptions& options = {});

struct LevyReport {
  std::string curve_id;
  std::string w_id;
  std::string connection;
  std::string metric;
  std::string basis;
  int modes = 0;
  double fd_step = 0.0;
  int transport_steps = 0;
  std::vector<GaugeMatrix> cesaro_partials;
  std::optional<GaugeMatrix> cesaro_estimate;
  std::optional<GaugeMatrix> cesaro_increment_estimate;
  GaugeMatrix closed_form;
  GaugeMatrix first_term;
  GaugeMatrix second_term;
  double unitarity_drift = 0.0;
  double first_quadrature_error = 0.0;
  double second_quadrature_error = 0.0;
  bool quadrature_flagged = false;
};

/// Closed form, plus the Cesaro evaluator when `cesaro` is set. The Cesaro
/// transports use `cesaro_steps` RK4 steps.
LevyReport levy_report(const Connection& a, const Metric& metric, const Curve& curve,
                       const RotationCurve& w, const BasisFamily& basis,
                       const ClosedFormOptions& closed, const std::optional<CesaroOptions>& cesaro,
                       int transport_steps = kDefaultOdeSteps, int cesaro_steps = 4096);

/// int_0^1 (Delta_g f)(gamma(t)) dt with Delta_g f = exp(-2 phi) (Delta_0 f +
/// 2 grad phi . grad f), from the flat Laplacian and gradient of f.
double laplace_beltrami_integral(const Metric& metric, const Curve& curve,
                                 const std::function<double(const Vec4&)>& flat_laplacian,
                                 const std::function<Vec4(const Vec4&)>& gradient,
                                 int panels = 512);

}  // namespace levylap
