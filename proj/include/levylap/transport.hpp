#pragma once

// Gauge parallel transport along curves, dU/dt = -A_mu(x(t)) x'^mu(t) U,
// and the curve operations its structural properties are stated with.

#include <functional>
#include <string>
#include <vector>

#include "levylap/curve.hpp"
#include "levylap/gauge.hpp"
#include "levylap/geometry.hpp"

namespace levylap {

struct TransportOptions {
  /// RK4 steps over the interval [s, t].
  int steps = kDefaultOdeSteps;
  /// Replace the RK4 result by its polar (nearest unitary) factor.
  bool reproject = true;
};

struct TransportResult {
  GroupMatrix u;
  double s = 0.0;
  double t = 0.0;
  /// |U^dagger U - I| before re-projection.
  double unitarity_drift = 0.0;
  /// |U_rk4 - U_projected|.
  double reprojection_size = 0.0;
};

/// U^A_{t,s}(curve) for 0 <= s <= t <= 1. Throws DomainError for a bad
/// interval and IntegrationError if the solve blows up.
TransportResult parallel_transport(const Connection& a, const Curve& curve, double s, double t,
                                   const TransportOptions& options = {});

/// Endpoint transport U_{1,0} only, no re-projection. This is the hot path of
/// the Cesaro evaluator.
GroupMatrix transport_endpoint(const Connection& a, const Curve& curve, int steps);

/// U_{t,0} tabulated on the integration grid of [0,1]; off-grid values take
/// one RK4 sub-step from the node below.
class TransportTable {
 public:
  TransportTable(const Connection& a, const Curve& curve, int steps = kDefaultOdeSteps);

  /// U_{t,0}.
  GroupMatrix from_start(double t) const;
  /// U_{1,t} = U_{1,0} U_{t,0}^{-1}.
  GroupMatrix to_end(double t) const;
  const GroupMatrix& total() const { return table_.back(); }
  double max_unitarity_drift() const { return drift_; }

 private:
  GroupMatrix step(const GroupMatrix& u, double t0, double dt) const;

  Connection a_;
  Curve curve_;
  std::vector<double> nodes_;
  std::vector<GroupMatrix> table_;
  double drift_ = 0.0;
};

/// Nondecreasing piecewise-C1 map of [0,1] onto itself with sigma(0) = 0 and
/// sigma(1) = 1.
class Reparameterization {
 public:
  using Fn = std::function<double(double)>;

  Reparameterization(std::string name, Fn value, Fn derivative);

  static Reparameterization identity();
  /// sigma(t) = t^p, p >= 1.
  static Reparameterization power(double p);
  /// Linear interpolation through (knots[i], values[i]).
  static Reparameterization piecewise_linear(std::vector<double> knots, std::vector<double> values);

  double operator()(double t) const { return value_(t); }
  double derivative(double t) const { return derivative_(t); }
  const std::string& name() const { return name_; }
  /// Parameters where the derivative may jump.
  const std::vector<double>& knots() const { return knots_; }

 private:
  std::string name_;
  std::vector<double> knots_;
  Fn value_;
  Fn derivative_;
};

/// curve o sigma. Throws DomainError when sigma fails the endpoint or
/// monotonicity check on a 1024-point sample.
Curve reparameterize(const Curve& curve, const Reparameterization& sigma);

/// Structural properties of U^A along one curve; every field is a defect
/// (0 is exact) except `convergence_ratio`.
struct TransportProperties {
  /// max |U^dagger U - I| and max ||det U| - 1| before re-projection.
  double unitarity = 0.0;
  double determinant = 0.0;
  /// max |U_{t,s} U_{s,r} - U_{t,r}| over a few (r, s, t) triples.
  double multiplicativity = 0.0;
  /// |U_{1,0}(curve o sigma) - U_{1,0}(curve)| for sigma = t^2 and for a
  /// piecewise-linear sigma with a plateau.
  double reparameterization = 0.0;
  /// |U_{r-eps,0} - I| and |U_{1,r} - I| on a spliced curve, which is
  /// constant on both intervals.
  double constant_restriction = 0.0;
  /// |U_{1,0}(splice(curve, 1, r, eps)) - U_{1,0}(curve)|.
  double splice_endpoint = 0.0;
  /// e(n) / e(2n) with e(n) = |U_n - U_2n|, from `coarse_steps`.
  double convergence_ratio = 0.0;
};

TransportProperties transport_properties(const Connection& a, const Curve& curve,
                                         int steps = kDefaultOdeSteps, int coarse_steps = 32);

/// The curve that sits at the basepoint m on [0, r - eps], runs through
/// curve|[0, t] linearly compressed into [r - eps, r], and rests at curve(t)
/// on [r, 1]. Requires 0 < eps <= r <= 1 and t in [0, 1].
Curve splice(const Curve& curve, double t, double r, double eps);

}  // namespace levylap
