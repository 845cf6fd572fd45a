#pragma once

// Riemannian structure on a single chart of R^4 with a flat or conformally
// flat metric g = exp(2 phi) * I.

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "levylap/curve.hpp"
#include "levylap/linalg4.hpp"

namespace levylap {

/// Default number of fixed RK4 steps over a unit parameter interval.
inline constexpr int kDefaultOdeSteps = 1024;

class Metric {
 public:
  using ScalarFn = std::function<double(const Vec4&)>;
  using GradientFn = std::function<Vec4(const Vec4&)>;
  using HessianFn = std::function<Mat4(const Vec4&)>;

  static Metric flat();
  /// g = exp(2 phi) I with analytic gradient and Hessian of phi.
  static Metric conformal(std::string name, ScalarFn phi, GradientFn grad, HessianFn hess);
  /// phi(x) = alpha * x^(axis+1).
  static Metric conformal_linear(double alpha, int axis = 0);
  /// phi(x) = alpha * exp(-|x - center|^2 / width^2).
  static Metric conformal_bump(double alpha, const Vec4& center, double width);

  bool is_flat() const { return flat_; }
  const std::string& name() const { return name_; }

  double phi(const Vec4& x) const { return flat_ ? 0.0 : phi_(x); }
  Vec4 grad_phi(const Vec4& x) const { return flat_ ? Vec4::Zero().eval() : grad_(x); }
  Mat4 hess_phi(const Vec4& x) const { return flat_ ? Mat4::Zero().eval() : hess_(x); }

  Mat4 g(const Vec4& x) const;
  Mat4 g_inv(const Vec4& x) const;
  double sqrt_det(const Vec4& x) const;
  double inner(const Vec4& x, const Vec4& u, const Vec4& v) const;

 private:
  Metric() = default;
  bool flat_ = true;
  std::string name_ = "flat";
  ScalarFn phi_;
  GradientFn grad_;
  HessianFn hess_;
};

/// Gamma[kappa](lambda, nu).
using Christoffel = std::array<Mat4, 4>;

Christoffel christoffel(const Metric& metric, const Vec4& x);

/// Vector Gamma^kappa_{lambda nu} u^lambda v^nu.
Vec4 christoffel_contract(const Metric& metric, const Vec4& x, const Vec4& u, const Vec4& v);

/// Matrix M^kappa_lambda = Gamma^kappa_{lambda nu} v^nu, so that parallel
/// transport along a velocity v reads dX/dt = -M X.
Mat4 christoffel_along(const Metric& metric, const Vec4& x, const Vec4& v);

/// Endpoint of the geodesic with x(0) = x, x'(0) = v, at parameter 1.
/// Throws IntegrationError if the solution leaves the finite range.
Vec4 exp_point(const Metric& metric, const Vec4& x, const Vec4& v,
               int steps = kDefaultOdeSteps);

struct ExpJet {
  Vec4 point;    ///< exp_x(v)
  Vec4 tangent;  ///< derivative of exp_x(v) along the variation (dx, dv)
};

/// exp_point together with its linearization with respect to the initial data.
ExpJet exp_point_with_tangent(const Metric& metric, const Vec4& x, const Vec4& v,
                              const Vec4& dx, const Vec4& dv, int steps = kDefaultOdeSteps);

/// Samples of g(x', x') along the geodesic, one per step.
std::vector<double> geodesic_energy_profile(const Metric& metric, const Vec4& x, const Vec4& v,
                                            int steps = kDefaultOdeSteps);

/// g-orthonormal frame at x aligned with the coordinate axes (columns).
Mat4 coordinate_frame(const Metric& metric, const Vec4& x);

/// Levi-Civita parallel transport Q(t) along a curve, Q(0) = I.
/// Q is tabulated on a uniform grid; off-grid values take one RK4 sub-step
/// from the grid node below.
class LcTransport {
 public:
  LcTransport(const Metric& metric, const Curve& curve, int steps = kDefaultOdeSteps);

  Mat4 at(double t) const;
  /// dQ/dt from the transport equation.
  Mat4 derivative(double t) const;
  /// Columns Z_a(t) = Q(t) Z_a with {Z_a} the coordinate frame at the basepoint.
  Mat4 frame(double t) const { return at(t) * frame0_; }
  Mat4 frame_derivative(double t) const { return derivative(t) * frame0_; }

  bool trivial() const { return trivial_; }

 private:
  Mat4 step(const Mat4& q, double t0, double dt) const;

  Metric metric_;
  Curve curve_;
  bool trivial_;
  Mat4 frame0_;
  std::vector<double> nodes_;
  std::vector<Mat4> table_;
};

/// Hodge star of a 2-form, orientation eps_1234 = +1:
/// (*L)_{mu nu} = 1/2 sqrt(det g) eps_{mu nu rho sigma} g^{rho alpha} g^{sigma beta} L_{alpha beta}.
RealTwoForm hodge_star2(const Metric& metric, const Vec4& x, const RealTwoForm& form);
GaugeTwoForm hodge_star2(const Metric& metric, const Vec4& x, const GaugeTwoForm& form);

/// (L+, L-) = ((L + *L)/2, (L - *L)/2).
std::pair<RealTwoForm, RealTwoForm> sd_split(const Metric& metric, const Vec4& x,
                                             const RealTwoForm& form);
std::pair<GaugeTwoForm, GaugeTwoForm> sd_split(const Metric& metric, const Vec4& x,
                                               const GaugeTwoForm& form);

/// Totally antisymmetric symbol with eps(0,1,2,3) = +1.
int levi_civita(int a, int b, int c, int d);

}  // namespace levylap
