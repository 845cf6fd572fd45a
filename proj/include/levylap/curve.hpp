#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levylap/linalg4.hpp"

namespace levylap {

enum class CurveFamily { kPolynomial, kTrigonometric, kSpliced, kReparameterized, kOther };

const char* to_string(CurveFamily f);

/// Parametric path t in [0,1] -> R^4 with analytic velocity. The basepoint is
/// position(0).
class Curve {
 public:
  using PointFn = std::function<Vec4(double)>;

  Curve(std::string id, CurveFamily family, PointFn position, PointFn velocity);

  Vec4 position(double t) const { return position_(t); }
  Vec4 velocity(double t) const { return velocity_(t); }
  /// One-sided velocity: at a breakpoint, side > 0 takes the limit from the
  /// right and side < 0 from the left. Elsewhere equal to velocity(t).
  Vec4 velocity(double t, int side) const;
  Vec4 basepoint() const { return position_(0.0); }

  const std::string& id() const { return id_; }
  CurveFamily family() const { return family_; }

  /// Parameters in (0,1) where the velocity may jump. ODE solvers and
  /// quadratures never step across them.
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  void set_breakpoints(std::vector<double> b);

  /// x(t) = sum_j coeffs[j] t^j.
  static Curve polynomial(std::string id, std::vector<Vec4> coeffs);
  /// x^mu(t) = offset^mu + amplitude^mu sin(pi * frequency^mu * t + phase^mu).
  static Curve trigonometric(std::string id, const Vec4& offset, const Vec4& amplitude,
                             const Vec4& frequency, const Vec4& phase);
  static Curve straight_line(std::string id, const Vec4& start, const Vec4& direction);
  static Curve constant(std::string id, const Vec4& point);

 private:
  std::string id_;
  CurveFamily family_;
  PointFn position_;
  PointFn velocity_;
  std::vector<double> breakpoints_;
};

/// Nodes s = n_0 < n_1 < ... < n_K = t with `steps` uniform steps on every
/// smooth piece of [s, t] between the curve's breakpoints.
std::vector<double> integration_grid(const Curve& c, double s, double t, int steps);

/// Largest i with nodes[i] <= t, clamped to [0, nodes.size() - 1].
std::size_t grid_index(const std::vector<double>& nodes, double t);

/// Largest central-difference mismatch between velocity and the derivative of
/// position over `samples` evenly spread interior parameters.
double velocity_consistency(const Curve& c, int samples = 16, double step = 1e-5);

}  // namespace levylap
