#pragma once

// Gauge fields on the chart: connections, curvature, covariant derivative of
// curvature, Yang-Mills and Bianchi residuals, action density.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "levylap/geometry.hpp"
#include "levylap/linalg4.hpp"

namespace levylap {

using Potential = std::array<GaugeMatrix, 4>;
/// [lambda][mu] = d_lambda A_mu.
using PotentialGradient = std::array<std::array<GaugeMatrix, 4>, 4>;
/// [lambda][kappa][mu] = d_lambda d_kappa A_mu.
using PotentialHessian = std::array<std::array<std::array<GaugeMatrix, 4>, 4>, 4>;
/// [lambda] = (nabla_lambda F)_{mu nu}.
using CovariantDerivativeF = std::array<GaugeTwoForm, 4>;
/// [lambda][mu][nu].
using GaugeTensor3 = std::array<std::array<std::array<GaugeMatrix, 4>, 4>, 4>;

inline constexpr double kDefaultFdStep = 1e-4;

/// A connection A = A_mu dx^mu with values in u(N). Analytic first and
/// second derivatives are optional; missing ones fall back to 4th-order
/// central differences with step fd_step().
class Connection {
 public:
  using PotentialFn = std::function<Potential(const Vec4&)>;
  using GradientFn = std::function<PotentialGradient(const Vec4&)>;
  using HessianFn = std::function<PotentialHessian(const Vec4&)>;
  using AlongFn = std::function<GaugeMatrix(const Vec4&, const Vec4&)>;

  Connection(std::string name, int dim, PotentialFn potential, GradientFn gradient = {},
             HessianFn hessian = {});

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  std::map<std::string, double>& parameters() { return parameters_; }
  const std::map<std::string, double>& parameters() const { return parameters_; }

  bool has_analytic_gradient() const { return static_cast<bool>(gradient_); }
  bool has_analytic_hessian() const { return static_cast<bool>(hessian_); }
  double fd_step() const { return fd_step_; }
  void set_fd_step(double h) { fd_step_ = h; }

  Potential potential(const Vec4& x) const { return potential_(x); }
  PotentialGradient gradient(const Vec4& x) const;
  PotentialHessian hessian(const Vec4& x) const;

  /// A_mu(x) v^mu.
  GaugeMatrix along(const Vec4& x, const Vec4& v) const;
  /// Optional closed form for along(); must agree with the potential.
  void set_along(AlongFn f) { along_ = std::move(f); }

  /// Drops analytic derivatives so every derivative uses finite differences.
  Connection without_analytic_derivatives() const;

 private:
  std::string name_;
  int dim_;
  PotentialFn potential_;
  GradientFn gradient_;
  HessianFn hessian_;
  AlongFn along_;
  double fd_step_ = kDefaultFdStep;
  std::map<std::string, double> parameters_;
};

/// F_{mu nu} = d_mu A_nu - d_nu A_mu + [A_mu, A_nu].
GaugeTwoForm curvature(const Connection& a, const Vec4& x);

/// d_lambda F_{mu nu} from the first and second derivatives of A.
std::array<GaugeTwoForm, 4> curvature_gradient(const Connection& a, const Vec4& x);

/// nabla_lambda F_{mu nu} = d_lambda F_{mu nu} + [A_lambda, F_{mu nu}]
///   - F_{mu kappa} Gamma^kappa_{lambda nu} - F_{kappa nu} Gamma^kappa_{lambda mu}.
CovariantDerivativeF covariant_derivative_F(const Connection& a, const Metric& metric,
                                            const Vec4& x);

/// (D_A^* F)_nu = -g^{mu lambda} nabla_lambda F_{mu nu}.
std::array<GaugeMatrix, 4> ym_residual(const Connection& a, const Metric& metric, const Vec4& x);

/// Cyclic sum nabla_lambda F_{mu nu} + nabla_mu F_{nu lambda} + nabla_nu F_{lambda mu}.
GaugeTensor3 bianchi_residual(const Connection& a, const Vec4& x,
                              const Metric& metric = Metric::flat());

double max_norm(const std::array<GaugeMatrix, 4>& v);
double max_norm(const GaugeTensor3& t);

/// -1/2 tr(F_{mu nu} F^{mu nu}) sqrt(det g).
double action_density(const Connection& a, const Metric& metric, const Vec4& x);

enum class Duality { kSelfDual, kAntiSelfDual };

const char* to_string(Duality d);

/// 't Hooft ansatz in regular gauge,
///   A_mu = 2 eta^a_{mu nu} xbar^nu / (|xbar|^2 + rho^2) T_a,  xbar = x - center,
/// with eta ('t Hooft symbols) for kSelfDual and eta-bar for kAntiSelfDual.
/// Throws DomainError for rho <= 0.
Connection make_instanton(Duality kind, double rho, const Vec4& center = Vec4::Zero());

/// A == 0 with fiber dimension n.
Connection flat_connection(int n = 2);

/// A_mu constant in x.
Connection constant_connection(const Potential& values);

/// A + eps * exp(-|x - center|^2 / width^2) * C_mu with fixed su(2) directions
/// C_mu. Analytic derivatives are kept when the base provides them.
Connection perturbed_connection(const Connection& base, double eps,
                                const Vec4& center = Vec4(0.3, -0.2, 0.1, 0.4),
                                double width = 1.0);

/// Random su(2)-valued connection, quadratic in x, with no analytic derivatives.
Connection random_polynomial_connection(std::uint64_t seed);

/// N = 1 abelian connection with F = i c dx^1 ^ dx^2 (constant).
Connection abelian_constant_field(double c);

/// u A_mu u^{-1} for a constant unitary u.
Connection conjugated_connection(const Connection& a, const GroupMatrix& u);

}  // namespace levylap
