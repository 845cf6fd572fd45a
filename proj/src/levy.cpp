#include "levylap/levy.hpp"

#include <algorithm>
#include <cmath>

#include "levylap/errors.hpp"
#include "levylap/parallel.hpp"

namespace levylap {

CurveFunctional transport_functional(const Connection& a, int steps) {
  return [a, steps](const Curve& c) -> CMat { return transport_endpoint(a, c, steps); };
}

CurveFunctional integral_functional(std::function<double(const Vec4&)> f, int panels) {
  return [f = std::move(f), panels](const Curve& c) -> CMat {
    auto g = [&](double t) { return f(c.position(t)); };
    CMat out(1, 1);
    out(0, 0) = integrate<double>(g, cuts_with(c.breakpoints()), panels).value;
    return out;
  };
}

FieldAlongCurve lift_direction(std::shared_ptr<const LcTransport> q, int mu, int k,
                               const RotationCurve& w, const BasisFamily& basis) {
  if (mu < 0 || mu > 3) throw DomainError("lift_direction: axis index must be in 0..3");
  if (k < 1 || k > basis.max_modes()) throw DomainError("lift_direction: mode out of range");
  auto value = [q, mu, k, w, basis](double t) -> Vec4 {
    return q->frame(t) * w.value(t).col(mu) * basis.value(k, t);
  };
  auto derivative = [q, mu, k, w, basis](double t) -> Vec4 {
    const Vec4 wcol = w.value(t).col(mu);
    const double e = basis.value(k, t);
    Vec4 inner = w.derivative(t).col(mu) * e + wcol * basis.derivative(k, t);
    Vec4 out = q->frame(t) * inner;
    if (!q->trivial()) out += q->frame_derivative(t) * wcol * e;
    return out;
  };
  return {value, derivative};
}

FieldAlongCurve lift_direction(const Metric& metric, const Curve& curve, int mu, int k,
                               const RotationCurve& w, const BasisFamily& basis) {
  return lift_direction(std::make_shared<const LcTransport>(metric, curve), mu, k, w, basis);
}

Curve perturbed_curve(const Metric& metric, const Curve& curve, const FieldAlongCurve& x,
                      double s, int exp_steps) {
  Curve::PointFn pos, vel;
  if (metric.is_flat()) {
    pos = [curve, x, s](double t) -> Vec4 { return curve.position(t) + s * x.value(t); };
    vel = [curve, x, s](double t) -> Vec4 { return curve.velocity(t) + s * x.derivative(t); };
  } else {
    pos = [metric, curve, x, s, exp_steps](double t) -> Vec4 {
      return exp_point(metric, curve.position(t), s * x.value(t), exp_steps);
    };
    vel = [metric, curve, x, s, exp_steps](double t) -> Vec4 {
      return exp_point_with_tangent(metric, curve.position(t), s * x.value(t), curve.velocity(t),
                                    s * x.derivative(t), exp_steps)
          .tangent;
    };
  }
  Curve out(curve.id() + "~", curve.family(), pos, vel);
  out.set_breakpoints(curve.breakpoints());
  return out;
}

namespace {

CMat richardson(const std::function<CMat(double)>& f, const CMat& f0, double h) {
  auto diff = [&](double step) -> CMat {
    return (f(step) + f(-step) - 2.0 * f0) / (step * step);
  };
  const CMat coarse = diff(h);
  const CMat fine = diff(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

void check_cesaro(const CesaroOptions& options, const BasisFamily& basis) {
  if (options.modes < 1) throw DomainError("levy_cesaro: need at least one mode");
  if (options.modes > basis.max_modes()) throw DomainError("levy_cesaro: basis has too few modes");
  if (!(options.fd_step > 0.0)) throw DomainError("levy_cesaro: step must be positive");
}

// Sums the per-direction values (index 4 (k - 1) + mu) in a fixed order.
CesaroResult reduce(const std::vector<CMat>& direction, int n) {
  CesaroResult r;
  r.mode_terms.reserve(n);
  r.partials.reserve(n);
  CMat running = CMat::Zero(direction[0].rows(), direction[0].cols());
  for (int k = 0; k < n; ++k) {
    CMat term = direction[4 * k];
    for (int mu = 1; mu < 4; ++mu) term += direction[4 * k + mu];
    running += term;
    r.mode_terms.push_back(term);
    r.partials.push_back(running / static_cast<double>(k + 1));
  }
  r.tail_start = std::max(1, (3 * n + 3) / 4);
  CMat tail = CMat::Zero(running.rows(), running.cols());
  CMat increments = tail;
  for (int m = r.tail_start; m <= n; ++m) {
    tail += r.partials[m - 1];
    increments += r.mode_terms[m - 1];
  }
  r.estimate = tail / static_cast<double>(n - r.tail_start + 1);
  r.increment_estimate = increments / static_cast<double>(n - r.tail_start + 1);
  return r;
}

}  // namespace

CMat second_directional_derivative(const CurveFunctional& f, const Curve& curve,
                                   const FieldAlongCurve& x, const Metric& metric, double h,
                                   int exp_steps, const CMat* base) {
  if (!(h > 0.0)) throw DomainError("second_directional_derivative: step must be positive");
  const CMat f0 = base ? *base : f(curve);
  return richardson(
      [&](double s) { return f(perturbed_curve(metric, curve, x, s, exp_steps)); }, f0, h);
}

CesaroResult levy_cesaro(const CurveFunctional& f, const Curve& curve, const RotationCurve& w,
                         const BasisFamily& basis, const Metric& metric,
                         const CesaroOptions& options) {
  check_cesaro(options, basis);
  const int n = options.modes;
  auto q = std::make_shared<const LcTransport>(metric, curve);
  const CMat f0 = f(curve);
  std::vector<CMat> direction(static_cast<std::size_t>(4) * n);
  parallel_for(
      direction.size(),
      [&](std::size_t i) {
        const int k = static_cast<int>(i / 4) + 1;
        const int mu = static_cast<int>(i % 4);
        const FieldAlongCurve x = lift_direction(q, mu, k, w, basis);
        direction[i] =
            second_directional_derivative(f, curve, x, metric, options.fd_step, options.exp_steps, &f0);
      },
      options.threads);
  return reduce(direction, n);
}

CesaroResult levy_cesaro_transport(const Connection& a, const Curve& curve, const RotationCurve& w,
                                   const BasisFamily& basis, const Metric& metric,
                                   const CesaroOptions& options, int steps) {
  if (!metric.is_flat() || !curve.breakpoints().empty())
    return levy_cesaro(transport_functional(a, steps), curve, w, basis, metric, options);
  check_cesaro(options, basis);
  if (steps < 1) throw DomainError("levy_cesaro_transport: steps must be positive");
  const int n = options.modes;

  // Samples at t_j = j / (2 steps): nodes at even j, midpoints at odd j.
  const int m = 2 * steps + 1;
  std::vector<double> t(m);
  std::vector<Vec4> pos(m), vel(m);
  std::vector<Mat4> wv(m), wd(m);
  for (int j = 0; j < m; ++j) {
    t[j] = static_cast<double>(j) / (2 * steps);
    pos[j] = curve.position(t[j]);
    vel[j] = curve.velocity(t[j]);
    wv[j] = w.value(t[j]);
    wd[j] = w.derivative(t[j]);
  }
  const double dt = 1.0 / steps;

  auto solve = [&](const std::function<GaugeMatrix(int)>& b) {
    GroupMatrix u = identity_group(a.dim());
    GaugeMatrix b0 = b(0);
    for (int i = 0; i < steps; ++i) {
      const GaugeMatrix bh = b(2 * i + 1);
      const GaugeMatrix b1 = b(2 * i + 2);
      const GroupMatrix k1 = -b0 * u;
      const GroupMatrix k2 = -bh * (u + 0.5 * dt * k1);
      const GroupMatrix k3 = -bh * (u + 0.5 * dt * k2);
      const GroupMatrix k4 = -b1 * (u + dt * k3);
      u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      b0 = b1;
    }
    if (!u.allFinite()) throw IntegrationError("levy_cesaro_transport: non-finite transport");
    return u;
  };
  const CMat f0 = solve([&](int j) { return a.along(pos[j], vel[j]); });

  std::vector<CMat> direction(static_cast<std::size_t>(4) * n);
  parallel_for(
      direction.size(),
      [&](std::size_t i) {
        const int k = static_cast<int>(i / 4) + 1;
        const int mu = static_cast<int>(i % 4);
        std::vector<double> e(m), ed(m);
        for (int j = 0; j < m; ++j) {
          e[j] = basis.value(k, t[j]);
          ed[j] = basis.derivative(k, t[j]);
        }
        auto f = [&](double s) -> CMat {
          return solve([&](int j) {
            const Vec4 col = wv[j].col(mu);
            return a.along(pos[j] + (s * e[j]) * col,
                           vel[j] + s * (e[j] * wd[j].col(mu) + ed[j] * col));
          });
        };
        direction[i] = richardson(f, f0, options.fd_step);
      },
      options.threads);
  return reduce(direction, n);
}

CurveContext::CurveContext(const Connection& a, const Metric& metric, const Curve& curve, int steps)
    : a_(a),
      metric_(metric),
      curve_(curve),
      transport_(a, curve, steps),
      lc_(std::make_shared<const LcTransport>(metric, curve, steps)) {}

GaugeTwoForm CurveContext::transported_curvature(double t) const {
  const GaugeTwoForm f = curvature(a_, curve_.position(t));
  const GaugeTwoForm framed = frame_components(f, lc_->frame(t), zero_gauge(a_.dim()));
  return conjugate(framed, transport_.from_start(t));
}

GaugeMatrix CurveContext::first_term_density(double t) const {
  const Vec4 x = curve_.position(t);
  const Vec4 v = curve_.velocity(t);
  const auto ym = ym_residual(a_, metric_, x);
  GaugeMatrix along = zero_gauge(a_.dim());
  for (int nu = 0; nu < 4; ++nu) along += ym[nu] * v[nu];
  const GroupMatrix u = transport_.from_start(t);
  return transport_.total() * u.adjoint() * along * u;
}

So4Element pairing_element(const RotationCurve& w, double r, bool right_invariant) {
  return right_invariant ? w.right_log_derivative(r) : w.left_log_derivative(r);
}

GaugeMatrix lw_density(const CurveContext& ctx, const RotationCurve& w, double t, double r,
                       const PairingOptions& pairing) {
  return pair_form(pairing_element(w, r, pairing.right_invariant), ctx.transported_curvature(t),
                   pairing.pairing_constant);
}

GaugeMatrix lw_density(const Connection& a, const Metric& metric, const Curve& curve,
                       const RotationCurve& w, double t, double r, const PairingOptions& pairing) {
  return lw_density(CurveContext(a, metric, curve), w, t, r, pairing);
}

ClosedFormResult levy_closed_form(const CurveContext& ctx, const RotationCurve& w,
                                  const ClosedFormOptions& options) {
  const std::vector<double> cuts = cuts_with(ctx.curve().breakpoints());
  auto first = integrate<GaugeMatrix>([&](double t) { return ctx.first_term_density(t); }, cuts,
                                      options.panels);
  auto lw = integrate<GaugeMatrix>(
      [&](double t) { return lw_density(ctx, w, t, t, options.pairing); }, cuts, options.panels);
  ClosedFormResult r;
  r.first_term = first.value;
  r.lw_integral = lw.value;
  r.second_term = ctx.transport().total() * lw.value;
  r.value = r.first_term - r.second_term;
  r.first_error = first.error;
  r.second_error = lw.error;
  r.flagged = first.error > options.quadrature_tolerance || lw.error > options.quadrature_tolerance;
  return r;
}

ClosedFormResult levy_closed_form(const Connection& a, const Metric& metric, const Curve& curve,
                                  const RotationCurve& w, const ClosedFormOptions& options) {
  return levy_closed_form(CurveContext(a, metric, curve), w, options);
}

LevyReport levy_report(const Connection& a, const Metric& metric, const Curve& curve,
                       const RotationCurve& w, const BasisFamily& basis,
                       const ClosedFormOptions& closed, const std::optional<CesaroOptions>& cesaro,
                       int transport_steps, int cesaro_steps) {
  const CurveContext ctx(a, metric, curve, transport_steps);
  const ClosedFormResult cf = levy_closed_form(ctx, w, closed);
  LevyReport rep;
  rep.curve_id = curve.id();
  rep.w_id = w.id();
  rep.connection = a.name();
  rep.metric = metric.name();
  rep.basis = basis.name();
  rep.transport_steps = transport_steps;
  rep.closed_form = cf.value;
  rep.first_term = cf.first_term;
  rep.second_term = cf.second_term;
  rep.unitarity_drift = ctx.transport().max_unitarity_drift();
  rep.first_quadrature_error = cf.first_error;
  rep.second_quadrature_error = cf.second_error;
  rep.quadrature_flagged = cf.flagged;
  if (cesaro) {
    const CesaroResult cr =
        levy_cesaro_transport(a, curve, w, basis, metric, *cesaro, cesaro_steps);
    rep.modes = cesaro->modes;
    rep.fd_step = cesaro->fd_step;
    rep.cesaro_partials = cr.partials;
    rep.cesaro_estimate = cr.estimate;
    rep.cesaro_increment_estimate = cr.increment_estimate;
  }
  return rep;
}

double laplace_beltrami_integral(const Metric& metric, const Curve& curve,
                                 const std::function<double(const Vec4&)>& flat_laplacian,
                                 const std::function<Vec4(const Vec4&)>& gradient, int panels) {
  auto g = [&](double t) {
    const Vec4 x = curve.position(t);
    return std::exp(-2.0 * metric.phi(x)) *
           (flat_laplacian(x) + 2.0 * metric.grad_phi(x).dot(gradient(x)));
  };
  return integrate<double>(g, cuts_with(curve.breakpoints()), panels).value;
}

}  // namespace levylap
