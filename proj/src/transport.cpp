#include "levylap/transport.hpp"

#include <algorithm>
#include <cmath>

#include "levylap/errors.hpp"

namespace levylap {

namespace {

GaugeMatrix generator(const Connection& a, const Curve& c, double t, int side = 0) {
  return a.along(c.position(t), c.velocity(t, side));
}

bool is_breakpoint(const Curve& c, double t) {
  return std::binary_search(c.breakpoints().begin(), c.breakpoints().end(), t);
}

// One RK4 step of dU/dt = -B(t) U where B0, Bh, B1 are B at t0, t0 + dt/2, t0 + dt.
GroupMatrix rk4(const GroupMatrix& u, const GaugeMatrix& b0, const GaugeMatrix& bh,
                const GaugeMatrix& b1, double dt) {
  const GroupMatrix k1 = -b0 * u;
  const GroupMatrix k2 = -bh * (u + 0.5 * dt * k1);
  const GroupMatrix k3 = -bh * (u + 0.5 * dt * k2);
  const GroupMatrix k4 = -b1 * (u + dt * k3);
  return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Integrates along consecutive nodes, reusing B at shared endpoints. The
// callback sees the state after every node.
template <class Visit>
GroupMatrix integrate(const Connection& a, const Curve& c, const std::vector<double>& nodes,
                      Visit&& visit) {
  GroupMatrix u = identity_group(a.dim());
  GaugeMatrix b0 = generator(a, c, nodes.front(), 1);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double t0 = nodes[i], dt = nodes[i + 1] - t0;
    if (i > 0 && is_breakpoint(c, t0)) b0 = generator(a, c, t0, 1);
    const GaugeMatrix bh = generator(a, c, t0 + 0.5 * dt);
    const GaugeMatrix b1 = generator(a, c, nodes[i + 1], -1);
    u = rk4(u, b0, bh, b1, dt);
    b0 = b1;
    visit(u);
  }
  if (!u.allFinite()) throw IntegrationError("parallel transport: non-finite state");
  return u;
}

}  // namespace

TransportResult parallel_transport(const Connection& a, const Curve& curve, double s, double t,
                                   const TransportOptions& options) {
  if (!(s >= 0.0 && t <= 1.0 && s <= t))
    throw DomainError("parallel_transport: need 0 <= s <= t <= 1");
  if (options.steps < 1) throw DomainError("parallel_transport: steps must be positive");
  TransportResult r;
  r.s = s;
  r.t = t;
  if (s == t) {
    r.u = identity_group(a.dim());
    return r;
  }
  const GroupMatrix raw =
      integrate(a, curve, integration_grid(curve, s, t, options.steps), [](const GroupMatrix&) {});
  r.unitarity_drift = unitarity_defect(raw);
  if (options.reproject) {
    r.u = unitary_projection(raw);
    r.reprojection_size = (raw - r.u).norm();
  } else {
    r.u = raw;
  }
  return r;
}

GroupMatrix transport_endpoint(const Connection& a, const Curve& curve, int steps) {
  return integrate(a, curve, integration_grid(curve, 0.0, 1.0, steps), [](const GroupMatrix&) {});
}

TransportTable::TransportTable(const Connection& a, const Curve& curve, int steps)
    : a_(a), curve_(curve) {
  if (steps < 1) throw DomainError("TransportTable: steps must be positive");
  nodes_ = integration_grid(curve_, 0.0, 1.0, steps);
  table_.reserve(nodes_.size());
  table_.push_back(identity_group(a_.dim()));
  integrate(a_, curve_, nodes_, [this](const GroupMatrix& u) {
    table_.push_back(u);
    drift_ = std::max(drift_, unitarity_defect(u));
  });
}

GroupMatrix TransportTable::step(const GroupMatrix& u, double t0, double dt) const {
  return rk4(u, generator(a_, curve_, t0, 1), generator(a_, curve_, t0 + 0.5 * dt),
             generator(a_, curve_, t0 + dt, -1), dt);
}

GroupMatrix TransportTable::from_start(double t) const {
  const double clamped = std::clamp(t, 0.0, 1.0);
  const std::size_t i = grid_index(nodes_, clamped);
  const double dt = clamped - nodes_[i];
  if (dt <= 1e-15) return table_[i];
  return step(table_[i], nodes_[i], dt);
}

GroupMatrix TransportTable::to_end(double t) const {
  return total() * from_start(t).adjoint();
}

Reparameterization::Reparameterization(std::string name, Fn value, Fn derivative)
    : name_(std::move(name)), value_(std::move(value)), derivative_(std::move(derivative)) {}

Reparameterization Reparameterization::identity() {
  return Reparameterization("identity", [](double t) { return t; }, [](double) { return 1.0; });
}

Reparameterization Reparameterization::power(double p) {
  if (!(p >= 1.0)) throw DomainError("Reparameterization::power: need p >= 1");
  return Reparameterization(
      "power", [p](double t) { return std::pow(t, p); },
      [p](double t) { return t <= 0.0 ? (p == 1.0 ? 1.0 : 0.0) : p * std::pow(t, p - 1.0); });
}

Reparameterization Reparameterization::piecewise_linear(std::vector<double> knots,
                                                        std::vector<double> values) {
  if (knots.size() < 2 || knots.size() != values.size())
    throw DomainError("piecewise_linear: need matching knot and value lists");
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    if (!(knots[i + 1] > knots[i])) throw DomainError("piecewise_linear: knots must increase");
  auto segment = [knots](double t) {
    const auto it = std::upper_bound(knots.begin(), knots.end(), t);
    const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - knots.begin() - 1, 0));
    return std::min(i, knots.size() - 2);
  };
  auto value = [knots, values, segment](double t) {
    const std::size_t i = segment(t);
    const double w = (t - knots[i]) / (knots[i + 1] - knots[i]);
    return values[i] + w * (values[i + 1] - values[i]);
  };
  auto slope = [knots, values, segment](double t) {
    const std::size_t i = segment(t);
    return (values[i + 1] - values[i]) / (knots[i + 1] - knots[i]);
  };
  Reparameterization r("piecewise_linear", value, slope);
  r.knots_ = std::move(knots);
  return r;
}

Curve reparameterize(const Curve& curve, const Reparameterization& sigma) {
  constexpr int kSamples = 1024;
  constexpr double kTol = 1e-12;
  if (std::abs(sigma(0.0)) > kTol || std::abs(sigma(1.0) - 1.0) > kTol)
    throw DomainError("reparameterize: sigma must fix 0 and 1");
  double prev = sigma(0.0);
  for (int i = 1; i <= kSamples; ++i) {
    const double v = sigma(static_cast<double>(i) / kSamples);
    if (v < prev - kTol || v > 1.0 + kTol) throw DomainError("reparameterize: sigma not monotone");
    prev = v;
  }
  auto pos = [curve, sigma](double t) { return curve.position(sigma(t)); };
  auto vel = [curve, sigma](double t) {
    return Vec4(curve.velocity(sigma(t)) * sigma.derivative(t));
  };
  Curve out(curve.id() + "@" + sigma.name(), CurveFamily::kReparameterized, pos, vel);
  out.set_breakpoints(sigma.knots());
  return out;
}

Curve splice(const Curve& curve, double t, double r, double eps) {
  if (!(eps > 0.0 && eps <= r && r <= 1.0 && t >= 0.0 && t <= 1.0))
    throw DomainError("splice: need 0 < eps <= r <= 1 and t in [0,1]");
  const double a = r - eps;
  const Vec4 m = curve.position(0.0);
  const Vec4 end = curve.position(t);
  auto inner = [a, eps, t](double tau) { return (tau - a) / eps * t; };
  auto pos = [=](double tau) -> Vec4 {
    if (tau <= a) return m;
    if (tau >= r) return end;
    return curve.position(inner(tau));
  };
  auto vel = [=](double tau) -> Vec4 {
    if (tau < a || tau > r) return Vec4::Zero();
    return curve.velocity(std::clamp(inner(tau), 0.0, t)) * (t / eps);
  };
  Curve out(curve.id() + "#splice", CurveFamily::kSpliced, pos, vel);
  out.set_breakpoints({a, r});
  return out;
}

TransportProperties transport_properties(const Connection& a, const Curve& curve, int steps,
                                         int coarse_steps) {
  TransportProperties p;
  TransportOptions opt;
  opt.steps = steps;
  const auto endpoint = [&](const Curve& c) { return parallel_transport(a, c, 0.0, 1.0, opt); };
  const TransportResult full = endpoint(curve);
  const GroupMatrix& u = full.u;
  p.unitarity = full.unitarity_drift;
  p.determinant = std::abs(std::abs(transport_endpoint(a, curve, steps).determinant()) - 1.0);

  constexpr double kTriples[][3] = {{0.0, 0.4, 1.0}, {0.2, 0.5, 0.9}, {0.1, 0.75, 0.8}};
  for (const auto& tr : kTriples) {
    const GroupMatrix tr_ = parallel_transport(a, curve, tr[0], tr[2], opt).u;
    const GroupMatrix ts = parallel_transport(a, curve, tr[1], tr[2], opt).u;
    const GroupMatrix sr = parallel_transport(a, curve, tr[0], tr[1], opt).u;
    p.multiplicativity = std::max(p.multiplicativity, (ts * sr - tr_).norm());
    p.unitarity = std::max(p.unitarity, parallel_transport(a, curve, tr[0], tr[2], opt).unitarity_drift);
  }

  const Curve squared = reparameterize(curve, Reparameterization::power(2.0));
  const Curve plateau = reparameterize(
      curve, Reparameterization::piecewise_linear({0.0, 0.3, 0.6, 1.0}, {0.0, 0.5, 0.5, 1.0}));
  p.reparameterization = std::max((endpoint(squared).u - u).norm(), (endpoint(plateau).u - u).norm());

  constexpr double kR = 0.6, kEps = 0.2;
  const Curve spliced = splice(curve, 1.0, kR, kEps);
  const GroupMatrix id = identity_group(a.dim());
  p.constant_restriction =
      std::max((parallel_transport(a, spliced, 0.0, kR - kEps, opt).u - id).norm(),
               (parallel_transport(a, spliced, kR, 1.0, opt).u - id).norm());
  p.splice_endpoint = (endpoint(spliced).u - u).norm();

  const GroupMatrix u1 = transport_endpoint(a, curve, coarse_steps);
  const GroupMatrix u2 = transport_endpoint(a, curve, 2 * coarse_steps);
  const GroupMatrix u4 = transport_endpoint(a, curve, 4 * coarse_steps);
  p.convergence_ratio = (u1 - u2).norm() / (u2 - u4).norm();
  return p;
}

}  // namespace levylap
