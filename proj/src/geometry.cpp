#include "levylap/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "levylap/errors.hpp"

namespace levylap {

Metric Metric::flat() { return Metric(); }

Metric Metric::conformal(std::string name, ScalarFn phi, GradientFn grad, HessianFn hess) {
  Metric m;
  m.flat_ = false;
  m.name_ = std::move(name);
  m.phi_ = std::move(phi);
  m.grad_ = std::move(grad);
  m.hess_ = std::move(hess);
  return m;
}

Metric Metric::conformal_linear(double alpha, int axis) {
  if (axis < 0 || axis > 3) throw DomainError("conformal_linear: axis must be in 0..3");
  Vec4 g = Vec4::Zero();
  g[axis] = alpha;
  return conformal(
      "conformal_linear", [alpha, axis](const Vec4& x) { return alpha * x[axis]; },
      [g](const Vec4&) { return g; }, [](const Vec4&) { return Mat4::Zero().eval(); });
}

Metric Metric::conformal_bump(double alpha, const Vec4& center, double width) {
  if (!(width > 0.0)) throw DomainError("conformal_bump: width must be positive");
  const double w2 = width * width;
  auto value = [=](const Vec4& x) { return alpha * std::exp(-(x - center).squaredNorm() / w2); };
  auto grad = [=](const Vec4& x) {
    const Vec4 d = x - center;
    return Vec4(-2.0 / w2 * alpha * std::exp(-d.squaredNorm() / w2) * d);
  };
  auto hess = [=](const Vec4& x) {
    const Vec4 d = x - center;
    const double f = alpha * std::exp(-d.squaredNorm() / w2);
    return Mat4(f * (4.0 / (w2 * w2) * d * d.transpose() - 2.0 / w2 * Mat4::Identity()));
  };
  return conformal("conformal_bump", value, grad, hess);
}

Mat4 Metric::g(const Vec4& x) const {
  return std::exp(2.0 * phi(x)) * Mat4::Identity();
}

Mat4 Metric::g_inv(const Vec4& x) const {
  return std::exp(-2.0 * phi(x)) * Mat4::Identity();
}

double Metric::sqrt_det(const Vec4& x) const { return std::exp(4.0 * phi(x)); }

double Metric::inner(const Vec4& x, const Vec4& u, const Vec4& v) const {
  return std::exp(2.0 * phi(x)) * u.dot(v);
}

// Conformal Christoffel symbols:
//   Gamma^k_{l n} = d^k_l p_n + d^k_n p_l - d_{l n} p_k,   p = grad phi.
Christoffel christoffel(const Metric& metric, const Vec4& x) {
  Christoffel gamma;
  const Vec4 p = metric.grad_phi(x);
  for (int k = 0; k < 4; ++k) {
    Mat4 m = Mat4::Zero();
    for (int l = 0; l < 4; ++l)
      for (int n = 0; n < 4; ++n) {
        double v = 0.0;
        if (k == l) v += p[n];
        if (k == n) v += p[l];
        if (l == n) v -= p[k];
        m(l, n) = v;
      }
    gamma[k] = m;
  }
  return gamma;
}

namespace {

Vec4 contract_with(const Vec4& p, const Vec4& u, const Vec4& v) {
  return u * p.dot(v) + v * p.dot(u) - p * u.dot(v);
}

void check_finite(const Vec4& v, const char* what) {
  if (!v.allFinite()) throw IntegrationError(std::string(what) + ": non-finite state");
}

}  // namespace

Vec4 christoffel_contract(const Metric& metric, const Vec4& x, const Vec4& u, const Vec4& v) {
  if (metric.is_flat()) return Vec4::Zero();
  return contract_with(metric.grad_phi(x), u, v);
}

Mat4 christoffel_along(const Metric& metric, const Vec4& x, const Vec4& v) {
  if (metric.is_flat()) return Mat4::Zero();
  const Vec4 p = metric.grad_phi(x);
  return p.dot(v) * Mat4::Identity() + v * p.transpose() - p * v.transpose();
}

Vec4 exp_point(const Metric& metric, const Vec4& x, const Vec4& v, int steps) {
  if (metric.is_flat()) return x + v;
  if (steps < 1) throw DomainError("exp_point: steps must be positive");
  const double h = 1.0 / steps;
  Vec4 pos = x;
  Vec4 vel = v;
  auto acc = [&](const Vec4& p, const Vec4& u) {
    return Vec4(-contract_with(metric.grad_phi(p), u, u));
  };
  for (int i = 0; i < steps; ++i) {
    const Vec4 k1x = vel, k1v = acc(pos, vel);
    const Vec4 k2x = vel + 0.5 * h * k1v, k2v = acc(pos + 0.5 * h * k1x, k2x);
    const Vec4 k3x = vel + 0.5 * h * k2v, k3v = acc(pos + 0.5 * h * k2x, k3x);
    const Vec4 k4x = vel + h * k3v, k4v = acc(pos + h * k3x, k4x);
    pos += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    vel += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  check_finite(pos, "exp_point");
  return pos;
}

ExpJet exp_point_with_tangent(const Metric& metric, const Vec4& x, const Vec4& v, const Vec4& dx,
                              const Vec4& dv, int steps) {
  if (metric.is_flat()) return {x + v, dx + dv};
  if (steps < 1) throw DomainError("exp_point_with_tangent: steps must be positive");

  // State (x, u, dx, du); the linearized geodesic equation is
  //   d(du)/dt = -dGamma[dx](u, u) - 2 Gamma(u, du).
  struct State {
    Vec4 x, u, dx, du;
  };
  auto rhs = [&](const State& s) {
    const Vec4 p = metric.grad_phi(s.x);
    const Vec4 dp = metric.hess_phi(s.x) * s.dx;
    return State{s.u, -contract_with(p, s.u, s.u), s.du,
                 -contract_with(dp, s.u, s.u) - 2.0 * contract_with(p, s.u, s.du)};
  };
  auto axpy = [](const State& s, double a, const State& k) {
    return State{s.x + a * k.x, s.u + a * k.u, s.dx + a * k.dx, s.du + a * k.du};
  };
  const double h = 1.0 / steps;
  State s{x, v, dx, dv};
  for (int i = 0; i < steps; ++i) {
    const State k1 = rhs(s);
    const State k2 = rhs(axpy(s, 0.5 * h, k1));
    const State k3 = rhs(axpy(s, 0.5 * h, k2));
    const State k4 = rhs(axpy(s, h, k3));
    s.x += h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    s.u += h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
    s.dx += h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    s.du += h / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
  }
  check_finite(s.x, "exp_point_with_tangent");
  check_finite(s.dx, "exp_point_with_tangent");
  return {s.x, s.dx};
}

std::vector<double> geodesic_energy_profile(const Metric& metric, const Vec4& x, const Vec4& v,
                                            int steps) {
  std::vector<double> out;
  out.reserve(steps + 1);
  out.push_back(metric.inner(x, v, v));
  const double h = 1.0 / steps;
  Vec4 pos = x, vel = v;
  auto acc = [&](const Vec4& p, const Vec4& u) {
    return Vec4(-christoffel_contract(metric, p, u, u));
  };
  for (int i = 0; i < steps; ++i) {
    const Vec4 k1x = vel, k1v = acc(pos, vel);
    const Vec4 k2x = vel + 0.5 * h * k1v, k2v = acc(pos + 0.5 * h * k1x, k2x);
    const Vec4 k3x = vel + 0.5 * h * k2v, k3v = acc(pos + 0.5 * h * k2x, k3x);
    const Vec4 k4x = vel + h * k3v, k4v = acc(pos + h * k3x, k4x);
    pos += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    vel += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    out.push_back(metric.inner(pos, vel, vel));
  }
  return out;
}

Mat4 coordinate_frame(const Metric& metric, const Vec4& x) {
  return std::exp(-metric.phi(x)) * Mat4::Identity();
}

LcTransport::LcTransport(const Metric& metric, const Curve& curve, int steps)
    : metric_(metric),
      curve_(curve),
      trivial_(metric.is_flat()),
      frame0_(coordinate_frame(metric, curve.basepoint())) {
  if (steps < 1) throw DomainError("LcTransport: steps must be positive");
  if (trivial_) return;
  nodes_ = integration_grid(curve_, 0.0, 1.0, steps);
  table_.reserve(nodes_.size());
  Mat4 q = Mat4::Identity();
  table_.push_back(q);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    q = step(q, nodes_[i], nodes_[i + 1] - nodes_[i]);
    if (!q.allFinite()) throw IntegrationError("LcTransport: non-finite state");
    table_.push_back(q);
  }
}

Mat4 LcTransport::step(const Mat4& q, double t0, double dt) const {
  auto rhs = [&](double t, int side, const Mat4& y) {
    return Mat4(-christoffel_along(metric_, curve_.position(t), curve_.velocity(t, side)) * y);
  };
  const Mat4 k1 = rhs(t0, 1, q);
  const Mat4 k2 = rhs(t0 + 0.5 * dt, 0, q + 0.5 * dt * k1);
  const Mat4 k3 = rhs(t0 + 0.5 * dt, 0, q + 0.5 * dt * k2);
  const Mat4 k4 = rhs(t0 + dt, -1, q + dt * k3);
  return q + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Mat4 LcTransport::at(double t) const {
  if (trivial_) return Mat4::Identity();
  const double clamped = std::clamp(t, 0.0, 1.0);
  const std::size_t i = grid_index(nodes_, clamped);
  const double dt = clamped - nodes_[i];
  if (dt <= 1e-15) return table_[i];
  return step(table_[i], nodes_[i], dt);
}

Mat4 LcTransport::derivative(double t) const {
  if (trivial_) return Mat4::Zero();
  return -christoffel_along(metric_, curve_.position(t), curve_.velocity(t)) * at(t);
}

int levi_civita(int a, int b, int c, int d) {
  if (a == b || a == c || a == d || b == c || b == d || c == d) return 0;
  int p[4] = {a, b, c, d};
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (p[i] > p[j]) sign = -sign;
  return sign;
}

namespace {

template <class T>
TwoForm4<T> hodge_impl(const Metric& metric, const Vec4& x, const TwoForm4<T>& form, const T& zero) {
  const Mat4 ginv = metric.g_inv(x);
  const double sd = metric.sqrt_det(x);
  // Raise both indices first: L^{rho sigma} = g^{rho a} g^{sigma b} L_{ab}.
  TwoForm4<T> raised(zero);
  for (int r = 0; r < 4; ++r)
    for (int s = r + 1; s < 4; ++s) {
      T acc = zero;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          const double w = ginv(r, a) * ginv(s, b);
          if (a != b && w != 0.0) acc = T(acc + form(a, b) * w);
        }
      raised.set(r, s, acc);
    }
  TwoForm4<T> out(zero);
  for (int m = 0; m < 4; ++m)
    for (int n = m + 1; n < 4; ++n) {
      T acc = zero;
      for (int r = 0; r < 4; ++r)
        for (int s = r + 1; s < 4; ++s) {
          const int e = levi_civita(m, n, r, s);
          if (e != 0) acc = T(acc + raised(r, s) * static_cast<double>(e));
        }
      out.set(m, n, T(acc * sd));
    }
  return out;
}

}  // namespace

RealTwoForm hodge_star2(const Metric& metric, const Vec4& x, const RealTwoForm& form) {
  return hodge_impl<double>(metric, x, form, 0.0);
}

GaugeTwoForm hodge_star2(const Metric& metric, const Vec4& x, const GaugeTwoForm& form) {
  const int n = static_cast<int>(form(0, 1).rows());
  return hodge_impl<GaugeMatrix>(metric, x, form, zero_gauge(n));
}

std::pair<RealTwoForm, RealTwoForm> sd_split(const Metric& metric, const Vec4& x,
                                             const RealTwoForm& form) {
  const RealTwoForm star = hodge_star2(metric, x, form);
  return {(form + star) * 0.5, (form - star) * 0.5};
}

std::pair<GaugeTwoForm, GaugeTwoForm> sd_split(const Metric& metric, const Vec4& x,
                                               const GaugeTwoForm& form) {
  const GaugeTwoForm star = hodge_star2(metric, x, form);
  return {(form + star) * 0.5, (form - star) * 0.5};
}

}  // namespace levylap
