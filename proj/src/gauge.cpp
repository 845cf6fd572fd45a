#include "levylap/gauge.hpp"

#include <cmath>
#include <memory>
#include <tuple>

#include "levylap/errors.hpp"
#include "levylap/rng.hpp"

namespace levylap {

namespace {

Potential zero_potential(int n) {
  Potential p;
  p.fill(zero_gauge(n));
  return p;
}

PotentialGradient zero_gradient(int n) {
  PotentialGradient g;
  for (auto& row : g) row.fill(zero_gauge(n));
  return g;
}

PotentialHessian zero_hessian(int n) {
  PotentialHessian h;
  for (auto& plane : h)
    for (auto& row : plane) row.fill(zero_gauge(n));
  return h;
}

// 4th-order central difference of a matrix-array valued map along axis l.
template <class Fn>
auto central_difference(const Fn& fn, const Vec4& x, int l, double h) {
  Vec4 e = Vec4::Zero();
  e[l] = h;
  auto p2 = fn(x + 2.0 * e);
  auto p1 = fn(x + e);
  auto m1 = fn(x - e);
  auto m2 = fn(x - 2.0 * e);
  return std::make_tuple(std::move(p2), std::move(p1), std::move(m1), std::move(m2));
}

GaugeMatrix stencil(const GaugeMatrix& p2, const GaugeMatrix& p1, const GaugeMatrix& m1,
                    const GaugeMatrix& m2, double h) {
  return (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
}

}  // namespace

Connection::Connection(std::string name, int dim, PotentialFn potential, GradientFn gradient,
                       HessianFn hessian)
    : name_(std::move(name)),
      dim_(dim),
      potential_(std::move(potential)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)) {
  if (dim < 1 || dim > kMaxGaugeDim) throw DomainError("Connection: unsupported fiber dimension");
}

PotentialGradient Connection::gradient(const Vec4& x) const {
  if (gradient_) return gradient_(x);
  PotentialGradient g;
  for (int l = 0; l < 4; ++l) {
    auto [p2, p1, m1, m2] = central_difference(potential_, x, l, fd_step_);
    for (int mu = 0; mu < 4; ++mu) g[l][mu] = stencil(p2[mu], p1[mu], m1[mu], m2[mu], fd_step_);
  }
  return g;
}

PotentialHessian Connection::hessian(const Vec4& x) const {
  if (hessian_) return hessian_(x);
  PotentialHessian hs;
  auto grad = [this](const Vec4& y) { return gradient(y); };
  for (int l = 0; l < 4; ++l) {
    auto [p2, p1, m1, m2] = central_difference(grad, x, l, fd_step_);
    for (int k = 0; k < 4; ++k)
      for (int mu = 0; mu < 4; ++mu)
        hs[l][k][mu] = stencil(p2[k][mu], p1[k][mu], m1[k][mu], m2[k][mu], fd_step_);
  }
  // Symmetrize in (lambda, kappa); the exact Hessian is symmetric.
  for (int l = 0; l < 4; ++l)
    for (int k = l + 1; k < 4; ++k)
      for (int mu = 0; mu < 4; ++mu) {
        const GaugeMatrix avg = 0.5 * (hs[l][k][mu] + hs[k][l][mu]);
        hs[l][k][mu] = avg;
        hs[k][l][mu] = avg;
      }
  return hs;
}

GaugeMatrix Connection::along(const Vec4& x, const Vec4& v) const {
  if (along_) return along_(x, v);
  const Potential a = potential_(x);
  GaugeMatrix r = v[0] * a[0];
  for (int mu = 1; mu < 4; ++mu) r += v[mu] * a[mu];
  return r;
}

Connection Connection::without_analytic_derivatives() const {
  Connection c(name_ + "_fd", dim_, potential_);
  c.along_ = along_;
  c.parameters_ = parameters_;
  c.fd_step_ = fd_step_;
  return c;
}

GaugeTwoForm curvature(const Connection& a, const Vec4& x) {
  const Potential p = a.potential(x);
  const PotentialGradient g = a.gradient(x);
  GaugeTwoForm f = zero_gauge_form(a.dim());
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu)
      f.set(mu, nu, g[mu][nu] - g[nu][mu] + p[mu] * p[nu] - p[nu] * p[mu]);
  return f;
}

std::array<GaugeTwoForm, 4> curvature_gradient(const Connection& a, const Vec4& x) {
  const Potential p = a.potential(x);
  const PotentialGradient g = a.gradient(x);
  const PotentialHessian h = a.hessian(x);
  std::array<GaugeTwoForm, 4> out;
  for (int l = 0; l < 4; ++l) {
    out[l] = zero_gauge_form(a.dim());
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu)
        out[l].set(mu, nu,
                   h[l][mu][nu] - h[l][nu][mu] + g[l][mu] * p[nu] - p[nu] * g[l][mu] +
                       p[mu] * g[l][nu] - g[l][nu] * p[mu]);
  }
  return out;
}

CovariantDerivativeF covariant_derivative_F(const Connection& a, const Metric& metric,
                                            const Vec4& x) {
  const Potential p = a.potential(x);
  const GaugeTwoForm f = curvature(a, x);
  const std::array<GaugeTwoForm, 4> df = curvature_gradient(a, x);
  const Christoffel gamma = christoffel(metric, x);
  const bool flat = metric.is_flat();
  CovariantDerivativeF out;
  for (int l = 0; l < 4; ++l) {
    out[l] = zero_gauge_form(a.dim());
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu) {
        GaugeMatrix v = df[l](mu, nu) + commutator(p[l], f(mu, nu));
        if (!flat) {
          for (int k = 0; k < 4; ++k) {
            v -= gamma[k](l, nu) * f(mu, k);
            v -= gamma[k](l, mu) * f(k, nu);
          }
        }
        out[l].set(mu, nu, v);
      }
  }
  return out;
}

std::array<GaugeMatrix, 4> ym_residual(const Connection& a, const Metric& metric, const Vec4& x) {
  const CovariantDerivativeF nf = covariant_derivative_F(a, metric, x);
  const Mat4 ginv = metric.g_inv(x);
  std::array<GaugeMatrix, 4> r;
  for (int nu = 0; nu < 4; ++nu) {
    GaugeMatrix acc = zero_gauge(a.dim());
    for (int mu = 0; mu < 4; ++mu)
      for (int l = 0; l < 4; ++l)
        if (ginv(mu, l) != 0.0) acc -= ginv(mu, l) * nf[l](mu, nu);
    r[nu] = acc;
  }
  return r;
}

GaugeTensor3 bianchi_residual(const Connection& a, const Vec4& x, const Metric& metric) {
  const CovariantDerivativeF nf = covariant_derivative_F(a, metric, x);
  GaugeTensor3 out;
  for (int l = 0; l < 4; ++l)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        out[l][mu][nu] = nf[l](mu, nu) + nf[mu](nu, l) + nf[nu](l, mu);
  return out;
}

double max_norm(const std::array<GaugeMatrix, 4>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, x.norm());
  return m;
}

double max_norm(const GaugeTensor3& t) {
  double m = 0.0;
  for (const auto& plane : t)
    for (const auto& row : plane)
      for (const auto& x : row) m = std::max(m, x.norm());
  return m;
}

double action_density(const Connection& a, const Metric& metric, const Vec4& x) {
  const GaugeTwoForm f = curvature(a, x);
  const Mat4 ginv = metric.g_inv(x);
  cd acc = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      for (int al = 0; al < 4; ++al)
        for (int be = 0; be < 4; ++be) {
          const double w = ginv(mu, al) * ginv(nu, be);
          if (w != 0.0 && mu != nu && al != be) acc += w * (f(mu, nu) * f(al, be)).trace();
        }
  return -0.5 * acc.real() * metric.sqrt_det(x);
}

const char* to_string(Duality d) { return d == Duality::kSelfDual ? "sd" : "asd"; }

namespace {

// 't Hooft symbols, 0-based with the fourth coordinate at index 3.
double thooft_eta(int a, int mu, int nu, bool bar) {
  if (mu < 3 && nu < 3) return levi_civita(a, mu, nu, 3);
  const double s = bar ? -1.0 : 1.0;
  if (nu == 3 && mu < 3) return a == mu ? s : 0.0;
  if (mu == 3 && nu < 3) return a == nu ? -s : 0.0;
  return 0.0;
}

}  // namespace

Connection make_instanton(Duality kind, double rho, const Vec4& center) {
  if (!(rho > 0.0)) throw DomainError("make_instanton: rho must be positive");
  const bool bar = kind == Duality::kAntiSelfDual;
  // coef[mu][nu] = sum_a 2 eta^a_{mu nu} T_a
  auto coef = std::make_shared<std::array<std::array<GaugeMatrix, 4>, 4>>();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      GaugeMatrix m = zero_gauge(2);
      for (int a = 0; a < 3; ++a) m += 2.0 * thooft_eta(a, mu, nu, bar) * su2_generator(a);
      (*coef)[mu][nu] = m;
    }
  const double rho2 = rho * rho;

  auto potential = [coef, center, rho2](const Vec4& x) {
    const Vec4 y = x - center;
    const double d = y.squaredNorm() + rho2;
    Potential p;
    for (int mu = 0; mu < 4; ++mu) {
      GaugeMatrix m = zero_gauge(2);
      for (int nu = 0; nu < 4; ++nu)
        if (nu != mu) m += (y[nu] / d) * (*coef)[mu][nu];
      p[mu] = m;
    }
    return p;
  };
  auto gradient = [coef, center, rho2](const Vec4& x) {
    const Vec4 y = x - center;
    const double d = y.squaredNorm() + rho2;
    PotentialGradient g;
    for (int l = 0; l < 4; ++l)
      for (int mu = 0; mu < 4; ++mu) {
        GaugeMatrix m = zero_gauge(2);
        for (int nu = 0; nu < 4; ++nu) {
          if (nu == mu) continue;
          const double df = (nu == l ? 1.0 / d : 0.0) - 2.0 * y[nu] * y[l] / (d * d);
          m += df * (*coef)[mu][nu];
        }
        g[l][mu] = m;
      }
    return g;
  };
  auto hessian = [coef, center, rho2](const Vec4& x) {
    const Vec4 y = x - center;
    const double d = y.squaredNorm() + rho2;
    const double d2 = d * d, d3 = d2 * d;
    PotentialHessian h;
    for (int l = 0; l < 4; ++l)
      for (int k = 0; k < 4; ++k)
        for (int mu = 0; mu < 4; ++mu) {
          GaugeMatrix m = zero_gauge(2);
          for (int nu = 0; nu < 4; ++nu) {
            if (nu == mu) continue;
            const double lin = (nu == l ? y[k] : 0.0) + (nu == k ? y[l] : 0.0) +
                               (l == k ? y[nu] : 0.0);
            const double ddf = -2.0 * lin / d2 + 8.0 * y[nu] * y[l] * y[k] / d3;
            m += ddf * (*coef)[mu][nu];
          }
          h[l][k][mu] = m;
        }
    return h;
  };
  Connection c(std::string("instanton_") + to_string(kind), 2, potential, gradient, hessian);
  // A_mu v^mu = (2 / d) sum_a (eta^a_{mu nu} v^mu y^nu) T_a.
  std::array<std::array<std::array<double, 4>, 4>, 3> eta{};
  for (int a = 0; a < 3; ++a)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) eta[a][mu][nu] = thooft_eta(a, mu, nu, bar);
  const std::array<GaugeMatrix, 3> gens{su2_generator(0), su2_generator(1), su2_generator(2)};
  c.set_along([eta, gens, center, rho2](const Vec4& x, const Vec4& v) {
    const Vec4 y = x - center;
    const double scale = 2.0 / (y.squaredNorm() + rho2);
    GaugeMatrix m = zero_gauge(2);
    for (int a = 0; a < 3; ++a) {
      double ca = 0.0;
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) ca += eta[a][mu][nu] * v[mu] * y[nu];
      m += (scale * ca) * gens[a];
    }
    return m;
  });
  c.parameters()["rho"] = rho;
  for (int i = 0; i < 4; ++i) c.parameters()["center" + std::to_string(i)] = center[i];
  return c;
}

Connection flat_connection(int n) {
  return Connection(
      "flat", n, [n](const Vec4&) { return zero_potential(n); },
      [n](const Vec4&) { return zero_gradient(n); }, [n](const Vec4&) { return zero_hessian(n); });
}

Connection constant_connection(const Potential& values) {
  const int n = static_cast<int>(values[0].rows());
  return Connection(
      "constant", n, [values](const Vec4&) { return values; },
      [n](const Vec4&) { return zero_gradient(n); }, [n](const Vec4&) { return zero_hessian(n); });
}

Connection perturbed_connection(const Connection& base, double eps, const Vec4& center,
                                double width) {
  if (base.dim() != 2) throw DomainError("perturbed_connection: base must be su(2)-valued");
  if (!(width > 0.0)) throw DomainError("perturbed_connection: width must be positive");
  Potential dir;
  dir[0] = su2_generator(0);
  dir[1] = su2_generator(1) + 0.5 * su2_generator(2);
  dir[2] = su2_generator(2) - 0.3 * su2_generator(0);
  dir[3] = 0.7 * su2_generator(0) + 0.2 * su2_generator(1);
  const double w2 = width * width;
  auto bump = [=](const Vec4& x) { return std::exp(-(x - center).squaredNorm() / w2); };

  auto potential = [base, dir, eps, bump](const Vec4& x) {
    Potential p = base.potential(x);
    const double b = eps * bump(x);
    for (int mu = 0; mu < 4; ++mu) p[mu] += b * dir[mu];
    return p;
  };
  Connection::GradientFn gradient;
  Connection::HessianFn hessian;
  if (base.has_analytic_gradient()) {
    gradient = [base, dir, eps, bump, center, w2](const Vec4& x) {
      PotentialGradient g = base.gradient(x);
      const Vec4 y = x - center;
      const double b = eps * bump(x);
      for (int l = 0; l < 4; ++l)
        for (int mu = 0; mu < 4; ++mu) g[l][mu] += (-2.0 * y[l] / w2 * b) * dir[mu];
      return g;
    };
  }
  if (base.has_analytic_hessian()) {
    hessian = [base, dir, eps, bump, center, w2](const Vec4& x) {
      PotentialHessian h = base.hessian(x);
      const Vec4 y = x - center;
      const double b = eps * bump(x);
      for (int l = 0; l < 4; ++l)
        for (int k = 0; k < 4; ++k) {
          const double c = b * (4.0 * y[l] * y[k] / (w2 * w2) - (l == k ? 2.0 / w2 : 0.0));
          for (int mu = 0; mu < 4; ++mu) h[l][k][mu] += c * dir[mu];
        }
      return h;
    };
  }
  Connection c(base.name() + "_perturbed", 2, potential, gradient, hessian);
  c.set_along([base, dir, eps, bump](const Vec4& x, const Vec4& v) {
    GaugeMatrix m = base.along(x, v);
    const double b = eps * bump(x);
    for (int mu = 0; mu < 4; ++mu) m += (b * v[mu]) * dir[mu];
    return m;
  });
  c.parameters() = base.parameters();
  c.parameters()["eps"] = eps;
  return c;
}

Connection random_polynomial_connection(std::uint64_t seed) {
  SplitMix64 rng(seed);
  // a[mu][a] * (c0 + c1 . x + x^T C2 x)
  struct Coeffs {
    double c0;
    Vec4 c1;
    Mat4 c2;
  };
  std::array<std::array<Coeffs, 3>, 4> k;
  for (auto& row : k)
    for (auto& c : row) {
      c.c0 = rng.uniform(-0.5, 0.5);
      for (int i = 0; i < 4; ++i) c.c1[i] = rng.uniform(-0.5, 0.5);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) c.c2(i, j) = rng.uniform(-0.5, 0.5);
      c.c2 = 0.5 * (c.c2 + c.c2.transpose()).eval();
    }
  auto potential = [k](const Vec4& x) {
    Potential p;
    for (int mu = 0; mu < 4; ++mu) {
      GaugeMatrix m = zero_gauge(2);
      for (int a = 0; a < 3; ++a) {
        const Coeffs& c = k[mu][a];
        m += (c.c0 + c.c1.dot(x) + x.dot(c.c2 * x)) * su2_generator(a);
      }
      p[mu] = m;
    }
    return p;
  };
  Connection c("random_polynomial", 2, potential);
  c.parameters()["seed"] = static_cast<double>(seed);
  return c;
}

Connection abelian_constant_field(double c) {
  const cd i(0.0, 1.0);
  auto potential = [c, i](const Vec4& x) {
    Potential p = zero_potential(1);
    p[0](0, 0) = -0.5 * c * i * x[1];
    p[1](0, 0) = 0.5 * c * i * x[0];
    return p;
  };
  auto gradient = [c, i](const Vec4&) {
    PotentialGradient g = zero_gradient(1);
    g[1][0](0, 0) = -0.5 * c * i;
    g[0][1](0, 0) = 0.5 * c * i;
    return g;
  };
  Connection conn("abelian_constant", 1, potential, gradient,
                  [](const Vec4&) { return zero_hessian(1); });
  conn.parameters()["c"] = c;
  return conn;
}

Connection conjugated_connection(const Connection& a, const GroupMatrix& u) {
  const GroupMatrix uinv = u.adjoint();
  auto potential = [a, u, uinv](const Vec4& x) {
    Potential p = a.potential(x);
    for (auto& m : p) m = u * m * uinv;
    return p;
  };
  auto gradient = [a, u, uinv](const Vec4& x) {
    PotentialGradient g = a.gradient(x);
    for (auto& row : g)
      for (auto& m : row) m = u * m * uinv;
    return g;
  };
  auto hessian = [a, u, uinv](const Vec4& x) {
    PotentialHessian h = a.hessian(x);
    for (auto& plane : h)
      for (auto& row : plane)
        for (auto& m : row) m = u * m * uinv;
    return h;
  };
  Connection c(a.name() + "_conjugated", a.dim(), potential, gradient, hessian);
  c.parameters() = a.parameters();
  return c;
}

}  // namespace levylap
