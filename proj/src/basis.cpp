#include "levylap/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <lapacke.h>

#include "levylap/errors.hpp"
#include "levylap/quadrature.hpp"

namespace levylap {

struct BasisFamily::Tabulated {
  int grid = 0;
  double step = 0.0;
  std::vector<double> r;             // r at the grid nodes
  std::vector<double> lambda;        // per mode
  std::vector<std::vector<double>> u;   // per mode, grid + 1 node values
  std::vector<std::vector<double>> u2;  // per mode, node second derivatives
};

namespace {

double spline_at(const std::vector<double>& u, const std::vector<double>& u2, double h, int i,
                 double b) {
  const double a = 1.0 - b;
  return a * u[i] + b * u[i + 1] + ((a * a * a - a) * u2[i] + (b * b * b - b) * u2[i + 1]) * h * h / 6.0;
}

double spline_square_integral(const std::vector<double>& u, const std::vector<double>& u2,
                              double h) {
  const double x1 = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double x2 = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double w1 = (18.0 + std::sqrt(30.0)) / 36.0, w2 = (18.0 - std::sqrt(30.0)) / 36.0;
  const double nodes[4] = {-x2, -x1, x1, x2};
  const double weights[4] = {w2, w1, w1, w2};
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i)
    for (int q = 0; q < 4; ++q) {
      const double v = spline_at(u, u2, h, static_cast<int>(i), 0.5 * (nodes[q] + 1.0));
      acc += 0.5 * weights[q] * v * v;
    }
  return acc * h;
}

}  // namespace

const char* to_string(BasisKind k) {
  return k == BasisKind::kSine ? "sine" : "sturm_liouville";
}

BasisFamily BasisFamily::sine() { return BasisFamily(); }

BasisFamily BasisFamily::sturm_liouville(Fn r, std::string r_name, int modes, int grid) {
  if (modes < 1 || grid < 8 || modes >= grid - 1)
    throw DomainError("sturm_liouville: need 1 <= modes < grid - 1");
  auto tab = std::make_shared<Tabulated>();
  tab->grid = grid;
  tab->step = 1.0 / grid;
  const double h = tab->step;
  tab->r.resize(grid + 1);
  for (int i = 0; i <= grid; ++i) tab->r[i] = r(i * h);

  // -u'' + r u = lambda u on the interior nodes.
  const lapack_int n = grid - 1;
  std::vector<double> d(n), e(n);
  for (lapack_int i = 0; i < n; ++i) {
    d[i] = 2.0 / (h * h) + tab->r[i + 1];
    e[i] = -1.0 / (h * h);
  }
  lapack_int found = 0;
  std::vector<double> w(n);
  std::vector<double> z(static_cast<std::size_t>(n) * modes);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(modes));
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0, 1, modes, 0.0,
                     &found, w.data(), z.data(), n, support.data());
  if (info != 0 || found != modes)
    throw IntegrationError("sturm_liouville: tridiagonal eigen-solve failed");

  tab->lambda.assign(w.begin(), w.begin() + modes);
  tab->u.resize(modes);
  tab->u2.resize(modes);
  for (int k = 0; k < modes; ++k) {
    std::vector<double> u(grid + 1, 0.0);
    double norm2 = 0.0;
    for (lapack_int i = 0; i < n; ++i) {
      u[i + 1] = z[static_cast<std::size_t>(k) * n + i];
      norm2 += u[i + 1] * u[i + 1];
    }
    const double scale = (u[1] < 0.0 ? -1.0 : 1.0) / std::sqrt(norm2 * h);
    for (double& v : u) v *= scale;
    std::vector<double> u2(grid + 1);
    for (int i = 0; i <= grid; ++i) u2[i] = (tab->r[i] - tab->lambda[k]) * u[i];
    // Rescale to unit L2 norm of the spline itself; the square of a cubic is
    // integrated exactly by 4-point Gauss-Legendre on each cell.
    const double spline_norm = std::sqrt(spline_square_integral(u, u2, h));
    for (double& v : u) v /= spline_norm;
    for (double& v : u2) v /= spline_norm;
    tab->u[k] = std::move(u);
    tab->u2[k] = std::move(u2);
  }

  BasisFamily b;
  b.kind_ = BasisKind::kSturmLiouville;
  b.name_ = "sturm_liouville(" + r_name + ")";
  b.table_ = std::move(tab);
  return b;
}

int BasisFamily::max_modes() const {
  if (kind_ == BasisKind::kSine) return std::numeric_limits<int>::max();
  return static_cast<int>(table_->lambda.size());
}

void BasisFamily::check_index(int k) const {
  if (k < 1 || k > max_modes()) throw DomainError("BasisFamily: mode index out of range");
}

double BasisFamily::value(int k, double t) const {
  check_index(k);
  if (kind_ == BasisKind::kSine) return std::numbers::sqrt2 * std::sin(k * std::numbers::pi * t);
  const Tabulated& tb = *table_;
  const double x = std::clamp(t, 0.0, 1.0) / tb.step;
  const int i = std::min(tb.grid - 1, static_cast<int>(x));
  const double b = x - i, a = 1.0 - b;
  const auto& u = tb.u[k - 1];
  const auto& u2 = tb.u2[k - 1];
  const double h2 = tb.step * tb.step;
  return a * u[i] + b * u[i + 1] + ((a * a * a - a) * u2[i] + (b * b * b - b) * u2[i + 1]) * h2 / 6.0;
}

double BasisFamily::derivative(int k, double t) const {
  check_index(k);
  if (kind_ == BasisKind::kSine) {
    const double w = k * std::numbers::pi;
    return std::numbers::sqrt2 * w * std::cos(w * t);
  }
  const Tabulated& tb = *table_;
  const double x = std::clamp(t, 0.0, 1.0) / tb.step;
  const int i = std::min(tb.grid - 1, static_cast<int>(x));
  const double b = x - i, a = 1.0 - b;
  const auto& u = tb.u[k - 1];
  const auto& u2 = tb.u2[k - 1];
  const double h = tb.step;
  return (u[i + 1] - u[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * u2[i] +
         (3.0 * b * b - 1.0) / 6.0 * h * u2[i + 1];
}

double BasisFamily::eigenvalue(int k) const {
  check_index(k);
  if (kind_ == BasisKind::kSine) return k * k * std::numbers::pi * std::numbers::pi;
  return table_->lambda[k - 1];
}

double equidensity_residual(const BasisFamily& basis, const std::function<double(double)>& h,
                            int n, int intervals) {
  if (n < 1) throw DomainError("equidensity_residual: n must be positive");
  if (intervals < 1) throw DomainError("equidensity_residual: intervals must be positive");
  double acc = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double t = static_cast<double>(i) / intervals;
    double density = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double e = basis.value(k, t);
      density += e * e;
    }
    const double w = (i == 0 || i == intervals) ? 0.5 : 1.0;
    acc += w * h(t) * (density / n - 1.0);
  }
  return acc / intervals;
}

Eigen::MatrixXd gram_matrix(const BasisFamily& basis, int n, int panels) {
  Eigen::MatrixXd g(n, n);
  const std::vector<double> cuts{0.0, 1.0};
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      auto f = [&](double t) { return basis.value(i, t) * basis.value(j, t); };
      g(i - 1, j - 1) = g(j - 1, i - 1) = integrate<double>(f, cuts, panels).value;
    }
  return g;
}

}  // namespace levylap
