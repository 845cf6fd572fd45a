#include "levylap/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace levylap {

const char* to_string(CurveFamily f) {
  switch (f) {
    case CurveFamily::kPolynomial: return "polynomial";
    case CurveFamily::kTrigonometric: return "trigonometric";
    case CurveFamily::kSpliced: return "spliced";
    case CurveFamily::kReparameterized: return "reparameterized";
    case CurveFamily::kOther: break;
  }
  return "other";
}

Curve::Curve(std::string id, CurveFamily family, PointFn position, PointFn velocity)
    : id_(std::move(id)),
      family_(family),
      position_(std::move(position)),
      velocity_(std::move(velocity)) {}

Vec4 Curve::velocity(double t, int side) const {
  constexpr double kNudge = 1e-13;
  if (side != 0 && std::binary_search(breakpoints_.begin(), breakpoints_.end(), t))
    return velocity_(side > 0 ? t + kNudge : t - kNudge);
  return velocity_(t);
}

void Curve::set_breakpoints(std::vector<double> b) {
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  std::erase_if(b, [](double x) { return !(x > 0.0 && x < 1.0); });
  breakpoints_ = std::move(b);
}

std::vector<double> integration_grid(const Curve& c, double s, double t, int steps) {
  std::vector<double> cuts{s};
  for (double b : c.breakpoints())
    if (b > s && b < t) cuts.push_back(b);
  cuts.push_back(t);
  std::vector<double> nodes;
  nodes.reserve((cuts.size() - 1) * steps + 1);
  nodes.push_back(s);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], len = cuts[i + 1] - cuts[i];
    for (int j = 1; j < steps; ++j) nodes.push_back(a + len * j / steps);
    nodes.push_back(cuts[i + 1]);
  }
  return nodes;
}

std::size_t grid_index(const std::vector<double>& nodes, double t) {
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
  if (it == nodes.begin()) return 0;
  return static_cast<std::size_t>(it - nodes.begin()) - 1;
}

Curve Curve::polynomial(std::string id, std::vector<Vec4> coeffs) {
  auto pos = [coeffs](double t) {
    Vec4 x = Vec4::Zero();
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) x = x * t + *it;
    return x;
  };
  auto vel = [coeffs](double t) {
    Vec4 v = Vec4::Zero();
    for (std::size_t j = coeffs.size(); j-- > 1;) v = v * t + static_cast<double>(j) * coeffs[j];
    return v;
  };
  return Curve(std::move(id), CurveFamily::kPolynomial, pos, vel);
}

Curve Curve::trigonometric(std::string id, const Vec4& offset, const Vec4& amplitude,
                           const Vec4& frequency, const Vec4& phase) {
  constexpr double pi = std::numbers::pi;
  auto pos = [=](double t) {
    Vec4 x;
    for (int m = 0; m < 4; ++m)
      x[m] = offset[m] + amplitude[m] * std::sin(pi * frequency[m] * t + phase[m]);
    return x;
  };
  auto vel = [=](double t) {
    Vec4 v;
    for (int m = 0; m < 4; ++m)
      v[m] = amplitude[m] * pi * frequency[m] * std::cos(pi * frequency[m] * t + phase[m]);
    return v;
  };
  return Curve(std::move(id), CurveFamily::kTrigonometric, pos, vel);
}

Curve Curve::straight_line(std::string id, const Vec4& start, const Vec4& direction) {
  return polynomial(std::move(id), {start, direction});
}

Curve Curve::constant(std::string id, const Vec4& point) {
  return Curve(std::move(id), CurveFamily::kOther, [point](double) { return point; },
               [](double) { return Vec4::Zero().eval(); });
}

double velocity_consistency(const Curve& c, int samples, double step) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = (i + 0.5) / samples;
    const Vec4 fd = (c.position(t + step) - c.position(t - step)) / (2.0 * step);
    worst = std::max(worst, (fd - c.velocity(t)).norm());
  }
  return worst;
}

}  // namespace levylap
