#pragma once

// Composite Gauss-Legendre quadrature on [a, b] split at given cut points.

#include <array>
#include <cmath>
#include <vector>

#include "levylap/linalg4.hpp"

namespace levylap {

inline constexpr int kDefaultPanels = 128;

template <class T>
struct QuadratureResult {
  T value;
  /// |I(panels) - I(panels / 2)|.
  double error = 0.0;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const CMat& v) { return v.norm(); }

// 4-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 4> kGlNodes = {-0.8611363115940526, -0.3399810435848563,
                                                    0.3399810435848563, 0.8611363115940526};
inline constexpr std::array<double, 4> kGlWeights = {0.3478548451374538, 0.6521451548625461,
                                                      0.6521451548625461, 0.3478548451374538};

template <class T, class F>
T composite(F& f, const std::vector<double>& cuts, int panels) {
  T acc{};
  bool first = true;
  for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
    const double a = cuts[piece], w = (cuts[piece + 1] - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * w;
      for (int q = 0; q < 4; ++q) {
        T term = f(mid + 0.5 * w * kGlNodes[q]) * (0.5 * w * kGlWeights[q]);
        if (first) {
          acc = term;
          first = false;
        } else {
          acc = acc + term;
        }
      }
    }
  }
  return acc;
}

}  // namespace detail

/// Integrates f over [cuts.front(), cuts.back()] with `panels` panels on
/// every piece between consecutive cuts.
template <class T, class F>
QuadratureResult<T> integrate(F&& f, const std::vector<double>& cuts, int panels = kDefaultPanels) {
  QuadratureResult<T> r;
  r.value = detail::composite<T>(f, cuts, panels);
  if (panels >= 2) {
    const T coarse = detail::composite<T>(f, cuts, panels / 2);
    r.error = detail::magnitude(T(r.value - coarse));
  }
  return r;
}

/// Cut points {a, interior breakpoints..., b}.
inline std::vector<double> cuts_with(const std::vector<double>& breakpoints, double a = 0.0,
                                     double b = 1.0) {
  std::vector<double> c{a};
  for (double x : breakpoints)
    if (x > a && x < b) c.push_back(x);
  c.push_back(b);
  return c;
}

}  // namespace levylap
