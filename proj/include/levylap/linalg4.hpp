#pragma once

// Small-dimension algebra: so(4) and its isoclinic split, anti-Hermitian
// gauge matrices, and 2-forms on a 4-dimensional chart.

#include <array>
#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace levylap {

using cd = std::complex<double>;

/// Largest supported fiber dimension N. Matrices live on the stack.
inline constexpr int kMaxGaugeDim = 4;

using CMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                           kMaxGaugeDim, kMaxGaugeDim>;
/// Lie-algebra valued (anti-Hermitian) N x N matrix.
using GaugeMatrix = CMat;
/// Group valued (unitary) N x N matrix, e.g. a parallel transport.
using GroupMatrix = CMat;

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

GaugeMatrix zero_gauge(int n);
GroupMatrix identity_group(int n);

/// T_a = -i sigma_a / 2, a in {0,1,2}; [T_a, T_b] = eps_abc T_c.
GaugeMatrix su2_generator(int a);

/// XY - YX. Throws DomainError on a dimension mismatch.
GaugeMatrix commutator(const GaugeMatrix& x, const GaugeMatrix& y);

/// Frobenius norm of X + X^dagger.
double anti_hermitian_defect(const CMat& x);

/// Frobenius norm of U^dagger U - I.
double unitarity_defect(const CMat& u);

/// Nearest unitary matrix (polar factor of the SVD).
GroupMatrix unitary_projection(const CMat& u);

enum class Isoclinic { kLeft, kRight };

const char* to_string(Isoclinic f);
Isoclinic other(Isoclinic f);

/// Antisymmetric real 4x4 matrix, an element of so(4).
class So4Element {
 public:
  So4Element() : m_(Mat4::Zero()) {}
  /// Stores (m - m^T) / 2.
  explicit So4Element(const Mat4& m);

  /// One of the three unnormalized basis matrices of a factor (the b, c or d
  /// slot of the quaternionic matrix form set to one). Each squares to -I.
  static So4Element generator(Isoclinic factor, int index);
  static So4Element from_components(Isoclinic factor, double b, double c, double d);

  const Mat4& matrix() const { return m_; }
  double operator()(int a, int b) const { return m_(a, b); }

  So4Element left_part() const;
  So4Element right_part() const;
  double norm() const { return m_.norm(); }

  /// Coordinates (b, c, d) of the projection onto one factor.
  Eigen::Vector3d coordinates(Isoclinic factor) const;

  So4Element operator+(const So4Element& o) const { return So4Element(m_ + o.m_, Raw{}); }
  So4Element operator-(const So4Element& o) const { return So4Element(m_ - o.m_, Raw{}); }
  So4Element operator*(double s) const { return So4Element(m_ * s, Raw{}); }

 private:
  struct Raw {};
  So4Element(const Mat4& m, Raw) : m_(m) {}
  Mat4 m_;
};

double frobenius_inner(const So4Element& a, const So4Element& b);

/// Orthogonal (Frobenius) projection onto the two isoclinic subalgebras.
/// Returns (left part, right part); they sum to the input.
std::pair<So4Element, So4Element> so4_project(const So4Element& omega);

/// 2-form on a 4-dimensional chart: components[a][b] = -components[b][a].
/// Antisymmetry is exact because set() writes both entries.
template <class T>
class TwoForm4 {
 public:
  TwoForm4() = default;
  explicit TwoForm4(const T& zero) {
    for (auto& row : c_) row.fill(zero);
  }

  const T& operator()(int a, int b) const { return c_[a][b]; }

  void set(int a, int b, const T& v) {
    if (a == b) return;
    c_[a][b] = v;
    c_[b][a] = -v;
  }

  TwoForm4 operator+(const TwoForm4& o) const { return combine(o, 1.0); }
  TwoForm4 operator-(const TwoForm4& o) const { return combine(o, -1.0); }
  TwoForm4 operator*(double s) const {
    TwoForm4 r = *this;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) r.set(a, b, T(c_[a][b] * s));
    return r;
  }

  /// Square root of the sum over all ordered pairs of squared component norms.
  double norm() const {
    double s = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) s += sq_norm(c_[a][b]);
    return std::sqrt(s);
  }

 private:
  TwoForm4 combine(const TwoForm4& o, double sign) const {
    TwoForm4 r = *this;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) r.set(a, b, T(c_[a][b] + sign * o.c_[a][b]));
    return r;
  }
  static double sq_norm(double v) { return v * v; }
  static double sq_norm(const CMat& v) { return v.squaredNorm(); }

  std::array<std::array<T, 4>, 4> c_{};
};

using RealTwoForm = TwoForm4<double>;
using GaugeTwoForm = TwoForm4<GaugeMatrix>;

GaugeTwoForm zero_gauge_form(int n);

/// The real 2-form with the same components as an so(4) element.
RealTwoForm to_two_form(const So4Element& omega);
So4Element to_so4(const RealTwoForm& form);

/// c0 * sum_{a,b} Omega_ab L_ab.
GaugeMatrix pair_form(const So4Element& omega, const GaugeTwoForm& form, double c0 = 1.0);
double pair_form(const So4Element& omega, const RealTwoForm& form, double c0 = 1.0);

/// Conjugation U^{-1} L U of every component, U unitary.
GaugeTwoForm conjugate(const GaugeTwoForm& form, const GroupMatrix& u);

/// Components of the form in a new basis: result_ab = L(Z_a, Z_b) where Z_a
/// is column a of `frame`.
template <class T>
TwoForm4<T> frame_components(const TwoForm4<T>& form, const Mat4& frame, const T& zero) {
  TwoForm4<T> r(zero);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      T acc = zero;
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
          if (mu == nu) continue;
          const double w = frame(mu, a) * frame(nu, b);
          if (w != 0.0) acc = T(acc + form(mu, nu) * w);
        }
      r.set(a, b, acc);
    }
  return r;
}

}  // namespace levylap
