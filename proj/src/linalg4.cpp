#include "levylap/linalg4.hpp"

#include "levylap/errors.hpp"

namespace levylap {

GaugeMatrix zero_gauge(int n) { return GaugeMatrix::Zero(n, n); }

GroupMatrix identity_group(int n) { return GroupMatrix::Identity(n, n); }

GaugeMatrix su2_generator(int a) {
  const cd i(0.0, 1.0);
  GaugeMatrix s(2, 2);
  switch (a) {
    case 0: s << 0.0, 1.0, 1.0, 0.0; break;
    case 1: s << 0.0, -i, i, 0.0; break;
    case 2: s << 1.0, 0.0, 0.0, -1.0; break;
    default: throw DomainError("su2_generator: index must be 0, 1 or 2");
  }
  return s * cd(0.0, -0.5);
}

GaugeMatrix commutator(const GaugeMatrix& x, const GaugeMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols() || x.rows() != x.cols())
    throw DomainError("commutator: dimension mismatch");
  return x * y - y * x;
}

double anti_hermitian_defect(const CMat& x) {
  return (x + x.adjoint()).norm();
}

double unitarity_defect(const CMat& u) {
  return (u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).norm();
}

GroupMatrix unitary_projection(const CMat& u) {
  Eigen::JacobiSVD<CMat> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

const char* to_string(Isoclinic f) { return f == Isoclinic::kLeft ? "left" : "right"; }

Isoclinic other(Isoclinic f) {
  return f == Isoclinic::kLeft ? Isoclinic::kRight : Isoclinic::kLeft;
}

So4Element::So4Element(const Mat4& m) : m_(0.5 * (m - m.transpose())) {}

So4Element So4Element::from_components(Isoclinic factor, double b, double c, double d) {
  // Quaternionic matrix forms with a = 0:
  //   left               right
  //   0 -b -c -d         0 -b -c -d
  //   b  0 -d  c         b  0  d -c
  //   c  d  0 -b         c -d  0  b
  //   d -c  b  0         d  c -b  0
  Mat4 m;
  if (factor == Isoclinic::kLeft) {
    m << 0, -b, -c, -d,
         b, 0, -d, c,
         c, d, 0, -b,
         d, -c, b, 0;
  } else {
    m << 0, -b, -c, -d,
         b, 0, d, -c,
         c, -d, 0, b,
         d, c, -b, 0;
  }
  return So4Element(m, Raw{});
}

So4Element So4Element::generator(Isoclinic factor, int index) {
  if (index < 0 || index > 2) throw DomainError("So4Element::generator: index must be 0, 1 or 2");
  return from_components(factor, index == 0 ? 1.0 : 0.0, index == 1 ? 1.0 : 0.0,
                         index == 2 ? 1.0 : 0.0);
}

double frobenius_inner(const So4Element& a, const So4Element& b) {
  return (a.matrix().array() * b.matrix().array()).sum();
}

Eigen::Vector3d So4Element::coordinates(Isoclinic factor) const {
  // Generators are mutually orthogonal with squared Frobenius norm 4.
  Eigen::Vector3d c;
  for (int i = 0; i < 3; ++i) c[i] = frobenius_inner(*this, generator(factor, i)) / 4.0;
  return c;
}

std::pair<So4Element, So4Element> so4_project(const So4Element& omega) {
  const Eigen::Vector3d l = omega.coordinates(Isoclinic::kLeft);
  const Eigen::Vector3d r = omega.coordinates(Isoclinic::kRight);
  return {So4Element::from_components(Isoclinic::kLeft, l[0], l[1], l[2]),
          So4Element::from_components(Isoclinic::kRight, r[0], r[1], r[2])};
}

So4Element So4Element::left_part() const { return so4_project(*this).first; }
So4Element So4Element::right_part() const { return so4_project(*this).second; }

GaugeTwoForm zero_gauge_form(int n) { return GaugeTwoForm(zero_gauge(n)); }

RealTwoForm to_two_form(const So4Element& omega) {
  RealTwoForm f(0.0);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) f.set(a, b, omega(a, b));
  return f;
}

So4Element to_so4(const RealTwoForm& form) {
  Mat4 m = Mat4::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m(a, b) = form(a, b);
  return So4Element(m);
}

GaugeMatrix pair_form(const So4Element& omega, const GaugeTwoForm& form, double c0) {
  const int n = static_cast<int>(form(0, 1).rows());
  GaugeMatrix acc = zero_gauge(n);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) acc += (2.0 * omega(a, b)) * form(a, b);
  return c0 * acc;
}

double pair_form(const So4Element& omega, const RealTwoForm& form, double c0) {
  double acc = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) acc += 2.0 * omega(a, b) * form(a, b);
  return c0 * acc;
}

GaugeTwoForm conjugate(const GaugeTwoForm& form, const GroupMatrix& u) {
  const int n = static_cast<int>(u.rows());
  GaugeTwoForm r = zero_gauge_form(n);
  const GroupMatrix uinv = u.adjoint();
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) r.set(a, b, uinv * form(a, b) * u);
  return r;
}

}  // namespace levylap
