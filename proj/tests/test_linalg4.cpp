#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "levylap/errors.hpp"
#include "levylap/geometry.hpp"
#include "levylap/linalg4.hpp"

using namespace levylap;

namespace {

// The two quaternionic matrix forms, written out entry by entry.
Mat4 left_form(double b, double c, double d) {
  Mat4 m;
  m << 0, -b, -c, -d,
       b, 0, -d, c,
       c, d, 0, -b,
       d, -c, b, 0;
  return m;
}

Mat4 right_form(double b, double c, double d) {
  Mat4 m;
  m << 0, -b, -c, -d,
       b, 0, d, -c,
       c, -d, 0, b,
       d, c, -b, 0;
  return m;
}

Mat4 random_antisymmetric(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat4 m = Mat4::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      m(a, b) = u(rng);
      m(b, a) = -m(a, b);
    }
  return m;
}

GaugeTwoForm random_gauge_form(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GaugeTwoForm f = zero_gauge_form(2);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      GaugeMatrix v = zero_gauge(2);
      for (int i = 0; i < 3; ++i) v += u(rng) * su2_generator(i);
      f.set(a, b, v);
    }
  return f;
}

// 2-forms e^a ^ e^b + s e^c ^ e^d spanning the (anti-)self-dual sectors for
// the orientation eps_0123 = +1.
RealTwoForm sector_form(int i, double sign) {
  RealTwoForm f(0.0);
  const int pairs[3][4] = {{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
  const int* p = pairs[i];
  f.set(p[0], p[1], 1.0);
  f.set(p[2], p[3], sign);
  return f;
}

}  // namespace

TEST_CASE("generators reproduce the displayed matrix forms") {
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d e = Eigen::Vector3d::Zero();
    e[i] = 1.0;
    CHECK((So4Element::generator(Isoclinic::kLeft, i).matrix() - left_form(e[0], e[1], e[2]))
              .norm() == 0.0);
    CHECK((So4Element::generator(Isoclinic::kRight, i).matrix() - right_form(e[0], e[1], e[2]))
              .norm() == 0.0);
  }
}

TEST_CASE("generators are orthogonal and the factors commute") {
  std::vector<Mat4> g;
  for (int i = 0; i < 3; ++i) g.push_back(left_form(i == 0, i == 1, i == 2));
  for (int i = 0; i < 3; ++i) g.push_back(right_form(i == 0, i == 1, i == 2));
  for (int i = 0; i < 6; ++i) {
    CHECK((g[i] * g[i] + Mat4::Identity()).norm() == 0.0);
    for (int j = i + 1; j < 6; ++j) CHECK((g[i].cwiseProduct(g[j])).sum() == 0.0);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 3; j < 6; ++j) CHECK((g[i] * g[j] - g[j] * g[i]).norm() == 0.0);
}

TEST_CASE("so4_project examples") {
  SUBCASE("left generator is its own left part") {
    const auto [l, r] = so4_project(So4Element(left_form(1, 0, 0)));
    CHECK((l.matrix() - left_form(1, 0, 0)).norm() < 1e-15);
    CHECK(r.norm() < 1e-15);
  }
  SUBCASE("zero") {
    const auto [l, r] = so4_project(So4Element());
    CHECK(l.norm() == 0.0);
    CHECK(r.norm() == 0.0);
  }
  SUBCASE("single plane rotation against a Gram solve") {
    Mat4 e = Mat4::Zero();
    e(0, 1) = 1.0;
    e(1, 0) = -1.0;
    std::vector<Mat4> g;
    for (int i = 0; i < 3; ++i) g.push_back(left_form(i == 0, i == 1, i == 2));
    for (int i = 0; i < 3; ++i) g.push_back(right_form(i == 0, i == 1, i == 2));
    Eigen::Matrix<double, 6, 6> gram;
    Eigen::Matrix<double, 6, 1> rhs;
    for (int i = 0; i < 6; ++i) {
      rhs[i] = g[i].cwiseProduct(e).sum();
      for (int j = 0; j < 6; ++j) gram(i, j) = g[i].cwiseProduct(g[j]).sum();
    }
    const Eigen::Matrix<double, 6, 1> x = gram.ldlt().solve(rhs);
    Mat4 left = Mat4::Zero(), right = Mat4::Zero();
    for (int i = 0; i < 3; ++i) {
      left += x[i] * g[i];
      right += x[i + 3] * g[i + 3];
    }
    const auto [l, r] = so4_project(So4Element(e));
    CHECK((l.matrix() - left).norm() < 1e-14);
    CHECK((r.matrix() - right).norm() < 1e-14);
    // Half of the b generator of each factor, with the sign of E_12 - E_21.
    CHECK((l.matrix() + 0.5 * left_form(1, 0, 0)).norm() < 1e-14);
    CHECK((r.matrix() + 0.5 * right_form(1, 0, 0)).norm() < 1e-14);
  }
}

TEST_CASE("so4_project is an orthogonal idempotent split") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const So4Element omega(random_antisymmetric(rng));
    const auto [l, r] = so4_project(omega);
    CHECK(std::abs(frobenius_inner(l, r)) < 1e-12);
    CHECK(((l + r).matrix() - omega.matrix()).norm() < 1e-14);
    const auto [ll, lr] = so4_project(l);
    CHECK((ll.matrix() - l.matrix()).norm() < 1e-14);
    CHECK(lr.norm() < 1e-14);
    // Left parts commute with every right generator.
    for (int i = 0; i < 3; ++i) {
      const Mat4 g = right_form(i == 0, i == 1, i == 2);
      CHECK((l.matrix() * g - g * l.matrix()).norm() < 1e-13);
    }
  }
}

TEST_CASE("So4Element antisymmetrizes on construction") {
  Mat4 m = Mat4::Random();
  const So4Element s(m);
  CHECK((s.matrix() + s.matrix().transpose()).norm() == 0.0);
  CHECK((s.matrix() - 0.5 * (m - m.transpose())).norm() < 1e-15);
}

TEST_CASE("pair_form") {
  std::mt19937_64 rng(5);
  SUBCASE("zero form") {
    const So4Element omega(random_antisymmetric(rng));
    CHECK(pair_form(omega, zero_gauge_form(2)).norm() == 0.0);
  }
  SUBCASE("bilinear sum with the pairing constant") {
    const So4Element omega(random_antisymmetric(rng));
    const GaugeTwoForm l = random_gauge_form(rng);
    GaugeMatrix expected = zero_gauge(2);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) expected += omega(a, b) * l(a, b);
    CHECK((pair_form(omega, l, -0.5) + 0.5 * expected).norm() < 1e-14);
  }
  SUBCASE("cross-annihilation between factor and opposite sector") {
    // Left generators pair to zero with e01 - e23 type forms and right
    // generators with e01 + e23 type forms.
    for (int g = 0; g < 3; ++g)
      for (int s = 0; s < 3; ++s) {
        const double left_asd =
            pair_form(So4Element::generator(Isoclinic::kLeft, g), sector_form(s, -1.0));
        const double right_sd =
            pair_form(So4Element::generator(Isoclinic::kRight, g), sector_form(s, 1.0));
        CHECK(std::abs(left_asd) <= 1e-10 * 2.0 * std::sqrt(2.0));
        CHECK(std::abs(right_sd) <= 1e-10 * 2.0 * std::sqrt(2.0));
      }
    for (int trial = 0; trial < 20; ++trial) {
      const So4Element omega = so4_project(So4Element(random_antisymmetric(rng))).first;
      const auto [lp, lm] = sd_split(Metric::flat(), Vec4::Zero(), random_gauge_form(rng));
      CHECK(pair_form(omega, lm).norm() <= 1e-10 * omega.norm() * lm.norm());
    }
  }
  SUBCASE("decomposition into matching sectors") {
    for (int trial = 0; trial < 20; ++trial) {
      const So4Element omega(random_antisymmetric(rng));
      const GaugeTwoForm l = random_gauge_form(rng);
      const auto [op, om] = so4_project(omega);
      const auto [lp, lm] = sd_split(Metric::flat(), Vec4::Zero(), l);
      const GaugeMatrix split = pair_form(op, lp, -1.0) + pair_form(om, lm, -1.0);
      CHECK((pair_form(omega, l, -1.0) - split).norm() <= 1e-10);
    }
  }
}

TEST_CASE("commutator") {
  const cd i(0.0, 1.0);
  CMat s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -i, i, 0;
  s3 << 1, 0, 0, -1;
  CHECK((commutator(i * s1, i * s2) + 2.0 * i * s3).norm() < 1e-15);
  const GaugeMatrix x = su2_generator(1);
  CHECK(commutator(x, x).norm() == 0.0);
  CHECK(commutator(x, zero_gauge(2)).norm() == 0.0);
  CHECK(anti_hermitian_defect(commutator(su2_generator(0), su2_generator(2))) < 1e-15);
  CHECK_THROWS_AS(commutator(zero_gauge(2), zero_gauge(3)), DomainError);
}

TEST_CASE("su2 generators are traceless anti-Hermitian with the structure constants") {
  for (int a = 0; a < 3; ++a) {
    CHECK(anti_hermitian_defect(su2_generator(a)) < 1e-15);
    CHECK(std::abs(su2_generator(a).trace()) < 1e-15);
  }
  CHECK((commutator(su2_generator(0), su2_generator(1)) - su2_generator(2)).norm() < 1e-15);
}
