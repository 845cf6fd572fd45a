#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "levylap/geometry.hpp"

using namespace levylap;

namespace {

RealTwoForm basis_form(int a, int b) {
  RealTwoForm f(0.0);
  f.set(a, b, 1.0);
  return f;
}

RealTwoForm random_form(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealTwoForm f(0.0);
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) f.set(a, b, u(rng));
  return f;
}

// Gamma^k_ij = 1/2 g^kl (d_i g_lj + d_j g_li - d_l g_ij), with dg from
// central differences of the metric itself.
Christoffel christoffel_fd(const Metric& m, const Vec4& x, double h = 1e-5) {
  std::array<Mat4, 4> dg;
  for (int i = 0; i < 4; ++i) {
    Vec4 e = Vec4::Zero();
    e[i] = h;
    dg[i] = (m.g(x + e) - m.g(x - e)) / (2 * h);
  }
  const Mat4 gi = m.g_inv(x);
  Christoffel out;
  for (int k = 0; k < 4; ++k) {
    out[k].setZero();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int l = 0; l < 4; ++l)
          out[k](i, j) += 0.5 * gi(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
  }
  return out;
}

}  // namespace

TEST_CASE("christoffel") {
  const Vec4 x(0.3, -0.7, 1.1, 0.2);
  for (const Mat4& g : christoffel(Metric::flat(), x)) CHECK(g.norm() == 0.0);
  for (const Metric& m : {Metric::conformal_linear(0.1, 0), Metric::conformal_linear(0.3, 2),
                          Metric::conformal_bump(0.2, Vec4(0.1, 0.2, 0.0, -0.3), 1.5)}) {
    const Christoffel a = christoffel(m, x), b = christoffel_fd(m, x);
    for (int k = 0; k < 4; ++k) CHECK((a[k] - b[k]).norm() < 1e-8);
  }
}

TEST_CASE("exp_point") {
  const Vec4 x(0.5, 0.1, -0.2, 0.3), v(0.2, -0.1, 0.4, 0.05);
  CHECK((exp_point(Metric::flat(), x, v) - (x + v)).norm() < 1e-15);
  const Metric m = Metric::conformal_linear(0.1);
  CHECK((exp_point(m, x, Vec4::Zero()) - x).norm() == 0.0);
  // Self-convergence against a run with the step halved four times.
  const Vec4 ref = exp_point(m, x, v, 16 * kDefaultOdeSteps);
  CHECK((exp_point(m, x, v) - ref).norm() < 1e-10);
  // The endpoint moves off the straight line on a curved metric.
  CHECK((ref - (x + v)).norm() > 1e-4);
}

TEST_CASE("geodesic energy is conserved") {
  const Metric m = Metric::conformal_linear(0.1);
  const auto e = geodesic_energy_profile(m, Vec4(0.5, 0.1, -0.2, 0.3), Vec4(0.8, -0.4, 0.3, 0.1));
  REQUIRE(!e.empty());
  for (double v : e) CHECK(std::abs(v - e.front()) < 1e-8);
}

TEST_CASE("Levi-Civita frame transport") {
  const Curve c = Curve::trigonometric("c", Vec4(0.1, 0.2, -0.1, 0.0), Vec4(0.5, 0.4, 0.3, 0.6),
                                       Vec4(1, 2, 1, 2), Vec4(0.3, 1.1, 2.0, 0.7));
  SUBCASE("flat metric gives the identity") {
    const LcTransport q(Metric::flat(), c);
    for (double t : {0.0, 0.3, 0.77, 1.0}) CHECK((q.at(t) - Mat4::Identity()).norm() == 0.0);
  }
  SUBCASE("constant curve gives the identity") {
    const LcTransport q(Metric::conformal_linear(0.1), Curve::constant("p", Vec4(1, 0, 0, 0)));
    for (double t : {0.0, 0.5, 1.0}) CHECK((q.at(t) - Mat4::Identity()).norm() < 1e-15);
  }
  SUBCASE("frames stay g-orthonormal on a conformal metric") {
    const Metric m = Metric::conformal_linear(0.1);
    const LcTransport q(m, c);
    for (int i = 0; i <= 20; ++i) {
      const double t = (i + 0.37) / 21.0;
      const Mat4 z = q.frame(t);
      CHECK((z.transpose() * m.g(c.position(t)) * z - Mat4::Identity()).norm() < 1e-8);
    }
  }
  SUBCASE("derivative matches the transport equation") {
    const Metric m = Metric::conformal_linear(0.1);
    const LcTransport q(m, c);
    const double t = 0.42, h = 1e-5;
    const Mat4 fd = (q.at(t + h) - q.at(t - h)) / (2 * h);
    CHECK((fd - q.derivative(t)).norm() < 1e-6);
  }
}

TEST_CASE("hodge_star2") {
  const Metric flat = Metric::flat();
  const Vec4 x = Vec4::Zero();
  SUBCASE("e01 maps to e23") {
    const RealTwoForm s = hodge_star2(flat, x, basis_form(0, 1));
    CHECK((s - basis_form(2, 3)).norm() == 0.0);
  }
  SUBCASE("epsilon contraction oracle for every basis form") {
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        const RealTwoForm s = hodge_star2(flat, x, basis_form(a, b));
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) {
            // (*e^ab)_cd = eps_abcd for a < b.
            CHECK(s(c, d) == doctest::Approx(double(levi_civita(a, b, c, d))));
          }
      }
  }
  SUBCASE("self-dual form is fixed") {
    const RealTwoForm f = basis_form(0, 1) + basis_form(2, 3);
    CHECK((hodge_star2(flat, x, f) - f).norm() < 1e-15);
  }
  SUBCASE("star squares to one and is conformally invariant on 2-forms") {
    std::mt19937_64 rng(3);
    const Metric m = Metric::conformal_linear(0.4, 1);
    const Vec4 p(0.3, 1.2, -0.5, 0.8);
    for (int i = 0; i < 10; ++i) {
      const RealTwoForm f = random_form(rng);
      CHECK((hodge_star2(m, p, hodge_star2(m, p, f)) - f).norm() < 1e-13);
      CHECK((hodge_star2(m, p, f) - hodge_star2(flat, p, f)).norm() < 1e-13);
    }
  }
}

TEST_CASE("sd_split") {
  const Metric m = Metric::conformal_bump(0.3, Vec4(0.2, 0, 0, 0), 1.0);
  const Vec4 p(0.1, 0.4, -0.3, 0.2);
  const RealTwoForm sd = basis_form(0, 2) - basis_form(1, 3);
  auto [a, b] = sd_split(m, p, sd);
  CHECK((a - sd).norm() < 1e-15);
  CHECK(b.norm() < 1e-15);
  auto [z1, z2] = sd_split(m, p, RealTwoForm(0.0));
  CHECK(z1.norm() == 0.0);
  CHECK(z2.norm() == 0.0);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const RealTwoForm f = random_form(rng);
    auto [lp, lm] = sd_split(m, p, f);
    CHECK((lp + lm - f).norm() < 1e-15);
    const double defect =
        (hodge_star2(m, p, lp) - lp).norm() + (hodge_star2(m, p, lm) + lm).norm();
    CHECK(defect <= 1e-10 * f.norm());
  }
}

TEST_CASE("levi_civita") {
  CHECK(levi_civita(0, 1, 2, 3) == 1);
  CHECK(levi_civita(1, 0, 2, 3) == -1);
  CHECK(levi_civita(1, 2, 3, 0) == -1);
  CHECK(levi_civita(0, 0, 2, 3) == 0);
}
