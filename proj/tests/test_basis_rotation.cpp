#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "levylap/basis.hpp"
#include "levylap/errors.hpp"
#include "levylap/rotation.hpp"

using namespace levylap;

namespace {

double sin2pi(double t) { return std::sin(2.0 * std::numbers::pi * t); }

}  // namespace

TEST_CASE("sine basis") {
  const BasisFamily b = BasisFamily::sine();
  for (int k = 1; k <= 64; ++k) {
    CHECK(b.value(k, 0.0) == 0.0);
    CHECK(std::abs(b.value(k, 1.0)) < 1e-13);
    CHECK(b.eigenvalue(k) == doctest::Approx(k * k * std::numbers::pi * std::numbers::pi));
  }
  CHECK(b.value(3, 0.25) == doctest::Approx(std::sqrt(2.0) * std::sin(0.75 * std::numbers::pi)));
  const Eigen::MatrixXd g = gram_matrix(b, 32);
  CHECK((g - Eigen::MatrixXd::Identity(32, 32)).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("Sturm-Liouville basis") {
  const BasisFamily b = BasisFamily::sturm_liouville(sin2pi, "sin2pi", 64);
  CHECK(b.kind() == BasisKind::kSturmLiouville);
  CHECK(b.max_modes() >= 64);
  for (int k = 1; k <= 32; ++k) {
    CHECK(std::abs(b.value(k, 0.0)) <= 1e-8);
    CHECK(std::abs(b.value(k, 1.0)) <= 1e-8);
    CHECK(b.derivative(k, 0.0) > 0.0);
  }
  // Eigenvalues sit near k^2 pi^2 shifted by the mean of r (zero here).
  for (int k = 1; k <= 8; ++k)
    CHECK(b.eigenvalue(k) / (k * k * std::numbers::pi * std::numbers::pi) ==
          doctest::Approx(1.0).epsilon(0.02));
  const Eigen::MatrixXd g = gram_matrix(b, 32);
  CHECK((g - Eigen::MatrixXd::Identity(32, 32)).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK_THROWS_AS(b.value(0, 0.5), DomainError);
}

TEST_CASE("Sturm-Liouville with zero potential reproduces the sine basis") {
  const BasisFamily b = BasisFamily::sturm_liouville([](double) { return 0.0; }, "zero", 16);
  const BasisFamily s = BasisFamily::sine();
  for (int k = 1; k <= 8; ++k)
    for (double t : {0.1, 0.37, 0.5, 0.81}) CHECK(b.value(k, t) == doctest::Approx(s.value(k, t)).epsilon(1e-4));
}

TEST_CASE("equidensity residual") {
  const BasisFamily sine = BasisFamily::sine();
  const std::vector<int> ns{8, 16, 32, 64, 128};
  SUBCASE("constant and zero weights") {
    for (int n : ns) {
      CHECK(std::abs(equidensity_residual(sine, [](double) { return 1.0; }, n)) <= 1e-14);
      CHECK(equidensity_residual(sine, [](double) { return 0.0; }, n) == 0.0);
    }
  }
  SUBCASE("decay under doubling") {
    const std::vector<std::function<double(double)>> weights{
        [](double t) { return t; }, [](double t) { return t * t; },
        [](double t) { return t >= 1.0 / 3.0 ? 1.0 : 0.0; }};
    for (const auto& h : weights)
      for (std::size_t i = 0; i + 1 < ns.size() - 1; ++i) {
        const double a = equidensity_residual(sine, h, ns[i]);
        const double b = equidensity_residual(sine, h, ns[i + 1]);
        // h = t integrates exactly to zero against every cos(2 pi k t).
        if (std::abs(a) <= 1e-14 && std::abs(b) <= 1e-14) continue;
        CHECK(std::abs(b) <= 0.6 * std::abs(a));
      }
  }
  SUBCASE("Sturm-Liouville basis") {
    const BasisFamily sl = BasisFamily::sturm_liouville(sin2pi, "sin2pi", 128);
    const auto h = [](double t) { return t * t; };
    for (std::size_t i = 0; i + 1 < ns.size() - 1; ++i)
      CHECK(std::abs(equidensity_residual(sl, h, ns[i + 1])) <=
            0.6 * std::abs(equidensity_residual(sl, h, ns[i])));
  }
}

TEST_CASE("rotation curves") {
  const std::vector<Profile> two{Profile::parse("t"), Profile::parse("t2")};
  for (Isoclinic f : {Isoclinic::kLeft, Isoclinic::kRight}) {
    const RotationCurve w = RotationCurve::make(f, two, 2);
    // W^-1 W' = t2' G_2 + t' exp(-t2 G_2) G_1 exp(t2 G_2); the conjugation
    // mixes G_3 into the first term, so the sampled span is the whole factor.
    CHECK(w.span() >= 2);
    CHECK(w.span() == 3);
    for (double t : {0.0, 0.2, 0.55, 1.0}) {
      const Mat4 m = w.value(t);
      CHECK((m.transpose() * m - Mat4::Identity()).norm() <= 1e-10);
      CHECK(m.determinant() == doctest::Approx(1.0).epsilon(1e-10));
      // Only the tagged factor appears in either logarithmic derivative.
      const So4Element l = w.left_log_derivative(t), r = w.right_log_derivative(t);
      const So4Element l_wrong = f == Isoclinic::kLeft ? l.right_part() : l.left_part();
      const So4Element r_wrong = f == Isoclinic::kLeft ? r.right_part() : r.left_part();
      CHECK(l_wrong.norm() <= 1e-10);
      CHECK(r_wrong.norm() <= 1e-10);
      // W' against central differences of W.
      const double h = 1e-6, s = std::clamp(t, h, 1.0 - h);
      CHECK((w.derivative(s) - (w.value(s + h) - w.value(s - h)) / (2 * h)).norm() < 1e-8);
      CHECK((w.value(t) * l.matrix() - w.derivative(t)).norm() < 1e-12);
      CHECK((r.matrix() * w.value(t) - w.derivative(t)).norm() < 1e-12);
    }
  }
  CHECK(RotationCurve::identity().span() == 0);
  CHECK(RotationCurve::make(Isoclinic::kLeft, {Profile::constant_value(0.4)}).span() == 0);
  CHECK(RotationCurve::make(Isoclinic::kLeft, {Profile::parse("t")}).span() == 1);
  CHECK_THROWS_AS(RotationCurve::make(Isoclinic::kLeft, {Profile::parse("t")}, 2), DomainError);
  CHECK(RotationCurve::parse("mixed:t,t2").factor() == RotationFactor::kMixed);
  CHECK(RotationCurve::parse("right:t,sin2").factor() == RotationFactor::kRight);
  CHECK_THROWS_AS(Profile::parse("tan"), DomainError);
  CHECK(mirrored(RotationCurve::parse("left:t,t2")).factor() == RotationFactor::kRight);
}
