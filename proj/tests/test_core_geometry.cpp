#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pothenot/core_geometry.hpp"
#include "support.hpp"

using namespace pothenot;
using testing::kSqrt2;
using testing::kSqrt3;

namespace {

const double kPi = std::numbers::pi;

// Printed closed forms of the forward map in the chart A = (1, 0),
// B = ((u²-1)/(u²+1), 2u/(u²+1)), C likewise with v.
struct PrintedMap {
  double u, v;

  static PrintedMap of(const Triangle& T) {
    auto cot_half = [](const PlanarPoint& P) { return 1 / std::tan(std::atan2(P.y(), P.x()) / 2); };
    return {cot_half(T.vertex(1)), cot_half(T.vertex(2))};
  }

  double W1(double x, double y) const { return W3(x, y) * u * u - 4 * u * y + x * x + y * y + 2 * x + 1; }
  double W2(double x, double y) const { return W3(x, y) * v * v - 4 * v * y + x * x + y * y + 2 * x + 1; }
  double W3(double x, double y) const { return x * x + y * y - 2 * x + 1; }

  CosTriple h(double x, double y) const {
    const double w1 = W1(x, y), w2 = W2(x, y), w3 = W3(x, y);
    const double uu = u * u + 1, vv = v * v + 1;
    const double h1 = ((w2 + 2 * v * y - 2 * x) * u * u + 2 * (2 * v - y - v * v * y) * u + w2 +
                       2 * (x * v * v + v * y - u * u - v * v)) /
                      std::sqrt(w1 * w2 * uu * vv);
    const double h2 = (w3 * v * v - 2 * v * y + x * x + y * y - 1) / std::sqrt(w2 * w3 * vv);
    const double h3 = (w3 * u * u - 2 * u * y + x * x + y * y - 1) / std::sqrt(w1 * w3 * uu);
    return {h1, h2, h3};
  }

  // Minors (h1,h2), (h1,h3), (h2,h3). The last uses W3² where the printed
  // form has W3^{3/2}.
  Eigen::Vector3d minors(double x, double y) const {
    const double w1 = W1(x, y), w2 = W2(x, y), w3 = W3(x, y);
    const double uu = u * u + 1, vv = v * v + 1;
    const double r = x * x + y * y - 1;
    const double p = v * x - v + y, q = u * x - u + y;
    const double m = u * v * x - u * v + u * y + v * y - x - 1;
    const double d = u - v;
    return {16 * r * p * m * d * d / (std::pow(w1, 1.5) * w2 * w2 * std::pow(w3, 1.5) * std::sqrt(uu) * vv),
            16 * r * m * d * d * q / (w1 * w1 * std::pow(w2, 1.5) * std::pow(w3, 1.5) * uu * std::sqrt(vv)),
            16 * r * p * q * d / (std::pow(w1, 1.5) * std::pow(w2, 1.5) * w3 * w3 * std::sqrt(uu) * std::sqrt(vv))};
  }
};

PlanarPoint random_point(std::mt19937_64& rng, const Triangle& T, double extent) {
  std::uniform_real_distribution<double> u(-extent, extent);
  for (;;) {
    const PlanarPoint D(u(rng) * T.circumradius(), u(rng) * T.circumradius());
    bool clear = true;
    for (int i = 0; i < 3; ++i) clear = clear && (D - T.vertex(i)).norm() > 1e-6 * T.circumradius();
    if (clear) return D;
  }
}

}  // namespace

TEST_CASE("pillow_value at cube points") {
  CHECK(pillow_value(CosTriple(1, 1, 1)) == 0.0);
  CHECK(pillow_value(CosTriple(0, 0, 0)) == 1.0);
  const double r = std::sqrt(85.0) / 10;
  CHECK(std::abs(pillow_value(CosTriple(0.7, r, r))) < 1e-15);
  for (const CosTriple& v : pillow_vertices()) CHECK(std::abs(pillow_value(v)) == 0.0);
}

TEST_CASE("triangle_from_sides cosines and placement") {
  const Triangle E = testing::equilateral();
  CHECK(testing::max_abs_diff(E.cosines(), Eigen::Vector3d(0.5, 0.5, 0.5)) < 1e-15);
  CHECK(E.shape() == BaseShape::Acute);

  // Reference angles measured in an independent construction.
  auto measured = [](const Eigen::Vector3d& d) {
    const auto c = testing::construct_observer(d, d);
    return Eigen::Vector3d(std::cos(testing::angle_between(c.B - c.A, c.C - c.A)),
                           std::cos(testing::angle_between(c.A - c.B, c.C - c.B)),
                           std::cos(testing::angle_between(c.A - c.C, c.B - c.C)));
  };
  const Eigen::Vector3d right_sides(2, kSqrt2, kSqrt2), obtuse_sides(kSqrt3, 1, 1);
  REQUIRE(testing::max_abs_diff(measured(right_sides), Eigen::Vector3d(0, kSqrt2 / 2, kSqrt2 / 2)) < 1e-12);
  REQUIRE(testing::max_abs_diff(measured(obtuse_sides), Eigen::Vector3d(-0.5, kSqrt3 / 2, kSqrt3 / 2)) < 1e-12);

  const Triangle R = testing::right_base();
  CHECK(testing::max_abs_diff(R.cosines(), Eigen::Vector3d(0, kSqrt2 / 2, kSqrt2 / 2)) < 1e-15);
  CHECK(R.shape() == BaseShape::Right);
  const Triangle O = testing::obtuse_base();
  CHECK(testing::max_abs_diff(O.cosines(), Eigen::Vector3d(-0.5, kSqrt3 / 2, kSqrt3 / 2)) < 1e-15);
  CHECK(O.shape() == BaseShape::Obtuse);
  CHECK(O.largest_angle() == 0);

  for (const Triangle& T : {E, R, O}) {
    CHECK((T.vertex(0) - PlanarPoint(T.circumradius(), 0)).norm() < 1e-15);
    CHECK(T.vertex(1).y() > 0);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(T.vertex(i).norm() - T.circumradius()) < 1e-12);
    CHECK(std::abs((T.vertex(1) - T.vertex(2)).norm() - T.sides()(0)) < 1e-12);
    CHECK(std::abs((T.vertex(0) - T.vertex(2)).norm() - T.sides()(1)) < 1e-12);
    CHECK(std::abs((T.vertex(0) - T.vertex(1)).norm() - T.sides()(2)) < 1e-12);
  }
}

TEST_CASE("triangle_from_sides rejects degenerate bases") {
  CHECK_THROWS_AS(Triangle::from_sides(1, 1, 2), Error);
  CHECK_THROWS_AS(Triangle::from_sides(0, 1, 1), Error);
  CHECK_THROWS_AS(Triangle::from_sides(-1, 1, 1), Error);
  CHECK_THROWS_AS(Triangle::from_sides(1, 5, 1), Error);
  try {
    Triangle::from_sides(1, 2, 3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateBase);
  }
}

TEST_CASE("right angle within round-off is snapped") {
  const Triangle T = Triangle::from_sides(5, 3, 4);
  CHECK(T.shape() == BaseShape::Right);
  CHECK(T.cosines()(0) == 0.0);
}

TEST_CASE("forward_map on the equilateral base") {
  const Triangle E = testing::equilateral();
  CHECK(testing::max_abs_diff(forward_map(E, PlanarPoint(0, 0)), CosTriple(-0.5, -0.5, -0.5)) < 1e-15);

  // Reflection of A across BC, first in a hand-made frame with BC horizontal.
  const Eigen::Vector2d hA(0, kSqrt3 / 2), hB(-0.5, 0), hC(0.5, 0), hD(0, -kSqrt3 / 2);
  const CosTriple reference = testing::cosines_at(hD, hA, hB, hC);
  const CosTriple expected(0.5, kSqrt3 / 2, kSqrt3 / 2);
  REQUIRE(testing::max_abs_diff(reference, expected) < 1e-15);

  const PlanarPoint mid = (E.vertex(1) + E.vertex(2)) / 2;
  const PlanarPoint reflected = 2 * mid - E.vertex(0);
  CHECK(testing::max_abs_diff(forward_map(E, reflected), expected) < 1e-14);

  const PlanarPoint far = 1e6 * E.circumradius() * PlanarPoint(std::cos(0.3), std::sin(0.3));
  CHECK(testing::max_abs_diff(forward_map(E, far), CosTriple(1, 1, 1)) < 1e-5);
}

TEST_CASE("forward_map rejects observers on a vertex") {
  const Triangle E = testing::equilateral();
  try {
    forward_map(E, PlanarPoint(E.vertex(1) + PlanarPoint(1e-12, 0)));
    FAIL("expected VertexCollision");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::VertexCollision);
  }
  CHECK_NOTHROW(forward_map(E, PlanarPoint(E.vertex(1) + PlanarPoint(1e-6, 0))));
}

TEST_CASE("euler_volume_squared") {
  CHECK(euler_volume_squared(1.0, 1.0, 1.0, CosTriple(0, 0, 0)) == doctest::Approx(1.0 / 36));
  CHECK(euler_volume_squared(1.0, 1.0, 1.0, CosTriple(0.5, 0.5, 0.5)) == doctest::Approx(1.0 / 72));
  CHECK(euler_volume_squared(2.0, 3.0, 5.0, CosTriple(1, 1, 1)) == 0.0);
}

TEST_CASE("special points") {
  const Triangle R = testing::right_base();
  const SpecialPoints sp = special_points(R);
  const CosTriple tA(0, kSqrt2 / 2, kSqrt2 / 2);
  CHECK(testing::max_abs_diff(sp.tilde[0], tA) < 1e-15);
  CHECK(testing::max_abs_diff(sp.hat[1], tA) < 1e-12);
  CHECK(testing::max_abs_diff(sp.hat[2], tA) < 1e-12);

  const SpecialPoints se = special_points(testing::equilateral());
  CHECK(testing::max_abs_diff(se.hat[0], CosTriple(1, 0.5, 0.5)) < 1e-15);
  CHECK(testing::max_abs_diff(se.orthocenter, CosTriple(-0.5, -0.5, -0.5)) < 1e-15);

  std::mt19937_64 rng(11);
  for (int n = 0; n < 200; ++n) {
    const Eigen::Vector3d d = testing::random_sides(rng);
    const Triangle T = Triangle::from_sides(d(0), d(1), d(2));
    const SpecialPoints s = special_points(T);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(pillow_value(s.tilde[i])) < 1e-12);
      CHECK(std::abs(pillow_value(s.hat[i])) < 1e-12);
    }
    CHECK(std::abs(pillow_value(s.orthocenter)) < 1e-12);
  }
}

TEST_CASE("limit set membership") {
  const Triangle E = testing::equilateral();
  CHECK(limit_set_membership(E, CosTriple(0.5, 0.5, 0.5), Vertex::A));
  CHECK_FALSE(limit_set_membership(E, CosTriple(1, 0.5, 0.5), Vertex::A));
  CHECK(limit_set_membership(E, CosTriple(0.5, 1, 0.5), Vertex::A));
  CHECK_FALSE(limit_set_membership(E, CosTriple(0.5, 1, -0.9), Vertex::A));

  const Triangle R = testing::right_base();
  const CosTriple tA(0, kSqrt2 / 2, kSqrt2 / 2);
  const double lhs = tA(1) * tA(1) + tA(2) * tA(2) - 2 * R.cosines()(0) * tA(1) * tA(2);
  CHECK(std::abs(lhs - (1 - R.cosines()(0) * R.cosines()(0))) < 1e-15);
  CHECK(limit_set_membership(R, tA, Vertex::A));

  // Images of observers closing in on B accumulate inside Lim(B).
  const Triangle T = Triangle::from_sides(1.2, 1.0, 0.9);
  for (double phi = 0.1; phi < 6.2; phi += 0.7) {
    const PlanarPoint D = T.vertex(1) + 1e-9 * PlanarPoint(std::cos(phi), std::sin(phi));
    const CosTriple c = angle_cosines<double>(T.vertex(0) - D, T.vertex(1) - D, T.vertex(2) - D);
    CHECK(limit_set_membership(T, c, Vertex::B, Tolerances{.eps_plane = 1e-7}));
  }
}

TEST_CASE("printed chart formulas agree with the dot-product map") {
  std::mt19937_64 rng(5);
  double worst = 0;
  std::uniform_real_distribution<double> unit(0, 1);
  for (int n = 0; n < 50; ++n) {
    const double alpha = 0.2 + 2.5 * unit(rng);
    const Triangle T = Triangle::from_angles(alpha, 0.1 + (kPi - alpha - 0.2) * unit(rng));
    const PrintedMap pm = PrintedMap::of(T);
    for (int k = 0; k < 20; ++k) {
      const PlanarPoint D = random_point(rng, T, 3);
      worst = std::max(worst, testing::max_abs_diff(pm.h(D.x(), D.y()), forward_map(T, D)));
    }
  }
  INFO("largest h1..h3 deviation " << worst);
  CHECK(worst < 1e-8);
}

TEST_CASE("Jacobian minors match the closed forms") {
  std::mt19937_64 rng(6);
  for (int n = 0; n < 30; ++n) {
    const double alpha = 0.3 + 1.2 * std::uniform_real_distribution<double>(0, 1)(rng);
    const double beta = 0.3 + (kPi - alpha - 0.6) * std::uniform_real_distribution<double>(0, 1)(rng);
    const Triangle T = Triangle::from_angles(alpha, beta);
    const PrintedMap pm = PrintedMap::of(T);
    for (int k = 0; k < 10; ++k) {
      const PlanarPoint D = random_point(rng, T, 2.5);
      const Eigen::Vector3d analytic = jacobian_minors<double>(forward_jacobian(T, D));
      const Eigen::Vector3d closed = pm.minors(D.x(), D.y());
      const double scale = std::max(1.0, closed.cwiseAbs().maxCoeff());
      CHECK((analytic - closed).cwiseAbs().maxCoeff() <= 1e-8 * scale);
      const Eigen::Vector3d fd = jacobian_minors<double>(forward_jacobian_fd(T, D));
      CHECK((analytic - fd).cwiseAbs().maxCoeff() <= 1e-5 * scale);
    }
  }
}

TEST_CASE("property: forward map lands on the pillowcase") {
  std::mt19937_64 rng(7);
  for (const Triangle& T : {testing::equilateral(), testing::right_base(), testing::obtuse_base()}) {
    double worst = 0;
    for (int n = 0; n < 10000; ++n) {
      const PlanarPoint D = random_point(rng, T, 4);
      worst = std::max(worst, std::abs(pillow_value(forward_map(T, D))));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("property: minors vanish exactly on the circumcircle") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> phi(-kPi, kPi);
  const Triangle T = Triangle::from_sides(1.3, 1.0, 0.8);
  const double R = T.circumradius();
  int checked = 0;
  for (int n = 0; n < 500; ++n) {
    const double t = phi(rng);
    const PlanarPoint P = R * PlanarPoint(std::cos(t), std::sin(t));
    bool clear = true;
    for (int i = 0; i < 3; ++i) clear = clear && (P - T.vertex(i)).norm() > 0.05 * R;
    if (!clear) continue;
    ++checked;
    CHECK(jacobian_minors<double>(forward_jacobian_fd(T, P)).cwiseAbs().maxCoeff() <= 1e-6);
    const double scale = 1 + std::uniform_real_distribution<double>(0.05, 2)(rng);
    const PlanarPoint Q = (rng() % 2 ? scale : 1 / scale) * P;
    CHECK(jacobian_minors<double>(forward_jacobian(T, Q)).cwiseAbs().maxCoeff() > 1e-8);
  }
  CHECK(checked > 300);
}

TEST_CASE("property: observers on the arc opposite a vertex see its tilde point") {
  for (const Triangle& T : {testing::equilateral(), testing::right_base(), testing::obtuse_base(),
                            Triangle::from_sides(1.3, 1.0, 0.8)}) {
    const SpecialPoints sp = special_points(T);
    for (int v = 0; v < 3; ++v) {
      const PlanarPoint P = T.vertex((v + 1) % 3), Q = T.vertex((v + 2) % 3);
      const double tp = std::atan2(P.y(), P.x()), tq = std::atan2(Q.y(), Q.x());
      const double tv = std::atan2(T.vertex(v).y(), T.vertex(v).x());
      // Sweep the arc from P to Q that avoids vertex v.
      double span = std::remainder(tq - tp, 2 * kPi);
      const double to_v = std::remainder(tv - tp, 2 * kPi);
      if ((to_v > 0) == (span > 0) && std::abs(to_v) < std::abs(span)) span -= std::copysign(2 * kPi, span);
      for (int k = 1; k < 20; ++k) {
        const double t = tp + span * k / 20.0;
        const PlanarPoint D = T.circumradius() * PlanarPoint(std::cos(t), std::sin(t));
        CHECK(testing::max_abs_diff(forward_map(T, D), sp.tilde[v]) < 1e-10);
      }
    }
  }
}

TEST_CASE("property: base identities") {
  std::mt19937_64 rng(9);
  for (int n = 0; n < 10000; ++n) {
    const Eigen::Vector3d d = testing::random_sides(rng, 1e-3);
    const Triangle T = Triangle::from_sides(d(0), d(1), d(2));
    const Eigen::Vector3d c = T.cosines();
    CHECK(std::abs(pillow_value(c) - 4 * c(0) * c(1) * c(2)) < 1e-12);
    CHECK(std::abs(std::acos(c(0)) + std::acos(c(1)) + std::acos(c(2)) - kPi) < 1e-12);
    CHECK(std::abs(T.angles().sum() - kPi) < 1e-12);
  }
}

TEST_CASE("project_to_surface") {
  const CosTriple p = project_to_surface(CosTriple(0.7, 0.93, 0.91));
  CHECK(std::abs(pillow_value(p)) < 1e-14);
  CHECK(testing::max_abs_diff(project_to_surface(CosTriple(0, 0, 0)), CosTriple(0, 0, 0)) == 0.0);
}
