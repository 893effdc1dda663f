#include <doctest.h>

#include <cmath>
#include <random>

#include "pothenot/classifier.hpp"
#include "pothenot/grunert.hpp"
#include "pothenot/oracle.hpp"
#include "support.hpp"

using namespace pothenot;
using testing::kSqrt2;
using testing::kSqrt3;

namespace {

RegionLabel octant(int i, int j, int k, Component c = Component::Whole) {
  RegionLabel l;
  l.kind = RegionKind::SurfaceOctant;
  l.signs = {i, j, k};
  l.component = c;
  return l;
}

int predicted(const Triangle& T, const RegionLabel& l) {
  const CountPrediction p = count_prediction(T, l);
  REQUIRE(p.kind == CountKind::Finite);
  return p.count;
}

// Point of E_v parametrized by sigma: a_v = cos(angle v), a_j = cos(sigma),
// a_k = cos(angle v - sigma).
CosTriple ellipse_point(const Triangle& T, int v, double sigma) {
  CosTriple a;
  a(v) = T.cosines()(v);
  a((v + 1) % 3) = std::cos(sigma);
  a((v + 2) % 3) = std::cos(T.angles()(v) - sigma);
  return a;
}

bool near_special(const Triangle& T, const CosTriple& a, double r) {
  const SpecialPoints sp = special_points(T);
  for (int i = 0; i < 3; ++i)
    if (testing::max_abs_diff(a, sp.tilde[i]) < r || testing::max_abs_diff(a, sp.hat[i]) < r) return true;
  if (testing::max_abs_diff(a, sp.orthocenter) < r) return true;
  for (const CosTriple& v : pillow_vertices())
    if (testing::max_abs_diff(a, v) < r) return true;
  return false;
}

}  // namespace

TEST_CASE("classify worked points") {
  const RegionLabel e = classify(testing::equilateral(), {0.7, std::sqrt(0.85), std::sqrt(0.85)});
  CHECK(e.kind == RegionKind::SurfaceOctant);
  CHECK(e.signs == std::array<int, 3>{1, 1, 1});
  CHECK(e.component == Component::Whole);
  CHECK(e.key() == "+++");

  const RegionLabel o = classify(testing::obtuse_base(), {0, kSqrt2 / 2, kSqrt2 / 2});
  CHECK(o.kind == RegionKind::SurfaceOctant);
  CHECK(o.signs == std::array<int, 3>{1, -1, -1});
  CHECK(o.component == Component::Near);
  CHECK(o.key() == "+--near");
  CHECK(o.to_string() == "(+,-,-) near");

  const RegionLabel t = classify(testing::right_base(), {0, kSqrt2 / 2, kSqrt2 / 2});
  CHECK(t.kind == RegionKind::SpecialPoint);
  CHECK(t.special == SpecialId::TildeA);
}

TEST_CASE("classify precedence and off-surface labels") {
  const Triangle E = testing::equilateral();
  CHECK(classify(E, {0, 0, 0}).kind == RegionKind::InteriorPillow);
  CHECK(classify(E, {0.9, -0.9, 0.9}).kind == RegionKind::OffPillow);
  CHECK(classify(E, {1.5, 0, 0}).kind == RegionKind::OffPillow);
  CHECK(classify(E, {1, 1, 1}).kind == RegionKind::PillowVertex);
  CHECK(classify(E, {-0.5, -0.5, -0.5}).special == SpecialId::Orthocenter);
  const RegionLabel ob = classify(testing::obtuse_base(), -testing::obtuse_base().cosines());
  CHECK(ob.kind == RegionKind::SpecialPoint);
  CHECK(ob.special == SpecialId::Orthocenter);
  const RegionLabel tb = classify(E, {0.5, -0.5, 0.5});
  CHECK(tb.kind == RegionKind::SpecialPoint);
  CHECK(tb.special == SpecialId::TildeB);
  CHECK(count_prediction(E, tb).kind == CountKind::Infinite);
  CHECK(count_prediction(E, classify(E, {0, 0, 0})).kind == CountKind::Unsupported);
}

TEST_CASE("component_of") {
  const Triangle O = testing::obtuse_base();
  CHECK(component_of(O, {0, kSqrt2 / 2, kSqrt2 / 2}) == Component::Near);
  const CosTriple far = project_to_surface({0.999, -0.9, -0.9});
  REQUIRE(std::abs(pillow_value(far)) < 1e-14);
  CHECK(component_of(O, far) == Component::Far);
  const RegionLabel l = classify(O, far);
  CHECK(l.key() == "+--far");
  CHECK(predicted(O, l) == 0);
  CHECK(solve_on_pillowcase(O, far).count() == 0);
  CHECK(oracle_count(O, far).count == 0);
}

TEST_CASE("arc_membership on the equilateral base") {
  const Triangle E = testing::equilateral();
  CHECK(arc_membership(E, {0.5, kSqrt3 / 2, kSqrt3 / 2}, Vertex::A) == ArcFlag::OnTheta);
  CHECK(arc_membership(E, {0.5, -0.5, 0.5}, Vertex::A) == ArcFlag::OffTheta);
  CHECK(arc_membership(E, {0.5, 1, 0.5}, Vertex::A) == ArcFlag::OffTheta);
  try {
    arc_membership(E, {0.6, kSqrt3 / 2, kSqrt3 / 2}, Vertex::A);
    FAIL("expected NotOnEllipse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotOnEllipse);
  }
  // The reflection of A across BC is a one-solution observer.
  const PlanarPoint refl = E.vertex(1) + E.vertex(2) - E.vertex(0);
  CHECK(solve_on_pillowcase(E, forward_map(E, refl)).count() == 1);
}

TEST_CASE("count_prediction tables") {
  const Triangle E = testing::equilateral(), R = testing::right_base(), O = testing::obtuse_base();
  CHECK(predicted(E, octant(1, 1, 1)) == 2);
  for (const auto& s : {octant(1, 1, -1), octant(1, -1, 1), octant(-1, 1, 1), octant(-1, -1, -1)})
    CHECK(predicted(E, s) == 1);
  for (const auto& s : {octant(1, -1, -1), octant(-1, 1, -1), octant(-1, -1, 1)}) CHECK(predicted(E, s) == 0);

  CHECK(predicted(O, octant(1, -1, -1, Component::Near)) == 2);
  CHECK(predicted(O, octant(1, -1, -1, Component::Far)) == 0);
  for (const Triangle* T : {&R, &O}) {
    try {
      count_prediction(*T, octant(-1, 1, 1));
      FAIL("expected EmptyRegion");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyRegion);
    }
  }

  // Acute and right differ only on the empty octant; obtuse and right only
  // on the split octant.
  for (int i : {-1, 1})
    for (int j : {-1, 1})
      for (int k : {-1, 1}) {
        if (i == -1 && j == 1 && k == 1) continue;
        CHECK(predicted(E, octant(i, j, k)) == predicted(R, octant(i, j, k)));
        if (i == 1 && j == -1 && k == -1) continue;
        CHECK(predicted(O, octant(i, j, k)) == predicted(R, octant(i, j, k)));
      }

  RegionLabel ea;
  ea.kind = RegionKind::OnEllipse;
  ea.ellipse = 0;
  ea.arc = ArcFlag::OnTheta;
  CHECK(predicted(R, ea) == 0);
  CHECK(predicted(E, ea) == 1);
  ea.arc = ArcFlag::OffTheta;
  CHECK(predicted(E, ea) == 0);

  const CountPrediction p = count_prediction(E, octant(1, 1, 1));
  CHECK(p.provenance == "acute table, octant (+,+,+)");
}

TEST_CASE("largest angle away from A permutes the table") {
  // Obtuse at C: the empty octant is (+,+,-) and (-,-,+) is split.
  const Triangle T = Triangle::from_sides(1, 1, kSqrt3);
  REQUIRE(T.largest_angle() == 2);
  CHECK_THROWS_AS(count_prediction(T, octant(1, 1, -1)), Error);
  CHECK(predicted(T, octant(-1, -1, 1, Component::Near)) == 2);
  CHECK(predicted(T, octant(-1, -1, 1, Component::Far)) == 0);
  CHECK(predicted(T, octant(1, -1, -1)) == 0);
}

TEST_CASE("AmbiguousBand inside a plane band") {
  const Triangle E = testing::equilateral();
  const double alpha = E.angles()(0);
  const double theta = alpha + 5e-10 / std::sin(alpha);
  const CosTriple a(std::cos(theta), std::cos(M_PI / 6), std::cos(theta - M_PI / 6));
  try {
    classify(E, a);
    FAIL("expected AmbiguousBand");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AmbiguousBand);
  }
  // Exactly on the plane the ellipse label wins.
  CHECK(classify(E, {0.5, kSqrt3 / 2, kSqrt3 / 2}).kind == RegionKind::OnEllipse);
}

TEST_CASE("ellipse labels agree with solver and oracle") {
  OracleConfig cfg;
  cfg.grid_n = 64;
  cfg.max_starts = 128;
  for (const Triangle& T : {testing::equilateral(), testing::right_base(), testing::obtuse_base()}) {
    for (int v = 0; v < 3; ++v) {
      int on = 0, off = 0;
      for (int n = 0; n < 24; ++n) {
        const double sigma = -M_PI + (n + 0.37) * 2 * M_PI / 24;
        const CosTriple a = ellipse_point(T, v, sigma);
        if (near_special(T, a, 1e-6)) continue;
        const RegionLabel l = classify(T, a);
        REQUIRE(l.kind == RegionKind::OnEllipse);
        CHECK(l.ellipse == v);
        const int want = predicted(T, l);
        (want ? on : off)++;
        INFO("vertex " << v << " sigma " << sigma);
        CHECK(solve_on_pillowcase(T, a).count() == static_cast<std::size_t>(want));
        CHECK(oracle_count(T, a, cfg).count == want);
      }
      if (T.shape() == BaseShape::Right && v == 0) CHECK(on == 0);
      else CHECK(on > 0);
      CHECK(off > 0);
    }
  }
}

TEST_CASE("property: relabelling the base permutes the label") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  const std::array<std::array<int, 3>, 5> perms{{{1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}}};
  int compared = 0;
  for (int n = 0; n < 300; ++n) {
    const Eigen::Vector3d d = testing::random_sides(rng, 0.15);
    const Triangle T = Triangle::from_sides(d(0), d(1), d(2));
    const double t = ang(rng), s = ang(rng);
    const CosTriple a(std::cos(t), std::cos(s), std::cos(t - s));
    RegionLabel l;
    try {
      l = classify(T, a);
    } catch (const Error&) {
      continue;
    }
    if (l.kind != RegionKind::SurfaceOctant) continue;
    const int want = predicted(T, l);
    for (const auto& p : perms) {
      const Triangle P = Triangle::from_sides(d(p[0]), d(p[1]), d(p[2]));
      const CosTriple b(a(p[0]), a(p[1]), a(p[2]));
      const RegionLabel lp = classify(P, b);
      REQUIRE(lp.kind == RegionKind::SurfaceOctant);
      for (int i = 0; i < 3; ++i) CHECK(lp.signs[i] == l.signs[p[i]]);
      CHECK(lp.component == l.component);
      CHECK(predicted(P, lp) == want);
      ++compared;
    }
  }
  CHECK(compared > 1000);
}
