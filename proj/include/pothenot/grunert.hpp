#pragma once

#include <array>
#include <optional>
#include <vector>

#include "pothenot/core_geometry.hpp"

namespace pothenot {

/// Coefficients of P~(u) = L4 u^4 + L3 u^3 + L2 u^2 + L1 u + L0 with u = s1².
template <typename Scalar>
std::array<Scalar, 5> lambda_polynomial(Scalar d1, Scalar d2, Scalar d3, Scalar a1, Scalar a2,
                                        Scalar a3) {
  const Scalar one(1), two(2);
  const Scalar q1 = d1 * d1, q2 = d2 * d2, q3 = d3 * d3;
  const Scalar p1 = a1 * a1, p2 = a2 * a2, p3 = a3 * a3;
  const Scalar a123 = a1 * a2 * a3;
  const Scalar f = two * a123 - p1 - p2 - p3 + one;
  const Scalar e = q1 - q2 - q3;

  std::array<Scalar, 5> L;
  L[4] = Scalar(16) * f * f;
  L[3] = Scalar(32) * f *
         ((two * p2 * p3 - a123 - p2 - p3 + one) * q1 - (a123 - p1 - p3 + one) * q2 -
          (a123 - p1 - p2 + one) * q3);
  L[2] = Scalar(16) * (q2 * q2 + Scalar(4) * q2 * q3 + q3 * q3) * p1 * p1 +
         Scalar(16) * (q1 - q3) * (q1 - q3) * p2 * p2 +
         Scalar(16) * (q1 - q2) * (q1 - q2) * p3 * p3 -
         Scalar(32) * (q1 * q2 + q1 * q3 + q2 * q2 + Scalar(4) * q2 * q3 + q3 * q3) * a2 * a3 * p1 * a1 -
         Scalar(8) * (Scalar(5) * q1 - q2 - Scalar(5) * q3) * e * p2 -
         Scalar(8) * (Scalar(5) * q1 - Scalar(5) * q2 - q3) * e * p3 +
         Scalar(16) * (Scalar(3) * q1 * q1 - Scalar(4) * q1 * q2 - Scalar(4) * q1 * q3 + q2 * q2 + q3 * q3) * p2 * p3 +
         Scalar(64) * (q1 * q2 + q1 * q3 + q2 * q3) * p1 * p2 * p3 +
         Scalar(24) * e * e -
         Scalar(8) * a1 * (one - two * p2 - two * p3) * (a1 - two * a2 * a3) * q1 * q1 +
         Scalar(8) * p1 *
             ((Scalar(6) * q2 + Scalar(6) * q3 - Scalar(8) * p2 * q3 - Scalar(8) * p3 * q2) * q1 +
              two * p2 * q2 * q2 + Scalar(4) * p2 * q2 * q3 + Scalar(6) * p2 * q3 * q3 +
              Scalar(6) * p3 * q2 * q2 + Scalar(4) * p3 * q2 * q3 + two * p3 * q3 * q3 -
              Scalar(5) * q2 * q2 - Scalar(14) * q2 * q3 - Scalar(5) * q3 * q3) -
         Scalar(16) * a123 *
             ((two * q1 * q2 - Scalar(4) * q1 * q3 + two * q2 * q3 + two * q3 * q3) * p2 +
              (two * q1 * q3 + two * q2 * q2 + two * q2 * q3 - Scalar(4) * q1 * q2) * p3 +
              two * q1 * q2 + two * q1 * q3 - q2 * q2 - Scalar(10) * q2 * q3 - q3 * q3);
  L[1] = Scalar(8) * e * e * e +
         Scalar(8) * e * (q1 * q2 + q1 * q3 - q2 * q2 - Scalar(6) * q2 * q3 - q3 * q3) * p1 -
         Scalar(8) * (q1 - q3) * e * e * p2 -
         Scalar(8) * (q1 - q2) * e * e * p3 -
         Scalar(32) * q2 * q3 * (q2 + q3) * p1 * p1 +
         Scalar(8) * e * (q1 * q1 - q2 * q2 + Scalar(6) * q2 * q3 - q3 * q3) * a123 -
         Scalar(16) * q2 * (q1 * q1 - two * q1 * q2 + q2 * q2 + q3 * q3) * p1 * p3 -
         Scalar(16) * q3 * (q1 * q1 - two * q1 * q3 + q2 * q2 + q3 * q3) * p1 * p2 +
         Scalar(32) * q2 * q3 * (q1 + q2 + q3) * a2 * a3 * p1 * a1;
  const Scalar g = Scalar(4) * p1 * q2 * q3 - e * e;
  L[0] = g * g;
  return L;
}

/// The factored form (2 a1 d2 d3 + e)² (2 a1 d2 d3 - e)² with e = d1² - d2² - d3².
template <typename Scalar>
Scalar lambda0_factored(Scalar d1, Scalar d2, Scalar d3, Scalar a1) {
  const Scalar e = d1 * d1 - d2 * d2 - d3 * d3;
  const Scalar m = Scalar(2) * a1 * d2 * d3;
  return (m + e) * (m + e) * (m - e) * (m - e);
}

/// Λ values with the per-coefficient term bound used for scaled zero tests.
struct LambdaCoeffs {
  std::array<double, 5> value{};
  std::array<double, 5> bound{};

  double operator[](int i) const { return value[i]; }
  bool negligible(int i, double eps_rel) const {
    return std::abs(value[i]) <= eps_rel * bound[i];
  }
  double evaluate(double u) const;
  double max_abs() const;

  /// Wraps an arbitrary polynomial; every bound is max |c_i|.
  static LambdaCoeffs raw(const std::array<double, 5>& c);
};

LambdaCoeffs lambda_coeffs(const Triangle& T, const CosTriple& a);

struct Root {
  double u;
  int multiplicity;
};

/// Real nonnegative roots of the effective-degree polynomial, Newton polished,
/// with multiplicities. Throws IdenticallyZero when every coefficient is
/// negligible.
std::vector<Root> quartic_roots(const LambdaCoeffs& c, const Tolerances& tol = {});

struct DistanceTriple {
  Eigen::Vector3d s = Eigen::Vector3d::Zero();  // |DA|, |DB|, |DC|
  double residual = 0;
};

double grunert_residual(const Triangle& T, const CosTriple& a, const Eigen::Vector3d& s);

/// Planar point at distances s from A, B, C. Throws Inconsistent when the
/// worst distance defect exceeds tol.accept·max(R, max s).
PlanarPoint trilaterate(const Triangle& T, const Eigen::Vector3d& s, const Tolerances& tol = {});

enum class SolutionKind { Finite, InfiniteArc };

struct Solution {
  DistanceTriple distances;
  PlanarPoint point;
};

struct SolutionSet {
  SolutionKind kind = SolutionKind::Finite;
  std::vector<Solution> solutions;
  /// For InfiniteArc: the circumcircle arc between the other two vertices
  /// that does not contain this one.
  std::optional<Vertex> arc_opposite;
  bool pillow_vertex = false;
  bool orthocenter_branch = false;
  CosTriple target = CosTriple::Zero();  // after projection onto the surface

  std::size_t count() const { return solutions.size(); }
};

/// Throws NotOnSurface when |f(a)| > tol.eps_surface.
SolutionSet solve_on_pillowcase(const Triangle& T, const CosTriple& a, const Tolerances& tol = {});

}  // namespace pothenot
