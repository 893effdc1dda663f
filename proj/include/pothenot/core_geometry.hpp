#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "pothenot/errors.hpp"
#include "pothenot/tolerances.hpp"

namespace pothenot {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

/// (cos∠BDC, cos∠ADC, cos∠ADB); no surface constraint is imposed.
using CosTriple = Eigen::Vector3d;
using PlanarPoint = Eigen::Vector2d;

enum class Vertex { A = 0, B = 1, C = 2 };
enum class BaseShape { Acute, Right, Obtuse };

/// Cosines closer to zero than this make the angle exactly right.
inline constexpr double kRightAngleSnap = 1e-12;

/// Fixed triangle ABC with d1 = |BC|, d2 = |AC|, d3 = |AB|, placed on the
/// circle of radius R about the origin with A = (R, 0) and B at a positive
/// polar angle.
template <typename Scalar>
class BaseTriangle {
 public:
  static BaseTriangle from_sides(Scalar d1, Scalar d2, Scalar d3);
  /// Angles at A and B in radians; the circumradius is 1.
  static BaseTriangle from_angles(Scalar alpha, Scalar beta);

  const Vector3<Scalar>& sides() const { return sides_; }
  const Vector3<Scalar>& cosines() const { return cosines_; }
  const Vector3<Scalar>& angles() const { return angles_; }
  const Vector2<Scalar>& vertex(int i) const { return vertices_[i]; }
  const Vector2<Scalar>& vertex(Vertex v) const { return vertices_[static_cast<int>(v)]; }
  Scalar circumradius() const { return radius_; }
  Scalar max_side() const { return sides_.maxCoeff(); }

  BaseShape shape() const { return shape_; }
  /// Index of the largest angle (ties break to the lowest index).
  int largest_angle() const { return largest_; }

  Vector2<Scalar> orthocenter() const { return vertices_[0] + vertices_[1] + vertices_[2]; }

 private:
  BaseTriangle() = default;
  void place();

  Vector3<Scalar> sides_;
  Vector3<Scalar> cosines_;
  Vector3<Scalar> angles_;
  std::array<Vector2<Scalar>, 3> vertices_;
  Scalar radius_{};
  BaseShape shape_{BaseShape::Acute};
  int largest_ = 0;
};

using Triangle = BaseTriangle<double>;

inline Triangle triangle_from_sides(double d1, double d2, double d3) {
  return Triangle::from_sides(d1, d2, d3);
}

template <typename Scalar>
Scalar pillow_value(const Vector3<Scalar>& a) {
  return Scalar(1) + Scalar(2) * a(0) * a(1) * a(2) - a(0) * a(0) - a(1) * a(1) - a(2) * a(2);
}

template <typename Scalar>
Vector3<Scalar> pillow_gradient(const Vector3<Scalar>& a) {
  return Scalar(2) * Vector3<Scalar>(a(1) * a(2) - a(0), a(0) * a(2) - a(1), a(0) * a(1) - a(2));
}

inline bool in_cube(const CosTriple& a) { return a.cwiseAbs().maxCoeff() <= 1.0; }

/// (1/36) x²y²z² f(a).
template <typename Scalar>
Scalar euler_volume_squared(Scalar x, Scalar y, Scalar z, const Vector3<Scalar>& a) {
  return x * x * y * y * z * z * pillow_value(a) / Scalar(36);
}

/// Angle cosines at the common origin of the three vectors pa, pb, pc,
/// i.e. (cos∠(pb,pc), cos∠(pa,pc), cos∠(pa,pb)).
template <typename Scalar>
Vector3<Scalar> angle_cosines(const Vector2<Scalar>& pa, const Vector2<Scalar>& pb,
                              const Vector2<Scalar>& pc) {
  const Vector2<Scalar> ua = pa.normalized(), ub = pb.normalized(), uc = pc.normalized();
  Vector3<Scalar> c(ub.dot(uc), ua.dot(uc), ua.dot(ub));
  return c.cwiseMax(Scalar(-1)).cwiseMin(Scalar(1));
}

/// Throws VertexCollision when D is within eps_vertex·R of a vertex.
template <typename Scalar>
void check_off_vertices(const BaseTriangle<Scalar>& T, const Vector2<Scalar>& D,
                        const Tolerances& tol = {}) {
  for (int i = 0; i < 3; ++i) {
    if ((D - T.vertex(i)).norm() <= Scalar(tol.eps_vertex) * T.circumradius())
      throw Error(ErrorCode::VertexCollision, "observer coincides with a base vertex");
  }
}

template <typename Scalar>
Vector3<Scalar> forward_map(const BaseTriangle<Scalar>& T, const Vector2<Scalar>& D,
                            const Tolerances& tol = {}) {
  check_off_vertices(T, D, tol);
  return angle_cosines<Scalar>(T.vertex(0) - D, T.vertex(1) - D, T.vertex(2) - D);
}

/// d(cos∠(p,q))/dD for p = P - D, q = Q - D.
template <typename Scalar>
Vector2<Scalar> cosine_gradient(const Vector2<Scalar>& p, const Vector2<Scalar>& q) {
  const Scalar np = p.norm(), nq = q.norm();
  const Vector2<Scalar> up = p / np, uq = q / nq;
  const Scalar c = up.dot(uq);
  return -((uq - c * up) / np + (up - c * uq) / nq);
}

/// Rows are the gradients of the three components of forward_map.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 2> forward_jacobian(const BaseTriangle<Scalar>& T,
                                             const Vector2<Scalar>& D) {
  const Vector2<Scalar> pa = T.vertex(0) - D, pb = T.vertex(1) - D, pc = T.vertex(2) - D;
  Eigen::Matrix<Scalar, 3, 2> J;
  J.row(0) = cosine_gradient<Scalar>(pb, pc).transpose();
  J.row(1) = cosine_gradient<Scalar>(pa, pc).transpose();
  J.row(2) = cosine_gradient<Scalar>(pa, pb).transpose();
  return J;
}

/// Central-difference Jacobian; `h` is relative to R.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 2> forward_jacobian_fd(const BaseTriangle<Scalar>& T,
                                                const Vector2<Scalar>& D, Scalar h = Scalar(1e-6)) {
  const Scalar step = h * T.circumradius();
  Eigen::Matrix<Scalar, 3, 2> J;
  for (int k = 0; k < 2; ++k) {
    Vector2<Scalar> e = Vector2<Scalar>::Zero();
    e(k) = step;
    J.col(k) = (forward_map(T, Vector2<Scalar>(D + e)) - forward_map(T, Vector2<Scalar>(D - e))) /
               (Scalar(2) * step);
  }
  return J;
}

/// The 2×2 minors (rows 0-1, 0-2, 1-2) of a forward-map Jacobian.
template <typename Scalar>
Vector3<Scalar> jacobian_minors(const Eigen::Matrix<Scalar, 3, 2>& J) {
  auto det = [&](int i, int j) { return J(i, 0) * J(j, 1) - J(i, 1) * J(j, 0); };
  return Vector3<Scalar>(det(0, 1), det(0, 2), det(1, 2));
}

struct SpecialPoints {
  std::array<CosTriple, 3> tilde;  // Ã, B̃, C̃
  std::array<CosTriple, 3> hat;    // Â, B̂, Ĉ
  CosTriple orthocenter;           // (-x0, -y0, -z0)
};

SpecialPoints special_points(const Triangle& T);

/// Whether p lies in the limit set of F at the vertex: on the plane
/// a_v = cos(angle at v) and inside or on the ellipse there.
bool limit_set_membership(const Triangle& T, const CosTriple& p, Vertex v,
                          const Tolerances& tol = {});

/// The four pillow vertices (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1).
const std::array<CosTriple, 4>& pillow_vertices();

/// Newton projection of a near-surface triple onto f = 0. Returns the input
/// unchanged when the gradient vanishes.
CosTriple project_to_surface(const CosTriple& a);

// ---------------------------------------------------------------------------

template <typename Scalar>
BaseTriangle<Scalar> BaseTriangle<Scalar>::from_sides(Scalar d1, Scalar d2, Scalar d3) {
  using std::abs;
  using std::atan2;
  using std::cos;
  using std::sqrt;
  if (!(d1 > 0 && d2 > 0 && d3 > 0))
    throw Error(ErrorCode::DegenerateBase, "side lengths must be positive");
  // Heron in the cancellation-free ordering a >= b >= c.
  std::array<Scalar, 3> s{d1, d2, d3};
  std::sort(s.begin(), s.end(), [](Scalar x, Scalar y) { return x > y; });
  const Scalar a = s[0], b = s[1], c = s[2];
  const Scalar q = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  if (!(c - (a - b) > 0) || !(q > 0))
    throw Error(ErrorCode::DegenerateBase, "sides violate the strict triangle inequality");
  const Scalar area = sqrt(q) / Scalar(4);

  BaseTriangle T;
  T.sides_ = Vector3<Scalar>(d1, d2, d3);
  const Scalar q1 = d1 * d1, q2 = d2 * d2, q3 = d3 * d3;
  T.angles_ = Vector3<Scalar>(atan2(Scalar(4) * area, q2 + q3 - q1),
                              atan2(Scalar(4) * area, q1 + q3 - q2),
                              atan2(Scalar(4) * area, q1 + q2 - q3));
  T.cosines_ = Vector3<Scalar>((q2 + q3 - q1) / (Scalar(2) * d2 * d3),
                               (q1 + q3 - q2) / (Scalar(2) * d1 * d3),
                               (q1 + q2 - q3) / (Scalar(2) * d1 * d2));
  T.radius_ = d1 * d2 * d3 / (Scalar(4) * area);
  T.place();
  return T;
}

template <typename Scalar>
BaseTriangle<Scalar> BaseTriangle<Scalar>::from_angles(Scalar alpha, Scalar beta) {
  using std::sin;
  const Scalar gamma = Scalar(std::numbers::pi) - alpha - beta;
  if (!(alpha > 0 && beta > 0 && gamma > 0))
    throw Error(ErrorCode::DegenerateBase, "angles must be positive and sum below pi");
  return from_sides(Scalar(2) * sin(alpha), Scalar(2) * sin(beta), Scalar(2) * sin(gamma));
}

template <typename Scalar>
void BaseTriangle<Scalar>::place() {
  using std::abs;
  using std::cos;
  using std::sin;
  largest_ = 0;
  for (int i = 1; i < 3; ++i)
    if (angles_(i) > angles_(largest_)) largest_ = i;
  shape_ = BaseShape::Acute;
  if (abs(cosines_(largest_)) <= Scalar(kRightAngleSnap)) {
    cosines_(largest_) = 0;
    angles_(largest_) = Scalar(std::numbers::pi) / 2;
    shape_ = BaseShape::Right;
  } else if (cosines_(largest_) < 0) {
    shape_ = BaseShape::Obtuse;
  }
  // Inscribed angles: arc AB is 2C, arc BC is 2A.
  const Scalar R = radius_;
  const Scalar tB = Scalar(2) * angles_(2), tC = Scalar(2) * (angles_(2) + angles_(0));
  vertices_[0] = Vector2<Scalar>(R, 0);
  vertices_[1] = Vector2<Scalar>(R * cos(tB), R * sin(tB));
  vertices_[2] = Vector2<Scalar>(R * cos(tC), R * sin(tC));
}

extern template class BaseTriangle<double>;

}  // namespace pothenot
