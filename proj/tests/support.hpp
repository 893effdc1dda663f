#pragma once

// Test-only references that share no code with the library: law-of-cosines
// cosines of a distance triple, and a circle-intersection construction of the
// observer in a private frame.

#include <cmath>
#include <random>

#include <Eigen/Core>

#include "pothenot/core_geometry.hpp"

namespace testing {

inline const double kSqrt2 = std::sqrt(2.0);
inline const double kSqrt3 = std::sqrt(3.0);

inline pothenot::Triangle equilateral() { return pothenot::Triangle::from_sides(1, 1, 1); }
inline pothenot::Triangle right_base() { return pothenot::Triangle::from_sides(2, kSqrt2, kSqrt2); }
inline pothenot::Triangle obtuse_base() { return pothenot::Triangle::from_sides(kSqrt3, 1, 1); }

// Cosines of the angles BDC, ADC, ADB seen from a point at distances s.
inline Eigen::Vector3d cosines_from_distances(const Eigen::Vector3d& d, const Eigen::Vector3d& s) {
  return {(s(1) * s(1) + s(2) * s(2) - d(0) * d(0)) / (2 * s(1) * s(2)),
          (s(0) * s(0) + s(2) * s(2) - d(1) * d(1)) / (2 * s(0) * s(2)),
          (s(0) * s(0) + s(1) * s(1) - d(2) * d(2)) / (2 * s(0) * s(1))};
}

struct Construction {
  Eigen::Vector2d A, B, C, D;
  double defect;  // | |DC| - s3 | for the better of the two candidates
};

// A at the origin, B on the positive x axis, C above it. D is the
// intersection of the circles about A and B on the side that best matches s3.
inline Construction construct_observer(const Eigen::Vector3d& d, const Eigen::Vector3d& s) {
  Construction c;
  const double cosA = (d(1) * d(1) + d(2) * d(2) - d(0) * d(0)) / (2 * d(1) * d(2));
  c.A = {0, 0};
  c.B = {d(2), 0};
  c.C = {d(1) * cosA, d(1) * std::sqrt(1 - cosA * cosA)};
  const double x = (s(0) * s(0) - s(1) * s(1) + d(2) * d(2)) / (2 * d(2));
  const double y = std::sqrt(std::max(0.0, s(0) * s(0) - x * x));
  const Eigen::Vector2d up(x, y), down(x, -y);
  const double eu = std::abs((up - c.C).norm() - s(2)), ed = std::abs((down - c.C).norm() - s(2));
  c.D = eu <= ed ? up : down;
  c.defect = std::min(eu, ed);
  return c;
}

// Unsigned angle between p and q from atan2 of cross and dot.
inline double angle_between(const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
  return std::atan2(std::abs(p.x() * q.y() - p.y() * q.x()), p.dot(q));
}

inline Eigen::Vector3d cosines_at(const Eigen::Vector2d& D, const Eigen::Vector2d& A,
                                  const Eigen::Vector2d& B, const Eigen::Vector2d& C) {
  return {std::cos(angle_between(B - D, C - D)), std::cos(angle_between(A - D, C - D)),
          std::cos(angle_between(A - D, B - D))};
}

// Sides of a triangle with angles drawn uniformly from the simplex, each at
// least `min_angle`.
inline Eigen::Vector3d random_sides(std::mt19937_64& rng, double min_angle = 0.05) {
  std::uniform_real_distribution<double> u(0, 1);
  for (;;) {
    const double a = u(rng) * M_PI, b = u(rng) * M_PI, c = M_PI - a - b;
    if (a > min_angle && b > min_angle && c > min_angle)
      return {2 * std::sin(a), 2 * std::sin(b), 2 * std::sin(c)};
  }
}

inline double max_abs_diff(const Eigen::Vector3d& x, const Eigen::Vector3d& y) {
  return (x - y).cwiseAbs().maxCoeff();
}

}  // namespace testing
