#include "pothenot/core_geometry.hpp"

#include <cstdlib>
#include <string>

namespace pothenot {

template class BaseTriangle<double>;

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateBase: return "DegenerateBase";
    case ErrorCode::VertexCollision: return "VertexCollision";
    case ErrorCode::IdenticallyZero: return "IdenticallyZero";
    case ErrorCode::NotOnSurface: return "NotOnSurface";
    case ErrorCode::Inconsistent: return "Inconsistent";
    case ErrorCode::NotOnEllipse: return "NotOnEllipse";
    case ErrorCode::AmbiguousBand: return "AmbiguousBand";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::BoundaryHit: return "BoundaryHit";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

Tolerances default_tolerances() {
  Tolerances tol;
  if (const char* env = std::getenv("POTHENOT_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && v > 0) tol.accept = v;
  }
  return tol;
}

SpecialPoints special_points(const Triangle& T) {
  const Eigen::Vector3d& c = T.cosines();
  const Eigen::Vector3d& ang = T.angles();
  SpecialPoints sp;
  for (int i = 0; i < 3; ++i) {
    sp.tilde[i] = c;
    sp.tilde[i](i) = -c(i);
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    sp.hat[i] = c;
    sp.hat[i](i) = std::cos(std::abs(ang(j) - ang(k)));
  }
  sp.orthocenter = -c;
  return sp;
}

bool limit_set_membership(const Triangle& T, const CosTriple& p, Vertex v, const Tolerances& tol) {
  const int i = static_cast<int>(v), j = (i + 1) % 3, k = (i + 2) % 3;
  const double c = T.cosines()(i);
  if (std::abs(p(i) - c) > tol.eps_plane) return false;
  return p(j) * p(j) + p(k) * p(k) - 2 * c * p(j) * p(k) <= 1 - c * c + tol.eps_plane;
}

const std::array<CosTriple, 4>& pillow_vertices() {
  static const std::array<CosTriple, 4> v{CosTriple(1, 1, 1), CosTriple(1, -1, -1),
                                          CosTriple(-1, 1, -1), CosTriple(-1, -1, 1)};
  return v;
}

CosTriple project_to_surface(const CosTriple& a) {
  CosTriple p = a;
  for (int it = 0; it < 8; ++it) {
    const double f = pillow_value(p);
    if (std::abs(f) <= 1e-16) break;
    const Eigen::Vector3d g = pillow_gradient(p);
    const double g2 = g.squaredNorm();
    if (g2 < 1e-300) break;
    p -= (f / g2) * g;
  }
  return p;
}

}  // namespace pothenot
