#include "pothenot/classifier.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace pothenot {

namespace {

constexpr const char* kVertexNames[3] = {"A", "B", "C"};

std::string sign_string(const std::array<int, 3>& s) {
  std::string out = "(";
  for (int i = 0; i < 3; ++i) {
    if (i) out += ',';
    out += s[i] > 0 ? '+' : '-';
  }
  return out + ")";
}

double sup_distance(const CosTriple& x, const CosTriple& y) { return (x - y).lpNorm<Eigen::Infinity>(); }

// Polar angle of the in-plane coordinates of E_v; the ellipse is centred at
// the origin of that plane.
double ellipse_angle(const CosTriple& p, int v) {
  const int j = (v + 1) % 3, k = (v + 2) % 3;
  return std::atan2(p(k), p(j));
}

double wrap(double x) {
  constexpr double two_pi = 2 * std::numbers::pi;
  x = std::fmod(x, two_pi);
  return x < 0 ? x + two_pi : x;
}

RegionLabel octant_label(const Triangle& T, const CosTriple& p, const std::array<int, 3>& signs) {
  RegionLabel label;
  label.kind = RegionKind::SurfaceOctant;
  label.signs = signs;
  if (T.shape() == BaseShape::Obtuse) {
    const int m = T.largest_angle();
    const bool split = signs[m] > 0 && signs[(m + 1) % 3] < 0 && signs[(m + 2) % 3] < 0;
    if (split) label.component = component_of(T, p);
  }
  return label;
}

RegionLabel ellipse_label(const Triangle& T, const CosTriple& p, int v, const Tolerances& tol) {
  RegionLabel label;
  label.kind = RegionKind::OnEllipse;
  label.ellipse = v;
  if (T.cosines()(v) != 0.0) label.arc = arc_membership(T, p, static_cast<Vertex>(v), tol);
  return label;
}

}  // namespace

std::string RegionLabel::to_string() const {
  switch (kind) {
    case RegionKind::OffPillow: return "off pillow";
    case RegionKind::InteriorPillow: return "pillow interior";
    case RegionKind::PillowVertex: return "pillow vertex";
    case RegionKind::SpecialPoint:
      if (special == SpecialId::Orthocenter) return "orthocenter point";
      return std::string("tilde point ") + kVertexNames[static_cast<int>(special)];
    case RegionKind::OnEllipse:
      return std::string("E_") + kVertexNames[ellipse] + (arc == ArcFlag::OnTheta ? " on theta" : " off theta");
    case RegionKind::SurfaceOctant: {
      std::string s = sign_string(signs);
      if (component == Component::Near) s += " near";
      if (component == Component::Far) s += " far";
      return s;
    }
  }
  return "?";
}

std::string RegionLabel::key() const {
  switch (kind) {
    case RegionKind::OffPillow: return "off";
    case RegionKind::InteriorPillow: return "interior";
    case RegionKind::PillowVertex: return "vertex";
    case RegionKind::SpecialPoint:
      if (special == SpecialId::Orthocenter) return "orthocenter";
      return std::string("tilde_") + kVertexNames[static_cast<int>(special)];
    case RegionKind::OnEllipse:
      return std::string("E_") + kVertexNames[ellipse] + (arc == ArcFlag::OnTheta ? ":on" : ":off");
    case RegionKind::SurfaceOctant: {
      std::string s;
      for (int v : signs) s += v > 0 ? '+' : '-';
      if (component == Component::Near) s += "near";
      if (component == Component::Far) s += "far";
      return s;
    }
  }
  return "?";
}

Component component_of(const Triangle& T, const CosTriple& a) {
  const Eigen::Vector3d& P = T.cosines();
  const Eigen::Vector3d w = a - P;
  const double c1 = 2 * (w(0) * P(1) * P(2) + P(0) * w(1) * P(2) + P(0) * P(1) * w(2)) - 2 * P.dot(w);
  const double c2 = 2 * (w(0) * w(1) * P(2) + w(0) * P(1) * w(2) + P(0) * w(1) * w(2)) - w.squaredNorm();
  const double c3 = 2 * w(0) * w(1) * w(2);
  // g(t) = f(P + t w) has the root t = 1; the quotient is q2 t² + q1 t + q0.
  const double q2 = c3, q1 = c3 + c2, q0 = c3 + c2 + c1;
  constexpr double eps = 1e-9;
  std::vector<double> roots;
  const double scale = std::max({std::abs(q2), std::abs(q1), std::abs(q0)});
  if (std::abs(q2) <= 1e-14 * scale) {
    if (std::abs(q1) > 0) roots.push_back(-q0 / q1);
  } else {
    const double disc = q1 * q1 - 4 * q2 * q0;
    if (disc >= 0) {
      const double sq = std::sqrt(disc);
      const double q = -(q1 + (q1 < 0 ? -sq : sq)) / 2;
      roots.push_back(q / q2);
      if (q != 0) roots.push_back(q0 / q);
    }
  }
  for (double t : roots)
    if (t > eps && t < 1 - eps) return Component::Far;
  return Component::Near;
}

ArcFlag arc_membership(const Triangle& T, const CosTriple& a, Vertex vertex, const Tolerances& tol) {
  const int v = static_cast<int>(vertex);
  if (std::abs(a(v) - T.cosines()(v)) > tol.eps_plane)
    throw Error(ErrorCode::NotOnEllipse, "point is off the ellipse plane");
  const SpecialPoints sp = special_points(T);
  const int j = (v + 1) % 3, k = (v + 2) % 3;

  const PlanarPoint& V = T.vertex(v);
  const PlanarPoint& P = T.vertex(j);
  const PlanarPoint& Q = T.vertex(k);
  const PlanarPoint dir = (Q - P).normalized();
  const PlanarPoint foot = P + dir * dir.dot(V - P);
  const PlanarPoint mirror = 2 * foot - V;

  const double start = ellipse_angle(sp.hat[j], v);
  const double end = wrap(ellipse_angle(sp.hat[k], v) - start);
  const double probe = wrap(ellipse_angle(forward_map(T, mirror), v) - start);
  const double x = wrap(ellipse_angle(a, v) - start);
  if (end <= tol.eps_angle) return ArcFlag::OffTheta;
  const bool inner = probe < end;
  const bool on = inner ? (x > tol.eps_angle && x < end - tol.eps_angle)
                        : (x > end + tol.eps_angle && x < 2 * std::numbers::pi - tol.eps_angle);
  return on ? ArcFlag::OnTheta : ArcFlag::OffTheta;
}

CountPrediction count_prediction(const Triangle& T, const RegionLabel& label) {
  CountPrediction out;
  auto finite = [&](int n, std::string why) {
    out.kind = CountKind::Finite;
    out.count = n;
    out.provenance = std::move(why);
    return out;
  };
  const BaseShape shape = T.shape();
  const int m = T.largest_angle();
  switch (label.kind) {
    case RegionKind::OffPillow:
      return finite(0, "outside the pillow: no observer realizes these angles");
    case RegionKind::InteriorPillow:
      out.kind = CountKind::Unsupported;
      out.provenance = "pillow interior: spatial observer count not covered";
      return out;
    case RegionKind::PillowVertex:
      return finite(0, "pillow vertex: only reached in the limit");
    case RegionKind::SpecialPoint:
      if (label.special == SpecialId::Orthocenter) {
        if (shape == BaseShape::Acute) return finite(1, "orthocenter point of an acute base: the orthocenter");
        return finite(0, "orthocenter point of a non-acute base: no interior orthocenter");
      }
      out.kind = CountKind::Infinite;
      out.provenance = "tilde point: every observer on the opposite circumcircle arc";
      return out;
    case RegionKind::OnEllipse:
      if (T.cosines()(label.ellipse) == 0.0)
        return finite(0, "ellipse of a right angle: no solution");
      if (label.arc == ArcFlag::OnTheta) return finite(1, "ellipse theorem: on the one-solution arc");
      return finite(0, "ellipse theorem: off the one-solution arc");
    case RegionKind::SurfaceOctant:
      break;
  }

  int minus = 0, pos = -1, neg = -1;
  for (int i = 0; i < 3; ++i) {
    if (label.signs[i] < 0) {
      ++minus;
      neg = i;
    } else {
      pos = i;
    }
  }
  const std::string table = shape == BaseShape::Acute ? "acute table"
                            : shape == BaseShape::Right ? "right table"
                                                        : "obtuse table";
  const std::string where = table + ", octant " + sign_string(label.signs);
  if (minus == 0) return finite(2, where);
  if (minus == 3) return finite(1, where);
  if (minus == 1) {
    if (shape != BaseShape::Acute && neg == m)
      throw Error(ErrorCode::EmptyRegion, where + " is empty for this base");
    return finite(1, where);
  }
  if (shape == BaseShape::Obtuse && pos == m) {
    if (label.component == Component::Near) return finite(2, where + " near component");
    if (label.component == Component::Far) return finite(0, where + " far component");
    throw Error(ErrorCode::EmptyRegion, where + " requires a component tag");
  }
  return finite(0, where);
}

RegionLabel classify(const Triangle& T, const CosTriple& a, const Tolerances& tol) {
  RegionLabel label;
  const double f = pillow_value(a);
  if (a.cwiseAbs().maxCoeff() > 1.0 + 1e-12 || f < -tol.eps_surface) {
    label.kind = RegionKind::OffPillow;
    return label;
  }
  if (f > tol.eps_surface) {
    label.kind = RegionKind::InteriorPillow;
    return label;
  }
  const CosTriple p = project_to_surface(a);
  const auto& pv = pillow_vertices();
  for (int i = 0; i < 4; ++i) {
    if (sup_distance(p, pv[i]) <= tol.eps_point) {
      label.kind = RegionKind::PillowVertex;
      label.pillow_vertex = i;
      return label;
    }
  }
  const SpecialPoints sp = special_points(T);
  for (int i = 0; i < 3; ++i) {
    if (sup_distance(p, sp.tilde[i]) <= tol.eps_point) {
      label.kind = RegionKind::SpecialPoint;
      label.special = static_cast<SpecialId>(i);
      return label;
    }
  }
  if (sup_distance(p, sp.orthocenter) <= tol.eps_point) {
    label.kind = RegionKind::SpecialPoint;
    label.special = SpecialId::Orthocenter;
    return label;
  }

  const Eigen::Vector3d dev = p - T.cosines();
  int closest = -1;
  for (int i = 0; i < 3; ++i)
    if (std::abs(dev(i)) <= tol.eps_plane && (closest < 0 || std::abs(dev(i)) < std::abs(dev(closest))))
      closest = i;

  if (closest >= 0) {
    const RegionLabel on = ellipse_label(T, p, closest, tol);
    if (std::abs(dev(closest)) > tol.eps_exact_plane) {
      const int expected = count_prediction(T, on).count;
      for (int flip : {-1, 1}) {
        std::array<int, 3> s;
        for (int i = 0; i < 3; ++i)
          s[i] = std::abs(dev(i)) <= tol.eps_plane ? flip : (dev(i) > 0 ? 1 : -1);
        int n = -1;
        try {
          n = count_prediction(T, octant_label(T, p, s)).count;
        } catch (const Error&) {
          continue;  // an empty neighbour cannot contain the point
        }
        if (n != expected)
          throw Error(ErrorCode::AmbiguousBand, "point lies inside a plane band where the count changes");
      }
    }
    return on;
  }

  std::array<int, 3> s;
  for (int i = 0; i < 3; ++i) s[i] = dev(i) > 0 ? 1 : -1;
  return octant_label(T, p, s);
}

}  // namespace pothenot
