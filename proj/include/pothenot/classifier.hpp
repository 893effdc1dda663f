#pragma once

#include <array>
#include <string>

#include "pothenot/core_geometry.hpp"

namespace pothenot {

enum class RegionKind { OffPillow, InteriorPillow, SurfaceOctant, OnEllipse, SpecialPoint, PillowVertex };
enum class Component { Whole, Near, Far };
enum class ArcFlag { OnTheta, OffTheta };
enum class SpecialId { TildeA, TildeB, TildeC, Orthocenter };

struct RegionLabel {
  RegionKind kind = RegionKind::OffPillow;
  std::array<int, 3> signs{0, 0, 0};  // ±1 per coordinate, octants only
  Component component = Component::Whole;
  int ellipse = -1;                    // vertex index of E_A, E_B, E_C
  ArcFlag arc = ArcFlag::OffTheta;
  SpecialId special = SpecialId::TildeA;
  int pillow_vertex = -1;              // index into pillow_vertices()

  /// Short human-readable form, e.g. "(+,-,-) near" or "E_A on theta".
  std::string to_string() const;
  /// Stable key for tables, e.g. "+--near", "E_B:off", "tilde_A".
  std::string key() const;
};

enum class CountKind { Finite, Infinite, Unsupported };

struct CountPrediction {
  CountKind kind = CountKind::Finite;
  int count = 0;
  std::string provenance;
};

/// Precedence: surface test, pillow vertex, tilde point, orthocenter point,
/// ellipse plane, octant. Throws AmbiguousBand when the point is inside the
/// plane band but not on the plane and the neighbouring regions disagree.
RegionLabel classify(const Triangle& T, const CosTriple& a, const Tolerances& tol = {});

/// Near or far component of the split octant, decided by whether the segment
/// from (x0, y0, z0) to a crosses the surface before reaching a.
Component component_of(const Triangle& T, const CosTriple& a);

/// Whether a point of E_v lies on the open one-solution arc. The arc runs
/// between the two hat points on E_v and contains the image of the mirror
/// image of vertex v in the opposite side. Throws NotOnEllipse when a is
/// off the plane by more than eps_plane.
ArcFlag arc_membership(const Triangle& T, const CosTriple& a, Vertex v, const Tolerances& tol = {});

/// Solution count for a label. Throws EmptyRegion for octants that are
/// empty for the base. Does not assume the largest angle sits at A.
CountPrediction count_prediction(const Triangle& T, const RegionLabel& label);

}  // namespace pothenot
