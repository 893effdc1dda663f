#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pothenot/classifier.hpp"

namespace pothenot {

inline constexpr const char* kToolVersion = "1.0.0";

/// (cos θ, cos σ, cos(θ - σ)).
inline CosTriple param_surface(double theta, double sigma) {
  return {std::cos(theta), std::cos(sigma), std::cos(theta - sigma)};
}

/// The rational chart with t = tan(θ/2), s = tan(σ/2).
inline CosTriple rational_chart(double t, double s) {
  const double tt = 1 + t * t, ss = 1 + s * s;
  return {(1 - t * t) / tt, (1 - s * s) / ss, ((1 - s * s) * (1 - t * t) + 4 * s * t) / (ss * tt)};
}

enum class Color { Blue, Brown, Green, Gray };

struct SurfaceSample {
  double theta = 0, sigma = 0;
  CosTriple a = CosTriple::Zero();
  bool ambiguous = false;
  RegionLabel label;
  CountPrediction count;
  Color color = Color::Gray;
};

struct Decomposition {
  int grid = 0;
  std::vector<SurfaceSample> samples;  // row-major in theta, then sigma
  std::map<std::string, int> region_histogram;
  std::map<Color, int> color_histogram;
  int blue_patches = 0;  // connected blue components on the surface
  double max_surface_residual = 0;
};

enum class ExportFormat { Csv, Ply, Json };

ExportFormat parse_format(const std::string& name);
const char* color_name(Color c);

/// Classifies the grid × grid cell centres of (-π, π)². Throws InvalidGrid
/// for grid < 16.
Decomposition decompose(const Triangle& T, int grid, const Tolerances& tol = {});

void write_decomposition(const Triangle& T, const Decomposition& dec, ExportFormat format,
                         std::ostream& out, const Tolerances& tol = {});

/// decompose + write to `path`. Throws IoFailure when the file cannot be written.
Decomposition export_decomposition(const Triangle& T, int grid, ExportFormat format,
                                   const std::string& path, const Tolerances& tol = {});

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace pothenot
