#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pothenot/core_geometry.hpp"

namespace pothenot {

struct OracleConfig {
  double search_radius_factor = 50;  // disc radius is at least factor·R
  int grid_n = 400;                  // samples per chart axis
  double refine_tol = 1e-12;         // squared cosine misfit for a root
  double cluster_radius = 1e-5;      // relative to the local length scale
  int max_starts = 160;
};

struct OracleReport {
  int count = 0;
  bool curve = false;  // many roots along the circumcircle
  std::vector<PlanarPoint> points;
  std::vector<double> misfits;
  double search_radius = 0;
  std::string note;
};

/// Counts planar D with forward_map(D) = a by multi-start Levenberg-Marquardt
/// on log-polar grids around the circumcentre and each vertex. Uses no part
/// of the Grunert algebra. Throws BoundaryHit when a root lies outside the
/// search disc.
OracleReport oracle_count(const Triangle& T, const CosTriple& a, const OracleConfig& cfg = {},
                          const Tolerances& tol = {});

struct SweepOptions {
  OracleConfig oracle{50, 64, 1e-12, 1e-5, 128};
  bool run_oracle = true;
  Tolerances tol{};
};

struct RegionTally {
  int samples = 0;
  int predicted = -1;
  std::map<int, int> solver_counts;
  std::map<int, int> oracle_counts;
  int solver_mismatches = 0;
  int oracle_mismatches = 0;
};

struct SweepReport {
  std::map<std::string, RegionTally> regions;  // keyed by RegionLabel::key()
  int samples = 0;
  int draws = 0;
  int solver_mismatches = 0;
  int oracle_mismatches = 0;
  int inconclusive = 0;
  std::vector<std::string> details;  // first few disagreements

  bool clean() const { return solver_mismatches == 0 && oracle_mismatches == 0 && inconclusive == 0; }
};

/// Random base of the given class with circumradius 1. Acute: all angles in
/// [15°, 80°]. Right: the other angles in [15°, 75°]. Obtuse: largest angle in
/// [100°, 150°], the others at least 10°. The distinguished angle lands at a
/// random vertex.
Triangle random_base(BaseShape shape, std::mt19937_64& rng);

/// Draws surface points uniformly in the (theta, sigma) chart until every
/// non-empty octant region holds `samples_per_octant` samples, skipping points
/// near the planes and special points, and compares classifier, solver and
/// oracle counts. Deterministic for a fixed seed.
SweepReport region_sweep(const Triangle& T, int samples_per_octant, std::uint64_t seed,
                         const SweepOptions& opt = {});

}  // namespace pothenot
