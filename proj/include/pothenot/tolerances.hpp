#pragma once

namespace pothenot {

// Numerical thresholds shared by all modules. Relative entries are scaled by
// the quantity named in the comment.
struct Tolerances {
  double eps_vertex = 1e-9;      // times R
  double eps_plane = 1e-9;       // absolute, cosine space
  double eps_exact_plane = 1e-12;  // below this a point is on the plane outright
  double eps_surface = 1e-7;     // |pillow_value|
  double eps_point = 1e-7;       // sup-norm distance to special points
  double eps_angle = 1e-8;       // radians
  double eps_lambda = 1e-10;     // relative to the coefficient's term bound
  double accept = 1e-8;          // Grunert residual, times max(d)^2
  double cos_accept = 1e-7;      // forward-map check of a recovered point
  double separation = 1e-6;      // times max(R, |D|)
  double poly = 1e-9;            // relative P~(u) residual
};

// Defaults, with POTHENOT_TOL (if set and parseable) replacing `accept`.
Tolerances default_tolerances();

}  // namespace pothenot
