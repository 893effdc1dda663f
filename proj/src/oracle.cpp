#include "pothenot/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "pothenot/classifier.hpp"
#include "pothenot/grunert.hpp"
#include "pothenot/surface_export.hpp"

namespace pothenot {

namespace {

// Log-polar chart D = origin + exp(x0)·(cos x1, sin x1) around the
// circumcentre (vertex = -1) or a base vertex. Difference vectors are formed
// relative to the chart origin so that points close to a vertex keep full
// relative precision.
struct Chart {
  int vertex = -1;
  double log_lo = 0, log_hi = 0;
};

struct Evaluator {
  const Triangle& T;
  CosTriple target;
  Eigen::Vector3d weight;

  PlanarPoint point(const Chart& c, const Eigen::Vector2d& x) const {
    const double rho = std::exp(x(0));
    const PlanarPoint off(rho * std::cos(x(1)), rho * std::sin(x(1)));
    return c.vertex < 0 ? off : PlanarPoint(T.vertex(c.vertex) + off);
  }

  // Vectors P_i - D.
  std::array<PlanarPoint, 3> spokes(const Chart& c, const Eigen::Vector2d& x) const {
    const double rho = std::exp(x(0));
    const PlanarPoint off(rho * std::cos(x(1)), rho * std::sin(x(1)));
    std::array<PlanarPoint, 3> p;
    for (int i = 0; i < 3; ++i) {
      if (c.vertex < 0) p[i] = T.vertex(i) - off;
      else if (i == c.vertex) p[i] = -off;
      else p[i] = (T.vertex(i) - T.vertex(c.vertex)) - off;
    }
    return p;
  }

  CosTriple cosines(const Chart& c, const Eigen::Vector2d& x) const {
    const auto p = spokes(c, x);
    return angle_cosines<double>(p[0], p[1], p[2]);
  }

  Eigen::Vector3d residual(const Chart& c, const Eigen::Vector2d& x) const {
    return (cosines(c, x) - target).cwiseQuotient(weight);
  }

  Eigen::Matrix<double, 3, 2> jacobian(const Chart& c, const Eigen::Vector2d& x) const {
    const auto p = spokes(c, x);
    Eigen::Matrix<double, 3, 2> dD;
    dD.row(0) = cosine_gradient<double>(p[1], p[2]).transpose();
    dD.row(1) = cosine_gradient<double>(p[0], p[2]).transpose();
    dD.row(2) = cosine_gradient<double>(p[0], p[1]).transpose();
    const double rho = std::exp(x(0));
    Eigen::Matrix2d dx;
    dx << rho * std::cos(x(1)), -rho * std::sin(x(1)), rho * std::sin(x(1)), rho * std::cos(x(1));
    for (int i = 0; i < 3; ++i) dD.row(i) /= weight(i);
    return dD * dx;
  }
};

struct Start {
  double misfit;
  int chart;
  Eigen::Vector2d x;
  bool minimum = false;
};

struct Refined {
  Eigen::Vector2d x;
  double misfit = 0;
  bool left_chart = false;
};

Refined refine(const Evaluator& ev, const Chart& c, Eigen::Vector2d x) {
  Refined out;
  Eigen::Vector3d r = ev.residual(c, x);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  for (int it = 0; it < 120 && cost > 1e-30; ++it) {
    const Eigen::Matrix<double, 3, 2> J = ev.jacobian(c, x);
    const Eigen::Matrix2d H = J.transpose() * J;
    const Eigen::Vector2d g = J.transpose() * r;
    Eigen::Matrix2d A = H;
    A.diagonal() += lambda * (H.diagonal().array() + 1e-30).matrix();
    const Eigen::Vector2d step = A.ldlt().solve(-g);
    if (!step.allFinite()) break;
    const Eigen::Vector2d next = x + step;
    if (c.vertex >= 0 && next(0) < c.log_lo) {
      out.left_chart = true;  // drifting into a vertex guard
      break;
    }
    const Eigen::Vector3d rn = ev.residual(c, next);
    const double cn = rn.squaredNorm();
    if (cn < cost) {
      x = next;
      r = rn;
      cost = cn;
      // A short step only means convergence when the damping is light.
      if (lambda <= 1e-2 && step.norm() < 1e-14 * (1 + x.norm())) break;
      lambda = std::max(lambda / 3, 1e-12);
    } else {
      lambda *= 4;
      if (lambda > 1e14) break;
    }
  }
  out.x = x;
  out.misfit = (ev.cosines(c, x) - ev.target).squaredNorm();
  return out;
}

// Chart coordinates of a planar point in a vertex chart.
Eigen::Vector2d to_chart(const Triangle& T, int vertex, const PlanarPoint& D) {
  const PlanarPoint off = D - T.vertex(vertex);
  return Eigen::Vector2d(std::log(off.norm()), std::atan2(off(1), off(0)));
}

double local_scale(const Triangle& T, const PlanarPoint& D) {
  double nearest = (D - T.vertex(0)).norm();
  for (int i = 1; i < 3; ++i) nearest = std::min(nearest, (D - T.vertex(i)).norm());
  return std::min(std::max(T.circumradius(), D.norm()), nearest);
}

// Copies of an ill-conditioned root spread along its weak direction; the
// misfit stays at round-off level on the segment between them, whereas two
// distinct roots are separated by a misfit barrier.
bool flat_between(const Triangle& T, const CosTriple& a, const PlanarPoint& P, const PlanarPoint& Q) {
  for (double t : {0.25, 0.5, 0.75}) {
    const PlanarPoint M = P + t * (Q - P);
    const CosTriple F = angle_cosines<double>(T.vertex(0) - M, T.vertex(1) - M, T.vertex(2) - M);
    if ((F - a).squaredNorm() > 1e-14) return false;
  }
  return true;
}

// Targets on an ellipse plane are limits of F at a vertex, and the descent
// then creeps towards it. Halve the distance to the nearest vertex and
// minimize over the direction: a true root gets worse, a limit approach
// gets better.
bool vertex_limit(const Triangle& T, const CosTriple& a, const PlanarPoint& D) {
  int v = 0;
  for (int i = 1; i < 3; ++i)
    if ((D - T.vertex(i)).norm() < (D - T.vertex(v)).norm()) v = i;
  auto misfit = [&](double rho, double phi) {
    const PlanarPoint off(rho * std::cos(phi), rho * std::sin(phi));
    std::array<PlanarPoint, 3> p;
    for (int i = 0; i < 3; ++i) p[i] = i == v ? PlanarPoint(-off) : PlanarPoint(T.vertex(i) - T.vertex(v) - off);
    return (angle_cosines<double>(p[0], p[1], p[2]) - a).squaredNorm();
  };
  const PlanarPoint off = D - T.vertex(v);
  const double rho = off.norm(), phi = std::atan2(off(1), off(0));
  if (rho > 0.1 * T.circumradius()) return false;
  const double here = misfit(rho, phi);
  // Golden-section search for the best direction at half the distance.
  const double g = (std::sqrt(5.0) - 1) / 2;
  double lo = phi - 1e-2, hi = phi + 1e-2;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = misfit(rho / 2, x1), f2 = misfit(rho / 2, x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - g * (hi - lo), f1 = misfit(rho / 2, x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + g * (hi - lo), f2 = misfit(rho / 2, x2);
    }
  }
  return std::min(f1, f2) < here;
}

}  // namespace

OracleReport oracle_count(const Triangle& T, const CosTriple& a, const OracleConfig& cfg,
                          const Tolerances& tol) {
  if (!(std::abs(pillow_value(a)) <= tol.eps_surface))
    throw Error(ErrorCode::NotOnSurface, "oracle target is not on the pillowcase");
  if (cfg.grid_n < 16) throw Error(ErrorCode::InvalidGrid, "oracle grid too coarse");
  const double R = T.circumradius();

  Evaluator ev{T, a, Eigen::Vector3d()};
  double phi_max = 0;
  for (int i = 0; i < 3; ++i) {
    ev.weight(i) = std::max(std::sqrt(std::max(0.0, 1 - a(i) * a(i))), 1e-8);
    phi_max = std::max(phi_max, std::acos(std::clamp(a(i), -1.0, 1.0)));
  }
  // The circumdisc subtends at most 2·asin(R/(r - R)) from distance r.
  double r_max = cfg.search_radius_factor * R;
  if (phi_max > 0) r_max = std::max(r_max, 2 * R * (1 + 1 / std::sin(phi_max / 2)));

  OracleReport report;
  report.search_radius = r_max;

  const double min_side = T.sides().minCoeff();
  std::vector<Chart> charts;
  charts.push_back({-1, std::log(0.02 * R), std::log(r_max)});
  const double guard = tol.eps_vertex * R;
  for (int v = 0; v < 3; ++v) charts.push_back({v, std::log(2 * guard), std::log(0.6 * min_side)});

  std::vector<Start> starts;
  std::vector<Start> all;
  for (int ci = 0; ci < static_cast<int>(charts.size()); ++ci) {
    const Chart& c = charts[ci];
    const int nr = c.vertex < 0 ? cfg.grid_n : std::max(8, cfg.grid_n / 2);
    const int nt = cfg.grid_n;
    std::vector<double> m(static_cast<std::size_t>(nr) * nt);
    auto at = [&](int i, int j) -> double& { return m[static_cast<std::size_t>(i) * nt + j]; };
    auto coord = [&](int i, int j) {
      return Eigen::Vector2d(c.log_lo + (c.log_hi - c.log_lo) * (i + 0.5) / nr,
                             -std::numbers::pi + 2 * std::numbers::pi * (j + 0.5) / nt);
    };
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nt; ++j) at(i, j) = ev.residual(c, coord(i, j)).squaredNorm();
    for (int i = 0; i < nr; ++i) {
      for (int j = 0; j < nt; ++j) {
        const double v = at(i, j);
        bool minimum = true;
        for (int di = -1; di <= 1 && minimum; ++di) {
          const int ii = i + di;
          if (ii < 0 || ii >= nr) continue;
          for (int dj = -1; dj <= 1; ++dj) {
            if (!di && !dj) continue;
            if (at(ii, (j + dj + nt) % nt) < v) {
              minimum = false;
              break;
            }
          }
        }
        Start s{v, ci, coord(i, j), minimum};
        if (minimum) starts.push_back(s);
        all.push_back(s);
      }
    }
  }
  const std::size_t k_lowest = std::min<std::size_t>(32, all.size());
  std::partial_sort(all.begin(), all.begin() + k_lowest, all.end(),
                    [](const Start& x, const Start& y) { return x.misfit < y.misfit; });
  for (std::size_t k = 0; k < k_lowest; ++k)
    if (!all[k].minimum) starts.push_back(all[k]);
  std::sort(starts.begin(), starts.end(), [](const Start& x, const Start& y) {
    return x.misfit < y.misfit || (x.misfit == y.misfit && x.chart < y.chart);
  });
  if (static_cast<int>(starts.size()) > cfg.max_starts) starts.resize(cfg.max_starts);

  std::vector<std::pair<PlanarPoint, double>> roots;
  bool boundary = false;
  for (const Start& s : starts) {
    const Chart* c = &charts[s.chart];
    Refined r = refine(ev, *c, s.x);
    if (r.left_chart) continue;
    PlanarPoint D = ev.point(*c, r.x);
    if (c->vertex < 0) {
      // Finish near-vertex roots in that vertex's chart, where the spokes
      // keep their relative precision.
      for (int v = 0; v < 3; ++v) {
        const double dv = (D - T.vertex(v)).norm();
        if (dv > 0 && std::log(dv) < charts[v + 1].log_hi) {
          c = &charts[v + 1];
          r = refine(ev, *c, to_chart(T, v, D));
          D = ev.point(*c, r.x);
          break;
        }
      }
      if (r.left_chart) continue;
    }
    if (!(r.misfit <= cfg.refine_tol)) continue;
    bool near_vertex = false;
    for (int i = 0; i < 3; ++i)
      if ((D - T.vertex(i)).norm() <= guard) near_vertex = true;
    if (near_vertex || vertex_limit(T, a, D)) continue;
    if (D.norm() > r_max) boundary = true;
    roots.emplace_back(D, r.misfit);
  }
  if (boundary) throw Error(ErrorCode::BoundaryHit, "a root lies outside the search disc");

  std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) {
    return std::tie(x.first(0), x.first(1)) < std::tie(y.first(0), y.first(1));
  });
  for (const auto& [D, mis] : roots) {
    bool dup = false;
    for (std::size_t k = 0; k < report.points.size(); ++k) {
      const PlanarPoint& P = report.points[k];
      const double scale = std::min(local_scale(T, D), local_scale(T, P));
      if ((P - D).norm() <= cfg.cluster_radius * scale || flat_between(T, a, P, D)) {
        dup = true;
        if (mis < report.misfits[k]) {
          report.points[k] = D;
          report.misfits[k] = mis;
        }
        break;
      }
    }
    if (!dup) {
      report.points.push_back(D);
      report.misfits.push_back(mis);
    }
  }
  int on_circle = 0;
  for (const PlanarPoint& P : report.points)
    if (std::abs(P.norm() - R) <= 1e-6 * R) ++on_circle;
  report.curve = on_circle >= 20;
  report.count = static_cast<int>(report.points.size());
  std::ostringstream note;
  note << starts.size() << " starts, search radius " << r_max / R << " R";
  report.note = note.str();
  return report;
}

Triangle random_base(BaseShape shape, std::mt19937_64& rng) {
  constexpr double deg = std::numbers::pi / 180;
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  std::array<double, 3> ang{};
  if (shape == BaseShape::Acute) {
    do {
      ang[0] = uniform(15, 80);
      ang[1] = uniform(15, 80);
      ang[2] = 180 - ang[0] - ang[1];
    } while (ang[2] < 15 || ang[2] > 80);
  } else {
    const double big = shape == BaseShape::Right ? 90 : uniform(100, 150);
    const double rest = 180 - big;
    const double lo = shape == BaseShape::Right ? 15 : 10;
    const double first = uniform(lo, rest - lo);
    const int at = std::uniform_int_distribution<int>(0, 2)(rng);
    ang[at] = big;
    ang[(at + 1) % 3] = first;
    ang[(at + 2) % 3] = rest - first;
  }
  return Triangle::from_sides(2 * std::sin(ang[0] * deg), 2 * std::sin(ang[1] * deg),
                              2 * std::sin(ang[2] * deg));
}

SweepReport region_sweep(const Triangle& T, int samples_per_octant, std::uint64_t seed,
                         const SweepOptions& opt) {
  SweepReport rep;
  const Tolerances& tol = opt.tol;
  const SpecialPoints sp = special_points(T);
  std::vector<CosTriple> avoid(sp.tilde.begin(), sp.tilde.end());
  avoid.insert(avoid.end(), sp.hat.begin(), sp.hat.end());
  avoid.push_back(sp.orthocenter);
  for (const CosTriple& v : pillow_vertices()) avoid.push_back(v);

  // Octant regions that can be populated for this base.
  std::vector<std::string> wanted;
  for (int code = 0; code < 8; ++code) {
    RegionLabel label;
    label.kind = RegionKind::SurfaceOctant;
    for (int i = 0; i < 3; ++i) label.signs[i] = (code >> i) & 1 ? -1 : 1;
    std::vector<Component> comps{Component::Whole};
    const int m = T.largest_angle();
    if (T.shape() == BaseShape::Obtuse && label.signs[m] > 0 && label.signs[(m + 1) % 3] < 0 &&
        label.signs[(m + 2) % 3] < 0)
      comps = {Component::Near, Component::Far};
    for (Component cpt : comps) {
      label.component = cpt;
      try {
        rep.regions[label.key()].predicted = count_prediction(T, label).count;
        wanted.push_back(label.key());
      } catch (const Error&) {
        rep.regions[label.key()];  // empty for this base; stays at zero samples
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const long max_draws = 4000L * samples_per_octant + 100000L;
  auto full = [&] {
    for (const auto& k : wanted)
      if (rep.regions[k].samples < samples_per_octant) return false;
    return true;
  };
  while (!full() && rep.draws < max_draws) {
    ++rep.draws;
    const double th = angle(rng), sg = angle(rng);
    const CosTriple a = param_surface(th, sg);
    const Eigen::Vector3d dev = a - T.cosines();
    if (dev.cwiseAbs().minCoeff() <= 10 * tol.eps_plane) continue;
    bool close = false;
    for (const CosTriple& q : avoid)
      if ((a - q).lpNorm<Eigen::Infinity>() <= 10 * tol.eps_point) close = true;
    if (close) continue;

    RegionLabel label;
    try {
      label = classify(T, a, tol);
    } catch (const Error&) {
      continue;
    }
    if (label.kind != RegionKind::SurfaceOctant) continue;
    const std::string key = label.key();
    RegionTally& tally = rep.regions[key];
    if (tally.samples >= samples_per_octant) continue;

    int predicted = -1;
    try {
      predicted = count_prediction(T, label).count;
    } catch (const Error& e) {
      // A sample in a region the theorems call empty is itself a disagreement.
      ++rep.solver_mismatches;
      if (rep.details.size() < 10) rep.details.push_back(key + ": " + e.what());
      continue;
    }
    ++tally.samples;
    ++rep.samples;
    tally.predicted = predicted;

    auto describe = [&](const char* who, int got) {
      std::ostringstream s;
      s.precision(17);
      s << who << " " << key << " theta=" << th << " sigma=" << sg << " predicted " << predicted
        << " got " << got;
      return s.str();
    };

    const int solved = static_cast<int>(solve_on_pillowcase(T, a, tol).count());
    ++tally.solver_counts[solved];
    if (solved != predicted) {
      ++tally.solver_mismatches;
      ++rep.solver_mismatches;
      if (rep.details.size() < 10) rep.details.push_back(describe("solver", solved));
    }
    if (opt.run_oracle) {
      int observed = -1;
      OracleConfig cfg = opt.oracle;
      for (int attempt = 0; attempt < 2 && observed < 0; ++attempt) {
        try {
          const OracleReport o = oracle_count(T, a, cfg, tol);
          observed = o.curve ? -2 : o.count;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::BoundaryHit) throw;
          cfg.search_radius_factor *= 8;
        }
      }
      if (observed == -1) {
        ++rep.inconclusive;
        if (rep.details.size() < 10) rep.details.push_back(describe("oracle boundary", -1));
        continue;
      }
      ++tally.oracle_counts[observed];
      if (observed != predicted) {
        ++tally.oracle_mismatches;
        ++rep.oracle_mismatches;
        if (rep.details.size() < 10) rep.details.push_back(describe("oracle", observed));
      }
    }
  }
  return rep;
}

}  // namespace pothenot
