#include "pothenot/grunert.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "pothenot/scalar.hpp"

namespace pothenot {

double LambdaCoeffs::evaluate(double u) const {
  long double acc = 0;
  for (int i = 4; i >= 0; --i) acc = acc * u + value[i];
  return static_cast<double>(acc);
}

double LambdaCoeffs::max_abs() const {
  double m = 0;
  for (double v : value) m = std::max(m, std::abs(v));
  return m;
}

LambdaCoeffs LambdaCoeffs::raw(const std::array<double, 5>& c) {
  LambdaCoeffs out;
  out.value = c;
  const double m = out.max_abs();
  out.bound.fill(m);
  return out;
}

LambdaCoeffs lambda_coeffs(const Triangle& T, const CosTriple& a) {
  const Eigen::Vector3d& d = T.sides();
  const auto v = lambda_polynomial<Extended>(d(0), d(1), d(2), a(0), a(1), a(2));
  const auto b = lambda_polynomial<Magnitude>(d(0), d(1), d(2), a(0), a(1), a(2));
  LambdaCoeffs out;
  for (int i = 0; i < 5; ++i) {
    out.value[i] = static_cast<double>(v[i]);
    out.bound[i] = b[i].v;
  }
  return out;
}

namespace {

long double horner(const std::vector<long double>& c, long double u, long double* du) {
  long double p = 0, dp = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * u + p;
    p = p * u + *it;
  }
  if (du) *du = dp;
  return p;
}

long double newton_polish(const std::vector<long double>& c, long double u) {
  long double best = u, best_r = std::abs(horner(c, u, nullptr));
  for (int it = 0; it < 60 && best_r > 0; ++it) {
    long double dp = 0;
    const long double p = horner(c, u, &dp);
    if (dp == 0) break;
    u -= p / dp;
    const long double r = std::abs(horner(c, u, nullptr));
    if (r < best_r) {
      best = u;
      best_r = r;
    } else if (r > 4 * best_r) {
      break;
    }
  }
  return best;
}

}  // namespace

std::vector<Root> quartic_roots(const LambdaCoeffs& c, const Tolerances& tol) {
  int hi = -1, lo = 5;
  for (int i = 0; i < 5; ++i) {
    if (!c.negligible(i, tol.eps_lambda)) {
      hi = std::max(hi, i);
      lo = std::min(lo, i);
    }
  }
  if (hi < 0) throw Error(ErrorCode::IdenticallyZero, "all quartic coefficients vanish");

  std::vector<long double> p;
  for (int i = lo; i <= hi; ++i) p.push_back(c.negligible(i, tol.eps_lambda) ? 0.0L : c.value[i]);
  const int m = hi - lo;

  std::vector<long double> cand;
  if (m == 1) {
    cand.push_back(-p[0] / p[1]);
  } else if (m == 2) {
    const long double A = p[2], B = p[1], C = p[0];
    long double disc = B * B - 4 * A * C;
    if (disc < 0 && -disc <= 1e-12L * (B * B + std::abs(4 * A * C))) disc = 0;
    if (disc >= 0) {
      const long double sq = std::sqrt(disc);
      const long double q = -(B + (B < 0 ? -sq : sq)) / 2;
      if (q != 0) {
        cand.push_back(q / A);
        cand.push_back(C / q);
      } else {
        cand.push_back(0);
        cand.push_back(0);
      }
    }
  } else if (m >= 3) {
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(m, m);
    for (int i = 1; i < m; ++i) comp(i, i - 1) = 1;
    for (int i = 0; i < m; ++i) comp(i, m - 1) = -static_cast<double>(p[i] / p[m]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (int i = 0; i < m; ++i) {
      const std::complex<double> z = es.eigenvalues()(i);
      if (std::abs(z.imag()) <= 1e-6 * std::max(1.0, std::abs(z))) cand.push_back(z.real());
    }
  }

  const long double scale = static_cast<long double>(c.max_abs());
  std::vector<Root> roots;
  for (long double u : cand) {
    u = newton_polish(p, u);
    if (std::abs(horner(p, u, nullptr)) > 1e-8L * scale * std::max(1.0L, std::pow(std::abs(u), m)))
      continue;
    if (u < 0) {
      if (u < -1e-12L) continue;
      u = 0;
    }
    roots.push_back({static_cast<double>(u), 1});
  }
  if (lo > 0) roots.push_back({0.0, lo});

  std::sort(roots.begin(), roots.end(), [](const Root& x, const Root& y) { return x.u < y.u; });
  std::vector<Root> merged;
  for (const Root& r : roots) {
    if (!merged.empty() && std::abs(r.u - merged.back().u) <= 1e-7 * std::max(1.0, std::abs(r.u))) {
      Root& b = merged.back();
      b.u = (b.u * b.multiplicity + r.u * r.multiplicity) / (b.multiplicity + r.multiplicity);
      b.multiplicity += r.multiplicity;
    } else {
      merged.push_back(r);
    }
  }
  return merged;
}

double grunert_residual(const Triangle& T, const CosTriple& a, const Eigen::Vector3d& s) {
  const Eigen::Vector3d& d = T.sides();
  const double e1 = s(0) * s(0) - 2 * a(2) * s(0) * s(1) + s(1) * s(1) - d(2) * d(2);
  const double e2 = s(0) * s(0) - 2 * a(1) * s(0) * s(2) + s(2) * s(2) - d(1) * d(1);
  const double e3 = s(1) * s(1) - 2 * a(0) * s(1) * s(2) + s(2) * s(2) - d(0) * d(0);
  return std::max({std::abs(e1), std::abs(e2), std::abs(e3)});
}

PlanarPoint trilaterate(const Triangle& T, const Eigen::Vector3d& s, const Tolerances& tol) {
  const PlanarPoint& A = T.vertex(0);
  const PlanarPoint& B = T.vertex(1);
  const PlanarPoint& C = T.vertex(2);
  Eigen::Matrix2d M;
  M.row(0) = 2 * (B - A).transpose();
  M.row(1) = 2 * (C - A).transpose();
  const Eigen::Vector2d rhs((s(0) - s(1)) * (s(0) + s(1)) + B.squaredNorm() - A.squaredNorm(),
                            (s(0) - s(2)) * (s(0) + s(2)) + C.squaredNorm() - A.squaredNorm());
  const PlanarPoint D = M.fullPivLu().solve(rhs);
  const double defect = std::max({std::abs((D - A).norm() - s(0)), std::abs((D - B).norm() - s(1)),
                                  std::abs((D - C).norm() - s(2))});
  if (!(defect <= tol.accept * std::max(T.circumradius(), s.maxCoeff())))
    throw Error(ErrorCode::Inconsistent, "distances do not meet in a common planar point");
  return D;
}

namespace {

Eigen::Vector3d grunert_vector(const Eigen::Vector3d& d, const CosTriple& a, const Eigen::Vector3d& s) {
  return {s(0) * s(0) - 2 * a(2) * s(0) * s(1) + s(1) * s(1) - d(2) * d(2),
          s(0) * s(0) - 2 * a(1) * s(0) * s(2) + s(2) * s(2) - d(1) * d(1),
          s(1) * s(1) - 2 * a(0) * s(1) * s(2) + s(2) * s(2) - d(0) * d(0)};
}

Eigen::Vector3d polish_distances(const Eigen::Vector3d& d, const CosTriple& a, Eigen::Vector3d s) {
  Eigen::Vector3d r = grunert_vector(d, a, s);
  double res = r.lpNorm<Eigen::Infinity>();
  const double floor = 1e-16 * d.maxCoeff() * d.maxCoeff();
  for (int it = 0; it < 20 && res > floor; ++it) {
    Eigen::Matrix3d J;
    J << 2 * s(0) - 2 * a(2) * s(1), 2 * s(1) - 2 * a(2) * s(0), 0,
        2 * s(0) - 2 * a(1) * s(2), 0, 2 * s(2) - 2 * a(1) * s(0),
        0, 2 * s(1) - 2 * a(0) * s(2), 2 * s(2) - 2 * a(0) * s(1);
    const Eigen::Vector3d step = J.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) break;
    const Eigen::Vector3d next = s + step;
    const Eigen::Vector3d rn = grunert_vector(d, a, next);
    const double rn_norm = rn.lpNorm<Eigen::Infinity>();
    if (!(rn_norm < res)) break;
    s = next;
    r = rn;
    res = rn_norm;
  }
  return s;
}

double sup_distance(const CosTriple& x, const CosTriple& y) { return (x - y).lpNorm<Eigen::Infinity>(); }

// Roots u = s1² of L2 u² + L1 u + L0, evaluated in extended precision. A
// slightly negative discriminant is treated as a double root: the candidate
// is then settled by the residual filter.
std::vector<Extended> quadratic_candidates(const Triangle& T, const CosTriple& a) {
  const Eigen::Vector3d& d = T.sides();
  const auto L = lambda_polynomial<Extended>(d(0), d(1), d(2), a(0), a(1), a(2));
  const auto B = lambda_polynomial<Magnitude>(d(0), d(1), d(2), a(0), a(1), a(2));
  auto zero = [&](int i) { return ext_abs(L[i]) <= Extended(1e-26) * Extended(B[i].v); };

  std::vector<Extended> out;
  if (zero(2)) {
    if (!zero(1)) out.push_back(-L[0] / L[1]);
    return out;
  }
  Extended disc = L[1] * L[1] - 4 * L[2] * L[0];
  if (disc < 0) disc = 0;
  const Extended sq = ext_sqrt(disc);
  const Extended q = -(L[1] + (L[1] < 0 ? -sq : sq)) / 2;
  out.push_back(q / L[2]);
  if (q != 0) out.push_back(L[0] / q);
  return out;
}

}  // namespace

SolutionSet solve_on_pillowcase(const Triangle& T, const CosTriple& a_in, const Tolerances& tol) {
  if (!(std::abs(pillow_value(a_in)) <= tol.eps_surface))
    throw Error(ErrorCode::NotOnSurface, "target is not on the pillowcase");
  SolutionSet out;
  const CosTriple a = project_to_surface(a_in);
  out.target = a;

  for (const CosTriple& v : pillow_vertices()) {
    if (sup_distance(a, v) <= tol.eps_point) {
      out.pillow_vertex = true;
      return out;
    }
  }
  const SpecialPoints sp = special_points(T);
  for (int i = 0; i < 3; ++i) {
    if (sup_distance(a, sp.tilde[i]) <= tol.eps_point) {
      out.kind = SolutionKind::InfiniteArc;
      out.arc_opposite = static_cast<Vertex>(i);
      return out;
    }
  }
  if (sup_distance(a, sp.orthocenter) <= tol.eps_point) {
    out.orthocenter_branch = true;
    if (T.shape() == BaseShape::Acute) {
      const PlanarPoint H = T.orthocenter();
      Solution sol;
      sol.point = H;
      sol.distances.s = Eigen::Vector3d((H - T.vertex(0)).norm(), (H - T.vertex(1)).norm(),
                                        (H - T.vertex(2)).norm());
      sol.distances.residual = grunert_residual(T, a, sol.distances.s);
      out.solutions.push_back(sol);
    }
    return out;
  }

  const Eigen::Vector3d& d = T.sides();
  const double R = T.circumradius();
  const double accept = tol.accept * d.maxCoeff() * d.maxCoeff();

  for (Extended u : quadratic_candidates(T, a)) {
    if (!(u > 0)) continue;
    const Extended s1 = ext_sqrt(u);
    Extended r3 = Extended(d(2)) * d(2) - (1 - Extended(a(2)) * a(2)) * u;
    Extended r2 = Extended(d(1)) * d(1) - (1 - Extended(a(1)) * a(1)) * u;
    const Extended w3 = ext_sqrt(r3 > 0 ? r3 : 0), w2 = ext_sqrt(r2 > 0 ? r2 : 0);
    for (int k = 0; k < 4; ++k) {
      if ((k & 1) && w3 == 0) continue;
      if ((k & 2) && w2 == 0) continue;
      const Extended s2 = Extended(a(2)) * s1 + ((k & 1) ? -w3 : w3);
      const Extended s3 = Extended(a(1)) * s1 + ((k & 2) ? -w2 : w2);
      if (!(s2 > 0 && s3 > 0)) continue;
      Eigen::Vector3d s(static_cast<double>(s1), static_cast<double>(s2), static_cast<double>(s3));
      s = polish_distances(d, a, s);
      if (!(s.minCoeff() > 0)) continue;
      const double res = grunert_residual(T, a, s);
      if (!(res <= accept)) continue;

      PlanarPoint D;
      try {
        D = trilaterate(T, s, tol);
      } catch (const Error&) {
        continue;
      }
      bool near_vertex = false;
      for (int i = 0; i < 3; ++i)
        if ((D - T.vertex(i)).norm() <= tol.eps_vertex * R) near_vertex = true;
      if (near_vertex) continue;
      if (!(sup_distance(forward_map(T, D, tol), a) <= tol.cos_accept)) continue;

      bool duplicate = false;
      for (Solution& prev : out.solutions) {
        const double scale = std::max({R, D.norm(), prev.point.norm()});
        if ((prev.point - D).norm() <= tol.separation * scale) {
          duplicate = true;
          if (res < prev.distances.residual) prev = Solution{DistanceTriple{s, res}, D};
          break;
        }
      }
      if (!duplicate) out.solutions.push_back(Solution{DistanceTriple{s, res}, D});
    }
  }
  std::sort(out.solutions.begin(), out.solutions.end(),
            [](const Solution& x, const Solution& y) {
              return std::tie(x.distances.s(0), x.distances.s(1), x.distances.s(2)) <
                     std::tie(y.distances.s(0), y.distances.s(1), y.distances.s(2));
            });
  return out;
}

}  // namespace pothenot
