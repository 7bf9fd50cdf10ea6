#include "intgeo/roots.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include <Eigen/SVD>

namespace intgeo {

namespace {

// Safeguarded Newton on a sign-change bracket: every evaluation tightens
// the bracket, Newton steps are taken only while they stay inside it.
double solve_bracket(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double a,
                     double b, double fa, double tol) {
  double t = 0.5 * (a + b);
  for (int iter = 0; iter < 80; ++iter) {
    const double ft = f(t);
    if (ft == 0.0) return t;
    if ((fa < 0.0) == (ft < 0.0)) {
      a = t;
      fa = ft;
    } else {
      b = t;
    }
    if (b - a <= tol) break;
    const double d = df(t);
    double next = (d != 0.0) ? t - ft / d : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - t) <= 0.25 * tol) return next;
    t = next;
  }
  return 0.5 * (a + b);
}

// Bisects f' on a sign-change bracket to locate an interior extremum of f.
double bisect_deriv(const std::function<double(double)>& df, double a,
                    double b, double da, double tol) {
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const double dm = df(m);
    if (dm == 0.0) return m;
    if ((da < 0.0) == (dm < 0.0)) {
      a = m;
      da = dm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

LineScanResult count_zeros_line(double origin, double length, bool periodic,
                                const Eigen::VectorXd& values,
                                const Eigen::VectorXd& derivs,
                                const std::function<double(double)>& f,
                                const std::function<double(double)>& df,
                                const RootOptions& opts) {
  const int res = static_cast<int>(values.size()) - 1;
  if (res < 8) throw std::invalid_argument("count_zeros_line: need at least 8 cells");
  if (derivs.size() != values.size())
    throw std::invalid_argument("count_zeros_line: values/derivs length mismatch");
  if (!(length > 0.0)) throw std::invalid_argument("count_zeros_line: length must be > 0");

  LineScanResult out;
  // A numerically vanishing sample means the level set contains the whole
  // curve; the draw must be rejected.
  if (values.cwiseAbs().maxCoeff() < 1e-12) {
    out.non_transversal = true;
    return out;
  }

  const double h = length / res;
  const double ttol = opts.newton_tol * std::max(1.0, length);

  auto record = [&](double t) {
    const double ft = f(t);
    if (std::abs(ft) > opts.residual_tol) {
      out.non_transversal = true;
      return;
    }
    const double dt = df(t);
    out.roots.push_back(t);
    out.condition.push_back(std::abs(dt));
    if (std::abs(dt) < opts.sing_tol) out.non_transversal = true;
  };

  for (int k = 0; k < res; ++k) {
    const double a = origin + k * h;
    const double b = origin + (k + 1) * h;
    const double fa = values[k];
    const double fb = values[k + 1];

    if (fa == 0.0) {
      record(a);
      continue;
    }
    if (fa * fb < 0.0) {
      record(solve_bracket(f, df, a, b, fa, ttol));
      continue;
    }
    // Same-sign cell: a critical point inside may hide a crossing pair.
    const double da = derivs[k];
    const double db = derivs[k + 1];
    if (da * db < 0.0) {
      const double ts = bisect_deriv(df, a, b, da, 100.0 * ttol);
      const double fs = f(ts);
      if (fs == 0.0) {
        out.non_transversal = true;  // exact tangency
        record(ts);
        continue;
      }
      if ((fs < 0.0) != (fa < 0.0)) {
        record(solve_bracket(f, df, a, ts, fa, ttol));
        record(solve_bracket(f, df, ts, b, fs, ttol));
      }
    }
  }
  if (!periodic && values[res] == 0.0) record(origin + length);

  // Sort and merge duplicates (the wrap pair on periodic inputs included).
  std::vector<std::size_t> order(out.roots.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t l, std::size_t r) { return out.roots[l] < out.roots[r]; });

  std::vector<double> roots, cond;
  for (std::size_t idx : order) {
    const double r = out.roots[idx];
    if (!roots.empty() && r - roots.back() <= opts.dedup_tol) continue;
    roots.push_back(r);
    cond.push_back(out.condition[idx]);
  }
  if (periodic && roots.size() >= 2 &&
      (roots.front() - origin) + (origin + length - roots.back()) <= opts.dedup_tol) {
    roots.pop_back();
    cond.pop_back();
  }
  out.roots = std::move(roots);
  out.condition = std::move(cond);
  return out;
}

namespace {

struct Located {
  Eigen::Vector2d point;
  double condition;
};

std::optional<Located> newton2(const System2D& system, const Eigen::Vector2d& start,
                               double wander_limit, const RootOptions& opts) {
  Eigen::Vector2d x = start;
  Eigen::Vector2d fval;
  Eigen::Matrix2d jac;
  for (int iter = 0; iter < 40; ++iter) {
    system(x, fval, jac);
    const double det = jac(0, 0) * jac(1, 1) - jac(0, 1) * jac(1, 0);
    if (std::abs(det) < 1e-300) return std::nullopt;
    const Eigen::Vector2d step((jac(1, 1) * fval[0] - jac(0, 1) * fval[1]) / det,
                               (jac(0, 0) * fval[1] - jac(1, 0) * fval[0]) / det);
    x -= step;
    if ((x - start).norm() > wander_limit) return std::nullopt;
    if (step.norm() <= opts.newton_tol * std::max(1.0, x.norm())) {
      system(x, fval, jac);
      if (std::abs(fval[0]) > opts.residual_tol || std::abs(fval[1]) > opts.residual_tol)
        return std::nullopt;
      Eigen::JacobiSVD<Eigen::Matrix2d> svd(jac);
      return Located{x, svd.singularValues()[1]};
    }
  }
  return std::nullopt;
}

// Winding number of the system values around a rectangle boundary: a nonzero
// index certifies a zero inside, index zero dismisses the rectangle.  Quadrant
// jumps of two are resolved by bisecting the offending segment.
class BoundaryIndex {
 public:
  explicit BoundaryIndex(const System2D& system) : system_(system) {}

  // Degree of (f1, f2) on the boundary loop; nullopt once bisection bottoms out.
  std::optional<int> degree(double x0, double y0, double w, double h) {
    std::array<Eigen::Vector2d, 16> pts;
    for (int t = 0; t < 4; ++t) {
      const double f = 0.25 * t;
      pts[static_cast<std::size_t>(t)] = Eigen::Vector2d(x0 + f * w, y0);
      pts[static_cast<std::size_t>(4 + t)] = Eigen::Vector2d(x0 + w, y0 + f * h);
      pts[static_cast<std::size_t>(8 + t)] = Eigen::Vector2d(x0 + (1.0 - f) * w, y0 + h);
      pts[static_cast<std::size_t>(12 + t)] = Eigen::Vector2d(x0, y0 + (1.0 - f) * h);
    }
    ok_ = true;
    std::array<int, 16> q;
    for (int t = 0; t < 16; ++t)
      q[static_cast<std::size_t>(t)] = quadrant(pts[static_cast<std::size_t>(t)]);
    int wind = 0;
    for (int t = 0; t < 16; ++t) {
      const int u = (t + 1) % 16;
      wind += steps(pts[static_cast<std::size_t>(t)], pts[static_cast<std::size_t>(u)],
                    q[static_cast<std::size_t>(t)], q[static_cast<std::size_t>(u)], 0);
    }
    if (!ok_) return std::nullopt;
    return wind / 4;
  }

 private:
  int quadrant(const Eigen::Vector2d& p) {
    Eigen::Vector2d fval;
    Eigen::Matrix2d jac;
    system_(p, fval, jac);
    const bool fa = fval[0] > 0.0;
    const bool fb = fval[1] > 0.0;
    return fa ? (fb ? 0 : 3) : (fb ? 1 : 2);  // counterclockwise in value space
  }

  int steps(const Eigen::Vector2d& p, const Eigen::Vector2d& r, int qp, int qr,
            int depth) {
    const int d = (qr - qp) & 3;
    if (d == 0) return 0;
    if (d == 1) return 1;
    if (d == 3) return -1;
    if (depth >= 40) {
      ok_ = false;
      return 0;
    }
    const Eigen::Vector2d mid = 0.5 * (p + r);
    const int qm = quadrant(mid);
    return steps(p, mid, qp, qm, depth + 1) + steps(mid, r, qm, qr, depth + 1);
  }

  const System2D& system_;
  bool ok_ = true;
};

}  // namespace

CellScanResult count_zeros_cells(const ChartDomain& domain, int nx, int ny,
                                 const std::array<Eigen::MatrixXd, 2>& values,
                                 const std::array<double, 2>& lip,
                                 const System2D& system,
                                 const RootOptions& opts) {
  if (domain.dim() != 2)
    throw std::invalid_argument("count_zeros_cells: chart must be 2-dim");
  if (nx < 8 || ny < 8)
    throw std::invalid_argument("count_zeros_cells: need at least 8 cells per axis");
  for (const auto& v : values)
    if (v.rows() != nx + 1 || v.cols() != ny + 1)
      throw std::invalid_argument("count_zeros_cells: grid shape mismatch");

  const double hx = domain.axis_length(0) / nx;
  const double hy = domain.axis_length(1) / ny;
  const double half_diag = 0.5 * std::hypot(hx, hy);
  const std::array<double, 2> margin = {1.5 * lip[0] * half_diag,
                                        1.5 * lip[1] * half_diag};
  const double x_base = domain.lower(0);
  const double y_base = domain.lower(1);

  CellScanResult out;
  std::vector<Located> found;
  struct OpenRect {
    double x0, y0, w, h;
  };
  std::vector<OpenRect> open;
  BoundaryIndex index(system);

  auto excluded = [&](double c0, double c1, double c2, double c3, double m) {
    const double mn = std::min(std::min(c0, c1), std::min(c2, c3));
    const double mx = std::max(std::max(c0, c1), std::max(c2, c3));
    return mn > m || mx < -m;
  };
  auto in_box = [](const Eigen::Vector2d& p, double x0, double x1, double y0,
                   double y1, double ex, double ey) {
    return p[0] >= x0 - ex && p[0] <= x1 + ex && p[1] >= y0 - ey && p[1] <= y1 + ey;
  };
  const double ex = 1e-6 * hx;
  const double ey = 1e-6 * hy;

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      bool candidate = true;
      for (int e = 0; e < 2 && candidate; ++e) {
        const Eigen::MatrixXd& v = values[static_cast<std::size_t>(e)];
        if (excluded(v(i, j), v(i + 1, j), v(i, j + 1), v(i + 1, j + 1),
                     margin[static_cast<std::size_t>(e)]))
          candidate = false;
      }
      if (!candidate) continue;

      const double x0 = x_base + i * hx;
      const double y0 = y_base + j * hy;
      const auto hit = newton2(system, {x0 + 0.5 * hx, y0 + 0.5 * hy},
                               8.0 * half_diag, opts);
      if (hit && in_box(hit->point, x0, x0 + hx, y0, y0 + hy, ex, ey)) {
        found.push_back(*hit);
        continue;
      }

      // One subdivision: re-test and re-run Newton on the four subcells.
      Eigen::Vector2d fg[3][3];
      Eigen::Vector2d fval;
      Eigen::Matrix2d jac;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          system({x0 + 0.5 * a * hx, y0 + 0.5 * b * hy}, fval, jac);
          fg[a][b] = fval;
        }
      for (int sj = 0; sj < 2; ++sj) {
        for (int si = 0; si < 2; ++si) {
          bool sub_candidate = true;
          for (int e = 0; e < 2 && sub_candidate; ++e) {
            if (excluded(fg[si][sj][e], fg[si + 1][sj][e], fg[si][sj + 1][e],
                         fg[si + 1][sj + 1][e],
                         0.5 * margin[static_cast<std::size_t>(e)]))
              sub_candidate = false;
          }
          if (!sub_candidate) continue;
          const double sx0 = x0 + 0.5 * si * hx;
          const double sy0 = y0 + 0.5 * sj * hy;
          const Eigen::Vector2d sub_center(sx0 + 0.25 * hx, sy0 + 0.25 * hy);
          const auto sub = newton2(system, sub_center, 8.0 * half_diag, opts);
          if (sub && in_box(sub->point, sx0, sx0 + 0.5 * hx, sy0, sy0 + 0.5 * hy,
                            ex, ey)) {
            found.push_back(*sub);
          } else {
            // Newton did not settle here.  A zero boundary index dismisses the
            // subcell; otherwise it stays open until the located roots are in.
            const auto deg = index.degree(sx0, sy0, 0.5 * hx, 0.5 * hy);
            if (!deg || *deg != 0)
              open.push_back({sx0, sy0, 0.5 * hx, 0.5 * hy});
          }
        }
      }
    }
  }

  // Wrap into the chart, deduplicate in the chart metric, sort.
  std::vector<Located> unique;
  for (auto& loc : found) {
    Eigen::VectorXd p = domain.reduce(loc.point);
    loc.point = Eigen::Vector2d(p[0], p[1]);
    bool dup = false;
    for (const auto& u : unique) {
      if (domain.distance(u.point, loc.point) <= opts.dedup_tol) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(loc);
  }
  std::sort(unique.begin(), unique.end(), [](const Located& l, const Located& r) {
    return l.point[0] < r.point[0] ||
           (l.point[0] == r.point[0] && l.point[1] < r.point[1]);
  });

  // An open subcell is only inconclusive when no located root accounts for it.
  for (const auto& rect : open) {
    bool resolved = false;
    for (const auto& u : unique) {
      if (in_box(u.point, rect.x0, rect.x0 + rect.w, rect.y0, rect.y0 + rect.h, ex,
                 ey)) {
        resolved = true;
        break;
      }
    }
    if (!resolved) ++out.inconclusive_cells;
  }

  for (const auto& u : unique) {
    out.roots.push_back(u.point);
    out.condition.push_back(u.condition);
    if (u.condition < opts.sing_tol) out.non_transversal = true;
  }
  return out;
}

RootSet count_roots(const ScalarSystem& sys, int resolution, const RootOptions& opts) {
  const int n = sys.domain.dim();
  if (n < 1 || n > 2)
    throw std::invalid_argument("count_roots: only 1- or 2-dim charts");
  if (static_cast<int>(sys.equations.size()) != n)
    throw std::invalid_argument("count_roots: equation count must match chart dim");
  if (resolution < 64)
    throw std::invalid_argument("count_roots: resolution must be >= 64");
  for (const auto& eq : sys.equations)
    if (!eq.value || !eq.gradient)
      throw std::invalid_argument("count_roots: equation handles must be callable");

  RootSet out;
  if (n == 1) {
    const Equation& eq = sys.equations[0];
    const double lo = sys.domain.lower(0);
    const double len = sys.domain.axis_length(0);
    const bool periodic = sys.domain.kind() == DomainKind::torus;

    auto f = [&eq](double t) {
      Eigen::VectorXd x(1);
      x[0] = t;
      return eq.value(x);
    };
    auto df = [&eq](double t) {
      Eigen::VectorXd x(1);
      x[0] = t;
      return eq.gradient(x)[0];
    };
    Eigen::VectorXd vals(resolution + 1), ders(resolution + 1);
    for (int k = 0; k <= resolution; ++k) {
      const double t = lo + len * k / resolution;
      vals[k] = f(t);
      ders[k] = df(t);
    }
    const LineScanResult scan =
        count_zeros_line(lo, len, periodic, vals, ders, f, df, opts);
    out.non_transversal = scan.non_transversal;
    for (std::size_t r = 0; r < scan.roots.size(); ++r) {
      Eigen::VectorXd p(1);
      p[0] = scan.roots[r];
      out.points.push_back(sys.domain.reduce(p));
      out.condition.push_back(scan.condition[r]);
    }
    std::vector<std::size_t> order(out.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
      return out.points[l][0] < out.points[r][0];
    });
    RootSet sorted;
    sorted.non_transversal = out.non_transversal;
    for (std::size_t idx : order) {
      sorted.points.push_back(out.points[idx]);
      sorted.condition.push_back(out.condition[idx]);
    }
    return sorted;
  }

  // n = 2: sample corner grids and gradient bounds, then run the cell scan.
  std::array<Eigen::MatrixXd, 2> grids;
  std::array<double, 2> lip = {0.0, 0.0};
  for (int e = 0; e < 2; ++e)
    grids[static_cast<std::size_t>(e)].resize(resolution + 1, resolution + 1);

  const double x_base = sys.domain.lower(0);
  const double y_base = sys.domain.lower(1);
  const double hx = sys.domain.axis_length(0) / resolution;
  const double hy = sys.domain.axis_length(1) / resolution;
  Eigen::VectorXd x(2);
  for (int i = 0; i <= resolution; ++i) {
    for (int j = 0; j <= resolution; ++j) {
      x[0] = x_base + i * hx;
      x[1] = y_base + j * hy;
      for (int e = 0; e < 2; ++e) {
        const Equation& eq = sys.equations[static_cast<std::size_t>(e)];
        grids[static_cast<std::size_t>(e)](i, j) = eq.value(x);
        lip[static_cast<std::size_t>(e)] = std::max(
            lip[static_cast<std::size_t>(e)], eq.gradient(x).norm());
      }
    }
  }

  System2D system = [&sys](const Eigen::Vector2d& p, Eigen::Vector2d& fval,
                           Eigen::Matrix2d& jac) {
    Eigen::VectorXd q(2);
    q[0] = p[0];
    q[1] = p[1];
    for (int e = 0; e < 2; ++e) {
      const Equation& eq = sys.equations[static_cast<std::size_t>(e)];
      fval[e] = eq.value(q);
      jac.row(e) = eq.gradient(q).transpose();
    }
  };

  const CellScanResult scan =
      count_zeros_cells(sys.domain, resolution, resolution, grids, lip, system, opts);
  out.non_transversal = scan.non_transversal;
  out.inconclusive_cells = scan.inconclusive_cells;
  for (std::size_t r = 0; r < scan.roots.size(); ++r) {
    Eigen::VectorXd p(2);
    p[0] = scan.roots[r][0];
    p[1] = scan.roots[r][1];
    out.points.push_back(p);
    out.condition.push_back(scan.condition[r]);
  }
  return out;
}

}  // namespace intgeo
