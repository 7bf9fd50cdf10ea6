#include "intgeo/hull.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace intgeo {

double hull_length_1d(const std::vector<double>& points) {
  if (points.size() < 2) return 0.0;
  const auto [lo, hi] = std::minmax_element(points.begin(), points.end());
  return *hi - *lo;
}

double hull_area_2d(const std::vector<Eigen::Vector2d>& points) {
  const std::size_t n = points.size();
  if (n < 3) return 0.0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].x() != points[b].x()) return points[a].x() < points[b].x();
    return points[a].y() < points[b].y();
  });

  const auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
    const Eigen::Vector2d u = points[a] - points[o];
    const Eigen::Vector2d v = points[b] - points[o];
    return u.x() * v.y() - u.y() * v.x();
  };

  // Monotone chain; hull holds indices of lower then upper chain.
  std::vector<std::size_t> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t ii = 0; ii < n; ++ii) {
    const std::size_t i = order[ii];
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], i) <= 0.0) --k;
    hull[k++] = i;
  }
  const std::size_t lower = k + 1;
  for (std::size_t ii = n; ii-- > 0;) {
    const std::size_t i = order[ii];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], i) <= 0.0) --k;
    hull[k++] = i;
  }
  if (k < 4) return 0.0;  // fewer than 3 distinct hull vertices
  hull.resize(k - 1);

  double twice_area = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Eigen::Vector2d& p = points[hull[i]];
    const Eigen::Vector2d& q = points[hull[(i + 1) % hull.size()]];
    twice_area += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(twice_area);
}

namespace {

struct Face {
  std::array<int, 3> v;
  Eigen::Vector3d normal;  // not normalized
  double offset = 0.0;     // normal . x = offset on the face plane
  bool alive = true;
};

Face make_face(int a, int b, int c, const std::vector<Eigen::Vector3d>& pts,
               const Eigen::Vector3d& interior) {
  Face f;
  f.v = {a, b, c};
  f.normal = (pts[static_cast<std::size_t>(b)] - pts[static_cast<std::size_t>(a)])
                 .cross(pts[static_cast<std::size_t>(c)] - pts[static_cast<std::size_t>(a)]);
  f.offset = f.normal.dot(pts[static_cast<std::size_t>(a)]);
  if (f.normal.dot(interior) > f.offset) {  // flip to point away from interior
    std::swap(f.v[1], f.v[2]);
    f.normal = -f.normal;
    f.offset = -f.offset;
  }
  return f;
}

}  // namespace

double hull_volume_3d(const std::vector<Eigen::Vector3d>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 4) return 0.0;

  double scale = 0.0;
  for (const auto& p : points) scale = std::max(scale, p.lpNorm<Eigen::Infinity>());
  if (scale == 0.0) return 0.0;
  const double eps = 1e-10 * scale;

  // Initial simplex: farthest pair among axis extremes, then the point
  // farthest from their line, then the point farthest from that plane.
  int i0 = 0, i1 = 0;
  {
    std::vector<int> extremes;
    for (int axis = 0; axis < 3; ++axis) {
      int lo = 0, hi = 0;
      for (int i = 1; i < n; ++i) {
        if (points[static_cast<std::size_t>(i)][axis] < points[static_cast<std::size_t>(lo)][axis]) lo = i;
        if (points[static_cast<std::size_t>(i)][axis] > points[static_cast<std::size_t>(hi)][axis]) hi = i;
      }
      extremes.push_back(lo);
      extremes.push_back(hi);
    }
    double best = -1.0;
    for (int a : extremes)
      for (int b : extremes) {
        const double d = (points[static_cast<std::size_t>(a)] - points[static_cast<std::size_t>(b)]).squaredNorm();
        if (d > best) {
          best = d;
          i0 = a;
          i1 = b;
        }
      }
    if (best <= eps * eps) return 0.0;
  }
  const Eigen::Vector3d dir = (points[static_cast<std::size_t>(i1)] - points[static_cast<std::size_t>(i0)]).normalized();

  int i2 = -1;
  double best_line = eps;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d w = points[static_cast<std::size_t>(i)] - points[static_cast<std::size_t>(i0)];
    const double d = (w - dir * dir.dot(w)).norm();
    if (d > best_line) {
      best_line = d;
      i2 = i;
    }
  }
  if (i2 < 0) return 0.0;

  Eigen::Vector3d plane_n = (points[static_cast<std::size_t>(i1)] - points[static_cast<std::size_t>(i0)])
                                .cross(points[static_cast<std::size_t>(i2)] - points[static_cast<std::size_t>(i0)]);
  plane_n.normalize();
  int i3 = -1;
  double best_plane = eps;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(plane_n.dot(points[static_cast<std::size_t>(i)] - points[static_cast<std::size_t>(i0)]));
    if (d > best_plane) {
      best_plane = d;
      i3 = i;
    }
  }
  if (i3 < 0) return 0.0;  // all points coplanar

  const Eigen::Vector3d interior =
      0.25 * (points[static_cast<std::size_t>(i0)] + points[static_cast<std::size_t>(i1)] +
              points[static_cast<std::size_t>(i2)] + points[static_cast<std::size_t>(i3)]);

  std::vector<Face> faces;
  faces.push_back(make_face(i0, i1, i2, points, interior));
  faces.push_back(make_face(i0, i1, i3, points, interior));
  faces.push_back(make_face(i0, i2, i3, points, interior));
  faces.push_back(make_face(i1, i2, i3, points, interior));

  std::vector<std::size_t> visible;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2 || i == i3) continue;
    const Eigen::Vector3d& p = points[static_cast<std::size_t>(i)];

    visible.clear();
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
      const Face& f = faces[fi];
      if (!f.alive) continue;
      if (f.normal.dot(p) - f.offset > eps * f.normal.norm()) visible.push_back(fi);
    }
    if (visible.empty()) continue;  // inside (or on) the current hull

    // Horizon: directed edges of visible faces whose reverse is not visible.
    edges.clear();
    for (std::size_t fi : visible) {
      const auto& v = faces[fi].v;
      edges.emplace_back(v[0], v[1]);
      edges.emplace_back(v[1], v[2]);
      edges.emplace_back(v[2], v[0]);
    }
    for (std::size_t fi : visible) faces[fi].alive = false;

    for (const auto& [a, b] : edges) {
      const bool reversed_present =
          std::find(edges.begin(), edges.end(), std::make_pair(b, a)) != edges.end();
      if (reversed_present) continue;  // interior edge of the visible patch
      faces.push_back(make_face(a, b, i, points, interior));
    }
  }

  double vol6 = 0.0;
  for (const Face& f : faces) {
    if (!f.alive) continue;
    const Eigen::Vector3d a = points[static_cast<std::size_t>(f.v[0])] - interior;
    const Eigen::Vector3d b = points[static_cast<std::size_t>(f.v[1])] - interior;
    const Eigen::Vector3d c = points[static_cast<std::size_t>(f.v[2])] - interior;
    vol6 += a.dot(b.cross(c));
  }
  return std::abs(vol6) / 6.0;
}

}  // namespace intgeo
