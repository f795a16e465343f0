#ifndef PNCERT_GEOMETRY_HPP
#define PNCERT_GEOMETRY_HPP

#include <algorithm>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pncert {

namespace geom {

using Point = std::complex<double>;

inline double cross(const Point& o, const Point& a, const Point& b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) -
         (a.imag() - o.imag()) * (b.real() - o.real());
}

/// Monotone-chain convex hull, counterclockwise, duplicates merged at `tol`.
/// `index` maps each hull vertex back to a position in the input list.
struct Hull {
  std::vector<Point> vertices;
  std::vector<std::size_t> index;
};

inline Hull convex_hull(const std::vector<Point>& pts, double tol = 1e-10) {
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a].real() != pts[b].real()) return pts[a].real() < pts[b].real();
    return pts[a].imag() < pts[b].imag();
  });
  // merge near-duplicates
  std::vector<std::size_t> uniq;
  for (std::size_t i : order) {
    if (!uniq.empty() && std::abs(pts[i] - pts[uniq.back()]) <= tol) continue;
    uniq.push_back(i);
  }
  if (uniq.size() <= 2) {
    Hull h;
    for (std::size_t i : uniq) {
      h.vertices.push_back(pts[i]);
      h.index.push_back(i);
    }
    return h;
  }
  std::vector<std::size_t> hull(2 * uniq.size());
  std::size_t k = 0;
  for (std::size_t idx : uniq) {  // lower chain
    while (k >= 2 && cross(pts[hull[k - 2]], pts[hull[k - 1]], pts[idx]) <= tol)
      --k;
    hull[k++] = idx;
  }
  std::size_t lower = k + 1;
  for (std::size_t j = uniq.size() - 1; j-- > 0;) {  // upper chain
    std::size_t idx = uniq[j];
    while (k >= lower && cross(pts[hull[k - 2]], pts[hull[k - 1]], pts[idx]) <= tol)
      --k;
    hull[k++] = idx;
  }
  hull.resize(k - 1);
  Hull out;
  for (std::size_t idx : hull) {
    out.vertices.push_back(pts[idx]);
    out.index.push_back(idx);
  }
  return out;
}

/// Distance from a point to a segment; `s` is the parameter of the closest
/// point a + s (b - a), clamped to [0,1].
inline double point_segment_distance(const Point& p, const Point& a, const Point& b,
                                     double& s) {
  Point d = b - a;
  double len2 = std::norm(d);
  if (len2 < 1e-30) {
    s = 0.0;
    return std::abs(p - a);
  }
  s = ((p.real() - a.real()) * d.real() + (p.imag() - a.imag()) * d.imag()) / len2;
  s = std::clamp(s, 0.0, 1.0);
  return std::abs(p - (a + s * d));
}

inline bool inside_convex(const Point& p, const std::vector<Point>& ccw_hull,
                          double tol = 0.0) {
  if (ccw_hull.size() < 3) return false;
  for (std::size_t i = 0; i < ccw_hull.size(); ++i) {
    const Point& a = ccw_hull[i];
    const Point& b = ccw_hull[(i + 1) % ccw_hull.size()];
    if (cross(a, b, p) < -tol) return false;
  }
  return true;
}

/// Convex combination of hull vertices that realizes the point of the hull
/// nearest to `p`. Weights refer to hull vertex positions.
struct HullProjection {
  double distance = 0.0;
  Point closest;
  std::vector<std::pair<std::size_t, double>> weights;  // (hull vertex, weight)
};

inline HullProjection project_to_hull(const Point& p, const Hull& h) {
  HullProjection out;
  if (h.vertices.empty()) throw std::invalid_argument("project_to_hull: empty hull");
  if (h.vertices.size() == 1) {
    out.distance = std::abs(p - h.vertices[0]);
    out.closest = h.vertices[0];
    out.weights = {{0, 1.0}};
    return out;
  }
  if (h.vertices.size() > 2 && inside_convex(p, h.vertices, 1e-12)) {
    // p interior: fan triangulation from vertex 0, barycentric weights
    for (std::size_t i = 1; i + 1 < h.vertices.size(); ++i) {
      const Point& a = h.vertices[0];
      const Point& b = h.vertices[i];
      const Point& c = h.vertices[i + 1];
      double area = cross(a, b, c);
      if (std::abs(area) < 1e-30) continue;
      double wa = cross(p, b, c) / area;
      double wb = cross(a, p, c) / area;
      double wc = cross(a, b, p) / area;
      if (wa >= -1e-12 && wb >= -1e-12 && wc >= -1e-12) {
        out.distance = 0.0;
        out.closest = p;
        out.weights = {{0, std::max(wa, 0.0)},
                       {i, std::max(wb, 0.0)},
                       {i + 1, std::max(wc, 0.0)}};
        return out;
      }
    }
    // fall through to the boundary search (p numerically on an edge)
  }
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  double best_s = 0.0;
  std::size_t n = h.vertices.size();
  std::size_t edges = (n == 2) ? 1 : n;
  for (std::size_t i = 0; i < edges; ++i) {
    double s;
    double d = point_segment_distance(p, h.vertices[i], h.vertices[(i + 1) % n], s);
    if (d < best) {
      best = d;
      best_i = i;
      best_s = s;
    }
  }
  out.distance = best;
  std::size_t j = (best_i + 1) % n;
  Point a = h.vertices[best_i];
  Point b = h.vertices[j];
  out.closest = a + best_s * (b - a);
  out.weights = {{best_i, 1.0 - best_s}, {j, best_s}};
  return out;
}

inline double polygon_area(const std::vector<Point>& ccw) {
  double area = 0.0;
  for (std::size_t i = 0; i < ccw.size(); ++i) {
    const Point& a = ccw[i];
    const Point& b = ccw[(i + 1) % ccw.size()];
    area += a.real() * b.imag() - b.real() * a.imag();
  }
  return area / 2.0;
}

/// Distance from `p` to the filled hull (0 when inside).
inline double distance_to_hull(const Point& p, const Hull& h) {
  if (h.vertices.size() >= 3 && inside_convex(p, h.vertices)) return 0.0;
  return project_to_hull(p, h).distance;
}

}  // namespace geom

}  // namespace pncert

#endif  // PNCERT_GEOMETRY_HPP
