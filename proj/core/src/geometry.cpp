#include "sfvem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sfvem {

double signed_area(std::span<const Vec2> poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * twice;
}

Vec2 area_centroid(std::span<const Vec2> poly) {
  double twice = 0.0;
  Vec2 acc = Vec2::Zero();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const double c = a.x() * b.y() - b.x() * a.y();
    twice += c;
    acc += c * (a + b);
  }
  if (twice == 0.0) {
    Vec2 mean = Vec2::Zero();
    for (const auto& p : poly) mean += p;
    return mean / static_cast<double>(std::max<std::size_t>(n, 1));
  }
  return acc / (3.0 * twice);
}

double diameter(std::span<const Vec2> poly) {
  double d = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j) d = std::max(d, (poly[i] - poly[j]).norm());
  return d;
}

namespace {

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segments_touch(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

}  // namespace

bool is_simple(std::span<const Vec2> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if ((poly[i] - poly[(i + 1) % n]).norm() == 0.0) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_touch(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

std::vector<HalfPlane> edge_half_planes(std::span<const Vec2> poly) {
  std::vector<HalfPlane> planes;
  planes.reserve(poly.size());
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2 d = poly[(i + 1) % n] - a;
    const Vec2 outward = Vec2(d.y(), -d.x()).normalized();
    planes.push_back({outward, outward.dot(a)});
  }
  return planes;
}

Polygon clip(std::span<const Vec2> convex, const HalfPlane& hp) {
  Polygon out;
  const std::size_t n = convex.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& cur = convex[i];
    const Vec2& nxt = convex[(i + 1) % n];
    const double sc = hp.normal.dot(cur) - hp.offset;
    const double sn = hp.normal.dot(nxt) - hp.offset;
    if (sc <= 0.0) out.push_back(cur);
    if ((sc < 0.0 && sn > 0.0) || (sc > 0.0 && sn < 0.0)) {
      const double t = sc / (sc - sn);
      out.push_back(cur + t * (nxt - cur));
    }
  }
  return out;
}

Polygon kernel_polygon(std::span<const Vec2> poly) {
  Vec2 lo = poly.front(), hi = poly.front();
  for (const auto& p : poly) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  Polygon region{lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())};
  for (const auto& hp : edge_half_planes(poly)) {
    region = clip(region, hp);
    if (region.size() < 3) return {};
  }
  if (signed_area(region) <= 0.0) return {};
  return region;
}

InscribedCircle chebyshev_center(std::span<const HalfPlane> planes) {
  // Maximise r subject to o_i . x + r <= c_i. The optimum is attained at a
  // vertex defined by three active constraints; enumerate them.
  const std::size_t m = planes.size();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<Eigen::Vector3d> candidates;
  double scale = 0.0;
  for (const auto& hp : planes) scale = std::max(scale, std::abs(hp.offset));
  scale = std::max(scale, 1.0);
  const double feas_tol = 1e-12 * scale;

  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t l = j + 1; l < m; ++l) {
        Eigen::Matrix3d a;
        Eigen::Vector3d rhs;
        const HalfPlane* hs[3] = {&planes[i], &planes[j], &planes[l]};
        for (int r = 0; r < 3; ++r) {
          a(r, 0) = hs[r]->normal.x();
          a(r, 1) = hs[r]->normal.y();
          a(r, 2) = 1.0;
          rhs(r) = hs[r]->offset;
        }
        if (std::abs(a.determinant()) < 1e-12) continue;
        const Eigen::Vector3d x = a.partialPivLu().solve(rhs);
        bool feasible = true;
        for (const auto& hp : planes) {
          if (hp.normal.dot(x.head<2>()) + x(2) > hp.offset + feas_tol) {
            feasible = false;
            break;
          }
        }
        if (!feasible) continue;
        if (x(2) > best + feas_tol) {
          best = x(2);
          candidates.clear();
          candidates.push_back(x);
        } else if (x(2) >= best - feas_tol) {
          candidates.push_back(x);
        }
      }

  InscribedCircle out;
  if (candidates.empty()) {
    out.radius = -1.0;
    return out;
  }
  // Deduplicate before averaging so repeated active sets do not bias the mean.
  std::vector<Eigen::Vector3d> unique;
  for (const auto& c : candidates) {
    const bool seen = std::any_of(unique.begin(), unique.end(), [&](const Eigen::Vector3d& u) {
      return (u.head<2>() - c.head<2>()).norm() <= feas_tol;
    });
    if (!seen) unique.push_back(c);
  }
  Vec2 center = Vec2::Zero();
  double radius = std::numeric_limits<double>::infinity();
  for (const auto& u : unique) {
    center += u.head<2>();
    radius = std::min(radius, u(2));
  }
  out.center = center / static_cast<double>(unique.size());
  out.radius = radius;
  return out;
}

bool contains(std::span<const Vec2> poly, const Vec2& p, double tol) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 > 0.0) {
      const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
      if ((a + t * ab - p).norm() <= tol) return true;
    }
    if (((a.y() > p.y()) != (b.y() > p.y())) &&
        (p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x()))
      inside = !inside;
  }
  return inside;
}

}  // namespace sfvem
