// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#include "lpcore/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <tuple>

#include "lpcore/error.hpp"

namespace lpcore {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kHalfPi = std::numbers::pi / 2.0;

// Intersections smaller than this fraction of the smaller box are treated as
// boundary contact.
constexpr double kMeasureZeroFraction = 1e-12;

// Convex intersection of two quads never exceeds 8 vertices.
constexpr std::size_t kMaxClipVertices = 16;

struct SmallPolygon {
  std::array<Point, kMaxClipVertices> pts;
  std::size_t size = 0;

  void push(Point p) {
    if (size < pts.size()) pts[size++] = p;
  }
};

inline double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline Point line_intersection(Point s, Point e, Point c1, Point c2) {
  const double dx = e.x - s.x;
  const double dy = e.y - s.y;
  const double cx = c2.x - c1.x;
  const double cy = c2.y - c1.y;
  const double denom = dx * cy - dy * cx;
  if (denom == 0.0) return e;
  const double t = ((c1.x - s.x) * cy - (c1.y - s.y) * cx) / denom;
  return {s.x + t * dx, s.y + t * dy};
}

template <typename Sink>
void clip_against_edge(const Point* in, std::size_t n, Point c1, Point c2, Sink&& out) {
  if (n == 0) return;
  Point s = in[n - 1];
  bool s_inside = cross(c1, c2, s) >= 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point e = in[i];
    const bool e_inside = cross(c1, c2, e) >= 0.0;
    if (e_inside) {
      if (!s_inside) out(line_intersection(s, e, c1, c2));
      out(e);
    } else if (s_inside) {
      out(line_intersection(s, e, c1, c2));
    }
    s = e;
    s_inside = e_inside;
  }
}

double shoelace(const Point* pts, std::size_t n) {
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = pts[i];
    const Point& q = pts[(i + 1) % n];
    twice += p.x * q.y - q.x * p.y;
  }
  return 0.5 * twice;
}

struct Extent {
  double min_x, max_x, min_y, max_y;
};

Extent hull_extent(const RotatedBox& b) {
  const double c = std::abs(std::cos(b.theta));
  const double s = std::abs(std::sin(b.theta));
  const double ex = 0.5 * (b.w * c + b.h * s);
  const double ey = 0.5 * (b.w * s + b.h * c);
  return {b.cx - ex, b.cx + ex, b.cy - ey, b.cy + ey};
}

bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  const double d1 = cross(q1, q2, p1);
  const double d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1);
  const double d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  auto on_segment = [](Point a, Point b, Point p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
  };
  return (d1 == 0 && on_segment(q1, q2, p1)) || (d2 == 0 && on_segment(q1, q2, p2)) ||
         (d3 == 0 && on_segment(p1, p2, q1)) || (d4 == 0 && on_segment(p1, p2, q2));
}

// Andrew's monotone chain; counter-clockwise, collinear points dropped.
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(),
            [](Point a, Point b) { return std::tie(a.x, a.y) < std::tie(b.x, b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

void validate_box(const RotatedBox& box) {
  if (!std::isfinite(box.cx) || !std::isfinite(box.cy) || !std::isfinite(box.w) ||
      !std::isfinite(box.h) || !std::isfinite(box.theta)) {
    throw Error(ErrorCode::kInvalidArgument, "rotated box has non-finite fields");
  }
  if (!(box.w > 0.0) || !(box.h > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rotated box needs positive width and height");
  }
}

RotatedBox normalize_box(RotatedBox box) {
  if (box.theta >= -kQuarterPi && box.theta < kQuarterPi) return box;
  double turns = std::floor((box.theta + kQuarterPi) / kHalfPi);
  double theta = box.theta - turns * kHalfPi;
  if (theta >= kQuarterPi) {
    theta -= kHalfPi;
    turns += 1.0;
  } else if (theta < -kQuarterPi) {
    theta += kHalfPi;
    turns -= 1.0;
  }
  if (std::fmod(std::abs(turns), 2.0) == 1.0) std::swap(box.w, box.h);
  box.theta = theta;
  return box;
}

RotatedBox quad_to_rbox(const Quad& quad) {
  for (const Point& p : quad) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorCode::kDegenerateQuad, "quad has non-finite vertices");
    }
  }
  const double area = std::abs(polygon_area(quad));
  if (!(area >= kDegenerateAreaEpsilon)) {
    throw Error(ErrorCode::kDegenerateQuad, "quad area below degeneracy epsilon");
  }
  if (segments_intersect(quad[0], quad[1], quad[2], quad[3]) ||
      segments_intersect(quad[1], quad[2], quad[3], quad[0])) {
    throw Error(ErrorCode::kDegenerateQuad, "quad is self-intersecting");
  }

  const std::vector<Point> hull = convex_hull({quad.begin(), quad.end()});
  double best_area = std::numeric_limits<double>::infinity();
  RotatedBox best;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point a = hull[i];
    const Point b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len == 0.0) continue;
    const double ux = (b.x - a.x) / len;
    const double uy = (b.y - a.y) / len;
    double min_u = std::numeric_limits<double>::infinity();
    double max_u = -min_u;
    double min_v = min_u;
    double max_v = -min_u;
    for (const Point& p : hull) {
      const double pu = p.x * ux + p.y * uy;
      const double pv = -p.x * uy + p.y * ux;
      min_u = std::min(min_u, pu);
      max_u = std::max(max_u, pu);
      min_v = std::min(min_v, pv);
      max_v = std::max(max_v, pv);
    }
    const double rect_area = (max_u - min_u) * (max_v - min_v);
    if (rect_area < best_area) {
      best_area = rect_area;
      const double mu = 0.5 * (min_u + max_u);
      const double mv = 0.5 * (min_v + max_v);
      best.cx = mu * ux - mv * uy;
      best.cy = mu * uy + mv * ux;
      best.w = max_u - min_u;
      best.h = max_v - min_v;
      best.theta = std::atan2(uy, ux);
    }
  }
  return normalize_box(best);
}

Quad rbox_to_quad(const RotatedBox& box) {
  const double c = std::cos(box.theta);
  const double s = std::sin(box.theta);
  const double hw = 0.5 * box.w;
  const double hh = 0.5 * box.h;
  constexpr std::array<std::array<double, 2>, 4> kSigns = {{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
  Quad quad;
  for (std::size_t i = 0; i < 4; ++i) {
    const double lx = kSigns[i][0] * hw;
    const double ly = kSigns[i][1] * hh;
    quad[i] = {box.cx + lx * c - ly * s, box.cy + lx * s + ly * c};
  }
  return quad;
}

double polygon_area(std::span<const Point> polygon) {
  return shoelace(polygon.data(), polygon.size());
}

std::vector<Point> clip_convex_polygon(std::span<const Point> subject,
                                       std::span<const Point> clip) {
  std::vector<Point> current(subject.begin(), subject.end());
  std::vector<Point> next;
  for (std::size_t i = 0; i < clip.size() && !current.empty(); ++i) {
    next.clear();
    clip_against_edge(current.data(), current.size(), clip[i], clip[(i + 1) % clip.size()],
                      [&](Point p) { next.push_back(p); });
    current.swap(next);
  }
  return current;
}

double rotated_intersection_area(const RotatedBox& a, const RotatedBox& b) {
  const Extent ea = hull_extent(a);
  const Extent eb = hull_extent(b);
  if (ea.max_x <= eb.min_x || eb.max_x <= ea.min_x || ea.max_y <= eb.min_y ||
      eb.max_y <= ea.min_y) {
    return 0.0;
  }
  const Quad qa = rbox_to_quad(a);
  const Quad qb = rbox_to_quad(b);
  SmallPolygon poly;
  for (const Point& p : qa) poly.push(p);
  SmallPolygon next;
  for (std::size_t i = 0; i < 4 && poly.size > 0; ++i) {
    next.size = 0;
    clip_against_edge(poly.pts.data(), poly.size, qb[i], qb[(i + 1) % 4],
                      [&](Point p) { next.push(p); });
    poly = next;
  }
  return std::max(0.0, shoelace(poly.pts.data(), poly.size));
}

double rotated_iou(const RotatedBox& a, const RotatedBox& b) {
  if (a == b) return 1.0;
  // Fixed argument order keeps the result bit-identical under swapping.
  const bool ordered = std::tie(a.cx, a.cy, a.w, a.h, a.theta) <
                       std::tie(b.cx, b.cy, b.w, b.h, b.theta);
  const RotatedBox& first = ordered ? a : b;
  const RotatedBox& second = ordered ? b : a;
  const double inter = rotated_intersection_area(first, second);
  const double area_a = first.area();
  const double area_b = second.area();
  if (inter <= kMeasureZeroFraction * std::min(area_a, area_b)) return 0.0;
  const double uni = area_a + area_b - inter;
  if (!(uni > 0.0)) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double axis_aligned_hull_iou(const RotatedBox& a, const RotatedBox& b) {
  const Extent ea = hull_extent(a);
  const Extent eb = hull_extent(b);
  const double iw = std::min(ea.max_x, eb.max_x) - std::max(ea.min_x, eb.min_x);
  const double ih = std::min(ea.max_y, eb.max_y) - std::max(ea.min_y, eb.min_y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double area_a = (ea.max_x - ea.min_x) * (ea.max_y - ea.min_y);
  const double area_b = (eb.max_x - eb.min_x) * (eb.max_y - eb.min_y);
  return std::clamp(inter / (area_a + area_b - inter), 0.0, 1.0);
}

double box_iou(const RotatedBox& a, const RotatedBox& b, IouMode mode) {
  return mode == IouMode::kRotated ? rotated_iou(a, b) : axis_aligned_hull_iou(a, b);
}

std::vector<std::size_t> rotated_nms_indices(std::span<const ScoredBox> boxes,
                                             double iou_threshold) {
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "NMS threshold must lie in [0, 1]");
  }
  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return boxes[i].score > boxes[j].score;
  });
  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    bool suppressed = false;
    for (std::size_t k : kept) {
      if (rotated_iou(boxes[idx].box, boxes[k].box) > iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(idx);
  }
  return kept;
}

std::vector<ScoredBox> rotated_nms(std::span<const ScoredBox> boxes, double iou_threshold) {
  std::vector<ScoredBox> out;
  for (std::size_t idx : rotated_nms_indices(boxes, iou_threshold)) out.push_back(boxes[idx]);
  return out;
}

}  // namespace lpcore
