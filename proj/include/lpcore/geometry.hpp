// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace lpcore {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Rotated rectangle (cx, cy, w, h, theta). theta is the angle of the w side
/// to the horizontal, in radians. Canonical boxes keep theta in [-pi/4, pi/4),
/// which makes w the side closest to horizontal.
struct RotatedBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
  double theta = 0.0;

  double area() const noexcept { return w * h; }

  friend bool operator==(const RotatedBox&, const RotatedBox&) = default;
};

/// Four vertices in annotation order.
using Quad = std::array<Point, 4>;

struct ScoredBox {
  RotatedBox box;
  double score = 0.0;
};

enum class IouMode {
  kRotated,
  /// IoU of the axis-aligned hulls of both boxes.
  kAxisAlignedHull,
};

/// Quads whose absolute area falls below this (px^2) are rejected.
inline constexpr double kDegenerateAreaEpsilon = 1e-6;

/// Throws Error(kInvalidArgument) unless w, h > 0 and every field is finite.
void validate_box(const RotatedBox& box);

/// Maps the box onto its canonical representation: same rectangle, theta
/// reduced into [-pi/4, pi/4), swapping w and h on odd quarter turns.
RotatedBox normalize_box(RotatedBox box);

/// Minimum-area enclosing rotated rectangle of the four vertices (rotating
/// calipers over the convex hull). Throws Error(kDegenerateQuad) when the
/// quad is self-intersecting, non-finite, or its area is below
/// kDegenerateAreaEpsilon.
RotatedBox quad_to_rbox(const Quad& quad);

/// Corners counter-clockwise (y up), starting from box-local (-w/2, -h/2).
Quad rbox_to_quad(const RotatedBox& box);

/// Signed shoelace area; positive for counter-clockwise polygons.
double polygon_area(std::span<const Point> polygon);

/// Sutherland-Hodgman clipping of `subject` against the convex,
/// counter-clockwise polygon `clip`.
std::vector<Point> clip_convex_polygon(std::span<const Point> subject,
                                       std::span<const Point> clip);

/// Intersection area of two rotated boxes.
double rotated_intersection_area(const RotatedBox& a, const RotatedBox& b);

/// area(a & b) / area(a | b) in [0, 1]. Symmetric bit-for-bit in its
/// arguments; boxes that only touch along an edge or corner yield 0.
double rotated_iou(const RotatedBox& a, const RotatedBox& b);

/// IoU of the axis-aligned bounding rectangles of both boxes.
double axis_aligned_hull_iou(const RotatedBox& a, const RotatedBox& b);

double box_iou(const RotatedBox& a, const RotatedBox& b, IouMode mode);

/// Greedy suppression by descending score, ties kept in input order. A box
/// is dropped when its IoU with an already-kept box exceeds iou_threshold.
/// Returns indices into `boxes` in output order.
std::vector<std::size_t> rotated_nms_indices(std::span<const ScoredBox> boxes,
                                             double iou_threshold);

std::vector<ScoredBox> rotated_nms(std::span<const ScoredBox> boxes, double iou_threshold);

}  // namespace lpcore
