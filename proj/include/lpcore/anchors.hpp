// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lpcore/geometry.hpp"

namespace lpcore {

/// Regression offsets between a reference box b and a target g:
/// dx = (gx - bx) / bw, dy = (gy - by) / bh, dw = log(gw / bw),
/// dh = log(gh / bh), dtheta = tan(g.theta) - tan(b.theta).
struct BoxDelta {
  double dx = 0.0;
  double dy = 0.0;
  double dw = 0.0;
  double dh = 0.0;
  double dtheta = 0.0;

  friend bool operator==(const BoxDelta&, const BoxDelta&) = default;
};

/// Shape-only offsets used to refine an anchor without moving its center.
struct ShapeDelta {
  double dw = 0.0;
  double dh = 0.0;
  double dtheta = 0.0;

  friend bool operator==(const ShapeDelta&, const ShapeDelta&) = default;
};

struct AnchorConfig {
  int stride = 8;
  double base_w = 48.0;
  double base_h = 16.0;
};

/// One axis-aligned anchor per feature-map cell, row-major.
struct AnchorGrid {
  int stride = 0;
  double base_w = 0.0;
  double base_h = 0.0;
  int grid_h = 0;
  int grid_w = 0;
  std::vector<RotatedBox> anchors;
};

enum class AnchorLabel { kNegative, kIgnore, kPositive };

struct AnchorMatch {
  AnchorLabel label = AnchorLabel::kNegative;
  /// Ground-truth index for positives, -1 otherwise.
  int gt_index = -1;
  /// Best IoU against any ground truth (0 when there are none).
  double iou = 0.0;
  /// True when the anchor was claimed by the best-anchor fallback.
  bool forced = false;
};

inline constexpr double kDefaultPositiveIou = 0.5;
inline constexpr double kDefaultNegativeIou = 0.4;

struct Assignment {
  std::vector<AnchorMatch> matches;
  double pos_iou = kDefaultPositiveIou;
  double neg_iou = kDefaultNegativeIou;

  std::size_t count(AnchorLabel label) const;
};

AnchorGrid generate_anchors(int grid_h, int grid_w, int stride, double base_w, double base_h);

/// Labels every anchor by its best ground-truth IoU: positive at or above
/// pos_iou, negative below neg_iou, ignored in between. A ground truth left
/// without any positive then claims its best anchor with nonzero IoU that is
/// not already positive; if every overlapping anchor is taken, it claims one
/// whose current owner keeps another positive.
Assignment assign_targets(const AnchorGrid& grid, std::span<const RotatedBox> gts,
                          double pos_iou = kDefaultPositiveIou,
                          double neg_iou = kDefaultNegativeIou);

/// Throws Error(kAngleOutOfRange) if either angle lies outside (-pi/2, pi/2).
BoxDelta encode_delta(const RotatedBox& reference, const RotatedBox& target);

/// Algebraic inverse of encode_delta; the result is normalized.
RotatedBox decode_delta(const RotatedBox& reference, const BoxDelta& delta);

/// Applies shape offsets only. The center is copied through untouched.
RotatedBox refine_anchor(const RotatedBox& anchor, const ShapeDelta& delta);

ShapeDelta encode_shape_delta(const RotatedBox& anchor, const RotatedBox& target);

}  // namespace lpcore
