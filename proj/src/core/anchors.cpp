// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#include "lpcore/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lpcore/error.hpp"
#include "lpcore/parallel.hpp"

namespace lpcore {

namespace {

double checked_tan(double theta) {
  if (!(std::abs(theta) < std::numbers::pi / 2.0)) {
    throw Error(ErrorCode::kAngleOutOfRange,
                "angle " + std::to_string(theta) + " outside (-pi/2, pi/2)");
  }
  const double t = std::tan(theta);
  if (!std::isfinite(t)) throw Error(ErrorCode::kAngleOutOfRange, "tan overflow");
  return t;
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kInvalidArgument, std::string("non-finite ") + what);
  }
}

}  // namespace

std::size_t Assignment::count(AnchorLabel label) const {
  return static_cast<std::size_t>(std::count_if(
      matches.begin(), matches.end(), [&](const AnchorMatch& m) { return m.label == label; }));
}

AnchorGrid generate_anchors(int grid_h, int grid_w, int stride, double base_w, double base_h) {
  if (grid_h <= 0 || grid_w <= 0 || stride <= 0 || !(base_w > 0.0) || !(base_h > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "anchor grid arguments must be positive");
  }
  AnchorGrid grid{stride, base_w, base_h, grid_h, grid_w, {}};
  grid.anchors.reserve(static_cast<std::size_t>(grid_h) * static_cast<std::size_t>(grid_w));
  for (int i = 0; i < grid_h; ++i) {
    for (int j = 0; j < grid_w; ++j) {
      grid.anchors.push_back({(j + 0.5) * stride, (i + 0.5) * stride, base_w, base_h, 0.0});
    }
  }
  return grid;
}

Assignment assign_targets(const AnchorGrid& grid, std::span<const RotatedBox> gts,
                          double pos_iou, double neg_iou) {
  if (!(pos_iou > neg_iou) || neg_iou < 0.0 || pos_iou > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 <= neg_iou < pos_iou <= 1");
  }
  const std::size_t n_anchors = grid.anchors.size();
  const std::size_t n_gts = gts.size();
  Assignment out;
  out.pos_iou = pos_iou;
  out.neg_iou = neg_iou;
  out.matches.assign(n_anchors, AnchorMatch{});
  if (n_gts == 0) return out;

  std::vector<double> ious(n_anchors * n_gts, 0.0);
  parallel_for(n_anchors, [&](std::size_t a) {
    for (std::size_t g = 0; g < n_gts; ++g) {
      ious[a * n_gts + g] = rotated_iou(grid.anchors[a], gts[g]);
    }
  });

  for (std::size_t a = 0; a < n_anchors; ++a) {
    AnchorMatch& m = out.matches[a];
    int best_gt = -1;
    double best = 0.0;
    for (std::size_t g = 0; g < n_gts; ++g) {
      if (ious[a * n_gts + g] > best) {
        best = ious[a * n_gts + g];
        best_gt = static_cast<int>(g);
      }
    }
    m.iou = best;
    if (best >= pos_iou) {
      m.label = AnchorLabel::kPositive;
      m.gt_index = best_gt;
    } else if (best < neg_iou) {
      m.label = AnchorLabel::kNegative;
    } else {
      m.label = AnchorLabel::kIgnore;
    }
  }

  std::vector<std::size_t> positives_per_gt(n_gts, 0);
  for (const AnchorMatch& m : out.matches) {
    if (m.label == AnchorLabel::kPositive) ++positives_per_gt[static_cast<std::size_t>(m.gt_index)];
  }

  for (std::size_t g = 0; g < n_gts; ++g) {
    if (positives_per_gt[g] > 0) continue;
    std::size_t free_pick = n_anchors;
    std::size_t shared_pick = n_anchors;
    double free_iou = 0.0;
    double shared_iou = 0.0;
    for (std::size_t a = 0; a < n_anchors; ++a) {
      const double iou = ious[a * n_gts + g];
      if (!(iou > 0.0)) continue;
      const AnchorMatch& m = out.matches[a];
      if (m.label != AnchorLabel::kPositive) {
        if (iou > free_iou) {
          free_iou = iou;
          free_pick = a;
        }
      } else if (positives_per_gt[static_cast<std::size_t>(m.gt_index)] > 1 && iou > shared_iou) {
        shared_iou = iou;
        shared_pick = a;
      }
    }
    const std::size_t pick = free_pick < n_anchors ? free_pick : shared_pick;
    if (pick == n_anchors) continue;
    AnchorMatch& m = out.matches[pick];
    if (m.label == AnchorLabel::kPositive) --positives_per_gt[static_cast<std::size_t>(m.gt_index)];
    m.label = AnchorLabel::kPositive;
    m.gt_index = static_cast<int>(g);
    m.iou = ious[pick * n_gts + g];
    m.forced = true;
    ++positives_per_gt[g];
  }
  return out;
}

BoxDelta encode_delta(const RotatedBox& reference, const RotatedBox& target) {
  validate_box(reference);
  validate_box(target);
  const RotatedBox& b = reference;
  const RotatedBox& g = target;
  return {(g.cx - b.cx) / b.w, (g.cy - b.cy) / b.h, std::log(g.w / b.w), std::log(g.h / b.h),
          checked_tan(g.theta) - checked_tan(b.theta)};
}

RotatedBox decode_delta(const RotatedBox& reference, const BoxDelta& delta) {
  validate_box(reference);
  check_finite(delta.dx, "dx");
  check_finite(delta.dy, "dy");
  check_finite(delta.dw, "dw");
  check_finite(delta.dh, "dh");
  check_finite(delta.dtheta, "dtheta");
  const RotatedBox& b = reference;
  RotatedBox g{b.cx + delta.dx * b.w, b.cy + delta.dy * b.h, b.w * std::exp(delta.dw),
               b.h * std::exp(delta.dh), std::atan(checked_tan(b.theta) + delta.dtheta)};
  validate_box(g);
  return normalize_box(g);
}

RotatedBox refine_anchor(const RotatedBox& anchor, const ShapeDelta& delta) {
  validate_box(anchor);
  check_finite(delta.dw, "dw");
  check_finite(delta.dh, "dh");
  check_finite(delta.dtheta, "dtheta");
  RotatedBox out{anchor.cx, anchor.cy, anchor.w * std::exp(delta.dw),
                 anchor.h * std::exp(delta.dh),
                 std::atan(checked_tan(anchor.theta) + delta.dtheta)};
  validate_box(out);
  return normalize_box(out);
}

ShapeDelta encode_shape_delta(const RotatedBox& anchor, const RotatedBox& target) {
  const BoxDelta d = encode_delta(anchor, target);
  return {d.dw, d.dh, d.dtheta};
}

}  // namespace lpcore
