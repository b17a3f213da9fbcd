// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lpcore/error.hpp"
#include "lpcore/geometry.hpp"
#include "lpcore/oracles.hpp"

namespace lpcore {
namespace {

constexpr double kPi = std::numbers::pi;

RotatedBox random_box(std::mt19937_64& rng) {
  return {oracle::uniform(rng, -20.0, 20.0), oracle::uniform(rng, -20.0, 20.0),
          oracle::uniform(rng, 0.5, 15.0), oracle::uniform(rng, 0.5, 15.0),
          oracle::uniform(rng, -kPi / 4, kPi / 4)};
}

void expect_box_near(const RotatedBox& a, const RotatedBox& b, double tol) {
  EXPECT_NEAR(a.cx, b.cx, tol);
  EXPECT_NEAR(a.cy, b.cy, tol);
  EXPECT_NEAR(a.w, b.w, tol);
  EXPECT_NEAR(a.h, b.h, tol);
  EXPECT_NEAR(a.theta, b.theta, tol);
}

TEST(QuadToRbox, AxisAlignedRectangle) {
  const Quad q{{{0, 0}, {4, 0}, {4, 2}, {0, 2}}};
  expect_box_near(quad_to_rbox(q), {2, 1, 4, 2, 0}, 1e-12);
}

TEST(QuadToRbox, RotatedSquareMatchesCaliperScan) {
  const RotatedBox truth{0, 0, 2, 2, kPi / 6};
  const Quad q = rbox_to_quad(truth);
  const RotatedBox got = quad_to_rbox(q);
  expect_box_near(got, truth, 1e-9);
  const oracle::MinAreaRect scan = oracle::min_area_rect_scan(q);
  EXPECT_NEAR(got.area(), scan.area, 1e-9);
}

TEST(QuadToRbox, ZeroAreaIsDegenerate) {
  const Quad q{{{0, 0}, {1, 0}, {0, 0}, {1, 0}}};
  try {
    quad_to_rbox(q);
    FAIL() << "expected DegenerateQuad";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateQuad);
  }
}

TEST(QuadToRbox, SelfIntersectingIsDegenerate) {
  const Quad bowtie{{{0, 0}, {4, 2}, {4, 0}, {0, 2}}};
  EXPECT_THROW(quad_to_rbox(bowtie), Error);
}

TEST(QuadToRbox, TinyAreaIsDegenerate) {
  const Quad sliver{{{0, 0}, {1e-4, 0}, {1e-4, 1e-3}, {0, 1e-3}}};
  EXPECT_THROW(quad_to_rbox(sliver), Error);
}

TEST(QuadToRbox, GeneralQuadMatchesScanOracle) {
  std::mt19937_64 rng(21);
  int checked = 0;
  while (checked < 200) {
    Quad q;
    for (Point& p : q) p = {oracle::uniform(rng, -10, 10), oracle::uniform(rng, -10, 10)};
    RotatedBox box;
    try {
      box = quad_to_rbox(q);
    } catch (const Error&) {
      continue;
    }
    const oracle::MinAreaRect scan = oracle::min_area_rect_scan(q, 4000);
    EXPECT_NEAR(box.area(), scan.area, 1e-6 * std::max(1.0, scan.area));
    EXPECT_GE(box.theta, -kPi / 4);
    EXPECT_LT(box.theta, kPi / 4);
    ++checked;
  }
}

TEST(RboxToQuad, AxisAligned) {
  const Quad q = rbox_to_quad({2, 1, 4, 2, 0});
  const Quad want{{{0, 0}, {4, 0}, {4, 2}, {0, 2}}};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(q[i].x, want[i].x, 1e-12);
    EXPECT_NEAR(q[i].y, want[i].y, 1e-12);
  }
}

TEST(RboxToQuad, RotatedSquareCorners) {
  const Quad q = rbox_to_quad({0, 0, 2, 2, kPi / 4});
  const double r = std::sqrt(2.0);
  EXPECT_NEAR(q[0].x, 0, 1e-12);
  EXPECT_NEAR(q[0].y, -r, 1e-12);
  EXPECT_NEAR(q[1].x, r, 1e-12);
  EXPECT_NEAR(q[1].y, 0, 1e-12);
  EXPECT_NEAR(q[2].x, 0, 1e-12);
  EXPECT_NEAR(q[2].y, r, 1e-12);
  EXPECT_NEAR(q[3].x, -r, 1e-12);
  EXPECT_NEAR(q[3].y, 0, 1e-12);
  EXPECT_GT(polygon_area(q), 0.0);
}

TEST(RboxToQuad, RoundtripIsIdentity) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 2000; ++i) {
    const RotatedBox b = random_box(rng);
    expect_box_near(quad_to_rbox(rbox_to_quad(b)), b, 1e-9);
  }
}

TEST(NormalizeBox, QuarterTurnSwapsSides) {
  const RotatedBox n = normalize_box({1, 2, 10, 3, kPi / 2 + 0.1});
  expect_box_near(n, {1, 2, 3, 10, 0.1}, 1e-12);
  const RotatedBox m = normalize_box({1, 2, 10, 3, kPi + 0.1});
  expect_box_near(m, {1, 2, 10, 3, 0.1}, 1e-12);
  const RotatedBox edge = normalize_box({0, 0, 4, 2, kPi / 4});
  EXPECT_NEAR(edge.theta, -kPi / 4, 1e-12);
  EXPECT_DOUBLE_EQ(edge.w, 2);
}

TEST(ValidateBox, RejectsBadFields) {
  EXPECT_THROW(validate_box({0, 0, -1, 1, 0}), Error);
  EXPECT_THROW(validate_box({0, 0, 1, 0, 0}), Error);
  EXPECT_THROW(validate_box({NAN, 0, 1, 1, 0}), Error);
  EXPECT_NO_THROW(validate_box({0, 0, 1, 1, 0}));
}

TEST(RotatedIou, IdenticalBoxesGiveOne) {
  const RotatedBox b{3, 4, 5, 2, 0.3};
  EXPECT_DOUBLE_EQ(rotated_iou(b, b), 1.0);
}

TEST(RotatedIou, HalfShiftedUnitSquares) {
  EXPECT_NEAR(rotated_iou({0.5, 0.5, 1, 1, 0}, {1.0, 0.5, 1, 1, 0}), 1.0 / 3.0, 1e-12);
}

TEST(RotatedIou, SquareAgainstDiamond) {
  // Octagon of area 2(sqrt2 - 1) over union 2 - that area: exactly 1/sqrt2.
  const RotatedBox a{0, 0, 1, 1, 0};
  const RotatedBox b{0, 0, 1, 1, kPi / 4};
  const double iou = rotated_iou(a, b);
  EXPECT_NEAR(iou, 0.7071067811865476, 1e-12);
  EXPECT_NEAR(oracle::monte_carlo_iou(a, b, 600, 5), iou, 5e-3);
}

TEST(RotatedIou, TouchingBoxesGiveZero) {
  EXPECT_EQ(rotated_iou({0, 0, 2, 2, 0}, {2, 0, 2, 2, 0}), 0.0);
  EXPECT_EQ(rotated_iou({0, 0, 2, 2, 0}, {2, 2, 2, 2, 0}), 0.0);
  EXPECT_EQ(rotated_iou({0, 0, 2, 2, 0}, {10, 0, 2, 2, 0}), 0.0);
}

TEST(RotatedIou, ContainedBox) {
  EXPECT_NEAR(rotated_iou({0, 0, 4, 4, 0}, {0, 0, 2, 2, 0.2}), 0.25, 1e-12);
}

TEST(RotatedIou, SymmetricBitForBit) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 5000; ++i) {
    const RotatedBox a = random_box(rng);
    const RotatedBox b = random_box(rng);
    EXPECT_EQ(rotated_iou(a, b), rotated_iou(b, a));
  }
}

TEST(RotatedIou, InvariantUnderRigidMotion) {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 2000; ++i) {
    RotatedBox a = random_box(rng);
    RotatedBox b = random_box(rng);
    b.cx = a.cx + oracle::uniform(rng, -5, 5);
    b.cy = a.cy + oracle::uniform(rng, -5, 5);
    const double before = rotated_iou(a, b);
    const double phi = oracle::uniform(rng, -kPi, kPi);
    const double tx = oracle::uniform(rng, -100, 100);
    const double ty = oracle::uniform(rng, -100, 100);
    auto move = [&](RotatedBox box) {
      const double c = std::cos(phi), s = std::sin(phi);
      return normalize_box({c * box.cx - s * box.cy + tx, s * box.cx + c * box.cy + ty, box.w,
                            box.h, box.theta + phi});
    };
    EXPECT_NEAR(rotated_iou(move(a), move(b)), before, 1e-9);
  }
}

TEST(RotatedIou, BoundedInUnitInterval) {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 5000; ++i) {
    RotatedBox a = random_box(rng);
    RotatedBox b = random_box(rng);
    b.cx = a.cx + oracle::uniform(rng, -3, 3);
    const double iou = rotated_iou(a, b);
    EXPECT_GE(iou, 0.0);
    EXPECT_LE(iou, 1.0);
  }
}

TEST(RotatedIou, AgreesWithMonteCarloOnSmallSample) {
  std::mt19937_64 rng(26);
  for (int i = 0; i < 20; ++i) {
    const RotatedBox a = random_box(rng);
    RotatedBox b = random_box(rng);
    b.cx = a.cx + oracle::uniform(rng, -4, 4);
    b.cy = a.cy + oracle::uniform(rng, -4, 4);
    EXPECT_NEAR(rotated_iou(a, b), oracle::monte_carlo_iou(a, b, 500, i), 5e-3);
  }
}

TEST(AxisAlignedHullIou, UsesBoundingRectangles) {
  const RotatedBox a{0, 0, 2, 2, kPi / 4 - 1e-15};
  const double side = 2 * std::sqrt(2.0);
  EXPECT_NEAR(axis_aligned_hull_iou(a, {0, 0, side, side, 0}), 1.0, 1e-9);
  EXPECT_NEAR(box_iou({0.5, 0.5, 1, 1, 0}, {1.0, 0.5, 1, 1, 0}, IouMode::kAxisAlignedHull),
              1.0 / 3.0, 1e-12);
}

TEST(ClipConvexPolygon, SquareOverlap) {
  const std::vector<Point> a{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
  const std::vector<Point> b{{1, 1}, {3, 1}, {3, 3}, {1, 3}};
  EXPECT_NEAR(polygon_area(clip_convex_polygon(a, b)), 1.0, 1e-12);
}

TEST(RotatedNms, HighOverlapKeepsBest) {
  const RotatedBox a{0, 0, 10, 10, 0};
  RotatedBox b = a;
  b.cx = 10.0 / 19.0;  // (10 - d) / (10 + d) = 0.9
  ASSERT_NEAR(rotated_iou(a, b), 0.9, 1e-12);
  const std::vector<ScoredBox> boxes{{a, 0.9}, {b, 0.8}};
  EXPECT_EQ(rotated_nms_indices(boxes, 0.5), (std::vector<std::size_t>{0}));
}

TEST(RotatedNms, DisjointBoxesSurvive) {
  const std::vector<ScoredBox> boxes{{{0, 0, 1, 1, 0}, 0.3}, {{5, 5, 1, 1, 0}, 0.7}};
  EXPECT_EQ(rotated_nms_indices(boxes, 0.5), (std::vector<std::size_t>{1, 0}));
}

TEST(RotatedNms, ChainKeepsEnds) {
  // Width-8 boxes shifted by 2: neighbors overlap at 0.6, the ends at 1/3.
  const RotatedBox a{0, 0, 8, 2, 0};
  const RotatedBox b{2, 0, 8, 2, 0};
  const RotatedBox c{4, 0, 8, 2, 0};
  ASSERT_NEAR(rotated_iou(a, b), 0.6, 1e-12);
  ASSERT_NEAR(rotated_iou(b, c), 0.6, 1e-12);
  ASSERT_LT(rotated_iou(a, c), 0.5);
  const std::vector<ScoredBox> boxes{{a, 0.9}, {b, 0.8}, {c, 0.7}};
  EXPECT_EQ(rotated_nms_indices(boxes, 0.5), (std::vector<std::size_t>{0, 2}));
}

TEST(RotatedNms, TiesKeepInputOrder) {
  const std::vector<ScoredBox> boxes{{{0, 0, 1, 1, 0}, 0.5}, {{5, 0, 1, 1, 0}, 0.5},
                                     {{10, 0, 1, 1, 0}, 0.5}};
  EXPECT_EQ(rotated_nms_indices(boxes, 0.5), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(RotatedNms, KeptBoxesArePairwiseBelowThreshold) {
  std::mt19937_64 rng(27);
  for (int round = 0; round < 50; ++round) {
    std::vector<ScoredBox> boxes(40);
    for (ScoredBox& s : boxes) {
      s.box = random_box(rng);
      s.box.cx *= 0.3;
      s.box.cy *= 0.3;
      s.score = oracle::uniform(rng, 0, 1);
    }
    const double thr = oracle::uniform(rng, 0.1, 0.9);
    const std::vector<ScoredBox> kept = rotated_nms(boxes, thr);
    ASSERT_FALSE(kept.empty());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (i > 0) EXPECT_GE(kept[i - 1].score, kept[i].score);
      for (std::size_t j = i + 1; j < kept.size(); ++j) {
        EXPECT_LE(rotated_iou(kept[i].box, kept[j].box), thr);
      }
    }
  }
}

}  // namespace
}  // namespace lpcore
