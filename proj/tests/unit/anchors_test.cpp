// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lpcore/anchors.hpp"
#include "lpcore/error.hpp"
#include "lpcore/geometry.hpp"
#include "lpcore/oracles.hpp"

namespace lpcore {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(GenerateAnchors, TwoByTwoCenters) {
  const AnchorGrid g = generate_anchors(2, 2, 8, 16, 8);
  ASSERT_EQ(g.anchors.size(), 4u);
  const double want[4][2] = {{4, 4}, {12, 4}, {4, 12}, {12, 12}};
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(g.anchors[i].cx, want[i][0]);
    EXPECT_EQ(g.anchors[i].cy, want[i][1]);
    EXPECT_EQ(g.anchors[i].w, 16);
    EXPECT_EQ(g.anchors[i].h, 8);
    EXPECT_EQ(g.anchors[i].theta, 0);
  }
}

TEST(GenerateAnchors, SingleCell) {
  const AnchorGrid g = generate_anchors(1, 1, 16, 30, 10);
  ASSERT_EQ(g.anchors.size(), 1u);
  EXPECT_EQ(g.anchors[0], (RotatedBox{8, 8, 30, 10, 0}));
}

TEST(GenerateAnchors, RowMajorOrder) {
  const AnchorGrid g = generate_anchors(3, 5, 8, 48, 16);
  ASSERT_EQ(g.anchors.size(), 15u);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 5; ++j) {
      const RotatedBox& a = g.anchors[static_cast<std::size_t>(i * 5 + j)];
      EXPECT_EQ(a.cx, (j + 0.5) * 8);
      EXPECT_EQ(a.cy, (i + 0.5) * 8);
    }
  }
}

TEST(GenerateAnchors, RejectsNonPositive) {
  EXPECT_THROW(generate_anchors(0, 1, 8, 1, 1), Error);
  EXPECT_THROW(generate_anchors(1, 1, 8, -1, 1), Error);
}

TEST(AssignTargets, IdenticalAnchorIsPositive) {
  const AnchorGrid g = generate_anchors(2, 2, 8, 16, 8);
  const std::vector<RotatedBox> gts{g.anchors[3]};
  const Assignment a = assign_targets(g, gts);
  EXPECT_EQ(a.matches[3].label, AnchorLabel::kPositive);
  EXPECT_EQ(a.matches[3].gt_index, 0);
  EXPECT_DOUBLE_EQ(a.matches[3].iou, 1.0);
  EXPECT_FALSE(a.matches[3].forced);
}

TEST(AssignTargets, NoGroundTruthAllNegative) {
  const AnchorGrid g = generate_anchors(3, 4, 8, 48, 16);
  const Assignment a = assign_targets(g, {});
  EXPECT_EQ(a.count(AnchorLabel::kNegative), 12u);
}

TEST(AssignTargets, IouBetweenThresholdsIsIgnored) {
  // Width w at stride 10: neighbors overlap at (w - 10) / (w + 10) = 0.45.
  const double w = 10.0 * 1.45 / 0.55;
  const AnchorGrid g = generate_anchors(1, 3, 10, w, 10);
  const std::vector<RotatedBox> gts{g.anchors[1]};
  ASSERT_NEAR(rotated_iou(g.anchors[0], gts[0]), 0.45, 1e-12);
  ASSERT_NEAR(oracle::monte_carlo_iou(g.anchors[0], gts[0], 400, 3), 0.45, 5e-3);
  const Assignment a = assign_targets(g, gts, 0.5, 0.4);
  EXPECT_EQ(a.matches[0].label, AnchorLabel::kIgnore);
  EXPECT_EQ(a.matches[1].label, AnchorLabel::kPositive);
  EXPECT_EQ(a.matches[2].label, AnchorLabel::kIgnore);
  EXPECT_NEAR(a.matches[0].iou, 0.45, 1e-12);
}

TEST(AssignTargets, ForceMatchesSmallGroundTruth) {
  const AnchorGrid g = generate_anchors(4, 4, 8, 48, 16);
  const std::vector<RotatedBox> gts{{13, 13, 4, 2, 0.3}};
  const Assignment a = assign_targets(g, gts);
  ASSERT_EQ(a.count(AnchorLabel::kPositive), 1u);
  for (const AnchorMatch& m : a.matches) {
    if (m.label == AnchorLabel::kPositive) {
      EXPECT_TRUE(m.forced);
      EXPECT_EQ(m.gt_index, 0);
      EXPECT_GT(m.iou, 0.0);
    }
  }
}

TEST(AssignTargets, RejectsBadThresholds) {
  const AnchorGrid g = generate_anchors(1, 1, 8, 8, 8);
  EXPECT_THROW(assign_targets(g, {}, 0.4, 0.5), Error);
}

TEST(AssignTargets, EveryOverlappingGtGetsAPositive) {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 100; ++round) {
    const AnchorGrid g = generate_anchors(6, 8, 8, 48, 16);
    std::vector<RotatedBox> gts;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < n; ++k) {
      gts.push_back({oracle::uniform(rng, 0, 64), oracle::uniform(rng, 0, 48),
                     oracle::uniform(rng, 4, 60), oracle::uniform(rng, 2, 20),
                     oracle::uniform(rng, -kPi / 4, kPi / 4)});
    }
    const Assignment a = assign_targets(g, gts);
    ASSERT_EQ(a.matches.size(), g.anchors.size());
    std::vector<int> owned(gts.size(), 0);
    for (std::size_t i = 0; i < a.matches.size(); ++i) {
      const AnchorMatch& m = a.matches[i];
      if (m.label == AnchorLabel::kPositive) {
        ASSERT_GE(m.gt_index, 0);
        ++owned[static_cast<std::size_t>(m.gt_index)];
        EXPECT_GT(rotated_iou(g.anchors[i], gts[static_cast<std::size_t>(m.gt_index)]), 0.0);
        if (!m.forced) EXPECT_GE(m.iou, a.pos_iou);
      } else {
        EXPECT_EQ(m.gt_index, -1);
        if (m.label == AnchorLabel::kNegative) EXPECT_LT(m.iou, a.neg_iou);
      }
    }
    for (std::size_t k = 0; k < gts.size(); ++k) {
      double best = 0.0;
      for (const RotatedBox& anchor : g.anchors) best = std::max(best, rotated_iou(anchor, gts[k]));
      if (best > 0.0) EXPECT_GE(owned[k], 1) << "gt " << k << " round " << round;
    }
  }
}

TEST(EncodeDelta, IdentityIsZero) {
  const RotatedBox b{3, 4, 10, 5, 0.2};
  EXPECT_EQ(encode_delta(b, b), (BoxDelta{0, 0, 0, 0, 0}));
}

TEST(EncodeDelta, CenterShift) {
  const BoxDelta d = encode_delta({0, 0, 2, 2, 0}, {1, 1, 2, 2, 0});
  EXPECT_EQ(d, (BoxDelta{0.5, 0.5, 0, 0, 0}));
}

TEST(EncodeDelta, AngleUsesTangent) {
  const BoxDelta d = encode_delta({0, 0, 2, 2, 0}, {0, 0, 2, 2, kPi / 6});
  EXPECT_NEAR(d.dtheta, 0.5773502691896257, 1e-15);
  EXPECT_EQ(d.dx, 0);
  EXPECT_EQ(d.dw, 0);
}

TEST(EncodeDelta, RejectsRightAngle) {
  try {
    encode_delta({0, 0, 2, 2, 0}, {0, 0, 2, 2, kPi / 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAngleOutOfRange);
  }
}

TEST(DecodeDelta, ZeroDeltaReturnsReference) {
  const RotatedBox b{3, 4, 10, 5, 0.2};
  const RotatedBox out = decode_delta(b, {});
  EXPECT_DOUBLE_EQ(out.cx, b.cx);
  EXPECT_DOUBLE_EQ(out.w, b.w);
  EXPECT_NEAR(out.theta, b.theta, 1e-15);
}

TEST(DecodeDelta, InvertsCenterShift) {
  EXPECT_EQ(decode_delta({0, 0, 2, 2, 0}, {0.5, 0.5, 0, 0, 0}), (RotatedBox{1, 1, 2, 2, 0}));
}

TEST(DecodeDelta, RoundtripOnRandomPairs) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 1000; ++i) {
    auto draw = [&] {
      return RotatedBox{oracle::uniform(rng, -300, 300), oracle::uniform(rng, -300, 300),
                        oracle::uniform(rng, 1, 150), oracle::uniform(rng, 1, 150),
                        oracle::uniform(rng, -kPi / 4, kPi / 4)};
    };
    const RotatedBox b = draw();
    const RotatedBox g = draw();
    const RotatedBox back = decode_delta(b, encode_delta(b, g));
    EXPECT_NEAR(back.cx, g.cx, 1e-9);
    EXPECT_NEAR(back.cy, g.cy, 1e-9);
    EXPECT_NEAR(back.w, g.w, 1e-9);
    EXPECT_NEAR(back.h, g.h, 1e-9);
    EXPECT_NEAR(back.theta, g.theta, 1e-9);
  }
}

TEST(RefineAnchor, ZeroDeltaUnchanged) {
  const RotatedBox b{4, 4, 16, 8, 0};
  EXPECT_EQ(refine_anchor(b, {}), b);
}

TEST(RefineAnchor, DoublesWidth) {
  const RotatedBox out = refine_anchor({4, 4, 16, 8, 0}, {std::log(2.0), 0, 0});
  EXPECT_EQ(out.cx, 4);
  EXPECT_EQ(out.cy, 4);
  EXPECT_NEAR(out.w, 32, 1e-12);
  EXPECT_NEAR(out.h, 8, 1e-12);
  EXPECT_EQ(out.theta, 0);
}

TEST(RefineAnchor, CenterIsBitExact) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 5000; ++i) {
    const RotatedBox b{oracle::uniform(rng, -1e4, 1e4), oracle::uniform(rng, -1e4, 1e4),
                       oracle::uniform(rng, 1, 100), oracle::uniform(rng, 1, 100),
                       oracle::uniform(rng, -kPi / 4, kPi / 4)};
    const ShapeDelta d{oracle::uniform(rng, -2, 2), oracle::uniform(rng, -2, 2),
                       oracle::uniform(rng, -3, 3)};
    const RotatedBox out = refine_anchor(b, d);
    EXPECT_EQ(out.cx, b.cx);
    EXPECT_EQ(out.cy, b.cy);
  }
}

TEST(EncodeShapeDelta, InvertedByRefine) {
  const RotatedBox anchor{10, 10, 48, 16, 0};
  const RotatedBox target{10, 10, 60, 20, 0.3};
  const RotatedBox out = refine_anchor(anchor, encode_shape_delta(anchor, target));
  EXPECT_NEAR(out.w, 60, 1e-12);
  EXPECT_NEAR(out.h, 20, 1e-12);
  EXPECT_NEAR(out.theta, 0.3, 1e-12);
}

}  // namespace
}  // namespace lpcore
