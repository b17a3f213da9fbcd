// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "lpcore/dataio.hpp"
#include "lpcore/error.hpp"
#include "lpcore/eval.hpp"
#include "lpcore/geometry.hpp"

namespace lpcore {
namespace {

// 10x10 box shifted along x so that its IoU with the unshifted one is `iou`.
RotatedBox shifted(const RotatedBox& base, double iou) {
  RotatedBox b = base;
  b.cx += 10.0 * (1.0 - iou) / (1.0 + iou);
  return b;
}

SpottingCounts counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  SpottingCounts c;
  c.tp = tp;
  c.fp = fp;
  c.fn = fn;
  return c;
}

const RotatedBox kLeft{10, 10, 10, 10, 0};
const RotatedBox kRight{100, 10, 10, 10, 0};

TEST(MatchImage, HandFixture) {
  const SpottingRecord gt{"img", {{kLeft, "京A12345", {}}, {kRight, "沪B54321", {}}}};
  ASSERT_NEAR(rotated_iou(shifted(kLeft, 0.7), kLeft), 0.7, 1e-12);
  ASSERT_NEAR(rotated_iou(shifted(kRight, 0.5), kRight), 0.5, 1e-12);
  const SpottingRecord pred{"img",
                            {{shifted(kLeft, 0.7), "京A12345", 0.9},
                             {shifted(kRight, 0.5), "沪B54321", 0.8}}};
  EXPECT_EQ(match_image(gt, pred), counts(1, 1, 1));
  const Metrics m = metrics_from_counts(match_image(gt, pred));
  EXPECT_EQ(m.recall, 0.5);
  EXPECT_EQ(m.precision, 0.5);
  EXPECT_EQ(m.fscore, 0.5);
}

TEST(MatchImage, ThresholdIsStrict) {
  const RotatedBox p{12.5, 10, 10, 10, 0};
  ASSERT_EQ(rotated_iou(p, kLeft), 0.6);
  const SpottingRecord gt{"img", {{kLeft, "京A12345", {}}}};
  const SpottingRecord pred{"img", {{p, "京A12345", 0.9}}};
  EXPECT_EQ(match_image(gt, pred), counts(0, 1, 1));
  MatchOptions looser;
  looser.iou_thresh = 0.5999;
  EXPECT_EQ(match_image(gt, pred, looser), counts(1, 0, 0));
}

TEST(MatchImage, OneWrongCharacterFails) {
  const SpottingRecord gt{"img", {{kLeft, "京A12345", {}}}};
  const SpottingRecord pred{"img", {{shifted(kLeft, 0.9), "京A1234S", 0.9}}};
  EXPECT_EQ(match_image(gt, pred), counts(0, 1, 1));
}

TEST(MatchImage, WrongTextConsumesGroundTruth) {
  const SpottingRecord gt{"img", {{kLeft, "京A12345", {}}}};
  const SpottingRecord pred{"img",
                            {{shifted(kLeft, 0.9), "京A1234S", 0.9},
                             {shifted(kLeft, 0.8), "京A12345", 0.5}}};
  EXPECT_EQ(match_image(gt, pred), counts(0, 2, 1));
}

TEST(MatchImage, HigherScoreClaimsFirst) {
  const SpottingRecord gt{"img", {{kLeft, "京A12345", {}}}};
  const SpottingRecord pred{"img",
                            {{shifted(kLeft, 0.7), "京A12345", 0.4},
                             {shifted(kLeft, 0.95), "京A99999", 0.6}}};
  EXPECT_EQ(match_image(gt, pred), counts(0, 2, 1));
}

TEST(MatchImage, ImageIdMismatch) {
  try {
    match_image({"a", {}}, {"b", {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kImageIdMismatch);
  }
}

TEST(MatchImage, UnidentifiableNeverTruePositive) {
  const SpottingRecord gt{"img", {{kLeft, "京A123**", {}}}};
  const SpottingRecord pred{"img", {{kLeft, "京A123**", 0.9}}};
  EXPECT_EQ(match_image(gt, pred), counts(0, 1, 1));
  MatchOptions ignore;
  ignore.ignore_unidentifiable = true;
  SpottingCounts want;
  want.ignored_gt = 1;
  want.ignored_pred = 1;
  EXPECT_EQ(match_image(gt, pred, ignore), want);
  const SpottingRecord none{"img", {}};
  SpottingCounts only_gt;
  only_gt.ignored_gt = 1;
  EXPECT_EQ(match_image(gt, none, ignore), only_gt);
}

TEST(MatchImage, TextAgnosticDebugMode) {
  const SpottingRecord gt{"img", {{kLeft, "京A12345", {}}}};
  const SpottingRecord pred{"img", {{kLeft, "XXXXXXX", 0.9}}};
  MatchOptions opts;
  opts.text_agnostic = true;
  EXPECT_EQ(match_image(gt, pred, opts), counts(1, 0, 0));
}

TEST(Aggregate, Examples) {
  const std::vector<SpottingCounts> one{counts(1, 1, 1)};
  Metrics m = aggregate(one);
  EXPECT_EQ(m.recall, 0.5);
  EXPECT_EQ(m.precision, 0.5);
  EXPECT_EQ(m.fscore, 0.5);
  const std::vector<SpottingCounts> zero{counts(0, 0, 0)};
  m = aggregate(zero);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.fscore, 0.0);
  const std::vector<SpottingCounts> mixed{counts(2, 0, 1), counts(1, 1, 1)};
  m = aggregate(mixed);
  EXPECT_DOUBLE_EQ(m.recall, 0.6);
  EXPECT_DOUBLE_EQ(m.precision, 0.75);
  EXPECT_NEAR(m.fscore, 2.0 / 3.0, 1e-15);
}

TEST(Aggregate, FscoreBetweenPrecisionAndRecall) {
  std::mt19937_64 rng(81);
  for (int i = 0; i < 1000; ++i) {
    const Metrics m = metrics_from_counts(counts(rng() % 50, rng() % 50, rng() % 50));
    EXPECT_LE(std::min(m.precision, m.recall), m.fscore + 1e-15);
    EXPECT_LE(m.fscore, std::max(m.precision, m.recall) + 1e-15);
  }
}

TEST(MatchImage, CountsPartitionItems) {
  std::mt19937_64 rng(82);
  for (int round = 0; round < 300; ++round) {
    const SynthFixture f = synth_fixture(rng(), 1 + static_cast<int>(rng() % 12), 0.3);
    SpottingRecord pred = f.pred;
    // Drop some predictions, corrupt some transcripts and mark some plates.
    pred.items.erase(std::remove_if(pred.items.begin(), pred.items.end(),
                                    [&](const SpottingItem&) { return rng() % 5 == 0; }),
                     pred.items.end());
    for (SpottingItem& item : pred.items) {
      if (rng() % 4 == 0) item.transcript += "X";
    }
    SpottingRecord gt = f.gt;
    for (SpottingItem& item : gt.items) {
      if (rng() % 6 == 0) item.transcript.back() = '*';
    }
    for (bool ignore : {false, true}) {
      MatchOptions opts;
      opts.ignore_unidentifiable = ignore;
      const SpottingCounts c = match_image(gt, pred, opts);
      EXPECT_EQ(c.tp + c.fn + c.ignored_gt, gt.items.size());
      EXPECT_EQ(c.tp + c.fp + c.ignored_pred, pred.items.size());
      if (!ignore) {
        EXPECT_EQ(c.ignored_gt, 0u);
        EXPECT_EQ(c.ignored_pred, 0u);
      }
    }
  }
}

TEST(EvaluateDataset, PerfectPredictionsScoreOne) {
  std::vector<SpottingRecord> gts, preds;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SynthFixture f = synth_fixture(seed, 10, 0.0);
    gts.push_back(f.gt);
    preds.push_back(f.pred);
  }
  const DatasetResult r = evaluate_dataset(gts, preds);
  EXPECT_EQ(r.metrics.recall, 1.0);
  EXPECT_EQ(r.metrics.precision, 1.0);
  EXPECT_EQ(r.metrics.fscore, 1.0);
  EXPECT_EQ(r.total.tp, 50u);
}

TEST(EvaluateDataset, SortedJoinAndMissingSides) {
  const std::vector<SpottingRecord> gts{{"b", {{kLeft, "A", {}}}}, {"a", {{kLeft, "A", {}}}}};
  const std::vector<SpottingRecord> preds{{"c", {{kLeft, "A", 0.5}}}, {"a", {{kLeft, "A", 0.5}}}};
  const DatasetResult r = evaluate_dataset(gts, preds);
  ASSERT_EQ(r.per_image.size(), 3u);
  EXPECT_EQ(r.per_image[0].image_id, "a");
  EXPECT_EQ(r.per_image[0].counts, counts(1, 0, 0));
  EXPECT_EQ(r.per_image[1].counts, counts(0, 0, 1));
  EXPECT_EQ(r.per_image[2].counts, counts(0, 1, 0));
  EXPECT_EQ(r.total, counts(1, 1, 1));
}

TEST(EvaluateDataset, InvariantToOrderAndThreads) {
  std::vector<SpottingRecord> gts, preds;
  for (std::uint64_t seed = 10; seed < 40; ++seed) {
    const SynthFixture f = synth_fixture(seed, 8, 0.25);
    gts.push_back(f.gt);
    preds.push_back(f.pred);
  }
  const DatasetResult base = evaluate_dataset(gts, preds, {}, 1);
  std::mt19937_64 rng(83);
  for (std::size_t threads : {2u, 3u, 4u, 8u}) {
    std::shuffle(gts.begin(), gts.end(), rng);
    std::shuffle(preds.begin(), preds.end(), rng);
    const DatasetResult r = evaluate_dataset(gts, preds, {}, threads);
    EXPECT_EQ(r.total, base.total);
    ASSERT_EQ(r.per_image.size(), base.per_image.size());
    for (std::size_t i = 0; i < r.per_image.size(); ++i) {
      EXPECT_EQ(r.per_image[i].image_id, base.per_image[i].image_id);
      EXPECT_EQ(r.per_image[i].counts, base.per_image[i].counts);
    }
    EXPECT_EQ(r.metrics.fscore, base.metrics.fscore);
  }
}

TEST(EvaluateDataset, NoiseAndThresholdMonotonicity) {
  std::vector<SpottingRecord> gts, clean, noisy;
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const SynthFixture a = synth_fixture(seed, 12, 0.0);
    const SynthFixture b = synth_fixture(seed, 12, 0.15);
    gts.push_back(a.gt);
    clean.push_back(a.pred);
    noisy.push_back(b.pred);
  }
  const double f_clean = evaluate_dataset(gts, clean).metrics.fscore;
  const double f_noisy = evaluate_dataset(gts, noisy).metrics.fscore;
  EXPECT_EQ(f_clean, 1.0);
  EXPECT_LT(f_noisy, f_clean);
  double previous = 2.0;
  for (double thr : {0.3, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99}) {
    MatchOptions opts;
    opts.iou_thresh = thr;
    const double f = evaluate_dataset(gts, noisy, opts).metrics.fscore;
    EXPECT_LE(f, previous);
    previous = f;
  }
  EXPECT_LT(previous, f_noisy);
}

}  // namespace
}  // namespace lpcore
