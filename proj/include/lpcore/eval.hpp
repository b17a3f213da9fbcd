// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpcore/geometry.hpp"

namespace lpcore {

struct SpottingItem {
  RotatedBox box;
  std::string transcript;
  /// Predictions carry a score; ground truths may not.
  std::optional<double> score;
};

/// All ground-truth or predicted plates of one image.
struct SpottingRecord {
  std::string image_id;
  std::vector<SpottingItem> items;
};

/// tp + fn + ignored_gt equals the ground-truth count and
/// tp + fp + ignored_pred equals the prediction count. The ignored counters
/// stay zero unless unidentifiable plates are ignored.
struct SpottingCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t ignored_gt = 0;
  std::size_t ignored_pred = 0;

  SpottingCounts& operator+=(const SpottingCounts& other);
  friend bool operator==(const SpottingCounts&, const SpottingCounts&) = default;
};

struct MatchOptions {
  /// A match needs IoU strictly greater than this.
  double iou_thresh = 0.6;
  /// Ground truths containing the '*' placeholder never count as TP. When
  /// set, they and the predictions that land on them are left out of the
  /// counts instead of producing FN / FP.
  bool ignore_unidentifiable = false;
  IouMode iou_mode = IouMode::kRotated;
  /// Debug only: drop the transcript requirement.
  bool text_agnostic = false;
};

/// True if the transcript contains the unidentifiable placeholder '*'.
bool is_unidentifiable(const std::string& transcript);

/// Greedy one-to-one matching for one image. Predictions are visited by
/// descending score (input order on ties, missing score sorts as 0); each
/// one takes the unmatched ground truth of highest IoU. If that IoU beats
/// the threshold the ground truth is consumed and the pair counts TP when
/// the transcripts match exactly, otherwise FP (and the ground truth ends as
/// FN). Predictions that consume nothing are FP. Throws
/// Error(kImageIdMismatch) when the image ids differ.
SpottingCounts match_image(const SpottingRecord& gt, const SpottingRecord& pred,
                           const MatchOptions& options = {});

struct Metrics {
  double recall = 0.0;
  double precision = 0.0;
  double fscore = 0.0;
};

/// Zero denominators give 0.
Metrics metrics_from_counts(const SpottingCounts& total);

/// Sums the counts, then derives recall, precision and F-score.
Metrics aggregate(std::span<const SpottingCounts> counts);

struct ImageResult {
  std::string image_id;
  SpottingCounts counts;
};

struct DatasetResult {
  /// Sorted by image_id.
  std::vector<ImageResult> per_image;
  SpottingCounts total;
  Metrics metrics;
};

/// Joins records by image_id (ids missing on one side are treated as empty)
/// and matches every image, in parallel over images. Duplicate image ids on
/// one side are merged. threads == 0 uses the default thread count.
DatasetResult evaluate_dataset(std::span<const SpottingRecord> gts,
                               std::span<const SpottingRecord> preds,
                               const MatchOptions& options = {}, std::size_t threads = 0);

}  // namespace lpcore
