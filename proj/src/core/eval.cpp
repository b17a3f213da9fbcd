// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#include "lpcore/eval.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "lpcore/ctc.hpp"
#include "lpcore/error.hpp"
#include "lpcore/parallel.hpp"

namespace lpcore {

SpottingCounts& SpottingCounts::operator+=(const SpottingCounts& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  ignored_gt += other.ignored_gt;
  ignored_pred += other.ignored_pred;
  return *this;
}

bool is_unidentifiable(const std::string& transcript) {
  return transcript.find(Alphabet::kUnidentifiable) != std::string::npos;
}

SpottingCounts match_image(const SpottingRecord& gt, const SpottingRecord& pred,
                           const MatchOptions& options) {
  if (gt.image_id != pred.image_id) {
    throw Error(ErrorCode::kImageIdMismatch,
                "ground truth '" + gt.image_id + "' vs prediction '" + pred.image_id + "'");
  }
  const std::size_t n_gt = gt.items.size();
  std::vector<std::size_t> order(pred.items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pred.items[a].score.value_or(0.0) > pred.items[b].score.value_or(0.0);
  });

  enum class GtState { kOpen, kMatched, kConsumedWrongText, kIgnored };
  std::vector<GtState> state(n_gt, GtState::kOpen);
  SpottingCounts counts;

  for (std::size_t p : order) {
    const SpottingItem& item = pred.items[p];
    std::size_t best_gt = n_gt;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < n_gt; ++g) {
      if (state[g] != GtState::kOpen) continue;
      const double iou = box_iou(item.box, gt.items[g].box, options.iou_mode);
      if (iou > best_iou) {
        best_iou = iou;
        best_gt = g;
      }
    }
    if (best_gt == n_gt || !(best_iou > options.iou_thresh)) {
      ++counts.fp;
      continue;
    }
    const std::string& gt_text = gt.items[best_gt].transcript;
    const bool unidentifiable = is_unidentifiable(gt_text);
    if (unidentifiable && options.ignore_unidentifiable) {
      state[best_gt] = GtState::kIgnored;
      ++counts.ignored_pred;
      continue;
    }
    const bool text_ok =
        options.text_agnostic || (!unidentifiable && exact_match(item.transcript, gt_text));
    if (text_ok) {
      state[best_gt] = GtState::kMatched;
      ++counts.tp;
    } else {
      state[best_gt] = GtState::kConsumedWrongText;
      ++counts.fp;
    }
  }

  for (std::size_t g = 0; g < n_gt; ++g) {
    if (state[g] == GtState::kMatched) continue;
    if (state[g] == GtState::kIgnored ||
        (options.ignore_unidentifiable && is_unidentifiable(gt.items[g].transcript))) {
      ++counts.ignored_gt;
    } else {
      ++counts.fn;
    }
  }
  return counts;
}

Metrics metrics_from_counts(const SpottingCounts& total) {
  Metrics m;
  const std::size_t gt_total = total.tp + total.fn;
  const std::size_t pred_total = total.tp + total.fp;
  m.recall = gt_total == 0 ? 0.0 : static_cast<double>(total.tp) / static_cast<double>(gt_total);
  m.precision =
      pred_total == 0 ? 0.0 : static_cast<double>(total.tp) / static_cast<double>(pred_total);
  const double denom = m.precision + m.recall;
  m.fscore = denom == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / denom;
  return m;
}

Metrics aggregate(std::span<const SpottingCounts> counts) {
  SpottingCounts total;
  for (const SpottingCounts& c : counts) total += c;
  return metrics_from_counts(total);
}

DatasetResult evaluate_dataset(std::span<const SpottingRecord> gts,
                               std::span<const SpottingRecord> preds, const MatchOptions& options,
                               std::size_t threads) {
  std::map<std::string, std::pair<SpottingRecord, SpottingRecord>> joined;
  for (const SpottingRecord& r : gts) {
    auto& slot = joined[r.image_id];
    slot.first.image_id = r.image_id;
    slot.second.image_id = r.image_id;
    slot.first.items.insert(slot.first.items.end(), r.items.begin(), r.items.end());
  }
  for (const SpottingRecord& r : preds) {
    auto& slot = joined[r.image_id];
    slot.first.image_id = r.image_id;
    slot.second.image_id = r.image_id;
    slot.second.items.insert(slot.second.items.end(), r.items.begin(), r.items.end());
  }

  std::vector<const std::pair<SpottingRecord, SpottingRecord>*> images;
  images.reserve(joined.size());
  for (const auto& [id, pair] : joined) images.push_back(&pair);

  DatasetResult result;
  result.per_image.resize(images.size());
  parallel_for(
      images.size(),
      [&](std::size_t i) {
        result.per_image[i] = {images[i]->first.image_id,
                               match_image(images[i]->first, images[i]->second, options)};
      },
      threads);
  for (const ImageResult& r : result.per_image) result.total += r.counts;
  result.metrics = metrics_from_counts(result.total);
  return result;
}

}  // namespace lpcore
