// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#include "lpcore/bench.hpp"

#include <chrono>
#include <numbers>
#include <random>

#include "lpcore/ctc.hpp"
#include "lpcore/feature_ops.hpp"
#include "lpcore/geometry.hpp"
#include "lpcore/oracles.hpp"

namespace lpcore {

namespace {

using Clock = std::chrono::steady_clock;

BenchRow make_row(std::string op, std::size_t size, Clock::time_point start) {
  BenchRow row;
  row.op = std::move(op);
  row.size = size;
  row.total_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  row.per_item_us = size == 0 ? 0.0 : 1000.0 * row.total_ms / static_cast<double>(size);
  return row;
}

std::vector<RotatedBox> random_boxes(std::mt19937_64& rng, std::size_t n) {
  std::vector<RotatedBox> boxes(n);
  const double q = std::numbers::pi / 4.0;
  for (RotatedBox& b : boxes) {
    b = {oracle::uniform(rng, 0.0, 100.0), oracle::uniform(rng, 0.0, 100.0),
         oracle::uniform(rng, 5.0, 40.0), oracle::uniform(rng, 2.0, 15.0),
         oracle::uniform(rng, -q, q)};
  }
  return boxes;
}

}  // namespace

std::vector<BenchRow> run_bench(std::span<const std::size_t> sizes) {
  std::vector<BenchRow> rows;
  std::mt19937_64 rng(42);
  for (std::size_t n : sizes) {
    const std::vector<RotatedBox> boxes = random_boxes(rng, n + 1);

    auto start = Clock::now();
    volatile double sink = 0.0;
    for (std::size_t i = 0; i < n; ++i) sink = sink + rotated_iou(boxes[i], boxes[i + 1]);
    rows.push_back(make_row("rotated_iou", n, start));

    std::vector<ScoredBox> scored(n);
    for (std::size_t i = 0; i < n; ++i) scored[i] = {boxes[i], oracle::uniform(rng, 0.0, 1.0)};
    start = Clock::now();
    sink = sink + static_cast<double>(rotated_nms_indices(scored, 0.5).size());
    rows.push_back(make_row("rotated_nms", n, start));

    FeatureMap fm(8, 64, 128, 0.5);
    start = Clock::now();
    for (std::size_t i = 0; i < n; ++i) sink = sink + rroi_align(fm, boxes[i]).data()[0];
    rows.push_back(make_row("rroi_align", n, start));

    constexpr std::size_t kSteps = 25;
    const Alphabet alphabet = Alphabet::license_plate();
    std::vector<double> logits(kSteps * alphabet.num_classes());
    for (double& v : logits) v = oracle::uniform(rng, -2.0, 2.0);
    const LogitFrame frame = LogitFrame::from_logits(kSteps, alphabet.num_classes(), logits);
    const LabelSequence target = alphabet.encode("京A12345");
    start = Clock::now();
    for (std::size_t i = 0; i < n; ++i) sink = sink + ctc_loss(frame, target).loss;
    rows.push_back(make_row("ctc_loss", n, start));
  }
  return rows;
}

}  // namespace lpcore
