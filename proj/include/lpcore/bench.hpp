// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace lpcore {

struct BenchRow {
  std::string op;
  std::size_t size = 0;
  double total_ms = 0.0;
  double per_item_us = 0.0;
};

/// Times rotated_iou, rotated_nms, rroi_align and ctc_loss once per size.
/// Timings are reported, never judged.
std::vector<BenchRow> run_bench(std::span<const std::size_t> sizes);

}  // namespace lpcore
