// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "lpcore/eval.hpp"

namespace lpcore {

struct EvalConfig {
  std::string gt_path;
  std::string pred_path;
  MatchOptions match;
  /// 0 selects the default thread count. Never echoed into reports.
  std::size_t threads = 0;
};

struct EvalReport {
  EvalConfig config;
  DatasetResult result;
};

/// Loads both files (see load_ground_truth) and evaluates them.
EvalReport evaluate_files(const EvalConfig& config);

/// Machine-readable report: key=value lines, then a "[per_image]" CSV
/// section ordered by image_id. Byte-identical for identical inputs unless
/// a timestamp line is requested.
std::string format_report(const EvalReport& report, bool include_timestamp);

/// Fixed-width table for terminals.
std::string format_summary_table(const EvalReport& report);

void write_report_file(const std::filesystem::path& path, const EvalReport& report,
                       bool include_timestamp);

}  // namespace lpcore
