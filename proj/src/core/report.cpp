// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#include "lpcore/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "lpcore/dataio.hpp"
#include "lpcore/error.hpp"

namespace lpcore {

namespace {

std::string iso_utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string_view iou_mode_name(IouMode mode) {
  return mode == IouMode::kRotated ? "rotated" : "axis_aligned_hull";
}

}  // namespace

EvalReport evaluate_files(const EvalConfig& config) {
  const std::vector<SpottingRecord> gts = load_ground_truth(config.gt_path);
  const std::vector<SpottingRecord> preds = parse_prediction_file(config.pred_path);
  return {config, evaluate_dataset(gts, preds, config.match, config.threads)};
}

std::string format_report(const EvalReport& report, bool include_timestamp) {
  const SpottingCounts& t = report.result.total;
  const Metrics& m = report.result.metrics;
  std::ostringstream out;
  out << "# lpcore evaluation report\n";
  out << "format=lpcore-eval-1\n";
  if (include_timestamp) out << "timestamp=" << iso_utc_now() << '\n';
  out << "gt_path=" << report.config.gt_path << '\n';
  out << "pred_path=" << report.config.pred_path << '\n';
  out << "iou_thresh=" << format_real(report.config.match.iou_thresh) << '\n';
  out << "ignore_unidentifiable=" << (report.config.match.ignore_unidentifiable ? "true" : "false")
      << '\n';
  out << "iou_mode=" << iou_mode_name(report.config.match.iou_mode) << '\n';
  out << "images=" << report.result.per_image.size() << '\n';
  out << "tp=" << t.tp << '\n';
  out << "fp=" << t.fp << '\n';
  out << "fn=" << t.fn << '\n';
  out << "ignored_gt=" << t.ignored_gt << '\n';
  out << "ignored_pred=" << t.ignored_pred << '\n';
  out << "recall=" << format_real(m.recall) << '\n';
  out << "precision=" << format_real(m.precision) << '\n';
  out << "fscore=" << format_real(m.fscore) << '\n';
  out << "[per_image]\n";
  out << "image_id,tp,fp,fn,ignored_gt,ignored_pred\n";
  for (const ImageResult& r : report.result.per_image) {
    out << r.image_id << ',' << r.counts.tp << ',' << r.counts.fp << ',' << r.counts.fn << ','
        << r.counts.ignored_gt << ',' << r.counts.ignored_pred << '\n';
  }
  return out.str();
}

std::string format_summary_table(const EvalReport& report) {
  const SpottingCounts& t = report.result.total;
  const Metrics& m = report.result.metrics;
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "images     %10zu\n"
                "tp         %10zu\n"
                "fp         %10zu\n"
                "fn         %10zu\n"
                "recall     %10.4f\n"
                "precision  %10.4f\n"
                "fscore     %10.4f\n",
                report.result.per_image.size(), t.tp, t.fp, t.fn, m.recall, m.precision, m.fscore);
  std::string out = buf;
  if (report.config.match.ignore_unidentifiable) {
    std::snprintf(buf, sizeof buf, "ignored_gt %10zu\nignored_pr %10zu\n", t.ignored_gt,
                  t.ignored_pred);
    out += buf;
  }
  return out;
}

void write_report_file(const std::filesystem::path& path, const EvalReport& report,
                       bool include_timestamp) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write report " + path.string());
  out << format_report(report, include_timestamp);
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

}  // namespace lpcore
