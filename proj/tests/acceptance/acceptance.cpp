// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "lpcore/dataio.hpp"
#include "lpcore/eval.hpp"
#include "lpcore/feature_ops.hpp"
#include "lpcore/losses.hpp"
#include "lpcore/selfcheck.hpp"
#include "process.hpp"

namespace {

namespace fs = std::filesystem;
using namespace lpcore;
using lpcore::testing::read_file;
using lpcore::testing::run_command;
using lpcore::testing::shell_quote;

const std::string kCli = shell_quote(LPCORE_CLI_PATH);

struct Verdict {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
    passed = passed && ok;
  }
};

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void require_suite(Verdict& v, const SuiteResult& r, std::size_t min_cases = 0) {
  v.require(r.passed && r.cases >= min_cases,
            r.name + " max_err=" + fmt("%.3g", r.max_error) + " < " + fmt("%.0e", r.tolerance) +
                " over " + std::to_string(r.cases) + " cases");
}

Verdict criterion_1() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const SuiteResult r = check_iou_monte_carlo(1000, 1000, 1);
  const double elapsed = seconds_since(start);
  require_suite(v, r, 1000);
  v.require(elapsed < 60.0, "runtime " + fmt("%.1f", elapsed) + " s < 60 s");
  return v;
}

Verdict criterion_2() {
  Verdict v;
  require_suite(v, check_encode_decode(10000, 2), 10000);
  return v;
}

Verdict criterion_3() {
  Verdict v;
  require_suite(v, check_focal_gradient(1000, 3), 1000);
  require_suite(v, check_focal_cross_entropy(1000, 4), 1000);
  const double point = focal_loss(0.5, 1).loss;
  v.require(std::abs(point - 0.0433217) < 1e-6, "focal(0.5, 1) = " + fmt("%.10f", point));
  return v;
}

Verdict criterion_4() {
  Verdict v;
  require_suite(v, check_ctc_brute_force(4, 6), 200);
  require_suite(v, check_ctc_gradient(100, 7));
  return v;
}

Verdict criterion_5() {
  Verdict v;
  require_suite(v, check_rroi_matches_roi_align(200, 9));
  require_suite(v, check_rroi_align_dense(50, 8));
  const CropSpec spec;
  const FeatureMap fm(2, 32, 64);
  const FeatureMap crop = rroi_align(fm, {32, 16, 40, 12, 0.3}, spec);
  v.require(spec.out_h == 8 && spec.out_w == 25 && crop.height() == 8 && crop.width() == 25,
            "default crop " + std::to_string(crop.height()) + "x" + std::to_string(crop.width()));
  return v;
}

Verdict criterion_6() {
  Verdict v;
  require_suite(v, check_deform_zero_offset(200, 11));
  require_suite(v, check_conv_naive(200, 10));
  return v;
}

Verdict criterion_7() {
  Verdict v;
  const RotatedBox left{10, 10, 10, 10, 0};
  const RotatedBox right{100, 10, 10, 10, 0};
  auto shift = [](RotatedBox b, double dx) {
    b.cx += dx;
    return b;
  };
  // 10x10 squares offset by d along x overlap at (10 - d) / (10 + d).
  const SpottingRecord gt{"img", {{left, "京A12345", {}}, {right, "沪B54321", {}}}};
  const SpottingRecord pred{"img",
                            {{shift(left, 30.0 / 17.0), "京A12345", 0.9},
                             {shift(right, 10.0 / 3.0), "沪B54321", 0.8}}};
  const SpottingCounts mixed = match_image(gt, pred);
  v.require(mixed.tp == 1 && mixed.fp == 1 && mixed.fn == 1, "IoU 0.7 + 0.5 fixture gives (1,1,1)");

  const SpottingRecord one_gt{"img", {{left, "京A12345", {}}}};
  const SpottingRecord boundary{"img", {{shift(left, 2.5), "京A12345", 0.9}}};
  const double iou = rotated_iou(boundary.items[0].box, left);
  const SpottingCounts edge = match_image(one_gt, boundary);
  v.require(iou == 0.6 && edge.tp == 0 && edge.fp == 1 && edge.fn == 1,
            "IoU exactly " + fmt("%.15g", iou) + " does not match");

  const SpottingRecord typo{"img", {{shift(left, 10.0 / 19.0), "京A1234S", 0.9}}};
  const SpottingCounts wrong = match_image(one_gt, typo);
  v.require(wrong.tp == 0 && wrong.fp == 1 && wrong.fn == 1, "one wrong character gives (0,1,1)");

  std::vector<SpottingRecord> gts, clean, noisy;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SynthFixture a = synth_fixture(seed, 10, 0.0);
    gts.push_back(a.gt);
    clean.push_back(a.pred);
    noisy.push_back(synth_fixture(seed, 10, 0.2).pred);
  }
  const double f_clean = evaluate_dataset(gts, clean).metrics.fscore;
  const double f_noisy = evaluate_dataset(gts, noisy).metrics.fscore;
  v.require(f_clean == 1.0, "perfect synthetic F = " + fmt("%.6g", f_clean));
  v.require(f_noisy <= f_clean, "noisy F = " + fmt("%.4f", f_noisy) + " <= clean F");
  return v;
}

Verdict criterion_8() {
  Verdict v;
  const double det = detection_loss(1, 1, 1);
  const double e2e = end_to_end_loss(1, 10);
  v.require(det == 2.0, "detection_loss(1,1,1) = " + fmt("%.17g", det));
  v.require(e2e == 2.0, "end_to_end_loss(1,10) = " + fmt("%.17g", e2e));
  return v;
}

Verdict criterion_9() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / "lpcore_acceptance_determinism";
  fs::remove_all(dir);
  const auto synth = run_command(kCli + " synth --seed 2026 --n 12 --images 40 --noise 0.2 --out " +
                                 shell_quote(dir.string()));
  if (synth.exit_code != 0) {
    v.require(false, "synth fixture");
    return v;
  }
  const std::string args = " evaluate --no-timestamp --gt " +
                           shell_quote((dir / "gt_annotations").string()) + " --pred " +
                           shell_quote((dir / "pred.txt").string());
  std::string stdout_ref, report_ref;
  int run = 0;
  bool all_equal = true;
  for (int threads : {1, 4, 1, 4}) {
    const std::string env = "LPCORE_THREADS=" + std::to_string(threads) + " ";
    const auto out = run_command(env + kCli + args);
    const fs::path report = dir / ("report_" + std::to_string(run) + ".txt");
    const auto wrote = run_command(env + kCli + args + " --report " + shell_quote(report.string()));
    if (out.exit_code != 0 || wrote.exit_code != 0) {
      all_equal = false;
      break;
    }
    const std::string text = read_file(report);
    if (run == 0) {
      stdout_ref = out.output;
      report_ref = text;
    }
    all_equal = all_equal && out.output == stdout_ref && text == report_ref;
    ++run;
  }
  v.require(all_equal && !report_ref.empty(),
            "stdout and --report identical over 4 runs with LPCORE_THREADS in {1,4}");
  fs::remove_all(dir);
  return v;
}

Verdict criterion_10() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const auto r = run_command(kCli + " selfcheck");
  const double elapsed = seconds_since(start);
  v.require(r.exit_code == 0, "lpcore selfcheck exit " + std::to_string(r.exit_code));
  v.require(elapsed < 300.0, "runtime " + fmt("%.1f", elapsed) + " s < 300 s");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::function<Verdict()>> criteria{
      criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
      criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %zu: %s\n", v.passed ? "PASS" : "FAIL", i + 1, v.detail.c_str());
    std::fflush(stdout);
    if (!v.passed) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
