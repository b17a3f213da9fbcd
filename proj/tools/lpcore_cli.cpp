// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

// lpcore command-line tool. Exit codes: 0 success, 1 I/O error, 2 invalid
// input (parse errors, degenerate quads and other rejected data), 3 usage
// error, 4 self-check failure, 5 internal error.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lpcore/lpcore.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInput = 2;
constexpr int kExitUsage = 3;
constexpr int kExitSelfcheck = 4;
constexpr int kExitInternal = 5;

int exit_code_for(lpcore_status status) {
  switch (status) {
    case LPCORE_OK: return kExitOk;
    case LPCORE_IO_ERROR: return kExitIo;
    case LPCORE_INTERNAL: return kExitInternal;
    default: return kExitInput;
  }
}

int report_failure(const char* what, lpcore_status status) {
  std::fprintf(stderr, "lpcore: %s: %s: %s\n", what, lpcore_status_string(status),
               lpcore_last_error_message());
  return exit_code_for(status);
}

struct EvaluateArgs {
  std::string gt;
  std::string pred;
  double iou = 0.6;
  bool ignore_unidentifiable = false;
  std::string report;
  bool no_timestamp = false;
};

int run_evaluate(const EvaluateArgs& args) {
  lpcore_eval_options options = lpcore_eval_options_default();
  options.iou_thresh = args.iou;
  options.ignore_unidentifiable = args.ignore_unidentifiable ? 1 : 0;
  lpcore_report* report = nullptr;
  lpcore_status status = lpcore_evaluate_files(args.gt.c_str(), args.pred.c_str(), &options, &report);
  if (status != LPCORE_OK) return report_failure("evaluate", status);
  std::fputs(lpcore_report_summary(report), stdout);
  const int with_timestamp = args.no_timestamp ? 0 : 1;
  if (args.report.empty()) {
    std::fputs("\n", stdout);
    std::fputs(lpcore_report_text(report, with_timestamp), stdout);
  } else {
    status = lpcore_report_write(report, args.report.c_str(), with_timestamp);
  }
  lpcore_report_destroy(report);
  if (status != LPCORE_OK) return report_failure("evaluate", status);
  return kExitOk;
}

int run_selfcheck(const std::string& inject_fault) {
  lpcore_selfcheck* result = nullptr;
  const lpcore_status status =
      lpcore_selfcheck_run(inject_fault.empty() ? nullptr : inject_fault.c_str(), &result);
  if (status != LPCORE_OK) return report_failure("selfcheck", status);
  bool all_passed = true;
  std::printf("%-26s %12s %10s %7s %9s  %s\n", "suite", "max_error", "tolerance", "cases",
              "seconds", "result");
  for (size_t i = 0; i < lpcore_selfcheck_count(result); ++i) {
    lpcore_suite_result s;
    lpcore_selfcheck_suite(result, i, &s);
    all_passed = all_passed && s.passed;
    std::printf("%-26s %12.3e %10.0e %7zu %9.2f  %s\n", s.name, s.max_error, s.tolerance, s.cases,
                s.seconds, s.passed ? "PASS" : "FAIL");
  }
  lpcore_selfcheck_destroy(result);
  std::printf("selfcheck: %s\n", all_passed ? "all suites passed" : "FAILED");
  return all_passed ? kExitOk : kExitSelfcheck;
}

int run_synth(uint64_t seed, int n, double noise, int images, const std::string& out) {
  const lpcore_status status = lpcore_synth_write(seed, n, noise, images, out.c_str());
  if (status != LPCORE_OK) return report_failure("synth", status);
  std::printf("wrote %d image(s) of %d plate(s) to %s\n", images, n, out.c_str());
  return kExitOk;
}

int run_bench(const std::vector<size_t>& sizes) {
  lpcore_bench* result = nullptr;
  const lpcore_status status = lpcore_bench_run(sizes.data(), sizes.size(), &result);
  if (status != LPCORE_OK) return report_failure("bench", status);
  std::printf("%-12s %10s %12s %14s\n", "op", "size", "total_ms", "per_item_us");
  for (size_t i = 0; i < lpcore_bench_count(result); ++i) {
    lpcore_bench_row r;
    lpcore_bench_row_at(result, i, &r);
    std::printf("%-12s %10zu %12.3f %14.3f\n", r.op, r.size, r.total_ms, r.per_item_us);
  }
  lpcore_bench_destroy(result);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lpcore: license-plate spotting numerical core"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lpcore_version()));

  EvaluateArgs eval;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Score predictions against ground truth");
  evaluate->add_option("--gt", eval.gt, "Annotation directory or ground-truth file")->required();
  evaluate->add_option("--pred", eval.pred, "Prediction file")->required();
  evaluate->add_option("--iou", eval.iou, "IoU a match must exceed")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  evaluate->add_flag("--ignore-unidentifiable", eval.ignore_unidentifiable,
                     "Leave plates containing '*' out of the counts");
  evaluate->add_option("--report", eval.report, "Write the machine-readable report here");
  evaluate->add_flag("--no-timestamp", eval.no_timestamp, "Omit the timestamp line");

  std::string inject_fault;
  if (const char* env = std::getenv("LPCORE_SELFCHECK_INJECT_FAULT")) inject_fault = env;
  CLI::App* selfcheck = app.add_subcommand("selfcheck", "Run every oracle suite");
  selfcheck->add_option("--inject-fault", inject_fault)->group("");

  uint64_t seed = 0;
  int n_plates = 0;
  double noise = 0.0;
  int images = 1;
  std::string out_dir;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic fixture");
  synth->add_option("--seed", seed, "Random seed")->required();
  synth->add_option("--n", n_plates, "Plates per image")->required()->check(CLI::NonNegativeNumber);
  synth->add_option("--noise", noise, "Relative prediction perturbation")
      ->required()
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--out", out_dir, "Output directory")->required();
  synth->add_option("--images", images, "Number of images")->capture_default_str()->check(CLI::PositiveNumber);

  std::vector<size_t> sizes;
  CLI::App* bench = app.add_subcommand("bench", "Time the core kernels");
  bench->add_option("--size", sizes, "Items per op (repeatable)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (evaluate->parsed()) return run_evaluate(eval);
  if (selfcheck->parsed()) return run_selfcheck(inject_fault);
  if (synth->parsed()) return run_synth(seed, n_plates, noise, images, out_dir);
  if (bench->parsed()) {
    if (sizes.empty()) sizes = {100, 1000};
    return run_bench(sizes);
  }
  return kExitUsage;
}
