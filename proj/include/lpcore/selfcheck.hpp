// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace lpcore {

/// Outcome of one oracle comparison suite.
struct SuiteResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::size_t cases = 0;
  double seconds = 0.0;
  bool passed = false;
};

struct SelfcheckOptions {
  /// Test hook: the named suite reports an error above its tolerance.
  std::string inject_fault;
};

/// Clipping IoU against stratified Monte-Carlo sampling
/// (samples_per_axis^2 points per pair); tolerance 5e-3.
SuiteResult check_iou_monte_carlo(std::size_t pairs = 1000, int samples_per_axis = 1000,
                                  std::uint64_t seed = 1);

/// decode(encode) roundtrip error over random pairs; tolerance 1e-9. A
/// refined anchor whose center moves by any amount makes the error infinite.
SuiteResult check_encode_decode(std::size_t pairs = 10000, std::uint64_t seed = 2);

/// Focal-loss gradient against central differences; tolerance 1e-4 relative.
SuiteResult check_focal_gradient(std::size_t points = 1000, std::uint64_t seed = 3);

/// gamma = 0, alpha = 0.5 against 0.5 * cross-entropy; tolerance 1e-12.
SuiteResult check_focal_cross_entropy(std::size_t points = 1000, std::uint64_t seed = 4);

/// Smooth-L1 regression and refinement gradients; tolerance 1e-4 relative.
SuiteResult check_smooth_l1_gradient(std::size_t points = 1000, std::uint64_t seed = 5);

/// Forward-backward CTC against exhaustive path enumeration for every
/// T <= 6, |target| <= 3, K <= 4 with `per_shape` random frames each;
/// tolerance 1e-9 on the log-likelihood.
SuiteResult check_ctc_brute_force(int per_shape = 4, std::uint64_t seed = 6);

/// CTC gradient against central differences; tolerance 1e-4 relative.
SuiteResult check_ctc_gradient(std::size_t instances = 100, std::uint64_t seed = 7);

/// Rotated crops of linear ramps against 64x oversampled averaging;
/// tolerance 1e-3 per cell.
SuiteResult check_rroi_align_dense(std::size_t boxes = 50, std::uint64_t seed = 8);

/// rroi_align with theta = 0 against roi_align; tolerance 1e-9.
SuiteResult check_rroi_matches_roi_align(std::size_t boxes = 200, std::uint64_t seed = 9);

/// conv2d_forward against the naive loop on random 5x5x3 inputs;
/// tolerance 1e-12.
SuiteResult check_conv_naive(std::size_t cases = 200, std::uint64_t seed = 10);

/// Deformable convolution with zero offsets against conv2d_forward;
/// tolerance 1e-12.
SuiteResult check_deform_zero_offset(std::size_t cases = 200, std::uint64_t seed = 11);

std::vector<std::string> selfcheck_suite_names();

/// Runs every suite once, in selfcheck_suite_names() order.
std::vector<SuiteResult> run_selfcheck(const SelfcheckOptions& options = {});

}  // namespace lpcore
