// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Brute-force reference computations. None of these share code with the
// production kernels they are used to check.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "lpcore/ctc.hpp"
#include "lpcore/feature_ops.hpp"
#include "lpcore/geometry.hpp"

namespace lpcore::oracle {

/// Deterministic uniform double in [lo, hi) from the top 53 bits.
double uniform(std::mt19937_64& rng, double lo, double hi);

/// True if (x, y) lies inside the closed rotated rectangle.
bool inside_box(const RotatedBox& box, double x, double y);

/// IoU by jittered-stratified point sampling over the joint bounding
/// rectangle: samples_per_axis^2 points, one per grid cell.
double monte_carlo_iou(const RotatedBox& a, const RotatedBox& b, int samples_per_axis,
                       std::uint64_t seed);

/// Minimum-area enclosing rectangle by scanning `steps` candidate
/// orientations over [0, pi/2) and refining the best one by golden-section
/// search. Returns (area, angle of the w side).
struct MinAreaRect {
  double area = 0.0;
  double angle = 0.0;
  double w = 0.0;
  double h = 0.0;
};
MinAreaRect min_area_rect_scan(std::span<const Point> points, int steps = 20000);

/// log P(target) by enumerating all K^T alignment paths.
double ctc_log_likelihood_brute_force(std::span<const double> log_probs, std::size_t steps,
                                      std::size_t classes, const std::vector<int>& target);

/// Central difference (f(x + h) - f(x - h)) / 2h.
double central_difference(const std::function<double(double)>& f, double x, double h = 1e-5);

/// |a - b| / max(|a|, |b|, floor).
double relative_error(double a, double b, double floor = 1e-6);

/// Averages the bilinear interpolant over each output cell's rotated
/// footprint with oversample^2 midpoint samples.
FeatureMap dense_rroi_align(const FeatureMap& fm, const RotatedBox& box, const CropSpec& spec,
                            int oversample = 64);

/// Six nested loops over an explicitly zero-padded copy of the input.
FeatureMap naive_conv2d(const FeatureMap& fm, const ConvKernel& kernel, const ConvGeometry& geom);

}  // namespace lpcore::oracle
