// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lpcore/anchors.hpp"

namespace lpcore {

struct FocalParams {
  double alpha = 0.25;
  double gamma = 2.0;
};

struct DetLossWeights {
  double lambda_ref = 0.5;
  double lambda_loc = 0.5;
  double lambda_cls = 1.0;
};

struct EndToEndWeights {
  double lambda_det = 1.0;
  double lambda_rec = 0.1;
};

/// A scalar loss and its derivative with respect to the single input.
struct ScalarLoss {
  double loss = 0.0;
  double grad = 0.0;
};

/// Probabilities are clamped into [kProbabilityClamp, 1 - kProbabilityClamp]
/// before the logarithm.
inline constexpr double kProbabilityClamp = 1e-7;

/// -alpha_t * (1 - p_t)^gamma * log(p_t) with p_t = p for y = 1 and 1 - p
/// otherwise; alpha_t = alpha for positives and 1 - alpha for negatives.
/// The gradient is d loss / d p evaluated at the clamped probability.
/// Throws Error(kDomainError) if p is outside [0, 1] or y is not 0 or 1.
ScalarLoss focal_loss(double p, int y, const FocalParams& params = {});

/// 0.5 x^2 for |x| < 1, |x| - 0.5 otherwise.
ScalarLoss smooth_l1(double x);

double regression_loss(const BoxDelta& target, const BoxDelta& pred);
double refinement_loss(const ShapeDelta& target, const ShapeDelta& pred);

/// Loss together with d loss / d pred.
struct RegressionLossGrad {
  double loss = 0.0;
  BoxDelta grad;
};
struct RefinementLossGrad {
  double loss = 0.0;
  ShapeDelta grad;
};

RegressionLossGrad regression_loss_grad(const BoxDelta& target, const BoxDelta& pred);
RefinementLossGrad refinement_loss_grad(const ShapeDelta& target, const ShapeDelta& pred);

/// Throws Error(kDomainError) on negative components.
double detection_loss(double l_ref, double l_loc, double l_cls, const DetLossWeights& w = {});
double end_to_end_loss(double l_det, double l_rec, const EndToEndWeights& w = {});

enum class Reduction {
  kSum,
  /// Divide by max(1, number of positive anchors).
  kMeanOverPositives,
};

/// Per-anchor classification targets: 1 positive, 0 negative, -1 ignored.
enum class ClassTarget : std::int8_t { kIgnore = -1, kNegative = 0, kPositive = 1 };

std::vector<ClassTarget> class_targets(const Assignment& assignment);

struct BatchLoss {
  double loss = 0.0;
  /// d loss / d input, same length as the input; zero for ignored entries.
  std::vector<double> grad;
};

/// Focal loss summed over non-ignored anchors, then reduced.
BatchLoss focal_loss_batch(std::span<const double> probs, std::span<const ClassTarget> targets,
                           const FocalParams& params = {},
                           Reduction reduction = Reduction::kMeanOverPositives);

struct BatchRegressionLoss {
  double loss = 0.0;
  std::vector<BoxDelta> grad;
};

/// Regression loss over positive anchors only.
BatchRegressionLoss regression_loss_batch(std::span<const BoxDelta> targets,
                                          std::span<const BoxDelta> preds,
                                          std::span<const ClassTarget> anchor_targets,
                                          Reduction reduction = Reduction::kMeanOverPositives);

}  // namespace lpcore
