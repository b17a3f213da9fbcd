// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#include "lpcore/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lpcore/error.hpp"

namespace lpcore {

namespace {

void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::kDomainError, std::string(name) + " must be finite and >= 0");
  }
}

double reduction_scale(Reduction reduction, std::span<const ClassTarget> targets) {
  if (reduction == Reduction::kSum) return 1.0;
  const auto positives = std::count(targets.begin(), targets.end(), ClassTarget::kPositive);
  return 1.0 / static_cast<double>(std::max<std::ptrdiff_t>(1, positives));
}

}  // namespace

ScalarLoss focal_loss(double p, int y, const FocalParams& params) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kDomainError, "probability outside [0, 1]");
  }
  if (y != 0 && y != 1) throw Error(ErrorCode::kDomainError, "label must be 0 or 1");
  if (!(params.alpha > 0.0 && params.alpha < 1.0) || !(params.gamma >= 0.0)) {
    throw Error(ErrorCode::kDomainError, "focal parameters need alpha in (0,1), gamma >= 0");
  }
  const double pc = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
  const double pt = y == 1 ? pc : 1.0 - pc;
  const double alpha_t = y == 1 ? params.alpha : 1.0 - params.alpha;
  const double gamma = params.gamma;
  const double one_minus = 1.0 - pt;
  const double log_pt = std::log(pt);
  const double modulator = std::pow(one_minus, gamma);
  const double loss = -alpha_t * modulator * log_pt;
  // d/dpt of -a (1-pt)^g log(pt) = a g (1-pt)^(g-1) log(pt) - a (1-pt)^g / pt
  const double d_modulator = gamma == 0.0 ? 0.0 : gamma * std::pow(one_minus, gamma - 1.0);
  const double dloss_dpt = alpha_t * (d_modulator * log_pt - modulator / pt);
  return {loss, y == 1 ? dloss_dpt : -dloss_dpt};
}

ScalarLoss smooth_l1(double x) {
  const double ax = std::abs(x);
  if (ax < 1.0) return {0.5 * x * x, x};
  return {ax - 0.5, x > 0.0 ? 1.0 : -1.0};
}

RegressionLossGrad regression_loss_grad(const BoxDelta& target, const BoxDelta& pred) {
  RegressionLossGrad out;
  auto term = [&](double t, double p, double& grad) {
    const ScalarLoss s = smooth_l1(t - p);
    out.loss += s.loss;
    grad = -s.grad;
  };
  term(target.dx, pred.dx, out.grad.dx);
  term(target.dy, pred.dy, out.grad.dy);
  term(target.dw, pred.dw, out.grad.dw);
  term(target.dh, pred.dh, out.grad.dh);
  term(target.dtheta, pred.dtheta, out.grad.dtheta);
  return out;
}

RefinementLossGrad refinement_loss_grad(const ShapeDelta& target, const ShapeDelta& pred) {
  RefinementLossGrad out;
  auto term = [&](double t, double p, double& grad) {
    const ScalarLoss s = smooth_l1(t - p);
    out.loss += s.loss;
    grad = -s.grad;
  };
  term(target.dw, pred.dw, out.grad.dw);
  term(target.dh, pred.dh, out.grad.dh);
  term(target.dtheta, pred.dtheta, out.grad.dtheta);
  return out;
}

double regression_loss(const BoxDelta& target, const BoxDelta& pred) {
  return regression_loss_grad(target, pred).loss;
}

double refinement_loss(const ShapeDelta& target, const ShapeDelta& pred) {
  return refinement_loss_grad(target, pred).loss;
}

double detection_loss(double l_ref, double l_loc, double l_cls, const DetLossWeights& w) {
  require_non_negative(l_ref, "L_ref");
  require_non_negative(l_loc, "L_loc");
  require_non_negative(l_cls, "L_cls");
  return w.lambda_ref * l_ref + w.lambda_loc * l_loc + w.lambda_cls * l_cls;
}

double end_to_end_loss(double l_det, double l_rec, const EndToEndWeights& w) {
  require_non_negative(l_det, "L_det");
  require_non_negative(l_rec, "L_rec");
  return w.lambda_det * l_det + w.lambda_rec * l_rec;
}

std::vector<ClassTarget> class_targets(const Assignment& assignment) {
  std::vector<ClassTarget> out;
  out.reserve(assignment.matches.size());
  for (const AnchorMatch& m : assignment.matches) {
    switch (m.label) {
      case AnchorLabel::kPositive: out.push_back(ClassTarget::kPositive); break;
      case AnchorLabel::kNegative: out.push_back(ClassTarget::kNegative); break;
      case AnchorLabel::kIgnore: out.push_back(ClassTarget::kIgnore); break;
    }
  }
  return out;
}

BatchLoss focal_loss_batch(std::span<const double> probs, std::span<const ClassTarget> targets,
                           const FocalParams& params, Reduction reduction) {
  if (probs.size() != targets.size()) {
    throw Error(ErrorCode::kShapeMismatch, "probabilities and targets differ in length");
  }
  const double scale = reduction_scale(reduction, targets);
  BatchLoss out;
  out.grad.assign(probs.size(), 0.0);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (targets[i] == ClassTarget::kIgnore) continue;
    const ScalarLoss s = focal_loss(probs[i], targets[i] == ClassTarget::kPositive ? 1 : 0, params);
    out.loss += s.loss;
    out.grad[i] = s.grad * scale;
  }
  out.loss *= scale;
  return out;
}

BatchRegressionLoss regression_loss_batch(std::span<const BoxDelta> targets,
                                          std::span<const BoxDelta> preds,
                                          std::span<const ClassTarget> anchor_targets,
                                          Reduction reduction) {
  if (targets.size() != preds.size() || targets.size() != anchor_targets.size()) {
    throw Error(ErrorCode::kShapeMismatch, "regression inputs differ in length");
  }
  const double scale = reduction_scale(reduction, anchor_targets);
  BatchRegressionLoss out;
  out.grad.assign(preds.size(), BoxDelta{});
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (anchor_targets[i] != ClassTarget::kPositive) continue;
    const RegressionLossGrad r = regression_loss_grad(targets[i], preds[i]);
    out.loss += r.loss;
    out.grad[i] = {r.grad.dx * scale, r.grad.dy * scale, r.grad.dw * scale, r.grad.dh * scale,
                   r.grad.dtheta * scale};
  }
  out.loss *= scale;
  return out;
}

}  // namespace lpcore
