// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#include "lpcore/selfcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "lpcore/anchors.hpp"
#include "lpcore/ctc.hpp"
#include "lpcore/error.hpp"
#include "lpcore/feature_ops.hpp"
#include "lpcore/geometry.hpp"
#include "lpcore/losses.hpp"
#include "lpcore/oracles.hpp"
#include "lpcore/parallel.hpp"

namespace lpcore {

namespace {

using oracle::uniform;

constexpr double kQuarterPi = std::numbers::pi / 4.0;
constexpr double kFdStep = 1e-5;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

SuiteResult finish(std::string name, double max_error, double tolerance, std::size_t cases,
                   const Stopwatch& clock) {
  SuiteResult r;
  r.name = std::move(name);
  r.max_error = max_error;
  r.tolerance = tolerance;
  r.cases = cases;
  r.seconds = clock.seconds();
  r.passed = max_error < tolerance;
  return r;
}

RotatedBox random_box(std::mt19937_64& rng, double center_span, double min_side, double max_side) {
  return {uniform(rng, -center_span, center_span), uniform(rng, -center_span, center_span),
          uniform(rng, min_side, max_side), uniform(rng, min_side, max_side),
          uniform(rng, -kQuarterPi, kQuarterPi)};
}

double field_error(const RotatedBox& a, const RotatedBox& b) {
  return std::max({std::abs(a.cx - b.cx), std::abs(a.cy - b.cy), std::abs(a.w - b.w),
                   std::abs(a.h - b.h), std::abs(a.theta - b.theta)});
}

FeatureMap random_map(std::mt19937_64& rng, int c, int h, int w) {
  std::vector<double> data(static_cast<std::size_t>(c) * h * w);
  for (double& v : data) v = uniform(rng, -1.0, 1.0);
  return FeatureMap(c, h, w, std::move(data));
}

ConvKernel random_kernel(std::mt19937_64& rng, int out_c, int in_c, int k) {
  ConvKernel kernel{out_c, in_c, k, k, {}, {}};
  kernel.weights.resize(static_cast<std::size_t>(out_c) * in_c * k * k);
  for (double& v : kernel.weights) v = uniform(rng, -1.0, 1.0);
  kernel.bias.resize(static_cast<std::size_t>(out_c));
  for (double& v : kernel.bias) v = uniform(rng, -1.0, 1.0);
  return kernel;
}

double max_abs_diff(const FeatureMap& a, const FeatureMap& b) {
  if (a.channels() != b.channels() || a.height() != b.height() || a.width() != b.width()) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

std::vector<double> random_log_probs(std::mt19937_64& rng, std::size_t steps, std::size_t classes,
                                     double spread) {
  std::vector<double> logits(steps * classes);
  for (double& v : logits) v = uniform(rng, -spread, spread);
  const LogitFrame frame = LogitFrame::from_logits(steps, classes, logits);
  return {frame.data().begin(), frame.data().end()};
}

}  // namespace

SuiteResult check_iou_monte_carlo(std::size_t pairs, int samples_per_axis, std::uint64_t seed) {
  Stopwatch clock;
  std::vector<double> errors(pairs, 0.0);
  parallel_for(pairs, [&](std::size_t i) {
    std::mt19937_64 rng(seed * 1000003ULL + i);
    const RotatedBox a = random_box(rng, 5.0, 1.0, 8.0);
    RotatedBox b = random_box(rng, 4.0, 1.0, 8.0);
    b.cx += a.cx;
    b.cy += a.cy;
    const double exact = rotated_iou(a, b);
    const double sampled = oracle::monte_carlo_iou(a, b, samples_per_axis, rng());
    errors[i] = std::abs(exact - sampled);
  });
  const double worst = errors.empty() ? 0.0 : *std::max_element(errors.begin(), errors.end());
  return finish("rotated_iou_monte_carlo", worst, 5e-3, pairs, clock);
}

SuiteResult check_encode_decode(std::size_t pairs, std::uint64_t seed) {
  Stopwatch clock;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const RotatedBox b = random_box(rng, 500.0, 2.0, 200.0);
    const RotatedBox g = random_box(rng, 500.0, 2.0, 200.0);
    worst = std::max(worst, field_error(decode_delta(b, encode_delta(b, g)), g));
    const ShapeDelta d{uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)};
    const RotatedBox refined = refine_anchor(b, d);
    if (refined.cx != b.cx || refined.cy != b.cy) worst = std::numeric_limits<double>::infinity();
  }
  return finish("anchor_encode_decode", worst, 1e-9, pairs, clock);
}

SuiteResult check_focal_gradient(std::size_t points, std::uint64_t seed) {
  Stopwatch clock;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double p = uniform(rng, 0.02, 0.98);
    const int y = static_cast<int>(rng() & 1U);
    const FocalParams params{uniform(rng, 0.05, 0.95), uniform(rng, 0.0, 5.0)};
    const double analytic = focal_loss(p, y, params).grad;
    const double numeric = oracle::central_difference(
        [&](double x) { return focal_loss(x, y, params).loss; }, p, kFdStep);
    worst = std::max(worst, oracle::relative_error(analytic, numeric));
  }
  return finish("focal_gradient", worst, 1e-4, points, clock);
}

SuiteResult check_focal_cross_entropy(std::size_t points, std::uint64_t seed) {
  Stopwatch clock;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  const FocalParams params{0.5, 0.0};
  for (std::size_t i = 0; i < points; ++i) {
    const double p = uniform(rng, 0.001, 0.999);
    const int y = static_cast<int>(rng() & 1U);
    const double cross_entropy = -(y == 1 ? std::log(p) : std::log(1.0 - p));
    worst = std::max(worst, std::abs(focal_loss(p, y, params).loss - 0.5 * cross_entropy));
  }
  return finish("focal_cross_entropy", worst, 1e-12, points, clock);
}

SuiteResult check_smooth_l1_gradient(std::size_t points, std::uint64_t seed) {
  Stopwatch clock;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  auto draw = [&] { return uniform(rng, -3.0, 3.0); };
  for (std::size_t i = 0; i < points; ++i) {
    const BoxDelta target{draw(), draw(), draw(), draw(), draw()};
    const BoxDelta pred{draw(), draw(), draw(), draw(), draw()};
    const RegressionLossGrad g = regression_loss_grad(target, pred);
    double BoxDelta::* const fields[] = {&BoxDelta::dx, &BoxDelta::dy, &BoxDelta::dw,
                                        &BoxDelta::dh, &BoxDelta::dtheta};
    for (auto field : fields) {
      const double numeric = oracle::central_difference(
          [&](double v) {
            BoxDelta moved = pred;
            moved.*field = v;
            return regression_loss(target, moved);
          },
          pred.*field, kFdStep);
      worst = std::max(worst, oracle::relative_error(g.grad.*field, numeric));
    }
    const ShapeDelta st{draw(), draw(), draw()};
    const ShapeDelta sp{draw(), draw(), draw()};
    const RefinementLossGrad rg = refinement_loss_grad(st, sp);
    double ShapeDelta::* const shape_fields[] = {&ShapeDelta::dw, &ShapeDelta::dh,
                                                &ShapeDelta::dtheta};
    for (auto field : shape_fields) {
      const double numeric = oracle::central_difference(
          [&](double v) {
            ShapeDelta moved = sp;
            moved.*field = v;
            return refinement_loss(st, moved);
          },
          sp.*field, kFdStep);
      worst = std::max(worst, oracle::relative_error(rg.grad.*field, numeric));
    }
  }
  return finish("smooth_l1_gradient", worst, 1e-4, points, clock);
}

SuiteResult check_ctc_brute_force(int per_shape, std::uint64_t seed) {
  Stopwatch clock;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  std::size_t cases = 0;
  for (std::size_t classes = 2; classes <= 4; ++classes) {
    for (std::size_t steps = 1; steps <= 6; ++steps) {
      for (std::size_t length = 0; length <= 3; ++length) {
        for (int rep = 0; rep < per_shape; ++rep) {
          LabelSequence target;
          for (std::size_t i = 0; i < length; ++i) {
            target.indices.push_back(1 + static_cast<int>(rng() % (classes - 1)));
          }
          if (ctc_min_steps(target) > steps) continue;
          const std::vector<double> lp = random_log_probs(rng, steps, classes, 3.0);
          const LogitFrame frame(steps, classes, lp);
          const double expected =
              oracle::ctc_log_likelihood_brute_force(lp, steps, classes, target.indices);
          worst = std::max(worst, std::abs(-ctc_loss(frame, target).loss - expected));
          ++cases;
        }
      }
    }
  }
  return finish("ctc_brute_force", worst, 1e-9, cases, clock);
}

SuiteResult check_ctc_gradient(std::size_t instances, std::uint64_t seed) {
  Stopwatch clock;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  std::size_t done = 0;
  while (done < instances) {
    const std::size_t classes = 2 + rng() % 5;
    const std::size_t steps = 1 + rng() % 10;
    LabelSequence target;
    const std::size_t length = rng() % 5;
    for (std::size_t i = 0; i < length; ++i) {
      target.indices.push_back(1 + static_cast<int>(rng() % (classes - 1)));
    }
    if (ctc_min_steps(target) > steps) continue;
    std::vector<double> lp = random_log_probs(rng, steps, classes, 2.0);
    const CtcResult result = ctc_loss_log_potentials(lp, steps, classes, target);
    for (std::size_t i = 0; i < lp.size(); ++i) {
      const double saved = lp[i];
      const double numeric = oracle::central_difference(
          [&](double v) {
            lp[i] = v;
            const double loss = ctc_loss_log_potentials(lp, steps, classes, target).loss;
            lp[i] = saved;
            return loss;
          },
          saved, kFdStep);
      worst = std::max(worst, oracle::relative_error(result.grad[i], numeric));
    }
    ++done;
  }
  return finish("ctc_gradient", worst, 1e-4, instances, clock);
}

SuiteResult check_rroi_align_dense(std::size_t boxes, std::uint64_t seed) {
  Stopwatch clock;
  std::mt19937_64 rng(seed);
  constexpr int kH = 48;
  constexpr int kW = 96;
  FeatureMap ramp(3, kH, kW);
  for (int c = 0; c < 3; ++c) {
    const double base = uniform(rng, -2.0, 2.0);
    const double gx = uniform(rng, -0.5, 0.5);
    const double gy = uniform(rng, -0.5, 0.5);
    for (int y = 0; y < kH; ++y) {
      for (int x = 0; x < kW; ++x) ramp.at(c, y, x) = base + gx * x + gy * y;
    }
  }
  double worst = 0.0;
  std::size_t done = 0;
  while (done < boxes) {
    RotatedBox box{uniform(rng, 10.0, kW - 10.0), uniform(rng, 10.0, kH - 10.0),
                   uniform(rng, 8.0, 40.0), uniform(rng, 3.0, 14.0),
                   uniform(rng, -kQuarterPi, kQuarterPi)};
    // Keep the whole footprint inside the pixel-center lattice.
    bool inside = true;
    for (const Point& p : rbox_to_quad(box)) {
      inside = inside && p.x >= 0.0 && p.y >= 0.0 && p.x <= kW - 1.0 && p.y <= kH - 1.0;
    }
    if (!inside) continue;
    const CropSpec spec{8, 25, 2};
    worst = std::max(worst, max_abs_diff(rroi_align(ramp, box, spec),
                                         oracle::dense_rroi_align(ramp, box, spec, 64)));
    ++done;
  }
  return finish("rroi_align_dense", worst, 1e-3, boxes, clock);
}

SuiteResult check_rroi_matches_roi_align(std::size_t boxes, std::uint64_t seed) {
  Stopwatch clock;
  std::mt19937_64 rng(seed);
  const FeatureMap fm = random_map(rng, 4, 32, 64);
  double worst = 0.0;
  for (std::size_t i = 0; i < boxes; ++i) {
    const RotatedBox box{uniform(rng, -5.0, 69.0), uniform(rng, -5.0, 37.0),
                         uniform(rng, 1.0, 50.0), uniform(rng, 1.0, 20.0), 0.0};
    const CropSpec spec{1 + static_cast<int>(rng() % 10), 1 + static_cast<int>(rng() % 30),
                        1 + static_cast<int>(rng() % 4)};
    worst = std::max(worst, max_abs_diff(rroi_align(fm, box, spec),
                                         roi_align(fm, axis_box_of(box), spec)));
  }
  return finish("rroi_matches_roi_align", worst, 1e-9, boxes, clock);
}

SuiteResult check_conv_naive(std::size_t cases, std::uint64_t seed) {
  Stopwatch clock;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < cases; ++i) {
    const FeatureMap fm = random_map(rng, 3, 5, 5);
    const int k = 1 + 2 * static_cast<int>(rng() % 3);
    const ConvKernel kernel = random_kernel(rng, 1 + static_cast<int>(rng() % 4), 3, k);
    const ConvGeometry geom{1 + static_cast<int>(rng() % 2), static_cast<int>(rng() % 3)};
    if (5 + 2 * geom.padding < k) continue;
    worst = std::max(worst, max_abs_diff(conv2d_forward(fm, kernel, geom),
                                         oracle::naive_conv2d(fm, kernel, geom)));
  }
  return finish("conv_naive_loop", worst, 1e-12, cases, clock);
}

SuiteResult check_deform_zero_offset(std::size_t cases, std::uint64_t seed) {
  Stopwatch clock;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < cases; ++i) {
    const FeatureMap fm = random_map(rng, 3, 5 + static_cast<int>(rng() % 4), 5 + static_cast<int>(rng() % 4));
    const int k = 1 + 2 * static_cast<int>(rng() % 2);
    const ConvKernel kernel = random_kernel(rng, 1 + static_cast<int>(rng() % 4), 3, k);
    const ConvGeometry geom{1 + static_cast<int>(rng() % 2), static_cast<int>(rng() % 2)};
    const FeatureMap plain = conv2d_forward(fm, kernel, geom);
    const FeatureMap offsets(2 * k * k, plain.height(), plain.width(), 0.0);
    worst = std::max(worst, max_abs_diff(deformable_conv2d_forward(fm, kernel, offsets, geom), plain));
  }
  return finish("deform_conv_zero_offset", worst, 1e-12, cases, clock);
}

std::vector<std::string> selfcheck_suite_names() {
  return {"rotated_iou_monte_carlo", "anchor_encode_decode", "focal_gradient",
          "focal_cross_entropy",     "smooth_l1_gradient",   "ctc_brute_force",
          "ctc_gradient",            "rroi_align_dense",     "rroi_matches_roi_align",
          "conv_naive_loop",         "deform_conv_zero_offset"};
}

std::vector<SuiteResult> run_selfcheck(const SelfcheckOptions& options) {
  const std::vector<std::string> names = selfcheck_suite_names();
  if (!options.inject_fault.empty() &&
      std::find(names.begin(), names.end(), options.inject_fault) == names.end()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown suite '" + options.inject_fault + "'");
  }
  std::vector<SuiteResult> results = {
      check_iou_monte_carlo(),      check_encode_decode(),        check_focal_gradient(),
      check_focal_cross_entropy(),  check_smooth_l1_gradient(),   check_ctc_brute_force(),
      check_ctc_gradient(),         check_rroi_align_dense(),     check_rroi_matches_roi_align(),
      check_conv_naive(),           check_deform_zero_offset()};
  for (SuiteResult& r : results) {
    if (r.name == options.inject_fault) {
      r.max_error += r.tolerance + 1.0;
      r.passed = false;
    }
  }
  return results;
}

}  // namespace lpcore
