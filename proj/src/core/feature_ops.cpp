// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#include "lpcore/feature_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lpcore/error.hpp"
#include "lpcore/parallel.hpp"

namespace lpcore {

namespace {

void check_dims(int channels, int height, int width) {
  if (channels <= 0 || height <= 0 || width <= 0) {
    throw Error(ErrorCode::kShapeMismatch, "feature map dimensions must be positive");
  }
}

void check_spec(const CropSpec& spec) {
  if (spec.out_h <= 0 || spec.out_w <= 0 || spec.sampling_ratio <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "crop spec fields must be positive");
  }
}

double sample(const FeatureMap& fm, double x, double y, int c) noexcept {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  // Far outside: every neighbor is padding.
  if (!(fx >= -1.0 && fy >= -1.0 && fx <= fm.width() && fy <= fm.height())) return 0.0;
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double lx = x - fx;
  const double ly = y - fy;
  const double hx = 1.0 - lx;
  const double hy = 1.0 - ly;
  return hy * hx * fm.value_or_zero(c, y0, x0) + hy * lx * fm.value_or_zero(c, y0, x0 + 1) +
         ly * hx * fm.value_or_zero(c, y0 + 1, x0) + ly * lx * fm.value_or_zero(c, y0 + 1, x0 + 1);
}

// Averages precomputed sample positions per output cell, for every channel.
FeatureMap pool_samples(const FeatureMap& fm, const CropSpec& spec,
                        const std::vector<Point>& positions) {
  const std::size_t per_cell = static_cast<std::size_t>(spec.sampling_ratio) *
                               static_cast<std::size_t>(spec.sampling_ratio);
  const double inv = 1.0 / static_cast<double>(per_cell);
  FeatureMap out(fm.channels(), spec.out_h, spec.out_w);
  parallel_for(static_cast<std::size_t>(fm.channels()), [&](std::size_t ch) {
    const int c = static_cast<int>(ch);
    std::size_t k = 0;
    for (int i = 0; i < spec.out_h; ++i) {
      for (int j = 0; j < spec.out_w; ++j) {
        double acc = 0.0;
        for (std::size_t s = 0; s < per_cell; ++s, ++k) {
          acc += sample(fm, positions[k].x, positions[k].y, c);
        }
        out.at(c, i, j) = acc * inv;
      }
    }
  });
  return out;
}

void check_kernel(const FeatureMap& fm, const ConvKernel& kernel) {
  if (kernel.out_channels <= 0 || kernel.kernel_h <= 0 || kernel.kernel_w <= 0) {
    throw Error(ErrorCode::kShapeMismatch, "kernel dimensions must be positive");
  }
  if (kernel.in_channels != fm.channels()) {
    throw Error(ErrorCode::kShapeMismatch,
                "kernel expects " + std::to_string(kernel.in_channels) +
                    " input channels, map has " + std::to_string(fm.channels()));
  }
  const std::size_t expected = static_cast<std::size_t>(kernel.out_channels) *
                               static_cast<std::size_t>(kernel.in_channels) *
                               static_cast<std::size_t>(kernel.kernel_h) *
                               static_cast<std::size_t>(kernel.kernel_w);
  if (kernel.weights.size() != expected) {
    throw Error(ErrorCode::kShapeMismatch, "kernel weight count does not match its shape");
  }
  if (!kernel.bias.empty() &&
      kernel.bias.size() != static_cast<std::size_t>(kernel.out_channels)) {
    throw Error(ErrorCode::kShapeMismatch, "bias length must equal output channels");
  }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_lstm(const LstmParams& p, std::size_t input_size) {
  if (p.input_size <= 0 || p.hidden_size <= 0 ||
      static_cast<std::size_t>(p.input_size) != input_size) {
    throw Error(ErrorCode::kShapeMismatch, "LSTM input size does not match the sequence");
  }
  const std::size_t gates = 4 * static_cast<std::size_t>(p.hidden_size);
  if (p.w_ih.size() != gates * static_cast<std::size_t>(p.input_size) ||
      p.w_hh.size() != gates * static_cast<std::size_t>(p.hidden_size) ||
      p.bias.size() != gates) {
    throw Error(ErrorCode::kShapeMismatch, "LSTM parameter sizes are inconsistent");
  }
}

// Hidden states in step order of `order`, stored at out[step][offset..].
void run_lstm(const FeatureSequence& seq, const LstmParams& p, bool reverse,
              std::size_t offset, FeatureSequence& out) {
  const std::size_t hidden = static_cast<std::size_t>(p.hidden_size);
  const std::size_t input = static_cast<std::size_t>(p.input_size);
  std::vector<double> h(hidden, 0.0);
  std::vector<double> c(hidden, 0.0);
  std::vector<double> gates(4 * hidden);
  const std::size_t steps = seq.size();
  for (std::size_t n = 0; n < steps; ++n) {
    const std::size_t t = reverse ? steps - 1 - n : n;
    const std::vector<double>& x = seq[t];
    for (std::size_t g = 0; g < 4 * hidden; ++g) {
      double acc = p.bias[g];
      for (std::size_t k = 0; k < input; ++k) acc += p.w_ih[g * input + k] * x[k];
      for (std::size_t k = 0; k < hidden; ++k) acc += p.w_hh[g * hidden + k] * h[k];
      gates[g] = acc;
    }
    for (std::size_t k = 0; k < hidden; ++k) {
      const double i_gate = sigmoid(gates[k]);
      const double f_gate = sigmoid(gates[hidden + k]);
      const double g_gate = std::tanh(gates[2 * hidden + k]);
      const double o_gate = sigmoid(gates[3 * hidden + k]);
      c[k] = f_gate * c[k] + i_gate * g_gate;
      h[k] = o_gate * std::tanh(c[k]);
      out[t][offset + k] = h[k];
    }
  }
}

}  // namespace

FeatureMap::FeatureMap(int channels, int height, int width, double fill) {
  check_dims(channels, height, width);
  channels_ = channels;
  height_ = height;
  width_ = width;
  data_.assign(static_cast<std::size_t>(channels) * static_cast<std::size_t>(height) *
                   static_cast<std::size_t>(width),
               fill);
}

FeatureMap::FeatureMap(int channels, int height, int width, std::vector<double> data) {
  check_dims(channels, height, width);
  const std::size_t expected = static_cast<std::size_t>(channels) *
                               static_cast<std::size_t>(height) *
                               static_cast<std::size_t>(width);
  if (data.size() != expected) {
    throw Error(ErrorCode::kShapeMismatch, "feature data length does not match dimensions");
  }
  if (!std::all_of(data.begin(), data.end(), [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::kInvalidArgument, "feature map values must be finite");
  }
  channels_ = channels;
  height_ = height;
  width_ = width;
  data_ = std::move(data);
}

AxisBox axis_box_of(const RotatedBox& box) {
  return {box.cx - 0.5 * box.w, box.cy - 0.5 * box.h, box.cx + 0.5 * box.w,
          box.cy + 0.5 * box.h};
}

double bilinear_sample(const FeatureMap& fm, double x, double y, int channel) {
  if (channel < 0 || channel >= fm.channels()) {
    throw Error(ErrorCode::kInvalidArgument, "channel out of range");
  }
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw Error(ErrorCode::kInvalidArgument, "sample coordinates must be finite");
  }
  return sample(fm, x, y, channel);
}

FeatureMap rroi_align(const FeatureMap& fm, const RotatedBox& box, const CropSpec& spec) {
  check_spec(spec);
  validate_box(box);
  const double cos_t = std::cos(box.theta);
  const double sin_t = std::sin(box.theta);
  const double bin_w = box.w / spec.out_w;
  const double bin_h = box.h / spec.out_h;
  const int r = spec.sampling_ratio;
  std::vector<Point> positions;
  positions.reserve(static_cast<std::size_t>(spec.out_h) * spec.out_w * r * r);
  for (int i = 0; i < spec.out_h; ++i) {
    for (int j = 0; j < spec.out_w; ++j) {
      for (int sy = 0; sy < r; ++sy) {
        const double ly = -0.5 * box.h + (i + (sy + 0.5) / r) * bin_h;
        for (int sx = 0; sx < r; ++sx) {
          const double lx = -0.5 * box.w + (j + (sx + 0.5) / r) * bin_w;
          positions.push_back(
              {box.cx + lx * cos_t - ly * sin_t, box.cy + lx * sin_t + ly * cos_t});
        }
      }
    }
  }
  return pool_samples(fm, spec, positions);
}

FeatureMap roi_align(const FeatureMap& fm, const AxisBox& box, const CropSpec& spec) {
  check_spec(spec);
  if (!(box.x2 > box.x1) || !(box.y2 > box.y1)) {
    throw Error(ErrorCode::kInvalidArgument, "axis box must have positive extent");
  }
  const double bin_w = (box.x2 - box.x1) / spec.out_w;
  const double bin_h = (box.y2 - box.y1) / spec.out_h;
  const int r = spec.sampling_ratio;
  std::vector<Point> positions;
  positions.reserve(static_cast<std::size_t>(spec.out_h) * spec.out_w * r * r);
  for (int i = 0; i < spec.out_h; ++i) {
    for (int j = 0; j < spec.out_w; ++j) {
      for (int sy = 0; sy < r; ++sy) {
        const double y = box.y1 + (i + (sy + 0.5) / r) * bin_h;
        for (int sx = 0; sx < r; ++sx) {
          positions.push_back({box.x1 + (j + (sx + 0.5) / r) * bin_w, y});
        }
      }
    }
  }
  return pool_samples(fm, spec, positions);
}

FeatureMap roi_pool(const FeatureMap& fm, const AxisBox& box, const CropSpec& spec) {
  check_spec(spec);
  if (!(box.x2 > box.x1) || !(box.y2 > box.y1)) {
    throw Error(ErrorCode::kInvalidArgument, "axis box must have positive extent");
  }
  // First and last pixel whose center the box covers.
  const int start_x = static_cast<int>(std::floor(box.x1 + 0.5));
  const int start_y = static_cast<int>(std::floor(box.y1 + 0.5));
  const int end_x = static_cast<int>(std::ceil(box.x2 - 0.5));
  const int end_y = static_cast<int>(std::ceil(box.y2 - 0.5));
  const double roi_w = std::max(end_x - start_x + 1, 1);
  const double roi_h = std::max(end_y - start_y + 1, 1);
  const double bin_w = roi_w / spec.out_w;
  const double bin_h = roi_h / spec.out_h;

  FeatureMap out(fm.channels(), spec.out_h, spec.out_w);
  parallel_for(static_cast<std::size_t>(fm.channels()), [&](std::size_t ch) {
    const int c = static_cast<int>(ch);
    for (int i = 0; i < spec.out_h; ++i) {
      const int y_lo = std::clamp(static_cast<int>(std::floor(i * bin_h)) + start_y, 0, fm.height());
      const int y_hi =
          std::clamp(static_cast<int>(std::ceil((i + 1) * bin_h)) + start_y, 0, fm.height());
      for (int j = 0; j < spec.out_w; ++j) {
        const int x_lo =
            std::clamp(static_cast<int>(std::floor(j * bin_w)) + start_x, 0, fm.width());
        const int x_hi =
            std::clamp(static_cast<int>(std::ceil((j + 1) * bin_w)) + start_x, 0, fm.width());
        if (y_hi <= y_lo || x_hi <= x_lo) {
          out.at(c, i, j) = 0.0;
          continue;
        }
        double best = fm.at(c, y_lo, x_lo);
        for (int y = y_lo; y < y_hi; ++y) {
          for (int x = x_lo; x < x_hi; ++x) best = std::max(best, fm.at(c, y, x));
        }
        out.at(c, i, j) = best;
      }
    }
  });
  return out;
}

int conv_output_extent(int in, int kernel, const ConvGeometry& geom) {
  if (geom.stride <= 0 || geom.padding < 0) {
    throw Error(ErrorCode::kShapeMismatch, "stride must be positive and padding non-negative");
  }
  const int span = in + 2 * geom.padding - kernel;
  if (span < 0) throw Error(ErrorCode::kShapeMismatch, "kernel larger than padded input");
  return span / geom.stride + 1;
}

FeatureMap conv2d_forward(const FeatureMap& fm, const ConvKernel& kernel,
                          const ConvGeometry& geom) {
  check_kernel(fm, kernel);
  const int out_h = conv_output_extent(fm.height(), kernel.kernel_h, geom);
  const int out_w = conv_output_extent(fm.width(), kernel.kernel_w, geom);
  FeatureMap out(kernel.out_channels, out_h, out_w);
  parallel_for(static_cast<std::size_t>(kernel.out_channels), [&](std::size_t o) {
    const int oc = static_cast<int>(o);
    const double bias = kernel.bias.empty() ? 0.0 : kernel.bias[o];
    for (int oy = 0; oy < out_h; ++oy) {
      for (int ox = 0; ox < out_w; ++ox) {
        double acc = 0.0;
        for (int ic = 0; ic < kernel.in_channels; ++ic) {
          for (int ky = 0; ky < kernel.kernel_h; ++ky) {
            const int y = oy * geom.stride - geom.padding + ky;
            for (int kx = 0; kx < kernel.kernel_w; ++kx) {
              const int x = ox * geom.stride - geom.padding + kx;
              acc += kernel.weight(oc, ic, ky, kx) * fm.value_or_zero(ic, y, x);
            }
          }
        }
        out.at(oc, oy, ox) = acc + bias;
      }
    }
  });
  return out;
}

FeatureMap deformable_conv2d_forward(const FeatureMap& fm, const ConvKernel& kernel,
                                     const FeatureMap& offsets, const ConvGeometry& geom) {
  check_kernel(fm, kernel);
  const int out_h = conv_output_extent(fm.height(), kernel.kernel_h, geom);
  const int out_w = conv_output_extent(fm.width(), kernel.kernel_w, geom);
  const int taps = kernel.kernel_h * kernel.kernel_w;
  if (offsets.channels() != 2 * taps || offsets.height() != out_h || offsets.width() != out_w) {
    throw Error(ErrorCode::kShapeMismatch,
                "offsets must have 2*k*k channels and the output spatial size");
  }
  FeatureMap out(kernel.out_channels, out_h, out_w);
  parallel_for(static_cast<std::size_t>(kernel.out_channels), [&](std::size_t o) {
    const int oc = static_cast<int>(o);
    const double bias = kernel.bias.empty() ? 0.0 : kernel.bias[o];
    for (int oy = 0; oy < out_h; ++oy) {
      for (int ox = 0; ox < out_w; ++ox) {
        double acc = 0.0;
        for (int ic = 0; ic < kernel.in_channels; ++ic) {
          for (int ky = 0; ky < kernel.kernel_h; ++ky) {
            for (int kx = 0; kx < kernel.kernel_w; ++kx) {
              const int tap = ky * kernel.kernel_w + kx;
              const double dy = offsets.at(2 * tap, oy, ox);
              const double dx = offsets.at(2 * tap + 1, oy, ox);
              const double y = oy * geom.stride - geom.padding + ky + dy;
              const double x = ox * geom.stride - geom.padding + kx + dx;
              acc += kernel.weight(oc, ic, ky, kx) * sample(fm, x, y, ic);
            }
          }
        }
        out.at(oc, oy, ox) = acc + bias;
      }
    }
  });
  return out;
}

FeatureSequence bilstm_forward(const FeatureSequence& seq, const BiLstmParams& params) {
  if (seq.empty()) return {};
  const std::size_t input = seq.front().size();
  for (const auto& step : seq) {
    if (step.size() != input) {
      throw Error(ErrorCode::kShapeMismatch, "sequence steps differ in width");
    }
  }
  check_lstm(params.forward, input);
  check_lstm(params.backward, input);
  const std::size_t hf = static_cast<std::size_t>(params.forward.hidden_size);
  const std::size_t hb = static_cast<std::size_t>(params.backward.hidden_size);
  FeatureSequence out(seq.size(), std::vector<double>(hf + hb, 0.0));
  run_lstm(seq, params.forward, false, 0, out);
  run_lstm(seq, params.backward, true, hf, out);
  return out;
}

}  // namespace lpcore
