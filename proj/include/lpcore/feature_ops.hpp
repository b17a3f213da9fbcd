// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lpcore/geometry.hpp"

namespace lpcore {

/// Dense channels x height x width tensor, row-major. Pixel (x, y) has its
/// center at integer coordinates; pixel x covers [x - 0.5, x + 0.5].
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int channels, int height, int width, double fill = 0.0);
  FeatureMap(int channels, int height, int width, std::vector<double> data);

  int channels() const noexcept { return channels_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& at(int c, int y, int x) { return data_[index(c, y, x)]; }
  double at(int c, int y, int x) const { return data_[index(c, y, x)]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  /// Value at (c, y, x), or 0 when (y, x) lies outside the map.
  double value_or_zero(int c, int y, int x) const noexcept {
    if (y < 0 || y >= height_ || x < 0 || x >= width_) return 0.0;
    return data_[index(c, y, x)];
  }

 private:
  std::size_t index(int c, int y, int x) const noexcept {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(height_) +
            static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

struct CropSpec {
  int out_h = 8;
  int out_w = 25;
  int sampling_ratio = 2;
};

/// Axis-aligned region in feature-map coordinates.
struct AxisBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;
};

/// Axis-aligned region with the same center and size as `box`; theta ignored.
AxisBox axis_box_of(const RotatedBox& box);

/// Bilinear interpolation over the four integer neighbors of (x, y). Each
/// neighbor outside the map contributes zero.
double bilinear_sample(const FeatureMap& fm, double x, double y, int channel);

/// Crops a rotated region into channels x out_h x out_w. Box-local x spans
/// the width over out_w columns and box-local y spans the height over out_h
/// rows; each cell averages sampling_ratio^2 bilinear samples placed at the
/// cell fractions (s + 0.5) / sampling_ratio.
FeatureMap rroi_align(const FeatureMap& fm, const RotatedBox& box, const CropSpec& spec = {});

/// Axis-aligned average of bilinear samples, same sample placement as
/// rroi_align with theta = 0.
FeatureMap roi_align(const FeatureMap& fm, const AxisBox& box, const CropSpec& spec = {});

/// Quantized max pooling: the box is rounded to integer pixels and split
/// into floor/ceil bins. Empty bins yield 0. sampling_ratio is unused.
FeatureMap roi_pool(const FeatureMap& fm, const AxisBox& box, const CropSpec& spec = {});

/// out_channels x in_channels x kernel_h x kernel_w weights, row-major.
struct ConvKernel {
  int out_channels = 0;
  int in_channels = 0;
  int kernel_h = 0;
  int kernel_w = 0;
  std::vector<double> weights;
  /// Empty, or one entry per output channel.
  std::vector<double> bias;

  double weight(int oc, int ic, int ky, int kx) const {
    return weights[((static_cast<std::size_t>(oc) * static_cast<std::size_t>(in_channels) +
                     static_cast<std::size_t>(ic)) *
                        static_cast<std::size_t>(kernel_h) +
                    static_cast<std::size_t>(ky)) *
                       static_cast<std::size_t>(kernel_w) +
                   static_cast<std::size_t>(kx)];
  }
};

struct ConvGeometry {
  int stride = 1;
  int padding = 0;
};

/// Output extent floor((in + 2p - k) / s) + 1; throws
/// Error(kShapeMismatch) if that is not positive.
int conv_output_extent(int in, int kernel, const ConvGeometry& geom);

/// Cross-correlation with zero padding.
FeatureMap conv2d_forward(const FeatureMap& fm, const ConvKernel& kernel,
                          const ConvGeometry& geom = {});

/// Deformable convolution. `offsets` has 2 * kernel_h * kernel_w channels
/// and the output spatial size; channels 2t and 2t + 1 hold (dy, dx) for
/// tap t = ky * kernel_w + kx. Tap t of output (oy, ox) samples at
/// (oy * s - p + ky + dy, ox * s - p + kx + dx).
FeatureMap deformable_conv2d_forward(const FeatureMap& fm, const ConvKernel& kernel,
                                     const FeatureMap& offsets, const ConvGeometry& geom = {});

/// Single-direction LSTM weights, gates ordered (input, forget, cell, output).
struct LstmParams {
  int input_size = 0;
  int hidden_size = 0;
  /// 4H x I, row-major.
  std::vector<double> w_ih;
  /// 4H x H, row-major.
  std::vector<double> w_hh;
  /// 4H.
  std::vector<double> bias;
};

struct BiLstmParams {
  LstmParams forward;
  LstmParams backward;
};

using FeatureSequence = std::vector<std::vector<double>>;

/// Each output step is [forward hidden, backward hidden] (2H wide); the
/// backward direction runs from the last step to the first.
FeatureSequence bilstm_forward(const FeatureSequence& seq, const BiLstmParams& params);

}  // namespace lpcore
