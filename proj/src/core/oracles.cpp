// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#include "lpcore/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lpcore/error.hpp"

namespace lpcore::oracle {

namespace {

double pixel(const FeatureMap& fm, int c, long y, long x) {
  if (y < 0 || x < 0 || y >= fm.height() || x >= fm.width()) return 0.0;
  return fm.data()[(static_cast<std::size_t>(c) * static_cast<std::size_t>(fm.height()) +
                    static_cast<std::size_t>(y)) *
                       static_cast<std::size_t>(fm.width()) +
                   static_cast<std::size_t>(x)];
}

// Weighted sum over the integer lattice points within distance 1 of (x, y).
double interpolate(const FeatureMap& fm, int c, double x, double y) {
  double total = 0.0;
  const long x_lo = static_cast<long>(std::ceil(x - 1.0));
  const long y_lo = static_cast<long>(std::ceil(y - 1.0));
  for (long py = y_lo; py <= y_lo + 1; ++py) {
    const double wy = 1.0 - std::abs(y - static_cast<double>(py));
    if (wy <= 0.0) continue;
    for (long px = x_lo; px <= x_lo + 1; ++px) {
      const double wx = 1.0 - std::abs(x - static_cast<double>(px));
      if (wx <= 0.0) continue;
      total += wy * wx * pixel(fm, c, py, px);
    }
  }
  return total;
}

double rect_area_at(std::span<const Point> points, double angle, double* w, double* h) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  double u_lo = std::numeric_limits<double>::infinity();
  double u_hi = -u_lo;
  double v_lo = u_lo;
  double v_hi = -u_lo;
  for (const Point& p : points) {
    const double u = p.x * c + p.y * s;
    const double v = -p.x * s + p.y * c;
    u_lo = std::min(u_lo, u);
    u_hi = std::max(u_hi, u);
    v_lo = std::min(v_lo, v);
    v_hi = std::max(v_hi, v);
  }
  if (w) *w = u_hi - u_lo;
  if (h) *h = v_hi - v_lo;
  return (u_hi - u_lo) * (v_hi - v_lo);
}

}  // namespace

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

bool inside_box(const RotatedBox& box, double x, double y) {
  const double dx = x - box.cx;
  const double dy = y - box.cy;
  const double c = std::cos(box.theta);
  const double s = std::sin(box.theta);
  const double u = dx * c + dy * s;
  const double v = -dx * s + dy * c;
  return std::abs(u) <= 0.5 * box.w && std::abs(v) <= 0.5 * box.h;
}

double monte_carlo_iou(const RotatedBox& a, const RotatedBox& b, int samples_per_axis,
                       std::uint64_t seed) {
  // Bounding circle radius is enough to enclose each box.
  const double ra = 0.5 * std::hypot(a.w, a.h);
  const double rb = 0.5 * std::hypot(b.w, b.h);
  const double x0 = std::min(a.cx - ra, b.cx - rb);
  const double x1 = std::max(a.cx + ra, b.cx + rb);
  const double y0 = std::min(a.cy - ra, b.cy - rb);
  const double y1 = std::max(a.cy + ra, b.cy + rb);
  const double dx = (x1 - x0) / samples_per_axis;
  const double dy = (y1 - y0) / samples_per_axis;

  const double ca = std::cos(a.theta), sa = std::sin(a.theta);
  const double cb = std::cos(b.theta), sb = std::sin(b.theta);
  std::mt19937_64 rng(seed);
  std::uint64_t in_a = 0, in_b = 0, in_both = 0;
  for (int i = 0; i < samples_per_axis; ++i) {
    for (int j = 0; j < samples_per_axis; ++j) {
      const double x = x0 + (j + uniform(rng, 0.0, 1.0)) * dx;
      const double y = y0 + (i + uniform(rng, 0.0, 1.0)) * dy;
      const double pax = x - a.cx, pay = y - a.cy;
      const double pbx = x - b.cx, pby = y - b.cy;
      const bool hit_a = std::abs(pax * ca + pay * sa) <= 0.5 * a.w &&
                         std::abs(-pax * sa + pay * ca) <= 0.5 * a.h;
      const bool hit_b = std::abs(pbx * cb + pby * sb) <= 0.5 * b.w &&
                         std::abs(-pbx * sb + pby * cb) <= 0.5 * b.h;
      in_a += hit_a;
      in_b += hit_b;
      in_both += hit_a && hit_b;
    }
  }
  const std::uint64_t uni = in_a + in_b - in_both;
  return uni == 0 ? 0.0 : static_cast<double>(in_both) / static_cast<double>(uni);
}

MinAreaRect min_area_rect_scan(std::span<const Point> points, int steps) {
  const double period = std::numbers::pi / 2.0;
  double best_angle = 0.0;
  double best_area = std::numeric_limits<double>::infinity();
  for (int i = 0; i < steps; ++i) {
    const double angle = period * i / steps;
    const double area = rect_area_at(points, angle, nullptr, nullptr);
    if (area < best_area) {
      best_area = area;
      best_angle = angle;
    }
  }
  // Golden-section refinement around the best grid angle.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_angle - period / steps;
  double hi = best_angle + period / steps;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double m1 = hi - phi * (hi - lo);
    const double m2 = lo + phi * (hi - lo);
    if (rect_area_at(points, m1, nullptr, nullptr) < rect_area_at(points, m2, nullptr, nullptr)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  MinAreaRect out;
  out.angle = 0.5 * (lo + hi);
  out.area = rect_area_at(points, out.angle, &out.w, &out.h);
  return out;
}

double ctc_log_likelihood_brute_force(std::span<const double> log_probs, std::size_t steps,
                                      std::size_t classes, const std::vector<int>& target) {
  std::vector<std::size_t> path(steps, 0);
  double total = -std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<int> collapsed;
    int previous = -1;
    double log_path = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
      const int k = static_cast<int>(path[t]);
      log_path += log_probs[t * classes + path[t]];
      if (k != previous && k != 0) collapsed.push_back(k);
      previous = k;
    }
    if (collapsed == target) {
      if (total == -std::numeric_limits<double>::infinity()) {
        total = log_path;
      } else {
        const double hi = std::max(total, log_path);
        total = hi + std::log(std::exp(total - hi) + std::exp(log_path - hi));
      }
    }
    std::size_t t = 0;
    while (t < steps && ++path[t] == classes) path[t++] = 0;
    if (t == steps) break;
  }
  return total;
}

double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double relative_error(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

FeatureMap dense_rroi_align(const FeatureMap& fm, const RotatedBox& box, const CropSpec& spec,
                            int oversample) {
  FeatureMap out(fm.channels(), spec.out_h, spec.out_w);
  const double c = std::cos(box.theta);
  const double s = std::sin(box.theta);
  const double cell_w = box.w / spec.out_w;
  const double cell_h = box.h / spec.out_h;
  for (int ch = 0; ch < fm.channels(); ++ch) {
    for (int i = 0; i < spec.out_h; ++i) {
      for (int j = 0; j < spec.out_w; ++j) {
        double sum = 0.0;
        for (int a = 0; a < oversample; ++a) {
          const double v = -0.5 * box.h + cell_h * (i + (a + 0.5) / oversample);
          for (int b = 0; b < oversample; ++b) {
            const double u = -0.5 * box.w + cell_w * (j + (b + 0.5) / oversample);
            sum += interpolate(fm, ch, box.cx + u * c - v * s, box.cy + u * s + v * c);
          }
        }
        out.at(ch, i, j) = sum / (static_cast<double>(oversample) * oversample);
      }
    }
  }
  return out;
}

FeatureMap naive_conv2d(const FeatureMap& fm, const ConvKernel& kernel, const ConvGeometry& geom) {
  const int p = geom.padding;
  const int padded_h = fm.height() + 2 * p;
  const int padded_w = fm.width() + 2 * p;
  std::vector<double> padded(static_cast<std::size_t>(fm.channels()) * padded_h * padded_w, 0.0);
  for (int c = 0; c < fm.channels(); ++c) {
    for (int y = 0; y < fm.height(); ++y) {
      for (int x = 0; x < fm.width(); ++x) {
        padded[(static_cast<std::size_t>(c) * padded_h + y + p) * padded_w + x + p] = fm.at(c, y, x);
      }
    }
  }
  const int out_h = (padded_h - kernel.kernel_h) / geom.stride + 1;
  const int out_w = (padded_w - kernel.kernel_w) / geom.stride + 1;
  FeatureMap out(kernel.out_channels, out_h, out_w);
  for (int oc = 0; oc < kernel.out_channels; ++oc) {
    for (int oy = 0; oy < out_h; ++oy) {
      for (int ox = 0; ox < out_w; ++ox) {
        double acc = kernel.bias.empty() ? 0.0 : kernel.bias[static_cast<std::size_t>(oc)];
        for (int ic = 0; ic < kernel.in_channels; ++ic) {
          for (int ky = 0; ky < kernel.kernel_h; ++ky) {
            for (int kx = 0; kx < kernel.kernel_w; ++kx) {
              const int y = oy * geom.stride + ky;
              const int x = ox * geom.stride + kx;
              acc += kernel.weight(oc, ic, ky, kx) *
                     padded[(static_cast<std::size_t>(ic) * padded_h + y) * padded_w + x];
            }
          }
        }
        out.at(oc, oy, ox) = acc;
      }
    }
  }
  return out;
}

}  // namespace lpcore::oracle
