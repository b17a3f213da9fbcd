// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#include "lpcore/lpcore.h"

#include <cstring>
#include <filesystem>
#include <new>
#include <string>
#include <vector>

#include "lpcore/anchors.hpp"
#include "lpcore/bench.hpp"
#include "lpcore/ctc.hpp"
#include "lpcore/dataio.hpp"
#include "lpcore/error.hpp"
#include "lpcore/eval.hpp"
#include "lpcore/feature_ops.hpp"
#include "lpcore/geometry.hpp"
#include "lpcore/losses.hpp"
#include "lpcore/report.hpp"
#include "lpcore/selfcheck.hpp"

struct lpcore_feature_map {
  lpcore::FeatureMap map;
};

struct lpcore_alphabet {
  lpcore::Alphabet alphabet;
};

struct lpcore_report {
  lpcore::EvalReport report;
  std::string text;
  std::string summary;
};

struct lpcore_selfcheck {
  std::vector<lpcore::SuiteResult> suites;
};

struct lpcore_bench {
  std::vector<lpcore::BenchRow> rows;
};

namespace {

thread_local std::string g_last_error;

lpcore_status fail(lpcore_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

lpcore_status to_status(lpcore::ErrorCode code) {
  using lpcore::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return LPCORE_INVALID_ARGUMENT;
    case ErrorCode::kDegenerateQuad: return LPCORE_DEGENERATE_QUAD;
    case ErrorCode::kAngleOutOfRange: return LPCORE_ANGLE_OUT_OF_RANGE;
    case ErrorCode::kDomainError: return LPCORE_DOMAIN_ERROR;
    case ErrorCode::kShapeMismatch: return LPCORE_SHAPE_MISMATCH;
    case ErrorCode::kInfeasibleTarget: return LPCORE_INFEASIBLE_TARGET;
    case ErrorCode::kImageIdMismatch: return LPCORE_IMAGE_ID_MISMATCH;
    case ErrorCode::kParseError: return LPCORE_PARSE_ERROR;
    case ErrorCode::kIoError: return LPCORE_IO_ERROR;
  }
  return LPCORE_INTERNAL;
}

template <typename Fn>
lpcore_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return LPCORE_OK;
  } catch (const lpcore::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(LPCORE_IO_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LPCORE_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LPCORE_INTERNAL, e.what());
  } catch (...) {
    return fail(LPCORE_INTERNAL, "unknown exception");
  }
}

#define LPCORE_REQUIRE(cond)                                                     \
  do {                                                                           \
    if (!(cond)) return fail(LPCORE_INVALID_ARGUMENT, "null or invalid argument: " #cond); \
  } while (0)

lpcore::RotatedBox to_box(const lpcore_rbox& b) { return {b.cx, b.cy, b.w, b.h, b.theta}; }
lpcore_rbox from_box(const lpcore::RotatedBox& b) { return {b.cx, b.cy, b.w, b.h, b.theta}; }

lpcore::BoxDelta to_delta(const lpcore_delta& d) { return {d.dx, d.dy, d.dw, d.dh, d.dtheta}; }

lpcore::IouMode to_mode(lpcore_iou_mode mode) {
  return mode == LPCORE_IOU_AXIS_ALIGNED_HULL ? lpcore::IouMode::kAxisAlignedHull
                                              : lpcore::IouMode::kRotated;
}

lpcore::CropSpec to_spec(const lpcore_crop_spec* spec) {
  if (spec == nullptr) return {};
  return {spec->out_h, spec->out_w, spec->sampling_ratio};
}

lpcore_counts from_counts(const lpcore::SpottingCounts& c) {
  return {c.tp, c.fp, c.fn, c.ignored_gt, c.ignored_pred};
}

lpcore::ConvKernel to_kernel(const lpcore_conv_kernel& k) {
  if (k.weights == nullptr || k.out_channels <= 0 || k.in_channels <= 0 || k.kernel_h <= 0 ||
      k.kernel_w <= 0) {
    throw lpcore::Error(lpcore::ErrorCode::kInvalidArgument, "invalid convolution kernel");
  }
  lpcore::ConvKernel kernel{k.out_channels, k.in_channels, k.kernel_h, k.kernel_w, {}, {}};
  const std::size_t n = static_cast<std::size_t>(k.out_channels) * k.in_channels * k.kernel_h *
                        k.kernel_w;
  kernel.weights.assign(k.weights, k.weights + n);
  if (k.bias != nullptr) kernel.bias.assign(k.bias, k.bias + k.out_channels);
  return kernel;
}

lpcore_status copy_string(const std::string& s, char* buf, std::size_t capacity, std::size_t* len) {
  if (len != nullptr) *len = s.size();
  if (buf == nullptr || capacity < s.size() + 1) {
    return fail(LPCORE_BUFFER_TOO_SMALL, "buffer needs " + std::to_string(s.size() + 1) + " bytes");
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return LPCORE_OK;
}

}  // namespace

extern "C" {

const char* lpcore_version(void) { return "0.1.0"; }

const char* lpcore_status_string(lpcore_status status) {
  switch (status) {
    case LPCORE_OK: return "ok";
    case LPCORE_INVALID_ARGUMENT: return "invalid argument";
    case LPCORE_DEGENERATE_QUAD: return "degenerate quad";
    case LPCORE_ANGLE_OUT_OF_RANGE: return "angle out of range";
    case LPCORE_DOMAIN_ERROR: return "domain error";
    case LPCORE_SHAPE_MISMATCH: return "shape mismatch";
    case LPCORE_INFEASIBLE_TARGET: return "infeasible target";
    case LPCORE_IMAGE_ID_MISMATCH: return "image id mismatch";
    case LPCORE_PARSE_ERROR: return "parse error";
    case LPCORE_IO_ERROR: return "i/o error";
    case LPCORE_BUFFER_TOO_SMALL: return "buffer too small";
    case LPCORE_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* lpcore_last_error_message(void) { return g_last_error.c_str(); }

// geometry

lpcore_status lpcore_quad_to_rbox(const lpcore_point quad[4], lpcore_rbox* out) {
  LPCORE_REQUIRE(quad != nullptr && out != nullptr);
  return guarded([&] {
    lpcore::Quad q;
    for (int i = 0; i < 4; ++i) q[static_cast<std::size_t>(i)] = {quad[i].x, quad[i].y};
    *out = from_box(lpcore::quad_to_rbox(q));
  });
}

lpcore_status lpcore_rbox_to_quad(const lpcore_rbox* box, lpcore_point out[4]) {
  LPCORE_REQUIRE(box != nullptr && out != nullptr);
  return guarded([&] {
    const lpcore::Quad q = lpcore::rbox_to_quad(to_box(*box));
    for (int i = 0; i < 4; ++i) out[i] = {q[static_cast<std::size_t>(i)].x, q[static_cast<std::size_t>(i)].y};
  });
}

lpcore_status lpcore_rotated_iou(const lpcore_rbox* a, const lpcore_rbox* b, lpcore_iou_mode mode,
                                 double* out) {
  LPCORE_REQUIRE(a != nullptr && b != nullptr && out != nullptr);
  return guarded([&] { *out = lpcore::box_iou(to_box(*a), to_box(*b), to_mode(mode)); });
}

lpcore_status lpcore_rotated_nms(const lpcore_rbox* boxes, const double* scores, size_t n,
                                 double iou_thresh, size_t* keep, size_t* n_keep) {
  LPCORE_REQUIRE((n == 0 || (boxes != nullptr && scores != nullptr && keep != nullptr)) &&
                 n_keep != nullptr);
  return guarded([&] {
    std::vector<lpcore::ScoredBox> scored(n);
    for (std::size_t i = 0; i < n; ++i) scored[i] = {to_box(boxes[i]), scores[i]};
    const std::vector<std::size_t> kept = lpcore::rotated_nms_indices(scored, iou_thresh);
    std::copy(kept.begin(), kept.end(), keep);
    *n_keep = kept.size();
  });
}

// anchors

lpcore_status lpcore_generate_anchors(int grid_h, int grid_w, int stride, double base_w,
                                      double base_h, lpcore_rbox* out, size_t capacity) {
  lpcore::AnchorGrid grid;
  const lpcore_status s = guarded(
      [&] { grid = lpcore::generate_anchors(grid_h, grid_w, stride, base_w, base_h); });
  if (s != LPCORE_OK) return s;
  if (out == nullptr || capacity < grid.anchors.size()) {
    return fail(LPCORE_BUFFER_TOO_SMALL, "anchor buffer too small");
  }
  for (std::size_t i = 0; i < grid.anchors.size(); ++i) out[i] = from_box(grid.anchors[i]);
  return LPCORE_OK;
}

lpcore_status lpcore_assign_targets(int grid_h, int grid_w, int stride, double base_w,
                                    double base_h, const lpcore_rbox* gts, size_t n_gts,
                                    double pos_iou, double neg_iou, int* labels, int* gt_index) {
  LPCORE_REQUIRE(n_gts == 0 || gts != nullptr);
  return guarded([&] {
    const lpcore::AnchorGrid grid = lpcore::generate_anchors(grid_h, grid_w, stride, base_w, base_h);
    std::vector<lpcore::RotatedBox> boxes(n_gts);
    for (std::size_t i = 0; i < n_gts; ++i) boxes[i] = to_box(gts[i]);
    const lpcore::Assignment a = lpcore::assign_targets(grid, boxes, pos_iou, neg_iou);
    const std::vector<lpcore::ClassTarget> targets = lpcore::class_targets(a);
    for (std::size_t i = 0; i < a.matches.size(); ++i) {
      if (labels != nullptr) labels[i] = static_cast<int>(targets[i]);
      if (gt_index != nullptr) gt_index[i] = a.matches[i].gt_index;
    }
  });
}

lpcore_status lpcore_encode_delta(const lpcore_rbox* reference, const lpcore_rbox* target,
                                  lpcore_delta* out) {
  LPCORE_REQUIRE(reference != nullptr && target != nullptr && out != nullptr);
  return guarded([&] {
    const lpcore::BoxDelta d = lpcore::encode_delta(to_box(*reference), to_box(*target));
    *out = {d.dx, d.dy, d.dw, d.dh, d.dtheta};
  });
}

lpcore_status lpcore_decode_delta(const lpcore_rbox* reference, const lpcore_delta* delta,
                                  lpcore_rbox* out) {
  LPCORE_REQUIRE(reference != nullptr && delta != nullptr && out != nullptr);
  return guarded([&] { *out = from_box(lpcore::decode_delta(to_box(*reference), to_delta(*delta))); });
}

lpcore_status lpcore_refine_anchor(const lpcore_rbox* anchor, const lpcore_shape_delta* delta,
                                   lpcore_rbox* out) {
  LPCORE_REQUIRE(anchor != nullptr && delta != nullptr && out != nullptr);
  return guarded([&] {
    *out = from_box(lpcore::refine_anchor(to_box(*anchor), {delta->dw, delta->dh, delta->dtheta}));
  });
}

// losses

lpcore_status lpcore_focal_loss(double p, int y, double alpha, double gamma, double* loss,
                                double* grad) {
  LPCORE_REQUIRE(loss != nullptr);
  return guarded([&] {
    const lpcore::ScalarLoss r = lpcore::focal_loss(p, y, {alpha, gamma});
    *loss = r.loss;
    if (grad != nullptr) *grad = r.grad;
  });
}

lpcore_status lpcore_smooth_l1(double x, double* loss, double* grad) {
  LPCORE_REQUIRE(loss != nullptr);
  return guarded([&] {
    const lpcore::ScalarLoss r = lpcore::smooth_l1(x);
    *loss = r.loss;
    if (grad != nullptr) *grad = r.grad;
  });
}

lpcore_status lpcore_regression_loss(const lpcore_delta* target, const lpcore_delta* pred,
                                     double* out) {
  LPCORE_REQUIRE(target != nullptr && pred != nullptr && out != nullptr);
  return guarded([&] { *out = lpcore::regression_loss(to_delta(*target), to_delta(*pred)); });
}

lpcore_status lpcore_detection_loss(double l_ref, double l_loc, double l_cls, double w_ref,
                                    double w_loc, double w_cls, double* out) {
  LPCORE_REQUIRE(out != nullptr);
  return guarded([&] { *out = lpcore::detection_loss(l_ref, l_loc, l_cls, {w_ref, w_loc, w_cls}); });
}

lpcore_status lpcore_end_to_end_loss(double l_det, double l_rec, double w_det, double w_rec,
                                     double* out) {
  LPCORE_REQUIRE(out != nullptr);
  return guarded([&] { *out = lpcore::end_to_end_loss(l_det, l_rec, {w_det, w_rec}); });
}

// feature ops

lpcore_crop_spec lpcore_crop_spec_default(void) {
  const lpcore::CropSpec spec;
  return {spec.out_h, spec.out_w, spec.sampling_ratio};
}

lpcore_status lpcore_feature_map_create(int channels, int height, int width, const double* data,
                                        lpcore_feature_map** out) {
  LPCORE_REQUIRE(out != nullptr);
  *out = nullptr;
  return guarded([&] {
    if (data == nullptr) {
      *out = new lpcore_feature_map{lpcore::FeatureMap(channels, height, width)};
      return;
    }
    if (channels <= 0 || height <= 0 || width <= 0) {
      throw lpcore::Error(lpcore::ErrorCode::kShapeMismatch, "feature map dims must be positive");
    }
    const std::size_t n = static_cast<std::size_t>(channels) * height * width;
    *out = new lpcore_feature_map{
        lpcore::FeatureMap(channels, height, width, std::vector<double>(data, data + n))};
  });
}

void lpcore_feature_map_destroy(lpcore_feature_map* fm) { delete fm; }

lpcore_status lpcore_feature_map_dims(const lpcore_feature_map* fm, int* channels, int* height,
                                      int* width) {
  LPCORE_REQUIRE(fm != nullptr);
  if (channels != nullptr) *channels = fm->map.channels();
  if (height != nullptr) *height = fm->map.height();
  if (width != nullptr) *width = fm->map.width();
  return LPCORE_OK;
}

const double* lpcore_feature_map_data(const lpcore_feature_map* fm) {
  return fm == nullptr ? nullptr : fm->map.data().data();
}

lpcore_status lpcore_bilinear_sample(const lpcore_feature_map* fm, double x, double y, int channel,
                                     double* out) {
  LPCORE_REQUIRE(fm != nullptr && out != nullptr);
  return guarded([&] { *out = lpcore::bilinear_sample(fm->map, x, y, channel); });
}

lpcore_status lpcore_rroi_align(const lpcore_feature_map* fm, const lpcore_rbox* box,
                                const lpcore_crop_spec* spec, lpcore_feature_map** out) {
  LPCORE_REQUIRE(fm != nullptr && box != nullptr && out != nullptr);
  *out = nullptr;
  return guarded([&] {
    *out = new lpcore_feature_map{lpcore::rroi_align(fm->map, to_box(*box), to_spec(spec))};
  });
}

lpcore_status lpcore_roi_align(const lpcore_feature_map* fm, double x1, double y1, double x2,
                               double y2, const lpcore_crop_spec* spec, lpcore_feature_map** out) {
  LPCORE_REQUIRE(fm != nullptr && out != nullptr);
  *out = nullptr;
  return guarded([&] {
    *out = new lpcore_feature_map{lpcore::roi_align(fm->map, {x1, y1, x2, y2}, to_spec(spec))};
  });
}

lpcore_status lpcore_roi_pool(const lpcore_feature_map* fm, double x1, double y1, double x2,
                              double y2, const lpcore_crop_spec* spec, lpcore_feature_map** out) {
  LPCORE_REQUIRE(fm != nullptr && out != nullptr);
  *out = nullptr;
  return guarded([&] {
    *out = new lpcore_feature_map{lpcore::roi_pool(fm->map, {x1, y1, x2, y2}, to_spec(spec))};
  });
}

lpcore_status lpcore_conv2d(const lpcore_feature_map* fm, const lpcore_conv_kernel* kernel,
                            int stride, int padding, lpcore_feature_map** out) {
  LPCORE_REQUIRE(fm != nullptr && kernel != nullptr && out != nullptr);
  *out = nullptr;
  return guarded([&] {
    *out = new lpcore_feature_map{
        lpcore::conv2d_forward(fm->map, to_kernel(*kernel), {stride, padding})};
  });
}

lpcore_status lpcore_deformable_conv2d(const lpcore_feature_map* fm,
                                       const lpcore_conv_kernel* kernel,
                                       const lpcore_feature_map* offsets, int stride, int padding,
                                       lpcore_feature_map** out) {
  LPCORE_REQUIRE(fm != nullptr && kernel != nullptr && offsets != nullptr && out != nullptr);
  *out = nullptr;
  return guarded([&] {
    *out = new lpcore_feature_map{lpcore::deformable_conv2d_forward(
        fm->map, to_kernel(*kernel), offsets->map, {stride, padding})};
  });
}

// ctc

lpcore_status lpcore_alphabet_license_plate(lpcore_alphabet** out) {
  LPCORE_REQUIRE(out != nullptr);
  *out = nullptr;
  return guarded([&] { *out = new lpcore_alphabet{lpcore::Alphabet::license_plate()}; });
}

lpcore_status lpcore_alphabet_load(const char* path, lpcore_alphabet** out) {
  LPCORE_REQUIRE(path != nullptr && out != nullptr);
  *out = nullptr;
  return guarded([&] { *out = new lpcore_alphabet{lpcore::Alphabet::load(path)}; });
}

void lpcore_alphabet_destroy(lpcore_alphabet* alphabet) { delete alphabet; }

size_t lpcore_alphabet_num_classes(const lpcore_alphabet* alphabet) {
  return alphabet == nullptr ? 0 : alphabet->alphabet.num_classes();
}

lpcore_status lpcore_alphabet_encode(const lpcore_alphabet* alphabet, const char* text,
                                     int* indices, size_t capacity, size_t* len) {
  LPCORE_REQUIRE(alphabet != nullptr && text != nullptr && len != nullptr);
  lpcore::LabelSequence seq;
  const lpcore_status s = guarded([&] { seq = alphabet->alphabet.encode(text); });
  if (s != LPCORE_OK) return s;
  *len = seq.indices.size();
  if (indices == nullptr || capacity < seq.indices.size()) {
    return fail(LPCORE_BUFFER_TOO_SMALL, "label buffer too small");
  }
  std::copy(seq.indices.begin(), seq.indices.end(), indices);
  return LPCORE_OK;
}

lpcore_status lpcore_alphabet_decode(const lpcore_alphabet* alphabet, const int* indices, size_t n,
                                     char* buf, size_t capacity, size_t* len) {
  LPCORE_REQUIRE(alphabet != nullptr && (n == 0 || indices != nullptr));
  std::string text;
  const lpcore_status s = guarded([&] {
    text = alphabet->alphabet.decode(std::span<const int>(indices, n));
  });
  if (s != LPCORE_OK) return s;
  return copy_string(text, buf, capacity, len);
}

lpcore_status lpcore_ctc_loss(const double* log_probs, size_t steps, size_t classes,
                              const int* target, size_t target_len, double* loss, double* grad) {
  LPCORE_REQUIRE(log_probs != nullptr && loss != nullptr && (target_len == 0 || target != nullptr));
  return guarded([&] {
    const lpcore::LogitFrame frame(steps, classes,
                                   std::vector<double>(log_probs, log_probs + steps * classes));
    lpcore::LabelSequence seq;
    if (target_len > 0) seq.indices.assign(target, target + target_len);
    const lpcore::CtcResult r = lpcore::ctc_loss(frame, seq);
    *loss = r.loss;
    if (grad != nullptr) std::copy(r.grad.begin(), r.grad.end(), grad);
  });
}

lpcore_status lpcore_greedy_decode(const lpcore_alphabet* alphabet, const double* log_probs,
                                   size_t steps, char* buf, size_t capacity, size_t* len) {
  LPCORE_REQUIRE(alphabet != nullptr && log_probs != nullptr);
  std::string text;
  const lpcore_status s = guarded([&] {
    const std::size_t k = alphabet->alphabet.num_classes();
    const lpcore::LogitFrame frame(steps, k, std::vector<double>(log_probs, log_probs + steps * k));
    text = lpcore::greedy_decode(frame, alphabet->alphabet);
  });
  if (s != LPCORE_OK) return s;
  return copy_string(text, buf, capacity, len);
}

// evaluation

lpcore_eval_options lpcore_eval_options_default(void) {
  const lpcore::MatchOptions m;
  return {m.iou_thresh, m.ignore_unidentifiable ? 1 : 0, LPCORE_IOU_ROTATED, 0};
}

lpcore_status lpcore_metrics_from_counts(const lpcore_counts* counts, lpcore_metrics* out) {
  LPCORE_REQUIRE(counts != nullptr && out != nullptr);
  lpcore::SpottingCounts c;
  c.tp = counts->tp;
  c.fp = counts->fp;
  c.fn = counts->fn;
  c.ignored_gt = counts->ignored_gt;
  c.ignored_pred = counts->ignored_pred;
  const lpcore::Metrics m = lpcore::metrics_from_counts(c);
  *out = {m.recall, m.precision, m.fscore};
  return LPCORE_OK;
}

lpcore_status lpcore_evaluate_files(const char* gt_path, const char* pred_path,
                                    const lpcore_eval_options* options, lpcore_report** out) {
  LPCORE_REQUIRE(gt_path != nullptr && pred_path != nullptr && out != nullptr);
  *out = nullptr;
  return guarded([&] {
    const lpcore_eval_options opts = options != nullptr ? *options : lpcore_eval_options_default();
    lpcore::EvalConfig config;
    config.gt_path = gt_path;
    config.pred_path = pred_path;
    config.match.iou_thresh = opts.iou_thresh;
    config.match.ignore_unidentifiable = opts.ignore_unidentifiable != 0;
    config.match.iou_mode = to_mode(opts.iou_mode);
    config.threads = opts.threads;
    *out = new lpcore_report{lpcore::evaluate_files(config), {}, {}};
  });
}

void lpcore_report_destroy(lpcore_report* report) { delete report; }

lpcore_status lpcore_report_totals(const lpcore_report* report, lpcore_counts* counts,
                                   lpcore_metrics* metrics) {
  LPCORE_REQUIRE(report != nullptr);
  if (counts != nullptr) *counts = from_counts(report->report.result.total);
  if (metrics != nullptr) {
    const lpcore::Metrics& m = report->report.result.metrics;
    *metrics = {m.recall, m.precision, m.fscore};
  }
  return LPCORE_OK;
}

size_t lpcore_report_image_count(const lpcore_report* report) {
  return report == nullptr ? 0 : report->report.result.per_image.size();
}

lpcore_status lpcore_report_image(const lpcore_report* report, size_t index,
                                  const char** image_id, lpcore_counts* counts) {
  LPCORE_REQUIRE(report != nullptr && index < report->report.result.per_image.size());
  const lpcore::ImageResult& r = report->report.result.per_image[index];
  if (image_id != nullptr) *image_id = r.image_id.c_str();
  if (counts != nullptr) *counts = from_counts(r.counts);
  return LPCORE_OK;
}

const char* lpcore_report_text(lpcore_report* report, int include_timestamp) {
  if (report == nullptr) return nullptr;
  report->text = lpcore::format_report(report->report, include_timestamp != 0);
  return report->text.c_str();
}

const char* lpcore_report_summary(lpcore_report* report) {
  if (report == nullptr) return nullptr;
  report->summary = lpcore::format_summary_table(report->report);
  return report->summary.c_str();
}

lpcore_status lpcore_report_write(const lpcore_report* report, const char* path,
                                  int include_timestamp) {
  LPCORE_REQUIRE(report != nullptr && path != nullptr);
  return guarded([&] { lpcore::write_report_file(path, report->report, include_timestamp != 0); });
}

// fixtures

lpcore_status lpcore_synth_write(uint64_t seed, int n_plates, double noise, int images,
                                 const char* out_dir) {
  LPCORE_REQUIRE(out_dir != nullptr && images > 0 && n_plates >= 0);
  return guarded([&] {
    namespace fs = std::filesystem;
    const fs::path root(out_dir);
    const fs::path ann_dir = root / "gt_annotations";
    fs::create_directories(ann_dir);
    std::vector<lpcore::SpottingRecord> gts;
    std::vector<lpcore::SpottingRecord> preds;
    for (int i = 0; i < images; ++i) {
      lpcore::SynthFixture f = lpcore::synth_fixture(seed + static_cast<uint64_t>(i), n_plates, noise);
      std::vector<lpcore::Annotation> annotations;
      for (const lpcore::SpottingItem& item : f.gt.items) {
        annotations.push_back({lpcore::rbox_to_quad(item.box), item.transcript, lpcore::LpType::kBlue});
      }
      lpcore::write_annotation_file(ann_dir / (f.gt.image_id + ".txt"), annotations);
      gts.push_back(std::move(f.gt));
      preds.push_back(std::move(f.pred));
    }
    lpcore::write_prediction_file(root / "gt.txt", gts);
    lpcore::write_prediction_file(root / "pred.txt", preds);
  });
}

// self-check and bench

lpcore_status lpcore_selfcheck_run(const char* inject_fault, lpcore_selfcheck** out) {
  LPCORE_REQUIRE(out != nullptr);
  *out = nullptr;
  return guarded([&] {
    lpcore::SelfcheckOptions options;
    if (inject_fault != nullptr) options.inject_fault = inject_fault;
    *out = new lpcore_selfcheck{lpcore::run_selfcheck(options)};
  });
}

void lpcore_selfcheck_destroy(lpcore_selfcheck* result) { delete result; }

size_t lpcore_selfcheck_count(const lpcore_selfcheck* result) {
  return result == nullptr ? 0 : result->suites.size();
}

lpcore_status lpcore_selfcheck_suite(const lpcore_selfcheck* result, size_t index,
                                     lpcore_suite_result* out) {
  LPCORE_REQUIRE(result != nullptr && out != nullptr && index < result->suites.size());
  const lpcore::SuiteResult& s = result->suites[index];
  *out = {s.name.c_str(), s.max_error, s.tolerance, s.cases, s.seconds, s.passed ? 1 : 0};
  return LPCORE_OK;
}

lpcore_status lpcore_bench_run(const size_t* sizes, size_t n_sizes, lpcore_bench** out) {
  LPCORE_REQUIRE(out != nullptr && (n_sizes == 0 || sizes != nullptr));
  *out = nullptr;
  return guarded([&] {
    *out = new lpcore_bench{lpcore::run_bench(std::span<const std::size_t>(sizes, n_sizes))};
  });
}

void lpcore_bench_destroy(lpcore_bench* result) { delete result; }

size_t lpcore_bench_count(const lpcore_bench* result) {
  return result == nullptr ? 0 : result->rows.size();
}

lpcore_status lpcore_bench_row_at(const lpcore_bench* result, size_t index, lpcore_bench_row* out) {
  LPCORE_REQUIRE(result != nullptr && out != nullptr && index < result->rows.size());
  const lpcore::BenchRow& r = result->rows[index];
  *out = {r.op.c_str(), r.size, r.total_ms, r.per_item_us};
  return LPCORE_OK;
}

}  // extern "C"
