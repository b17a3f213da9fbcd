/* Copyright 2026 The lpcore Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the lpcore numerical core. Every function returns an
 * lpcore_status; on failure a message is available from
 * lpcore_last_error_message() on the calling thread. Handles are opaque and
 * must be released with their matching _destroy function.
 */

#ifndef LPCORE_LPCORE_H_
#define LPCORE_LPCORE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(LPCORE_BUILDING)
#define LPCORE_API __declspec(dllexport)
#else
#define LPCORE_API __declspec(dllimport)
#endif
#else
#define LPCORE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lpcore_status {
  LPCORE_OK = 0,
  LPCORE_INVALID_ARGUMENT = 1,
  LPCORE_DEGENERATE_QUAD = 2,
  LPCORE_ANGLE_OUT_OF_RANGE = 3,
  LPCORE_DOMAIN_ERROR = 4,
  LPCORE_SHAPE_MISMATCH = 5,
  LPCORE_INFEASIBLE_TARGET = 6,
  LPCORE_IMAGE_ID_MISMATCH = 7,
  LPCORE_PARSE_ERROR = 8,
  LPCORE_IO_ERROR = 9,
  /* Output buffer too small; the required size is still reported. */
  LPCORE_BUFFER_TOO_SMALL = 10,
  LPCORE_INTERNAL = 99
} lpcore_status;

LPCORE_API const char* lpcore_version(void);
LPCORE_API const char* lpcore_status_string(lpcore_status status);
/* Message of the last failure on this thread; "" if none. */
LPCORE_API const char* lpcore_last_error_message(void);

/* ---- geometry ---------------------------------------------------------- */

typedef struct lpcore_point {
  double x;
  double y;
} lpcore_point;

/* Center, width, height and angle in radians, theta in [-pi/4, pi/4). */
typedef struct lpcore_rbox {
  double cx;
  double cy;
  double w;
  double h;
  double theta;
} lpcore_rbox;

typedef enum lpcore_iou_mode {
  LPCORE_IOU_ROTATED = 0,
  LPCORE_IOU_AXIS_ALIGNED_HULL = 1
} lpcore_iou_mode;

LPCORE_API lpcore_status lpcore_quad_to_rbox(const lpcore_point quad[4], lpcore_rbox* out);
LPCORE_API lpcore_status lpcore_rbox_to_quad(const lpcore_rbox* box, lpcore_point out[4]);
LPCORE_API lpcore_status lpcore_rotated_iou(const lpcore_rbox* a, const lpcore_rbox* b,
                                            lpcore_iou_mode mode, double* out);
/* Writes kept indices, best score first, into keep (capacity n). */
LPCORE_API lpcore_status lpcore_rotated_nms(const lpcore_rbox* boxes, const double* scores,
                                            size_t n, double iou_thresh, size_t* keep,
                                            size_t* n_keep);

/* ---- anchors ----------------------------------------------------------- */

typedef struct lpcore_delta {
  double dx;
  double dy;
  double dw;
  double dh;
  double dtheta;
} lpcore_delta;

typedef struct lpcore_shape_delta {
  double dw;
  double dh;
  double dtheta;
} lpcore_shape_delta;

/* Fills grid_h * grid_w anchors, row-major. */
LPCORE_API lpcore_status lpcore_generate_anchors(int grid_h, int grid_w, int stride,
                                                 double base_w, double base_h,
                                                 lpcore_rbox* out, size_t capacity);
/* Per anchor: label 1 positive, 0 negative, -1 ignored; gt_index is -1
 * unless positive. Either output may be NULL. */
LPCORE_API lpcore_status lpcore_assign_targets(int grid_h, int grid_w, int stride, double base_w,
                                               double base_h, const lpcore_rbox* gts, size_t n_gts,
                                               double pos_iou, double neg_iou, int* labels,
                                               int* gt_index);
LPCORE_API lpcore_status lpcore_encode_delta(const lpcore_rbox* reference,
                                             const lpcore_rbox* target, lpcore_delta* out);
LPCORE_API lpcore_status lpcore_decode_delta(const lpcore_rbox* reference,
                                             const lpcore_delta* delta, lpcore_rbox* out);
LPCORE_API lpcore_status lpcore_refine_anchor(const lpcore_rbox* anchor,
                                              const lpcore_shape_delta* delta, lpcore_rbox* out);

/* ---- losses ------------------------------------------------------------ */

/* grad is d loss / d p and may be NULL. */
LPCORE_API lpcore_status lpcore_focal_loss(double p, int y, double alpha, double gamma,
                                           double* loss, double* grad);
LPCORE_API lpcore_status lpcore_smooth_l1(double x, double* loss, double* grad);
LPCORE_API lpcore_status lpcore_regression_loss(const lpcore_delta* target,
                                                const lpcore_delta* pred, double* out);
LPCORE_API lpcore_status lpcore_detection_loss(double l_ref, double l_loc, double l_cls,
                                               double w_ref, double w_loc, double w_cls,
                                               double* out);
LPCORE_API lpcore_status lpcore_end_to_end_loss(double l_det, double l_rec, double w_det,
                                                double w_rec, double* out);

/* ---- feature ops ------------------------------------------------------- */

typedef struct lpcore_feature_map lpcore_feature_map;

typedef struct lpcore_crop_spec {
  int out_h;
  int out_w;
  int sampling_ratio;
} lpcore_crop_spec;

/* 8 x 25 crop, 2 x 2 samples per cell. */
LPCORE_API lpcore_crop_spec lpcore_crop_spec_default(void);

/* out_channels x in_channels x kernel_h x kernel_w weights, row-major.
 * bias may be NULL. Data is read during the call only. */
typedef struct lpcore_conv_kernel {
  int out_channels;
  int in_channels;
  int kernel_h;
  int kernel_w;
  const double* weights;
  const double* bias;
} lpcore_conv_kernel;

/* data holds channels * height * width values (CHW), or NULL for zeros. */
LPCORE_API lpcore_status lpcore_feature_map_create(int channels, int height, int width,
                                                   const double* data, lpcore_feature_map** out);
LPCORE_API void lpcore_feature_map_destroy(lpcore_feature_map* fm);
LPCORE_API lpcore_status lpcore_feature_map_dims(const lpcore_feature_map* fm, int* channels,
                                                 int* height, int* width);
/* Valid until the map is destroyed. */
LPCORE_API const double* lpcore_feature_map_data(const lpcore_feature_map* fm);

LPCORE_API lpcore_status lpcore_bilinear_sample(const lpcore_feature_map* fm, double x, double y,
                                                int channel, double* out);
LPCORE_API lpcore_status lpcore_rroi_align(const lpcore_feature_map* fm, const lpcore_rbox* box,
                                           const lpcore_crop_spec* spec, lpcore_feature_map** out);
LPCORE_API lpcore_status lpcore_roi_align(const lpcore_feature_map* fm, double x1, double y1,
                                          double x2, double y2, const lpcore_crop_spec* spec,
                                          lpcore_feature_map** out);
LPCORE_API lpcore_status lpcore_roi_pool(const lpcore_feature_map* fm, double x1, double y1,
                                         double x2, double y2, const lpcore_crop_spec* spec,
                                         lpcore_feature_map** out);
LPCORE_API lpcore_status lpcore_conv2d(const lpcore_feature_map* fm,
                                       const lpcore_conv_kernel* kernel, int stride, int padding,
                                       lpcore_feature_map** out);
/* offsets: 2 * kernel_h * kernel_w channels of (dy, dx) pairs per tap. */
LPCORE_API lpcore_status lpcore_deformable_conv2d(const lpcore_feature_map* fm,
                                                  const lpcore_conv_kernel* kernel,
                                                  const lpcore_feature_map* offsets, int stride,
                                                  int padding, lpcore_feature_map** out);

/* ---- ctc --------------------------------------------------------------- */

typedef struct lpcore_alphabet lpcore_alphabet;

LPCORE_API lpcore_status lpcore_alphabet_license_plate(lpcore_alphabet** out);
LPCORE_API lpcore_status lpcore_alphabet_load(const char* path, lpcore_alphabet** out);
LPCORE_API void lpcore_alphabet_destroy(lpcore_alphabet* alphabet);
/* Including the blank at class 0. */
LPCORE_API size_t lpcore_alphabet_num_classes(const lpcore_alphabet* alphabet);
/* *len receives the label count even when capacity is too small. */
LPCORE_API lpcore_status lpcore_alphabet_encode(const lpcore_alphabet* alphabet, const char* text,
                                                int* indices, size_t capacity, size_t* len);
/* Writes a NUL-terminated UTF-8 string; *len excludes the terminator. */
LPCORE_API lpcore_status lpcore_alphabet_decode(const lpcore_alphabet* alphabet,
                                                const int* indices, size_t n, char* buf,
                                                size_t capacity, size_t* len);

/* log_probs: steps x classes, rows normalized. grad (same shape) may be NULL. */
LPCORE_API lpcore_status lpcore_ctc_loss(const double* log_probs, size_t steps, size_t classes,
                                         const int* target, size_t target_len, double* loss,
                                         double* grad);
LPCORE_API lpcore_status lpcore_greedy_decode(const lpcore_alphabet* alphabet,
                                              const double* log_probs, size_t steps, char* buf,
                                              size_t capacity, size_t* len);

/* ---- evaluation -------------------------------------------------------- */

typedef struct lpcore_report lpcore_report;

typedef struct lpcore_counts {
  size_t tp;
  size_t fp;
  size_t fn;
  size_t ignored_gt;
  size_t ignored_pred;
} lpcore_counts;

typedef struct lpcore_metrics {
  double recall;
  double precision;
  double fscore;
} lpcore_metrics;

typedef struct lpcore_eval_options {
  double iou_thresh;
  int ignore_unidentifiable;
  lpcore_iou_mode iou_mode;
  /* 0 uses LPCORE_THREADS or the hardware count. */
  size_t threads;
} lpcore_eval_options;

LPCORE_API lpcore_eval_options lpcore_eval_options_default(void);
LPCORE_API lpcore_status lpcore_metrics_from_counts(const lpcore_counts* counts,
                                                    lpcore_metrics* out);

/* gt_path: a directory of <image_id>.txt annotation files or a file in the
 * prediction grammar. */
LPCORE_API lpcore_status lpcore_evaluate_files(const char* gt_path, const char* pred_path,
                                               const lpcore_eval_options* options,
                                               lpcore_report** out);
LPCORE_API void lpcore_report_destroy(lpcore_report* report);
LPCORE_API lpcore_status lpcore_report_totals(const lpcore_report* report, lpcore_counts* counts,
                                              lpcore_metrics* metrics);
LPCORE_API size_t lpcore_report_image_count(const lpcore_report* report);
/* image_id stays valid until the report is destroyed. */
LPCORE_API lpcore_status lpcore_report_image(const lpcore_report* report, size_t index,
                                             const char** image_id, lpcore_counts* counts);
/* Machine-readable text; valid until the next call on this report. */
LPCORE_API const char* lpcore_report_text(lpcore_report* report, int include_timestamp);
LPCORE_API const char* lpcore_report_summary(lpcore_report* report);
LPCORE_API lpcore_status lpcore_report_write(const lpcore_report* report, const char* path,
                                             int include_timestamp);

/* ---- fixtures ---------------------------------------------------------- */

/* Writes gt.txt and pred.txt (prediction grammar) and gt_annotations/ with
 * one annotation file per image into out_dir. Image i uses seed + i. */
LPCORE_API lpcore_status lpcore_synth_write(uint64_t seed, int n_plates, double noise,
                                            int images, const char* out_dir);

/* ---- self-check and bench --------------------------------------------- */

typedef struct lpcore_selfcheck lpcore_selfcheck;
typedef struct lpcore_bench lpcore_bench;

typedef struct lpcore_suite_result {
  const char* name;
  double max_error;
  double tolerance;
  size_t cases;
  double seconds;
  int passed;
} lpcore_suite_result;

typedef struct lpcore_bench_row {
  const char* op;
  size_t size;
  double total_ms;
  double per_item_us;
} lpcore_bench_row;

/* inject_fault: NULL, or a suite name forced to fail (test hook). */
LPCORE_API lpcore_status lpcore_selfcheck_run(const char* inject_fault, lpcore_selfcheck** out);
LPCORE_API void lpcore_selfcheck_destroy(lpcore_selfcheck* result);
LPCORE_API size_t lpcore_selfcheck_count(const lpcore_selfcheck* result);
LPCORE_API lpcore_status lpcore_selfcheck_suite(const lpcore_selfcheck* result, size_t index,
                                                lpcore_suite_result* out);

LPCORE_API lpcore_status lpcore_bench_run(const size_t* sizes, size_t n_sizes, lpcore_bench** out);
LPCORE_API void lpcore_bench_destroy(lpcore_bench* result);
LPCORE_API size_t lpcore_bench_count(const lpcore_bench* result);
LPCORE_API lpcore_status lpcore_bench_row_at(const lpcore_bench* result, size_t index,
                                             lpcore_bench_row* out);

#ifdef __cplusplus
}
#endif

#endif /* LPCORE_LPCORE_H_ */
