// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpcore/eval.hpp"
#include "lpcore/geometry.hpp"

namespace lpcore {

enum class LpType { kBlue, kYellowSingle, kYellowDouble, kWhite };

/// "blue", "yellow_single", "yellow_double", "white".
std::string_view lp_type_name(LpType type) noexcept;
LpType parse_lp_type(std::string_view text);

/// One labelled plate: four vertices in file order, content and plate type.
struct Annotation {
  Quad quad;
  std::string content;
  LpType lp_type = LpType::kBlue;

  /// Content contains the '*' placeholder.
  bool unidentifiable() const;
  RotatedBox box() const { return quad_to_rbox(quad); }
};

/// Parses one annotation line. Line numbers are only used for messages.
class AnnotationGrammar {
 public:
  virtual ~AnnotationGrammar() = default;
  virtual Annotation parse_line(std::string_view line, std::size_t line_no) const = 0;
  virtual std::string format(const Annotation& annotation) const = 0;
};

/// "x1,y1,x2,y2,x3,y3,x4,y4,content,type" with UTF-8 content free of commas.
class CsvAnnotationGrammar final : public AnnotationGrammar {
 public:
  Annotation parse_line(std::string_view line, std::size_t line_no) const override;
  std::string format(const Annotation& annotation) const override;
};

/// Blank lines are skipped. Throws ParseError carrying the line number;
/// degenerate quads keep Error(kDegenerateQuad) with the line in the message.
std::vector<Annotation> parse_annotations(std::string_view text,
                                          const AnnotationGrammar& grammar = CsvAnnotationGrammar{});
std::vector<Annotation> parse_annotation_file(const std::filesystem::path& path,
                                              const AnnotationGrammar& grammar = CsvAnnotationGrammar{});
void write_annotation_file(const std::filesystem::path& path, std::span<const Annotation> annotations,
                           const AnnotationGrammar& grammar = CsvAnnotationGrammar{});

SpottingRecord annotations_to_record(std::string image_id, std::span<const Annotation> annotations);

/// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

/// Spotting records as lines "image_id,score,cx,cy,w,h,theta,transcript".
/// An empty score field means no score. Records come back in order of first
/// appearance, lines of one image in file order; theta is normalized.
std::vector<SpottingRecord> parse_predictions(std::string_view text);
std::vector<SpottingRecord> parse_prediction_file(const std::filesystem::path& path);
std::string format_predictions(std::span<const SpottingRecord> records);
void write_prediction_file(const std::filesystem::path& path, std::span<const SpottingRecord> records);

/// Ground truth from either a directory of "<image_id>.txt" annotation
/// files or a single file in the prediction grammar.
std::vector<SpottingRecord> load_ground_truth(const std::filesystem::path& path);

/// Real-valued tensor container, little-endian throughout:
///   bytes 0-3  magic "LPCT"
///   u32        version (1)
///   u32        rank
///   u64 x rank dims
///   f64 x prod(dims) row-major values
struct Tensor {
  std::vector<std::uint64_t> dims;
  std::vector<double> values;
};

std::vector<std::uint8_t> encode_tensor(const Tensor& tensor);
Tensor decode_tensor(std::span<const std::uint8_t> bytes);
void write_tensor_file(const std::filesystem::path& path, const Tensor& tensor);
Tensor read_tensor_file(const std::filesystem::path& path);

struct SynthFixture {
  SpottingRecord gt;
  SpottingRecord pred;
};

/// Deterministic plates laid out on a non-overlapping grid, with transcripts
/// from the license-plate alphabet, plus predictions perturbed by `noise`
/// (relative scale; 0 reproduces the ground truth exactly). Each prediction
/// center moves by between noise/2 and noise times its width along x and its
/// height along y.
SynthFixture synth_fixture(std::uint64_t seed, int n_plates, double noise);

}  // namespace lpcore
