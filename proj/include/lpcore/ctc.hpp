// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lpcore {

/// Splits UTF-8 text into one string per code point. Throws
/// Error(kInvalidArgument) on malformed input.
std::vector<std::string> utf8_codepoints(std::string_view text);

/// Target transcript as class indices; 0 (blank) never appears.
struct LabelSequence {
  std::vector<int> indices;
};

/// Ordered character set for transcription. Class 0 is the CTC blank;
/// symbol k lives at class k.
class Alphabet {
 public:
  static constexpr std::string_view kBlankMarker = "<b>";
  static constexpr std::string_view kUnidentifiable = "*";

  /// `symbols` excludes the blank. Throws on duplicates, on an empty or
  /// multi-code-point symbol, or on the blank marker itself.
  explicit Alphabet(std::vector<std::string> symbols);

  /// 31 province abbreviations, A-Z, 0-9 and the '*' placeholder.
  static Alphabet license_plate();

  /// One symbol per line, UTF-8; line 1 must be the blank marker "<b>".
  static Alphabet load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  /// Number of classes including the blank.
  std::size_t num_classes() const noexcept { return symbols_.size() + 1; }
  /// Symbol for class k >= 1.
  const std::string& symbol(int k) const;
  std::optional<int> index_of(std::string_view symbol) const;

  LabelSequence encode(std::string_view text) const;
  std::string decode(std::span<const int> indices) const;

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> lookup_;
};

/// T x K per-step log-probabilities, row-major. Rows must log-sum-exp to 0
/// within 1e-6 and every entry must be finite.
class LogitFrame {
 public:
  LogitFrame(std::size_t steps, std::size_t classes, std::vector<double> log_probs);

  /// Applies a row-wise log-softmax to unnormalized scores.
  static LogitFrame from_logits(std::size_t steps, std::size_t classes,
                                std::span<const double> logits);

  std::size_t steps() const noexcept { return steps_; }
  std::size_t classes() const noexcept { return classes_; }
  double operator()(std::size_t t, std::size_t k) const noexcept {
    return data_[t * classes_ + k];
  }
  std::span<const double> data() const noexcept { return data_; }

 private:
  std::size_t steps_;
  std::size_t classes_;
  std::vector<double> data_;
};

double log_sum_exp(double a, double b) noexcept;

/// Shortest frame count able to emit `target`: its length plus one blank
/// between each pair of equal neighbors.
std::size_t ctc_min_steps(const LabelSequence& target);

struct CtcResult {
  /// -log P(target | frame).
  double loss = 0.0;
  /// d loss / d log_prob, T x K row-major.
  std::vector<double> grad;
};

/// CTC loss by the log-space forward-backward recursion over the
/// blank-interleaved target. Throws Error(kInfeasibleTarget) when the frame
/// is shorter than ctc_min_steps(target).
CtcResult ctc_loss(const LogitFrame& frame, const LabelSequence& target);

/// Same recursion over a T x K array of unnormalized log-potentials. Each
/// entry is treated as an independent input, so the gradient is exact even
/// off the probability simplex.
CtcResult ctc_loss_log_potentials(std::span<const double> log_potentials, std::size_t steps,
                                  std::size_t classes, const LabelSequence& target);

/// Per-step argmax (lowest index wins ties), repeats collapsed, blanks dropped.
std::vector<int> greedy_decode_indices(const LogitFrame& frame);
std::string greedy_decode(const LogitFrame& frame, const Alphabet& alphabet);

/// Code-unit exact comparison; no normalization.
bool exact_match(std::string_view pred, std::string_view gt) noexcept;

}  // namespace lpcore
