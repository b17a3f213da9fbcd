// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#include "lpcore/ctc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "lpcore/error.hpp"

namespace lpcore {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kRowNormTolerance = 1e-6;

constexpr std::string_view kProvinces[] = {
    "京", "津", "沪", "渝", "冀", "豫", "云", "辽", "黑", "湘", "皖", "鲁", "新", "苏", "浙", "赣",
    "鄂", "桂", "甘", "晋", "蒙", "陕", "吉", "闽", "贵", "粤", "青", "藏", "川", "宁", "琼"};

std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead & 0xE0) == 0xC0) return 2;
  if ((lead & 0xF0) == 0xE0) return 3;
  if ((lead & 0xF8) == 0xF0) return 4;
  return 0;
}

}  // namespace

std::vector<std::string> utf8_codepoints(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t len = utf8_length(static_cast<unsigned char>(text[i]));
    if (len == 0 || i + len > text.size()) {
      throw Error(ErrorCode::kInvalidArgument, "malformed UTF-8");
    }
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) {
        throw Error(ErrorCode::kInvalidArgument, "malformed UTF-8");
      }
    }
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const std::string& s = symbols_[i];
    if (s == kBlankMarker) {
      throw Error(ErrorCode::kInvalidArgument, "blank marker cannot be a symbol");
    }
    if (utf8_codepoints(s).size() != 1) {
      throw Error(ErrorCode::kInvalidArgument, "alphabet symbols must be single code points");
    }
    if (!lookup_.emplace(s, static_cast<int>(i) + 1).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate alphabet symbol '" + s + "'");
    }
  }
}

Alphabet Alphabet::license_plate() {
  std::vector<std::string> symbols;
  for (std::string_view p : kProvinces) symbols.emplace_back(p);
  for (char c = 'A'; c <= 'Z'; ++c) symbols.emplace_back(1, c);
  for (char c = '0'; c <= '9'; ++c) symbols.emplace_back(1, c);
  symbols.emplace_back(kUnidentifiable);
  return Alphabet(std::move(symbols));
}

Alphabet Alphabet::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open alphabet file " + path.string());
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> symbols;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kBlankMarker) throw ParseError(1, "first line must be the blank marker <b>");
      continue;
    }
    if (line.empty()) continue;
    symbols.push_back(line);
  }
  if (line_no == 0) throw ParseError(1, "empty alphabet file");
  try {
    return Alphabet(std::move(symbols));
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
}

void Alphabet::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write alphabet file " + path.string());
  out << kBlankMarker << '\n';
  for (const std::string& s : symbols_) out << s << '\n';
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

const std::string& Alphabet::symbol(int k) const {
  if (k < 1 || static_cast<std::size_t>(k) > symbols_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "class index has no symbol");
  }
  return symbols_[static_cast<std::size_t>(k) - 1];
}

std::optional<int> Alphabet::index_of(std::string_view symbol) const {
  auto it = lookup_.find(std::string(symbol));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

LabelSequence Alphabet::encode(std::string_view text) const {
  LabelSequence seq;
  for (const std::string& cp : utf8_codepoints(text)) {
    const auto idx = index_of(cp);
    if (!idx) throw Error(ErrorCode::kInvalidArgument, "symbol '" + cp + "' not in alphabet");
    seq.indices.push_back(*idx);
  }
  return seq;
}

std::string Alphabet::decode(std::span<const int> indices) const {
  std::string out;
  for (int k : indices) out += symbol(k);
  return out;
}

double log_sum_exp(double a, double b) noexcept {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

LogitFrame::LogitFrame(std::size_t steps, std::size_t classes, std::vector<double> log_probs)
    : steps_(steps), classes_(classes), data_(std::move(log_probs)) {
  if (steps == 0 || classes < 2) {
    throw Error(ErrorCode::kShapeMismatch, "frame needs at least one step and two classes");
  }
  if (data_.size() != steps * classes) {
    throw Error(ErrorCode::kShapeMismatch, "frame data length does not equal T x K");
  }
  for (std::size_t t = 0; t < steps; ++t) {
    double row = kNegInf;
    for (std::size_t k = 0; k < classes; ++k) {
      const double v = data_[t * classes + k];
      if (!std::isfinite(v)) throw Error(ErrorCode::kDomainError, "log-probabilities must be finite");
      row = log_sum_exp(row, v);
    }
    if (std::abs(row) > kRowNormTolerance) {
      throw Error(ErrorCode::kDomainError,
                  "row " + std::to_string(t) + " is not a normalized log-distribution");
    }
  }
}

LogitFrame LogitFrame::from_logits(std::size_t steps, std::size_t classes,
                                   std::span<const double> logits) {
  if (logits.size() != steps * classes) {
    throw Error(ErrorCode::kShapeMismatch, "logit length does not equal T x K");
  }
  std::vector<double> out(logits.begin(), logits.end());
  for (std::size_t t = 0; t < steps; ++t) {
    double* row = out.data() + t * classes;
    const double hi = *std::max_element(row, row + classes);
    double sum = 0.0;
    for (std::size_t k = 0; k < classes; ++k) sum += std::exp(row[k] - hi);
    const double norm = hi + std::log(sum);
    for (std::size_t k = 0; k < classes; ++k) row[k] -= norm;
  }
  return LogitFrame(steps, classes, std::move(out));
}

std::size_t ctc_min_steps(const LabelSequence& target) {
  std::size_t steps = target.indices.size();
  for (std::size_t i = 1; i < target.indices.size(); ++i) {
    if (target.indices[i] == target.indices[i - 1]) ++steps;
  }
  return steps;
}

CtcResult ctc_loss(const LogitFrame& frame, const LabelSequence& target) {
  return ctc_loss_log_potentials(frame.data(), frame.steps(), frame.classes(), target);
}

CtcResult ctc_loss_log_potentials(std::span<const double> log_potentials, std::size_t steps,
                                  std::size_t classes, const LabelSequence& target) {
  const std::size_t T = steps;
  const std::size_t K = classes;
  if (T == 0 || K < 2 || log_potentials.size() != T * K) {
    throw Error(ErrorCode::kShapeMismatch, "log-potentials must be T x K with T >= 1, K >= 2");
  }
  auto frame = [&](std::size_t t, std::size_t k) { return log_potentials[t * K + k]; };
  for (int k : target.indices) {
    if (k <= 0 || static_cast<std::size_t>(k) >= K) {
      throw Error(ErrorCode::kInvalidArgument, "target index outside [1, K)");
    }
  }
  const std::size_t need = ctc_min_steps(target);
  if (T < need) {
    throw Error(ErrorCode::kInfeasibleTarget, "target needs " + std::to_string(need) +
                                                  " steps, frame has " + std::to_string(T));
  }

  const std::size_t L = target.indices.size();
  const std::size_t S = 2 * L + 1;
  std::vector<std::size_t> ext(S, 0);
  for (std::size_t i = 0; i < L; ++i) ext[2 * i + 1] = static_cast<std::size_t>(target.indices[i]);
  // Skipping from s - 2 to s is allowed onto a label that differs from the
  // previous label.
  auto can_skip = [&](std::size_t s) { return s >= 2 && ext[s] != 0 && ext[s] != ext[s - 2]; };

  std::vector<double> alpha(T * S, kNegInf);
  std::vector<double> beta(T * S, kNegInf);
  alpha[0] = frame(0, ext[0]);
  if (S > 1) alpha[1] = frame(0, ext[1]);
  for (std::size_t t = 1; t < T; ++t) {
    const double* prev = &alpha[(t - 1) * S];
    double* cur = &alpha[t * S];
    for (std::size_t s = 0; s < S; ++s) {
      double acc = prev[s];
      if (s >= 1) acc = log_sum_exp(acc, prev[s - 1]);
      if (can_skip(s)) acc = log_sum_exp(acc, prev[s - 2]);
      cur[s] = acc == kNegInf ? kNegInf : acc + frame(t, ext[s]);
    }
  }

  beta[(T - 1) * S + S - 1] = 0.0;
  if (S > 1) beta[(T - 1) * S + S - 2] = 0.0;
  for (std::size_t t = T - 1; t-- > 0;) {
    const double* next = &beta[(t + 1) * S];
    double* cur = &beta[t * S];
    for (std::size_t s = 0; s < S; ++s) {
      double acc = next[s] + frame(t + 1, ext[s]);
      if (s + 1 < S) acc = log_sum_exp(acc, next[s + 1] + frame(t + 1, ext[s + 1]));
      if (s + 2 < S && can_skip(s + 2)) {
        acc = log_sum_exp(acc, next[s + 2] + frame(t + 1, ext[s + 2]));
      }
      cur[s] = acc;
    }
  }

  double log_p = alpha[(T - 1) * S + S - 1];
  if (S > 1) log_p = log_sum_exp(log_p, alpha[(T - 1) * S + S - 2]);

  CtcResult result;
  result.loss = -log_p;
  result.grad.assign(T * K, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      const double occupancy = alpha[t * S + s] + beta[t * S + s];
      if (occupancy == kNegInf) continue;
      result.grad[t * K + ext[s]] -= std::exp(occupancy - log_p);
    }
  }
  return result;
}

std::vector<int> greedy_decode_indices(const LogitFrame& frame) {
  std::vector<int> out;
  int previous = 0;
  for (std::size_t t = 0; t < frame.steps(); ++t) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < frame.classes(); ++k) {
      if (frame(t, k) > frame(t, best)) best = k;
    }
    const int cls = static_cast<int>(best);
    if (cls != 0 && cls != previous) out.push_back(cls);
    previous = cls;
  }
  return out;
}

std::string greedy_decode(const LogitFrame& frame, const Alphabet& alphabet) {
  if (alphabet.num_classes() != frame.classes()) {
    throw Error(ErrorCode::kShapeMismatch, "alphabet size does not match frame classes");
  }
  return alphabet.decode(greedy_decode_indices(frame));
}

bool exact_match(std::string_view pred, std::string_view gt) noexcept { return pred == gt; }

}  // namespace lpcore
