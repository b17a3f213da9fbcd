// Copyright 2026 The lpcore Authors
// SPDX-License-Identifier: Apache-2.0

#include "lpcore/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "lpcore/ctc.hpp"
#include "lpcore/error.hpp"

namespace lpcore {

namespace {

constexpr std::uint8_t kTensorMagic[4] = {'L', 'P', 'C', 'T'};
constexpr std::uint32_t kTensorVersion = 1;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view field, std::size_t line_no, const char* what) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line_no, std::string("invalid ") + what + " '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) throw ParseError(line_no, std::string(what) + " is not finite");
  return value;
}

// Calls fn(line, line_no) for every non-blank line; strips a trailing CR.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    fn(line, line_no);
  }
}

void check_utf8(std::string_view text, std::size_t line_no) {
  try {
    utf8_codepoints(text);
  } catch (const Error&) {
    throw ParseError(line_no, "text is not valid UTF-8");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "failed reading " + path.string());
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path.string());
}

template <typename Fn>
auto with_file_context(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateQuad) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> bytes, std::size_t offset, int width) {
  if (offset + static_cast<std::size_t>(width) > bytes.size()) {
    throw ParseError(0, "tensor container truncated");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<std::uint64_t>(bytes[offset + static_cast<std::size_t>(i)]) << (8 * i);
  }
  return v;
}

// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double symmetric_uniform(std::mt19937_64& rng) { return 2.0 * unit_uniform(rng) - 1.0; }

double random_sign(std::mt19937_64& rng) { return (rng() >> 63) != 0 ? 1.0 : -1.0; }

}  // namespace

std::string_view lp_type_name(LpType type) noexcept {
  switch (type) {
    case LpType::kBlue: return "blue";
    case LpType::kYellowSingle: return "yellow_single";
    case LpType::kYellowDouble: return "yellow_double";
    case LpType::kWhite: return "white";
  }
  return "blue";
}

LpType parse_lp_type(std::string_view text) {
  for (LpType t : {LpType::kBlue, LpType::kYellowSingle, LpType::kYellowDouble, LpType::kWhite}) {
    if (text == lp_type_name(t)) return t;
  }
  throw ParseError(0, "unknown plate type '" + std::string(text) + "'");
}

bool Annotation::unidentifiable() const { return is_unidentifiable(content); }

Annotation CsvAnnotationGrammar::parse_line(std::string_view line, std::size_t line_no) const {
  const std::vector<std::string_view> fields = split_fields(line);
  if (fields.size() != 10) {
    throw ParseError(line_no,
                     "expected 10 comma-separated fields, found " + std::to_string(fields.size()));
  }
  Annotation a;
  for (std::size_t i = 0; i < 4; ++i) {
    a.quad[i] = {parse_real(fields[2 * i], line_no, "x coordinate"),
                 parse_real(fields[2 * i + 1], line_no, "y coordinate")};
  }
  a.content = std::string(fields[8]);
  if (a.content.empty()) throw ParseError(line_no, "empty plate content");
  check_utf8(a.content, line_no);
  try {
    a.lp_type = parse_lp_type(trim(fields[9]));
  } catch (const ParseError&) {
    throw ParseError(line_no, "unknown plate type '" + std::string(fields[9]) + "'");
  }
  try {
    quad_to_rbox(a.quad);
  } catch (const Error& e) {
    throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
  }
  return a;
}

std::string CsvAnnotationGrammar::format(const Annotation& annotation) const {
  std::string out;
  for (const Point& p : annotation.quad) {
    out += format_real(p.x);
    out += ',';
    out += format_real(p.y);
    out += ',';
  }
  out += annotation.content;
  out += ',';
  out += lp_type_name(annotation.lp_type);
  return out;
}

std::vector<Annotation> parse_annotations(std::string_view text, const AnnotationGrammar& grammar) {
  std::vector<Annotation> out;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    out.push_back(grammar.parse_line(line, line_no));
  });
  return out;
}

std::vector<Annotation> parse_annotation_file(const std::filesystem::path& path,
                                              const AnnotationGrammar& grammar) {
  const std::string text = read_file(path);
  return with_file_context(path, [&] { return parse_annotations(text, grammar); });
}

void write_annotation_file(const std::filesystem::path& path, std::span<const Annotation> annotations,
                           const AnnotationGrammar& grammar) {
  std::string text;
  for (const Annotation& a : annotations) {
    text += grammar.format(a);
    text += '\n';
  }
  write_file(path, text);
}

SpottingRecord annotations_to_record(std::string image_id, std::span<const Annotation> annotations) {
  SpottingRecord record{std::move(image_id), {}};
  for (const Annotation& a : annotations) record.items.push_back({a.box(), a.content, std::nullopt});
  return record;
}

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error(ErrorCode::kInvalidArgument, "cannot format number");
  return std::string(buf, ptr);
}

std::vector<SpottingRecord> parse_predictions(std::string_view text) {
  std::vector<SpottingRecord> records;
  std::unordered_map<std::string, std::size_t> slot;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    const std::vector<std::string_view> fields = split_fields(line);
    if (fields.size() != 8) {
      throw ParseError(line_no,
                       "expected 8 comma-separated fields, found " + std::to_string(fields.size()));
    }
    const std::string image_id(trim(fields[0]));
    if (image_id.empty()) throw ParseError(line_no, "empty image id");
    check_utf8(image_id, line_no);
    SpottingItem item;
    if (!trim(fields[1]).empty()) {
      const double score = parse_real(fields[1], line_no, "score");
      if (score < 0.0 || score > 1.0) throw ParseError(line_no, "score outside [0, 1]");
      item.score = score;
    }
    RotatedBox box{parse_real(fields[2], line_no, "cx"), parse_real(fields[3], line_no, "cy"),
                   parse_real(fields[4], line_no, "w"), parse_real(fields[5], line_no, "h"),
                   parse_real(fields[6], line_no, "theta")};
    if (!(box.w > 0.0) || !(box.h > 0.0)) {
      throw ParseError(line_no, "box width and height must be positive");
    }
    item.box = normalize_box(box);
    item.transcript = std::string(fields[7]);
    check_utf8(item.transcript, line_no);
    auto [it, inserted] = slot.emplace(image_id, records.size());
    if (inserted) records.push_back({image_id, {}});
    records[it->second].items.push_back(std::move(item));
  });
  return records;
}

std::vector<SpottingRecord> parse_prediction_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return with_file_context(path, [&] { return parse_predictions(text); });
}

std::string format_predictions(std::span<const SpottingRecord> records) {
  std::string out;
  for (const SpottingRecord& r : records) {
    for (const SpottingItem& item : r.items) {
      out += r.image_id;
      out += ',';
      if (item.score) out += format_real(*item.score);
      for (double v : {item.box.cx, item.box.cy, item.box.w, item.box.h, item.box.theta}) {
        out += ',';
        out += format_real(v);
      }
      out += ',';
      out += item.transcript;
      out += '\n';
    }
  }
  return out;
}

void write_prediction_file(const std::filesystem::path& path, std::span<const SpottingRecord> records) {
  write_file(path, format_predictions(records));
}

std::vector<SpottingRecord> load_ground_truth(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_directory(path, ec)) return parse_prediction_file(path);
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<SpottingRecord> records;
  for (const auto& file : files) {
    records.push_back(annotations_to_record(file.stem().string(), parse_annotation_file(file)));
  }
  return records;
}

std::vector<std::uint8_t> encode_tensor(const Tensor& tensor) {
  std::uint64_t count = 1;
  for (std::uint64_t d : tensor.dims) count *= d;
  if (count != tensor.values.size()) {
    throw Error(ErrorCode::kShapeMismatch, "tensor value count does not match dims");
  }
  std::vector<std::uint8_t> out(std::begin(kTensorMagic), std::end(kTensorMagic));
  put_u32(out, kTensorVersion);
  put_u32(out, static_cast<std::uint32_t>(tensor.dims.size()));
  for (std::uint64_t d : tensor.dims) put_u64(out, d);
  for (double v : tensor.values) {
    std::uint64_t bits = 0;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    put_u64(out, bits);
  }
  return out;
}

Tensor decode_tensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !std::equal(std::begin(kTensorMagic), std::end(kTensorMagic), bytes.begin())) {
    throw ParseError(0, "not a tensor container (bad magic)");
  }
  if (get_le(bytes, 4, 4) != kTensorVersion) throw ParseError(0, "unsupported tensor version");
  const std::uint64_t rank = get_le(bytes, 8, 4);
  std::size_t offset = 12;
  Tensor tensor;
  std::uint64_t count = 1;
  for (std::uint64_t i = 0; i < rank; ++i, offset += 8) {
    tensor.dims.push_back(get_le(bytes, offset, 8));
    count *= tensor.dims.back();
  }
  if ((bytes.size() - std::min(bytes.size(), offset)) / 8 != count ||
      (bytes.size() - offset) % 8 != 0) {
    throw ParseError(0, "tensor payload size does not match dims");
  }
  tensor.values.resize(count);
  for (std::uint64_t i = 0; i < count; ++i, offset += 8) {
    const std::uint64_t bits = get_le(bytes, offset, 8);
    std::memcpy(&tensor.values[i], &bits, sizeof(bits));
  }
  return tensor;
}

void write_tensor_file(const std::filesystem::path& path, const Tensor& tensor) {
  const std::vector<std::uint8_t> bytes = encode_tensor(tensor);
  write_file(path, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

Tensor read_tensor_file(const std::filesystem::path& path) {
  const std::string raw = read_file(path);
  return with_file_context(path, [&] {
    return decode_tensor(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size()));
  });
}

SynthFixture synth_fixture(std::uint64_t seed, int n_plates, double noise) {
  if (n_plates < 0 || !(noise >= 0.0) || !std::isfinite(noise)) {
    throw Error(ErrorCode::kInvalidArgument, "synth needs n_plates >= 0 and finite noise >= 0");
  }
  constexpr double kCellW = 200.0;
  constexpr double kCellH = 120.0;
  constexpr char kAlnum[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  std::mt19937_64 rng(seed);
  const Alphabet alphabet = Alphabet::license_plate();
  const int columns = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_plates)))));

  SynthFixture fixture;
  fixture.gt.image_id = "synth-" + std::to_string(seed);
  fixture.pred.image_id = fixture.gt.image_id;
  std::set<std::string> used;
  for (int k = 0; k < n_plates; ++k) {
    const int row = k / columns;
    const int col = k % columns;
    RotatedBox box;
    box.w = 80.0 + 60.0 * unit_uniform(rng);
    box.h = box.w / 3.14 * (0.9 + 0.2 * unit_uniform(rng));
    box.theta = 0.25 * symmetric_uniform(rng);
    box.cx = (col + 0.5) * kCellW + 10.0 * symmetric_uniform(rng);
    box.cy = (row + 0.5) * kCellH + 10.0 * symmetric_uniform(rng);

    std::string text;
    do {
      text = alphabet.symbol(1 + static_cast<int>(rng() % 31));
      text += static_cast<char>('A' + rng() % 26);
      for (int c = 0; c < 5; ++c) text += kAlnum[rng() % 36];
    } while (!used.insert(text).second);

    RotatedBox guess = box;
    const double shift_x = random_sign(rng) * (0.5 + 0.5 * unit_uniform(rng));
    const double shift_y = random_sign(rng) * (0.5 + 0.5 * unit_uniform(rng));
    const double scale_w = symmetric_uniform(rng);
    const double scale_h = symmetric_uniform(rng);
    const double turn = symmetric_uniform(rng);
    const double score = 0.5 + 0.5 * unit_uniform(rng);
    if (noise > 0.0) {
      guess.cx += noise * box.w * shift_x;
      guess.cy += noise * box.h * shift_y;
      guess.w *= std::exp(0.2 * noise * scale_w);
      guess.h *= std::exp(0.2 * noise * scale_h);
      guess.theta += 0.1 * noise * turn;
      guess = normalize_box(guess);
    }
    fixture.gt.items.push_back({box, text, std::nullopt});
    fixture.pred.items.push_back({guess, text, score});
  }
  return fixture;
}

}  // namespace lpcore
