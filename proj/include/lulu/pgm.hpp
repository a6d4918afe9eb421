// Copyright 2026 The lulu Authors.
//
// Use of this source code is governed by the Apache License 2.0
// that can be found in the LICENSE file.

#ifndef LULU_PGM_HPP
#define LULU_PGM_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lulu/grid.hpp"

namespace lulu {

// Parse failure with the byte offset where the reader gave up.
class PgmParseError : public std::runtime_error {
 public:
  PgmParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (byte " + std::to_string(offset) + ")"),
        byte_offset_(offset) {}

  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Raw PGM contents before conversion to a GridImage.
struct PgmImage {
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::vector<int> samples;  // row-major
};

namespace detail {

inline bool pgm_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

inline bool pgm_digit(char c) { return c >= '0' && c <= '9'; }

// Tokenizer over the in-memory file. Tracks the byte position so every error
// can point at the offending offset. '#' starts a comment that runs to the
// end of the line, as allowed between header tokens and ASCII samples.
class PgmScanner {
 public:
  explicit PgmScanner(const std::string& data) : data_(data) {}

  std::size_t pos() const { return pos_; }

  void skip_separators() {
    while (pos_ < data_.size()) {
      const char c = data_[pos_];
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (pgm_space(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long next_int(const char* what) {
    skip_separators();
    if (pos_ >= data_.size())
      throw PgmParseError(std::string("read_pgm: missing ") + what, pos_);
    if (!pgm_digit(data_[pos_]))
      throw PgmParseError(std::string("read_pgm: expected ") + what +
                              ", found non-digit",
                          pos_);
    long v = 0;
    while (pos_ < data_.size() && pgm_digit(data_[pos_])) {
      v = v * 10 + (data_[pos_] - '0');
      if (v > 1'000'000'000)
        throw PgmParseError(std::string("read_pgm: ") + what + " out of range", pos_);
      ++pos_;
    }
    return v;
  }

  // Binary payloads are preceded by exactly one whitespace byte after maxval.
  void expect_single_space() {
    if (pos_ >= data_.size() || !pgm_space(data_[pos_]))
      throw PgmParseError("read_pgm: missing whitespace before binary payload", pos_);
    ++pos_;
  }

  std::size_t remaining() const { return data_.size() - pos_; }

  unsigned char byte() { return static_cast<unsigned char>(data_[pos_++]); }

 private:
  const std::string& data_;
  std::size_t pos_ = 0;
};

inline PgmImage parse_pgm(const std::string& data) {
  if (data.size() < 2 || data[0] != 'P' || (data[1] != '2' && data[1] != '5'))
    throw PgmParseError("read_pgm: not a PGM file, expected magic P2 or P5", 0);
  const bool binary = data[1] == '5';

  PgmScanner scan(data);
  (void)scan.byte();  // 'P'
  (void)scan.byte();  // '2' or '5'

  PgmImage img;
  const std::size_t width_at = scan.pos();
  img.width = static_cast<int>(scan.next_int("width"));
  const std::size_t height_at = scan.pos();
  img.height = static_cast<int>(scan.next_int("height"));
  const std::size_t maxval_at = scan.pos();
  img.maxval = static_cast<int>(scan.next_int("maxval"));
  if (img.width < 1) throw PgmParseError("read_pgm: width must be positive", width_at);
  if (img.height < 1)
    throw PgmParseError("read_pgm: height must be positive", height_at);
  if (img.maxval < 1 || img.maxval > 65535)
    throw PgmParseError("read_pgm: maxval must be in [1, 65535]", maxval_at);

  const std::size_t count =
      static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  img.samples.reserve(count);

  if (!binary) {
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t at = scan.pos();
      const long v = scan.next_int("sample");
      if (v > img.maxval)
        throw PgmParseError("read_pgm: sample " + std::to_string(v) +
                                " exceeds maxval " + std::to_string(img.maxval),
                            at);
      img.samples.push_back(static_cast<int>(v));
    }
    return img;
  }

  scan.expect_single_space();
  const std::size_t per = img.maxval > 255 ? 2 : 1;
  const std::size_t need = count * per;
  if (scan.remaining() < need)
    throw PgmParseError("read_pgm: truncated pixel data, expected " +
                            std::to_string(need) + " bytes but only " +
                            std::to_string(scan.remaining()) + " remain",
                        scan.pos());
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = scan.pos();
    int v = scan.byte();
    if (per == 2) v = (v << 8) | scan.byte();  // big-endian, most significant first
    if (v > img.maxval)
      throw PgmParseError("read_pgm: sample " + std::to_string(v) +
                              " exceeds maxval " + std::to_string(img.maxval),
                          at);
    img.samples.push_back(v);
  }
  return img;
}

}  // namespace detail

// Reads an 8- or 16-bit grayscale PGM (ASCII "P2" or binary "P5") into a
// GridImage with padding 0. Sample values are preserved exactly.
inline GridImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("read_pgm: cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const PgmImage raw = detail::parse_pgm(data);

  GridImage out(raw.height, raw.width, 0, 0);
  std::size_t i = 0;
  for (int r = 0; r < raw.height; ++r)
    for (int c = 0; c < raw.width; ++c) out.at(r, c) = raw.samples[i++];
  return out;
}

enum class PgmWriteMode {
  clip,    // clamp to [0, maxval], count the clamped samples
  offset,  // add a constant so the minimum lands at 0; lossless given the offset
};

struct PgmWriteInfo {
  int maxval = 0;
  int offset = 0;           // amount added to every sample before writing
  std::int64_t clipped = 0; // samples clamped (clip mode only)
  bool sidecar = false;     // true when a metadata sidecar was written
};

// Writes `f` as a binary "P5" PGM. PGM samples are unsigned, so out-of-range
// values are handled per `mode`. With maxval 0 the depth is chosen from the
// data: 255 when everything fits in 8 bits after the mode's adjustment, 65535
// otherwise. Whenever the write was not value-preserving (an offset was
// applied or samples were clamped) a JSON sidecar at `path + ".json"` records
// the adjustment.
inline PgmWriteInfo write_pgm(const GridImage& f, const std::filesystem::path& path,
                              PgmWriteMode mode = PgmWriteMode::clip,
                              int maxval = 0) {
  if (maxval < 0 || maxval > 65535)
    throw std::invalid_argument("write_pgm: maxval must be in [0, 65535]");

  int lo = f.at(0, 0);
  int hi = lo;
  for (int v : f.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  PgmWriteInfo info;
  if (mode == PgmWriteMode::offset) {
    info.offset = lo < 0 ? -lo : 0;
    const long shifted_hi = static_cast<long>(hi) + info.offset;
    if (shifted_hi > 65535)
      throw std::invalid_argument(
          "write_pgm: offset mode cannot represent a value span of " +
          std::to_string(shifted_hi) + " in 16 bits");
    info.maxval = maxval != 0 ? maxval : (shifted_hi <= 255 ? 255 : 65535);
    if (shifted_hi > info.maxval)
      throw std::invalid_argument("write_pgm: offset mode needs maxval >= " +
                                  std::to_string(shifted_hi) + ", got " +
                                  std::to_string(info.maxval));
  } else {
    const int clipped_hi = std::max(hi, 0);
    info.maxval = maxval != 0 ? maxval : (clipped_hi <= 255 ? 255 : 65535);
  }

  std::string payload;
  const bool wide = info.maxval > 255;
  payload.reserve(static_cast<std::size_t>(f.height()) * f.width() * (wide ? 2 : 1));
  for (int v : f.values()) {
    int s = v + info.offset;
    if (s < 0) {
      s = 0;
      ++info.clipped;
    } else if (s > info.maxval) {
      s = info.maxval;
      ++info.clipped;
    }
    if (wide) payload.push_back(static_cast<char>((s >> 8) & 0xff));
    payload.push_back(static_cast<char>(s & 0xff));
  }

  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("write_pgm: cannot open " + path.string() +
                             " for writing");
  out << "P5\n"
      << f.width() << ' ' << f.height() << '\n'
      << info.maxval << '\n'
      << payload;
  if (!out)
    throw std::runtime_error("write_pgm: write to " + path.string() + " failed");
  out.close();

  if (info.offset != 0 || info.clipped > 0) {
    nlohmann::json meta;
    meta["offset"] = info.offset;
    meta["clipped"] = info.clipped;
    const std::filesystem::path side = path.string() + ".json";
    std::ofstream ms(side, std::ios::binary);
    if (!ms)
      throw std::runtime_error("write_pgm: cannot open " + side.string() +
                               " for writing");
    ms << meta.dump() << '\n';
    info.sidecar = true;
  }
  return info;
}

}  // namespace lulu

#endif  // LULU_PGM_HPP
