// Copyright 2026 The lulu Authors. All rights reserved.
// Use of this source code is governed by the Apache License 2.0
// that can be found in the LICENSE file.

#ifndef LULU_GRID_HPP
#define LULU_GRID_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

namespace lulu {

// Integer grid coordinate. Rows grow downward, columns to the right.
struct Pixel {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

// Displacement between two pixels.
struct Offset {
  int drow = 0;
  int dcol = 0;
  friend auto operator<=>(const Offset&, const Offset&) = default;
};

inline Pixel operator+(Pixel p, Offset d) { return {p.row + d.drow, p.col + d.dcol}; }
inline Offset operator-(Offset d) { return {-d.drow, -d.dcol}; }

inline std::ostream& operator<<(std::ostream& os, Pixel p) {
  return os << '(' << p.row << ',' << p.col << ')';
}

struct PixelHash {
  std::size_t operator()(const Pixel& p) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(p.row);
    h = (h << 32) | static_cast<std::uint32_t>(p.col);
    h *= 0x9e3779b97f4a7c15ull;
    return static_cast<std::size_t>(h ^ (h >> 32));
  }
};

// Half-open coordinate rectangle [row0, row0+rows) x [col0, col0+cols).
struct Rect {
  int row0 = 0;
  int col0 = 0;
  int rows = 0;
  int cols = 0;

  bool contains(Pixel p) const {
    return p.row >= row0 && p.row < row0 + rows && p.col >= col0 && p.col < col0 + cols;
  }
  Rect expanded(int margin) const {
    return {row0 - margin, col0 - margin, rows + 2 * margin, cols + 2 * margin};
  }
  std::int64_t area() const { return std::int64_t{rows} * cols; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

// Finite set of pixels kept sorted and duplicate-free. Coordinates are not
// tied to any image domain and may be negative.
class PixelSet {
 public:
  PixelSet() = default;
  PixelSet(std::initializer_list<Pixel> pixels)
      : PixelSet(from_vector(std::vector<Pixel>(pixels))) {}

  static PixelSet from_vector(std::vector<Pixel> pixels) {
    std::sort(pixels.begin(), pixels.end());
    pixels.erase(std::unique(pixels.begin(), pixels.end()), pixels.end());
    PixelSet s;
    s.pixels_ = std::move(pixels);
    return s;
  }

  void insert(Pixel p) {
    auto it = std::lower_bound(pixels_.begin(), pixels_.end(), p);
    if (it == pixels_.end() || *it != p) pixels_.insert(it, p);
  }

  bool contains(Pixel p) const {
    return std::binary_search(pixels_.begin(), pixels_.end(), p);
  }

  std::size_t size() const { return pixels_.size(); }
  bool empty() const { return pixels_.empty(); }
  const std::vector<Pixel>& pixels() const { return pixels_; }
  auto begin() const { return pixels_.begin(); }
  auto end() const { return pixels_.end(); }

  friend bool operator==(const PixelSet&, const PixelSet&) = default;

 private:
  std::vector<Pixel> pixels_;
};

inline std::ostream& operator<<(std::ostream& os, const PixelSet& s) {
  os << '{';
  bool first = true;
  for (Pixel p : s) {
    if (!first) os << ' ';
    os << p;
    first = false;
  }
  return os << '}';
}

// Integer image on a w x h domain, extended to the whole plane by a constant
// padding value. value() answers for any coordinate; at() only for the domain.
class GridImage {
 public:
  GridImage(int height, int width, int fill = 0, int padding = 0)
      : height_(height), width_(width), padding_(padding) {
    if (height < 1 || width < 1)
      throw std::invalid_argument("GridImage: dimensions must be positive");
    values_.assign(static_cast<std::size_t>(height) * width, fill);
  }

  static GridImage from_rows(std::initializer_list<std::initializer_list<int>> rows,
                             int padding = 0) {
    if (rows.size() == 0 || rows.begin()->size() == 0)
      throw std::invalid_argument("GridImage: dimensions must be positive");
    GridImage img(static_cast<int>(rows.size()),
                  static_cast<int>(rows.begin()->size()), 0, padding);
    int r = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != img.width_)
        throw std::invalid_argument("GridImage: ragged row list");
      int c = 0;
      for (int v : row) img.at(r, c++) = v;
      ++r;
    }
    return img;
  }

  int height() const { return height_; }
  int width() const { return width_; }
  int padding() const { return padding_; }
  void set_padding(int padding) { padding_ = padding; }
  Rect domain() const { return {0, 0, height_, width_}; }

  bool in_domain(Pixel p) const { return domain().contains(p); }

  int& at(int row, int col) { return values_[index(row, col)]; }
  int at(int row, int col) const { return values_[index(row, col)]; }
  int& at(Pixel p) { return at(p.row, p.col); }
  int at(Pixel p) const { return at(p.row, p.col); }

  // Value as a function on the whole plane.
  int value(Pixel p) const { return in_domain(p) ? at(p) : padding_; }

  std::span<const int> values() const { return values_; }

  GridImage operator-() const {
    GridImage g = *this;
    g.padding_ = -g.padding_;
    for (int& v : g.values_) v = -v;
    return g;
  }
  GridImage operator+(int c) const {
    GridImage g = *this;
    g.padding_ += c;
    for (int& v : g.values_) v += c;
    return g;
  }
  GridImage operator-(int c) const { return *this + (-c); }
  GridImage operator*(int c) const {
    GridImage g = *this;
    g.padding_ *= c;
    for (int& v : g.values_) v *= c;
    return g;
  }
  GridImage operator+(const GridImage& other) const {
    require_same_shape(other);
    GridImage g = *this;
    g.padding_ += other.padding_;
    for (std::size_t i = 0; i < g.values_.size(); ++i) g.values_[i] += other.values_[i];
    return g;
  }
  GridImage operator-(const GridImage& other) const {
    require_same_shape(other);
    GridImage g = *this;
    g.padding_ -= other.padding_;
    for (std::size_t i = 0; i < g.values_.size(); ++i) g.values_[i] -= other.values_[i];
    return g;
  }

  friend bool operator==(const GridImage&, const GridImage&) = default;

 private:
  std::size_t index(int row, int col) const {
    if (row < 0 || row >= height_ || col < 0 || col >= width_)
      throw std::out_of_range("GridImage::at: coordinate outside domain");
    return static_cast<std::size_t>(row) * width_ + col;
  }
  void require_same_shape(const GridImage& other) const {
    if (height_ != other.height_ || width_ != other.width_)
      throw std::invalid_argument("GridImage: shape mismatch");
  }

  int height_;
  int width_;
  int padding_;
  std::vector<int> values_;
};

inline std::ostream& operator<<(std::ostream& os, const GridImage& img) {
  os << img.height() << 'x' << img.width() << " pad=" << img.padding() << '\n';
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) os << (c ? " " : "") << img.at(r, c);
    os << '\n';
  }
  return os;
}

}  // namespace lulu

#endif  // LULU_GRID_HPP
