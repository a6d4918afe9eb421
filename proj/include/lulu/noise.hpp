// Copyright 2026 The lulu Authors.
//
// Use of this source code is governed by the Apache License 2.0
// that can be found in the LICENSE file.

#ifndef LULU_NOISE_HPP
#define LULU_NOISE_HPP

#include <cstdint>
#include <random>
#include <stdexcept>

#include "lulu/grid.hpp"

namespace lulu {

// Uniform draw from [lo, hi] by rejection on raw 64-bit engine output.
// std::uniform_int_distribution is not pinned down by the standard, so this
// keeps seeded results identical across compilers.
inline int uniform_int_sample(std::mt19937_64& rng, int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int_sample: lo > hi");
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  const std::uint64_t bucket = UINT64_MAX / span;
  const std::uint64_t limit = bucket * span;
  for (;;) {
    const std::uint64_t r = rng();
    if (r < limit) return lo + static_cast<int>(r / bucket);
  }
}

// Image of independent uniform samples, filled row by row. The same seed and
// shape always produce the same image.
inline GridImage noise_image(int height, int width, std::uint64_t seed, int lo = 0,
                             int hi = 255) {
  std::mt19937_64 rng(seed);
  GridImage img(height, width, 0, 0);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) img.at(r, c) = uniform_int_sample(rng, lo, hi);
  return img;
}

}  // namespace lulu

#endif  // LULU_NOISE_HPP
