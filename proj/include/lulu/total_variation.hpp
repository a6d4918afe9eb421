// Copyright 2026 The lulu Authors. All rights reserved.
// Use of this source code is governed by the Apache License 2.0
// that can be found in the LICENSE file.

#ifndef LULU_TOTAL_VARIATION_HPP
#define LULU_TOTAL_VARIATION_HPP

#include <cstdint>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "lulu/dpt.hpp"
#include "lulu/grid.hpp"
#include "lulu/operators.hpp"

namespace lulu {

// Sum of absolute differences across every vertical and horizontal neighbor
// pair of the plane. With constant padding only pairs touching the domain
// plus its one-pixel ring contribute, so the sum is taken there.
inline std::int64_t total_variation(const GridImage& f) {
  const Rect box = f.domain().expanded(1);
  std::int64_t tv = 0;
  for (int r = box.row0; r < box.row0 + box.rows; ++r) {
    for (int c = box.col0; c < box.col0 + box.cols; ++c) {
      const int v = f.value({r, c});
      tv += std::abs(f.value({r + 1, c}) - v);
      tv += std::abs(f.value({r, c + 1}) - v);
    }
  }
  return tv;
}

struct TvReport {
  std::int64_t tv_input = 0;
  std::int64_t tv_operator_part = 0;
  std::int64_t tv_residual_part = 0;
  bool preserved = false;
};

// Splits f into op(f) plus the difference and checks that the split spends
// the total variation exactly, with no cancellation slack.
inline TvReport verify_preservation(const GridImage& f, OperatorKind op,
                                    const Connectivity& conn) {
  TvReport report;
  const GridImage smoothed = apply(op, f, conn);
  report.tv_input = total_variation(f);
  report.tv_operator_part = total_variation(smoothed);
  report.tv_residual_part = total_variation(f - smoothed);
  report.preserved =
      report.tv_input == report.tv_operator_part + report.tv_residual_part;
  return report;
}

// Variation of a single pulse: amplitude magnitude times the number of
// vertical/horizontal neighbor pairs crossing the support boundary.
inline std::int64_t pulse_total_variation(const Pulse& pulse) {
  std::int64_t edges = 0;
  for (Pixel p : pulse.support) {
    for (Offset d : {Offset{1, 0}, Offset{-1, 0}, Offset{0, 1}, Offset{0, -1}}) {
      if (!pulse.support.contains(p + d)) ++edges;
    }
  }
  return std::abs(static_cast<std::int64_t>(pulse.amplitude)) * edges;
}

struct DptTvReport {
  std::int64_t tv_input = 0;
  std::int64_t pulse_tv_total = 0;
  std::map<int, std::int64_t> per_layer;
  bool preserved = false;
};

// Checks that the decomposition spends the input's variation exactly across
// its pulses. Only meaningful for complete decompositions.
inline DptTvReport verify_dpt_tv(const DptDecomposition& d, const GridImage& f) {
  if (!d.complete)
    throw std::invalid_argument("verify_dpt_tv: decomposition is incomplete");
  DptTvReport report;
  report.tv_input = total_variation(f);
  for (const auto& [n, list] : d.layers) {
    std::int64_t layer_tv = 0;
    for (const Pulse& pulse : list) layer_tv += pulse_total_variation(pulse);
    report.per_layer[n] = layer_tv;
    report.pulse_tv_total += layer_tv;
  }
  report.preserved = report.tv_input == report.pulse_tv_total;
  return report;
}

}  // namespace lulu

#endif  // LULU_TOTAL_VARIATION_HPP
