// Copyright 2026 The lulu Authors.
//
// Use of this source code is governed by the Apache License 2.0
// that can be found in the LICENSE file.

#include "lulu/dpt.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "lulu/connectivity.hpp"
#include "lulu/grid.hpp"
#include "lulu/operators.hpp"
#include "test_util.hpp"

namespace {

using lulu::Connectivity;
using lulu::DptDecomposition;
using lulu::GridImage;
using lulu::Pixel;
using lulu::PixelSet;
using lulu::Pulse;

bool same_pulses(std::vector<Pulse> a, std::vector<Pulse> b) {
  const auto key = [](const Pulse& p) {
    return std::make_tuple(p.support.pixels(), p.amplitude);
  };
  const auto less = [&](const Pulse& x, const Pulse& y) { return key(x) < key(y); };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (key(a[i]) != key(b[i])) return false;
  return true;
}

TEST(DptDecompose, ZeroImage) {
  const DptDecomposition d = lulu::dpt_decompose(GridImage(4, 4, 0, 0),
                                                 Connectivity::four());
  EXPECT_TRUE(d.complete);
  EXPECT_EQ(d.pulse_count(), 0);
  EXPECT_EQ(d.residual_constant, 0);
  EXPECT_TRUE(d.layers.empty());
  EXPECT_FALSE(d.residual.has_value());
}

TEST(DptDecompose, SingleSpike) {
  const DptDecomposition d =
      lulu::dpt_decompose(lulu_test::spike_image(), Connectivity::four());
  EXPECT_TRUE(d.complete);
  ASSERT_EQ(d.pulse_count(), 1);
  ASSERT_EQ(d.layers.count(1), 1u);
  const Pulse& p = d.layers.at(1)[0];
  EXPECT_EQ(p.amplitude, 5);
  EXPECT_EQ(p.support, (PixelSet{{1, 1}}));
  EXPECT_EQ(p.layer(), 1);
  EXPECT_EQ(d.residual_constant, 0);
}

TEST(DptDecompose, TwoNestedPulses) {
  const DptDecomposition d =
      lulu::dpt_decompose(lulu_test::two_pulse_image(), Connectivity::four());
  EXPECT_TRUE(d.complete);
  ASSERT_EQ(d.pulse_count(), 2);

  const Pulse& p1 = d.layers.at(1)[0];
  EXPECT_EQ(p1.amplitude, 5);
  EXPECT_EQ(p1.support, (PixelSet{{1, 1}}));

  const Pulse& p2 = d.layers.at(2)[0];
  EXPECT_EQ(p2.amplitude, 3);
  EXPECT_EQ(p2.support, (PixelSet{{1, 1}, {1, 2}}));

  // Nesting across layers.
  for (Pixel p : p1.support) EXPECT_TRUE(p2.support.contains(p));

  EXPECT_EQ(lulu::reconstruct_all(d), lulu_test::two_pulse_image());
}

TEST(DptDecompose, MixedSignPulses) {
  GridImage f(3, 5, 0, 0);
  f.at(1, 1) = 6;   // peak
  f.at(1, 3) = -4;  // pit
  const DptDecomposition d = lulu::dpt_decompose(f, Connectivity::four());
  ASSERT_EQ(d.layers.count(1), 1u);
  ASSERT_EQ(d.layers.at(1).size(), 2u);
  const auto& list = d.layers.at(1);
  // Sorted by first support pixel: (1,1) before (1,3).
  EXPECT_EQ(list[0].amplitude, 6);
  EXPECT_EQ(list[0].support, (PixelSet{{1, 1}}));
  EXPECT_EQ(list[1].amplitude, -4);
  EXPECT_EQ(list[1].support, (PixelSet{{1, 3}}));
  EXPECT_EQ(lulu::reconstruct_all(d), f);
}

TEST(DptDecompose, ConstantImages) {
  // Constant over identical padding: nothing to extract.
  const GridImage plane_constant(4, 4, 7, 7);
  const DptDecomposition d1 =
      lulu::dpt_decompose(plane_constant, Connectivity::four());
  EXPECT_EQ(d1.pulse_count(), 0);
  EXPECT_EQ(d1.residual_constant, 7);
  EXPECT_EQ(lulu::reconstruct_all(d1), plane_constant);

  // Constant block over zero padding: the block itself is one big pulse.
  const GridImage block(3, 5, 7, 0);
  const DptDecomposition d2 = lulu::dpt_decompose(block, Connectivity::four());
  EXPECT_EQ(d2.pulse_count(), 1);
  ASSERT_EQ(d2.layers.count(15), 1u);
  EXPECT_EQ(d2.layers.at(15)[0].amplitude, 7);
  EXPECT_EQ(d2.residual_constant, 0);
  EXPECT_EQ(lulu::reconstruct_all(d2), block);
}

TEST(DptDecompose, RejectsUnimplementedVariantAndBadMaxN) {
  const GridImage f = lulu_test::spike_image();
  EXPECT_THROW(lulu::dpt_decompose(f, Connectivity::four(), std::nullopt,
                                   lulu::DptVariant::ln_after_un),
               std::invalid_argument);
  EXPECT_THROW(lulu::dpt_decompose(f, Connectivity::four(), -2),
               std::invalid_argument);
}

TEST(ExtractLayer, PlateauCases) {
  const GridImage g = lulu_test::plateau_image();

  auto [pulses2, smoothed2] = lulu::extract_layer(g, 2, Connectivity::four());
  ASSERT_EQ(pulses2.size(), 1u);
  EXPECT_EQ(pulses2[0].amplitude, 3);
  EXPECT_EQ(pulses2[0].support, (PixelSet{{1, 1}, {1, 2}}));
  EXPECT_EQ(smoothed2, GridImage(4, 4, 0, 0));

  auto [pulses1, smoothed1] = lulu::extract_layer(g, 1, Connectivity::four());
  EXPECT_TRUE(pulses1.empty());
  EXPECT_EQ(smoothed1, g);

  const GridImage c(4, 4, 7, 7);
  auto [pulses_c, smoothed_c] = lulu::extract_layer(c, 3, Connectivity::four());
  EXPECT_TRUE(pulses_c.empty());
  EXPECT_EQ(smoothed_c, c);
}

TEST(ExtractLayer, RequiresPriorStagesDone) {
  // The spike still carries a size-1 extremum set, so asking for layer 2
  // violates the staged-input precondition.
  EXPECT_THROW(lulu::extract_layer(lulu_test::spike_image(), 2,
                                   Connectivity::four()),
               std::logic_error);
  EXPECT_THROW(lulu::extract_layer(lulu_test::spike_image(), 0,
                                   Connectivity::four()),
               std::invalid_argument);
}

TEST(ExtractLayer, StageEqualsSmootherComposition) {
  // One stage at scale n maps g to U_n(L_n(g)), and its pulses are exactly
  // the flat extremum components: maxima of g, minima of L_n(g).
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 15; ++trial) {
    GridImage g = lulu_test::random_grid(rng, 6, 6, 0, 6);
    for (int n = 1; n <= 8; ++n) {
      const GridImage ln = lulu::apply_ln(g, n, Connectivity::four());
      const GridImage expect_g = lulu::apply_un(ln, n, Connectivity::four());

      std::vector<Pulse> expected;
      for (const PixelSet& v :
           lulu::flat_local_max_components(g, n, Connectivity::four())) {
        const Pixel x = *v.begin();
        expected.push_back({v, g.value(x) - ln.value(x)});
      }
      for (const PixelSet& v :
           lulu::flat_local_min_components(ln, n, Connectivity::four())) {
        const Pixel x = *v.begin();
        expected.push_back({v, ln.value(x) - expect_g.value(x)});
      }

      auto [pulses, smoothed] = lulu::extract_layer(g, n, Connectivity::four());
      EXPECT_EQ(smoothed, expect_g) << "stage " << n;
      EXPECT_TRUE(same_pulses(pulses, expected)) << "stage " << n;
      for (const Pulse& p : pulses)
        EXPECT_EQ(p.support.size(), static_cast<std::size_t>(n));
      g = smoothed;
    }
  }
}

TEST(DptDecompose, MatchesIteratedExtraction) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const GridImage f = lulu_test::random_grid(rng, 7, 7, 0, 9);
    const DptDecomposition d = lulu::dpt_decompose(f, Connectivity::four());

    GridImage g = f;
    std::map<int, std::vector<Pulse>> expected;
    for (int n = 1; n <= 49; ++n) {
      auto [pulses, smoothed] = lulu::extract_layer(g, n, Connectivity::four());
      if (!pulses.empty()) expected[n] = pulses;
      g = smoothed;
    }

    ASSERT_EQ(d.layers.size(), expected.size());
    for (const auto& [n, list] : expected) {
      ASSERT_EQ(d.layers.count(n), 1u) << "layer " << n;
      EXPECT_TRUE(same_pulses(d.layers.at(n), list)) << "layer " << n;
    }
  }
}

TEST(Reconstruct, FiltersBySizeAndSign) {
  const GridImage f = lulu_test::two_pulse_image();
  const DptDecomposition d = lulu::dpt_decompose(f, Connectivity::four());

  EXPECT_EQ(lulu::reconstruct_all(d), f);

  // Keeping only supports of size >= 2 leaves the plateau part.
  const GridImage big = lulu::reconstruct(
      d, [](const Pulse& p) { return p.support.size() >= 2; });
  EXPECT_EQ(big, lulu_test::plateau_image());

  GridImage mixed(3, 5, 0, 0);
  mixed.at(1, 1) = 6;
  mixed.at(1, 3) = -4;
  const DptDecomposition dm = lulu::dpt_decompose(mixed, Connectivity::four());
  const GridImage pos =
      lulu::reconstruct(dm, [](const Pulse& p) { return p.amplitude > 0; });
  GridImage want_pos(3, 5, 0, 0);
  want_pos.at(1, 1) = 6;
  EXPECT_EQ(pos, want_pos);

  const GridImage none =
      lulu::reconstruct(dm, [](const Pulse&) { return false; });
  EXPECT_EQ(none, GridImage(3, 5, 0, 0));

  // Excluding the residual drops the constant part.
  const GridImage plane_constant(4, 4, 7, 7);
  const DptDecomposition dc =
      lulu::dpt_decompose(plane_constant, Connectivity::four());
  EXPECT_EQ(lulu::reconstruct(dc, [](const Pulse&) { return true; }, false),
            GridImage(4, 4, 0, 0));
}

TEST(DptDecompose, PartialRunLeavesResidual) {
  const GridImage f = lulu_test::two_pulse_image();
  const DptDecomposition d = lulu::dpt_decompose(f, Connectivity::four(), 1);
  EXPECT_FALSE(d.complete);
  EXPECT_EQ(d.pulse_count(), 1);  // only the size-1 pulse came out
  ASSERT_TRUE(d.residual.has_value());
  EXPECT_EQ(*d.residual, lulu_test::plateau_image());
  EXPECT_EQ(lulu::reconstruct_all(d), f);

  // Without the residual image the sum cannot be completed.
  DptDecomposition broken = d;
  broken.residual.reset();
  EXPECT_THROW(lulu::reconstruct_all(broken), std::invalid_argument);

  // max_n larger than needed settles and matches the full run.
  const DptDecomposition d2 = lulu::dpt_decompose(f, Connectivity::four(), 16);
  EXPECT_TRUE(d2.complete);
  EXPECT_EQ(d2.pulse_count(), 2);
}

TEST(VerifyStructure, FreshDecompositionPasses) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    const GridImage f = lulu_test::random_grid(rng, 8, 8, 0, 9);
    const DptDecomposition d = lulu::dpt_decompose(f, Connectivity::four());
    const lulu::StructureReport report = lulu::verify_structure(d, f);
    EXPECT_TRUE(report.all_pass());
    ASSERT_EQ(report.checks.size(), 4u);
    EXPECT_EQ(report.checks[0].name, "pulse-validity");
    EXPECT_EQ(report.checks[1].name, "intra-layer-disjoint");
    EXPECT_EQ(report.checks[2].name, "inter-layer-nesting");
    EXPECT_EQ(report.checks[3].name, "reconstruction");
  }
}

TEST(VerifyStructure, DetectsTampering) {
  const GridImage f = lulu_test::two_pulse_image();
  DptDecomposition d = lulu::dpt_decompose(f, Connectivity::four());

  // Edited amplitude breaks the exact-sum check.
  DptDecomposition edited = d;
  edited.layers.at(1)[0].amplitude += 1;
  const auto r1 = lulu::verify_structure(edited, f);
  EXPECT_FALSE(r1.all_pass());
  EXPECT_FALSE(r1.checks[3].pass);
  EXPECT_NE(r1.checks[3].detail.find("(1,1)"), std::string::npos)
      << "failure should point at the edited support: " << r1.checks[3].detail;

  // A duplicated pulse in the same layer breaks disjointness.
  DptDecomposition overlapped = d;
  overlapped.layers.at(1).push_back(overlapped.layers.at(1)[0]);
  EXPECT_FALSE(lulu::verify_structure(overlapped, f).checks[1].pass);

  // A pulse that straddles the layer-2 support without containing it breaks
  // nesting.
  DptDecomposition crossed = d;
  Pulse straddler;
  straddler.support = PixelSet{{1, 2}, {1, 3}, {2, 3}};
  straddler.amplitude = 1;
  crossed.layers[3].push_back(straddler);
  EXPECT_FALSE(lulu::verify_structure(crossed, f).checks[2].pass);

  // Wrong support size for its layer breaks validity.
  DptDecomposition resized = d;
  Pulse moved = resized.layers.at(2)[0];
  resized.layers.at(2).clear();
  resized.layers[3].push_back(moved);
  EXPECT_FALSE(lulu::verify_structure(resized, f).checks[0].pass);
}

TEST(PulseHistogram, CountsPerSize) {
  const DptDecomposition d =
      lulu::dpt_decompose(lulu_test::two_pulse_image(), Connectivity::four());
  const auto hist = lulu::pulse_histogram(d);
  ASSERT_EQ(hist.size(), 2u);
  EXPECT_EQ(hist[0], (std::pair<int, std::int64_t>{1, 1}));
  EXPECT_EQ(hist[1], (std::pair<int, std::int64_t>{2, 1}));

  const DptDecomposition empty =
      lulu::dpt_decompose(GridImage(3, 3, 0, 0), Connectivity::four());
  EXPECT_TRUE(lulu::pulse_histogram(empty).empty());
}

TEST(DptDecompose, DeterministicAcrossRuns) {
  std::mt19937_64 rng(107);
  const GridImage f = lulu_test::random_grid(rng, 10, 10, 0, 50);
  const DptDecomposition a = lulu::dpt_decompose(f, Connectivity::four());
  const DptDecomposition b = lulu::dpt_decompose(f, Connectivity::four());
  ASSERT_EQ(a.layers.size(), b.layers.size());
  for (const auto& [n, list] : a.layers) {
    ASSERT_EQ(b.layers.count(n), 1u);
    ASSERT_EQ(list.size(), b.layers.at(n).size());
    for (std::size_t i = 0; i < list.size(); ++i) {
      EXPECT_EQ(list[i].support, b.layers.at(n)[i].support);
      EXPECT_EQ(list[i].amplitude, b.layers.at(n)[i].amplitude);
    }
  }
}

TEST(DptDecompose, EightConnectivityReconstructs) {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 5; ++trial) {
    const GridImage f = lulu_test::random_grid(rng, 8, 8, 0, 20);
    const DptDecomposition d = lulu::dpt_decompose(f, Connectivity::eight());
    EXPECT_TRUE(lulu::verify_structure(d, f).all_pass());
  }
}

TEST(DptDecompose, FixtureImagesRoundTrip) {
  for (const GridImage& f : lulu_test::fixture_images()) {
    const DptDecomposition d = lulu::dpt_decompose(f, Connectivity::four());
    EXPECT_TRUE(d.complete);
    EXPECT_TRUE(lulu::verify_structure(d, f).all_pass());
    EXPECT_EQ(d.residual_constant, f.padding());
  }
}

}  // namespace
