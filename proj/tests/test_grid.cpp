// Copyright 2026 The lulu Authors.
//
// Use of this source code is governed by the Apache License 2.0
// that can be found in the LICENSE file.

#include "lulu/grid.hpp"

#include <stdexcept>

#include <gtest/gtest.h>

namespace {

using lulu::GridImage;
using lulu::Pixel;
using lulu::PixelSet;
using lulu::Rect;

TEST(Pixel, OrderingAndArithmetic) {
  EXPECT_LT((Pixel{0, 5}), (Pixel{1, 0}));
  EXPECT_LT((Pixel{1, 2}), (Pixel{1, 3}));
  EXPECT_EQ((Pixel{2, 3} + lulu::Offset{-1, 1}), (Pixel{1, 4}));
  EXPECT_EQ(-(lulu::Offset{1, -2}), (lulu::Offset{-1, 2}));
}

TEST(Rect, ContainsAndExpand) {
  const Rect r{1, 2, 3, 4};  // rows 1..3, cols 2..5
  EXPECT_TRUE(r.contains({1, 2}));
  EXPECT_TRUE(r.contains({3, 5}));
  EXPECT_FALSE(r.contains({0, 2}));
  EXPECT_FALSE(r.contains({1, 6}));
  EXPECT_EQ(r.area(), 12);

  const Rect e = r.expanded(1);
  EXPECT_TRUE(e.contains({0, 1}));
  EXPECT_TRUE(e.contains({4, 6}));
  EXPECT_EQ(e.area(), 5 * 6);
}

TEST(PixelSet, SortedUniqueMembership) {
  PixelSet s{{2, 2}, {0, 1}, {2, 2}, {1, 0}};
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.pixels()[0], (Pixel{0, 1}));
  EXPECT_EQ(s.pixels()[2], (Pixel{2, 2}));
  EXPECT_TRUE(s.contains({1, 0}));
  EXPECT_FALSE(s.contains({1, 1}));

  s.insert({1, 1});
  s.insert({1, 1});
  EXPECT_EQ(s.size(), 4u);
  EXPECT_TRUE(s.contains({1, 1}));
}

TEST(PixelSet, MayHoldOutOfDomainCoordinates) {
  const PixelSet s{{-1, 0}, {0, -1}};
  EXPECT_TRUE(s.contains({-1, 0}));
  EXPECT_EQ(s.size(), 2u);
}

TEST(GridImage, ConstructionAndAccess) {
  GridImage img(2, 3, 4, 9);
  EXPECT_EQ(img.height(), 2);
  EXPECT_EQ(img.width(), 3);
  EXPECT_EQ(img.padding(), 9);
  EXPECT_EQ(img.at(1, 2), 4);
  EXPECT_EQ(img.values().size(), 6u);

  img.at(0, 0) = -3;
  EXPECT_EQ(img.value({0, 0}), -3);
  EXPECT_EQ(img.value({-1, 0}), 9) << "out-of-domain reads give the padding";
  EXPECT_EQ(img.value({0, 3}), 9);

  EXPECT_THROW(img.at(2, 0), std::out_of_range);
  EXPECT_THROW(img.at(0, -1), std::out_of_range);
  EXPECT_THROW(GridImage(0, 3), std::invalid_argument);
  EXPECT_THROW(GridImage(3, -1), std::invalid_argument);
}

TEST(GridImage, FromRows) {
  const GridImage img = GridImage::from_rows({{1, 2, 3}, {4, 5, 6}}, 7);
  EXPECT_EQ(img.height(), 2);
  EXPECT_EQ(img.width(), 3);
  EXPECT_EQ(img.at(1, 0), 4);
  EXPECT_EQ(img.padding(), 7);
  EXPECT_THROW(GridImage::from_rows({{1, 2}, {3}}), std::invalid_argument);
}

TEST(GridImage, ArithmeticTransformsValuesAndPadding) {
  const GridImage f = GridImage::from_rows({{1, -2}, {3, 0}}, 5);

  const GridImage neg = -f;
  EXPECT_EQ(neg.at(0, 1), 2);
  EXPECT_EQ(neg.padding(), -5);

  const GridImage shifted = f + 10;
  EXPECT_EQ(shifted.at(1, 0), 13);
  EXPECT_EQ(shifted.padding(), 15);
  EXPECT_EQ((f - 1).padding(), 4);

  const GridImage scaled = f * 3;
  EXPECT_EQ(scaled.at(0, 1), -6);
  EXPECT_EQ(scaled.padding(), 15);

  const GridImage sum = f + neg;
  EXPECT_EQ(sum.at(0, 0), 0);
  EXPECT_EQ(sum.at(1, 1), 0);
  EXPECT_EQ(sum.padding(), 0);

  const GridImage diff = f - f;
  for (int v : diff.values()) EXPECT_EQ(v, 0);

  EXPECT_THROW(f + GridImage(3, 3), std::invalid_argument);
}

TEST(GridImage, EqualityIncludesPadding) {
  const GridImage a(2, 2, 1, 0);
  GridImage b(2, 2, 1, 0);
  EXPECT_EQ(a, b);
  b.set_padding(2);
  EXPECT_NE(a, b);
}

TEST(GridImage, DomainRect) {
  const GridImage img(3, 4);
  EXPECT_EQ(img.domain(), (Rect{0, 0, 3, 4}));
  EXPECT_TRUE(img.in_domain({2, 3}));
  EXPECT_FALSE(img.in_domain({3, 0}));
}

}  // namespace
