// Copyright 2026 The lulu Authors. All rights reserved.
// Use of this source code is governed by the Apache License 2.0
// that can be found in the LICENSE file.

// Slow definitional implementations used to validate the fast paths on small
// inputs. Everything here is exponential in n and guarded accordingly.

#ifndef LULU_ORACLE_HPP
#define LULU_ORACLE_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "lulu/connectivity.hpp"
#include "lulu/grid.hpp"

namespace lulu {

// All connected pixel sets of cardinality set_size containing base.
struct ConnectedSetFamily {
  Pixel base;
  int set_size = 0;
  std::vector<PixelSet> members;
};

namespace detail {

// Enumerates each connected k-set containing root exactly once, restricted
// to box. Extension candidates are claimed by the first branch that sees
// them, so no set is generated twice (reverse-search enumeration with the
// root as the smallest vertex).
class SetEnumerator {
 public:
  SetEnumerator(Pixel root, int k, const Connectivity& conn, Rect box)
      : root_(root), k_(k), conn_(conn), box_(box),
        claimed_(static_cast<std::size_t>(box.rows) * box.cols, 0) {}

  std::vector<PixelSet> run() {
    if (!box_.contains(root_)) return {};
    std::vector<PixelSet> out;
    claim(root_) = 1;
    current_.push_back(root_);
    std::vector<Pixel> ext;
    for (Offset d : conn_.offsets()) {
      Pixel q = root_ + d;
      if (box_.contains(q) && !claim(q)) {
        claim(q) = 1;
        ext.push_back(q);
      }
    }
    extend(ext, out);
    for (Pixel q : ext) claim(q) = 0;
    claim(root_) = 0;
    current_.pop_back();
    return out;
  }

 private:
  char& claim(Pixel p) {
    return claimed_[static_cast<std::size_t>(p.row - box_.row0) * box_.cols +
                    (p.col - box_.col0)];
  }

  void extend(std::vector<Pixel> ext, std::vector<PixelSet>& out) {
    if (static_cast<int>(current_.size()) == k_) {
      out.push_back(PixelSet::from_vector(current_));
      return;
    }
    while (!ext.empty()) {
      Pixel w = ext.back();
      ext.pop_back();
      std::vector<Pixel> fresh;
      for (Offset d : conn_.offsets()) {
        Pixel q = w + d;
        if (box_.contains(q) && !claim(q)) {
          claim(q) = 1;
          fresh.push_back(q);
        }
      }
      current_.push_back(w);
      std::vector<Pixel> next = ext;
      next.insert(next.end(), fresh.begin(), fresh.end());
      extend(std::move(next), out);
      current_.pop_back();
      for (Pixel q : fresh) claim(q) = 0;
    }
  }

  Pixel root_;
  int k_;
  const Connectivity& conn_;
  Rect box_;
  std::vector<char> claimed_;
  std::vector<Pixel> current_;
};

inline void oracle_guardrail(int n, const Rect& bounds) {
  if (n < 1) throw std::invalid_argument("oracle: n must be >= 1");
  if (n > 6 || bounds.rows > 8 || bounds.cols > 8)
    throw std::invalid_argument(
        "oracle: refusing exponential enumeration beyond n <= 6 and bounds <= 8x8");
}

}  // namespace detail

// One-dimensional line relation. Not a valid plane connectivity; meant for
// reducing a 1 x m grid to the classical sequence operators.
inline Connectivity line_connectivity() {
  return Connectivity::from_offsets_unchecked({{0, -1}, {0, 1}});
}

inline ConnectedSetFamily enumerate_Nn(Pixel x, int n, const Connectivity& conn,
                                       const Rect& bounds) {
  detail::oracle_guardrail(n, bounds);
  ConnectedSetFamily family;
  family.base = x;
  family.set_size = n + 1;
  family.members = detail::SetEnumerator(x, n + 1, conn, bounds.expanded(1)).run();
  std::sort(family.members.begin(), family.members.end(),
            [](const PixelSet& a, const PixelSet& b) { return a.pixels() < b.pixels(); });
  return family;
}

// Literal max-of-minima over every connected (n+1)-set through each pixel.
inline GridImage Ln_bruteforce(const GridImage& f, int n, const Connectivity& conn) {
  detail::oracle_guardrail(n, f.domain());
  GridImage out = f;
  for (int r = 0; r < f.height(); ++r) {
    for (int c = 0; c < f.width(); ++c) {
      ConnectedSetFamily family = enumerate_Nn({r, c}, n, conn, f.domain());
      if (family.members.empty())
        throw std::logic_error("Ln_bruteforce: no connected sets within expanded bounds");
      bool first = true;
      int best = 0;
      for (const PixelSet& v : family.members) {
        int lo = f.value(*v.begin());
        for (Pixel p : v) lo = std::min(lo, f.value(p));
        if (first || lo > best) best = lo;
        first = false;
      }
      out.at(r, c) = best;
    }
  }
  return out;
}

// Literal min-of-maxima dual.
inline GridImage Un_bruteforce(const GridImage& f, int n, const Connectivity& conn) {
  detail::oracle_guardrail(n, f.domain());
  GridImage out = f;
  for (int r = 0; r < f.height(); ++r) {
    for (int c = 0; c < f.width(); ++c) {
      ConnectedSetFamily family = enumerate_Nn({r, c}, n, conn, f.domain());
      if (family.members.empty())
        throw std::logic_error("Un_bruteforce: no connected sets within expanded bounds");
      bool first = true;
      int best = 0;
      for (const PixelSet& v : family.members) {
        int hi = f.value(*v.begin());
        for (Pixel p : v) hi = std::max(hi, f.value(p));
        if (first || hi < best) best = hi;
        first = false;
      }
      out.at(r, c) = best;
    }
  }
  return out;
}

// Classical sequence operators on zero-extended finite lists.
inline std::vector<int> sequence_Ln(const std::vector<int>& xs, int n) {
  if (n < 1) throw std::invalid_argument("sequence_Ln: n must be >= 1");
  const int m = static_cast<int>(xs.size());
  auto val = [&](int i) { return (i >= 0 && i < m) ? xs[i] : 0; };
  std::vector<int> out(xs.size());
  for (int i = 0; i < m; ++i) {
    bool first = true;
    int best = 0;
    for (int j = i - n; j <= i; ++j) {
      int lo = val(j);
      for (int k = j + 1; k <= j + n; ++k) lo = std::min(lo, val(k));
      if (first || lo > best) best = lo;
      first = false;
    }
    out[i] = best;
  }
  return out;
}

inline std::vector<int> sequence_Un(const std::vector<int>& xs, int n) {
  if (n < 1) throw std::invalid_argument("sequence_Un: n must be >= 1");
  const int m = static_cast<int>(xs.size());
  auto val = [&](int i) { return (i >= 0 && i < m) ? xs[i] : 0; };
  std::vector<int> out(xs.size());
  for (int i = 0; i < m; ++i) {
    bool first = true;
    int best = 0;
    for (int j = i - n; j <= i; ++j) {
      int hi = val(j);
      for (int k = j + 1; k <= j + n; ++k) hi = std::max(hi, val(k));
      if (first || hi < best) best = hi;
      first = false;
    }
    out[i] = best;
  }
  return out;
}

}  // namespace lulu

#endif  // LULU_ORACLE_HPP
