// Copyright 2026 The lulu Authors. All rights reserved.
// Use of this source code is governed by the Apache License 2.0
// that can be found in the LICENSE file.

#ifndef LULU_OPERATORS_HPP
#define LULU_OPERATORS_HPP

#include <climits>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "lulu/connectivity.hpp"
#include "lulu/grid.hpp"

namespace lulu {

// The four smoothers. Composite codes read right to left: lnun is L after U.
enum class OpCode { ln, un, lnun, unln };

struct OperatorKind {
  OpCode code = OpCode::ln;
  int n = 1;
  friend bool operator==(const OperatorKind&, const OperatorKind&) = default;
};

inline std::string to_string(OperatorKind op) {
  const char* name = "";
  switch (op.code) {
    case OpCode::ln: name = "L"; break;
    case OpCode::un: name = "U"; break;
    case OpCode::lnun: name = "LU"; break;
    case OpCode::unln: name = "UL"; break;
  }
  return name + std::to_string(op.n);
}

// Composition table of the four-element semigroup: result of applying
// inner first, then outer.
constexpr OpCode compose_code(OpCode outer, OpCode inner) {
  switch (outer) {
    case OpCode::ln:
      return inner == OpCode::ln ? OpCode::ln
             : inner == OpCode::un ? OpCode::lnun
             : inner == OpCode::unln ? OpCode::unln
                                     : OpCode::lnun;
    case OpCode::un:
      return inner == OpCode::ln ? OpCode::unln
             : inner == OpCode::un ? OpCode::un
             : inner == OpCode::unln ? OpCode::unln
                                     : OpCode::lnun;
    case OpCode::unln:
      return inner == OpCode::un || inner == OpCode::lnun ? OpCode::lnun : OpCode::unln;
    case OpCode::lnun:
      return inner == OpCode::un || inner == OpCode::lnun ? OpCode::lnun : OpCode::unln;
  }
  return OpCode::ln;
}

// Lower smoother: every pixel sitting on a local maximum set of at most n
// pixels is pulled down to the strongest value adjacent to the largest such
// set. Computed as an area opening with threshold n+1: pixels are processed
// by decreasing value and merged into level components via union-find; a
// component that reaches n+1 pixels keeps its level, everything smaller is
// resolved to the level at which its component first got that large. The
// constant exterior participates as one virtual node of unbounded area.
inline GridImage apply_ln(const GridImage& f, int n, const Connectivity& conn) {
  if (n < 1) throw std::invalid_argument("apply_ln: n must be >= 1");
  const int h = f.height();
  const int w = f.width();
  if (static_cast<std::int64_t>(h) * w >= INT_MAX)
    throw std::invalid_argument("apply_ln: image too large");
  const int npix = h * w;
  const int outside = npix;
  const int pad = f.padding();
  const std::int64_t target_area = static_cast<std::int64_t>(n) + 1;

  const std::span<const int> vals = f.values();
  auto value_of = [&](int id) { return id == outside ? pad : vals[id]; };

  std::vector<int> order(npix + 1);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const int va = value_of(a);
    const int vb = value_of(b);
    if (va != vb) return va > vb;
    if ((a == outside) != (b == outside)) return a == outside;
    return a < b;
  });
  std::vector<int> rank(npix + 1);
  for (int k = 0; k <= npix; ++k) rank[order[k]] = k;

  std::vector<int> parent(npix + 1);
  std::vector<std::int64_t> area(npix + 1, 0);

  auto find = [&](int i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  // q was processed before p. Merge q's component into p's unless it is
  // already large enough at a strictly higher level, in which case p's
  // component is marked as passing outright.
  auto link = [&](int q, int p) {
    const int r = find(q);
    if (r == p) return;
    if (value_of(r) == value_of(p) || area[r] < target_area) {
      parent[r] = p;
      area[p] += area[r];
    } else {
      area[p] = target_area;
    }
  };

  for (int k = 0; k <= npix; ++k) {
    const int p = order[k];
    parent[p] = p;
    if (p == outside) {
      area[p] = target_area;
      for (int id = 0; id < npix; ++id) {
        if (rank[id] > k) continue;
        const Pixel px{id / w, id % w};
        for (Offset d : conn.offsets()) {
          if (!f.in_domain(px + d)) {
            link(id, p);
            break;
          }
        }
      }
    } else {
      area[p] = 1;
      const Pixel px{p / w, p % w};
      for (Offset d : conn.offsets()) {
        const Pixel q = px + d;
        if (f.in_domain(q)) {
          const int id = q.row * w + q.col;
          if (rank[id] < k) link(id, p);
        } else if (rank[outside] < k) {
          link(outside, p);
        }
      }
    }
  }

  GridImage out(h, w, 0, pad);
  std::vector<int> resolved(npix + 1);
  for (int k = npix; k >= 0; --k) {
    const int p = order[k];
    resolved[p] = (parent[p] == p) ? value_of(p) : resolved[parent[p]];
    if (p != outside) out.at(p / w, p % w) = resolved[p];
  }
  return out;
}

// Upper smoother, by min/max duality.
inline GridImage apply_un(const GridImage& f, int n, const Connectivity& conn) {
  return -apply_ln(-f, n, conn);
}

inline GridImage apply(OperatorKind op, const GridImage& f, const Connectivity& conn) {
  switch (op.code) {
    case OpCode::ln:
      return apply_ln(f, op.n, conn);
    case OpCode::un:
      return apply_un(f, op.n, conn);
    case OpCode::lnun:
      return apply_ln(apply_un(f, op.n, conn), op.n, conn);
    case OpCode::unln:
      return apply_un(apply_ln(f, op.n, conn), op.n, conn);
  }
  throw std::invalid_argument("apply: unknown operator");
}

inline bool has_local_extremum_set_up_to(const GridImage& f, int n,
                                         const Connectivity& conn, Extremum polarity) {
  return detail::exists_extremum_set_up_to(f, n, conn, polarity);
}

// Mid-level reference: evaluate the local-extremum-set characterization
// pixel by pixel. Quadratic-ish, used to cross-check apply_ln.
inline GridImage ln_via_extremum_sets(const GridImage& f, int n, const Connectivity& conn) {
  GridImage out = f;
  for (int r = 0; r < f.height(); ++r) {
    for (int c = 0; c < f.width(); ++c) {
      if (auto v = maximal_local_max_set(f, {r, c}, n, conn)) {
        const PixelSet adj = adjacency(*v, conn);
        int best = f.value(*adj.begin());
        for (Pixel p : adj) best = std::max(best, f.value(p));
        out.at(r, c) = best;
      }
    }
  }
  return out;
}

inline GridImage un_via_extremum_sets(const GridImage& f, int n, const Connectivity& conn) {
  GridImage out = f;
  for (int r = 0; r < f.height(); ++r) {
    for (int c = 0; c < f.width(); ++c) {
      if (auto v = maximal_local_min_set(f, {r, c}, n, conn)) {
        const PixelSet adj = adjacency(*v, conn);
        int best = f.value(*adj.begin());
        for (Pixel p : adj) best = std::min(best, f.value(p));
        out.at(r, c) = best;
      }
    }
  }
  return out;
}

}  // namespace lulu

#endif  // LULU_OPERATORS_HPP
