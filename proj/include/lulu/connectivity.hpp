// Copyright 2026 The lulu Authors. All rights reserved.
// Use of this source code is governed by the Apache License 2.0
// that can be found in the LICENSE file.

#ifndef LULU_CONNECTIVITY_HPP
#define LULU_CONNECTIVITY_HPP

#include <cassert>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lulu/grid.hpp"

namespace lulu {

enum class Extremum { maximum, minimum };

// Translation-invariant pixel neighborhood, given as a symmetric set of
// nonzero offsets that must include the four axis neighbors. The induced
// relation on the plane is what "connected" means everywhere else in this
// library.
class Connectivity {
 public:
  static const Connectivity& four() {
    static const Connectivity c({{-1, 0}, {0, -1}, {0, 1}, {1, 0}});
    return c;
  }

  static const Connectivity& eight() {
    static const Connectivity c(
        {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 1}, {1, 0}});
    return c;
  }

  static Connectivity from_offsets(std::vector<Offset> offsets) {
    Connectivity c(std::move(offsets));
    for (Offset d : c.offsets_) {
      if (d == Offset{0, 0})
        throw std::invalid_argument("Connectivity: zero offset not allowed");
      if (!c.has(-d))
        throw std::invalid_argument("Connectivity: offset set must be symmetric");
    }
    for (Offset axis : {Offset{-1, 0}, Offset{1, 0}, Offset{0, -1}, Offset{0, 1}}) {
      if (!c.has(axis))
        throw std::invalid_argument(
            "Connectivity: offset set must include the four axis neighbors");
    }
    return c;
  }

  // Skips validation. Intended for reduced relations in tests, such as the
  // one-dimensional line relation {(0,-1),(0,1)}.
  static Connectivity from_offsets_unchecked(std::vector<Offset> offsets) {
    return Connectivity(std::move(offsets));
  }

  std::span<const Offset> offsets() const { return offsets_; }
  int degree() const { return static_cast<int>(offsets_.size()); }

  friend bool operator==(const Connectivity&, const Connectivity&) = default;

 private:
  explicit Connectivity(std::vector<Offset> offsets) : offsets_(std::move(offsets)) {
    std::sort(offsets_.begin(), offsets_.end());
    offsets_.erase(std::unique(offsets_.begin(), offsets_.end()), offsets_.end());
  }
  bool has(Offset d) const {
    return std::binary_search(offsets_.begin(), offsets_.end(), d);
  }

  std::vector<Offset> offsets_;
};

inline PixelSet neighbors(Pixel x, const Connectivity& conn) {
  std::vector<Pixel> out;
  out.reserve(conn.offsets().size());
  for (Offset d : conn.offsets()) out.push_back(x + d);
  return PixelSet::from_vector(std::move(out));
}

// True iff s is empty, a singleton, or any two members are joined by a path
// of neighbor steps staying inside s.
inline bool is_connected(const PixelSet& s, const Connectivity& conn) {
  if (s.size() <= 1) return true;
  std::vector<Pixel> stack{s.pixels().front()};
  std::vector<char> seen(s.size(), 0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    Pixel p = stack.back();
    stack.pop_back();
    for (Offset d : conn.offsets()) {
      Pixel q = p + d;
      auto it = std::lower_bound(s.pixels().begin(), s.pixels().end(), q);
      if (it == s.pixels().end() || *it != q) continue;
      std::size_t i = static_cast<std::size_t>(it - s.pixels().begin());
      if (!seen[i]) {
        seen[i] = 1;
        ++reached;
        stack.push_back(q);
      }
    }
  }
  return reached == s.size();
}

// Pixels outside v with a neighbor inside v. v must be nonempty and connected.
inline PixelSet adjacency(const PixelSet& v, const Connectivity& conn) {
  if (v.empty()) throw std::invalid_argument("adjacency: set must be nonempty");
  if (!is_connected(v, conn))
    throw std::invalid_argument("adjacency: set must be connected");
  std::vector<Pixel> out;
  for (Pixel p : v) {
    for (Offset d : conn.offsets()) {
      Pixel q = p + d;
      if (!v.contains(q)) out.push_back(q);
    }
  }
  return PixelSet::from_vector(std::move(out));
}

// Connected component of {p : inside(p)} containing x, explored within
// bounds expanded by a one-pixel ring. Empty if x fails the predicate.
template <typename Pred>
PixelSet point_connected_opening(Pixel x, Pred&& inside, const Connectivity& conn,
                                 const Rect& bounds) {
  const Rect box = bounds.expanded(1);
  if (!box.contains(x) || !inside(x)) return {};
  std::vector<char> seen(static_cast<std::size_t>(box.rows) * box.cols, 0);
  auto mark = [&](Pixel p) -> char& {
    return seen[static_cast<std::size_t>(p.row - box.row0) * box.cols +
                (p.col - box.col0)];
  };
  std::vector<Pixel> stack{x};
  std::vector<Pixel> comp{x};
  mark(x) = 1;
  while (!stack.empty()) {
    Pixel p = stack.back();
    stack.pop_back();
    for (Offset d : conn.offsets()) {
      Pixel q = p + d;
      if (!box.contains(q) || mark(q)) continue;
      if (!inside(q)) continue;
      mark(q) = 1;
      comp.push_back(q);
      stack.push_back(q);
    }
  }
  return PixelSet::from_vector(std::move(comp));
}

namespace detail {

inline int oriented(int v, Extremum polarity) {
  return polarity == Extremum::maximum ? v : -v;
}

// Result of flooding one threshold component of {sign*f >= sign*t}.
struct ComponentScan {
  std::vector<Pixel> pixels;  // members inside the image domain
  bool unbounded = false;     // the component escapes into the constant exterior
  bool oversize = false;      // more than size_cap members were found
  bool has_boundary = false;
  int boundary_best = 0;  // strongest adjacent level: max for maximum, min for minimum
};

// Floods the component of {p : f(p) >= t} (or <= t for minimum polarity)
// containing x. The exterior is the constant padding: one qualifying
// out-of-domain neighbor makes the component unbounded. With size_cap >= 0
// the flood stops once the member count exceeds the cap. pixels and the
// boundary fields are only meaningful when neither flag is set.
inline ComponentScan threshold_component(const GridImage& f, Pixel x, int t,
                                         Extremum polarity, const Connectivity& conn,
                                         std::int64_t size_cap = -1) {
  ComponentScan scan;
  const int ot = oriented(t, polarity);
  auto qualifies = [&](int v) { return oriented(v, polarity) >= ot; };

  if (!f.in_domain(x)) {
    scan.unbounded = qualifies(f.padding());
    return scan;
  }
  if (!qualifies(f.at(x))) return scan;

  std::vector<char> seen(static_cast<std::size_t>(f.height()) * f.width(), 0);
  auto mark = [&](Pixel p) -> char& {
    return seen[static_cast<std::size_t>(p.row) * f.width() + p.col];
  };
  int best = 0;
  std::vector<Pixel> stack{x};
  scan.pixels.push_back(x);
  mark(x) = 1;
  while (!stack.empty()) {
    Pixel p = stack.back();
    stack.pop_back();
    for (Offset d : conn.offsets()) {
      Pixel q = p + d;
      if (!f.in_domain(q)) {
        if (qualifies(f.padding())) {
          scan.unbounded = true;
          return scan;
        }
        int ov = oriented(f.padding(), polarity);
        if (!scan.has_boundary || ov > best) best = ov;
        scan.has_boundary = true;
        continue;
      }
      if (mark(q)) continue;
      int v = f.at(q);
      if (qualifies(v)) {
        mark(q) = 1;
        scan.pixels.push_back(q);
        if (size_cap >= 0 && static_cast<std::int64_t>(scan.pixels.size()) > size_cap) {
          scan.oversize = true;
          return scan;
        }
        stack.push_back(q);
      } else {
        int ov = oriented(v, polarity);
        if (!scan.has_boundary || ov > best) best = ov;
        scan.has_boundary = true;
      }
    }
  }
  scan.boundary_best = polarity == Extremum::maximum ? best : -best;
  return scan;
}

// Largest strict local extremum set containing x with at most n members,
// if one exists. The candidates containing x form a nested chain of
// threshold components, so walking thresholds downward (upward for minimum
// polarity) visits them all in increasing size.
inline std::optional<PixelSet> maximal_extremum_set(const GridImage& f, Pixel x, int n,
                                                    const Connectivity& conn,
                                                    Extremum polarity) {
  if (n < 1) throw std::invalid_argument("maximal_extremum_set: n must be >= 1");
  std::optional<PixelSet> best;
  int t = f.value(x);
  while (true) {
    ComponentScan scan = threshold_component(f, x, t, polarity, conn, n);
    if (scan.unbounded || scan.oversize) break;
    best = PixelSet::from_vector(std::move(scan.pixels));
    if (!scan.has_boundary) break;
    t = scan.boundary_best;
  }
  return best;
}

// True iff some strict local extremum set of cardinality <= n exists.
// It suffices to test, for one representative x per flat zone, the component
// of {f >= f(x)} (resp. <=): that component is contained in every extremum
// set through x, and is itself one whenever it is bounded.
inline bool exists_extremum_set_up_to(const GridImage& f, int n,
                                      const Connectivity& conn, Extremum polarity) {
  if (n < 1) return false;
  std::vector<char> seen(static_cast<std::size_t>(f.height()) * f.width(), 0);
  auto mark = [&](Pixel p) -> char& {
    return seen[static_cast<std::size_t>(p.row) * f.width() + p.col];
  };
  for (int r = 0; r < f.height(); ++r) {
    for (int c = 0; c < f.width(); ++c) {
      Pixel x{r, c};
      if (mark(x)) continue;
      const int v = f.at(x);
      std::vector<Pixel> stack{x};
      mark(x) = 1;
      while (!stack.empty()) {
        Pixel p = stack.back();
        stack.pop_back();
        for (Offset d : conn.offsets()) {
          Pixel q = p + d;
          if (!f.in_domain(q) || mark(q) || f.at(q) != v) continue;
          mark(q) = 1;
          stack.push_back(q);
        }
      }
      ComponentScan scan = threshold_component(f, x, v, polarity, conn, n);
      if (!scan.unbounded && !scan.oversize) return true;
    }
  }
  return false;
}

}  // namespace detail

inline std::optional<PixelSet> maximal_local_max_set(const GridImage& f, Pixel x, int n,
                                                     const Connectivity& conn) {
  return detail::maximal_extremum_set(f, x, n, conn, Extremum::maximum);
}

inline std::optional<PixelSet> maximal_local_min_set(const GridImage& f, Pixel x, int n,
                                                     const Connectivity& conn) {
  return detail::maximal_extremum_set(f, x, n, conn, Extremum::minimum);
}

namespace detail {

// Flat zones of exactly n pixels whose whole neighborhood lies strictly on
// the far side of the zone's value. The caller must already have removed
// extremum sets smaller than n.
inline std::vector<PixelSet> flat_extremum_components(const GridImage& f, int n,
                                                      const Connectivity& conn,
                                                      Extremum polarity) {
  if (n < 1)
    throw std::invalid_argument("flat_extremum_components: n must be >= 1");
#ifndef NDEBUG
  if (f.domain().area() <= 4096 && n >= 2)
    assert(!exists_extremum_set_up_to(f, n - 1, conn, polarity) &&
           "input still has extremum sets below the requested size");
#endif
  std::vector<PixelSet> out;
  std::vector<char> seen(static_cast<std::size_t>(f.height()) * f.width(), 0);
  auto mark = [&](Pixel p) -> char& {
    return seen[static_cast<std::size_t>(p.row) * f.width() + p.col];
  };
  for (int r = 0; r < f.height(); ++r) {
    for (int c = 0; c < f.width(); ++c) {
      Pixel x{r, c};
      if (mark(x)) continue;
      const int v = f.at(x);
      const int ov = oriented(v, polarity);
      bool strict = true;
      std::vector<Pixel> zone{x};
      std::vector<Pixel> stack{x};
      mark(x) = 1;
      while (!stack.empty()) {
        Pixel p = stack.back();
        stack.pop_back();
        for (Offset d : conn.offsets()) {
          Pixel q = p + d;
          int qv = f.value(q);
          if (qv == v && f.in_domain(q)) {
            if (!mark(q)) {
              mark(q) = 1;
              zone.push_back(q);
              stack.push_back(q);
            }
          } else if (oriented(qv, polarity) >= ov) {
            strict = false;
          }
        }
      }
      if (strict && static_cast<int>(zone.size()) == n)
        out.push_back(PixelSet::from_vector(std::move(zone)));
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<PixelSet> flat_local_max_components(const GridImage& f, int n,
                                                       const Connectivity& conn) {
  return detail::flat_extremum_components(f, n, conn, Extremum::maximum);
}

inline std::vector<PixelSet> flat_local_min_components(const GridImage& f, int n,
                                                       const Connectivity& conn) {
  return detail::flat_extremum_components(f, n, conn, Extremum::minimum);
}

}  // namespace lulu

#endif  // LULU_CONNECTIVITY_HPP
