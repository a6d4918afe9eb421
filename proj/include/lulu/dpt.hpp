// Copyright 2026 The lulu Authors. All rights reserved.
// Use of this source code is governed by the Apache License 2.0
// that can be found in the LICENSE file.

#ifndef LULU_DPT_HPP
#define LULU_DPT_HPP

#include <algorithm>
#include <cassert>
#include <climits>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lulu/connectivity.hpp"
#include "lulu/grid.hpp"

namespace lulu {

// One flat excursion removed by some stage of the transform: the image was
// raised or lowered by a constant amount on a connected support.
struct Pulse {
  PixelSet support;
  int amplitude = 0;
  int layer() const { return static_cast<int>(support.size()); }
};

// Stage operator sequencing. Each stage applies the lower smoother first;
// the upper-first variant is reserved and currently rejected.
enum class DptVariant { un_after_ln, ln_after_un };

struct DptDecomposition {
  Connectivity connectivity = Connectivity::four();
  int height = 0;
  int width = 0;
  std::map<int, std::vector<Pulse>> layers;
  int residual_constant = 0;
  bool complete = true;
  std::optional<GridImage> residual;  // retained when the stage bound cut the run short

  std::int64_t pulse_count() const {
    std::int64_t total = 0;
    for (const auto& [n, list] : layers) total += static_cast<std::int64_t>(list.size());
    return total;
  }
};

namespace detail {

// Incremental engine behind the pulse transform. The image is held as a
// union-find over maximal flat plateaus; stage n lowers every n-pixel
// plateau sitting strictly above its neighborhood onto the nearest adjacent
// level, then raises the strictly-below ones, recording each move as a
// pulse. A merge always produces a plateau of more than n pixels, so a
// stage never revisits its own bucket, and plateau extremal status can only
// change through a merge, which re-evaluates the merged plateau. The
// constant exterior is one virtual plateau of unbounded size; the transform
// is finished when every pixel has been absorbed into it.
class PulseEngine {
 public:
  PulseEngine(const GridImage& f, const Connectivity& conn)
      : height_(f.height()),
        width_(f.width()),
        npix_(height_ * width_),
        pad_(f.padding()),
        outside_(npix_),
        offsets_(conn.offsets().begin(), conn.offsets().end()) {
    if (static_cast<std::int64_t>(height_) * width_ >= INT_MAX)
      throw std::invalid_argument("PulseEngine: image too large");
    build(f);
  }

  // Processes stage n. Stages must be visited in increasing order.
  void run_stage(int n) {
    assert(n >= 1);
    if (n > npix_) return;
    drain(max_q_[n], /*maximum=*/true);
    drain(min_q_[n], /*maximum=*/false);
  }

  // Runs stages 1,2,... until the image is constant or the bound is hit.
  // Returns the last stage processed.
  int run_until(std::optional<int> max_n) {
    int cap = npix_;
    if (max_n) cap = std::min(cap, *max_n);
    int last = 0;
    for (int n = 1; n <= cap && !settled(); ++n) {
      run_stage(n);
      last = n;
    }
    return last;
  }

  bool settled() const { return finite_plateaus_ == 0; }
  std::int64_t finite_plateau_count() const { return finite_plateaus_; }
  std::vector<Pulse>& pulses() { return pulses_; }

  GridImage current_image() {
    GridImage out(height_, width_, 0, pad_);
    for (int i = 0; i < npix_; ++i) out.at(i / width_, i % width_) = value_[find(i)];
    return out;
  }

  // First still-pending extremum set candidate of size below n, if any.
  // Meaningful on a freshly built engine, before any stage has run.
  std::optional<PixelSet> find_candidate_below(int n) {
    for (int s = 1; s < n && s <= npix_; ++s) {
      for (const std::vector<Entry>* q : {&max_q_[s], &min_q_[s]}) {
        for (const Entry& e : *q) {
          if (parent_[e.root] == e.root && version_[e.root] == e.version)
            return support_of(e.root);
        }
      }
    }
    return std::nullopt;
  }

 private:
  struct Entry {
    int root;
    std::uint32_t version;
  };

  static constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max() / 4;

  bool in_domain(Pixel p) const {
    return p.row >= 0 && p.row < height_ && p.col >= 0 && p.col < width_;
  }
  int index(Pixel p) const { return p.row * width_ + p.col; }

  int find(int i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  PixelSet support_of(int root) {
    std::vector<Pixel> pixels;
    pixels.reserve(static_cast<std::size_t>(size_[root]));
    for (int m = head_[root]; m != -1; m = next_[m])
      pixels.push_back({m / width_, m % width_});
    return PixelSet::from_vector(std::move(pixels));
  }

  void build(const GridImage& f) {
    parent_.resize(npix_ + 1);
    value_.resize(npix_ + 1);
    size_.assign(npix_ + 1, 1);
    version_.assign(npix_ + 1, 0);
    next_.assign(npix_ + 1, -1);
    head_.assign(npix_ + 1, -1);
    tail_.assign(npix_ + 1, -1);
    max_q_.assign(npix_ + 1, {});
    min_q_.assign(npix_ + 1, {});

    for (int i = 0; i < npix_; ++i) {
      parent_[i] = i;
      value_[i] = f.values()[i];
    }
    parent_[outside_] = outside_;
    value_[outside_] = pad_;
    size_[outside_] = kUnbounded;

    // Flat plateaus become union-find classes.
    for (int i = 0; i < npix_; ++i) {
      const Pixel p{i / width_, i % width_};
      for (Offset d : offsets_) {
        const Pixel q = p + d;
        if (!in_domain(q)) continue;
        const int j = index(q);
        if (f.values()[j] != f.values()[i]) continue;
        int a = find(i);
        int b = find(j);
        if (a == b) continue;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
      }
    }
    // Border plateaus at the padding level belong to the exterior.
    for (int i = 0; i < npix_; ++i) {
      if (f.values()[i] != pad_) continue;
      const Pixel p{i / width_, i % width_};
      for (Offset d : offsets_) {
        if (!in_domain(p + d)) {
          const int r = find(i);
          if (r != outside_) parent_[r] = outside_;
          break;
        }
      }
    }
    for (int i = 0; i < npix_; ++i) {
      const int r = find(i);
      if (r == outside_) continue;
      if (head_[r] == -1) {
        head_[r] = tail_[r] = i;
      } else {
        next_[tail_[r]] = i;
        tail_[r] = i;
      }
    }
    finite_plateaus_ = 0;
    for (int i = 0; i < npix_; ++i) {
      if (parent_[i] == i) {
        ++finite_plateaus_;
        evaluate(i);
      }
    }
  }

  // Enqueues root if its whole neighborhood lies strictly below (max
  // candidate) or strictly above (min candidate) its value.
  void evaluate(int root) {
    const int v = value_[root];
    bool has_above = false;
    bool has_below = false;
    for (int m = head_[root]; m != -1; m = next_[m]) {
      const Pixel p{m / width_, m % width_};
      for (Offset d : offsets_) {
        const Pixel q = p + d;
        int nv;
        if (!in_domain(q)) {
          nv = pad_;
        } else {
          const int r2 = find(index(q));
          if (r2 == root) continue;
          nv = value_[r2];
        }
        assert(nv != v && "adjacent plateaus cannot share a value");
        if (nv > v)
          has_above = true;
        else
          has_below = true;
        if (has_above && has_below) return;
      }
    }
    const auto sz = static_cast<std::size_t>(size_[root]);
    if (!has_above)
      max_q_[sz].push_back({root, version_[root]});
    else if (!has_below)
      min_q_[sz].push_back({root, version_[root]});
  }

  void drain(std::vector<Entry>& bucket, bool maximum) {
    for (std::size_t i = 0; i < bucket.size(); ++i) {
      const Entry e = bucket[i];
      if (parent_[e.root] != e.root || version_[e.root] != e.version) continue;
      process(e.root, maximum);
    }
    bucket.clear();
  }

  // Moves an extremal plateau onto its nearest adjacent level, records the
  // pulse, and merges it with every plateau sitting on that level.
  void process(int root, bool maximum) {
    const int v = value_[root];
    int target = 0;
    bool first = true;
    scratch_.clear();
    for (int m = head_[root]; m != -1; m = next_[m]) {
      const Pixel p{m / width_, m % width_};
      for (Offset d : offsets_) {
        const Pixel q = p + d;
        int r2;
        int nv;
        if (!in_domain(q)) {
          r2 = outside_;
          nv = pad_;
        } else {
          r2 = find(index(q));
          if (r2 == root) continue;
          nv = value_[r2];
        }
        scratch_.push_back(r2);
        if (first || (maximum ? nv > target : nv < target)) target = nv;
        first = false;
      }
    }
    assert(!first && "plateau with empty neighborhood");
    assert(maximum ? target < v : target > v);

    Pulse pulse;
    pulse.support = support_of(root);
    pulse.amplitude = v - target;
    pulses_.push_back(std::move(pulse));

    std::sort(scratch_.begin(), scratch_.end());
    scratch_.erase(std::unique(scratch_.begin(), scratch_.end()), scratch_.end());
    bool with_outside = false;
    merge_.clear();
    for (int r : scratch_) {
      if (r == outside_) {
        if (pad_ == target) with_outside = true;
      } else if (value_[r] == target) {
        merge_.push_back(r);
      }
    }

    if (with_outside) {
      parent_[root] = outside_;
      for (int r : merge_) parent_[r] = outside_;
      finite_plateaus_ -= static_cast<std::int64_t>(merge_.size()) + 1;
      return;
    }
    assert(!merge_.empty());
    merge_.push_back(root);
    int survivor = merge_.front();
    for (int r : merge_)
      if (size_[r] > size_[survivor]) survivor = r;
    for (int r : merge_) {
      if (r == survivor) continue;
      parent_[r] = survivor;
      size_[survivor] += size_[r];
      if (head_[r] != -1) {
        if (head_[survivor] == -1) {
          head_[survivor] = head_[r];
          tail_[survivor] = tail_[r];
        } else {
          next_[tail_[survivor]] = head_[r];
          tail_[survivor] = tail_[r];
        }
      }
    }
    value_[survivor] = target;
    ++version_[survivor];
    finite_plateaus_ -= static_cast<std::int64_t>(merge_.size()) - 1;
    evaluate(survivor);
  }

  int height_;
  int width_;
  int npix_;
  int pad_;
  int outside_;
  std::vector<Offset> offsets_;
  std::vector<int> parent_;
  std::vector<int> value_;
  std::vector<std::int64_t> size_;
  std::vector<std::uint32_t> version_;
  std::vector<int> next_;
  std::vector<int> head_;
  std::vector<int> tail_;
  std::vector<std::vector<Entry>> max_q_;
  std::vector<std::vector<Entry>> min_q_;
  std::vector<Pulse> pulses_;
  std::vector<int> scratch_;
  std::vector<int> merge_;
  std::int64_t finite_plateaus_ = 0;
};

inline void sort_pulses(std::vector<Pulse>& pulses) {
  std::sort(pulses.begin(), pulses.end(), [](const Pulse& a, const Pulse& b) {
    if (a.support.size() != b.support.size()) return a.support.size() < b.support.size();
    return a.support.pixels() < b.support.pixels();
  });
}

}  // namespace detail

// Full transform: repeatedly smooths with the stage-n operator pair and
// collects the removed excursions. With a stage bound the tail image is kept
// as an explicit residual and the result is flagged incomplete.
inline DptDecomposition dpt_decompose(const GridImage& f, const Connectivity& conn,
                                      std::optional<int> max_n = std::nullopt,
                                      DptVariant variant = DptVariant::un_after_ln) {
  if (variant != DptVariant::un_after_ln)
    throw std::invalid_argument("dpt_decompose: upper-first sequencing not implemented");
  if (max_n && *max_n < 0)
    throw std::invalid_argument("dpt_decompose: negative stage bound");
  detail::PulseEngine engine(f, conn);
  engine.run_until(max_n);

  DptDecomposition d;
  d.connectivity = conn;
  d.height = f.height();
  d.width = f.width();
  d.residual_constant = f.padding();
  d.complete = engine.settled();
  if (!d.complete) d.residual = engine.current_image();
  detail::sort_pulses(engine.pulses());
  for (Pulse& p : engine.pulses()) {
    const int n = p.layer();
    d.layers[n].push_back(std::move(p));
  }
  return d;
}

// One stage: pulls down the n-pixel peaks of g, then up the n-pixel pits of
// the lowered image. Requires g to carry no extremum sets smaller than n;
// on small inputs a violation is rejected outright.
inline std::pair<std::vector<Pulse>, GridImage> extract_layer(const GridImage& g, int n,
                                                              const Connectivity& conn) {
  if (n < 1) throw std::invalid_argument("extract_layer: n must be >= 1");
  detail::PulseEngine engine(g, conn);
  if (g.domain().area() <= 4096) {
    if (auto bad = engine.find_candidate_below(n)) {
      std::string msg = "extract_layer: input has a local extremum set of size " +
                        std::to_string(bad->size()) + " at";
      for (Pixel p : *bad)
        msg += " (" + std::to_string(p.row) + "," + std::to_string(p.col) + ")";
      throw std::logic_error(msg);
    }
  }
  engine.run_stage(n);
  detail::sort_pulses(engine.pulses());
  return {std::move(engine.pulses()), engine.current_image()};
}

// Sum of the admitted pulses, plus the residual term unless excluded.
template <typename Filter>
GridImage reconstruct(const DptDecomposition& d, Filter&& admit,
                      bool include_residual = true) {
  GridImage out(d.height, d.width, 0, 0);
  for (const auto& [n, list] : d.layers) {
    for (const Pulse& pulse : list) {
      if (!admit(pulse)) continue;
      for (Pixel p : pulse.support) out.at(p) += pulse.amplitude;
    }
  }
  if (include_residual) {
    if (d.complete) return out + d.residual_constant;
    if (!d.residual)
      throw std::invalid_argument(
          "reconstruct: incomplete decomposition carries no residual image");
    return out + *d.residual;
  }
  return out;
}

inline GridImage reconstruct_all(const DptDecomposition& d) {
  return reconstruct(d, [](const Pulse&) { return true; });
}

struct StructureCheck {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct StructureReport {
  std::vector<StructureCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

namespace detail {

inline std::string pixel_str(Pixel p) {
  return "(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")";
}

}  // namespace detail

namespace detail {

inline void check_fail(StructureCheck& c, const std::string& why) {
  if (c.pass) {
    c.pass = false;
    c.detail = why;
  }
}

// The three invariants a decomposition must satisfy on its own: well-formed
// pulses, disjoint supports per layer, nested supports across layers.
inline StructureReport structural_checks(const DptDecomposition& d) {
  StructureCheck valid{"pulse-validity", true, ""};
  StructureCheck disjoint{"intra-layer-disjoint", true, ""};
  StructureCheck nested{"inter-layer-nesting", true, ""};

  const int npix = d.height * d.width;
  std::vector<int> owner(npix, -1);
  std::vector<int> owner_layer(npix, -1);
  std::vector<int> stamp(npix, -1);
  std::vector<const Pulse*> by_ordinal;

  int ordinal = 0;
  for (const auto& [layer, list] : d.layers) {
    for (const Pulse& pulse : list) {
      by_ordinal.push_back(&pulse);
      const std::string tag =
          "layer " + std::to_string(layer) + " pulse " + std::to_string(ordinal);
      if (pulse.amplitude == 0) check_fail(valid, tag + ": zero amplitude");
      if (static_cast<int>(pulse.support.size()) != layer)
        check_fail(valid, tag + ": support size " +
                              std::to_string(pulse.support.size()) +
                              " differs from layer");
      bool inside = !pulse.support.empty();
      if (!inside) check_fail(valid, tag + ": empty support");
      for (Pixel p : pulse.support) {
        if (p.row < 0 || p.row >= d.height || p.col < 0 || p.col >= d.width) {
          check_fail(valid, tag + ": pixel " + pixel_str(p) + " outside image");
          inside = false;
        }
      }
      if (inside && !is_connected(pulse.support, d.connectivity))
        check_fail(valid, tag + ": support not connected");
      if (!inside) {
        ++ordinal;
        continue;
      }

      for (Pixel p : pulse.support) stamp[p.row * d.width + p.col] = ordinal;
      std::vector<int> priors;
      for (Pixel p : pulse.support) {
        const int i = p.row * d.width + p.col;
        if (owner[i] == -1) continue;
        if (owner_layer[i] == layer) {
          check_fail(disjoint, tag + ": overlaps pulse " + std::to_string(owner[i]) +
                                   " of the same layer at " + pixel_str(p));
        } else {
          priors.push_back(owner[i]);
        }
      }
      std::sort(priors.begin(), priors.end());
      priors.erase(std::unique(priors.begin(), priors.end()), priors.end());
      for (int prior : priors) {
        for (Pixel p : by_ordinal[prior]->support) {
          if (stamp[p.row * d.width + p.col] != ordinal) {
            check_fail(nested, tag + ": intersects pulse " + std::to_string(prior) +
                                   " without containing it (missing " + pixel_str(p) +
                                   ")");
            break;
          }
        }
      }
      for (Pixel p : pulse.support) {
        const int i = p.row * d.width + p.col;
        owner[i] = ordinal;
        owner_layer[i] = layer;
      }
      ++ordinal;
    }
  }

  StructureReport report;
  report.checks = {valid, disjoint, nested};
  return report;
}

}  // namespace detail

// Audits a decomposition against its claimed invariants: well-formed pulses,
// disjoint supports within a layer, nested supports across layers, and exact
// reconstruction of the original. Each check reports its first failure.
inline StructureReport verify_structure(const DptDecomposition& d,
                                        const GridImage& original) {
  StructureReport report = detail::structural_checks(d);
  StructureCheck rebuilt{"reconstruction", true, ""};

  if (original.height() != d.height || original.width() != d.width) {
    detail::check_fail(rebuilt, "dimension mismatch with original");
  } else if (!d.complete && !d.residual) {
    detail::check_fail(rebuilt, "incomplete decomposition carries no residual image");
  } else {
    const GridImage sum = reconstruct_all(d);
    if (sum.padding() != original.padding())
      detail::check_fail(rebuilt, "padding " + std::to_string(sum.padding()) +
                                      " differs from " +
                                      std::to_string(original.padding()));
    for (int r = 0; r < d.height && rebuilt.pass; ++r) {
      for (int c = 0; c < d.width; ++c) {
        if (sum.at(r, c) != original.at(r, c)) {
          detail::check_fail(rebuilt, "value mismatch at " + detail::pixel_str({r, c}) +
                                          ": rebuilt " + std::to_string(sum.at(r, c)) +
                                          ", original " +
                                          std::to_string(original.at(r, c)));
          break;
        }
      }
    }
  }

  report.checks.push_back(rebuilt);
  return report;
}

// Pulse counts per support size, ascending, zero-suppressed.
inline std::vector<std::pair<int, std::int64_t>> pulse_histogram(
    const DptDecomposition& d) {
  std::vector<std::pair<int, std::int64_t>> out;
  for (const auto& [n, list] : d.layers)
    if (!list.empty()) out.emplace_back(n, static_cast<std::int64_t>(list.size()));
  return out;
}

}  // namespace lulu

#endif  // LULU_DPT_HPP
