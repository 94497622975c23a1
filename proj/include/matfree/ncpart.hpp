#ifndef MATFREE_NCPART_HPP
#define MATFREE_NCPART_HPP

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace matfree {

// A non-crossing pair partition of [2k]. Blocks are indexed by the position
// of their left endpoint, so pairs_ is sorted by first coordinate and block p
// is pairs_[p]. outer_[p] is the nearest outer block, with outer_[p] == p for
// blocks that have no outer block.
class NcPairPartition {
 public:
  NcPairPartition() = default;

  explicit NcPairPartition(std::vector<std::pair<int, int>> pairs) : pairs_(std::move(pairs)) {
    std::sort(pairs_.begin(), pairs_.end());
    validate();
    build_outer();
  }

  int block_count() const { return static_cast<int>(pairs_.size()); }
  int ground_size() const { return 2 * block_count(); }
  bool empty() const { return pairs_.empty(); }

  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  const std::pair<int, int>& block(int p) const { return pairs_[p]; }

  // Nearest outer block of block p; p itself when there is none.
  int outer(int p) const { return outer_[p]; }
  bool has_outer(int p) const { return outer_[p] != p; }

  // True when 1 and 2k share a block (single-block partitions count).
  bool covered() const {
    return !pairs_.empty() && pairs_.front().first == 1 && pairs_.front().second == ground_size();
  }

  bool operator==(const NcPairPartition& o) const { return pairs_ == o.pairs_; }
  bool operator<(const NcPairPartition& o) const { return pairs_ < o.pairs_; }

  // Blocks whose nearest outer block is p, in left-to-right order.
  std::vector<int> children(int p) const {
    std::vector<int> out;
    for (int q = 0; q < block_count(); ++q)
      if (q != p && outer_[q] == p) out.push_back(q);
    return out;
  }

  std::vector<int> outermost_blocks() const {
    std::vector<int> out;
    for (int p = 0; p < block_count(); ++p)
      if (outer_[p] == p) out.push_back(p);
    return out;
  }

 private:
  void validate() const {
    int m = ground_size();
    std::vector<char> seen(m + 1, 0);
    for (auto [l, r] : pairs_) {
      if (l < 1 || r > m || l >= r) throw std::invalid_argument("NcPairPartition: bad pair");
      if (seen[l] || seen[r]) throw std::invalid_argument("NcPairPartition: repeated point");
      seen[l] = seen[r] = 1;
    }
    for (auto [l1, r1] : pairs_)
      for (auto [l2, r2] : pairs_)
        if (l1 < l2 && l2 < r1 && r1 < r2)
          throw std::invalid_argument("NcPairPartition: crossing blocks");
  }

  void build_outer() {
    int k = block_count();
    outer_.assign(k, 0);
    std::vector<int> stack;
    // pairs_ sorted by left endpoint: a scan with a stack of currently open
    // blocks yields each block's nearest enclosing block.
    for (int p = 0; p < k; ++p) {
      while (!stack.empty() && pairs_[stack.back()].second < pairs_[p].first) stack.pop_back();
      outer_[p] = stack.empty() ? p : stack.back();
      stack.push_back(p);
    }
  }

  std::vector<std::pair<int, int>> pairs_;
  std::vector<int> outer_;
};

namespace detail {

// Pair lists of all non-crossing pairings of the interval [lo, hi], emitted
// in lexicographic order: the partner of lo ascends, then the interior, then
// the exterior. Interval lengths stay small (at most 16 points).
inline std::vector<std::vector<std::pair<int, int>>> nc2_pair_lists(int lo, int hi) {
  std::vector<std::vector<std::pair<int, int>>> out;
  if (lo > hi) {
    out.emplace_back();
    return out;
  }
  for (int m = lo + 1; m <= hi; m += 2) {
    auto inner = nc2_pair_lists(lo + 1, m - 1);
    auto exterior = nc2_pair_lists(m + 1, hi);
    for (const auto& in : inner)
      for (const auto& ex : exterior) {
        std::vector<std::pair<int, int>> v;
        v.reserve(1 + in.size() + ex.size());
        v.emplace_back(lo, m);
        v.insert(v.end(), in.begin(), in.end());
        v.insert(v.end(), ex.begin(), ex.end());
        out.push_back(std::move(v));
      }
  }
  return out;
}

}  // namespace detail

// All non-crossing pair partitions of [2k], in lexicographic order of the
// sorted pair list. k = 0 yields the single empty partition.
inline std::vector<NcPairPartition> enumerate_nc2(int k) {
  if (k < 0) throw std::invalid_argument("enumerate_nc2: negative k");
  std::vector<NcPairPartition> out;
  for (auto& pl : detail::nc2_pair_lists(1, 2 * k)) out.emplace_back(std::move(pl));
  return out;
}

// Interval decomposition. With a covering block present the segments are the
// covered sub-partitions of the interior; otherwise they are the maximal
// covered factors over consecutive intervals. Segments are re-indexed to
// their own ground sets; intervals records the original coordinates.
struct CoveredDecomposition {
  std::optional<std::pair<int, int>> covering;
  std::vector<NcPairPartition> segments;
  std::vector<std::pair<int, int>> intervals;
};

namespace detail {

// All blocks weakly inside block b (b itself included), via the outer tree.
inline std::vector<int> subtree_blocks(const NcPairPartition& pi, int b) {
  std::vector<int> out{b}, frontier{b};
  while (!frontier.empty()) {
    int cur = frontier.back();
    frontier.pop_back();
    for (int c : pi.children(cur)) {
      out.push_back(c);
      frontier.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline NcPairPartition reindex_blocks(const NcPairPartition& pi, const std::vector<int>& blocks) {
  std::vector<std::pair<int, int>> ps;
  ps.reserve(blocks.size());
  int base = pi.block(blocks.front()).first;  // blocks span a contiguous interval
  for (int b : blocks) {
    auto [l, r] = pi.block(b);
    ps.emplace_back(l - base + 1, r - base + 1);
  }
  return NcPairPartition(std::move(ps));
}

}  // namespace detail

inline CoveredDecomposition decompose(const NcPairPartition& pi) {
  if (pi.empty()) throw std::invalid_argument("decompose: empty partition");
  CoveredDecomposition out;
  if (pi.covered()) {
    out.covering = pi.block(0);
    for (int c : pi.children(0)) {
      auto blocks = detail::subtree_blocks(pi, c);
      out.segments.push_back(detail::reindex_blocks(pi, blocks));
      out.intervals.push_back(pi.block(c));
    }
  } else {
    for (int o : pi.outermost_blocks()) {
      auto blocks = detail::subtree_blocks(pi, o);
      out.segments.push_back(detail::reindex_blocks(pi, blocks));
      out.intervals.push_back(pi.block(o));
    }
  }
  return out;
}

// A coloring of the k blocks plus the conditional block: f(0) colors the
// conditional block, f(p) colors block p-1. Colors are 1..r.
struct Coloring {
  std::vector<int> f;  // size k+1
  int color_of_block(int p) const { return f[p + 1]; }
  int conditional_color() const { return f[0]; }
};

// Forward range over all r^(k+1) colorings, in odometer order.
class ColoringRange {
 public:
  ColoringRange(int k, int r) : k_(k), r_(r) {
    if (r < 1) throw std::invalid_argument("colorings: need r >= 1");
  }

  class iterator {
   public:
    iterator() : done_(true) {}
    iterator(int k, int r) : r_(r), done_(false) { cur_.f.assign(k + 1, 1); }
    const Coloring& operator*() const { return cur_; }
    const Coloring* operator->() const { return &cur_; }
    iterator& operator++() {
      for (size_t i = 0; i < cur_.f.size(); ++i) {
        if (cur_.f[i] < r_) {
          ++cur_.f[i];
          for (size_t j = 0; j < i; ++j) cur_.f[j] = 1;
          return *this;
        }
      }
      done_ = true;
      return *this;
    }
    bool operator!=(const iterator& o) const { return done_ != o.done_; }

   private:
    Coloring cur_;
    int r_ = 0;
    bool done_;
  };

  iterator begin() const { return iterator(k_, r_); }
  iterator end() const { return iterator(); }

 private:
  int k_, r_;
};

inline ColoringRange colorings(const NcPairPartition& pi, int r) {
  return ColoringRange(pi.block_count(), r);
}

}  // namespace matfree

#endif  // MATFREE_NCPART_HPP
