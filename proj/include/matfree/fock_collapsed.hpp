#ifndef MATFREE_FOCK_COLLAPSED_HPP
#define MATFREE_FOCK_COLLAPSED_HPP

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "matfree/fock.hpp"

namespace matfree {

// Block-collapsed pseudomatrix engine. Variances are constant on blocks, so
// states that start block-symmetric stay block-symmetric and words can be
// tracked up to block-preserving permutations of the index set. A word orbit
// is a pair sequence over abstract symbols: distinct symbols stand for
// distinct concrete indices, each symbol carries its block, and pinned
// symbols (the distinguished index of a condition state) are never renamed.
// Amplitudes are per concrete word; multiplicities enter only when an
// annihilation erases the last occurrence of an unpinned symbol, collapsing
// n_k - known_k distinct predecessors onto one orbit.
struct CWord {
  std::vector<std::pair<int, int>> p;  // symbol ids
  std::vector<int> block;              // block of each symbol id
  int npinned = 0;                     // ids [0, npinned) are pinned

  bool operator<(const CWord& o) const {
    if (p != o.p) return p < o.p;
    if (block != o.block) return block < o.block;
    return npinned < o.npinned;
  }
  bool operator==(const CWord& o) const {
    return p == o.p && block == o.block && npinned == o.npinned;
  }
};

namespace detail {

inline CWord canonical_cword(const std::vector<std::pair<int, int>>& pairs,
                             const std::vector<int>& blocks, int npinned) {
  CWord out;
  out.npinned = npinned;
  std::vector<int> remap(blocks.size(), -1);
  for (int s = 0; s < npinned; ++s) {
    remap[s] = s;
    out.block.push_back(blocks[s]);
  }
  auto touch = [&](int s) {
    if (remap[s] < 0) {
      remap[s] = static_cast<int>(out.block.size());
      out.block.push_back(blocks[s]);
    }
  };
  for (auto [a, b] : pairs) {
    touch(a);
    touch(b);
  }
  out.p.reserve(pairs.size());
  for (auto [a, b] : pairs) out.p.emplace_back(remap[a], remap[b]);
  return out;
}

inline int known_in_block(const CWord& w, int k) {
  int c = 0;
  for (int b : w.block)
    if (b == k) ++c;
  return c;
}

inline bool symbol_occurs(const std::vector<std::pair<int, int>>& pairs, int s) {
  for (auto [a, b] : pairs)
    if (a == s || b == s) return true;
  return false;
}

}  // namespace detail

template <class T>
class CollapsedPseudomatrix {
 public:
  // pinned_block >= 0 pins one concrete index of that block (0-based) as
  // symbol 0; the engine then computes condition-state moments for any
  // representative index of the block.
  CollapsedPseudomatrix(const BlockModel<T>& model, int n, Flavor flavor, int pinned_block = -1)
      : flavor_(flavor), n_(n), r_(model.r), u_(model.U), sizes_(model.interval_sizes(n)) {
    npinned_ = pinned_block >= 0 ? 1 : 0;
    if (pinned_block >= 0) pinned_blocks_.push_back(pinned_block);
  }

  CWord vacuum_word() const {
    CWord w;
    w.npinned = npinned_;
    w.block = pinned_blocks_;
    return w;
  }

  CWord pinned_basis_word() const {
    if (npinned_ != 1) throw std::logic_error("pinned_basis_word: engine has no pinned index");
    CWord w = vacuum_word();
    w.p.emplace_back(0, 0);
    return w;
  }

  // One application of S(n) in the weighted convention (variance on
  // creation, unit weight on annihilation). Creations beyond the length cap
  // are dropped: the caller chooses the cap so that any longer word could
  // not return to the readout word within the remaining steps.
  std::map<CWord, T> step(const std::map<CWord, T>& in, int cap) const {
    std::map<CWord, T> out;
    auto add = [&out](const CWord& w, const T& c) {
      if (c == T(0)) return;
      auto [it, fresh] = out.try_emplace(w, c);
      if (!fresh) {
        it->second += c;
        if (it->second == T(0)) out.erase(it);
      }
    };
    for (const auto& [w, c] : in) {
      if (!w.p.empty()) {
        // annihilate the leading pair
        auto [s, t] = w.p.front();
        std::vector<std::pair<int, int>> rest(w.p.begin() + 1, w.p.end());
        T mult(1);
        if (s >= w.npinned && !detail::symbol_occurs(rest, s)) {
          CWord u = detail::canonical_cword(rest, w.block, w.npinned);
          mult = T(sizes_[w.block[s]] - detail::known_in_block(u, w.block[s]));
          add(u, c * mult);
        } else {
          add(detail::canonical_cword(rest, w.block, w.npinned), c);
        }
      }
      if (static_cast<int>(w.p.size()) + 1 > cap) continue;
      auto emit_create = [&](int si, int sj, const std::vector<int>& blocks) {
        std::vector<std::pair<int, int>> np;
        np.reserve(w.p.size() + 1);
        np.emplace_back(si, sj);
        np.insert(np.end(), w.p.begin(), w.p.end());
        T v = u_(blocks[si], blocks[sj]) / T(n_);
        add(detail::canonical_cword(np, blocks, w.npinned), c * v);
      };
      int nsym = static_cast<int>(w.block.size());
      if (w.p.empty()) {
        // diagonal creations from the vacuum
        for (int e = 0; e < nsym; ++e) emit_create(e, e, w.block);
        for (int k = 0; k < r_; ++k) {
          if (sizes_[k] - detail::known_in_block(w, k) <= 0) continue;
          std::vector<int> blocks = w.block;
          blocks.push_back(k);
          emit_create(nsym, nsym, blocks);
        }
      } else {
        auto [s, t] = w.p.front();
        bool off_diagonal = (s != t);
        for (int e = 0; e < nsym; ++e) {
          if (flavor_ == Flavor::strong && off_diagonal && e == s) continue;
          emit_create(e, s, w.block);
        }
        for (int k = 0; k < r_; ++k) {
          if (sizes_[k] - detail::known_in_block(w, k) <= 0) continue;
          std::vector<int> blocks = w.block;
          blocks.push_back(k);
          emit_create(nsym, s, blocks);
        }
        if (off_diagonal) emit_create(s, t, w.block);  // repeated tensor factor
      }
    }
    return out;
  }

  T moment(int m, const CWord& start) const { return moments_upto(m, start)[m]; }

  // All moments <S^t start, start> for t = 0..m from a single evolution. A
  // word of length L after step t contributes to a readout at step t'' only
  // if t'' - t >= L - |start|, so lengths beyond |start| + (m - t) are
  // pruned without affecting any of the returned values.
  std::vector<T> moments_upto(int m, const CWord& start) const {
    int base = static_cast<int>(start.p.size());
    std::vector<T> out(m + 1, T(0));
    std::map<CWord, T> state{{start, T(1)}};
    out[0] = T(1);
    for (int t = 1; t <= m; ++t) {
      state = step(state, base + (m - t));
      auto it = state.find(start);
      if (it != state.end()) out[t] = it->second;
    }
    return out;
  }

  const std::vector<int>& sizes() const { return sizes_; }

 private:
  Flavor flavor_;
  int n_, r_;
  SquareMat<T> u_;
  std::vector<int> sizes_;
  int npinned_ = 0;
  std::vector<int> pinned_blocks_;
};

// Exact moments of S(n)^t, t = 0..m, through the collapsed engine. Square
// arrays only; condition states pin the block of the chosen index, and the
// trace is the block-weighted average of per-block condition moments.
template <class T>
std::vector<T> pseudomatrix_moments_collapsed(const BlockModel<T>& model, int n, int m,
                                              const StateKind& kind,
                                              Flavor flavor = Flavor::standard) {
  switch (kind.tag) {
    case StateKind::Tag::vacuum: {
      CollapsedPseudomatrix<T> eng(model, n, flavor);
      return eng.moments_upto(m, eng.vacuum_word());
    }
    case StateKind::Tag::condition: {
      int block = model.color_of(n)[kind.j - 1];
      CollapsedPseudomatrix<T> eng(model, n, flavor, block);
      return eng.moments_upto(m, eng.pinned_basis_word());
    }
    case StateKind::Tag::trace: {
      std::vector<T> out(m + 1, T(0));
      auto sizes = model.interval_sizes(n);
      for (int k = 0; k < model.r; ++k) {
        CollapsedPseudomatrix<T> eng(model, n, flavor, k);
        std::vector<T> part = eng.moments_upto(m, eng.pinned_basis_word());
        for (int t = 0; t <= m; ++t) out[t] += T(sizes[k]) * part[t];
      }
      for (int t = 0; t <= m; ++t) out[t] /= T(n);
      return out;
    }
  }
  throw std::logic_error("pseudomatrix_moments_collapsed: unknown state kind");
}

template <class T>
T pseudomatrix_moment_collapsed(const BlockModel<T>& model, int n, int m, const StateKind& kind,
                                Flavor flavor = Flavor::standard) {
  return pseudomatrix_moments_collapsed(model, n, m, kind, flavor)[m];
}

// Lagrange evaluation at 1/n -> 0 of samples (n_t, y_t). Exact when the
// sampled quantity is a polynomial in 1/n of degree < #points, which holds
// for pseudomatrix moments whenever every sampled n splits the blocks
// without rounding.
template <class T>
T extrapolate_to_limit(const std::vector<std::pair<int, T>>& points) {
  if (points.size() < 2) throw std::invalid_argument("extrapolate_to_limit: need >= 2 points");
  T out(0);
  for (size_t t = 0; t < points.size(); ++t) {
    T xt = T(1) / T(points[t].first);
    T term = points[t].second;
    for (size_t s = 0; s < points.size(); ++s) {
      if (s == t) continue;
      T xs = T(1) / T(points[s].first);
      term *= xs / (xs - xt);
    }
    out += term;
  }
  return out;
}

// Moments of S(n)^t extrapolated to n = infinity from exact finite-n values,
// for every t = 0..m at once. The trace moment is a polynomial of degree
// m/2 + 1 in 1/n (the vacuum one of degree m/2), so m/2 + 2 sample points
// pin the limit exactly.
template <class T>
std::vector<T> fock_extrapolated_moments(const BlockModel<T>& model, int m,
                                         const std::vector<int>& ns, const StateKind& kind,
                                         Flavor flavor = Flavor::standard) {
  if (static_cast<int>(ns.size()) < m / 2 + 2)
    throw std::invalid_argument("fock_extrapolated_moments: too few sample sizes");
  std::vector<std::vector<T>> samples;
  samples.reserve(ns.size());
  for (int n : ns) samples.push_back(pseudomatrix_moments_collapsed(model, n, m, kind, flavor));
  std::vector<T> out(m + 1);
  for (int t = 0; t <= m; ++t) {
    std::vector<std::pair<int, T>> pts;
    pts.reserve(ns.size());
    for (size_t s = 0; s < ns.size(); ++s) pts.emplace_back(ns[s], samples[s][t]);
    out[t] = extrapolate_to_limit(pts);
  }
  return out;
}

template <class T>
T fock_extrapolated_moment(const BlockModel<T>& model, int m, const std::vector<int>& ns,
                           const StateKind& kind, Flavor flavor = Flavor::standard) {
  return fock_extrapolated_moments(model, m, ns, kind, flavor)[m];
}

template <class T>
struct ConvergenceRow {
  int order;
  int n;
  T value;
  T limit;
  T abs_error;
};

template <class T>
std::vector<ConvergenceRow<T>> convergence_table(const BlockModel<T>& model,
                                                 const std::vector<int>& orders,
                                                 const std::vector<int>& ns, const StateKind& kind,
                                                 const std::vector<T>& limits,
                                                 Flavor flavor = Flavor::standard) {
  if (orders.size() != limits.size())
    throw std::invalid_argument("convergence_table: orders/limits mismatch");
  int max_order = 0;
  for (int m : orders) max_order = std::max(max_order, m);
  std::vector<ConvergenceRow<T>> out;
  std::vector<std::vector<T>> per_n;
  per_n.reserve(ns.size());
  for (int n : ns)
    per_n.push_back(pseudomatrix_moments_collapsed(model, n, max_order, kind, flavor));
  for (size_t t = 0; t < orders.size(); ++t)
    for (size_t s = 0; s < ns.size(); ++s) {
      T v = per_n[s][orders[t]];
      out.push_back({orders[t], ns[s], v, limits[t], abs_value(v - limits[t])});
    }
  return out;
}

}  // namespace matfree

#endif  // MATFREE_FOCK_COLLAPSED_HPP
