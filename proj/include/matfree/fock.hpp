#ifndef MATFREE_FOCK_HPP
#define MATFREE_FOCK_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "matfree/block_model.hpp"

namespace matfree {

enum class Flavor { standard, strong };
enum class ArrayShape { square, lower_triangular };

struct IdxPair {
  int i = 0, j = 0;  // 1-based indices
  bool operator==(const IdxPair& o) const { return i == o.i && j == o.j; }
  bool operator!=(const IdxPair& o) const { return !(*this == o); }
  bool operator<(const IdxPair& o) const { return i < o.i || (i == o.i && j < o.j); }
};

// Basis word of the discrete matricially free Fock space. The leftmost pair
// is the most recently created one. Invariants: the last pair is diagonal;
// consecutive distinct pairs chain (second index of the left pair equals the
// first index of the right pair); the strong flavor additionally confines
// diagonal pairs to the final run.
struct FockWord {
  std::vector<IdxPair> p;

  bool empty() const { return p.empty(); }
  int length() const { return static_cast<int>(p.size()); }
  const IdxPair& leading() const { return p.front(); }

  bool operator==(const FockWord& o) const { return p == o.p; }
  bool operator<(const FockWord& o) const { return p < o.p; }
};

inline bool admissible_word(const FockWord& w, Flavor flavor) {
  if (w.empty()) return true;
  if (w.p.back().i != w.p.back().j) return false;
  for (size_t t = 0; t + 1 < w.p.size(); ++t)
    if (w.p[t] != w.p[t + 1] && w.p[t].j != w.p[t + 1].i) return false;
  if (flavor == Flavor::strong) {
    // diagonal pairs may appear only in the final run
    for (size_t t = 0; t + 1 < w.p.size(); ++t)
      if (w.p[t].i == w.p[t].j && w.p[t + 1] != w.p[t]) return false;
  }
  return true;
}

// Subspace membership behind the unit 1_{i,j}: words starting with (i,j),
// words starting with a (j,*) pair other than (i,j), and the vacuum for
// diagonal units. The strong diagonal unit keeps only the vacuum and the
// word's own diagonal tower.
inline bool unit_keeps(int i, int j, const FockWord& w, Flavor flavor) {
  if (flavor == Flavor::strong && i == j)
    return w.empty() || w.leading() == IdxPair{j, j};
  if (w.empty()) return i == j;
  const IdxPair& q = w.leading();
  return q == IdxPair{i, j} || q.i == j;
}

inline std::optional<FockWord> create_word(int i, int j, const FockWord& w, Flavor flavor) {
  if (!unit_keeps(i, j, w, flavor)) return std::nullopt;
  FockWord out;
  out.p.reserve(w.p.size() + 1);
  out.p.push_back(IdxPair{i, j});
  out.p.insert(out.p.end(), w.p.begin(), w.p.end());
  return out;
}

inline std::optional<FockWord> annihilate_word(int i, int j, const FockWord& w, Flavor flavor) {
  if (w.empty() || w.leading() != IdxPair{i, j}) return std::nullopt;
  FockWord rest;
  rest.p.assign(w.p.begin() + 1, w.p.end());
  if (!unit_keeps(i, j, rest, flavor)) return std::nullopt;
  return rest;
}

// Sparse vector over basis words. Words longer than max_len are dropped and
// flagged rather than silently truncated, so moment computations can certify
// that the truncation never mattered.
template <class T>
struct FockState {
  int n = 0;
  Flavor flavor = Flavor::standard;
  int max_len = 0;
  bool overflow = false;
  std::map<FockWord, T> amp;

  static FockState vacuum(int n, Flavor flavor, int max_len) {
    FockState s{n, flavor, max_len, false, {}};
    s.amp[FockWord{}] = T(1);
    return s;
  }
  static FockState basis(const FockWord& w, int n, Flavor flavor, int max_len) {
    if (!admissible_word(w, flavor)) throw std::invalid_argument("FockState: inadmissible word");
    FockState s{n, flavor, max_len, false, {}};
    s.amp[w] = T(1);
    return s;
  }

  void add(const FockWord& w, const T& c) {
    if (c == T(0)) return;
    auto it = amp.find(w);
    if (it == amp.end())
      amp.emplace(w, c);
    else {
      it->second += c;
      if (it->second == T(0)) amp.erase(it);
    }
  }
};

template <class T>
FockState<T> apply_create(int i, int j, const FockState<T>& s) {
  FockState<T> out{s.n, s.flavor, s.max_len, s.overflow, {}};
  for (const auto& [w, c] : s.amp) {
    auto nw = create_word(i, j, w, s.flavor);
    if (!nw) continue;
    if (nw->length() > s.max_len) {
      out.overflow = true;
      continue;
    }
    out.add(*nw, c);
  }
  return out;
}

template <class T>
FockState<T> apply_annihilate(int i, int j, const FockState<T>& s) {
  FockState<T> out{s.n, s.flavor, s.max_len, s.overflow, {}};
  for (const auto& [w, c] : s.amp) {
    auto nw = annihilate_word(i, j, w, s.flavor);
    if (nw) out.add(*nw, c);
  }
  return out;
}

template <class T>
FockState<T> apply_unit(int i, int j, const FockState<T>& s) {
  FockState<T> out{s.n, s.flavor, s.max_len, s.overflow, {}};
  for (const auto& [w, c] : s.amp)
    if (unit_keeps(i, j, w, s.flavor)) out.add(w, c);
  return out;
}

template <class T>
T inner(const FockState<T>& a, const FockState<T>& b) {
  T s(0);
  const auto& small = a.amp.size() <= b.amp.size() ? a : b;
  const auto& big = a.amp.size() <= b.amp.size() ? b : a;
  for (const auto& [w, c] : small.amp) {
    auto it = big.amp.find(w);
    if (it != big.amp.end()) s += c * it->second;
  }
  return s;
}

// Operator polynomials: sums of scaled products of creation, annihilation
// and unit primitives. Products apply right to left.
enum class PrimKind { create, annihilate, unit };

struct Prim {
  PrimKind kind;
  int i, j;
};

template <class T>
struct OpExpr {
  struct Term {
    T coeff;
    std::vector<Prim> prims;
  };
  std::vector<Term> terms;

  static OpExpr single(PrimKind k, int i, int j) {
    return OpExpr{{Term{T(1), {Prim{k, i, j}}}}};
  }
  // s * (l + l*) + c * 1, the centered-plus-mean variable used throughout:
  // its distribution under a state that the unit fixes has mean c and
  // variance s^2.
  static OpExpr position(int i, int j, const T& s, const T& c) {
    return OpExpr{{Term{s, {Prim{PrimKind::create, i, j}}},
                   Term{s, {Prim{PrimKind::annihilate, i, j}}},
                   Term{c, {Prim{PrimKind::unit, i, j}}}}};
  }
};

template <class T>
FockState<T> apply_prim(const Prim& pr, const FockState<T>& s) {
  switch (pr.kind) {
    case PrimKind::create:
      return apply_create(pr.i, pr.j, s);
    case PrimKind::annihilate:
      return apply_annihilate(pr.i, pr.j, s);
    case PrimKind::unit:
      return apply_unit(pr.i, pr.j, s);
  }
  throw std::logic_error("apply_prim: unknown primitive");
}

template <class T>
FockState<T> apply_op(const OpExpr<T>& op, const FockState<T>& s) {
  FockState<T> out{s.n, s.flavor, s.max_len, s.overflow, {}};
  for (const auto& term : op.terms) {
    FockState<T> cur = s;
    for (auto it = term.prims.rbegin(); it != term.prims.rend(); ++it) cur = apply_prim(*it, cur);
    out.overflow = out.overflow || cur.overflow;
    for (const auto& [w, c] : cur.amp) out.add(w, term.coeff * c);
  }
  return out;
}

// Evaluation states.
struct StateKind {
  enum class Tag { vacuum, condition, trace } tag = Tag::vacuum;
  int j = 1;  // condition index, 1-based

  static StateKind vacuum() { return {Tag::vacuum, 1}; }
  static StateKind condition(int j) { return {Tag::condition, j}; }
  static StateKind trace() { return {Tag::trace, 1}; }
};

// Mixed moment of an operator product in the chosen state. The overflow
// flag is checked so the result is certified exact.
template <class T>
T mixed_moment(const std::vector<OpExpr<T>>& word, const StateKind& kind, int n, Flavor flavor,
               int max_len) {
  if (kind.tag == StateKind::Tag::trace) {
    T s(0);
    for (int j = 1; j <= n; ++j) s += mixed_moment(word, StateKind::condition(j), n, flavor, max_len);
    return s / T(n);
  }
  FockState<T> xi = kind.tag == StateKind::Tag::vacuum
                        ? FockState<T>::vacuum(n, flavor, max_len)
                        : FockState<T>::basis(FockWord{{IdxPair{kind.j, kind.j}}}, n, flavor,
                                              max_len);
  FockState<T> cur = xi;
  for (auto it = word.rbegin(); it != word.rend(); ++it) cur = apply_op(*it, cur);
  if (cur.overflow) throw std::runtime_error("mixed_moment: truncation overflow, raise max_len");
  return inner(cur, xi);
}

// Random pseudomatrix S(n) built from a block model; the array shape zeroes
// the upper triangle when lower_triangular is selected.
template <class T>
struct PseudomatrixSpec {
  int n;
  BlockModel<T> model;
  Flavor flavor = Flavor::standard;
  ArrayShape shape = ArrayShape::square;
};

namespace detail {

// One application of S in the weighted convention: creation carries the full
// variance v_{i,j}(n) and annihilation is unweighted. For closed walks
// (states evaluated against themselves) creations and annihilations of each
// pair balance, so the values of moments agree with the symmetric
// normalization sqrt(v)(l + l*) while staying inside the scalar field.
template <class T>
FockState<T> apply_pseudomatrix(const FockState<T>& s, const SquareMat<T>& v, ArrayShape shape) {
  int n = s.n;
  FockState<T> out{s.n, s.flavor, s.max_len, s.overflow, {}};
  for (const auto& [w, c] : s.amp) {
    if (!w.empty()) {
      const IdxPair& q = w.leading();
      if (shape == ArrayShape::square || q.i >= q.j) {
        auto rest = annihilate_word(q.i, q.j, w, s.flavor);
        if (rest) out.add(*rest, c);
      }
    }
    auto try_create = [&](int i, int j) {
      if (shape == ArrayShape::lower_triangular && i < j) return;
      if (v(i - 1, j - 1) == T(0)) return;
      auto nw = create_word(i, j, w, s.flavor);
      if (!nw) return;
      if (nw->length() > s.max_len) {
        out.overflow = true;
        return;
      }
      out.add(*nw, c * v(i - 1, j - 1));
    };
    if (w.empty()) {
      for (int j = 1; j <= n; ++j) try_create(j, j);
    } else {
      // all pairs chained to the leading first index, plus the leading pair
      // itself (a repeated tensor factor) when it is off-diagonal
      const IdxPair& q = w.leading();
      for (int i = 1; i <= n; ++i) try_create(i, q.i);
      if (q.j != q.i) try_create(q.i, q.j);
    }
  }
  return out;
}

}  // namespace detail

// Exact moment of S(n)^m in the vacuum, a single condition, or the
// normalized trace of conditions. max_len = m + 1 always suffices.
template <class T>
T pseudomatrix_moment(const PseudomatrixSpec<T>& spec, int m, const StateKind& kind,
                      int max_len = -1) {
  if (max_len < 0) max_len = m + 1;
  SquareMat<T> v = spec.model.blockify(spec.n);
  auto run = [&](const FockState<T>& xi) {
    FockState<T> cur = xi;
    for (int t = 0; t < m; ++t) cur = detail::apply_pseudomatrix(cur, v, spec.shape);
    if (cur.overflow)
      throw std::runtime_error("pseudomatrix_moment: truncation overflow, raise max_len");
    return inner(cur, xi);
  };
  switch (kind.tag) {
    case StateKind::Tag::vacuum:
      return run(FockState<T>::vacuum(spec.n, spec.flavor, max_len));
    case StateKind::Tag::condition:
      return run(FockState<T>::basis(FockWord{{IdxPair{kind.j, kind.j}}}, spec.n, spec.flavor,
                                     max_len));
    case StateKind::Tag::trace: {
      T s(0);
      for (int j = 1; j <= spec.n; ++j)
        s += run(FockState<T>::basis(FockWord{{IdxPair{j, j}}}, spec.n, spec.flavor, max_len));
      return s / T(spec.n);
    }
  }
  throw std::logic_error("pseudomatrix_moment: unknown state kind");
}

// Spanning set of admissible words of length <= max_len, generated from the
// vacuum by admissible creations.
inline std::vector<FockWord> spanning_words(int n, Flavor flavor, int max_len) {
  std::vector<FockWord> out{FockWord{}};
  size_t lo = 0;
  for (int len = 1; len <= max_len; ++len) {
    size_t hi = out.size();
    for (size_t t = lo; t < hi; ++t) {
      FockWord w = out[t];
      if (w.length() != len - 1) continue;
      if (w.empty()) {
        for (int j = 1; j <= n; ++j) out.push_back(*create_word(j, j, w, flavor));
      } else {
        const IdxPair& q = w.leading();
        for (int i = 1; i <= n; ++i) {
          auto nw = create_word(i, q.i, w, flavor);
          if (nw) out.push_back(*nw);
        }
        if (q.j != q.i) {
          auto nw = create_word(q.i, q.j, w, flavor);
          if (nw) out.push_back(*nw);
        }
      }
    }
    lo = hi;
  }
  return out;
}

struct RelationsReport {
  bool pass = true;
  std::vector<std::string> failures;

  void record(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
};

// Verifies the canonical operator relations on a spanning set of words:
// same-pair l* l = 1; products across unchained distinct pairs vanish; units
// absorb chained creations. The strong flavor omits the diagonal-unit
// absorption, whose index chain is not admissible there.
template <class T>
RelationsReport relations_check(int n, Flavor flavor, int max_len = 4) {
  RelationsReport rep;
  auto words = spanning_words(n, flavor, max_len);
  auto equal_states = [](const FockState<T>& a, const FockState<T>& b) {
    return a.amp == b.amp;
  };
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (const auto& w : words) {
        FockState<T> s = FockState<T>::basis(w, n, flavor, max_len + 2);
        rep.record(equal_states(apply_annihilate(i, j, apply_create(i, j, s)),
                                apply_unit(i, j, s)),
                   "l*l = 1 failed at (" + std::to_string(i) + "," + std::to_string(j) + ")");
        for (int k = 1; k <= n; ++k) {
          for (int l = 1; l <= n; ++l) {
            if ((i == k && j == l) || j == k) continue;
            FockState<T> created = apply_create(k, l, s);
            rep.record(apply_annihilate(i, j, created).amp.empty(), "l* l across pairs nonzero");
            rep.record(apply_create(i, j, created).amp.empty(), "l l across pairs nonzero");
            rep.record(apply_unit(i, j, created).amp.empty(), "1 l across pairs nonzero");
          }
          if (flavor == Flavor::strong && i == j) continue;
          FockState<T> created = apply_create(j, k, s);
          rep.record(equal_states(apply_unit(i, j, created), created),
                     "1_{i,j} l_{j,k} absorption failed");
        }
      }
  return rep;
}

}  // namespace matfree

#endif  // MATFREE_FOCK_HPP
