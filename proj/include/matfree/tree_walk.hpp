#ifndef MATFREE_TREE_WALK_HPP
#define MATFREE_TREE_WALK_HPP

#include <stdexcept>
#include <vector>

#include "matfree/matrix.hpp"

namespace matfree {

// Matricial edge weighting of the rooted r-ary tree, stored through squared
// weights: entry b(k, i) is the squared weight of a child edge with row
// index k hanging below an edge of row index i. Root edge k carries row
// index k and squared weight root_w2[k]. Root-to-root walks traverse every
// edge an even number of times, so all walk weights are polynomials in the
// squared entries and the exact profile never sees a square root.
template <class T>
struct MatricialWeighting {
  SquareMat<T> b;
  std::vector<T> root_w2;

  int arity() const { return b.dim(); }
};

// Initial weights {a_{1,1}, ..., a_{r,r}} (the diagonal): the weighting
// whose walk sums are the moments of the standard limit law mu_0.
template <class T>
MatricialWeighting<T> weighting_mu0(const SquareMat<T>& b) {
  MatricialWeighting<T> w{b, std::vector<T>(b.dim())};
  for (int k = 0; k < b.dim(); ++k) w.root_w2[k] = b(k, k);
  return w;
}

// Initial weights {a_{1,j}, ..., a_{r,j}} (column j, 0-based): the weighting
// for the tracial component mu_j. For r = 2 the three weightings are the
// initial sets {alpha, delta}, {alpha, gamma}, {beta, delta}.
template <class T>
MatricialWeighting<T> weighting_muj(const SquareMat<T>& b, int j) {
  if (j < 0 || j >= b.dim()) throw std::invalid_argument("weighting_muj: bad column");
  MatricialWeighting<T> w{b, std::vector<T>(b.dim())};
  for (int k = 0; k < b.dim(); ++k) w.root_w2[k] = b(k, j);
  return w;
}

// Sum of multiplicative weights over all root-to-root walks of the given
// length. The tree is never built: excursion sums below an edge depend only
// on its row index, giving the Catalan-style recursion
//   g_i(m) = sum_k b(k,i) sum_{p=1..m} g_k(p-1) g_i(m-p),   g_i(0) = 1.
template <class T>
T walk_moment(const MatricialWeighting<T>& w, int length) {
  if (length < 0) throw std::invalid_argument("walk_moment: negative length");
  if (length == 0) return T(1);
  if (length % 2 == 1) return T(0);  // trees are bipartite
  int n = length / 2;
  int r = w.arity();
  std::vector<std::vector<T>> g(r, std::vector<T>(n + 1, T(0)));
  for (int i = 0; i < r; ++i) g[i][0] = T(1);
  for (int m = 1; m <= n; ++m)
    for (int i = 0; i < r; ++i) {
      T s(0);
      for (int k = 0; k < r; ++k) {
        if (w.b(k, i) == T(0)) continue;
        T inner(0);
        for (int p = 1; p <= m; ++p) inner += g[k][p - 1] * g[i][m - p];
        s += w.b(k, i) * inner;
      }
      g[i][m] = s;
    }
  std::vector<T> h(n + 1, T(0));
  h[0] = T(1);
  for (int m = 1; m <= n; ++m) {
    T s(0);
    for (int k = 0; k < r; ++k) {
      if (w.root_w2[k] == T(0)) continue;
      T inner(0);
      for (int p = 1; p <= m; ++p) inner += g[k][p - 1] * h[m - p];
      s += w.root_w2[k] * inner;
    }
    h[m] = s;
  }
  return h[n];
}

// A Dyck path together with the row-index labels of its down steps and the
// resulting multiplicative weight (each down step contributes the squared
// weight of the traversed edge, standing for the down-up traversal pair).
template <class T>
struct CatalanPath {
  std::vector<int> steps;   // +1 / -1, all prefix sums >= 0, total 0
  std::vector<int> labels;  // row index chosen at each down step
  T weight;
};

namespace detail {

template <class T>
void catalan_paths_rec(const MatricialWeighting<T>& w, int remaining, std::vector<int>& stack,
                       std::vector<int>& steps, std::vector<int>& labels, const T& weight,
                       std::vector<CatalanPath<T>>& out) {
  if (remaining == 0) {
    if (stack.empty()) out.push_back(CatalanPath<T>{steps, labels, weight});
    return;
  }
  if (static_cast<int>(stack.size()) < remaining) {
    for (int k = 0; k < w.arity(); ++k) {
      const T& w2 = stack.empty() ? w.root_w2[k] : w.b(k, stack.back());
      stack.push_back(k);
      steps.push_back(+1);
      labels.push_back(k);
      catalan_paths_rec(w, remaining - 1, stack, steps, labels, weight * w2, out);
      labels.pop_back();
      steps.pop_back();
      stack.pop_back();
    }
  }
  if (!stack.empty()) {
    int top = stack.back();
    stack.pop_back();
    steps.push_back(-1);
    catalan_paths_rec(w, remaining - 1, stack, steps, labels, weight, out);
    steps.pop_back();
    stack.push_back(top);
  }
}

}  // namespace detail

// Enumerates the matricially weighted Catalan paths of semilength n and
// their total weight; the total equals walk_moment(w, 2n) through the
// depth-profile bijection.
template <class T>
std::pair<std::vector<CatalanPath<T>>, T> catalan_paths(const MatricialWeighting<T>& w, int n) {
  if (n < 0) throw std::invalid_argument("catalan_paths: negative semilength");
  std::vector<CatalanPath<T>> out;
  std::vector<int> stack, steps, labels;
  detail::catalan_paths_rec(w, 2 * n, stack, steps, labels, T(1), out);
  T total(0);
  for (const auto& p : out) total += p.weight;
  return {std::move(out), total};
}

}  // namespace matfree

#endif  // MATFREE_TREE_WALK_HPP
