#ifndef MATFREE_TRACE_FN_HPP
#define MATFREE_TRACE_FN_HPP

#include <stdexcept>

#include "matfree/matrix.hpp"
#include "matfree/ncpart.hpp"

namespace matfree {

namespace detail {

// Diagonal matrix of the covered component rooted at block b: the product of
// the children's matrices is multiplied by V on the right and column-summed.
// A childless block reduces to tau(V).
template <class T>
Diag<T> v_matrix_covered(const NcPairPartition& pi, int b, const SquareMat<T>& v) {
  Diag<T> prod = diag_identity<T>(v.dim());
  for (int c : pi.children(b)) prod = diag_mul(prod, v_matrix_covered(pi, c, v));
  return tau_diag_times(prod, v);
}

}  // namespace detail

// Matrix-valued trace recursion. The empty partition maps to the identity
// diagonal so that its trace values come out as 1.
template <class T>
Diag<T> v_matrix(const NcPairPartition& pi, const SquareMat<T>& v) {
  Diag<T> prod = diag_identity<T>(v.dim());
  for (int o : pi.outermost_blocks()) prod = diag_mul(prod, detail::v_matrix_covered(pi, o, v));
  return prod;
}

template <class T>
T v_of(const NcPairPartition& pi, const SquareMat<T>& v) {
  if (pi.empty()) return T(1);
  return normalized_trace(v_matrix(pi, v));
}

// Variant with the right multiplier replaced by the main diagonal of V.
// Defined on covered partitions only; the scalar extension below handles the
// general case multiplicatively.
template <class T>
Diag<T> v0_matrix(const NcPairPartition& pi, const SquareMat<T>& v) {
  if (!pi.covered()) throw std::invalid_argument("v0_matrix: partition is not covered");
  Diag<T> prod = diag_identity<T>(v.dim());
  for (int c : pi.children(0)) prod = diag_mul(prod, detail::v_matrix_covered(pi, c, v));
  return diag_mul(prod, main_diagonal(v));
}

template <class T>
T v0_of(const NcPairPartition& pi, const SquareMat<T>& v) {
  if (pi.empty()) return T(1);
  if (pi.covered()) return trace(v0_matrix(pi, v));
  T out(1);
  for (const auto& seg : decompose(pi).segments) out *= trace(v0_matrix(seg, v));
  return out;
}

// Colored-sum forms: each block contributes the matrix entry indexed by its
// own color and the color of its nearest outer block. Blocks without an
// outer block read the conditional color (for v) or their own color (for
// v0). These are the independent oracles the recursive forms are tested
// against.
template <class T>
T colored_oracle_v0(const NcPairPartition& pi, const SquareMat<T>& v) {
  if (pi.empty()) return T(1);
  int k = pi.block_count();
  int n = v.dim();
  T sum(0);
  std::vector<int> f(k, 0);  // 0-based colors for blocks only
  while (true) {
    T term(1);
    for (int p = 0; p < k; ++p) {
      int q = pi.has_outer(p) ? f[pi.outer(p)] : f[p];
      term *= v(f[p], q);
    }
    sum += term;
    int i = 0;
    while (i < k && f[i] == n - 1) f[i++] = 0;
    if (i == k) break;
    ++f[i];
  }
  return sum;
}

template <class T>
T colored_oracle_v(const NcPairPartition& pi, const SquareMat<T>& v) {
  if (pi.empty()) return T(1);
  int k = pi.block_count();
  int n = v.dim();
  T sum(0);
  std::vector<int> f(k + 1, 0);  // f[k] is the conditional color
  while (true) {
    T term(1);
    for (int p = 0; p < k; ++p) {
      int q = pi.has_outer(p) ? f[pi.outer(p)] : f[k];
      term *= v(f[p], q);
    }
    sum += term;
    int i = 0;
    while (i <= k && f[i] == n - 1) f[i++] = 0;
    if (i == k + 1) break;
    ++f[i];
  }
  return sum / T(n);
}

// Trace values for a block variance matrix B weighted by the dimension
// matrix D, and the standard-state variant.
template <class T>
T b_of(const NcPairPartition& pi, const SquareMat<T>& b, const Diag<T>& d) {
  if (static_cast<int>(d.size()) != b.dim()) throw std::invalid_argument("b_of: dimension mismatch");
  if (pi.empty()) return trace(d);  // Tr(D) = 1 for a dimension matrix
  return trace(diag_mul(v_matrix(pi, b), d));
}

template <class T>
T b0_of(const NcPairPartition& pi, const SquareMat<T>& b) {
  return v0_of(pi, b);
}

}  // namespace matfree

#endif  // MATFREE_TRACE_FN_HPP
