#ifndef MATFREE_MATRIX_HPP
#define MATFREE_MATRIX_HPP

#include <stdexcept>
#include <vector>

namespace matfree {

// Small dense square matrix. Sizes here are the block count r (tiny) or the
// pseudomatrix size n (at most a few thousand), so nothing clever is needed.
template <class T>
class SquareMat {
 public:
  SquareMat() : n_(0) {}
  explicit SquareMat(int n) : n_(n), a_(static_cast<size_t>(n) * n, T(0)) {
    if (n < 0) throw std::invalid_argument("SquareMat: negative dimension");
  }
  SquareMat(int n, std::vector<T> entries) : n_(n), a_(std::move(entries)) {
    if (a_.size() != static_cast<size_t>(n) * n)
      throw std::invalid_argument("SquareMat: entry count does not match dimension");
  }

  static SquareMat identity(int n) {
    SquareMat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int dim() const { return n_; }
  T& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  const T& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

  bool operator==(const SquareMat& o) const { return n_ == o.n_ && a_ == o.a_; }

 private:
  int n_;
  std::vector<T> a_;
};

// Diagonal matrices are carried as plain coefficient vectors.
template <class T>
using Diag = std::vector<T>;

template <class T>
Diag<T> diag_identity(int n) {
  return Diag<T>(n, T(1));
}

template <class T>
Diag<T> diag_mul(const Diag<T>& a, const Diag<T>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("diag_mul: size mismatch");
  Diag<T> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

// Column sums of V placed on the diagonal.
template <class T>
Diag<T> tau(const SquareMat<T>& v) {
  int n = v.dim();
  Diag<T> out(n, T(0));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out[j] += v(i, j);
  return out;
}

// tau(P * V) for diagonal P: entry j is sum_i p_i v_{i,j}.
template <class T>
Diag<T> tau_diag_times(const Diag<T>& p, const SquareMat<T>& v) {
  int n = v.dim();
  if (static_cast<int>(p.size()) != n) throw std::invalid_argument("tau_diag_times: size mismatch");
  Diag<T> out(n, T(0));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out[j] += p[i] * v(i, j);
  return out;
}

template <class T>
T trace(const Diag<T>& d) {
  T s(0);
  for (const T& x : d) s += x;
  return s;
}

template <class T>
T normalized_trace(const Diag<T>& d) {
  if (d.empty()) throw std::invalid_argument("normalized_trace: empty diagonal");
  return trace(d) / T(static_cast<int>(d.size()));
}

template <class T>
Diag<T> main_diagonal(const SquareMat<T>& v) {
  Diag<T> out(v.dim());
  for (int i = 0; i < v.dim(); ++i) out[i] = v(i, i);
  return out;
}

}  // namespace matfree

#endif  // MATFREE_MATRIX_HPP
