#ifndef MATFREE_BLOCK_MODEL_HPP
#define MATFREE_BLOCK_MODEL_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "matfree/matrix.hpp"
#include "matfree/numeric.hpp"

namespace matfree {

// Variance parameters U (r x r, nonnegative, positive diagonal) and the
// dimension matrix D (positive, Tr(D) = 1). B = DU scales row i of U by d_i.
// The relaxed flag permits zero diagonal entries of U; it exists for the
// degenerate two-dimensional closed forms and is rejected by the central
// limit routes.
template <class T>
struct BlockModel {
  int r = 0;
  SquareMat<T> U;
  std::vector<T> D;
  bool relaxed = false;

  BlockModel() = default;
  BlockModel(SquareMat<T> u, std::vector<T> d, bool relaxed_profile = false)
      : r(u.dim()), U(std::move(u)), D(std::move(d)), relaxed(relaxed_profile) {
    validate();
  }

  void validate() const {
    if (r < 1) throw std::invalid_argument("BlockModel: r must be >= 1");
    if (U.dim() != r || static_cast<int>(D.size()) != r)
      throw std::invalid_argument("BlockModel: U and D must both have dimension r");
    T sum(0);
    for (int j = 0; j < r; ++j) {
      if (!(D[j] > T(0)))
        throw std::invalid_argument("BlockModel: D[" + std::to_string(j + 1) +
                                    "] must be positive");
      sum += D[j];
    }
    if (!numeric_profile<T>::equal(sum, T(1)))
      throw std::invalid_argument("BlockModel: the Tr(D) = 1 constraint is violated");
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        if (U(i, j) < T(0))
          throw std::invalid_argument("BlockModel: U entries must be nonnegative");
        if (i == j && !relaxed && !(U(i, j) > T(0)))
          throw std::invalid_argument("BlockModel: U[" + std::to_string(j + 1) + "][" +
                                      std::to_string(j + 1) +
                                      "] must be positive (set relaxed to allow 0)");
      }
  }

  bool has_zero_diagonal() const {
    for (int j = 0; j < r; ++j)
      if (U(j, j) == T(0)) return true;
    return false;
  }

  SquareMat<T> B() const {
    SquareMat<T> b(r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) b(i, j) = D[i] * U(i, j);
    return b;
  }

  // Interval sizes n_k = floor(sum_{i<=k} d_i n) - floor(sum_{i<k} d_i n),
  // kept exactly as the floor formula prescribes.
  std::vector<int> interval_sizes(int n) const {
    if (n < r) throw std::invalid_argument("interval_sizes: need n >= r");
    std::vector<int> sizes(r);
    T partial(0);
    long long prev = 0;
    for (int k = 0; k < r; ++k) {
      partial += D[k];
      long long cur = floor_index(partial * T(n));
      sizes[k] = static_cast<int>(cur - prev);
      if (sizes[k] == 0)
        throw std::invalid_argument("interval_sizes: block " + std::to_string(k + 1) +
                                    " is empty at n = " + std::to_string(n));
      prev = cur;
    }
    return sizes;
  }

  // Block color of each index of [n], 0-based.
  std::vector<int> color_of(int n) const {
    auto sizes = interval_sizes(n);
    std::vector<int> col(n);
    int pos = 0;
    for (int k = 0; k < r; ++k)
      for (int t = 0; t < sizes[k]; ++t) col[pos++] = k;
    return col;
  }

  // The n x n variance matrix with entries u_{i,j}/n repeated over blocks.
  SquareMat<T> blockify(int n) const {
    auto col = color_of(n);
    SquareMat<T> v(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v(i, j) = U(col[i], col[j]) / T(n);
    return v;
  }

 private:
  static long long floor_index(const T& x);
};

template <>
inline long long BlockModel<Rational>::floor_index(const Rational& x) {
  return rational_floor(x);
}

template <>
inline long long BlockModel<double>::floor_index(const double& x) {
  return static_cast<long long>(std::floor(x + 1e-9));
}

}  // namespace matfree

#endif  // MATFREE_BLOCK_MODEL_HPP
