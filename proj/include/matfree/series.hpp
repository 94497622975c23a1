#ifndef MATFREE_SERIES_HPP
#define MATFREE_SERIES_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "matfree/matrix.hpp"
#include "matfree/numeric.hpp"

namespace matfree {

// Truncated series in z^{-1}: a[0] + a[1] z^{-1} + ... + a[M] z^{-M}.
// Arithmetic is exact through the stored order; higher terms are dropped.
template <class T>
class Tail {
 public:
  explicit Tail(int order) : c_(order + 1, T(0)) {
    if (order < 0) throw std::invalid_argument("Tail: negative order");
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  T& operator[](int j) { return c_[j]; }
  const T& operator[](int j) const { return c_[j]; }

  Tail& operator+=(const Tail& o) {
    check(o);
    for (int j = 0; j <= order(); ++j) c_[j] += o.c_[j];
    return *this;
  }
  Tail& operator-=(const Tail& o) {
    check(o);
    for (int j = 0; j <= order(); ++j) c_[j] -= o.c_[j];
    return *this;
  }
  Tail operator+(const Tail& o) const {
    Tail t = *this;
    t += o;
    return t;
  }
  Tail operator-(const Tail& o) const {
    Tail t = *this;
    t -= o;
    return t;
  }

  Tail mul(const Tail& o) const {
    check(o);
    Tail out(order());
    for (int i = 0; i <= order(); ++i) {
      if (c_[i] == T(0)) continue;
      for (int j = 0; i + j <= order(); ++j) out.c_[i + j] += c_[i] * o.c_[j];
    }
    return out;
  }

  Tail scaled(const T& s) const {
    Tail out(order());
    for (int j = 0; j <= order(); ++j) out.c_[j] = c_[j] * s;
    return out;
  }

  // Multiplicative inverse; requires a nonzero constant term.
  Tail inv() const {
    if (c_[0] == T(0)) throw std::invalid_argument("Tail::inv: zero constant term");
    Tail out(order());
    out.c_[0] = T(1) / c_[0];
    for (int j = 1; j <= order(); ++j) {
      T s(0);
      for (int i = 1; i <= j; ++i) s += c_[i] * out.c_[j - i];
      out.c_[j] = -s / c_[0];
    }
    return out;
  }

  // Shift by one power of z^{-1}; the top coefficient falls off the end.
  Tail shifted_down() const {
    Tail out(order());
    for (int j = order(); j >= 1; --j) out.c_[j] = c_[j - 1];
    out.c_[0] = T(0);
    return out;
  }

  static Tail one(int order) {
    Tail t(order);
    t[0] = T(1);
    return t;
  }

 private:
  void check(const Tail& o) const {
    if (o.order() != order()) throw std::invalid_argument("Tail: order mismatch");
  }
  std::vector<T> c_;
};

// Moments m_0..m_M of a distribution, m_0 = 1. The Cauchy transform is
// G(z) = sum_k m_k z^{-k-1}.
template <class T>
struct MomentSeries {
  std::vector<T> m;

  MomentSeries() = default;
  explicit MomentSeries(std::vector<T> mm) : m(std::move(mm)) {
    if (m.empty() || m[0] != T(1)) throw std::invalid_argument("MomentSeries: m_0 must be 1");
  }
  static MomentSeries dirac0(int order) {
    std::vector<T> v(order + 1, T(0));
    v[0] = T(1);
    return MomentSeries(std::move(v));
  }
  int order() const { return static_cast<int>(m.size()) - 1; }
  const T& operator[](int k) const { return m[k]; }
};

// K-transform coefficients c_1..c_M of K(z) = c_1 z^{-1} + ... + c_M z^{-M}.
// No constant term: this represents centered, compactly supported laws.
template <class T>
struct KSeries {
  std::vector<T> c;  // c[j] is the z^{-(j+1)} coefficient

  KSeries() = default;
  explicit KSeries(int order) : c(order, T(0)) {
    if (order < 1) throw std::invalid_argument("KSeries: order must be >= 1");
  }
  explicit KSeries(std::vector<T> cc) : c(std::move(cc)) {}
  int order() const { return static_cast<int>(c.size()); }
  const T& coeff(int j) const { return c[j - 1]; }  // 1-based power
  T& coeff(int j) { return c[j - 1]; }
};

template <class T>
bool series_equal(const KSeries<T>& a, const KSeries<T>& b) {
  if (a.order() != b.order()) return false;
  for (int j = 1; j <= a.order(); ++j)
    if (!numeric_profile<T>::equal(a.coeff(j), b.coeff(j))) return false;
  return true;
}

template <class T>
bool series_equal(const MomentSeries<T>& a, const MomentSeries<T>& b) {
  if (a.order() != b.order()) return false;
  for (int k = 0; k <= a.order(); ++k)
    if (!numeric_profile<T>::equal(a[k], b[k])) return false;
  return true;
}

template <class T>
T max_abs_diff(const KSeries<T>& a, const KSeries<T>& b, int through_order) {
  T m(0);
  for (int j = 1; j <= through_order; ++j) {
    T d = abs_value(a.coeff(j) - b.coeff(j));
    if (d > m) m = d;
  }
  return m;
}

template <class T>
T max_abs_diff(const MomentSeries<T>& a, const MomentSeries<T>& b, int through_order) {
  T m(0);
  for (int k = 0; k <= through_order; ++k) {
    T d = abs_value(a[k] - b[k]);
    if (d > m) m = d;
  }
  return m;
}

// K = z - 1/G as a formal series. Exact through order M-1 given moments
// m_0..m_M; a nonzero mean has no KSeries representation and is rejected.
template <class T>
KSeries<T> moments_to_k(const MomentSeries<T>& ms) {
  int M = ms.order();
  if (M < 2) throw std::invalid_argument("moments_to_k: need order >= 2");
  Tail<T> ghat(M);  // G(z) = z^{-1} ghat(z)
  for (int k = 0; k <= M; ++k) ghat[k] = ms[k];
  Tail<T> n = Tail<T>::one(M) - ghat.inv();  // K(z) = z * n(z)
  if (!numeric_profile<T>::equal(n[1], T(0)))
    throw std::invalid_argument("moments_to_k: nonzero mean");
  KSeries<T> out(M - 1);
  for (int j = 1; j <= out.order(); ++j) out.coeff(j) = n[j + 1];
  return out;
}

// Moments of the law with the given K-transform: G = 1/(z - K). Exact for
// orders up to k.order() + 1.
template <class T>
MomentSeries<T> k_to_moments(const KSeries<T>& ks, int order) {
  if (order < 0 || order > ks.order() + 1)
    throw std::invalid_argument("k_to_moments: order exceeds exact range");
  Tail<T> s(order);  // z^{-1} K(z)
  for (int j = 1; j <= std::min(order - 1, ks.order()); ++j) s[j + 1] = ks.coeff(j);
  Tail<T> ghat = (Tail<T>::one(order) - s).inv();
  std::vector<T> m(order + 1);
  for (int k = 0; k <= order; ++k) m[k] = ghat[k];
  return MomentSeries<T>(std::move(m));
}

namespace detail {

// Tail of 1/(z - K) = z^{-1} R with R = (1 - z^{-1}K)^{-1}. Returned series
// carries the z^{-l} coefficients of the resolvent, l = 0..order.
template <class T>
Tail<T> resolvent_tail(const KSeries<T>& k, int order) {
  Tail<T> s(order);
  for (int j = 1; j <= std::min(order - 1, k.order()); ++j) s[j + 1] = k.coeff(j);
  return (Tail<T>::one(order) - s).inv().shifted_down();
}

}  // namespace detail

// Continued-fraction family for a nonnegative square matrix B: runs the
// recurrence K_{i,j} <- b_{i,j} / (z - sum_p K_{p,i}) in formal series
// arithmetic. Coefficients through order M are exact once the depth reaches
// ceil(M/2); one extra level is run and checked as a stabilization guard.
template <class T>
std::vector<std::vector<KSeries<T>>> cf_family_kseries(const SquareMat<T>& b, int M) {
  if (M < 1) throw std::invalid_argument("cf_family_kseries: need M >= 1");
  int r = b.dim();
  auto level = [&](const std::vector<std::vector<KSeries<T>>>& prev) {
    std::vector<std::vector<KSeries<T>>> next(r, std::vector<KSeries<T>>(r, KSeries<T>(M)));
    for (int i = 0; i < r; ++i) {
      KSeries<T> colsum(M);
      for (int p = 0; p < r; ++p)
        for (int j = 1; j <= M; ++j) colsum.coeff(j) += prev[p][i].coeff(j);
      Tail<T> w = detail::resolvent_tail(colsum, M);
      for (int j = 0; j < r; ++j)
        for (int l = 1; l <= M; ++l) next[i][j].coeff(l) = b(i, j) * w[l];
    }
    return next;
  };
  std::vector<std::vector<KSeries<T>>> cur(r, std::vector<KSeries<T>>(r, KSeries<T>(M)));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) cur[i][j].coeff(1) = b(i, j);
  int depth = M / 2 + 1;
  for (int d = 0; d < depth; ++d) cur = level(cur);
  auto extra = level(cur);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (!series_equal(cur[i][j], extra[i][j]))
        throw std::logic_error("cf_family_kseries: coefficients failed to stabilize");
  return cur;
}

template <class T>
KSeries<T> cf_to_kseries(const SquareMat<T>& b, int i, int j, int M) {
  return cf_family_kseries(b, M)[i][j];
}

// Pointwise numeric evaluation of the truncated continued fraction at a
// complex point. B is nonnegative; depth is the truncation level.
struct CfSpec {
  SquareMat<double> b;
  int depth = 40;
  int i = 0;
  int j = 0;
};

inline std::vector<std::vector<std::complex<double>>> cf_eval_family(const SquareMat<double>& b,
                                                                     int depth,
                                                                     std::complex<double> z) {
  int r = b.dim();
  using C = std::complex<double>;
  std::vector<std::vector<C>> cur(r, std::vector<C>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (z == C(0.0, 0.0)) throw std::domain_error("cf_eval_family: pole at depth 0");
      cur[i][j] = b(i, j) / z;
    }
  for (int d = 0; d < depth; ++d) {
    std::vector<std::vector<C>> next(r, std::vector<C>(r));
    for (int i = 0; i < r; ++i) {
      C colsum(0.0, 0.0);
      for (int p = 0; p < r; ++p) colsum += cur[p][i];
      C den = z - colsum;
      for (int j = 0; j < r; ++j) {
        if (b(i, j) == 0.0) {
          next[i][j] = C(0.0, 0.0);
          continue;
        }
        if (std::abs(den) == 0.0) throw std::domain_error("cf_eval_family: pole at depth");
        next[i][j] = b(i, j) / den;
      }
    }
    cur = std::move(next);
  }
  return cur;
}

inline std::complex<double> cf_evaluate(const CfSpec& spec, std::complex<double> z) {
  return cf_eval_family(spec.b, spec.depth, z)[spec.i][spec.j];
}

// Stieltjes inversion on a grid: density(x) = -Im G(x + i eps) / pi, where
// the caller supplies G as a complex evaluator.
inline std::vector<std::pair<double, double>> density_grid(
    const std::function<std::complex<double>(std::complex<double>)>& cauchy,
    const std::vector<double>& xs, double eps) {
  if (eps <= 0) throw std::invalid_argument("density_grid: eps must be positive");
  constexpr double pi = 3.14159265358979323846;
  std::vector<std::pair<double, double>> out;
  out.reserve(xs.size());
  for (double x : xs) {
    std::complex<double> g = cauchy(std::complex<double>(x, eps));
    out.emplace_back(x, -g.imag() / pi);
  }
  return out;
}

// Overload for one continued-fraction component: the density of the law
// whose K-transform is the (i,j) fraction, via G = 1/(z - K_{i,j}(z)).
inline std::vector<std::pair<double, double>> density_grid(const CfSpec& spec,
                                                           const std::vector<double>& xs,
                                                           double eps) {
  return density_grid(
      [&spec](std::complex<double> z) { return 1.0 / (z - cf_evaluate(spec, z)); }, xs, eps);
}

// First-order Richardson extrapolation in the offset: the smoothed density
// has an O(eps) bias, so 2 d(eps) - d(2 eps) cancels the leading term.
inline std::vector<std::pair<double, double>> density_grid_richardson(
    const std::function<std::complex<double>(std::complex<double>)>& cauchy,
    const std::vector<double>& xs, double eps) {
  auto fine = density_grid(cauchy, xs, eps);
  auto coarse = density_grid(cauchy, xs, 2 * eps);
  for (size_t i = 0; i < fine.size(); ++i)
    fine[i].second = 2 * fine[i].second - coarse[i].second;
  return fine;
}

// Convenience overload for a single truncated K-series: G = 1/(z - K(z))
// with K evaluated as a Laurent polynomial.
template <class T>
std::vector<std::pair<double, double>> density_grid(const KSeries<T>& k,
                                                    const std::vector<double>& xs, double eps) {
  std::vector<double> c(k.order());
  for (int j = 1; j <= k.order(); ++j) c[j - 1] = numeric_profile<T>::to_double(k.coeff(j));
  auto cauchy = [c](std::complex<double> z) {
    std::complex<double> kz(0.0, 0.0);
    std::complex<double> w = 1.0 / z;
    std::complex<double> p = w;
    for (double cj : c) {
      kz += cj * p;
      p *= w;
    }
    return 1.0 / (z - kz);
  };
  return density_grid(cauchy, xs, eps);
}

inline std::vector<double> make_grid(double lo, double hi, int steps) {
  if (steps < 1 || hi <= lo) throw std::invalid_argument("make_grid: bad range");
  std::vector<double> xs(steps + 1);
  for (int i = 0; i <= steps; ++i) xs[i] = lo + (hi - lo) * i / steps;
  return xs;
}

}  // namespace matfree

#endif  // MATFREE_SERIES_HPP
