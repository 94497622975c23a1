#ifndef MATFREE_CONVOLVE_HPP
#define MATFREE_CONVOLVE_HPP

#include <stdexcept>

#include "matfree/series.hpp"

namespace matfree {

// Named laws, parameterized by squared analytic parameters so that the exact
// profile stays rational: semicircle_var(a) is the semicircle law of
// variance a (analytic parameter alpha = sqrt(a)), bernoulli_var(g) the
// symmetric two-point law of variance g, compressed_semicircle_var(a, b) the
// boolean compression T_{b/a} of semicircle_var(a).
struct NamedLaw {
  enum class Kind { dirac0, bernoulli, semicircle, compressed_semicircle } kind;
  // Squared parameters (variances); p2 only used by compressed_semicircle.
  double p1 = 0.0, p2 = 0.0;
};

namespace detail {

inline long long catalan_number(int n) {
  long long c = 1;
  for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

}  // namespace detail

template <class T>
KSeries<T> dirac0_kseries(int order) {
  return KSeries<T>(order);
}

template <class T>
KSeries<T> bernoulli_kseries(const T& variance, int order) {
  if (variance < T(0)) throw std::invalid_argument("bernoulli_kseries: negative variance");
  KSeries<T> k(order);
  k.coeff(1) = variance;
  return k;
}

// K solves K = a / (z - K); the closed form has Catalan coefficients on the
// odd powers.
template <class T>
KSeries<T> semicircle_kseries(const T& variance, int order) {
  if (variance < T(0)) throw std::invalid_argument("semicircle_kseries: negative variance");
  KSeries<T> k(order);
  T pw = variance;
  for (int j = 0; 2 * j + 1 <= order; ++j) {
    k.coeff(2 * j + 1) = T(detail::catalan_number(j)) * pw;
    pw *= variance;
  }
  return k;
}

template <class T>
KSeries<T> compressed_semicircle_kseries(const T& var_a, const T& var_b, int order) {
  if (var_a == T(0))
    throw std::invalid_argument("compressed_semicircle: zero base variance is not representable");
  if (var_a < T(0) || var_b < T(0))
    throw std::invalid_argument("compressed_semicircle: negative variance");
  KSeries<T> k = semicircle_kseries(var_a, order);
  T t = var_b / var_a;
  for (auto& c : k.c) c = c * t;
  return k;
}

template <class T>
KSeries<T> as_kseries(const NamedLaw& law, int order) {
  switch (law.kind) {
    case NamedLaw::Kind::dirac0:
      return dirac0_kseries<T>(order);
    case NamedLaw::Kind::bernoulli:
      return bernoulli_kseries(T(law.p1), order);
    case NamedLaw::Kind::semicircle:
      return semicircle_kseries(T(law.p1), order);
    case NamedLaw::Kind::compressed_semicircle:
      return compressed_semicircle_kseries(T(law.p1), T(law.p2), order);
  }
  throw std::logic_error("as_kseries: unknown law");
}

// Boolean additive convolution: K-transforms add.
template <class T>
KSeries<T> boolean_conv(const KSeries<T>& a, const KSeries<T>& b) {
  if (a.order() != b.order()) throw std::invalid_argument("boolean_conv: order mismatch");
  KSeries<T> out(a.order());
  for (int j = 1; j <= out.order(); ++j) out.coeff(j) = a.coeff(j) + b.coeff(j);
  return out;
}

// Orthogonal additive convolution: K_a composed with F_b = z - K_b.
// (F_b)^{-j} = z^{-j} R^j with R = (1 - z^{-1} K_b)^{-1}.
template <class T>
KSeries<T> orthogonal_conv(const KSeries<T>& a, const KSeries<T>& b) {
  if (a.order() != b.order()) throw std::invalid_argument("orthogonal_conv: order mismatch");
  int M = a.order();
  Tail<T> s(M);
  for (int j = 1; j < M; ++j) s[j + 1] = b.coeff(j);
  Tail<T> step = Tail<T>::one(M) - s;  // z^{-1} F_b
  Tail<T> p = step.inv().shifted_down();
  Tail<T> cur = p;
  Tail<T> acc(M);
  for (int j = 1; j <= M; ++j) {
    if (!(a.coeff(j) == T(0))) acc += cur.scaled(a.coeff(j));
    if (j < M) cur = cur.mul(p);
  }
  KSeries<T> out(M);
  for (int j = 1; j <= M; ++j) out.coeff(j) = acc[j];
  return out;
}

// Monotone additive convolution via K_{a |> b} = K_{a |- b} + K_b.
template <class T>
KSeries<T> monotone_conv(const KSeries<T>& a, const KSeries<T>& b) {
  return boolean_conv(orthogonal_conv(a, b), b);
}

// Independent route to the same law: G_{a |> b} = G_a(F_b), computed by
// resolvent composition and converted back through the moment series.
template <class T>
KSeries<T> monotone_conv_resolvent(const KSeries<T>& a, const KSeries<T>& b) {
  if (a.order() != b.order()) throw std::invalid_argument("monotone_conv: order mismatch");
  int M = a.order();
  int N = M + 2;  // carry G through z^{-N} so the result keeps order M
  MomentSeries<T> ma = k_to_moments(a, M + 1);
  Tail<T> s(N);
  for (int j = 1; j <= M; ++j) s[j + 1] = b.coeff(j);
  Tail<T> p = (Tail<T>::one(N) - s).inv().shifted_down();  // (F_b)^{-1}
  Tail<T> cur = p;                                         // (F_b)^{-(k+1)}
  Tail<T> g(N);
  for (int k = 0; k <= M + 1; ++k) {
    g += cur.scaled(ma[k]);
    if (k <= M) cur = cur.mul(p);
  }
  std::vector<T> m(M + 2);
  for (int k = 0; k <= M + 1; ++k) m[k] = g[k + 1];
  return moments_to_k(MomentSeries<T>(std::move(m)));
}

// Boolean compression T_t: scales the K-transform; t = 0 gives the point
// mass at zero.
template <class T>
KSeries<T> t_transform(const KSeries<T>& a, const T& t) {
  if (t < T(0)) throw std::invalid_argument("t_transform: negative t");
  KSeries<T> out(a.order());
  for (int j = 1; j <= out.order(); ++j) out.coeff(j) = a.coeff(j) * t;
  return out;
}

namespace detail {

template <class T>
KSeries<T> orthogonal_iterate(const KSeries<T>& a, const KSeries<T>& b, int depth) {
  if (depth == 1) return orthogonal_conv(a, b);
  return orthogonal_conv(a, orthogonal_iterate(b, a, depth - 1));
}

}  // namespace detail

// s-free additive convolution as the stabilized limit of the alternating
// orthogonal iteration. Each level pushes the dependence on the inner law
// two orders deeper, so depth M/2 + 2 pins every coefficient through M;
// stabilization is asserted by running one extra level.
template <class T>
KSeries<T> sfree_conv(const KSeries<T>& a, const KSeries<T>& b) {
  if (a.order() != b.order()) throw std::invalid_argument("sfree_conv: order mismatch");
  int depth = a.order() / 2 + 2;
  KSeries<T> got = detail::orthogonal_iterate(a, b, depth);
  KSeries<T> again = detail::orthogonal_iterate(a, b, depth + 1);
  if (!series_equal(got, again)) throw std::logic_error("sfree_conv: iteration failed to stabilize");
  return got;
}

// Free additive convolution through its two s-free halves.
template <class T>
KSeries<T> free_conv(const KSeries<T>& a, const KSeries<T>& b) {
  return boolean_conv(sfree_conv(a, b), sfree_conv(b, a));
}

// Subordination identity check: free(b, a) == b |> sfree(a, b).
template <class T>
bool subordination_check(const KSeries<T>& a, const KSeries<T>& b) {
  return series_equal(free_conv(b, a), monotone_conv(b, sfree_conv(a, b)));
}

}  // namespace matfree

#endif  // MATFREE_CONVOLVE_HPP
