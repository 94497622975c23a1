#ifndef MATFREE_LIMIT_LAW_HPP
#define MATFREE_LIMIT_LAW_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "matfree/block_model.hpp"
#include "matfree/convolve.hpp"
#include "matfree/ncpart.hpp"
#include "matfree/series.hpp"
#include "matfree/trace_fn.hpp"
#include "matfree/tree_walk.hpp"

namespace matfree {

namespace detail {

template <class T>
void require_strict_diagonal(const BlockModel<T>& model, const char* who) {
  if (model.has_zero_diagonal())
    throw std::invalid_argument(std::string(who) +
                                ": requires u[j][j] > 0 (relaxed models are not admitted)");
}

}  // namespace detail

// Tracial limit moments: the m-th moment is the sum of Tr(B(pi)D) over
// non-crossing pair partitions of [m], with B = DU. Odd orders vanish.
template <class T>
MomentSeries<T> tracial_moments_combinatorial(const BlockModel<T>& model, int M) {
  detail::require_strict_diagonal(model, "tracial_moments_combinatorial");
  SquareMat<T> b = model.B();
  std::vector<T> m(M + 1, T(0));
  m[0] = T(1);
  for (int order = 2; order <= M; order += 2) {
    T s(0);
    for (const auto& pi : enumerate_nc2(order / 2)) s += b_of(pi, b, model.D);
    m[order] = s;
  }
  return MomentSeries<T>(std::move(m));
}

// Standard (vacuum) limit moments: sum of b_0(pi) over the same partitions.
template <class T>
MomentSeries<T> standard_moments_combinatorial(const BlockModel<T>& model, int M) {
  detail::require_strict_diagonal(model, "standard_moments_combinatorial");
  SquareMat<T> b = model.B();
  std::vector<T> m(M + 1, T(0));
  m[0] = T(1);
  for (int order = 2; order <= M; order += 2) {
    T s(0);
    for (const auto& pi : enumerate_nc2(order / 2)) s += b0_of(pi, b);
    m[order] = s;
  }
  return MomentSeries<T>(std::move(m));
}

// The whole family of limit laws for a block model: the array of continued
// fraction K-transforms, the column sums mu_j, the trace mixture mu and the
// boolean product mu_0 of the diagonal laws.
template <class T>
struct LimitFamily {
  std::vector<std::vector<KSeries<T>>> kij;
  std::vector<KSeries<T>> muj;
  MomentSeries<T> mu;
  MomentSeries<T> mu0;
};

template <class T>
LimitFamily<T> limit_family(const BlockModel<T>& model, int M) {
  if (M < 1) throw std::invalid_argument("limit_family: need M >= 1");
  int r = model.r;
  SquareMat<T> b = model.B();
  LimitFamily<T> fam;
  fam.kij = cf_family_kseries(b, M);

  fam.muj.reserve(r);
  for (int j = 0; j < r; ++j) {
    KSeries<T> kj(M);
    for (int i = 0; i < r; ++i)
      for (int l = 1; l <= M; ++l) kj.coeff(l) += fam.kij[i][j].coeff(l);
    fam.muj.push_back(std::move(kj));
  }

  // mu = sum_j d_j mu_j as a moment mixture.
  std::vector<T> mm(M + 1, T(0));
  for (int j = 0; j < r; ++j) {
    MomentSeries<T> mj = k_to_moments(fam.muj[j], M);
    for (int k = 0; k <= M; ++k) mm[k] += model.D[j] * mj[k];
  }
  fam.mu = MomentSeries<T>(std::move(mm));

  KSeries<T> k0(M);
  for (int j = 0; j < r; ++j)
    for (int l = 1; l <= M; ++l) k0.coeff(l) += fam.kij[j][j].coeff(l);
  fam.mu0 = k_to_moments(k0, M);

  // Fixed-point identity of the diagonal K-transforms:
  // K_j = sum_i b_{i,j} / (z - K_i), coefficient-wise through M.
  for (int j = 0; j < r; ++j) {
    KSeries<T> rhs(M);
    for (int i = 0; i < r; ++i) {
      Tail<T> res = detail::resolvent_tail(fam.muj[i], M);
      for (int l = 1; l <= M; ++l) rhs.coeff(l) += b(i, j) * res[l];
    }
    if (!series_equal(rhs, fam.muj[j]))
      throw std::logic_error("limit_family: diagonal K fixed-point identity failed");
  }
  return fam;
}

// Closed forms for the 2 x 2 family, taking the entries of B (the squared
// entries of A, so alpha^2 = b11 etc.). The fully positive case follows the
// s-free decomposition with t = b12/b11 and s = b21/b22; zero patterns
// dispatch to the eight tabulated rows, with the remaining patterns reached
// through the 1 <-> 2 relabeling.
template <class T>
using KMatrix2 = std::array<std::array<KSeries<T>, 2>, 2>;

namespace detail {

template <class T>
KMatrix2<T> dim2_rows(const T& b11, const T& b12, const T& b21, const T& b22, int M,
                      bool allow_swap);

template <class T>
KMatrix2<T> dim2_swapped(const T& b11, const T& b12, const T& b21, const T& b22, int M) {
  KMatrix2<T> s = dim2_rows(b22, b21, b12, b11, M, false);
  KMatrix2<T> out{{{KSeries<T>(M), KSeries<T>(M)}, {KSeries<T>(M), KSeries<T>(M)}}};
  out[0][0] = s[1][1];
  out[0][1] = s[1][0];
  out[1][0] = s[0][1];
  out[1][1] = s[0][0];
  return out;
}

template <class T>
KMatrix2<T> dim2_rows(const T& b11, const T& b12, const T& b21, const T& b22, int M,
                      bool allow_swap) {
  auto zero = [&] { return dirac0_kseries<T>(M); };
  const bool a = b11 > T(0), bb = b12 > T(0), g = b21 > T(0), d = b22 > T(0);
  KMatrix2<T> out{{{zero(), zero()}, {zero(), zero()}}};

  if (a && bb && g && d) {
    T t = b12 / b11, s = b21 / b22;
    KSeries<T> sab = compressed_semicircle_kseries(b11, b12, M);
    KSeries<T> sdg = compressed_semicircle_kseries(b22, b21, M);
    out[0][0] = t_transform(sfree_conv(sab, sdg), T(1) / t);
    out[1][1] = t_transform(sfree_conv(sdg, sab), T(1) / s);
    out[0][1] = t_transform(out[0][0], t);
    out[1][0] = t_transform(out[1][1], s);
    return out;
  }
  if (!a && !bb && !g && !d) return out;

  if (a && bb && g && !d) {
    T t = b12 / b11;
    KSeries<T> sab = compressed_semicircle_kseries(b11, b12, M);
    KSeries<T> kg = bernoulli_kseries(b21, M);
    out[0][0] = t_transform(sfree_conv(sab, kg), T(1) / t);
    out[0][1] = sfree_conv(sab, kg);
    out[1][0] = sfree_conv(kg, sab);
    return out;
  }
  if (!a && bb && g && !d) {
    out[0][1] = sfree_conv(bernoulli_kseries(b12, M), bernoulli_kseries(b21, M));
    out[1][0] = sfree_conv(bernoulli_kseries(b21, M), bernoulli_kseries(b12, M));
    return out;
  }
  if (a && !bb && g && d) {
    out[1][1] = semicircle_kseries(b22, M);
    out[1][0] = compressed_semicircle_kseries(b22, b21, M);
    out[0][0] = orthogonal_conv(semicircle_kseries(b11, M), out[1][0]);
    return out;
  }
  if (!a && bb && !g && d) {
    out[0][1] = bernoulli_kseries(b12, M);
    out[1][1] = orthogonal_conv(semicircle_kseries(b22, M), out[0][1]);
    return out;
  }
  if (!a && !bb && g && d) {
    out[1][1] = semicircle_kseries(b22, M);
    out[1][0] = compressed_semicircle_kseries(b22, b21, M);
    return out;
  }
  if (a && !bb && !g && d) {
    out[0][0] = semicircle_kseries(b11, M);
    out[1][1] = semicircle_kseries(b22, M);
    return out;
  }
  if (a && !bb && !g && !d) {
    out[0][0] = semicircle_kseries(b11, M);
    return out;
  }
  if (!a && bb && !g && !d) {
    out[0][1] = bernoulli_kseries(b12, M);
    return out;
  }

  if (allow_swap) return dim2_swapped(b11, b12, b21, b22, M);
  throw std::invalid_argument("dim2_closed_forms: zero pattern not covered by the table rows");
}

}  // namespace detail

template <class T>
KMatrix2<T> dim2_closed_forms(const T& b11, const T& b12, const T& b21, const T& b22, int M) {
  if (b11 < T(0) || b12 < T(0) || b21 < T(0) || b22 < T(0))
    throw std::invalid_argument("dim2_closed_forms: parameters must be nonnegative");
  return detail::dim2_rows(b11, b12, b21, b22, M, true);
}

// Moments of one law computed along every available route. Routes that do
// not apply to a model (walks and closed forms need r = 2) are absent.
template <class T>
struct RouteMoments {
  std::string route;
  MomentSeries<T> mu;
  MomentSeries<T> mu0;
};

template <class T>
struct CrossCheckReport {
  std::vector<RouteMoments<T>> routes;
  // max_abs_diff[i][j] over mu and mu0 jointly for routes i, j
  std::vector<std::vector<T>> discrepancy;
  bool all_equal = true;

  void finalize(int M) {
    size_t n = routes.size();
    discrepancy.assign(n, std::vector<T>(n, T(0)));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        T d = max_abs_diff(routes[i].mu, routes[j].mu, M);
        T d0 = max_abs_diff(routes[i].mu0, routes[j].mu0, M);
        discrepancy[i][j] = d > d0 ? d : d0;
        if (!numeric_profile<T>::equal(discrepancy[i][j], T(0))) all_equal = false;
      }
  }
};

// Computes mu and mu0 by every route the model admits and reports the
// pairwise coefficient discrepancies. Disagreements are report content, not
// errors.
template <class T>
CrossCheckReport<T> cross_check(const BlockModel<T>& model, int M) {
  if (M < 2) throw std::invalid_argument("cross_check: need M >= 2");
  CrossCheckReport<T> rep;

  if (!model.has_zero_diagonal()) {
    RouteMoments<T> comb{"combinatorial", tracial_moments_combinatorial(model, M),
                         standard_moments_combinatorial(model, M)};
    rep.routes.push_back(std::move(comb));
  }

  LimitFamily<T> fam = limit_family(model, M);
  rep.routes.push_back(RouteMoments<T>{"continued_fraction", fam.mu, fam.mu0});

  if (model.r == 2) {
    SquareMat<T> b = model.B();
    {
      std::vector<T> mu0m(M + 1, T(0)), mum(M + 1, T(0));
      for (int k = 0; k <= M; ++k) mu0m[k] = walk_moment(weighting_mu0(b), k);
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k <= M; ++k) mum[k] += model.D[j] * walk_moment(weighting_muj(b, j), k);
      rep.routes.push_back(RouteMoments<T>{"walks", MomentSeries<T>(std::move(mum)),
                                           MomentSeries<T>(std::move(mu0m))});
    }
    {
      KMatrix2<T> km = dim2_closed_forms(b(0, 0), b(0, 1), b(1, 0), b(1, 1), M);
      std::vector<T> mum(M + 1, T(0));
      for (int j = 0; j < 2; ++j) {
        MomentSeries<T> mj = k_to_moments(boolean_conv(km[0][j], km[1][j]), M);
        for (int k = 0; k <= M; ++k) mum[k] += model.D[j] * mj[k];
      }
      MomentSeries<T> m0 = k_to_moments(boolean_conv(km[0][0], km[1][1]), M);
      rep.routes.push_back(
          RouteMoments<T>{"closed_form", MomentSeries<T>(std::move(mum)), std::move(m0)});
    }
  }

  rep.finalize(M);
  return rep;
}

}  // namespace matfree

#endif  // MATFREE_LIMIT_LAW_HPP
