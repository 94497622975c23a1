#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "matfree/limit_law.hpp"

using namespace matfree;
using Q = Rational;

namespace {

BlockModel<Q> random_model(std::mt19937& rng, int r) {
  std::uniform_int_distribution<int> num(1, 4);
  std::uniform_int_distribution<int> den(1, 3);
  SquareMat<Q> u(r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) u(i, j) = Q(num(rng), den(rng));
  std::vector<Q> d(r);
  Q left(1);
  for (int j = 0; j + 1 < r; ++j) {
    d[j] = Q(1, r + 1);
    left -= d[j];
  }
  d[r - 1] = left;
  return BlockModel<Q>(std::move(u), std::move(d));
}

BlockModel<Q> model_from_b(const SquareMat<Q>& b, bool relaxed = false) {
  int r = b.dim();
  std::vector<Q> d(r, Q(1, r));
  SquareMat<Q> u(r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) u(i, j) = b(i, j) / d[i];
  return BlockModel<Q>(std::move(u), std::move(d), relaxed);
}

long long catalan(int n) {
  long long c = 1;
  for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

}  // namespace

TEST_CASE("model validation names the broken constraint") {
  SquareMat<Q> u(2);
  u(0, 0) = u(1, 1) = 1;
  CHECK_THROWS_WITH(BlockModel<Q>(u, {Q(1, 2), Q(1, 3)}),
                    Catch::Matchers::ContainsSubstring("Tr(D) = 1"));
  CHECK_THROWS_WITH(BlockModel<Q>(u, {Q(1, 2), Q(-1), Q(3, 2)}),
                    Catch::Matchers::ContainsSubstring("dimension"));
  SquareMat<Q> z(2);
  z(0, 1) = z(1, 0) = 1;
  CHECK_THROWS_WITH(BlockModel<Q>(z, {Q(1, 2), Q(1, 2)}),
                    Catch::Matchers::ContainsSubstring("relaxed"));
  CHECK_NOTHROW(BlockModel<Q>(z, {Q(1, 2), Q(1, 2)}, true));
}

TEST_CASE("blockify follows the floor formula") {
  SquareMat<Q> u1(1);
  u1(0, 0) = 1;
  BlockModel<Q> one(u1, {Q(1)});
  SquareMat<Q> v = one.blockify(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(v(i, j) == Q(1, 3));

  SquareMat<Q> u2(2);
  u2(0, 0) = u2(1, 1) = 1;
  BlockModel<Q> half(u2, {Q(1, 2), Q(1, 2)});
  CHECK(half.interval_sizes(4) == std::vector<int>{2, 2});

  BlockModel<Q> thirds(u2, {Q(1, 3), Q(2, 3)});
  CHECK(thirds.interval_sizes(5) == std::vector<int>{1, 4});

  BlockModel<Q> tiny(u2, {Q(1, 10), Q(9, 10)});
  CHECK_THROWS_AS(tiny.interval_sizes(5), std::invalid_argument);
  CHECK_THROWS_AS(half.interval_sizes(1), std::invalid_argument);
}

TEST_CASE("one-block limits are Catalan both ways") {
  SquareMat<Q> u(1);
  u(0, 0) = 1;
  BlockModel<Q> m(u, {Q(1)});
  MomentSeries<Q> tr = tracial_moments_combinatorial(m, 8);
  MomentSeries<Q> st = standard_moments_combinatorial(m, 8);
  for (int k = 0; k <= 4; ++k) {
    CHECK(tr[2 * k] == Q(catalan(k)));
    CHECK(st[2 * k] == Q(catalan(k)));
  }
  for (int odd : {1, 3, 5, 7}) {
    CHECK(tr[odd] == Q(0));
    CHECK(st[odd] == Q(0));
  }

  LimitFamily<Q> fam = limit_family(m, 8);
  CHECK(series_equal(fam.mu, tr));
  CHECK(series_equal(fam.mu0, st));
  CHECK(series_equal(fam.muj[0], semicircle_kseries(Q(1), 8)));
}

TEST_CASE("combinatorial limits equal the continued-fraction limits") {
  // the central-limit bridge: partition sums against the K-transform family
  std::mt19937 rng(67);
  for (int r : {2, 3})
    for (int rep = 0; rep < 3; ++rep) {
      BlockModel<Q> m = random_model(rng, r);
      const int M = 8;
      LimitFamily<Q> fam = limit_family(m, M);
      CHECK(series_equal(fam.mu, tracial_moments_combinatorial(m, M)));
      CHECK(series_equal(fam.mu0, standard_moments_combinatorial(m, M)));
    }
}

TEST_CASE("diagonal 2x2 model splits into semicircle and arcsine-type laws") {
  // b11 = b22 = 1, off-diagonal zero
  SquareMat<Q> b(2);
  b(0, 0) = b(1, 1) = 1;
  BlockModel<Q> m = model_from_b(b);
  const int M = 8;

  MomentSeries<Q> tr = tracial_moments_combinatorial(m, M);
  CHECK(series_equal(tr, k_to_moments(semicircle_kseries(Q(1), M), M)));

  MomentSeries<Q> st = standard_moments_combinatorial(m, M);
  KSeries<Q> arcsine = boolean_conv(semicircle_kseries(Q(1), M), semicircle_kseries(Q(1), M));
  CHECK(series_equal(st, k_to_moments(arcsine, M)));
  // binomial moments: G = 1/sqrt(z^2 - 4)
  CHECK(st[2] == Q(2));
  CHECK(st[4] == Q(6));
  CHECK(st[6] == Q(20));
}

TEST_CASE("degenerate two-block model with zero diagonal") {
  // b11 = b22 = 0, b12 = b21 = q: the standard law collapses to the point
  // mass while each tracial component is a semicircle of variance q
  Q q(3, 2);
  SquareMat<Q> b(2);
  b(0, 1) = b(1, 0) = q;
  BlockModel<Q> m = model_from_b(b, true);
  const int M = 8;
  LimitFamily<Q> fam = limit_family(m, M);
  for (int k = 1; k <= M; ++k) CHECK(fam.mu0[k] == Q(0));
  CHECK(series_equal(fam.muj[0], semicircle_kseries(q, M)));
  CHECK(series_equal(fam.muj[1], semicircle_kseries(q, M)));

  CHECK_THROWS_AS(tracial_moments_combinatorial(m, 4), std::invalid_argument);
  CHECK_THROWS_AS(standard_moments_combinatorial(m, 4), std::invalid_argument);
}

TEST_CASE("row-constant matrices give the free convolution of semicircles") {
  std::mt19937 rng(71);
  std::uniform_int_distribution<int> num(1, 3);
  for (int r : {2, 3}) {
    SquareMat<Q> b(r);
    std::vector<Q> rowval(r);
    for (int i = 0; i < r; ++i) {
      rowval[i] = Q(num(rng), 2);
      for (int j = 0; j < r; ++j) b(i, j) = rowval[i];
    }
    BlockModel<Q> m = model_from_b(b);
    const int M = 8;
    LimitFamily<Q> fam = limit_family(m, M);
    KSeries<Q> chain = semicircle_kseries(rowval[0], M);
    for (int i = 1; i < r; ++i) chain = free_conv(chain, semicircle_kseries(rowval[i], M));
    for (int j = 0; j < r; ++j) CHECK(series_equal(fam.muj[j], chain));
    MomentSeries<Q> cm = k_to_moments(chain, M);
    CHECK(series_equal(fam.mu, cm));
    CHECK(series_equal(fam.mu0, cm));
  }
}

TEST_CASE("triangular row-constant matrices give monotone chains") {
  std::mt19937 rng(73);
  std::uniform_int_distribution<int> num(1, 3);
  for (int r : {2, 3}) {
    SquareMat<Q> b(r);
    std::vector<Q> rowval(r);
    for (int i = 0; i < r; ++i) {
      rowval[i] = Q(num(rng), 2);
      for (int j = 0; j <= i; ++j) b(i, j) = rowval[i];
    }
    BlockModel<Q> m = model_from_b(b);
    const int M = 8;
    LimitFamily<Q> fam = limit_family(m, M);
    for (int j = 0; j < r; ++j) {
      KSeries<Q> chain = semicircle_kseries(rowval[r - 1], M);
      for (int i = r - 2; i >= j; --i)
        chain = monotone_conv(semicircle_kseries(rowval[i], M), chain);
      CHECK(series_equal(fam.muj[j], chain));
    }
    // the standard law coincides with the first tracial component
    CHECK(series_equal(fam.mu0, k_to_moments(fam.muj[0], M)));
  }
}

TEST_CASE("closed forms match the continued fractions for positive parameters") {
  std::mt19937 rng(79);
  std::uniform_int_distribution<int> num(1, 4);
  const int M = 8;
  for (int rep = 0; rep < 5; ++rep) {
    SquareMat<Q> b(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) b(i, j) = Q(num(rng), 2);
    KMatrix2<Q> closed = dim2_closed_forms(b(0, 0), b(0, 1), b(1, 0), b(1, 1), M);
    auto fam = cf_family_kseries(b, M);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(series_equal(closed[i][j], fam[i][j]));
  }
}

TEST_CASE("closed forms cover the degenerate rows, directly and by relabeling") {
  const int M = 8;
  Q a(2), bb(3, 2), g(1, 2), d(1);

  {
    // zero off-diagonals: two pure semicircles
    KMatrix2<Q> km = dim2_closed_forms(a, Q(0), Q(0), d, M);
    CHECK(series_equal(km[0][0], semicircle_kseries(a, M)));
    CHECK(series_equal(km[1][1], semicircle_kseries(d, M)));
    for (int j = 1; j <= M; ++j) {
      CHECK(km[0][1].coeff(j) == Q(0));
      CHECK(km[1][0].coeff(j) == Q(0));
    }
  }
  {
    // zero first column: the second diagonal law is semicircle composed with
    // a Bernoulli
    KMatrix2<Q> km = dim2_closed_forms(Q(0), bb, Q(0), d, M);
    CHECK(series_equal(km[0][1], bernoulli_kseries(bb, M)));
    CHECK(series_equal(km[1][1],
                       orthogonal_conv(semicircle_kseries(d, M), bernoulli_kseries(bb, M))));
    for (int j = 1; j <= M; ++j) {
      CHECK(km[0][0].coeff(j) == Q(0));
      CHECK(km[1][0].coeff(j) == Q(0));
    }
  }
  {
    // a pattern only reachable through the 1 <-> 2 relabeling
    SquareMat<Q> b(2);
    b(0, 0) = a;
    b(0, 1) = bb;
    b(1, 0) = Q(0);
    b(1, 1) = d;
    KMatrix2<Q> km = dim2_closed_forms(b(0, 0), b(0, 1), b(1, 0), b(1, 1), M);
    auto fam = cf_family_kseries(b, M);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(series_equal(km[i][j], fam[i][j]));
  }
  CHECK_THROWS_AS(dim2_closed_forms(Q(-1), Q(0), Q(0), Q(1), M), std::invalid_argument);
}

TEST_CASE("equal compressions collapse to the free convolution of semicircles") {
  // b12 = b11 and b21 = b22 mean t = s = 1
  Q a(2), d(3, 2);
  const int M = 8;
  KMatrix2<Q> km = dim2_closed_forms(a, a, d, d, M);
  KSeries<Q> target = free_conv(semicircle_kseries(a, M), semicircle_kseries(d, M));
  CHECK(series_equal(boolean_conv(km[0][0], km[1][0]), target));
  CHECK(series_equal(boolean_conv(km[0][1], km[1][1]), target));
  CHECK(series_equal(boolean_conv(km[0][0], km[1][1]), target));
}

TEST_CASE("limit moments are nonnegative and semicircle-bounded") {
  std::mt19937 rng(83);
  for (int rep = 0; rep < 4; ++rep) {
    BlockModel<Q> m = random_model(rng, 2);
    const int M = 8;
    SquareMat<Q> b = m.B();
    Q colsum_max(0), diag_sum(0);
    for (int j = 0; j < 2; ++j) {
      Q cs(0);
      for (int i = 0; i < 2; ++i) cs += b(i, j);
      if (cs > colsum_max) colsum_max = cs;
      diag_sum += b(j, j);
    }
    Q bound0 = colsum_max > diag_sum ? colsum_max : diag_sum;
    LimitFamily<Q> fam = limit_family(m, M);
    Q smu(1), smu0(1);
    long long cat[5] = {1, 1, 2, 5, 14};
    for (int k = 1; 2 * k <= M; ++k) {
      smu *= colsum_max;
      smu0 *= bound0;
      CHECK(fam.mu[2 * k] >= Q(0));
      CHECK(fam.mu0[2 * k] >= Q(0));
      CHECK(fam.mu[2 * k] <= Q(cat[k]) * smu);
      CHECK(fam.mu0[2 * k] <= Q(cat[k]) * smu0);
    }
  }
}

TEST_CASE("constant-diagonal models tie mu0 to mu through the resolvent identity") {
  // With uniform D the tracial limit moments are the normalized-trace values
  // of B and the standard ones the Tr-values, so for constant-diagonal B the
  // generating series satisfy G0 = 1/(z - a G) with a = r * b_{jj}.
  std::mt19937 rng(149);
  std::uniform_int_distribution<int> num(1, 3);
  for (int r : {2, 3}) {
    SquareMat<Q> u(r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) u(i, j) = Q(num(rng), 2);
    Q diag(num(rng), 1);
    for (int j = 0; j < r; ++j) u(j, j) = diag;
    BlockModel<Q> m(u, std::vector<Q>(r, Q(1, r)));
    Q a = Q(r) * (Q(1, r) * diag);  // r * b_jj

    const int M = 10;
    MomentSeries<Q> mu = tracial_moments_combinatorial(m, M);
    MomentSeries<Q> mu0 = standard_moments_combinatorial(m, M);
    Tail<Q> ghat(M), ghat0(M);
    for (int k = 0; k <= M; ++k) {
      ghat[k] = mu[k];
      ghat0[k] = mu0[k];
    }
    Tail<Q> lhs = ghat0 - ghat.mul(ghat0).shifted_down().shifted_down().scaled(a);
    CHECK(lhs[0] == Q(1));
    for (int j = 1; j <= M; ++j) CHECK(lhs[j] == Q(0));
  }
}

TEST_CASE("cross_check agrees on every route") {
  SquareMat<Q> u1(1);
  u1(0, 0) = 1;
  BlockModel<Q> one(u1, {Q(1)});
  auto rep1 = cross_check(one, 8);
  CHECK(rep1.all_equal);
  CHECK(rep1.routes.size() == 2);  // combinatorial + continued fraction

  std::mt19937 rng(89);
  BlockModel<Q> m = random_model(rng, 2);
  auto rep2 = cross_check(m, 8);
  CHECK(rep2.all_equal);
  CHECK(rep2.routes.size() == 4);
  CHECK_THROWS_AS(cross_check(m, 1), std::invalid_argument);
}
