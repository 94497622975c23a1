#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "matfree/convolve.hpp"
#include "matfree/series.hpp"

using namespace matfree;
using Q = Rational;

namespace {

KSeries<Q> random_kseries(std::mt19937& rng, int order) {
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> den(1, 3);
  KSeries<Q> k(order);
  for (int j = 1; j <= order; ++j) k.coeff(j) = Q(num(rng), den(rng));
  return k;
}

}  // namespace

TEST_CASE("tail arithmetic inverts exactly") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> num(-3, 3);
  for (int rep = 0; rep < 10; ++rep) {
    Tail<Q> t(8);
    t[0] = Q(1 + (rep % 3));
    for (int j = 1; j <= 8; ++j) t[j] = Q(num(rng), 2);
    Tail<Q> p = t.mul(t.inv());
    CHECK(p[0] == Q(1));
    for (int j = 1; j <= 8; ++j) CHECK(p[j] == Q(0));
  }
  Tail<Q> zero(3);
  CHECK_THROWS_AS(zero.inv(), std::invalid_argument);
}

TEST_CASE("moments_to_k on the reference laws") {
  // point mass at zero
  MomentSeries<Q> dirac = MomentSeries<Q>::dirac0(6);
  KSeries<Q> kd = moments_to_k(dirac);
  for (int j = 1; j <= kd.order(); ++j) CHECK(kd.coeff(j) == Q(0));

  // semicircle of variance 1: moments 1,0,1,0,2,0,5
  MomentSeries<Q> semi(std::vector<Q>{1, 0, 1, 0, 2, 0, 5});
  KSeries<Q> ks = moments_to_k(semi);
  CHECK(ks.coeff(1) == Q(1));
  CHECK(ks.coeff(2) == Q(0));
  CHECK(ks.coeff(3) == Q(1));
  CHECK(ks.coeff(4) == Q(0));
  CHECK(ks.coeff(5) == Q(2));

  // symmetric Bernoulli with variance g: K = g/z, moments g^k at order 2k
  Q g(4);
  MomentSeries<Q> mb = k_to_moments(bernoulli_kseries(g, 8), 8);
  CHECK(mb[2] == Q(4));
  CHECK(mb[4] == Q(16));
  CHECK(mb[6] == Q(64));
  CHECK(mb[8] == Q(256));
  CHECK(mb[3] == Q(0));

  // nonzero mean is not representable
  MomentSeries<Q> shifted(std::vector<Q>{1, 1, 2});
  CHECK_THROWS_AS(moments_to_k(shifted), std::invalid_argument);
}

TEST_CASE("moments -> K -> moments is the identity through the truncation") {
  std::mt19937 rng(7);
  for (int rep = 0; rep < 12; ++rep) {
    KSeries<Q> k = random_kseries(rng, 9);
    MomentSeries<Q> m = k_to_moments(k, 10);
    KSeries<Q> back = moments_to_k(m);
    REQUIRE(back.order() == 9);
    CHECK(series_equal(back, k));
    MomentSeries<Q> m2 = k_to_moments(back, 10);
    CHECK(series_equal(m2, m));
  }
}

TEST_CASE("semicircle K-series reproduces Catalan moments") {
  KSeries<Q> k = semicircle_kseries(Q(1), 8);
  MomentSeries<Q> m = k_to_moments(k, 8);
  CHECK(m[0] == Q(1));
  CHECK(m[2] == Q(1));
  CHECK(m[4] == Q(2));
  CHECK(m[6] == Q(5));
  CHECK(m[8] == Q(14));
  for (int odd : {1, 3, 5, 7}) CHECK(m[odd] == Q(0));
}

TEST_CASE("continued fraction series for one block is the semicircle") {
  SquareMat<Q> b(1);
  b(0, 0) = 1;
  KSeries<Q> k = cf_to_kseries(b, 0, 0, 8);
  CHECK(series_equal(k, semicircle_kseries(Q(1), 8)));
}

TEST_CASE("continued fraction leading terms and degenerate columns") {
  SquareMat<Q> b(2);
  b(0, 0) = 0;
  b(0, 1) = 3;
  b(1, 0) = 0;
  b(1, 1) = 2;
  // column 1 of B vanishes, so the tail below the first index is empty and
  // K_{1,j} = b_{1,j}/z exactly
  auto fam = cf_family_kseries(b, 8);
  CHECK(fam[0][1].coeff(1) == Q(3));
  for (int j = 2; j <= 8; ++j) CHECK(fam[0][1].coeff(j) == Q(0));
  for (int j = 1; j <= 8; ++j) CHECK(fam[0][0].coeff(j) == Q(0));

  // any B: c_1 = b_{i,j}, c_2 = 0
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> num(0, 3);
  SquareMat<Q> c(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c(i, j) = Q(num(rng), 2);
  auto fc = cf_family_kseries(c, 6);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(fc[i][j].coeff(1) == c(i, j));
      CHECK(fc[i][j].coeff(2) == Q(0));
    }
}

TEST_CASE("continued fraction coefficients are depth-stable") {
  std::mt19937 rng(13);
  std::uniform_int_distribution<int> num(0, 4);
  SquareMat<Q> b(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) b(i, j) = Q(num(rng) + 1, 2);
  auto lo = cf_family_kseries(b, 8);
  auto hi = cf_family_kseries(b, 12);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int l = 1; l <= 8; ++l) CHECK(lo[i][j].coeff(l) == hi[i][j].coeff(l));
}

TEST_CASE("cf_evaluate base cases and semicircle limit") {
  SquareMat<double> b1(1);
  b1(0, 0) = 1.0;

  // depth 0 is b/z exactly
  std::complex<double> z(0.7, 1.3);
  auto k0 = cf_evaluate(CfSpec{b1, 0, 0, 0}, z);
  CHECK(std::abs(k0 - 1.0 / z) < 1e-15);

  // zero entry stays zero at every depth
  SquareMat<double> b2(2);
  b2(0, 0) = 1.0;
  b2(1, 1) = 1.0;
  auto fam = cf_eval_family(b2, 25, z);
  CHECK(std::abs(fam[0][1]) == 0.0);
  CHECK(std::abs(fam[1][0]) == 0.0);

  // deep fraction converges to the closed-form semicircle K at z = 2i
  std::complex<double> z2(0.0, 2.0);
  auto k = cf_evaluate(CfSpec{b1, 200, 0, 0}, z2);
  std::complex<double> expected = (z2 - std::sqrt(z2 * z2 - 4.0)) / 2.0;
  CHECK(std::abs(k - expected) < 1e-12);
}

TEST_CASE("density grid recovers the reference values") {
  // Poisson kernel of the point mass: K = 0
  KSeries<double> kd(4);
  auto poisson = density_grid(kd, {1.0}, 0.1);
  double expect = (1.0 / 3.14159265358979323846) * 0.1 / (1.0 + 0.01);
  CHECK(std::abs(poisson[0].second - expect) < 1e-12);

  // semicircle density at 0 is 1/pi; negligible outside [-2.5, 2.5]
  SquareMat<double> b1(1);
  b1(0, 0) = 1.0;
  auto vals = density_grid(CfSpec{b1, 20000, 0, 0}, {0.0, 2.6, -3.0}, 1e-3);
  CHECK(std::abs(vals[0].second - 1.0 / 3.14159265358979323846) < 1e-2);
  CHECK(vals[1].second < 1e-2);
  CHECK(vals[2].second < 1e-2);

  // Richardson cancellation sharpens the same value
  auto rich = density_grid_richardson(
      [&](std::complex<double> z) { return 1.0 / (z - cf_evaluate(CfSpec{b1, 20000, 0, 0}, z)); },
      {0.0}, 1e-3);
  CHECK(std::abs(rich[0].second - 1.0 / 3.14159265358979323846) < 5e-3);

  CHECK_THROWS_AS(density_grid(kd, {0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("semicircle K solves its own fixed-point equation") {
  // K = a / (z - K) coefficient-wise: K * (z - K) = a up to truncation
  const int M = 10;
  Q a(5, 3);
  KSeries<Q> k = semicircle_kseries(a, M);
  Tail<Q> res = matfree::detail::resolvent_tail(k, M);  // 1/(z - K)
  for (int j = 1; j <= M; ++j) {
    Q expect = a * res[j];
    CHECK(k.coeff(j) == expect);
  }
}

TEST_CASE("named-law dispatch") {
  const int M = 6;
  NamedLaw dirac{NamedLaw::Kind::dirac0};
  NamedLaw bern{NamedLaw::Kind::bernoulli, 2.0};
  NamedLaw semi{NamedLaw::Kind::semicircle, 1.0};
  NamedLaw comp{NamedLaw::Kind::compressed_semicircle, 1.0, 4.0};
  CHECK(series_equal(as_kseries<Q>(dirac, M), dirac0_kseries<Q>(M)));
  CHECK(series_equal(as_kseries<Q>(bern, M), bernoulli_kseries(Q(2), M)));
  CHECK(series_equal(as_kseries<Q>(semi, M), semicircle_kseries(Q(1), M)));
  CHECK(series_equal(as_kseries<Q>(comp, M), compressed_semicircle_kseries(Q(1), Q(4), M)));
  NamedLaw bad{NamedLaw::Kind::compressed_semicircle, 0.0, 1.0};
  CHECK_THROWS_AS(as_kseries<Q>(bad, M), std::invalid_argument);
}

TEST_CASE("numeric continued fraction reports poles") {
  SquareMat<double> b(1);
  b(0, 0) = 1.0;
  CHECK_THROWS_AS(cf_evaluate(CfSpec{b, 3, 0, 0}, std::complex<double>(0.0, 0.0)),
                  std::domain_error);
}

TEST_CASE("make_grid spans the interval inclusively") {
  auto xs = make_grid(-1.0, 1.0, 4);
  REQUIRE(xs.size() == 5);
  CHECK(xs.front() == -1.0);
  CHECK(xs.back() == 1.0);
  CHECK_THROWS_AS(make_grid(1.0, -1.0, 4), std::invalid_argument);
}
