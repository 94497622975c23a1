#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "matfree/limit_law.hpp"
#include "matfree/tree_walk.hpp"

using namespace matfree;
using Q = Rational;

namespace {

long long catalan(int n) {
  long long c = 1;
  for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

}  // namespace

TEST_CASE("walk sums count unweighted walks on the binary tree") {
  SquareMat<Q> ones(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) ones(i, j) = 1;
  auto w = weighting_mu0(ones);
  CHECK(walk_moment(w, 0) == Q(1));
  for (int n = 1; n <= 5; ++n) {
    long long expect = catalan(n) * (1LL << n);
    CHECK(walk_moment(w, 2 * n) == Q(expect));
  }
  for (int odd : {1, 3, 7}) CHECK(walk_moment(w, odd) == Q(0));

  // all-ones weights match the free convolution of two unit semicircles
  const int M = 10;
  KSeries<Q> s2 = free_conv(semicircle_kseries(Q(1), M), semicircle_kseries(Q(1), M));
  MomentSeries<Q> ms = k_to_moments(s2, M);
  for (int k = 0; k <= M; ++k) CHECK(walk_moment(w, k) == ms[k]);
}

TEST_CASE("order-two walk sums read off the initial weights") {
  SquareMat<Q> b(2);
  b(0, 0) = Q(2);
  b(0, 1) = Q(1, 2);
  b(1, 0) = Q(3);
  b(1, 1) = Q(1);
  CHECK(walk_moment(weighting_mu0(b), 2) == b(0, 0) + b(1, 1));
  CHECK(walk_moment(weighting_muj(b, 0), 2) == b(0, 0) + b(1, 0));
  CHECK(walk_moment(weighting_muj(b, 1), 2) == b(0, 1) + b(1, 1));
  CHECK_THROWS_AS(weighting_muj(b, 2), std::invalid_argument);
}

TEST_CASE("catalan paths biject onto walks") {
  std::mt19937 rng(131);
  std::uniform_int_distribution<int> num(0, 3);
  for (int rep = 0; rep < 4; ++rep) {
    SquareMat<Q> b(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) b(i, j) = Q(num(rng), 2);
    for (auto wgt : {weighting_mu0(b), weighting_muj(b, 0), weighting_muj(b, 1)})
      for (int n = 0; n <= 4; ++n) {
        auto [paths, total] = catalan_paths(wgt, n);
        CHECK(total == walk_moment(wgt, 2 * n));
        for (const auto& p : paths) {
          int depth = 0;
          for (int s : p.steps) {
            depth += s;
            REQUIRE(depth >= 0);
          }
          CHECK(depth == 0);
        }
      }
  }

  SquareMat<Q> ones(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) ones(i, j) = 1;
  for (int n = 0; n <= 4; ++n) {
    auto [paths, total] = catalan_paths(weighting_mu0(ones), n);
    CHECK(static_cast<long long>(paths.size()) == catalan(n) * (1LL << n));
    CHECK(total == Q(catalan(n) * (1LL << n)));
  }
}

TEST_CASE("walk sums equal the limit-law moments for two blocks") {
  std::mt19937 rng(137);
  std::uniform_int_distribution<int> num(1, 4);
  for (int rep = 0; rep < 4; ++rep) {
    SquareMat<Q> u(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) u(i, j) = Q(num(rng), 2);
    BlockModel<Q> model(u, {Q(1, 3), Q(2, 3)});
    SquareMat<Q> b = model.B();
    const int M = 8;
    LimitFamily<Q> fam = limit_family(model, M);
    MomentSeries<Q> m0 = fam.mu0;
    MomentSeries<Q> m1 = k_to_moments(fam.muj[0], M);
    MomentSeries<Q> m2 = k_to_moments(fam.muj[1], M);
    for (int k = 0; k <= M; ++k) {
      CHECK(walk_moment(weighting_mu0(b), k) == m0[k]);
      CHECK(walk_moment(weighting_muj(b, 0), k) == m1[k]);
      CHECK(walk_moment(weighting_muj(b, 1), k) == m2[k]);
    }
  }
}

TEST_CASE("the propagation rule generalizes to wider trees") {
  std::mt19937 rng(139);
  std::uniform_int_distribution<int> num(1, 3);
  SquareMat<Q> u(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) u(i, j) = Q(num(rng), 2);
  BlockModel<Q> model(u, {Q(1, 4), Q(1, 4), Q(1, 2)});
  SquareMat<Q> b = model.B();
  const int M = 6;
  LimitFamily<Q> fam = limit_family(model, M);
  for (int k = 0; k <= M; ++k) {
    CHECK(walk_moment(weighting_mu0(b), k) == fam.mu0[k]);
    for (int j = 0; j < 3; ++j)
      CHECK(walk_moment(weighting_muj(b, j), k) == k_to_moments(fam.muj[j], M)[k]);
  }
}
