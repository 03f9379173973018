#include "doctest.h"

#include "ade/chart.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace ade;
using testing_util::poly;
using testing_util::random_series;

namespace {
const RationalField Q;
const PrimeField F7(7);
}  // namespace

TEST_CASE("apply") {
  auto f = poly(Q, 2, 6, {{1, {3}}, {2, {1, 1}}});
  CHECK(apply(CoordinateChange<Rational>::identity(Q, 2, 6), f) == f);
  CoordinateChange<Rational> c({poly(Q, 2, 6, {{1, {1}}, {1, {0, 1}}}), poly(Q, 2, 6, {{1, {0, 1}}})});
  CHECK(apply(c, poly(Q, 2, 6, {{1, {2}}})) == poly(Q, 2, 6, {{1, {2}}, {2, {1, 1}}, {1, {0, 2}}}));
  CoordinateChange<Rational> d({poly(Q, 2, 4, {{1, {1}}}), poly(Q, 2, 4, {{1, {0, 1}}, {-1, {2}}})});
  CHECK(apply(d, poly(Q, 2, 4, {{1, {0, 2}}})) == poly(Q, 2, 4, {{1, {0, 2}}, {-2, {2, 1}}, {1, {4}}}));
}

TEST_CASE("construction checks") {
  CHECK_THROWS_AS(CoordinateChange<Rational>({poly(Q, 2, 4, {{1, {1}}}), poly(Q, 2, 4, {{2, {1}}})}), Error);
  CHECK_THROWS_AS(CoordinateChange<Rational>({poly(Q, 2, 4, {{1, {0}}, {1, {1}}}), poly(Q, 2, 4, {{1, {0, 1}}})}),
                  Error);
  CHECK_THROWS_AS(UnitWitness<Rational>(poly(Q, 1, 4, {{1, {1}}})), Error);
}

TEST_CASE("compose") {
  auto id = CoordinateChange<Rational>::identity(Q, 2, 6);
  CoordinateChange<Rational> a({poly(Q, 2, 6, {{1, {1}}, {1, {0, 1}}}), poly(Q, 2, 6, {{1, {0, 1}}})});
  CoordinateChange<Rational> b({poly(Q, 2, 6, {{1, {1}}}), poly(Q, 2, 6, {{1, {0, 1}}, {1, {1}}})});
  CHECK(compose(id, a) == a);
  auto ab = compose(a, b);
  CHECK(ab[0] == poly(Q, 2, 6, {{2, {1}}, {1, {0, 1}}}));
  auto f = poly(Q, 2, 6, {{1, {2, 1}}, {-3, {0, 4}}, {1, {1}}});
  CHECK(apply(ab, f) == apply(b, apply(a, f)));
}

TEST_CASE("inverse") {
  auto id = CoordinateChange<Rational>::identity(Q, 2, 6);
  CHECK(inverse(id) == id);
  CoordinateChange<Rational> s({poly(Q, 1, 5, {{2, {1}}})});
  CHECK(inverse(s)[0] == poly(Q, 1, 5, {{1, 2, {1}}}));
  CoordinateChange<Rational> c({poly(Q, 2, 6, {{1, {1}}, {1, {0, 2}}}), poly(Q, 2, 6, {{1, {0, 1}}})});
  auto ci = inverse(c);
  CHECK(ci[0] == poly(Q, 2, 6, {{1, {1}}, {-1, {0, 2}}}));
  CHECK(compose(c, ci) == CoordinateChange<Rational>::identity(Q, 2, 6));
  CHECK(compose(ci, c) == CoordinateChange<Rational>::identity(Q, 2, 6));
}

TEST_CASE("inverse round trip on random changes") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    int n = 1 + static_cast<int>(seed % 3);
    auto c = random_change<Fp>(seed, F7, n, 10, 4);
    auto ci = inverse(c);
    CHECK(compose(c, ci) == CoordinateChange<Fp>::identity(F7, n, 10));
    CHECK(compose(ci, c) == CoordinateChange<Fp>::identity(F7, n, 10));
  }
}

TEST_CASE("random_change") {
  auto c = random_change<Fp>(42, F7, 3, 8, 1);
  for (const auto& s : c.components())
    for (const auto& t : s.terms()) CHECK(t.mono.degree() == 1);
  CHECK_FALSE(determinant(c.linear_part(), F7).is_zero());
  CHECK(random_change<Fp>(42, F7, 3, 8, 5) == random_change<Fp>(42, F7, 3, 8, 5));
  auto x1 = Series<Fp>::variable(F7, 3, 8, 0);
  CHECK(order(apply(random_change<Fp>(9, F7, 3, 8, 5), x1)) == 1);
}

TEST_CASE("apply is a ring homomorphism and preserves order") {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto c = random_change<Fp>(seed, F7, 2, 9, 3);
    auto f = random_series(rng, F7, 2, 9, 1, 6);
    auto g = random_series(rng, F7, 2, 9, 0, 6);
    CHECK(apply(c, f * g) == apply(c, f) * apply(c, g));
    CHECK(apply(c, f + g) == apply(c, f) + apply(c, g));
    if (order(f)) CHECK(order(apply(c, f)) == order(f));
    std::vector<oracle::Poly> args;
    for (const auto& s : c.components()) args.push_back(oracle::from_series(s));
    CHECK(oracle::same(oracle::from_series(apply(c, f)), oracle::compose(oracle::from_series(f), args)));
  }
}
