#include "doctest.h"

#include "ade/field.hpp"

using namespace ade;

TEST_CASE("prime field arithmetic") {
  PrimeField K(7);
  CHECK(K(3) + K(5) == K(1));
  CHECK(K(3) * K(5) == K(1));
  CHECK(K(3).inverse() == K(5));
  CHECK(K(-1) == K(6));
  CHECK(K(-1).symmetric() == -1);
  CHECK(K.ratio(1, 2) == K(4));
  CHECK_THROWS_AS(K.ratio(1, 7), Error);
}

TEST_CASE("square roots mod p") {
  for (int p : {3, 5, 7, 11, 13, 17, 97, 65537, 1000003}) {
    PrimeField K(p);
    int squares = 0;
    for (std::int64_t a = 1; a < std::min(p, 400); ++a) {
      auto r = K.sqrt(K(a));
      bool brute = false;
      for (std::int64_t t = 1; t < p && !brute; ++t) brute = K(t) * K(t) == K(a);
      CHECK(r.has_value() == brute);
      if (r) {
        CHECK(*r * *r == K(a));
        ++squares;
      }
    }
    if (p < 400) CHECK(squares == (p - 1) / 2);
  }
  CHECK_FALSE(PrimeField(3).sqrt(PrimeField(3)(2)).has_value());
}

TEST_CASE("kth roots mod p agree with exhaustive search") {
  for (int p : {7, 11, 13, 31, 61}) {
    PrimeField K(p);
    for (unsigned k : {2u, 3u, 4u, 5u, 6u, 9u}) {
      for (std::int64_t a = 0; a < p; ++a) {
        std::vector<Fp> brute;
        for (std::int64_t t = 0; t < p; ++t)
          if (K(t).pow(k) == K(a)) brute.push_back(K(t));
        auto got = K.kth_roots(K(a), k);
        REQUIRE(got.size() == brute.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == brute[i]);
      }
    }
  }
}

TEST_CASE("rational roots") {
  RationalField Q;
  CHECK(Q.sqrt(Rational(9, 4)) == Rational(3, 2));
  CHECK_FALSE(Q.sqrt(Rational(2)).has_value());
  CHECK_FALSE(Q.sqrt(Rational(-1)).has_value());
  CHECK(Q.kth_roots(Rational(-8, 27), 3) == std::vector<Rational>{Rational(-2, 3)});
  // 2t^3 - 3t^2 - 3t + 2 = (t - 2)(t + 1)(2t - 1)
  auto roots = Q.poly_roots({Rational(2), Rational(-3), Rational(-3), Rational(2)});
  CHECK(roots == std::vector<Rational>{Rational(-1), Rational(1, 2), Rational(2)});
}

TEST_CASE("field spec parsing") {
  CHECK(FieldSpec::parse("q").characteristic == 0);
  CHECK(FieldSpec::parse("fp:7").characteristic == 7);
  CHECK_THROWS_AS(FieldSpec::parse("fp:2"), Error);
  CHECK_THROWS_AS(FieldSpec::parse("fp:9"), Error);
  CHECK_THROWS_AS(FieldSpec::parse("gf"), Error);
  try {
    FieldSpec::parse("fp:2");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("characteristic") != std::string::npos);
  }
}
