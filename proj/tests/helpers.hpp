#pragma once

#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

#include "ade/series.hpp"

namespace testing_util {

template <class K>
using S = ade::Series<typename K::Scalar>;

struct T {
  long num;
  long den;
  std::vector<int> exps;
  T(long c, std::vector<int> e) : num(c), den(1), exps(std::move(e)) {}
  T(long a, long b, std::vector<int> e) : num(a), den(b), exps(std::move(e)) {}
};

template <class K>
S<K> poly(const K& field, int n, int N, std::initializer_list<T> terms) {
  std::vector<ade::Term<typename K::Scalar>> out;
  for (const auto& t : terms) {
    std::vector<int> e = t.exps;
    e.resize(n, 0);
    out.push_back({ade::Monomial::from_exponents(e), field.ratio(t.num, t.den)});
  }
  return S<K>::from_terms(field, n, N, std::move(out));
}

/// Random series with up to `terms` terms of degree in [lo, N].
template <class K>
S<K> random_series(std::mt19937_64& rng, const K& field, int n, int N, int lo, int terms) {
  std::vector<ade::Term<typename K::Scalar>> out;
  std::uniform_int_distribution<int> deg(lo, N);
  for (int k = 0; k < terms; ++k) {
    int d = deg(rng);
    std::vector<int> e(n, 0);
    std::uniform_int_distribution<int> var(0, n - 1);
    for (int j = 0; j < d; ++j) ++e[var(rng)];
    out.push_back({ade::Monomial::from_exponents(e), field.random(rng)});
  }
  return S<K>::from_terms(field, n, N, std::move(out));
}

}  // namespace testing_util
