#pragma once

// Naive polynomial arithmetic used as an independent check on the library.
// Exponent vectors in an ordered map, rational coefficients, reduction mod p
// applied after every operation when p != 0.

#include <map>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "ade/series.hpp"

namespace oracle {

struct Poly {
  int n = 1;
  int N = 0;
  unsigned p = 0;
  std::map<std::vector<int>, mpq_class> c;

  void normalize() {
    for (auto it = c.begin(); it != c.end();) {
      int deg = 0;
      for (int e : it->first) deg += e;
      if (p) {
        mpz_class num = it->second.get_num(), den = it->second.get_den();
        mpz_class mp = p;
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mp.get_mpz_t());
        mpz_class r = num * inv;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), mp.get_mpz_t());
        it->second = mpq_class(r);
      }
      if (deg > N || it->second == 0)
        it = c.erase(it);
      else
        ++it;
    }
  }
};

inline Poly make(int n, int N, unsigned p) {
  Poly a;
  a.n = n;
  a.N = N;
  a.p = p;
  return a;
}

inline Poly add(const Poly& a, const Poly& b) {
  Poly r = make(a.n, std::min(a.N, b.N), a.p);
  r.c = a.c;
  for (auto& [e, v] : b.c) r.c[e] += v;
  r.normalize();
  return r;
}

inline Poly scale(const Poly& a, const mpq_class& s) {
  Poly r = a;
  for (auto& [e, v] : r.c) v *= s;
  r.normalize();
  return r;
}

inline Poly mul(const Poly& a, const Poly& b) {
  Poly r = make(a.n, std::min(a.N, b.N), a.p);
  for (auto& [e1, v1] : a.c)
    for (auto& [e2, v2] : b.c) {
      std::vector<int> e(a.n);
      int deg = 0;
      for (int i = 0; i < a.n; ++i) deg += (e[i] = e1[i] + e2[i]);
      if (deg <= r.N) r.c[e] += v1 * v2;
    }
  r.normalize();
  return r;
}

inline Poly constant(int n, int N, unsigned p, const mpq_class& v) {
  Poly r = make(n, N, p);
  r.c[std::vector<int>(n, 0)] = v;
  r.normalize();
  return r;
}

/// f(args) by expanding every monomial as a product of argument powers.
inline Poly compose(const Poly& f, const std::vector<Poly>& args) {
  int N = f.N;
  for (auto& a : args) N = std::min(N, a.N);
  int m = args[0].n;
  Poly r = make(m, N, f.p);
  for (auto& [e, v] : f.c) {
    Poly term = constant(m, N, f.p, v);
    for (int i = 0; i < f.n; ++i)
      for (int k = 0; k < e[i]; ++k) term = mul(term, args[i]);
    r = add(r, term);
  }
  return r;
}

template <class F>
mpq_class to_mpq(const F& a);
template <>
inline mpq_class to_mpq(const ade::Fp& a) { return mpq_class(static_cast<long>(a.residue())); }
template <>
inline mpq_class to_mpq(const ade::Rational& a) { return a.value(); }

template <class F>
Poly from_series(const ade::Series<F>& s) {
  Poly r = make(s.num_vars(), s.precision(), s.field().characteristic());
  for (const auto& t : s.terms()) r.c[t.mono.exponents(s.num_vars())] = to_mpq(t.coef);
  r.normalize();
  return r;
}

inline bool same(const Poly& a, const Poly& b) { return a.n == b.n && a.N == b.N && a.c == b.c; }

}  // namespace oracle
