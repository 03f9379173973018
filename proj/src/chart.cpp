#include "ade/chart.hpp"

#include <random>

namespace ade {

template <class F>
CoordinateChange<F>::CoordinateChange(std::vector<Series<F>> components) : c_(std::move(components)) {
  if (c_.empty()) throw Error(ErrorCode::MismatchedVars, "empty coordinate change");
  int n = num_vars();
  for (const auto& s : c_) {
    if (s.num_vars() != n) throw Error(ErrorCode::MismatchedVars, "coordinate change must have one component per variable");
    if (is_unit(s)) throw Error(ErrorCode::NotInMaximalIdeal, "component of a coordinate change has a constant term");
  }
  if (determinant(linear_part(), field()).is_zero())
    throw Error(ErrorCode::NotInvertible, "linear part of the coordinate change is singular");
}

template <class F>
CoordinateChange<F> CoordinateChange<F>::identity(const Field& field, int n, int N) {
  std::vector<Series<F>> c;
  for (int i = 0; i < n; ++i) c.push_back(Series<F>::variable(field, n, N, i));
  return CoordinateChange(std::move(c));
}

template <class F>
int CoordinateChange<F>::precision() const {
  int N = c_[0].precision();
  for (const auto& s : c_) N = std::min(N, s.precision());
  return N;
}

template <class F>
Matrix<F> CoordinateChange<F>::linear_part() const {
  int n = num_vars();
  Matrix<F> L(n, n, field()(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) L(i, j) = c_[i].coefficient(Monomial::variable(j));
  return L;
}

template <class F>
Series<F> apply(const CoordinateChange<F>& change, const Series<F>& f) {
  return substitute(f, change.components());
}

template <class F>
CoordinateChange<F> compose(const CoordinateChange<F>& outer, const CoordinateChange<F>& inner) {
  return CoordinateChange<F>(substitute_many(outer.components(), inner.components()));
}

// Solves L e + h(e) = y by the fixed point e = L^{-1}(y - h(e)); each pass
// fixes one more degree, so pass j only needs precision j + 2.
template <class F>
CoordinateChange<F> inverse(const CoordinateChange<F>& change) {
  const auto& K = change.field();
  int n = change.num_vars();
  int N = change.precision();
  Matrix<F> Linv = inverse(change.linear_part(), K);
  std::vector<Series<F>> h;
  for (const auto& s : change.components())
    h.push_back(filter_terms(with_precision(s, N), [](const Monomial& m) { return m.degree() >= 2; }));
  auto solve_linear = [&](const std::vector<Series<F>>& rhs) {
    std::vector<Series<F>> out;
    for (int i = 0; i < n; ++i) {
      Series<F> acc(K, n, rhs[0].precision());
      for (int j = 0; j < n; ++j)
        if (!Linv(i, j).is_zero()) acc = add(acc, scale(rhs[j], Linv(i, j)));
      out.push_back(acc);
    }
    return out;
  };
  std::vector<Series<F>> y;
  for (int i = 0; i < n; ++i) y.push_back(Series<F>::variable(K, n, N, i));
  std::vector<Series<F>> e = solve_linear(y);
  bool nonlinear = false;
  for (const auto& s : h) nonlinear = nonlinear || !s.is_zero();
  if (nonlinear) {
    for (int P = 2; P <= N; ++P) {
      std::vector<Series<F>> hp, ep, rhs;
      for (int i = 0; i < n; ++i) {
        hp.push_back(with_precision(h[i], P));
        ep.push_back(with_precision(e[i], P));
      }
      auto he = substitute_many(hp, ep);
      for (int i = 0; i < n; ++i) rhs.push_back(subtract(with_precision(y[i], P), he[i]));
      e = solve_linear(rhs);
    }
  }
  for (auto& s : e) s = with_precision(s, N);
  return CoordinateChange<F>(std::move(e));
}

template <class F>
CoordinateChange<F> random_change(std::uint64_t seed, const FieldOf<F>& field, int n, int N, int max_extra_degree) {
  std::mt19937_64 rng(seed);
  Matrix<F> L(n, n, field(0));
  do {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) L(i, j) = field.random(rng);
  } while (determinant(L, field).is_zero());
  std::vector<Series<F>> c;
  std::uniform_int_distribution<int> var(0, n - 1);
  for (int i = 0; i < n; ++i) {
    std::vector<Term<F>> terms;
    for (int j = 0; j < n; ++j) terms.push_back({Monomial::variable(j), L(i, j)});
    for (int d = 2; d <= std::min(max_extra_degree, N); ++d) {
      int count = static_cast<int>(rng() % 3);
      for (int k = 0; k < count; ++k) {
        std::vector<int> e(n, 0);
        for (int t = 0; t < d; ++t) ++e[var(rng)];
        terms.push_back({Monomial::from_exponents(e), field.random(rng)});
      }
    }
    c.push_back(Series<F>::from_terms(field, n, N, std::move(terms)));
  }
  return CoordinateChange<F>(std::move(c));
}

#define ADE_INSTANTIATE(F)                                                                              \
  template class CoordinateChange<F>;                                                                   \
  template Series<F> apply(const CoordinateChange<F>&, const Series<F>&);                               \
  template CoordinateChange<F> compose(const CoordinateChange<F>&, const CoordinateChange<F>&);         \
  template CoordinateChange<F> inverse(const CoordinateChange<F>&);                                     \
  template CoordinateChange<F> random_change<F>(std::uint64_t, const FieldOf<F>&, int, int, int);

ADE_INSTANTIATE(Fp)
ADE_INSTANTIATE(Rational)

}  // namespace ade
