#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "ade/error.hpp"
#include "ade/field.hpp"
#include "ade/monomial.hpp"

namespace ade {

template <class F>
struct Term {
  Monomial mono;
  F coef;
};

/// Multivariate power series over F known modulo m^{N+1}, where N is the
/// precision. Terms are kept sorted by Monomial order (degree first) with no
/// zero coefficients, so equality is plain comparison.
template <class F>
class Series {
 public:
  using Scalar = F;
  using Field = FieldOf<F>;

  Series(const Field& field, int num_vars, int precision) : field_(field), n_(num_vars), N_(precision) {
    if (num_vars < 1 || num_vars > Monomial::kMaxVars)
      throw Error(ErrorCode::InvalidArgument, "number of variables must be in 1..15");
    if (precision < 0 || precision > Monomial::kMaxDegree / 2)
      throw Error(ErrorCode::PrecisionOutOfRange, "precision must be in 0..63");
  }

  static Series constant(const Field& field, int n, int N, const F& c) {
    Series s(field, n, N);
    if (!c.is_zero()) s.terms_.push_back({Monomial(), c});
    return s;
  }
  static Series variable(const Field& field, int n, int N, int i) {
    if (i < 0 || i >= n) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
    Series s(field, n, N);
    if (N >= 1) s.terms_.push_back({Monomial::variable(i), field(1)});
    return s;
  }
  static Series monomial(const Field& field, int n, int N, const Monomial& m, const F& c) {
    Series s(field, n, N);
    if (!c.is_zero() && m.degree() <= N) s.terms_.push_back({m, c});
    return s;
  }
  /// Builds a canonical series from arbitrary terms: sorts, merges equal
  /// monomials, drops zeros and terms above the precision.
  static Series from_terms(const Field& field, int n, int N, std::vector<Term<F>> terms);
  /// Adopts terms already sorted, merged, nonzero and within precision.
  static Series adopt(const Field& field, int n, int N, std::vector<Term<F>> terms) {
    Series s(field, n, N);
    s.terms_ = std::move(terms);
    return s;
  }

  const Field& field() const { return field_; }
  int num_vars() const { return n_; }
  int precision() const { return N_; }
  const std::vector<Term<F>>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  F coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term<F>& t, const Monomial& key) { return t.mono < key; });
    if (it != terms_.end() && it->mono == m) return it->coef;
    return field_(0);
  }
  F constant_term() const { return coefficient(Monomial()); }

  friend bool operator==(const Series& a, const Series& b) {
    if (a.n_ != b.n_ || a.N_ != b.N_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].mono == b.terms_[i].mono) || !(a.terms_[i].coef == b.terms_[i].coef)) return false;
    return true;
  }

 private:
  Field field_;
  int n_;
  int N_;
  std::vector<Term<F>> terms_;
};

// ------------------------------------------------------------------ kernel

template <class F>
Series<F> add(const Series<F>& f, const Series<F>& g);
template <class F>
Series<F> subtract(const Series<F>& f, const Series<F>& g);
template <class F>
Series<F> negate(const Series<F>& f);
template <class F>
Series<F> scale(const Series<F>& f, const F& c);
/// Product; uses the OpenMP kernel for large operands when threads exist.
template <class F>
Series<F> mul(const Series<F>& f, const Series<F>& g);
/// Single-threaded dense/sparse product.
template <class F>
Series<F> mul_serial(const Series<F>& f, const Series<F>& g);
/// OpenMP product regardless of size.
template <class F>
Series<F> mul_parallel(const Series<F>& f, const Series<F>& g);
/// Schoolbook product through an ordered map; kept as the test reference.
template <class F>
Series<F> mul_reference(const Series<F>& f, const Series<F>& g);

/// Lowest total degree of a term, or nullopt when f is zero modulo
/// m^{N+1} (the order is then only known to exceed N).
template <class F>
std::optional<int> order(const Series<F>& f) {
  if (f.is_zero()) return std::nullopt;
  return f.terms().front().mono.degree();
}

template <class F>
Series<F> jet(const Series<F>& f, int k);

template <class F>
bool is_unit(const Series<F>& f) {
  return !f.is_zero() && f.terms().front().mono.degree() == 0;
}

template <class F>
Series<F> invert_unit(const Series<F>& f);
template <class F>
Series<F> sqrt_unit(const Series<F>& f);

/// f with x_i replaced by args[i]; every argument must lie in m.
template <class F>
Series<F> substitute(const Series<F>& f, const std::vector<Series<F>>& args);
/// Several substitutions into the same arguments, sharing the work.
template <class F>
std::vector<Series<F>> substitute_many(const std::vector<Series<F>>& fs, const std::vector<Series<F>>& args);

template <class F>
bool restrict_support(const Series<F>& f, const std::vector<int>& vars) {
  std::vector<bool> allowed(f.num_vars(), false);
  for (int v : vars)
    if (v >= 0 && v < f.num_vars()) allowed[v] = true;
  for (const auto& t : f.terms())
    for (int i = 0; i < f.num_vars(); ++i)
      if (t.mono[i] > 0 && !allowed[i]) return false;
  return true;
}

/// The same terms with a different precision claim. Lowering truncates;
/// raising is only sound when the caller knows the missing terms are zero.
template <class F>
Series<F> with_precision(const Series<F>& f, int N) {
  std::vector<Term<F>> t;
  for (const auto& term : f.terms())
    if (term.mono.degree() <= N) t.push_back(term);
  return Series<F>::adopt(f.field(), f.num_vars(), N, std::move(t));
}

/// Terms of f whose monomial satisfies pred.
template <class F, class Pred>
Series<F> filter_terms(const Series<F>& f, Pred pred) {
  std::vector<Term<F>> t;
  for (const auto& term : f.terms())
    if (pred(term.mono)) t.push_back(term);
  return Series<F>::adopt(f.field(), f.num_vars(), f.precision(), std::move(t));
}

/// Same terms read in a different number of variables, variable i of f
/// becoming variable map[i].
template <class F>
Series<F> rename_vars(const Series<F>& f, int num_vars, const std::vector<int>& map);

template <class F>
Series<F> operator+(const Series<F>& f, const Series<F>& g) { return add(f, g); }
template <class F>
Series<F> operator-(const Series<F>& f, const Series<F>& g) { return subtract(f, g); }
template <class F>
Series<F> operator-(const Series<F>& f) { return negate(f); }
template <class F>
Series<F> operator*(const Series<F>& f, const Series<F>& g) { return mul(f, g); }
template <class F>
Series<F> operator*(const F& c, const Series<F>& f) { return scale(f, c); }

extern template class Series<Fp>;
extern template class Series<Rational>;

}  // namespace ade
