#include "ade/series.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ade/detail/accumulator.hpp"
#include "ade/linalg.hpp"

namespace ade {

namespace detail {

const DenseLayout* dense_layout(int n, int N, std::size_t max_cells) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<DenseLayout>> cache;
  std::size_t cells = 1;
  for (int i = 0; i < n; ++i) {
    cells *= static_cast<std::size_t>(N + 1);
    if (cells > max_cells) return nullptr;
  }
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, N}];
  if (!slot) {
    auto layout = std::make_unique<DenseLayout>();
    layout->n = n;
    layout->N = N;
    layout->cells = cells;
    std::uint32_t p = 1;
    for (int i = 0; i < n; ++i) {
      layout->radix_pow.push_back(p);
      p *= static_cast<std::uint32_t>(N + 1);
    }
    std::vector<int> e(n, 0);
    auto rec = [&](auto&& self, int i, int budget) -> void {
      if (i == n) {
        layout->graded.push_back(Monomial::from_exponents(e));
        return;
      }
      for (int k = 0; k <= budget; ++k) {
        e[i] = k;
        self(self, i + 1, budget - k);
      }
      e[i] = 0;
    };
    rec(rec, 0, N);
    std::sort(layout->graded.begin(), layout->graded.end());
    for (const auto& m : layout->graded) layout->graded_index.push_back(layout->index(m));
    slot = std::move(layout);
  }
  return slot.get();
}

}  // namespace detail

using detail::Accumulator;

template <class F>
Series<F> Series<F>::from_terms(const Field& field, int n, int N, std::vector<Term<F>> terms) {
  for (const auto& t : terms)
    for (int i = n; i < Monomial::kMaxVars; ++i)
      if (t.mono[i] != 0) throw Error(ErrorCode::MismatchedVars, "term uses a variable beyond num_vars");
  std::sort(terms.begin(), terms.end(), [](const Term<F>& a, const Term<F>& b) { return a.mono < b.mono; });
  std::vector<Term<F>> out;
  for (auto& t : terms) {
    if (t.mono.degree() > N) continue;
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coef += t.coef;
      if (out.back().coef.is_zero()) out.pop_back();
    } else if (!t.coef.is_zero()) {
      out.push_back(std::move(t));
    }
  }
  return adopt(field, n, N, std::move(out));
}

namespace {

template <class F>
void check_same_vars(const Series<F>& f, const Series<F>& g) {
  if (f.num_vars() != g.num_vars())
    throw Error(ErrorCode::MismatchedVars, "series have different numbers of variables");
}

template <class F, class Op>
Series<F> merge(const Series<F>& f, const Series<F>& g, Op op) {
  check_same_vars(f, g);
  int N = std::min(f.precision(), g.precision());
  const auto& a = f.terms();
  const auto& b = g.terms();
  std::vector<Term<F>> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].mono < b[j].mono)) {
      if (a[i].mono.degree() <= N) out.push_back(a[i]);
      ++i;
    } else if (i == a.size() || b[j].mono < a[i].mono) {
      if (b[j].mono.degree() <= N) out.push_back({b[j].mono, op(f.field()(0), b[j].coef)});
      ++j;
    } else {
      F c = op(a[i].coef, b[j].coef);
      if (!c.is_zero() && a[i].mono.degree() <= N) out.push_back({a[i].mono, c});
      ++i;
      ++j;
    }
  }
  return Series<F>::adopt(f.field(), f.num_vars(), N, std::move(out));
}

}  // namespace

template <class F>
Series<F> add(const Series<F>& f, const Series<F>& g) {
  return merge(f, g, [](const F& x, const F& y) { return x + y; });
}

template <class F>
Series<F> subtract(const Series<F>& f, const Series<F>& g) {
  return merge(f, g, [](const F& x, const F& y) { return x - y; });
}

template <class F>
Series<F> negate(const Series<F>& f) {
  std::vector<Term<F>> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) out.push_back({t.mono, -t.coef});
  return Series<F>::adopt(f.field(), f.num_vars(), f.precision(), std::move(out));
}

template <class F>
Series<F> scale(const Series<F>& f, const F& c) {
  if (c.is_zero()) return Series<F>(f.field(), f.num_vars(), f.precision());
  std::vector<Term<F>> out;
  out.reserve(f.size());
  for (const auto& t : f.terms()) out.push_back({t.mono, t.coef * c});
  return Series<F>::adopt(f.field(), f.num_vars(), f.precision(), std::move(out));
}

template <class F>
Series<F> jet(const Series<F>& f, int k) {
  if (k < 0 || k > f.precision())
    throw Error(ErrorCode::PrecisionOutOfRange, "jet order outside 0..precision");
  return with_precision(f, k);
}

template <class F>
Series<F> mul_serial(const Series<F>& f, const Series<F>& g) {
  check_same_vars(f, g);
  int N = std::min(f.precision(), g.precision());
  Accumulator<F> acc(f.field(), f.num_vars(), N, f.size() * g.size());
  acc.add_product(f, g);
  return acc.finish();
}

template <class F>
Series<F> mul_parallel(const Series<F>& f, const Series<F>& g) {
  check_same_vars(f, g);
  int N = std::min(f.precision(), g.precision());
  std::vector<Series<F>> partials;
  const auto& a = f.terms();
  std::int64_t count = static_cast<std::int64_t>(a.size());
#pragma omp parallel
  {
    Accumulator<F> acc(f.field(), f.num_vars(), N, f.size() * g.size());
    auto rows = acc.prepare(g);
#pragma omp for schedule(dynamic, 8) nowait
    for (std::int64_t i = 0; i < count; ++i) acc.add_row(a[i], g, rows);
    Series<F> part = acc.finish();
#pragma omp critical
    partials.push_back(std::move(part));
  }
  Series<F> out(f.field(), f.num_vars(), N);
  for (auto& p : partials) out = add(out, p);
  return out;
}

template <class F>
Series<F> mul(const Series<F>& f, const Series<F>& g) {
#ifdef _OPENMP
  constexpr std::size_t kParallelPairs = std::size_t{1} << 17;
  if (f.size() * g.size() >= kParallelPairs && omp_get_max_threads() > 1 && !omp_in_parallel())
    return mul_parallel(f, g);
#endif
  return mul_serial(f, g);
}

template <class F>
Series<F> mul_reference(const Series<F>& f, const Series<F>& g) {
  check_same_vars(f, g);
  int N = std::min(f.precision(), g.precision());
  std::map<std::vector<int>, F> acc;
  int n = f.num_vars();
  for (const auto& s : f.terms())
    for (const auto& t : g.terms()) {
      std::vector<int> e(n);
      int deg = 0;
      for (int i = 0; i < n; ++i) {
        e[i] = s.mono[i] + t.mono[i];
        deg += e[i];
      }
      if (deg > N) continue;
      auto it = acc.find(e);
      if (it == acc.end())
        acc.emplace(e, s.coef * t.coef);
      else
        it->second += s.coef * t.coef;
    }
  std::vector<Term<F>> terms;
  for (auto& [e, c] : acc) terms.push_back({Monomial::from_exponents(e), c});
  return Series<F>::from_terms(f.field(), n, N, std::move(terms));
}

template <class F>
Series<F> invert_unit(const Series<F>& f) {
  if (!is_unit(f)) throw Error(ErrorCode::NotUnit, "invert_unit needs a nonzero constant term");
  const auto& K = f.field();
  int N = f.precision();
  Series<F> g = Series<F>::constant(K, f.num_vars(), 0, f.constant_term().inverse());
  Series<F> one = Series<F>::constant(K, f.num_vars(), N, K(1));
  int P = 0;
  while (P < N) {
    P = std::min(N, 2 * P + 1);
    g = with_precision(g, P);
    Series<F> err = subtract(with_precision(one, P), mul(jet(f, P), g));
    g = add(g, mul(g, err));
  }
  return g;
}

template <class F>
Series<F> sqrt_unit(const Series<F>& f) {
  if (!is_unit(f)) throw Error(ErrorCode::NotUnit, "sqrt_unit needs a nonzero constant term");
  const auto& K = f.field();
  auto root = K.sqrt(f.constant_term());
  if (!root)
    throw Error(ErrorCode::RootNotInField,
                "constant term " + format_scalar(f.constant_term()) + " is not a square in " + K.name());
  int N = f.precision();
  F half = K(2).inverse();
  Series<F> g = Series<F>::constant(K, f.num_vars(), 0, *root);
  int P = 0;
  while (P < N) {
    P = std::min(N, 2 * P + 1);
    g = with_precision(g, P);
    g = scale(add(g, mul(jet(f, P), invert_unit(g))), half);
  }
  return g;
}

template <class F>
Series<F> rename_vars(const Series<F>& f, int num_vars, const std::vector<int>& map) {
  std::vector<Term<F>> terms;
  terms.reserve(f.size());
  for (const auto& t : f.terms()) {
    Monomial m;
    for (int i = 0; i < f.num_vars(); ++i) {
      int e = t.mono[i];
      if (e == 0) continue;
      if (map.at(i) < 0 || map.at(i) >= num_vars)
        throw Error(ErrorCode::MismatchedVars, "variable mapped outside the target ring");
      m.set(map[i], m[map[i]] + e);
    }
    terms.push_back({m, t.coef});
  }
  return Series<F>::from_terms(f.field(), num_vars, f.precision(), std::move(terms));
}

// ------------------------------------------------------------ substitution

namespace {

/// Precomputed state for substituting a fixed argument tuple. When the
/// arguments share the variable count of f and have an invertible linear
/// part L, f(Lx + h) is evaluated as (f o L)(x + L^{-1} h): a cheap linear
/// substitution followed by a Taylor expansion with divided derivatives,
/// which is exact in every characteristic. Otherwise a table of argument
/// power products is used.
template <class F>
class Substitution {
 public:
  Substitution(const std::vector<Series<F>>& args, int f_vars) : args_(args) {
    if (args.empty()) throw Error(ErrorCode::MismatchedVars, "empty argument list");
    if (static_cast<int>(args.size()) != f_vars)
      throw Error(ErrorCode::MismatchedVars, "substitute needs one argument per variable");
    m_ = args[0].num_vars();
    prec_ = args[0].precision();
    for (const auto& a : args) {
      if (a.num_vars() != m_) throw Error(ErrorCode::MismatchedVars, "arguments live in different rings");
      if (!a.is_zero() && a.terms().front().mono.degree() == 0)
        throw Error(ErrorCode::NotInMaximalIdeal, "substitution argument has a nonzero constant term");
      prec_ = std::min(prec_, a.precision());
    }
    const auto& K = args[0].field();
    if (f_vars != m_) return;
    int n = m_;
    Matrix<F> L(n, n, K(0));
    bool nonlinear = false, identity = true;
    for (int i = 0; i < n; ++i) {
      for (const auto& t : args[i].terms()) {
        if (t.mono.degree() == 1) {
          int j = 0;
          while (t.mono[j] == 0) ++j;
          L(i, j) = t.coef;
        } else {
          nonlinear = true;
        }
      }
      for (int j = 0; j < n; ++j)
        if (!(L(i, j) == (i == j ? K(1) : K(0)))) identity = false;
    }
    if (determinant(L, K).is_zero()) return;
    linear_ok_ = true;
    linear_identity_ = identity;
    for (int i = 0; i < n; ++i) linear_forms_.push_back(filter_terms(args[i], [](const Monomial& m) { return m.degree() == 1; }));
    if (!nonlinear) return;
    Matrix<F> Linv = inverse(L, K);
    std::vector<Series<F>> h;
    for (int i = 0; i < n; ++i) h.push_back(filter_terms(args[i], [](const Monomial& m) { return m.degree() >= 2; }));
    for (int i = 0; i < n; ++i) {
      Series<F> d(K, n, prec_);
      for (int j = 0; j < n; ++j)
        if (!Linv(i, j).is_zero()) d = add(d, scale(h[j], Linv(i, j)));
      delta_.push_back(with_precision(d, prec_));
    }
    binom_.assign(prec_ + 1, std::vector<F>(prec_ + 1, K(0)));
    for (int b = 0; b <= prec_; ++b) {
      binom_[b][0] = K(1);
      for (int a = 1; a <= b; ++a) binom_[b][a] = binom_[b - 1][a - 1] + (a <= b - 1 ? binom_[b - 1][a] : K(0));
    }
  }

  Series<F> apply(const Series<F>& f) {
    int P = std::min(prec_, f.precision());
    if (!linear_ok_) return apply_table(f, P);
    Series<F> g = linear_identity_ ? with_precision(f, P) : apply_linear(f, P);
    if (delta_.empty()) return g;
    return apply_taylor(g, P);
  }

 private:
  const Series<F>& cached(std::unordered_map<Monomial, Series<F>, MonomialHash>& memo, const Monomial& beta,
                          const std::vector<Series<F>>& factors) {
    auto it = memo.find(beta);
    if (it != memo.end()) return it->second;
    const auto& K = args_[0].field();
    if (beta.degree() == 0) {
      return memo.emplace(beta, Series<F>::constant(K, m_, prec_, K(1))).first->second;
    }
    int j = 0;
    while (beta[j] == 0) ++j;
    Monomial prev = beta;
    prev.set(j, beta[j] - 1);
    Series<F> base = cached(memo, prev, factors);
    Series<F> value = mul(base, factors[j]);
    return memo.emplace(beta, std::move(value)).first->second;
  }

  Series<F> apply_table(const Series<F>& f, int P) {
    const auto& K = f.field();
    Accumulator<F> acc(K, m_, P, f.size() * 64);
    for (const auto& t : f.terms()) {
      if (t.mono.degree() > P) break;
      acc.add_scaled(cached(table_, t.mono, args_), t.coef, Monomial());
    }
    return acc.finish();
  }

  Series<F> apply_linear(const Series<F>& f, int P) {
    const auto& K = f.field();
    Accumulator<F> acc(K, m_, P, f.size() * 16);
    for (const auto& t : f.terms()) {
      if (t.mono.degree() > P) break;
      acc.add_scaled(cached(linear_, t.mono, linear_forms_), t.coef, Monomial());
    }
    return acc.finish();
  }

  Series<F> apply_taylor(const Series<F>& g, int P) {
    const auto& K = g.field();
    int n = m_;
    std::vector<int> ord(n, P + 1), maxexp(n, 0);
    for (int i = 0; i < n; ++i)
      if (!delta_[i].is_zero()) ord[i] = delta_[i].terms().front().mono.degree();
    for (const auto& t : g.terms())
      for (int i = 0; i < n; ++i) maxexp[i] = std::max(maxexp[i], t.mono[i]);
    Accumulator<F> acc(K, n, P, g.size() * 16);
    acc.add_scaled(g, K(1), Monomial());
    std::vector<int> alpha(n, 0);
    auto visit = [&](auto&& self, int i, int used) -> void {
      if (i == n) {
        if (used == 0) return;
        Monomial a = Monomial::from_exponents(alpha);
        int budget = P - used;
        std::vector<Term<F>> d;
        for (const auto& t : g.terms()) {
          if (!a.divides(t.mono)) continue;
          Monomial rest = a.cofactor(t.mono);
          if (rest.degree() > budget) continue;
          F c = t.coef;
          for (int v = 0; v < n && !c.is_zero(); ++v)
            if (alpha[v]) c *= binom_[t.mono[v]][alpha[v]];
          if (!c.is_zero()) d.push_back({rest, c});
        }
        if (d.empty()) return;
        Series<F> deriv = Series<F>::from_terms(K, n, budget, std::move(d));
        acc.add_product(deriv, cached(delta_pow_, a, delta_));
        return;
      }
      for (int k = 0; k <= maxexp[i] && used + k * ord[i] <= P; ++k) {
        alpha[i] = k;
        self(self, i + 1, used + k * ord[i]);
      }
      alpha[i] = 0;
    };
    visit(visit, 0, 0);
    return acc.finish();
  }

  std::vector<Series<F>> args_;
  int m_ = 0;
  int prec_ = 0;
  bool linear_ok_ = false;
  bool linear_identity_ = false;
  std::vector<Series<F>> linear_forms_;
  std::vector<Series<F>> delta_;
  std::vector<std::vector<F>> binom_;
  std::unordered_map<Monomial, Series<F>, MonomialHash> table_, linear_, delta_pow_;
};

}  // namespace

template <class F>
Series<F> substitute(const Series<F>& f, const std::vector<Series<F>>& args) {
  Substitution<F> s(args, f.num_vars());
  return s.apply(f);
}

template <class F>
std::vector<Series<F>> substitute_many(const std::vector<Series<F>>& fs, const std::vector<Series<F>>& args) {
  std::vector<Series<F>> out;
  if (fs.empty()) return out;
  Substitution<F> s(args, fs[0].num_vars());
  for (const auto& f : fs) {
    if (f.num_vars() != fs[0].num_vars()) throw Error(ErrorCode::MismatchedVars, "mixed rings in substitute_many");
    out.push_back(s.apply(f));
  }
  return out;
}

#define ADE_INSTANTIATE(F)                                                                      \
  template class Series<F>;                                                                     \
  template Series<F> add(const Series<F>&, const Series<F>&);                                   \
  template Series<F> subtract(const Series<F>&, const Series<F>&);                              \
  template Series<F> negate(const Series<F>&);                                                  \
  template Series<F> scale(const Series<F>&, const F&);                                         \
  template Series<F> jet(const Series<F>&, int);                                                \
  template Series<F> mul(const Series<F>&, const Series<F>&);                                   \
  template Series<F> mul_serial(const Series<F>&, const Series<F>&);                            \
  template Series<F> mul_parallel(const Series<F>&, const Series<F>&);                          \
  template Series<F> mul_reference(const Series<F>&, const Series<F>&);                         \
  template Series<F> invert_unit(const Series<F>&);                                             \
  template Series<F> sqrt_unit(const Series<F>&);                                               \
  template Series<F> rename_vars(const Series<F>&, int, const std::vector<int>&);               \
  template Series<F> substitute(const Series<F>&, const std::vector<Series<F>>&);               \
  template std::vector<Series<F>> substitute_many(const std::vector<Series<F>>&,                \
                                                  const std::vector<Series<F>>&);

ADE_INSTANTIATE(Fp)
ADE_INSTANTIATE(Rational)

}  // namespace ade
