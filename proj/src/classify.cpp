#include "ade/classify.hpp"

#include <map>
#include <set>

namespace ade {

// ---------------------------------------------------------------- verdicts

std::string Verdict::name() const {
  switch (kind) {
    case VerdictKind::Regular: return "Regular";
    case VerdictKind::A: return "A" + std::to_string(index);
    case VerdictKind::A_at_least: return "A_at_least(" + std::to_string(index) + ")";
    case VerdictKind::D: return "D" + std::to_string(index);
    case VerdictKind::D_at_least: return "D_at_least(" + std::to_string(index) + ")";
    case VerdictKind::E6: return "E6";
    case VerdictKind::E6_1: return "E6_1";
    case VerdictKind::E7: return "E7";
    case VerdictKind::E7_1: return "E7_1";
    case VerdictKind::E8: return "E8";
    case VerdictKind::E8_1_char3: return "E8_1_char3";
    case VerdictKind::E8_2_char3: return "E8_2_char3";
    case VerdictKind::E8_1_char5: return "E8_1_char5";
    case VerdictKind::NotSimple: return "NotSimple";
    case VerdictKind::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

Verdict Verdict::parse(const std::string& s) {
  static const std::map<std::string, VerdictKind> fixed = {
      {"Regular", VerdictKind::Regular},       {"E6", VerdictKind::E6},
      {"E6_1", VerdictKind::E6_1},             {"E7", VerdictKind::E7},
      {"E7_1", VerdictKind::E7_1},             {"E8", VerdictKind::E8},
      {"E8_1_char3", VerdictKind::E8_1_char3}, {"E8_2_char3", VerdictKind::E8_2_char3},
      {"E8_1_char5", VerdictKind::E8_1_char5}, {"NotSimple", VerdictKind::NotSimple},
      {"Undetermined", VerdictKind::Undetermined}};
  auto it = fixed.find(s);
  if (it != fixed.end()) return of(it->second);
  auto number = [&](const std::string& digits) {
    if (digits.empty() || digits.size() > 4 || digits.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorCode::UnsupportedVerdict, "unknown verdict '" + s + "'");
    return std::stoi(digits);
  };
  for (auto [prefix, kind] : {std::pair{"A_at_least(", VerdictKind::A_at_least},
                              std::pair{"D_at_least(", VerdictKind::D_at_least}}) {
    std::string p = prefix;
    if (s.rfind(p, 0) == 0 && s.back() == ')') return of(kind, number(s.substr(p.size(), s.size() - p.size() - 1)));
  }
  if (s.size() > 1 && s[0] == 'A') {
    int k = number(s.substr(1));
    if (k >= 1) return of(VerdictKind::A, k);
  }
  if (s.size() > 1 && s[0] == 'D') {
    int k = number(s.substr(1));
    if (k >= 4) return of(VerdictKind::D, k);
  }
  throw Error(ErrorCode::UnsupportedVerdict, "unknown verdict '" + s + "'");
}

unsigned Verdict::required_characteristic() const {
  switch (kind) {
    case VerdictKind::E6_1:
    case VerdictKind::E7_1:
    case VerdictKind::E8_1_char3:
    case VerdictKind::E8_2_char3: return 3;
    case VerdictKind::E8_1_char5: return 5;
    default: return 0;
  }
}

namespace {

using Exps = std::vector<std::pair<std::vector<int>, int>>;  // exponents, coefficient

// Singular part of each table row in the core variables x1 (, x2).
Exps core_terms(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::Regular: return {{{1}, 1}};
    case VerdictKind::A: return {{{v.index + 1}, 1}};
    case VerdictKind::A_at_least: return {};
    case VerdictKind::D: return {{{1, 2}, 1}, {{v.index - 1, 0}, 1}};
    case VerdictKind::D_at_least: return {{{1, 2}, 1}};
    case VerdictKind::E6: return {{{3, 0}, 1}, {{0, 4}, 1}};
    case VerdictKind::E6_1: return {{{3, 0}, 1}, {{0, 4}, 1}, {{2, 2}, 1}};
    case VerdictKind::E7: return {{{3, 0}, 1}, {{1, 3}, 1}};
    case VerdictKind::E7_1: return {{{3, 0}, 1}, {{1, 3}, 1}, {{2, 2}, 1}};
    case VerdictKind::E8: return {{{3, 0}, 1}, {{0, 5}, 1}};
    case VerdictKind::E8_1_char3: return {{{3, 0}, 1}, {{0, 5}, 1}, {{2, 3}, 1}};
    case VerdictKind::E8_2_char3: return {{{3, 0}, 1}, {{0, 5}, 1}, {{2, 2}, 1}};
    case VerdictKind::E8_1_char5: return {{{3, 0}, 1}, {{0, 5}, 1}, {{1, 4}, 1}};
    default: throw Error(ErrorCode::UnsupportedVerdict, v.name() + " has no normal form");
  }
}

int core_size(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::Regular:
    case VerdictKind::A:
    case VerdictKind::A_at_least: return 1;
    default: return 2;
  }
}

}  // namespace

template <class F>
Series<F> normal_form(const Verdict& v, const FieldOf<F>& field, int n, int N) {
  Exps core = core_terms(v);
  int c = core_size(v);
  if (n < c) throw Error(ErrorCode::UnsupportedVerdict, v.name() + " needs at least " + std::to_string(c) + " variables");
  std::vector<Term<F>> terms;
  for (auto& [e, coef] : core) {
    std::vector<int> full(n, 0);
    std::copy(e.begin(), e.end(), full.begin());
    terms.push_back({Monomial::from_exponents(full), field(coef)});
  }
  if (v.kind != VerdictKind::Regular)
    for (int i = c; i < n; ++i) terms.push_back({Monomial::variable(i, 2), field(1)});
  return Series<F>::from_terms(field, n, N, std::move(terms));
}

template <class F>
bool verify_certificate(const Series<F>& f, const Certificate<F>& cert) {
  if (cert.change.num_vars() != f.num_vars() || cert.normal_form.num_vars() != f.num_vars()) return false;
  int N = std::min(f.precision(), cert.precision);
  Series<F> lhs = mul(cert.unit.unit(), substitute(cert.normal_form, cert.change.components()));
  return with_precision(lhs, N) == with_precision(f, N);
}

template <class F>
bool ideal_cube_membership(const Series<F>& f, int xi, int yi) {
  for (const auto& t : f.terms()) {
    int a = t.mono[xi], b = t.mono[yi];
    if (!(a >= 3 || (a >= 2 && b >= 2) || (a >= 1 && b >= 4) || b >= 6)) return false;
  }
  return true;
}

template <class F>
AkReduction<F> a_k_loop(const Series<F>& residual) {
  const auto& K = residual.field();
  int N = residual.precision();
  if (residual.num_vars() != 1) throw Error(ErrorCode::MismatchedVars, "a_k_loop works on one variable");
  auto ord = order(residual);
  if (!ord) return {Verdict::of(VerdictKind::A_at_least, N), Series<F>::constant(K, 1, N, K(1))};
  if (*ord < 2) throw Error(ErrorCode::OrderTooLow, "A_k residual must have order >= 2");
  int e = *ord;
  std::vector<Term<F>> q;
  for (const auto& t : residual.terms()) q.push_back({Monomial::variable(0, e).cofactor(t.mono), t.coef});
  // residual = t^e * q exactly up to the precision; q is only known to
  // degree N - e, higher terms are irrelevant to the product
  return {Verdict::of(VerdictKind::A, e - 1), Series<F>::from_terms(K, 1, N, std::move(q))};
}

// ------------------------------------------------------------ the 2D core

namespace {

struct Weights {
  int w1, w2, d;
  int of(const Monomial& m) const { return w1 * m[0] + w2 * m[1]; }
};

template <class F>
struct EngineState {
  Series<F> g;
  CoordinateChange<F> psi;
  Series<F> unit;
};

template <class F>
struct Obstruction {
  int weight;
  std::vector<Term<F>> residue;
};

template <class F>
Series<F> derivative(const Series<F>& f, int i) {
  const auto& K = f.field();
  std::vector<Term<F>> out;
  for (const auto& t : f.terms()) {
    int e = t.mono[i];
    if (e == 0) continue;
    F c = t.coef * K(e);
    if (c.is_zero()) continue;
    Monomial m = t.mono;
    m.set(i, e - 1);
    out.push_back({m, c});
  }
  return Series<F>::from_terms(K, f.num_vars(), f.precision(), std::move(out));
}

template <class F>
int min_weight(const Series<F>& f, const Weights& w) {
  int k = 1 << 30;
  for (const auto& t : f.terms()) k = std::min(k, w.of(t.mono));
  return k;
}

template <class F>
Series<F> weight_part(const Series<F>& f, const Weights& w, int k) {
  return filter_terms(f, [&](const Monomial& m) { return w.of(m) == k; });
}

std::vector<Monomial> monomials_of_weight(const Weights& w, int k, int N) {
  std::vector<Monomial> out;
  for (int a = 0; a * w.w1 <= k; ++a) {
    int rest = k - a * w.w1;
    if (rest % w.w2) continue;
    int b = rest / w.w2;
    if (a + b <= N) out.push_back(Monomial::from_exponents(std::vector<int>{a, b}));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Clears g - H weight by weight with x_i -> x_i - a_i and a unit factor
/// 1 + h, solving the graded linear system at each weight. Stops when
/// g == H or when a weight leaves a residue outside the image, which is
/// returned after the rest of that weight has been cleared.
template <class F>
std::optional<Obstruction<F>> run_engine(EngineState<F>& st, const Series<F>& H, const Weights& w,
                                         const std::vector<Monomial>& preferred) {
  const auto& K = st.g.field();
  int N = st.g.precision();
  Series<F> H0 = weight_part(H, w, w.d);
  std::array<Series<F>, 2> L{derivative(H, 0), derivative(H, 1)};
  std::array<int, 2> e{-1, -1};
  for (int i = 0; i < 2; ++i)
    if (!L[i].is_zero()) {
      e[i] = min_weight(L[i], w);
      L[i] = weight_part(L[i], w, e[i]);
    }
  for (int iter = 0; iter < 4096; ++iter) {
    Series<F> r = subtract(st.g, H);
    if (r.is_zero()) return std::nullopt;
    int k = min_weight(r, w);
    if (k <= w.d) throw Error(ErrorCode::InvalidArgument, "weighted reduction lost its leading part");
    std::vector<Monomial> rows = monomials_of_weight(w, k, N);
    std::map<Monomial, int> row_of;
    for (std::size_t i = 0; i < rows.size(); ++i) row_of[rows[i]] = static_cast<int>(i);

    struct Unknown {
      int slot;  // 0, 1: a_i; 2: h
      Monomial mono;
    };
    std::vector<Unknown> unknowns;
    std::vector<std::vector<F>> cols;
    auto add_column = [&](int slot, const Monomial& mu, const Series<F>& factor) {
      std::vector<F> col(rows.size(), K(0));
      bool any = false;
      for (const auto& t : factor.terms()) {
        Monomial m = mu * t.mono;
        auto it = row_of.find(m);
        if (it == row_of.end()) continue;
        col[it->second] += t.coef;
        any = true;
      }
      if (any) {
        unknowns.push_back({slot, mu});
        cols.push_back(std::move(col));
      }
    };
    for (int i = 0; i < 2; ++i) {
      if (e[i] < 0 || k - e[i] <= (i == 0 ? w.w1 : w.w2)) continue;
      for (const auto& mu : monomials_of_weight(w, k - e[i], N))
        if (mu.degree() >= 1) add_column(i, mu, L[i]);
    }
    for (const auto& nu : monomials_of_weight(w, k - w.d, N))
      if (nu.degree() >= 1) add_column(2, nu, H0);

    // complement of the image spanned by monomials, preferred ones first
    std::vector<Monomial> order;
    for (const auto& m : preferred)
      if (row_of.count(m)) order.push_back(m);
    for (const auto& m : rows)
      if (std::find(order.begin(), order.end(), m) == order.end()) order.push_back(m);
    int R = static_cast<int>(rows.size());
    auto build = [&](const std::vector<Monomial>& extra) {
      Matrix<F> A(R, static_cast<int>(cols.size() + extra.size()), K(0));
      for (std::size_t j = 0; j < cols.size(); ++j)
        for (int i = 0; i < R; ++i) A(i, static_cast<int>(j)) = cols[j][i];
      for (std::size_t j = 0; j < extra.size(); ++j) A(row_of[extra[j]], static_cast<int>(cols.size() + j)) = K(1);
      return A;
    };
    std::vector<Monomial> complement;
    int current = rank(build(complement));
    for (const auto& m : order) {
      if (current == R) break;
      auto trial = complement;
      trial.push_back(m);
      int rk = rank(build(trial));
      if (rk > current) {
        complement = trial;
        current = rk;
      }
    }
    std::vector<F> rhs(R, K(0));
    Series<F> rk = weight_part(r, w, k);
    for (const auto& t : rk.terms()) rhs[row_of.at(t.mono)] = t.coef;
    auto sol = solve(build(complement), rhs, K);
    if (!sol) throw Error(ErrorCode::InvalidArgument, "graded system has no solution");
    std::vector<Term<F>> residue;
    for (std::size_t j = 0; j < complement.size(); ++j) {
      const F& c = (*sol)[cols.size() + j];
      if (!c.is_zero()) residue.push_back({complement[j], c});
    }
    std::array<std::vector<Term<F>>, 3> parts;
    for (std::size_t j = 0; j < unknowns.size(); ++j)
      if (!(*sol)[j].is_zero()) parts[unknowns[j].slot].push_back({unknowns[j].mono, (*sol)[j]});
    if (parts[0].empty() && parts[1].empty() && parts[2].empty()) {
      if (residue.empty()) throw Error(ErrorCode::InvalidArgument, "graded step made no progress");
      return Obstruction<F>{k, residue};
    }
    std::vector<Series<F>> sigma;
    for (int i = 0; i < 2; ++i)
      sigma.push_back(subtract(Series<F>::variable(K, 2, N, i), Series<F>::from_terms(K, 2, N, parts[i])));
    CoordinateChange<F> step(std::move(sigma));
    Series<F> one_h = add(Series<F>::constant(K, 2, N, K(1)), Series<F>::from_terms(K, 2, N, parts[2]));
    st.g = mul(apply(step, st.g), invert_unit(one_h));
    st.unit = mul(apply(step, st.unit), one_h);
    st.psi = compose(st.psi, step);
    if (!residue.empty()) {
      Series<F> left = weight_part(subtract(st.g, H), w, k);
      if (min_weight(subtract(st.g, H), w) == k && left == Series<F>::from_terms(K, 2, N, residue))
        return Obstruction<F>{k, residue};
    }
  }
  throw Error(ErrorCode::SearchLimit, "weighted reduction did not terminate");
}

/// apply(psi, g) = unit * sum kappa_j monos_j in the core variables, with
/// unit(0) = 1 and the monomials those of verdict's table row.
template <class F>
struct Core {
  Verdict verdict;
  int vars = 0;
  std::optional<CoordinateChange<F>> psi;
  std::optional<Series<F>> unit;
  std::vector<Monomial> monos;
  std::vector<F> kappa;
};

template <class F>
Core<F> failed(Verdict v) {
  Core<F> c;
  c.verdict = std::move(v);
  return c;
}

template <class F>
Core<F> core_from(const Verdict& v, EngineState<F>& st, const Series<F>& H) {
  Core<F> c;
  c.verdict = v;
  c.vars = 2;
  for (const auto& t : H.terms()) {
    c.monos.push_back(t.mono);
    c.kappa.push_back(t.coef);
  }
  c.psi = st.psi;
  c.unit = st.unit;
  return c;
}

template <class F>
Series<F> term(const FieldOf<F>& K, int N, int a, int b, const F& c) {
  return Series<F>::monomial(K, 2, N, Monomial::from_exponents(std::vector<int>{a, b}), c);
}

Monomial mono2(int a, int b) { return Monomial::from_exponents(std::vector<int>{a, b}); }

// Triple line: g = alpha x1^3 + ..., every other degree-3 coefficient zero.
template <class F>
Core<F> e_path(EngineState<F> st) {
  const auto& K = st.g.field();
  int N = st.g.precision();
  unsigned p = K.characteristic();
  F alpha = st.g.coefficient(mono2(3, 0));
  F c0 = st.g.coefficient(mono2(0, 4));
  F b0 = st.g.coefficient(mono2(1, 3));
  if (N < 4) return failed<F>(Verdict::undetermined("PrecisionTooLow: the E cases need precision >= 4"));
  VerdictKind base;
  Series<F> H = term<F>(K, N, 3, 0, alpha);
  Weights w{};
  struct Variant {
    unsigned p;
    Monomial m;
    VerdictKind kind;
  };
  std::vector<Variant> variants;
  if (!c0.is_zero()) {
    base = VerdictKind::E6;
    H = H + term<F>(K, N, 0, 4, c0);
    w = {4, 3, 12};
    variants = {{3, mono2(2, 2), VerdictKind::E6_1}};
  } else if (!b0.is_zero()) {
    base = VerdictKind::E7;
    H = H + term<F>(K, N, 1, 3, b0);
    w = {3, 2, 9};
    variants = {{3, mono2(2, 2), VerdictKind::E7_1}};
  } else {
    if (N < 5) return failed<F>(Verdict::undetermined("PrecisionTooLow: telling E8 apart needs precision >= 5"));
    F c1 = st.g.coefficient(mono2(0, 5));
    if (c1.is_zero()) {
      if (ideal_cube_membership(st.g, 0, 1))
        return failed<F>(Verdict::not_simple("f lies in <x1, x2^2>^3 after normalizing the cubic jet"));
      return failed<F>(Verdict::undetermined("E branch: unexpected terms outside <x1, x2^2>^3"));
    }
    base = VerdictKind::E8;
    H = H + term<F>(K, N, 0, 5, c1);
    w = {5, 3, 15};
    variants = {{3, mono2(2, 2), VerdictKind::E8_2_char3},
                {3, mono2(2, 3), VerdictKind::E8_1_char3},
                {5, mono2(1, 4), VerdictKind::E8_1_char5}};
  }
  std::vector<Monomial> preferred;
  for (const auto& v : variants)
    if (v.p == p) preferred.push_back(v.m);
  VerdictKind kind = base;
  for (;;) {
    auto obs = run_engine(st, H, w, preferred);
    if (!obs) break;
    const Variant* hit = nullptr;
    if (kind == base && obs->residue.size() == 1)
      for (const auto& v : variants)
        if (v.p == p && v.m == obs->residue[0].mono) hit = &v;
    if (!hit)
      return failed<F>(Verdict::undetermined("UnexpectedObstruction at weight " + std::to_string(obs->weight)));
    kind = hit->kind;
    H = H + Series<F>::from_terms(K, 2, N, obs->residue);
  }
  return core_from(Verdict::of(kind), st, H);
}

// Double line: g = kappa x1 x2^2 + ...
template <class F>
Core<F> d_path(EngineState<F> st) {
  const auto& K = st.g.field();
  int N = st.g.precision();
  F kappa = st.g.coefficient(mono2(1, 2));
  Series<F> H = term<F>(K, N, 1, 2, kappa);
  std::vector<Monomial> preferred;
  for (int j = 0; j <= N; ++j) preferred.push_back(mono2(j, 0));
  auto obs = run_engine(st, H, Weights{1, 1, 3}, preferred);
  if (!obs) return core_from(Verdict::of(VerdictKind::D_at_least, N), st, H);
  if (obs->residue.size() != 1 || obs->residue[0].mono[1] != 0)
    return failed<F>(Verdict::undetermined("UnexpectedObstruction in the D reduction"));
  int k = obs->residue[0].mono[0];
  H = H + Series<F>::from_terms(K, 2, N, obs->residue);
  if (run_engine(st, H, Weights{2, k - 1, 2 * k}, {}))
    return failed<F>(Verdict::undetermined("UnexpectedObstruction in the D_" + std::to_string(k + 1) + " reduction"));
  return core_from(Verdict::of(VerdictKind::D, k + 1), st, H);
}

// Three lines: g = x1 (ka x2^2 + kb x1^2) + ...
template <class F>
Core<F> d4_path(EngineState<F> st) {
  const auto& K = st.g.field();
  int N = st.g.precision();
  Series<F> H = term<F>(K, N, 1, 2, st.g.coefficient(mono2(1, 2))) + term<F>(K, N, 3, 0, st.g.coefficient(mono2(3, 0)));
  if (run_engine(st, H, Weights{1, 1, 3}, {}))
    return failed<F>(Verdict::undetermined("UnexpectedObstruction in the D4 reduction"));
  return core_from(Verdict::of(VerdictKind::D, 4), st, H);
}

template <class F>
CoordinateChange<F> linear_change(const FieldOf<F>& K, int N, const Matrix<F>& M) {
  std::vector<Series<F>> comps;
  for (int i = 0; i < M.rows(); ++i) {
    std::vector<Term<F>> t;
    for (int j = 0; j < M.cols(); ++j)
      if (!M(i, j).is_zero()) t.push_back({Monomial::variable(j), M(i, j)});
    comps.push_back(Series<F>::from_terms(K, M.rows(), N, std::move(t)));
  }
  return CoordinateChange<F>(std::move(comps));
}

/// Change of variables whose new coordinates are the given linear forms
/// (rows of B, in the old variables).
template <class F>
CoordinateChange<F> to_forms(const FieldOf<F>& K, int N, const Matrix<F>& B) {
  return linear_change<F>(K, N, inverse(B, K));
}

template <class F>
Matrix<F> complete_basis(const FieldOf<F>& K, const F& a, const F& b) {
  Matrix<F> B(2, 2, K(0));
  B(0, 0) = a;
  B(0, 1) = b;
  if (!a.is_zero())
    B(1, 1) = K(1);
  else
    B(1, 0) = K(1);
  return B;
}

template <class F>
Core<F> corank2_core(const Series<F>& g) {
  std::optional<JetType<F>> found;
  try {
    found = jet3_normal_form(g);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CubicRootsNotInField && e.code() != ErrorCode::SearchLimit) throw;
    return failed<F>(Verdict::undetermined(std::string(code_name(e.code())) + ": " + e.what()));
  }
  const JetType<F>& jet = *found;
  const auto& K = g.field();
  EngineState<F> st{apply(jet.change, g), jet.change, Series<F>::constant(K, 2, g.precision(), K(1))};
  switch (jet.kind) {
    case JetKind::TripleLine: return e_path(std::move(st));
    case JetKind::DoubleLine: return d_path(std::move(st));
    case JetKind::ThreeLines: return d4_path(std::move(st));
  }
  return failed<F>(Verdict::undetermined("unreachable"));
}

// ------------------------------------------------------ constant scaling

template <class F>
struct Scaling {
  std::vector<F> lambda;
  F u0;
  Matrix<F> T;
};

std::vector<Fp> scale_candidates(const PrimeField& K, const std::vector<Fp>&, const std::vector<Fp>&) {
  std::vector<Fp> out;
  std::uint64_t limit = std::min<std::uint64_t>(K.size() - 1, 1u << 16);
  for (std::uint64_t i = 1; i <= limit; ++i) out.push_back(K.element(i));
  return out;
}

std::vector<Rational> scale_candidates(const RationalField& K, const std::vector<Rational>& kappa,
                                       const std::vector<Rational>& squares) {
  std::vector<mpq_class> base{1, 2, 3};
  auto push_abs = [&](const Rational& r) {
    if (r.is_zero()) return;
    mpq_class a = abs(r.value());
    base.push_back(a);
    base.push_back(1 / a);
  };
  for (const auto& k : kappa) push_abs(k);
  for (const auto& v : squares) push_abs(v);
  std::set<mpq_class> seen;
  std::vector<Rational> out;
  auto add = [&](const mpq_class& q) {
    for (int s : {1, -1}) {
      mpq_class v = q * s;
      v.canonicalize();
      if (seen.insert(v).second) out.push_back(Rational(v));
    }
  };
  for (const auto& a : base) add(a);
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t j = i; j < base.size(); ++j) add(base[i] * base[j]);
  (void)K;
  return out;
}

std::optional<Matrix<Fp>> squares_transform(const PrimeField& K, const std::vector<Fp>& v, const Fp& u0) {
  int r = static_cast<int>(v.size());
  Matrix<Fp> T(r, r, K(0));
  if (r == 0) return T;
  std::vector<Fp> cur(r, K(0));
  cur[0] = K(1);
  Fp a = v[0];
  for (int i = 1; i < r; ++i) {
    Fp b = v[i];
    std::optional<Fp> u1, u2;
    for (std::uint64_t s = 0; s < K.size() && !u2; ++s) {
      Fp t = (u0 - a * K.element(s) * K.element(s)) / b;
      if (auto root = K.sqrt(t)) {
        u1 = K.element(s);
        u2 = root;
      }
    }
    if (!u2) return std::nullopt;
    for (int j = 0; j < r; ++j) T(j, i - 1) = *u1 * cur[j];
    T(i, i - 1) += *u2;
    std::vector<Fp> next(r, K(0));
    for (int j = 0; j < r; ++j) next[j] = (*u2 * b) * cur[j];
    next[i] -= *u1 * a;
    cur = next;
    a = a * b * u0;
  }
  auto s = K.sqrt(u0 / a);
  if (!s) return std::nullopt;
  for (int j = 0; j < r; ++j) T(j, r - 1) = *s * cur[j];
  return T;
}

std::optional<Matrix<Rational>> squares_transform(const RationalField& K, const std::vector<Rational>& v,
                                                  const Rational& u0) {
  int r = static_cast<int>(v.size());
  Matrix<Rational> T(r, r, K(0));
  for (int i = 0; i < r; ++i) {
    auto s = K.sqrt(u0 / v[i]);
    if (!s) return std::nullopt;
    T(i, i) = *s;
  }
  return T;
}

template <class F>
std::optional<Scaling<F>> solve_constants(const FieldOf<F>& K, const Core<F>& core, const std::vector<F>& squares) {
  auto candidates = scale_candidates(K, core.kappa, squares);
  auto finish = [&](std::vector<F> lambda, const F& u0) -> std::optional<Scaling<F>> {
    for (std::size_t j = 0; j < core.monos.size(); ++j) {
      F val = core.kappa[j];
      for (int i = 0; i < core.vars; ++i) val *= lambda[i].pow(core.monos[j][i]);
      if (!(val == u0)) return std::nullopt;
    }
    auto T = squares_transform(K, squares, u0);
    if (!T) return std::nullopt;
    return Scaling<F>{std::move(lambda), u0, *T};
  };
  int pure = -1, mixed = -1;
  for (std::size_t j = 0; j < core.monos.size(); ++j) {
    if (core.vars < 2 || core.monos[j][1] == 0) {
      if (pure < 0) pure = static_cast<int>(j);
    } else if (mixed < 0) {
      mixed = static_cast<int>(j);
    }
  }
  for (const F& l1 : candidates) {
    if (core.monos.empty() || pure < 0) {
      // no pure x1 power: x1 scales freely, so the overall constant is free
      std::vector<F> lambda(core.vars, K(1));
      F u0 = l1;
      if (!core.monos.empty()) {
        lambda[0] = l1;
        u0 = core.kappa[0] * l1.pow(core.monos[0][0]);
        if (core.vars > 1) u0 *= K(1).pow(core.monos[0][1]);
      }
      if (auto s = finish(lambda, u0)) return s;
      continue;
    }
    F u0 = core.kappa[pure] * l1.pow(core.monos[pure][0]);
    if (core.vars < 2) {
      if (auto s = finish({l1}, u0)) return s;
      continue;
    }
    if (mixed < 0) continue;
    F rest = u0 / (core.kappa[mixed] * l1.pow(core.monos[mixed][0]));
    for (const F& l2 : K.kth_roots(rest, static_cast<unsigned>(core.monos[mixed][1])))
      if (!l2.is_zero())
        if (auto s = finish({l1, l2}, u0)) return s;
  }
  return std::nullopt;
}

// ------------------------------------------------------------- assembly

/// Builds the certificate from the split data and a normalized core.
template <class F>
Classification<F> assemble(const Series<F>& f, const CoordinateChange<F>& split_change, const std::vector<F>& squares,
                           const Core<F>& core) {
  const auto& K = f.field();
  int n = f.num_vars();
  int N = f.precision();
  int r = static_cast<int>(squares.size());
  int c = n - r;

  // the table row must use exactly the monomials the reduction produced
  // (A1 at full rank has no core: its x1^2 is one of the squares)
  Exps table = c > 0 ? core_terms(core.verdict) : Exps{};
  std::set<Monomial> expect, got(core.monos.begin(), core.monos.end());
  for (auto& [e, coef] : table) {
    std::vector<int> full(std::max(core.vars, 1), 0);
    std::copy(e.begin(), e.end(), full.begin());
    Monomial m = Monomial::from_exponents(full);
    if (m.degree() <= N) expect.insert(m);
  }
  if (expect != got) return {Verdict::undetermined("internal: reduced core does not match the table row"), {}};

  auto scaling = solve_constants(K, core, squares);
  if (!scaling)
    return {Verdict::undetermined("RootNotInField: the constants of " + core.verdict.name() +
                                  " cannot be normalized over " + K.name()),
            {}};

  // core change including the diagonal scaling, and its unit U0 * U(lambda z)
  std::vector<Series<F>> core_psi;
  Series<F> core_unit = Series<F>::constant(K, std::max(c, 1), N, scaling->u0);
  if (c > 0) {
    std::vector<Series<F>> diag;
    for (int i = 0; i < c; ++i)
      diag.push_back(scale(Series<F>::variable(K, c, N, i), i < core.vars ? scaling->lambda[i] : K(1)));
    CoordinateChange<F> sc(diag);
    CoordinateChange<F> psi = core.psi ? compose(*core.psi, sc) : sc;
    core_psi = psi.components();
    if (core.unit) core_unit = scale(apply(sc, *core.unit), scaling->u0);
  }

  std::vector<int> embed_map(c);
  for (int i = 0; i < c; ++i) embed_map[i] = r + i;
  auto embed = [&](const Series<F>& s) { return rename_vars(s, n, embed_map); };

  Series<F> U = c > 0 ? embed(core_unit) : Series<F>::constant(K, n, N, scaling->u0);
  std::vector<Series<F>> M;
  if (r > 0) {
    Series<F> s = c > 0 ? embed(sqrt_unit(scale(core_unit, scaling->u0.inverse())))
                        : Series<F>::constant(K, n, N, K(1));
    for (int i = 0; i < r; ++i) {
      std::vector<Term<F>> lin;
      for (int j = 0; j < r; ++j)
        if (!scaling->T(i, j).is_zero()) lin.push_back({Monomial::variable(j), scaling->T(i, j)});
      M.push_back(mul(s, Series<F>::from_terms(K, n, N, std::move(lin))));
    }
  }
  for (int i = 0; i < c; ++i) M.push_back(embed(core_psi[i]));
  CoordinateChange<F> Psi = compose(split_change, CoordinateChange<F>(M));
  CoordinateChange<F> Pinv = inverse(Psi);

  // table variable t lives at our index perm[t]: core first, then squares
  std::vector<int> perm;
  for (int i = 0; i < c; ++i) perm.push_back(r + i);
  for (int i = 0; i < r; ++i) perm.push_back(i);
  std::vector<Series<F>> change;
  for (int t = 0; t < n; ++t) change.push_back(Pinv[perm[t]]);

  Certificate<F> cert{core.verdict, normal_form<F>(core.verdict, K, n, N), CoordinateChange<F>(std::move(change)),
                      UnitWitness<F>(apply(Pinv, U)), N};
  if (!verify_certificate(f, cert))
    return {Verdict::undetermined("internal: certificate check failed for " + core.verdict.name()), {}};
  return {core.verdict, std::move(cert)};
}

template <class F>
Classification<F> from_core(const Series<F>& f, const CoordinateChange<F>& split_change, const std::vector<F>& squares,
                            const Core<F>& core) {
  if (!core.verdict.has_normal_form()) return {core.verdict, {}};
  return assemble(f, split_change, squares, core);
}

template <class F>
Core<F> a_core(const Series<F>& residual) {
  const auto& K = residual.field();
  int N = residual.precision();
  auto red = a_k_loop(residual);
  Core<F> c;
  c.verdict = red.verdict;
  c.vars = 1;
  c.psi = CoordinateChange<F>::identity(K, 1, N);
  if (red.verdict.kind == VerdictKind::A) {
    F lead = red.unit.constant_term();
    c.monos.push_back(Monomial::variable(0, red.verdict.index + 1));
    c.kappa.push_back(lead);
    c.unit = scale(red.unit, lead.inverse());
  } else {
    c.unit = red.unit;
  }
  return c;
}

template <class F>
Classification<F> regular(const Series<F>& f) {
  const auto& K = f.field();
  int n = f.num_vars(), N = f.precision();
  int pivot = 0;
  while (f.coefficient(Monomial::variable(pivot)).is_zero()) ++pivot;
  std::vector<Series<F>> change{f};
  for (int j = 0; j < n; ++j)
    if (j != pivot) change.push_back(Series<F>::variable(K, n, N, j));
  Verdict v = Verdict::of(VerdictKind::Regular);
  Certificate<F> cert{v, normal_form<F>(v, K, n, N), CoordinateChange<F>(std::move(change)),
                      UnitWitness<F>(Series<F>::constant(K, n, N, K(1))), N};
  return {v, std::move(cert)};
}

template <class F>
F eval_shift(const std::vector<F>& p, const F& t, const FieldOf<F>& K, std::vector<F>* quotient) {
  // Horner with the quotient by (t' - t) collected on the way
  std::vector<F> q(p.size() > 1 ? p.size() - 1 : 0, K(0));
  F acc = K(0);
  for (std::size_t i = p.size(); i-- > 0;) {
    acc = acc * t + p[i];
    if (i > 0) q[i - 1] = acc;
  }
  if (quotient) *quotient = q;
  return acc;
}

}  // namespace

template <class F>
JetType<F> jet3_normal_form(const Series<F>& g) {
  const auto& K = g.field();
  int N = g.precision();
  if (g.num_vars() != 2) throw Error(ErrorCode::MismatchedVars, "cubic jet analysis works on two variables");
  auto ord = order(g);
  if (!ord || *ord != 3) throw Error(ErrorCode::OrderTooLow, "cubic jet analysis needs order exactly 3");
  // p(t) = C(1, t) for the cubic form C(X, Y)
  std::vector<F> p;
  for (int j = 0; j <= 3; ++j) p.push_back(g.coefficient(mono2(3 - j, j)));
  while (p.back().is_zero()) p.pop_back();
  struct Line {
    F a, b;  // a x1 + b x2
    int mult;
  };
  std::vector<Line> lines;
  if (p.size() < 4) lines.push_back({K(1), K(0), 4 - static_cast<int>(p.size())});
  if (p.size() > 1)
    for (const F& tau : K.poly_roots(p)) {
      int m = 0;
      std::vector<F> q = p, next;
      while (q.size() > 1 && eval_shift(q, tau, K, &next).is_zero()) {
        q = next;
        ++m;
      }
      lines.push_back({-tau, K(1), m});
    }
  std::sort(lines.begin(), lines.end(), [](const Line& x, const Line& y) { return x.mult > y.mult; });
  if (lines.empty())
    throw Error(ErrorCode::CubicRootsNotInField, "the cubic jet has no linear factor over " + K.name());
  const Line& top = lines.front();
  if (top.mult == 3)
    return {JetKind::TripleLine, to_forms<F>(K, N, complete_basis<F>(K, top.a, top.b))};
  if (top.mult == 2) {
    Matrix<F> B(2, 2, K(0));
    B(0, 0) = lines[1].a;
    B(0, 1) = lines[1].b;
    B(1, 0) = top.a;
    B(1, 1) = top.b;
    return {JetKind::DoubleLine, to_forms<F>(K, N, B)};
  }
  CoordinateChange<F> first = to_forms<F>(K, N, complete_basis<F>(K, top.a, top.b));
  Series<F> g1 = apply(first, g);
  F b = g1.coefficient(mono2(2, 1)), c = g1.coefficient(mono2(1, 2));
  if (c.is_zero()) throw Error(ErrorCode::InvalidArgument, "cubic jet factorization is inconsistent");
  Matrix<F> shear = Matrix<F>::identity(2, K);
  shear(1, 0) = -(b / (K(2) * c));
  return {JetKind::ThreeLines, compose(first, linear_change<F>(K, N, shear))};
}

template <class F>
ECoefficients<F> e_normalize(const Series<F>& g) {
  const auto& K = g.field();
  int N = g.precision();
  if (g.num_vars() != 2) throw Error(ErrorCode::MismatchedVars, "E normalization works on two variables");
  auto cubic = filter_terms(g, [](const Monomial& m) { return m.degree() == 3; });
  if (cubic.size() != 1 || order(g) != 3 || (cubic.terms()[0].mono[0] != 3 && cubic.terms()[0].mono[1] != 3))
    throw Error(ErrorCode::InvalidArgument, "E normalization needs a cubic jet of the form c x^3");
  int y = cubic.terms()[0].mono[0] == 3 ? 0 : 1, x = 1 - y;
  std::array<std::vector<Term<F>>, 4> parts;  // theta, a, b, c
  for (const auto& t : g.terms()) {
    int i = t.mono[x], j = t.mono[y];
    if (j >= 3) {
      Monomial m = t.mono;
      m.set(y, j - 3);
      parts[0].push_back({m, t.coef});
    } else if (i >= 4 - j) {
      parts[3 - j].push_back({Monomial::variable(0, i - (4 - j)), t.coef});
    } else {
      throw Error(ErrorCode::InvalidArgument, "E normalization: term below the expected filtration");
    }
  }
  return {y, Series<F>::from_terms(K, 2, N, parts[0]), Series<F>::from_terms(K, 1, N, parts[1]),
          Series<F>::from_terms(K, 1, N, parts[2]), Series<F>::from_terms(K, 1, N, parts[3])};
}

template <class F>
Classification<F> e_classify(const ECoefficients<F>& co) {
  const auto& K = co.theta.field();
  int N = co.theta.precision();
  int y = co.cubed_var, x = 1 - y;
  std::vector<int> to_x(1, x);
  auto mono = [&](int xe, int ye) {
    std::vector<int> e(2);
    e[x] = xe;
    e[y] = ye;
    return Series<F>::monomial(K, 2, N, Monomial::from_exponents(e), K(1));
  };
  Series<F> g = mul(co.theta, mono(0, 3)) + mul(rename_vars(co.a, 2, to_x), mono(2, 2)) +
                mul(rename_vars(co.b, 2, to_x), mono(3, 1)) + mul(rename_vars(co.c, 2, to_x), mono(4, 0));
  CoordinateChange<F> start = CoordinateChange<F>::identity(K, 2, N);
  if (y == 1) start = CoordinateChange<F>({Series<F>::variable(K, 2, N, 1), Series<F>::variable(K, 2, N, 0)});
  EngineState<F> st{apply(start, g), start, Series<F>::constant(K, 2, N, K(1))};
  return from_core(g, CoordinateChange<F>::identity(K, 2, N), std::vector<F>{}, e_path(std::move(st)));
}

template <class F>
Classification<F> d_reduce(const Series<F>& g, const JetType<F>& jet) {
  const auto& K = g.field();
  int N = g.precision();
  EngineState<F> st{apply(jet.change, g), jet.change, Series<F>::constant(K, 2, N, K(1))};
  Core<F> core = jet.kind == JetKind::TripleLine   ? e_path(std::move(st))
                 : jet.kind == JetKind::DoubleLine ? d_path(std::move(st))
                                                   : d4_path(std::move(st));
  return from_core(g, CoordinateChange<F>::identity(K, 2, N), std::vector<F>{}, core);
}

template <class F>
Classification<F> classify(const Series<F>& f, const ClassifyOptions& options) {
  const auto& K = f.field();
  int n = f.num_vars(), N = f.precision();
  if (N < 3) throw Error(ErrorCode::PrecisionOutOfRange, "classification needs precision >= 3");
  if (!f.constant_term().is_zero()) throw Error(ErrorCode::NotInMaximalIdeal, "f has a nonzero constant term");
  auto ord = order(f);
  if (ord == 1) return regular(f);
  if (n == 1) return from_core(f, CoordinateChange<F>::identity(K, 1, N), std::vector<F>{}, a_core(f));
  if (!ord || *ord >= 4)
    return {Verdict::not_simple(ord ? "order >= 4 in at least two variables" : "f vanishes to the given precision"), {}};
  auto corank_guard = [&](int c) -> Classification<F> {
    if (options.algebraically_closed_assumed)
      return {Verdict::not_simple("corank " + std::to_string(c) + " >= 3"), {}};
    return {Verdict::undetermined("corank " + std::to_string(c) + " >= 3; NotSimple needs the algebraically closed flag"),
            {}};
  };
  if (*ord == 3) {
    if (n > 2) return corank_guard(n);
    return from_core(f, CoordinateChange<F>::identity(K, 2, N), std::vector<F>{}, corank2_core(f));
  }
  SplitResult<F> s = split(f);
  int r = s.rank, c = n - r;
  std::vector<int> down(n, -1);
  for (int i = r; i < n; ++i) down[i] = i - r;
  if (c == 0) {
    Core<F> core;
    core.verdict = Verdict::of(VerdictKind::A, 1);
    return from_core(f, s.change, s.units, core);
  }
  if (c == 1) return from_core(f, s.change, s.units, a_core(rename_vars(s.residual, 1, down)));
  if (c >= 3) return corank_guard(c);
  Series<F> g2 = rename_vars(s.residual, 2, down);
  auto o2 = order(g2);
  if (!o2 || *o2 >= 4)
    return {Verdict::not_simple(o2 ? "corank 2 with a residual of order >= 4" : "corank 2 with a vanishing residual"), {}};
  return from_core(f, s.change, s.units, corank2_core(g2));
}

#define ADE_INSTANTIATE(F)                                                                         \
  template Series<F> normal_form<F>(const Verdict&, const FieldOf<F>&, int, int);                \
  template Classification<F> classify(const Series<F>&, const ClassifyOptions&);               \
  template bool verify_certificate(const Series<F>&, const Certificate<F>&);                    \
  template AkReduction<F> a_k_loop(const Series<F>&);                                            \
  template JetType<F> jet3_normal_form(const Series<F>&);                                        \
  template ECoefficients<F> e_normalize(const Series<F>&);                                       \
  template Classification<F> e_classify(const ECoefficients<F>&);                                \
  template Classification<F> d_reduce(const Series<F>&, const JetType<F>&);                      \
  template bool ideal_cube_membership(const Series<F>&, int, int);

ADE_INSTANTIATE(Fp)
ADE_INSTANTIATE(Rational)

}  // namespace ade
