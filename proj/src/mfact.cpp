#include "ade/mfact.hpp"

namespace ade {

namespace {

template <class F>
Series<F> zero_like(const Series<F>& s) {
  return Series<F>(s.field(), s.num_vars(), s.precision());
}

template <class F>
Series<F> one_like(const Series<F>& s) {
  return Series<F>::constant(s.field(), s.num_vars(), s.precision(), s.field()(1));
}

template <class F>
void need_shape(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::ShapeMismatch, what);
}

template <class F>
bool equal_upto(const SeriesMatrix<F>& a, const SeriesMatrix<F>& b, int N) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (!(with_precision(a(i, j), N) == with_precision(b(i, j), N))) return false;
  return true;
}

template <class F>
int min_precision(const SeriesMatrix<F>& m) {
  int N = m.precision();
  for (const auto& e : m.entries()) N = std::min(N, e.precision());
  return N;
}

template <class F>
bool reduced(const SeriesMatrix<F>& m) {
  for (const auto& e : m.entries())
    if (!e.constant_term().is_zero()) return false;
  return true;
}

template <class F>
bool uses_variable(const Series<F>& s, int b) {
  for (const auto& t : s.terms())
    if (t.mono[b] > 0) return true;
  return false;
}

template <class F>
bool uses_variable(const SeriesMatrix<F>& m, int b) {
  for (const auto& e : m.entries())
    if (uses_variable(e, b)) return true;
  return false;
}

template <class F>
bool is_zero_block(const SeriesMatrix<F>& m, int r0, int nr, int c0, int nc) {
  for (int i = r0; i < r0 + nr; ++i)
    for (int j = c0; j < c0 + nc; ++j)
      if (!m(i, j).is_zero()) return false;
  return true;
}

template <class F>
Series<F> variable_like(const Series<F>& s, int b) {
  if (b < 0 || b >= s.num_vars()) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  return Series<F>::variable(s.field(), s.num_vars(), s.precision(), b);
}

template <class F>
std::vector<Series<F>> kill_variable(const Series<F>& like, int b) {
  std::vector<Series<F>> args;
  for (int i = 0; i < like.num_vars(); ++i)
    args.push_back(i == b ? zero_like(like) : Series<F>::variable(like.field(), like.num_vars(), like.precision(), i));
  return args;
}

}  // namespace

template <class F>
SeriesMatrix<F> SeriesMatrix<F>::from_rows(std::vector<std::vector<Series<F>>> rows) {
  need_shape<F>(!rows.empty() && !rows[0].empty(), "empty matrix");
  SeriesMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()), zero_like(rows[0][0]));
  for (int i = 0; i < m.rows(); ++i) {
    need_shape<F>(static_cast<int>(rows[i].size()) == m.cols(), "ragged matrix rows");
    for (int j = 0; j < m.cols(); ++j) {
      if (rows[i][j].num_vars() != m.num_vars())
        throw Error(ErrorCode::MismatchedVars, "matrix entries live in different rings");
      m(i, j) = std::move(rows[i][j]);
    }
  }
  return m;
}

template <class F>
SeriesMatrix<F> SeriesMatrix<F>::identity(int n, const Series<F>& one) {
  return scalar(n, one);
}

template <class F>
SeriesMatrix<F> SeriesMatrix<F>::scalar(int n, const Series<F>& s) {
  SeriesMatrix m(n, n, zero_like(s));
  for (int i = 0; i < n; ++i) m(i, i) = s;
  return m;
}

template <class F>
SeriesMatrix<F> operator*(const SeriesMatrix<F>& a, const SeriesMatrix<F>& b) {
  need_shape<F>(a.cols() == b.rows(), "matrix product shape mismatch");
  SeriesMatrix<F> c(a.rows(), b.cols(), zero_like(a(0, 0)));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      Series<F> acc = zero_like(a(0, 0));
      for (int k = 0; k < a.cols(); ++k)
        if (!a(i, k).is_zero() && !b(k, j).is_zero()) acc = acc + mul(a(i, k), b(k, j));
      c(i, j) = std::move(acc);
    }
  return c;
}

template <class F>
SeriesMatrix<F> operator+(const SeriesMatrix<F>& a, const SeriesMatrix<F>& b) {
  need_shape<F>(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sum shape mismatch");
  SeriesMatrix<F> c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

template <class F>
SeriesMatrix<F> operator-(const SeriesMatrix<F>& a, const SeriesMatrix<F>& b) {
  need_shape<F>(a.rows() == b.rows() && a.cols() == b.cols(), "matrix difference shape mismatch");
  SeriesMatrix<F> c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

template <class F>
SeriesMatrix<F> substitute(const SeriesMatrix<F>& m, const std::vector<Series<F>>& args) {
  auto out = substitute_many(m.entries(), args);
  SeriesMatrix<F> r(m.rows(), m.cols(), out[0]);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = out[i * m.cols() + j];
  return r;
}

template <class F>
SeriesMatrix<F> blocks(const SeriesMatrix<F>& a, const SeriesMatrix<F>& b, const SeriesMatrix<F>& c,
                       const SeriesMatrix<F>& d) {
  need_shape<F>(a.rows() == b.rows() && c.rows() == d.rows() && a.cols() == c.cols() && b.cols() == d.cols(),
                "block shapes do not fit");
  SeriesMatrix<F> m(a.rows() + c.rows(), a.cols() + b.cols(), zero_like(a(0, 0)));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      bool top = i < a.rows(), left = j < a.cols();
      int r = top ? i : i - a.rows(), s = left ? j : j - a.cols();
      m(i, j) = top ? (left ? a(r, s) : b(r, s)) : (left ? c(r, s) : d(r, s));
    }
  return m;
}

template <class F>
SeriesMatrix<F> submatrix(const SeriesMatrix<F>& m, int r0, int nr, int c0, int nc) {
  need_shape<F>(r0 >= 0 && c0 >= 0 && nr > 0 && nc > 0 && r0 + nr <= m.rows() && c0 + nc <= m.cols(),
                "submatrix out of range");
  SeriesMatrix<F> s(nr, nc, m(0, 0));
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) s(i, j) = m(r0 + i, c0 + j);
  return s;
}

template <class F>
bool verify_mf(const MatrixFactorization<F>& mf) {
  const auto& phi = mf.phi;
  const auto& psi = mf.psi;
  need_shape<F>(phi.rows() == psi.cols() && phi.cols() == psi.rows(), "phi and psi shapes do not match");
  if (!reduced(phi) || !reduced(psi)) return false;
  int N = std::min({mf.equation.precision(), min_precision(phi), min_precision(psi)});
  return equal_upto(phi * psi, SeriesMatrix<F>::scalar(phi.rows(), mf.equation), N) &&
         equal_upto(psi * phi, SeriesMatrix<F>::scalar(phi.cols(), mf.equation), N);
}

template <class F>
MatrixFactorization<F> syzygy_swap(const MatrixFactorization<F>& mf) {
  return {mf.equation, mf.psi, mf.phi};
}

template <class F>
MatrixFactorization<F> knorrer_sharp(const MatrixFactorization<F>& mf, int b) {
  const auto& f = mf.equation;
  if (b < 0 || b >= f.num_vars()) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  if (uses_variable(f, b) || uses_variable(mf.phi, b) || uses_variable(mf.psi, b))
    throw Error(ErrorCode::VariableCollision, "the doubling variable already occurs in the factorization");
  Series<F> x = variable_like(f, b);
  int a = mf.phi.rows(), c = mf.phi.cols();
  auto bI = [&](int n) { return SeriesMatrix<F>::scalar(n, x); };
  auto mbI = [&](int n) { return SeriesMatrix<F>::scalar(n, -x); };
  return {mul(x, x) + f, blocks(mf.psi, mbI(c), bI(a), mf.phi), blocks(mf.phi, bI(a), mbI(c), mf.psi)};
}

template <class F>
FlatResult<F> knorrer_flat(const MatrixFactorization<F>& mf, int b) {
  if (b < 0 || b >= mf.equation.num_vars()) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  auto args = kill_variable(mf.equation, b);
  MatrixFactorization<F> whole{substitute(mf.equation, args), substitute(mf.phi, args), substitute(mf.psi, args)};
  if (!verify_mf(whole))
    throw Error(ErrorCode::NotAFactorization, "setting the variable to zero does not give a factorization");
  FlatResult<F> out{whole, std::nullopt};
  const auto& phi = whole.phi;
  const auto& psi = whole.psi;
  for (int i = 1; i < phi.rows() && !out.parts; ++i)
    for (int j = 1; j < phi.cols() && !out.parts; ++j) {
      int ri = phi.rows() - i, rj = phi.cols() - j;
      if (!is_zero_block(phi, 0, i, j, rj) || !is_zero_block(phi, i, ri, 0, j)) continue;
      if (!is_zero_block(psi, 0, j, i, ri) || !is_zero_block(psi, j, rj, 0, i)) continue;
      MatrixFactorization<F> first{whole.equation, submatrix(phi, 0, i, 0, j), submatrix(psi, 0, j, 0, i)};
      MatrixFactorization<F> second{whole.equation, submatrix(phi, i, ri, j, rj), submatrix(psi, j, rj, i, ri)};
      if (verify_mf(first) && verify_mf(second)) out.parts = std::pair{first, second};
    }
  return out;
}

template <class F>
MatrixFactorization<F> root_to_mf(const SeriesMatrix<F>& phi, int b) {
  need_shape<F>(phi.rows() == phi.cols(), "a root must be a square matrix");
  const auto& s = phi(0, 0);
  if (b < 0 || b >= s.num_vars()) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  if (uses_variable(phi, b)) throw Error(ErrorCode::VariableCollision, "the root already uses the variable");
  SeriesMatrix<F> sq = phi * phi;
  Series<F> g = -sq(0, 0);
  if (g.is_zero()) throw Error(ErrorCode::NotAFactorization, "phi^2 = 0: there is no equation to factor");
  if (!(sq == SeriesMatrix<F>::scalar(phi.rows(), -g)))
    throw Error(ErrorCode::NotAFactorization, "phi^2 is not a scalar matrix -g 1");
  Series<F> x = variable_like(s, b);
  SeriesMatrix<F> bI = SeriesMatrix<F>::scalar(phi.rows(), x);
  MatrixFactorization<F> mf{mul(x, x) + g, bI - phi, bI + phi};
  if (!verify_mf(mf)) throw Error(ErrorCode::NotAFactorization, "b 1 -+ phi is not reduced");
  return mf;
}

template <class F>
bool check_equivalence(const MatrixFactorization<F>& mf1, const MatrixFactorization<F>& mf2,
                       const EquivalenceWitness<F>& w) {
  int a = mf1.phi.rows(), b = mf1.phi.cols();
  need_shape<F>(mf2.phi.rows() == a && mf2.phi.cols() == b && w.alpha.rows() == b && w.alpha.cols() == b &&
                    w.beta.rows() == a && w.beta.cols() == a,
                "equivalence witness shapes do not match");
  const auto& K = mf1.equation.field();
  for (const auto* m : {&w.alpha, &w.beta}) {
    Matrix<F> c(m->rows(), m->cols(), K(0));
    for (int i = 0; i < m->rows(); ++i)
      for (int j = 0; j < m->cols(); ++j) c(i, j) = (*m)(i, j).constant_term();
    if (determinant(c, K).is_zero()) return false;
  }
  int N = std::min({mf1.equation.precision(), mf2.equation.precision(), min_precision(mf1.phi),
                    min_precision(mf2.phi), min_precision(w.alpha), min_precision(w.beta)});
  return equal_upto(w.beta * mf1.phi, mf2.phi * w.alpha, N) && equal_upto(w.alpha * mf1.psi, mf2.psi * w.beta, N);
}

template <class F>
SeriesMatrix<F> block_swap(int a, int b, const Series<F>& one) {
  SeriesMatrix<F> m(a + b, a + b, zero_like(one));
  for (int i = 0; i < b; ++i) m(i, a + i) = one;
  for (int i = 0; i < a; ++i) m(b + i, i) = one;
  return m;
}

template <class F>
IdealMembership<F> ideal_of_entries(const MatrixFactorization<F>& mf) {
  IdealMembership<F> out;
  for (const auto* m : {&mf.phi, &mf.psi})
    for (const auto& e : m->entries())
      if (!e.is_zero()) out.generators.push_back(e);
  Series<F> sum = zero_like(mf.equation);
  for (int j = 0; j < mf.phi.cols(); ++j) {
    if (mf.phi(0, j).is_zero() || mf.psi(j, 0).is_zero()) continue;
    out.products.push_back({mf.phi(0, j), mf.psi(j, 0)});
    sum = sum + mul(mf.phi(0, j), mf.psi(j, 0));
  }
  int N = std::min(sum.precision(), mf.equation.precision());
  out.verified = reduced(mf.phi) && reduced(mf.psi) && with_precision(sum, N) == with_precision(mf.equation, N);
  return out;
}

template <class F>
MatrixFactorization<F> standard_mf(const Verdict& v, int n, const FieldOf<F>& K, int N) {
  Series<F> f = normal_form<F>(v, K, n, N);
  auto x = [&](int i) { return Series<F>::variable(K, n, N, i); };
  auto mono = [&](int i, int e) { return Series<F>::monomial(K, n, N, Monomial::variable(i, e), K(1)); };
  auto one_by_one = [&](Series<F> p, Series<F> q) {
    return MatrixFactorization<F>{mul(p, q), SeriesMatrix<F>::from_rows({{p}}), SeriesMatrix<F>::from_rows({{q}})};
  };
  MatrixFactorization<F> seed = one_by_one(x(0), x(0));
  int first_square;
  switch (v.kind) {
    case VerdictKind::A:
      if (v.index + 1 > N) throw Error(ErrorCode::PrecisionOutOfRange, "the A_k form is above the precision");
      seed = one_by_one(x(0), mono(0, v.index));
      first_square = 1;
      break;
    case VerdictKind::A_at_least:
      if (n < 2) throw Error(ErrorCode::UnsupportedVerdict, "A_at_least in one variable has the zero equation");
      seed = one_by_one(x(1), x(1));
      first_square = 2;
      break;
    case VerdictKind::D:
      seed = one_by_one(x(0), mono(1, 2) + mono(0, v.index - 2));
      first_square = 2;
      break;
    case VerdictKind::D_at_least:
      seed = one_by_one(x(0), mono(1, 2));
      first_square = 2;
      break;
    case VerdictKind::E6:
    case VerdictKind::E6_1:
    case VerdictKind::E7:
    case VerdictKind::E7_1:
    case VerdictKind::E8:
    case VerdictKind::E8_1_char3:
    case VerdictKind::E8_2_char3:
    case VerdictKind::E8_1_char5: {
      if (v.required_characteristic() && v.required_characteristic() != K.characteristic())
        throw Error(ErrorCode::UnsupportedVerdict, v.name() + " only exists in characteristic " +
                                                       std::to_string(v.required_characteristic()));
      // Koszul-type 2x2: g = x1 A + x2 B gives ([[x1, x2], [-B, A]], [[A, -x2], [B, x1]])
      Series<F> g = normal_form<F>(v, K, 2, N);
      std::vector<Term<F>> ta, tb;
      for (const auto& t : g.terms()) {
        if (t.mono[0] > 0)
          ta.push_back({Monomial::variable(0).cofactor(t.mono), t.coef});
        else
          tb.push_back({Monomial::variable(1).cofactor(t.mono), t.coef});
      }
      std::vector<int> keep{0, 1};
      Series<F> A = rename_vars(Series<F>::from_terms(K, 2, N, ta), n, keep);
      Series<F> B = rename_vars(Series<F>::from_terms(K, 2, N, tb), n, keep);
      seed = {rename_vars(g, n, keep), SeriesMatrix<F>::from_rows({{x(0), x(1)}, {-B, A}}),
              SeriesMatrix<F>::from_rows({{A, -x(1)}, {B, x(0)}})};
      first_square = 2;
      break;
    }
    default:
      throw Error(ErrorCode::UnsupportedVerdict, "no matrix factorization for " + v.name());
  }
  if (n < first_square) throw Error(ErrorCode::UnsupportedVerdict, v.name() + " needs more variables");
  for (int b = first_square; b < n; ++b) seed = knorrer_sharp(seed, b);
  if (!(seed.equation == f) || !verify_mf(seed))
    throw Error(ErrorCode::NotAFactorization, "catalog factorization failed to verify");
  return seed;
}

#define ADE_INSTANTIATE(F)                                                                                 \
  template class SeriesMatrix<F>;                                                                        \
  template SeriesMatrix<F> operator*(const SeriesMatrix<F>&, const SeriesMatrix<F>&);                   \
  template SeriesMatrix<F> operator+(const SeriesMatrix<F>&, const SeriesMatrix<F>&);                   \
  template SeriesMatrix<F> operator-(const SeriesMatrix<F>&, const SeriesMatrix<F>&);                   \
  template SeriesMatrix<F> substitute(const SeriesMatrix<F>&, const std::vector<Series<F>>&);           \
  template SeriesMatrix<F> blocks(const SeriesMatrix<F>&, const SeriesMatrix<F>&, const SeriesMatrix<F>&, \
                                  const SeriesMatrix<F>&);                                               \
  template SeriesMatrix<F> submatrix(const SeriesMatrix<F>&, int, int, int, int);                        \
  template bool verify_mf(const MatrixFactorization<F>&);                                                \
  template MatrixFactorization<F> syzygy_swap(const MatrixFactorization<F>&);                            \
  template MatrixFactorization<F> standard_mf<F>(const Verdict&, int, const FieldOf<F>&, int);           \
  template MatrixFactorization<F> knorrer_sharp(const MatrixFactorization<F>&, int);                     \
  template FlatResult<F> knorrer_flat(const MatrixFactorization<F>&, int);                               \
  template MatrixFactorization<F> root_to_mf(const SeriesMatrix<F>&, int);                               \
  template bool check_equivalence(const MatrixFactorization<F>&, const MatrixFactorization<F>&,          \
                                  const EquivalenceWitness<F>&);                                         \
  template SeriesMatrix<F> block_swap(int, int, const Series<F>&);                                       \
  template IdealMembership<F> ideal_of_entries(const MatrixFactorization<F>&);

ADE_INSTANTIATE(Fp)
ADE_INSTANTIATE(Rational)

}  // namespace ade
