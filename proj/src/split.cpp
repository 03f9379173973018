#include "ade/split.hpp"

namespace ade {

template <class F>
Matrix<F> gram_matrix(const Series<F>& f) {
  auto ord = order(f);
  if (ord && *ord < 2) throw Error(ErrorCode::OrderTooLow, "quadratic part needs order >= 2");
  const auto& K = f.field();
  int n = f.num_vars();
  Matrix<F> G(n, n, K(0));
  F half = K(2).inverse();
  for (const auto& t : f.terms()) {
    if (t.mono.degree() != 2) {
      if (t.mono.degree() > 2) break;
      continue;
    }
    int i = -1, j = -1;
    for (int v = 0; v < n; ++v) {
      if (t.mono[v] == 2) i = j = v;
      if (t.mono[v] == 1) (i < 0 ? i : j) = v;
    }
    if (i == j) {
      G(i, i) = t.coef;
    } else {
      G(i, j) = t.coef * half;
      G(j, i) = G(i, j);
    }
  }
  return G;
}

namespace {

// G <- E^T G E and P <- P E for E = identity + c e_row e_col^T, i.e. column
// col of the change gains c times column row.
template <class F>
void add_multiple(Matrix<F>& G, Matrix<F>& P, int row, int col, const F& c) {
  int n = G.rows();
  for (int k = 0; k < n; ++k) G(k, col) += c * G(k, row);
  for (int k = 0; k < n; ++k) G(col, k) += c * G(row, k);
  for (int k = 0; k < n; ++k) P(k, col) += c * P(k, row);
}

template <class F>
void swap_index(Matrix<F>& G, Matrix<F>& P, int a, int b) {
  if (a == b) return;
  int n = G.rows();
  for (int k = 0; k < n; ++k) std::swap(G(k, a), G(k, b));
  for (int k = 0; k < n; ++k) std::swap(G(a, k), G(b, k));
  for (int k = 0; k < n; ++k) std::swap(P(k, a), P(k, b));
}

}  // namespace

template <class F>
Diagonalization<F> diagonalize_symmetric(const Matrix<F>& G0, const FieldOf<F>& field) {
  int n = G0.rows();
  if (G0.cols() != n) throw Error(ErrorCode::ShapeMismatch, "Gram matrix must be square");
  Matrix<F> G = G0;
  Matrix<F> P = Matrix<F>::identity(n, field);
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n && piv < 0; ++i)
      if (!G(i, i).is_zero()) piv = i;
    if (piv < 0) {
      for (int i = k; i < n && piv < 0; ++i)
        for (int j = i + 1; j < n && piv < 0; ++j)
          if (!G(i, j).is_zero()) {
            // x_j -> x_j + x_i makes the (i, i) entry 2 g_ij
            add_multiple(G, P, j, i, field(1));
            piv = i;
          }
    }
    if (piv < 0) break;
    swap_index(G, P, k, piv);
    F inv = G(k, k).inverse();
    for (int j = k + 1; j < n; ++j)
      if (!G(k, j).is_zero()) add_multiple(G, P, k, j, -(G(k, j) * inv));
  }
  return {P, G};
}

template <class F>
int corank(const Series<F>& f) {
  return f.num_vars() - rank(gram_matrix(f));
}

template <class F>
SplitResult<F> split(const Series<F>& f) {
  auto ord = order(f);
  if (!ord || *ord != 2) throw Error(ErrorCode::OrderTooLow, "split needs a series of order exactly 2");
  const auto& K = f.field();
  int n = f.num_vars();
  int N = f.precision();
  auto [P, D] = diagonalize_symmetric(gram_matrix(f), K);
  int r = 0;
  while (r < n && !D(r, r).is_zero()) ++r;
  std::vector<F> units;
  for (int i = 0; i < r; ++i) units.push_back(D(i, i));

  std::vector<Series<F>> lin;
  for (int i = 0; i < n; ++i) {
    std::vector<Term<F>> t;
    for (int j = 0; j < n; ++j)
      if (!P(i, j).is_zero()) t.push_back({Monomial::variable(j), P(i, j)});
    lin.push_back(Series<F>::from_terms(K, n, N, std::move(t)));
  }
  CoordinateChange<F> change(lin);
  Series<F> g = apply(change, f);

  std::vector<F> inv2;
  for (int i = 0; i < r; ++i) inv2.push_back((K(2) * units[i]).inverse());
  for (int pass = 0; pass <= N; ++pass) {
    std::vector<std::vector<Term<F>>> cross(r);
    bool any = false;
    for (const auto& t : g.terms()) {
      int i = 0;
      while (i < r && t.mono[i] == 0) ++i;
      if (i == r) continue;
      if (t.mono.degree() == 2 && t.mono[i] == 2) continue;
      cross[i].push_back({Monomial::variable(i).cofactor(t.mono), t.coef});
      any = true;
    }
    if (!any) break;
    std::vector<Series<F>> sigma;
    for (int i = 0; i < n; ++i) {
      Series<F> xi = Series<F>::variable(K, n, N, i);
      if (i < r && !cross[i].empty())
        xi = subtract(xi, scale(Series<F>::from_terms(K, n, N, std::move(cross[i])), inv2[i]));
      sigma.push_back(std::move(xi));
    }
    CoordinateChange<F> step(std::move(sigma));
    g = apply(step, g);
    change = compose(change, step);
  }
  Series<F> residual = filter_terms(g, [r](const Monomial& m) {
    for (int i = 0; i < r; ++i)
      if (m[i] != 0) return false;
    return true;
  });
  if (!(subtract(g, residual).size() == static_cast<std::size_t>(r)))
    throw Error(ErrorCode::InvalidArgument, "square completion did not converge");
  return {r, units, change, residual};
}

#define ADE_INSTANTIATE(F)                                                              \
  template Matrix<F> gram_matrix(const Series<F>&);                                     \
  template Diagonalization<F> diagonalize_symmetric(const Matrix<F>&, const FieldOf<F>&); \
  template int corank(const Series<F>&);                                                \
  template SplitResult<F> split(const Series<F>&);

ADE_INSTANTIATE(Fp)
ADE_INSTANTIATE(Rational)

}  // namespace ade
