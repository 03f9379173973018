#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ade/classify.hpp"
#include "ade/series.hpp"

namespace ade {

/// Matrix with series entries, all in the same ring and precision.
template <class F>
class SeriesMatrix {
 public:
  SeriesMatrix(int rows, int cols, const Series<F>& zero) : rows_(rows), cols_(cols), a_(rows * cols, zero) {}
  static SeriesMatrix from_rows(std::vector<std::vector<Series<F>>> rows);
  static SeriesMatrix identity(int n, const Series<F>& one);
  static SeriesMatrix scalar(int n, const Series<F>& s);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Series<F>& operator()(int i, int j) { return a_[i * cols_ + j]; }
  const Series<F>& operator()(int i, int j) const { return a_[i * cols_ + j]; }
  const std::vector<Series<F>>& entries() const { return a_; }
  int num_vars() const { return a_.front().num_vars(); }
  int precision() const { return a_.front().precision(); }

  friend bool operator==(const SeriesMatrix& a, const SeriesMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  int rows_, cols_;
  std::vector<Series<F>> a_;
};

template <class F>
SeriesMatrix<F> operator*(const SeriesMatrix<F>& a, const SeriesMatrix<F>& b);
template <class F>
SeriesMatrix<F> operator+(const SeriesMatrix<F>& a, const SeriesMatrix<F>& b);
template <class F>
SeriesMatrix<F> operator-(const SeriesMatrix<F>& a, const SeriesMatrix<F>& b);
/// Entrywise substitution.
template <class F>
SeriesMatrix<F> substitute(const SeriesMatrix<F>& m, const std::vector<Series<F>>& args);
/// [[a, b], [c, d]] from four blocks.
template <class F>
SeriesMatrix<F> blocks(const SeriesMatrix<F>& a, const SeriesMatrix<F>& b, const SeriesMatrix<F>& c,
                       const SeriesMatrix<F>& d);
/// Rows [r0, r0 + nr) and columns [c0, c0 + nc).
template <class F>
SeriesMatrix<F> submatrix(const SeriesMatrix<F>& m, int r0, int nr, int c0, int nc);

/// phi (a x b) and psi (b x a) with phi psi = f 1 and psi phi = f 1.
template <class F>
struct MatrixFactorization {
  Series<F> equation;
  SeriesMatrix<F> phi;
  SeriesMatrix<F> psi;
};

template <class F>
struct EquivalenceWitness {
  SeriesMatrix<F> alpha;  // b x b
  SeriesMatrix<F> beta;   // a x a
};

/// Both products equal f 1 modulo m^{N+1} and every entry lies in m.
template <class F>
bool verify_mf(const MatrixFactorization<F>& mf);

template <class F>
MatrixFactorization<F> syzygy_swap(const MatrixFactorization<F>& mf);

/// Factorization of the table form of a verdict in n variables, built from
/// a one- or two-variable seed and one Knorrer doubling per square.
template <class F>
MatrixFactorization<F> standard_mf(const Verdict& v, int n, const FieldOf<F>& field, int N);

/// ([[psi, -b], [b, phi]], [[phi, b], [-b, psi]]) factorizing b^2 + f.
template <class F>
MatrixFactorization<F> knorrer_sharp(const MatrixFactorization<F>& mf, int b);

/// b -> 0 in every entry. When the result is block diagonal its two
/// diagonal factorizations are returned as well.
template <class F>
struct FlatResult {
  MatrixFactorization<F> whole;
  std::optional<std::pair<MatrixFactorization<F>, MatrixFactorization<F>>> parts;
};

template <class F>
FlatResult<F> knorrer_flat(const MatrixFactorization<F>& mf, int b);

/// (b 1 - phi, b 1 + phi) factorizing b^2 + g where phi^2 = -g 1.
template <class F>
MatrixFactorization<F> root_to_mf(const SeriesMatrix<F>& phi, int b);

template <class F>
bool check_equivalence(const MatrixFactorization<F>& mf1, const MatrixFactorization<F>& mf2,
                       const EquivalenceWitness<F>& w);

/// Permutation [[0, 1_b], [1_a, 0]] exchanging a block of size a and one of size b.
template <class F>
SeriesMatrix<F> block_swap(int a, int b, const Series<F>& one);

/// Entries of phi and psi; f written as sum_j phi_0j psi_j0, a sum of
/// products of two entries, so f lies in the square of their ideal.
template <class F>
struct IdealMembership {
  std::vector<Series<F>> generators;
  std::vector<std::pair<Series<F>, Series<F>>> products;
  bool verified;
};

template <class F>
IdealMembership<F> ideal_of_entries(const MatrixFactorization<F>& mf);

}  // namespace ade
