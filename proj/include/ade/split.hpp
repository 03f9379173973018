#pragma once

#include <vector>

#include "ade/chart.hpp"
#include "ade/linalg.hpp"
#include "ade/series.hpp"

namespace ade {

/// P and D with P^T G P = D diagonal. Nonzero diagonal entries come first.
template <class F>
struct Diagonalization {
  Matrix<F> P;
  Matrix<F> D;
};

/// apply(change, f) = sum units[i] x_i^2 (i < rank) + residual, with the
/// residual in x_rank..x_{n-1} and of order >= 3 or zero.
template <class F>
struct SplitResult {
  int rank;
  std::vector<F> units;
  CoordinateChange<F> change;
  Series<F> residual;
};

/// Symmetric matrix of the quadratic part: x_i^2 on the diagonal, half of
/// the x_i x_j coefficient off it.
template <class F>
Matrix<F> gram_matrix(const Series<F>& f);

template <class F>
Diagonalization<F> diagonalize_symmetric(const Matrix<F>& G, const FieldOf<F>& field);

template <class F>
int corank(const Series<F>& f);

template <class F>
SplitResult<F> split(const Series<F>& f);

}  // namespace ade
