#pragma once

#include <cstdint>
#include <vector>

#include "ade/linalg.hpp"
#include "ade/series.hpp"

namespace ade {

/// An n-tuple of series in m whose linear part is invertible: a new system
/// of generators of the maximal ideal.
template <class F>
class CoordinateChange {
 public:
  using Field = FieldOf<F>;

  explicit CoordinateChange(std::vector<Series<F>> components);

  static CoordinateChange identity(const Field& field, int n, int N);

  const std::vector<Series<F>>& components() const { return c_; }
  const Series<F>& operator[](int i) const { return c_[i]; }
  int num_vars() const { return static_cast<int>(c_.size()); }
  int precision() const;
  const Field& field() const { return c_[0].field(); }
  Matrix<F> linear_part() const;

  friend bool operator==(const CoordinateChange& a, const CoordinateChange& b) { return a.c_ == b.c_; }

 private:
  std::vector<Series<F>> c_;
};

/// The unit factor of a certificate.
template <class F>
class UnitWitness {
 public:
  explicit UnitWitness(Series<F> unit) : u_(std::move(unit)) {
    if (!is_unit(u_)) throw Error(ErrorCode::NotUnit, "unit witness has zero constant term");
  }
  const Series<F>& unit() const { return u_; }

 private:
  Series<F> u_;
};

template <class F>
Series<F> apply(const CoordinateChange<F>& change, const Series<F>& f);

/// Component i of the result is outer_i(inner), so that
/// apply(compose(a, b), f) = apply(b, apply(a, f)).
template <class F>
CoordinateChange<F> compose(const CoordinateChange<F>& outer, const CoordinateChange<F>& inner);

template <class F>
CoordinateChange<F> inverse(const CoordinateChange<F>& change);

template <class F>
CoordinateChange<F> random_change(std::uint64_t seed, const FieldOf<F>& field, int n, int N, int max_extra_degree);

extern template class CoordinateChange<Fp>;
extern template class CoordinateChange<Rational>;

}  // namespace ade
