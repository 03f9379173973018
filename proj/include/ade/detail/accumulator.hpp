#pragma once

#include <cstdint>
#include <vector>

#include "ade/series.hpp"

namespace ade::detail {

/// Mixed-radix addressing of all monomials of degree <= N in n variables.
struct DenseLayout {
  int n = 0;
  int N = 0;
  std::size_t cells = 0;
  std::vector<std::uint32_t> radix_pow;
  std::vector<Monomial> graded;
  std::vector<std::uint32_t> graded_index;

  std::uint32_t index(const Monomial& m) const {
    std::uint32_t k = 0;
    for (int i = 0; i < n; ++i) k += static_cast<std::uint32_t>(m[i]) * radix_pow[i];
    return k;
  }
};

/// Cached layout, or nullptr when (N+1)^n exceeds max_cells.
const DenseLayout* dense_layout(int n, int N, std::size_t max_cells);

template <class F>
struct Cell;

// Lazy reduction: products of two residues below 2^31 fit in 62 bits, so a
// reduction is only needed once the running sum reaches bit 63.
template <>
struct Cell<Fp> {
  static constexpr std::size_t kMaxCells = std::size_t{1} << 22;
  std::uint64_t v = 0;
  void fma(const Fp& a, const Fp& b, std::uint32_t p) {
    v += static_cast<std::uint64_t>(a.residue()) * b.residue();
    if (v >> 63) v %= p;
  }
  bool take(std::uint32_t p, Fp& out) {
    std::uint64_t r = v % p;
    v = 0;
    if (r == 0) return false;
    out = Fp::from_residue(static_cast<std::uint32_t>(r), p);
    return true;
  }
};

template <>
struct Cell<Rational> {
  static constexpr std::size_t kMaxCells = std::size_t{1} << 18;
  mpq_class v;
  void fma(const Rational& a, const Rational& b, std::uint32_t) {
    if (a.value().get_den() == 1 && b.value().get_den() == 1 && v.get_den() == 1) {
      mpz_addmul(v.get_num_mpz_t(), a.value().get_num_mpz_t(), b.value().get_num_mpz_t());
    } else {
      v += a.value() * b.value();
    }
  }
  bool take(std::uint32_t, Rational& out) {
    v.canonicalize();
    if (sgn(v) == 0) return false;
    out = Rational(v);
    v = 0;
    return true;
  }
};

/// Per-thread pool of zeroed dense buffers so nested accumulators never
/// share storage.
template <class F>
class BufferPool {
 public:
  static std::vector<Cell<F>> acquire(std::size_t cells) {
    auto& pool = slots();
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (pool[i].size() >= cells) {
        std::vector<Cell<F>> out = std::move(pool[i]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
        return out;
      }
    return std::vector<Cell<F>>(cells);
  }
  static void release(std::vector<Cell<F>>&& buf) {
    auto& pool = slots();
    if (pool.size() < 8) pool.push_back(std::move(buf));
  }

 private:
  static std::vector<std::vector<Cell<F>>>& slots() {
    thread_local std::vector<std::vector<Cell<F>>> pool;
    return pool;
  }
};

/// Sums products and scaled series into one truncated result. Dense mode
/// uses a mixed-radix array; sparse mode collects terms and merges at the end.
template <class F>
class Accumulator {
 public:
  using Field = FieldOf<F>;

  Accumulator(const Field& field, int n, int N, std::size_t expected_terms)
      : field_(field), n_(n), N_(N), p_(field.characteristic()) {
    layout_ = dense_layout(n, N, Cell<F>::kMaxCells);
    if (layout_ && expected_terms * 4 < layout_->graded.size()) layout_ = nullptr;
    if (layout_) buf_ = BufferPool<F>::acquire(layout_->cells);
  }
  ~Accumulator() {
    if (layout_) BufferPool<F>::release(std::move(buf_));
  }
  Accumulator(const Accumulator&) = delete;
  Accumulator& operator=(const Accumulator&) = delete;

  struct Rows {
    std::vector<std::uint32_t> index;
    std::vector<int> degree;
  };

  Rows prepare(const Series<F>& b) const {
    Rows r;
    for (const auto& t : b.terms()) {
      r.degree.push_back(t.mono.degree());
      r.index.push_back(layout_ ? layout_->index(t.mono) : 0);
    }
    return r;
  }

  void add_row(const Term<F>& ta, const Series<F>& b, const Rows& rows) {
    int limit = N_ - ta.mono.degree();
    if (limit < 0) return;
    const auto& bt = b.terms();
    if (layout_) {
      Cell<F>* base = buf_.data() + layout_->index(ta.mono);
      for (std::size_t k = 0; k < bt.size() && rows.degree[k] <= limit; ++k)
        base[rows.index[k]].fma(ta.coef, bt[k].coef, p_);
    } else {
      for (std::size_t k = 0; k < bt.size() && rows.degree[k] <= limit; ++k)
        pending_.push_back({ta.mono * bt[k].mono, ta.coef * bt[k].coef});
    }
  }

  void add_product(const Series<F>& a, const Series<F>& b) {
    const Series<F>& small = a.size() <= b.size() ? a : b;
    const Series<F>& large = a.size() <= b.size() ? b : a;
    Rows rows = prepare(large);
    for (const auto& t : small.terms()) {
      if (t.mono.degree() > N_) break;
      add_row(t, large, rows);
    }
  }

  /// Adds c * shift * s.
  void add_scaled(const Series<F>& s, const F& c, const Monomial& shift) {
    int limit = N_ - shift.degree();
    for (const auto& t : s.terms()) {
      if (t.mono.degree() > limit) break;
      Monomial m = t.mono * shift;
      if (layout_)
        buf_[layout_->index(m)].fma(t.coef, c, p_);
      else
        pending_.push_back({m, t.coef * c});
    }
  }

  Series<F> finish() {
    std::vector<Term<F>> out;
    if (layout_) {
      F c = field_(0);
      const auto& g = layout_->graded;
      for (std::size_t k = 0; k < g.size(); ++k)
        if (buf_[layout_->graded_index[k]].take(p_, c)) out.push_back({g[k], c});
      return Series<F>::adopt(field_, n_, N_, std::move(out));
    }
    auto terms = std::move(pending_);
    pending_.clear();
    return Series<F>::from_terms(field_, n_, N_, std::move(terms));
  }

 private:
  Field field_;
  int n_;
  int N_;
  std::uint32_t p_;
  const DenseLayout* layout_ = nullptr;
  std::vector<Cell<F>> buf_;
  std::vector<Term<F>> pending_;
};

}  // namespace ade::detail
