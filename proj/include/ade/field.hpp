#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ade/error.hpp"

namespace ade {

/// Element of the prime field F_p. The modulus travels with the value so
/// that scalars can be combined without a field handle.
class Fp {
 public:
  Fp() = default;
  Fp(std::int64_t value, std::uint32_t modulus);

  static Fp from_residue(std::uint32_t residue, std::uint32_t modulus) {
    Fp r;
    r.v_ = residue;
    r.p_ = modulus;
    return r;
  }

  std::uint32_t residue() const { return v_; }
  std::uint32_t modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  /// Representative in (-p/2, p/2].
  std::int64_t symmetric() const {
    return v_ > p_ / 2 ? static_cast<std::int64_t>(v_) - p_ : v_;
  }

  Fp inverse() const;
  Fp pow(std::uint64_t e) const;

  friend Fp operator+(Fp a, Fp b) {
    std::uint32_t p = a.p_ ? a.p_ : b.p_;
    std::uint32_t s = a.v_ + b.v_;
    if (s >= p) s -= p;
    return from_residue(s, p);
  }
  friend Fp operator-(Fp a, Fp b) {
    std::uint32_t p = a.p_ ? a.p_ : b.p_;
    std::uint32_t s = a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + p - b.v_;
    return from_residue(s, p);
  }
  friend Fp operator*(Fp a, Fp b) {
    std::uint32_t p = a.p_ ? a.p_ : b.p_;
    return from_residue(
        static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.v_) * b.v_ % p), p);
  }
  friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }
  Fp operator-() const { return from_residue(v_ == 0 ? 0 : p_ - v_, p_); }
  Fp& operator+=(Fp b) { return *this = *this + b; }
  Fp& operator-=(Fp b) { return *this = *this - b; }
  Fp& operator*=(Fp b) { return *this = *this * b; }
  friend bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }

 private:
  std::uint32_t v_ = 0;
  std::uint32_t p_ = 0;
};

/// Exact rational number.
class Rational {
 public:
  Rational() = default;
  explicit Rational(std::int64_t n) : v_(static_cast<long>(n)) {}
  Rational(std::int64_t n, std::int64_t d);
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  const mpq_class& value() const { return v_; }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }

  Rational inverse() const;
  Rational pow(std::uint64_t e) const;

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_), Canonical{}); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_), Canonical{}); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_), Canonical{}); }
  friend Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }
  Rational operator-() const { return Rational(mpq_class(-v_), Canonical{}); }
  Rational& operator+=(const Rational& b) { v_ += b.v_; return *this; }
  Rational& operator-=(const Rational& b) { v_ -= b.v_; return *this; }
  Rational& operator*=(const Rational& b) { v_ *= b.v_; return *this; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }

 private:
  // results of mpq arithmetic are already canonical
  struct Canonical {};
  Rational(mpq_class v, Canonical) : v_(std::move(v)) {}
  mpq_class v_;
};

/// The prime field F_p for an odd prime p < 2^31.
class PrimeField {
 public:
  using Scalar = Fp;

  explicit PrimeField(std::int64_t p);

  std::uint32_t characteristic() const { return p_; }
  std::string name() const { return "fp:" + std::to_string(p_); }

  Fp operator()(std::int64_t n) const { return Fp(n, p_); }
  Fp from_integer(const mpz_class& n) const;
  /// num/den reduced mod p; throws DivisionByCharacteristic if p divides den.
  Fp ratio(const mpz_class& num, const mpz_class& den) const;

  bool is_square(Fp a) const;
  std::optional<Fp> sqrt(Fp a) const;
  /// All solutions of t^k = a, sorted by residue.
  std::vector<Fp> kth_roots(Fp a, unsigned k) const;
  /// All roots of sum coeffs[i] t^i, by exhaustive search.
  std::vector<Fp> poly_roots(const std::vector<Fp>& coeffs) const;

  bool finite() const { return true; }
  std::uint64_t size() const { return p_; }
  Fp element(std::uint64_t i) const { return Fp::from_residue(static_cast<std::uint32_t>(i), p_); }

  Fp random(std::mt19937_64& rng) const;
  Fp random_nonzero(std::mt19937_64& rng) const;

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  std::optional<Fp> one_prime_root(Fp a, unsigned r) const;
  std::uint32_t p_;
};

/// The field of rationals.
class RationalField {
 public:
  using Scalar = Rational;

  RationalField() = default;

  std::uint32_t characteristic() const { return 0; }
  std::string name() const { return "q"; }

  Rational operator()(std::int64_t n) const { return Rational(n); }
  Rational from_integer(const mpz_class& n) const { return Rational(mpq_class(n)); }
  Rational ratio(const mpz_class& num, const mpz_class& den) const;

  bool is_square(const Rational& a) const { return sqrt(a).has_value(); }
  std::optional<Rational> sqrt(const Rational& a) const;
  /// Rational solutions of t^k = a, ascending.
  std::vector<Rational> kth_roots(const Rational& a, unsigned k) const;
  /// Rational roots via the rational root test.
  std::vector<Rational> poly_roots(const std::vector<Rational>& coeffs) const;

  bool finite() const { return false; }
  std::uint64_t size() const { return 0; }
  Rational element(std::uint64_t i) const;

  Rational random(std::mt19937_64& rng) const;
  Rational random_nonzero(std::mt19937_64& rng) const;

  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

template <class F>
struct field_for;
template <>
struct field_for<Fp> {
  using type = PrimeField;
};
template <>
struct field_for<Rational> {
  using type = RationalField;
};
template <class F>
using FieldOf = typename field_for<F>::type;

/// Field as named on the command line and in the library contract.
struct FieldSpec {
  std::uint32_t characteristic = 0;
  bool algebraically_closed_assumed = false;

  /// Parses "q" or "fp:<p>"; rejects p = 2 and non-primes.
  static FieldSpec parse(const std::string& text);
  std::string name() const;
};

void validate(const FieldSpec& spec);

std::string format_scalar(const Fp& a);
std::string format_scalar(const Rational& a);

bool is_prime(std::uint64_t n);

}  // namespace ade
