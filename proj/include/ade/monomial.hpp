#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ade {

/// Exponent vector packed into two words: byte 0 holds the total degree,
/// byte i+1 the exponent of variable i. Comparing the words compares by
/// degree first, then lexicographically by exponents, and adding the words
/// multiplies monomials as long as no byte overflows.
class Monomial {
 public:
  static constexpr int kMaxVars = 15;
  static constexpr int kMaxDegree = 127;

  Monomial() = default;

  static Monomial from_exponents(std::span<const int> exps);
  static Monomial variable(int i, int power = 1) {
    Monomial m;
    m.set(i, power);
    return m;
  }

  int degree() const { return static_cast<int>(hi_ >> 56); }
  int operator[](int i) const { return byte(i + 1); }
  void set(int i, int e);

  std::vector<int> exponents(int n) const {
    std::vector<int> out(n);
    for (int i = 0; i < n; ++i) out[i] = (*this)[i];
    return out;
  }

  bool divides(const Monomial& other) const;
  /// Quotient other/this; requires divides(other).
  Monomial cofactor(const Monomial& other) const { return Monomial(other.hi_ - hi_, other.lo_ - lo_); }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    return Monomial(a.hi_ + b.hi_, a.lo_ + b.lo_);
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend auto operator<=>(const Monomial&, const Monomial&) = default;

  std::size_t hash() const { return std::hash<std::uint64_t>{}(hi_ * 0x9E3779B97F4A7C15ull ^ lo_); }

 private:
  Monomial(std::uint64_t hi, std::uint64_t lo) : hi_(hi), lo_(lo) {}

  int byte(int k) const {
    return k < 8 ? static_cast<int>((hi_ >> (8 * (7 - k))) & 0xff)
                 : static_cast<int>((lo_ >> (8 * (15 - k))) & 0xff);
  }

  std::uint64_t hi_ = 0;
  std::uint64_t lo_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

}  // namespace ade
