#include "ade/field.hpp"

#include <algorithm>
#include <numeric>

namespace ade {

std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MismatchedVars: return "mismatched_vars";
    case ErrorCode::PrecisionOutOfRange: return "precision_out_of_range";
    case ErrorCode::NotUnit: return "not_unit";
    case ErrorCode::RootNotInField: return "root_not_in_field";
    case ErrorCode::NotInMaximalIdeal: return "not_in_maximal_ideal";
    case ErrorCode::InvalidField: return "invalid_field";
    case ErrorCode::NotInvertible: return "not_invertible";
    case ErrorCode::OrderTooLow: return "order_too_low";
    case ErrorCode::ShapeMismatch: return "shape_mismatch";
    case ErrorCode::VariableCollision: return "variable_collision";
    case ErrorCode::NotAFactorization: return "not_a_factorization";
    case ErrorCode::CubicRootsNotInField: return "cubic_roots_not_in_field";
    case ErrorCode::UnsupportedVerdict: return "unsupported_verdict";
    case ErrorCode::SyntaxError: return "syntax_error";
    case ErrorCode::UnknownVariable: return "unknown_variable";
    case ErrorCode::DivisionByCharacteristic: return "division_by_characteristic";
    case ErrorCode::CertificateMismatch: return "certificate mismatch";
    case ErrorCode::SearchLimit: return "search_limit";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// ---------------------------------------------------------------- Fp

Fp::Fp(std::int64_t value, std::uint32_t modulus) : p_(modulus) {
  std::int64_t r = value % static_cast<std::int64_t>(modulus);
  if (r < 0) r += modulus;
  v_ = static_cast<std::uint32_t>(r);
}

Fp Fp::inverse() const {
  if (v_ == 0) throw Error(ErrorCode::NotInvertible, "inverse of zero in F_p");
  std::int64_t a = v_, b = p_, x0 = 1, x1 = 0;
  while (b != 0) {
    std::int64_t q = a / b;
    std::tie(a, b) = std::make_pair(b, a - q * b);
    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
  }
  return Fp(x0, p_);
}

Fp Fp::pow(std::uint64_t e) const {
  Fp base = *this, acc = from_residue(1 % p_, p_);
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

// ---------------------------------------------------------------- Rational

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw Error(ErrorCode::NotInvertible, "zero denominator");
  v_ = mpq_class(mpz_class(static_cast<long>(n)), mpz_class(static_cast<long>(d)));
  v_.canonicalize();
}

Rational Rational::inverse() const {
  if (is_zero()) throw Error(ErrorCode::NotInvertible, "inverse of zero rational");
  return Rational(mpq_class(1 / v_), Canonical{});
}

Rational Rational::pow(std::uint64_t e) const {
  mpq_class acc = 1, base = v_;
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return Rational(acc, Canonical{});
}

// ---------------------------------------------------------------- PrimeField

PrimeField::PrimeField(std::int64_t p) {
  if (p == 2)
    throw Error(ErrorCode::InvalidField,
                "characteristic 2 is excluded: the classification assumes char != 2");
  if (p < 3 || p >= (std::int64_t{1} << 31) || !is_prime(static_cast<std::uint64_t>(p)))
    throw Error(ErrorCode::InvalidField, "fp:<p> needs an odd prime p < 2^31, got " + std::to_string(p));
  p_ = static_cast<std::uint32_t>(p);
}

Fp PrimeField::from_integer(const mpz_class& n) const {
  mpz_class r = n % p_;
  if (r < 0) r += p_;
  return Fp::from_residue(static_cast<std::uint32_t>(r.get_ui()), p_);
}

Fp PrimeField::ratio(const mpz_class& num, const mpz_class& den) const {
  Fp d = from_integer(den);
  if (d.is_zero())
    throw Error(ErrorCode::DivisionByCharacteristic,
                "denominator " + den.get_str() + " vanishes in " + name());
  return from_integer(num) * d.inverse();
}

bool PrimeField::is_square(Fp a) const {
  if (a.is_zero()) return true;
  return a.pow((p_ - 1) / 2).is_one();
}

std::optional<Fp> PrimeField::sqrt(Fp a) const {
  auto roots = kth_roots(a, 2);
  if (roots.empty()) return std::nullopt;
  return roots.front();
}

namespace {

std::vector<unsigned> prime_factors(unsigned k) {
  std::vector<unsigned> out;
  for (unsigned d = 2; d * d <= k; ++d)
    while (k % d == 0) {
      out.push_back(d);
      k /= d;
    }
  if (k > 1) out.push_back(k);
  return out;
}

}  // namespace

// One solution of t^r = a for prime r (Adleman-Manders-Miller with a
// Pohlig-Hellman logarithm in the r-Sylow subgroup).
std::optional<Fp> PrimeField::one_prime_root(Fp a, unsigned r) const {
  if (a.is_zero()) return a;
  std::uint64_t order = p_ - 1;
  if (order % r != 0) {
    // r is invertible modulo p-1
    mpz_class inv;
    mpz_class rr(r), mod(static_cast<unsigned long>(order));
    mpz_invert(inv.get_mpz_t(), rr.get_mpz_t(), mod.get_mpz_t());
    return a.pow(inv.get_ui());
  }
  if (!a.pow(order / r).is_one()) return std::nullopt;
  unsigned s = 0;
  std::uint64_t t = order;
  while (t % r == 0) {
    t /= r;
    ++s;
  }
  Fp c = (*this)(2);
  while (c.pow(order / r).is_one()) c = c + (*this)(1);
  Fp gamma = c.pow(t);  // generates the r-Sylow subgroup, order r^s
  std::uint64_t u = 0;
  if (t > 1) {
    mpz_class inv, rr(r), mod(static_cast<unsigned long>(t));
    mpz_invert(inv.get_mpz_t(), rr.get_mpz_t(), mod.get_mpz_t());
    u = inv.get_ui();
  }
  Fp x0 = a.pow(u);
  Fp target = a / x0.pow(r);  // want y in the Sylow subgroup with y^r = target
  std::uint64_t rs1 = 1;
  for (unsigned i = 0; i + 1 < s; ++i) rs1 *= r;
  Fp zeta = gamma.pow(rs1);  // order r
  std::uint64_t log = 0, ri = 1;
  for (unsigned i = 0; i < s; ++i) {
    std::uint64_t e = 1;
    for (unsigned j = 0; j + 1 + i < s; ++j) e *= r;
    Fp h = (target / gamma.pow(log)).pow(e);
    unsigned d = 0;
    Fp z = (*this)(1);
    while (!(z == h)) {
      z *= zeta;
      if (++d >= r) return std::nullopt;
    }
    log += d * ri;
    ri *= r;
  }
  if (log % r != 0) return std::nullopt;
  return x0 * gamma.pow(log / r);
}

std::vector<Fp> PrimeField::kth_roots(Fp a, unsigned k) const {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "0-th root");
  std::vector<Fp> current{a};
  for (unsigned r : prime_factors(k)) {
    std::vector<Fp> next;
    for (Fp b : current) {
      auto root = one_prime_root(b, r);
      if (!root) continue;
      if (b.is_zero() || (p_ - 1) % r != 0) {
        next.push_back(*root);
        continue;
      }
      // multiply through the r-th roots of unity
      Fp c = (*this)(2);
      while (c.pow((p_ - 1) / r).is_one()) c = c + (*this)(1);
      Fp zeta = c.pow((p_ - 1) / r);
      Fp z = *root;
      for (unsigned j = 0; j < r; ++j) {
        next.push_back(z);
        z *= zeta;
      }
    }
    current = std::move(next);
  }
  std::sort(current.begin(), current.end(),
            [](Fp x, Fp y) { return x.residue() < y.residue(); });
  current.erase(std::unique(current.begin(), current.end()), current.end());
  return current;
}

std::vector<Fp> PrimeField::poly_roots(const std::vector<Fp>& coeffs) const {
  if (p_ > (1u << 22))
    throw Error(ErrorCode::SearchLimit, "exhaustive root search skipped for large p");
  std::vector<Fp> roots;
  for (std::uint32_t t = 0; t < p_; ++t) {
    Fp x = Fp::from_residue(t, p_), acc = (*this)(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    if (acc.is_zero()) roots.push_back(x);
  }
  return roots;
}

Fp PrimeField::random(std::mt19937_64& rng) const {
  return Fp::from_residue(static_cast<std::uint32_t>(rng() % p_), p_);
}

Fp PrimeField::random_nonzero(std::mt19937_64& rng) const {
  return Fp::from_residue(static_cast<std::uint32_t>(1 + rng() % (p_ - 1)), p_);
}

// ---------------------------------------------------------------- RationalField

Rational RationalField::ratio(const mpz_class& num, const mpz_class& den) const {
  if (den == 0) throw Error(ErrorCode::DivisionByCharacteristic, "division by zero");
  return Rational(mpq_class(num, den));
}

namespace {

std::optional<mpz_class> exact_root(const mpz_class& n, unsigned k) {
  if (n < 0) return std::nullopt;
  mpz_class r;
  if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) == 0) return std::nullopt;
  return r;
}

}  // namespace

std::optional<Rational> RationalField::sqrt(const Rational& a) const {
  auto roots = kth_roots(a, 2);
  if (roots.empty()) return std::nullopt;
  return roots.back();  // the non-negative one
}

std::vector<Rational> RationalField::kth_roots(const Rational& a, unsigned k) const {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "0-th root");
  if (a.is_zero()) return {a};
  const mpq_class& q = a.value();
  bool negative = sgn(q) < 0;
  if (negative && k % 2 == 0) return {};
  mpz_class num = abs(q.get_num());
  auto rn = exact_root(num, k);
  auto rd = exact_root(q.get_den(), k);
  if (!rn || !rd) return {};
  mpq_class root(*rn, *rd);
  root.canonicalize();
  if (negative) return {Rational(mpq_class(-root))};
  if (k % 2 == 0) return {Rational(mpq_class(-root)), Rational(root)};
  return {Rational(root)};
}

namespace {

// Divisors of |n| (n != 0); throws SearchLimit when n cannot be factored by
// trial division up to 10^6 with a probable-prime cofactor.
std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<std::pair<mpz_class, unsigned>> fac;
  for (unsigned long d = 2; d < 1000000 && mpz_class(d) * d <= n; ++d) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
      unsigned e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
        n /= d;
        ++e;
      }
      fac.emplace_back(mpz_class(d), e);
    }
  }
  if (n > 1) {
    if (mpz_class(1000000) * 1000000 > n || mpz_probab_prime_p(n.get_mpz_t(), 30))
      fac.emplace_back(n, 1);
    else
      throw Error(ErrorCode::SearchLimit, "coefficient too large for the rational root test");
  }
  std::vector<mpz_class> out{1};
  for (auto& [p, e] : fac) {
    std::size_t m = out.size();
    mpz_class pk = 1;
    for (unsigned i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < m; ++j) out.push_back(out[j] * pk);
    }
  }
  return out;
}

}  // namespace

std::vector<Rational> RationalField::poly_roots(const std::vector<Rational>& coeffs) const {
  std::vector<mpq_class> c;
  for (auto& x : coeffs) c.push_back(x.value());
  while (!c.empty() && c.back() == 0) c.pop_back();
  std::vector<Rational> roots;
  if (c.size() <= 1) return roots;
  std::size_t low = 0;
  while (c[low] == 0) ++low;
  if (low > 0) roots.push_back(Rational(0));
  mpz_class l = 1;
  for (auto& x : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
  std::vector<mpz_class> ic;
  for (std::size_t i = low; i < c.size(); ++i) ic.push_back(mpz_class(c[i] * l));
  if (ic.size() > 1) {
    auto ps = divisors(ic.front());
    auto qs = divisors(ic.back());
    std::vector<mpq_class> found;
    for (auto& p : ps)
      for (auto& q : qs)
        for (int sign : {1, -1}) {
          mpq_class t(sign * p, q);
          t.canonicalize();
          mpq_class acc = 0;
          for (auto it = ic.rbegin(); it != ic.rend(); ++it) acc = acc * t + *it;
          if (acc == 0 && std::find(found.begin(), found.end(), t) == found.end()) found.push_back(t);
        }
    for (auto& t : found) roots.push_back(Rational(t));
  }
  std::sort(roots.begin(), roots.end(),
            [](const Rational& a, const Rational& b) { return a.value() < b.value(); });
  return roots;
}

Rational RationalField::element(std::uint64_t i) const { return Rational(static_cast<std::int64_t>(i)); }

Rational RationalField::random(std::mt19937_64& rng) const {
  std::int64_t num = static_cast<std::int64_t>(rng() % 19) - 9;
  std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 4);
  return Rational(num, den);
}

Rational RationalField::random_nonzero(std::mt19937_64& rng) const {
  for (;;) {
    Rational r = random(rng);
    if (!r.is_zero()) return r;
  }
}

// ---------------------------------------------------------------- FieldSpec

FieldSpec FieldSpec::parse(const std::string& text) {
  FieldSpec spec;
  if (text == "q" || text == "Q") return spec;
  if (text.rfind("fp:", 0) == 0) {
    std::string digits = text.substr(3);
    if (digits.empty() || digits.size() > 12 ||
        !std::all_of(digits.begin(), digits.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
      throw Error(ErrorCode::InvalidField, "malformed prime in field '" + text + "'");
    PrimeField check(std::stoll(digits));
    spec.characteristic = check.characteristic();
    return spec;
  }
  throw Error(ErrorCode::InvalidField, "field must be 'q' or 'fp:<p>', got '" + text + "'");
}

std::string FieldSpec::name() const {
  return characteristic == 0 ? "q" : "fp:" + std::to_string(characteristic);
}

void validate(const FieldSpec& spec) {
  if (spec.characteristic != 0) PrimeField check(spec.characteristic);
}

std::string format_scalar(const Fp& a) { return std::to_string(a.symmetric()); }

std::string format_scalar(const Rational& a) { return a.value().get_str(); }

}  // namespace ade
