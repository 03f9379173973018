#include "ade/monomial.hpp"

#include "ade/error.hpp"

namespace ade {

Monomial Monomial::from_exponents(std::span<const int> exps) {
  if (static_cast<int>(exps.size()) > kMaxVars)
    throw Error(ErrorCode::InvalidArgument, "at most 15 variables are supported");
  Monomial m;
  for (std::size_t i = 0; i < exps.size(); ++i) m.set(static_cast<int>(i), exps[i]);
  return m;
}

void Monomial::set(int i, int e) {
  if (i < 0 || i >= kMaxVars) throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  if (e < 0 || e > kMaxDegree) throw Error(ErrorCode::PrecisionOutOfRange, "exponent out of range");
  int old = (*this)[i];
  int deg = degree() - old + e;
  if (deg > kMaxDegree) throw Error(ErrorCode::PrecisionOutOfRange, "monomial degree exceeds 127");
  int k = i + 1;
  if (k < 8) {
    int shift = 8 * (7 - k);
    hi_ = (hi_ & ~(std::uint64_t{0xff} << shift)) | (static_cast<std::uint64_t>(e) << shift);
  } else {
    int shift = 8 * (15 - k);
    lo_ = (lo_ & ~(std::uint64_t{0xff} << shift)) | (static_cast<std::uint64_t>(e) << shift);
  }
  hi_ = (hi_ & ~(std::uint64_t{0xff} << 56)) | (static_cast<std::uint64_t>(deg) << 56);
}

bool Monomial::divides(const Monomial& other) const {
  for (int k = 0; k < 16; ++k)
    if (byte(k) > other.byte(k)) return false;
  return true;
}

}  // namespace ade
