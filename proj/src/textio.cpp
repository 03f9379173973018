#include "ade/textio.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace ade {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool ident_rest(char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '_'; }

template <class F>
class Parser {
 public:
  using Poly = std::map<Monomial, F>;

  Parser(const std::string& text, const std::vector<std::string>& vars, const FieldOf<F>& field)
      : s_(text), vars_(vars), K_(field) {}

  Poly run() {
    skip();
    if (pos_ == s_.size()) fail("empty polynomial");
    Poly p = expr();
    skip();
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::SyntaxError, what + " at position " + std::to_string(pos_), pos_);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  Poly constant(const F& c) {
    Poly p;
    if (!c.is_zero()) p[Monomial()] = c;
    return p;
  }

  void add_into(Poly& acc, const Poly& b, bool negate) {
    for (const auto& [m, c] : b) {
      auto it = acc.find(m);
      F v = negate ? -c : c;
      if (it == acc.end()) {
        acc.emplace(m, v);
      } else {
        it->second += v;
        if (it->second.is_zero()) acc.erase(it);
      }
    }
  }

  Poly mul(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ma, ca] : a)
      for (const auto& [mb, cb] : b) {
        if (ma.degree() + mb.degree() > Monomial::kMaxDegree)
          throw Error(ErrorCode::PrecisionOutOfRange, "expanded degree exceeds 127", pos_);
        add_into(r, Poly{{ma * mb, ca * cb}}, false);
      }
    return r;
  }

  Poly expr() {
    Poly acc;
    bool neg = false;
    if (peek('+') || peek('-')) neg = s_[pos_++] == '-';
    add_into(acc, term(), neg);
    while (peek('+') || peek('-')) {
      neg = s_[pos_++] == '-';
      add_into(acc, term(), neg);
    }
    return acc;
  }

  bool factor_starts() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return c == '(' || ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
  }

  Poly term() {
    Poly p = factor();
    for (;;) {
      if (peek('*')) {
        ++pos_;
        p = mul(p, factor());
      } else if (factor_starts()) {
        p = mul(p, factor());
      } else {
        return p;
      }
    }
  }

  Poly factor() {
    Poly base = primary();
    if (!peek('^')) return base;
    ++pos_;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an exponent");
    if (pos_ - start > 3) fail("exponent too large");
    int e = std::stoi(s_.substr(start, pos_ - start));
    Poly r = constant(K_(1));
    for (int i = 0; i < e; ++i) r = mul(r, base);
    return r;
  }

  mpz_class integer() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return mpz_class(s_.substr(start, pos_ - start));
  }

  Poly primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t at = pos_;
      mpz_class num = integer(), den = 1;
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected a denominator");
        den = integer();
      }
      try {
        return constant(K_.ratio(num, den));
      } catch (const Error& e) {
        throw Error(e.code(), e.what(), at);
      }
    }
    if (ident_start(c)) {
      std::size_t start = pos_++;
      while (pos_ < s_.size() && ident_rest(s_[pos_])) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      auto it = std::find(vars_.begin(), vars_.end(), name);
      if (it == vars_.end()) throw Error(ErrorCode::UnknownVariable, "unknown variable '" + name + "'", start);
      Poly p;
      p[Monomial::variable(static_cast<int>(it - vars_.begin()))] = K_(1);
      return p;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  const FieldOf<F>& K_;
  std::size_t pos_ = 0;
};

std::string coefficient_text(const Fp& a, bool& negative) {
  std::int64_t v = a.symmetric();
  negative = v < 0;
  return std::to_string(negative ? -v : v);
}

std::string coefficient_text(const Rational& a, bool& negative) {
  negative = sgn(a.value()) < 0;
  mpq_class v = abs(a.value());
  return v.get_str();
}

}  // namespace

template <class F>
ParsedSeries<F> parse_polynomial(const std::string& text, const std::vector<std::string>& vars,
                                 const FieldOf<F>& field, int N) {
  auto p = Parser<F>(text, vars, field).run();
  std::vector<Term<F>> terms;
  int dropped = 0;
  for (auto& [m, c] : p) {
    if (m.degree() > N)
      ++dropped;
    else
      terms.push_back({m, c});
  }
  return {Series<F>::from_terms(field, static_cast<int>(vars.size()), N, std::move(terms)), dropped};
}

template <class F>
std::string render(const Series<F>& f, const std::vector<std::string>& vars) {
  if (static_cast<int>(vars.size()) < f.num_vars())
    throw Error(ErrorCode::MismatchedVars, "not enough variable names to render");
  if (f.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& t : f.terms()) {
    bool negative;
    std::string c = coefficient_text(t.coef, negative);
    if (first)
      out << (negative ? "-" : "");
    else
      out << (negative ? " - " : " + ");
    first = false;
    bool need_star = false;
    if (c != "1" || t.mono.degree() == 0) {
      out << c;
      need_star = true;
    }
    for (int i = 0; i < f.num_vars(); ++i) {
      int e = t.mono[i];
      if (e == 0) continue;
      if (need_star) out << '*';
      out << vars[i];
      if (e > 1) out << '^' << e;
      need_star = true;
    }
  }
  return out.str();
}

std::vector<std::string> detect_variables(const std::string& text) {
  std::set<std::string> names;
  for (std::size_t i = 0; i < text.size();) {
    if (ident_start(text[i])) {
      std::size_t j = i + 1;
      while (j < text.size() && ident_rest(text[j])) ++j;
      names.insert(text.substr(i, j - i));
      i = j;
    } else {
      ++i;
    }
  }
  return {names.begin(), names.end()};
}

std::vector<std::string> parse_variable_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
               item.end());
    if (item.empty() || !ident_start(item[0]) || !std::all_of(item.begin() + 1, item.end(), ident_rest))
      throw Error(ErrorCode::InvalidArgument, "bad variable name '" + item + "'");
    if (std::find(out.begin(), out.end(), item) != out.end())
      throw Error(ErrorCode::InvalidArgument, "variable '" + item + "' listed twice");
    out.push_back(item);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no variables given");
  if (static_cast<int>(out.size()) > Monomial::kMaxVars)
    throw Error(ErrorCode::InvalidArgument, "at most 15 variables are supported");
  return out;
}

template ParsedSeries<Fp> parse_polynomial<Fp>(const std::string&, const std::vector<std::string>&, const PrimeField&,
                                               int);
template ParsedSeries<Rational> parse_polynomial<Rational>(const std::string&, const std::vector<std::string>&,
                                                           const RationalField&, int);
template std::string render(const Series<Fp>&, const std::vector<std::string>&);
template std::string render(const Series<Rational>&, const std::vector<std::string>&);

}  // namespace ade
