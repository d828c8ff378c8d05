#include "ctx/rational.hpp"

#include <cctype>

#include "ctx/error.hpp"

namespace ctx {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(const std::string& s) {
  std::string body = s;
  bool neg = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    neg = body[0] == '-';
    body = body.substr(1);
  }
  if (!all_digits(body)) throw DataError("malformed number: '" + s + "'");
  Integer z(body, 10);
  return neg ? Integer(-z) : z;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw DataError("empty number");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Integer num = parse_integer(s.substr(0, slash));
    std::string den_s = s.substr(slash + 1);
    if (!all_digits(den_s)) throw DataError("malformed denominator: '" + text + "'");
    Integer den(den_s, 10);
    if (den == 0) throw DataError("zero denominator: '" + text + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  // decimal with optional exponent
  std::string mant = s;
  long exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    mant = s.substr(0, epos);
    exp10 = parse_integer(s.substr(epos + 1)).get_si();
  }
  auto dot = mant.find('.');
  if (dot != std::string::npos) {
    std::string frac = mant.substr(dot + 1);
    mant = mant.substr(0, dot) + frac;
    exp10 -= static_cast<long>(frac.size());
    if (mant == "" || mant == "-" || mant == "+") throw DataError("malformed number: '" + text + "'");
  }
  Rational q(parse_integer(mant));
  Integer p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 < 0)
    q /= p10;
  else
    q *= p10;
  q.canonicalize();
  return q;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw DataError("non-finite number");
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Integer gcd_of(const std::vector<Integer>& v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

Integer lcm_of_denominators(const std::vector<Rational>& v) {
  Integer l = 1;
  for (const auto& x : v) l = lcm(l, x.get_den());
  return l;
}

}  // namespace ctx
