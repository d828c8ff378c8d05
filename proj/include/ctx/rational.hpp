#pragma once
#include <gmpxx.h>

#include <cmath>
#include <string>
#include <vector>

namespace ctx {

using Rational = mpq_class;
using Integer = mpz_class;

// "p/q", "p", or a decimal literal such as "-0.25"; decimals are read exactly.
Rational parse_rational(const std::string& text);
// Exact value of a binary double (no rounding).
Rational rational_from_double(double x);
std::string to_string(const Rational& q);

Integer gcd_of(const std::vector<Integer>& v);
Integer lcm_of_denominators(const std::vector<Rational>& v);

// Tolerance-aware comparisons so model code can be written once for both number kinds.
template <class T>
struct NumTraits;

template <>
struct NumTraits<Rational> {
  static constexpr bool exact = true;
  static bool is_negative(const Rational& x) { return sgn(x) < 0; }
  static bool equal(const Rational& a, const Rational& b) { return a == b; }
  static double to_double(const Rational& x) { return x.get_d(); }
  static Rational clamp(const Rational& x) { return x; }
};

template <>
struct NumTraits<double> {
  static constexpr bool exact = false;
  static constexpr double tol = 1e-12;
  static bool is_negative(double x) { return x < -tol; }
  static bool equal(double a, double b) { return std::abs(a - b) <= tol; }
  static double to_double(double x) { return x; }
  static double clamp(double x) { return x < 0 && x >= -tol ? 0.0 : x; }
};

}  // namespace ctx
