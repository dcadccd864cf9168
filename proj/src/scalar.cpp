#include "hofent/scalar.hpp"

#include <cctype>

#include "hofent/error.hpp"

namespace hofent {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw FormatError("empty rational literal");

  auto dot = s.find('.');
  auto exp = s.find_first_of("eE");
  if (exp != std::string::npos) throw FormatError("exponent notation not accepted: " + s);
  try {
    if (dot == std::string::npos) {
      Rational q(s, 10);
      if (q.get_den() == 0) throw FormatError("zero denominator: " + s);
      q.canonicalize();
      return q;
    }
    bool negative = !s.empty() && s[0] == '-';
    std::string digits = s.substr(negative ? 1 : 0);
    dot = digits.find('.');
    std::string whole = digits.substr(0, dot);
    std::string frac = digits.substr(dot + 1);
    if (whole.empty()) whole = "0";
    for (char c : whole + frac)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw FormatError("bad decimal: " + s);
    BigInt num(whole + frac, 10);
    BigInt den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational q(num, den);
    q.canonicalize();
    return negative ? Rational(-q) : q;
  } catch (const std::invalid_argument&) {
    throw FormatError("bad rational literal: " + s);
  }
}

std::string to_string(const Rational& q) { return q.get_str(10); }

double log_bigint(const BigInt& n) {
  if (sgn(n) <= 0) return -INFINITY;
  long exponent = 0;
  double mantissa = mpz_get_d_2exp(&exponent, n.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

}  // namespace hofent
