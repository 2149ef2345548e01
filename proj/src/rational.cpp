#include "owen/rational.hpp"

#include <cctype>

#include "owen/errors.hpp"

namespace owen {

namespace {

bool is_integer_text(std::string_view s) {
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_text(num) || !is_integer_text(den) || den[0] == '-' ||
      den[0] == '+')
    throw ParseError("not a rational: '" + std::string(text) + "'");
  std::string n(num), d(den);
  if (n[0] == '+') n.erase(0, 1);
  mpz_class zn(n, 10), zd(d, 10);
  if (zd == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
  Rational r(zn, zd);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(); }

std::string to_decimal(const Rational& value, int places) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
  mpz_class num = value.get_num() * scale;
  mpz_class den = value.get_den();
  bool negative = num < 0;
  if (negative) num = -num;
  // round half away from zero
  mpz_class q = (2 * num + den) / (2 * den);
  std::string digits = q.get_str();
  if (static_cast<int>(digits.size()) <= places)
    digits.insert(0, places + 1 - digits.size(), '0');
  std::string out = digits.substr(0, digits.size() - places);
  if (places > 0) out += "." + digits.substr(digits.size() - places);
  if (negative && q != 0) out.insert(0, "-");
  return out;
}

Rational sum(std::span<const Rational> values) {
  Rational total = 0;
  for (const Rational& v : values) total += v;
  return total;
}

}  // namespace owen
