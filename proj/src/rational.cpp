#include "psa/rational.hpp"

#include <cctype>

namespace psa {

std::optional<Rational> rat_parse(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::string s = text;
  bool neg = false;
  size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  std::string intpart, fracpart, denpart;
  std::string* cur = &intpart;
  bool seen_slash = false, seen_dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      cur->push_back(c);
    } else if (c == '.' && !seen_dot && !seen_slash) {
      seen_dot = true;
      cur = &fracpart;
    } else if (c == '/' && !seen_slash && !seen_dot) {
      seen_slash = true;
      cur = &denpart;
    } else {
      return std::nullopt;
    }
  }
  if (intpart.empty() && fracpart.empty()) return std::nullopt;
  Rational q;
  if (seen_slash) {
    if (denpart.empty() || intpart.empty()) return std::nullopt;
    Integer num(intpart), den(denpart);
    if (den == 0) return std::nullopt;
    q = Rational(num, den);
  } else {
    Integer num(intpart.empty() ? "0" : intpart);
    q = Rational(num);
    if (!fracpart.empty()) {
      Integer fnum(fracpart);
      Integer fden = 1;
      for (size_t k = 0; k < fracpart.size(); ++k) fden *= 10;
      q += Rational(fnum, fden);
    }
  }
  q.canonicalize();
  if (neg) q = -q;
  return q;
}

std::string rat_str(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string rat_pretty(const Rational& q) {
  Integer den = q.get_den();
  if (den == 1) return q.get_num().get_str();
  // exact decimal when den = 2^a * 5^b
  Integer d = den;
  int twos = 0, fives = 0;
  while (d % 2 == 0) { d /= 2; ++twos; }
  while (d % 5 == 0) { d /= 5; ++fives; }
  if (d != 1) return rat_str(q);
  int digits = std::max(twos, fives);
  Integer scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Integer scaled = q.get_num() * (scale / den);
  bool neg = scaled < 0;
  std::string body = abs(scaled).get_str();
  while (static_cast<int>(body.size()) <= digits) body.insert(body.begin(), '0');
  body.insert(body.end() - digits, '.');
  return (neg ? "-" : "") + body;
}

}  // namespace psa
