#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace psa {

// Exact arithmetic throughout the library. GMP keeps values canonical
// (positive denominator, reduced fraction).
using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "5", "-3", "5/2", "0.5", "1.25e1"-free decimal forms.
/// Returns nullopt on malformed input.
std::optional<Rational> rat_parse(const std::string& text);

/// Renders without loss: integers as "n", otherwise "n/d".
std::string rat_str(const Rational& q);

/// Decimal-friendly rendering for human output: exact if the denominator is
/// a product of 2s and 5s ("2.5"), else falls back to "n/d".
std::string rat_pretty(const Rational& q);

inline Rational rat(long n) { return Rational(n); }
inline Rational rat(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

}  // namespace psa
