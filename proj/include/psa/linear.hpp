#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "psa/rational.hpp"
#include "psa/vars.hpp"

namespace psa {

enum class Rel { Eq, Le, Lt };  // term = 0, term <= 0, term < 0

/// Small linear-expression builder used when assembling guards and
/// invariants: lin(x) - lin(y) + 3 etc. Terms are rational; the constraint
/// constructor normalizes to coprime integers.
struct LinExpr {
  std::map<uint32_t, Rational> terms;
  Rational constant = 0;

  LinExpr() = default;
  explicit LinExpr(const Rational& c) : constant(c) {}

  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
};

inline LinExpr lin(VarId v) {
  LinExpr e;
  e.terms[v.index] = 1;
  return e;
}
inline LinExpr lin(const Rational& c) { return LinExpr(c); }
inline LinExpr lin(long c) { return LinExpr(Rational(c)); }

/// A normalized linear constraint  sum(coeffs[i] * x_i) + constant REL 0
/// with integer, globally coprime coefficients. Eq constraints additionally
/// fix the sign of the leading nonzero coefficient to be positive.
class LinearConstraint {
 public:
  LinearConstraint(uint32_t dims, const LinExpr& lhs, Rel rel);
  static LinearConstraint le(uint32_t dims, const LinExpr& a, const LinExpr& b) {
    return LinearConstraint(dims, a - b, Rel::Le);
  }
  static LinearConstraint lt(uint32_t dims, const LinExpr& a, const LinExpr& b) {
    return LinearConstraint(dims, a - b, Rel::Lt);
  }
  static LinearConstraint ge(uint32_t dims, const LinExpr& a, const LinExpr& b) {
    return LinearConstraint(dims, b - a, Rel::Le);
  }
  static LinearConstraint gt(uint32_t dims, const LinExpr& a, const LinExpr& b) {
    return LinearConstraint(dims, b - a, Rel::Lt);
  }
  static LinearConstraint eq(uint32_t dims, const LinExpr& a, const LinExpr& b) {
    return LinearConstraint(dims, a - b, Rel::Eq);
  }

  uint32_t dims() const { return static_cast<uint32_t>(coeffs_.size()); }
  const Integer& coeff(uint32_t i) const { return coeffs_[i]; }
  const Integer& constant() const { return constant_; }
  Rel rel() const { return rel_; }

  bool all_coeffs_zero() const;
  /// 0 REL c constraints decide to a truth value.
  bool trivially_true() const;
  bool trivially_false() const;

  /// Exact membership test of a rational point.
  bool satisfied_by(const std::vector<Rational>& point) const;

  /// Complement with strictness flip; Eq yields two constraints.
  std::vector<LinearConstraint> negation() const;

  /// Substitutes values for the given variables (coefficients folded into the
  /// constant); used by instantiate().
  LinearConstraint substituted(const std::vector<std::pair<uint32_t, Rational>>& values) const;

  bool operator==(const LinearConstraint& o) const;
  bool operator<(const LinearConstraint& o) const;  // canonical ordering

  /// Raw-row constructor used by the elimination engine. Normalizes.
  LinearConstraint(std::vector<Integer> coeffs, Integer constant, Rel rel);

 private:
  void normalize();

  std::vector<Integer> coeffs_;
  Integer constant_;
  Rel rel_;
};

std::string rel_str(Rel r);

}  // namespace psa
