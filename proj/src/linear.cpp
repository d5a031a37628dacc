#include "psa/linear.hpp"

#include <algorithm>
#include <stdexcept>

namespace psa {

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  for (const auto& [v, c] : o.terms) {
    Rational& r = terms[v];
    r += c;
    if (r == 0) terms.erase(v);
  }
  constant += o.constant;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  for (const auto& [v, c] : o.terms) {
    Rational& r = terms[v];
    r -= c;
    if (r == 0) terms.erase(v);
  }
  constant -= o.constant;
  return *this;
}

LinearConstraint::LinearConstraint(uint32_t dims, const LinExpr& lhs, Rel rel)
    : coeffs_(dims, Integer(0)), constant_(0), rel_(rel) {
  // scale by the lcm of denominators to integer coefficients
  Integer l = lhs.constant.get_den();
  for (const auto& [v, c] : lhs.terms) {
    if (v >= dims) throw std::out_of_range("variable outside universe");
    l = lcm(l, c.get_den());
  }
  for (const auto& [v, c] : lhs.terms) {
    Rational scaled = c * Rational(l);
    coeffs_[v] = scaled.get_num();
  }
  Rational sc = lhs.constant * Rational(l);
  constant_ = sc.get_num();
  normalize();
}

LinearConstraint::LinearConstraint(std::vector<Integer> coeffs, Integer constant, Rel rel)
    : coeffs_(std::move(coeffs)), constant_(std::move(constant)), rel_(rel) {
  normalize();
}

void LinearConstraint::normalize() {
  Integer g = abs(constant_);
  for (const Integer& c : coeffs_) g = gcd(g, c);
  if (g > 1) {
    for (Integer& c : coeffs_) c /= g;
    constant_ /= g;
  }
  if (rel_ == Rel::Eq) {
    for (const Integer& c : coeffs_) {
      if (c == 0) continue;
      if (c < 0) {
        for (Integer& x : coeffs_) x = -x;
        constant_ = -constant_;
      }
      break;
    }
  }
}

bool LinearConstraint::all_coeffs_zero() const {
  for (const Integer& c : coeffs_)
    if (c != 0) return false;
  return true;
}

bool LinearConstraint::trivially_true() const {
  if (!all_coeffs_zero()) return false;
  switch (rel_) {
    case Rel::Eq: return constant_ == 0;
    case Rel::Le: return constant_ <= 0;
    case Rel::Lt: return constant_ < 0;
  }
  return false;
}

bool LinearConstraint::trivially_false() const {
  return all_coeffs_zero() && !trivially_true();
}

bool LinearConstraint::satisfied_by(const std::vector<Rational>& point) const {
  Rational v(constant_);
  for (uint32_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != 0) v += Rational(coeffs_[i]) * point.at(i);
  }
  switch (rel_) {
    case Rel::Eq: return v == 0;
    case Rel::Le: return v <= 0;
    case Rel::Lt: return v < 0;
  }
  return false;
}

std::vector<LinearConstraint> LinearConstraint::negation() const {
  std::vector<Integer> neg(coeffs_.size());
  for (uint32_t i = 0; i < coeffs_.size(); ++i) neg[i] = -coeffs_[i];
  switch (rel_) {
    case Rel::Le:  // !(t <= 0)  ==  -t < 0
      return {LinearConstraint(neg, -constant_, Rel::Lt)};
    case Rel::Lt:  // !(t < 0)   ==  -t <= 0
      return {LinearConstraint(neg, -constant_, Rel::Le)};
    case Rel::Eq:  // !(t = 0)   ==  t < 0  or  -t < 0
      return {LinearConstraint(coeffs_, constant_, Rel::Lt),
              LinearConstraint(neg, -constant_, Rel::Lt)};
  }
  return {};
}

LinearConstraint LinearConstraint::substituted(
    const std::vector<std::pair<uint32_t, Rational>>& values) const {
  // fold c_i * value into the constant; work over rationals then renormalize
  Rational k(constant_);
  std::vector<Integer> cs = coeffs_;
  Integer den(1);
  for (const auto& [idx, val] : values) {
    if (cs.at(idx) != 0) {
      k += Rational(cs[idx]) * val;
      cs[idx] = 0;
    }
  }
  den = k.get_den();
  for (Integer& c : cs) c *= den;
  return LinearConstraint(cs, k.get_num(), rel_);
}

bool LinearConstraint::operator==(const LinearConstraint& o) const {
  return rel_ == o.rel_ && constant_ == o.constant_ && coeffs_ == o.coeffs_;
}

bool LinearConstraint::operator<(const LinearConstraint& o) const {
  if (coeffs_ != o.coeffs_) return coeffs_ < o.coeffs_;
  if (constant_ != o.constant_) return constant_ < o.constant_;
  return static_cast<int>(rel_) < static_cast<int>(o.rel_);
}

std::string rel_str(Rel r) {
  switch (r) {
    case Rel::Eq: return "=";
    case Rel::Le: return "<=";
    case Rel::Lt: return "<";
  }
  return "?";
}

}  // namespace psa
