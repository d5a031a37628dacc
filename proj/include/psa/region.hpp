#pragma once

#include <string>
#include <vector>

#include "psa/polyhedron.hpp"

namespace psa {

/// Finite union of polyhedra over one universe. Canonical: no empty
/// disjunct, disjuncts sorted and deduplicated syntactically.
class Region {
 public:
  explicit Region(uint32_t dims) : dims_(dims) {}
  static Region of(const Polyhedron& p);

  uint32_t dims() const { return dims_; }
  const std::vector<Polyhedron>& disjuncts() const { return ds_; }
  bool is_empty() const { return ds_.empty(); }

  void add(Polyhedron p);  // canonicalizes and drops empties
  void add(const Region& r);

  static Region intersect(const Region& a, const Region& b);

  /// within \ r as a finite union, by De Morgan distribution with
  /// strictness flipping.
  static Region complement(const Region& r, const Polyhedron& within);

  /// p subseteq this (exact).
  bool covers(const Polyhedron& p) const;

  /// Semantic equality: mutual inclusion.
  static bool equal(const Region& a, const Region& b);

  bool contains_point(const std::vector<Rational>& point) const;

  std::string text(const VarRegistry& reg) const;

 private:
  uint32_t dims_;
  std::vector<Polyhedron> ds_;
};

}  // namespace psa
