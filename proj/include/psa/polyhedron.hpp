#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "psa/linear.hpp"
#include "psa/vars.hpp"

namespace psa {

/// A convex set of rational points given by a conjunction of (possibly
/// strict) linear constraints over a fixed-size variable universe.
/// Canonical form: constraints normalized, deduplicated, syntactic dominance
/// removed, sorted; an infeasible constant row collapses the set to the
/// canonical empty polyhedron. Immutable after canonicalize().
class Polyhedron {
 public:
  explicit Polyhedron(uint32_t dims) : dims_(dims) {}
  static Polyhedron universal(uint32_t dims) { return Polyhedron(dims); }
  static Polyhedron bottom(uint32_t dims);

  uint32_t dims() const { return dims_; }
  const std::vector<LinearConstraint>& constraints() const { return cs_; }
  bool syntactically_empty() const;  // canonical-empty marker

  void add(const LinearConstraint& c);
  void add(const Polyhedron& other);  // conjoin all constraints
  void canonicalize();

  static Polyhedron intersect(const Polyhedron& p, const Polyhedron& q);

  /// Exhaustive Fourier-Motzkin feasibility with strictness tracking.
  bool is_empty() const;

  /// Exact existential projection of the given variables.
  Polyhedron eliminate(const std::vector<VarId>& vars) const;
  Polyhedron eliminate_indices(std::vector<uint32_t> idx) const;

  /// { v + d * rates | v in P, d >= 0 } where rates is 1 exactly on
  /// `advancing` (clock) variables and 0 elsewhere.
  Polyhedron time_elapse(const std::vector<uint32_t>& advancing) const;

  /// Eliminates the clocks, then pins each to zero.
  Polyhedron reset(const std::vector<VarId>& clocks) const;

  /// Keeps only Parameter-kind dimensions constrained.
  Polyhedron project_to_params(const VarRegistry& reg) const;

  /// q subseteq this, decided constraint-wise via emptiness of q and
  /// the negation of each constraint.
  bool includes(const Polyhedron& q) const;

  /// Substitutes parameter values; values must be nonnegative.
  Polyhedron instantiate(const std::vector<std::pair<VarId, Rational>>& valuation) const;

  bool contains_point(const std::vector<Rational>& point) const;

  bool operator==(const Polyhedron& o) const;
  bool operator<(const Polyhedron& o) const;

  size_t hash() const;

  /// Rendering over named variables, e.g. "4 <= deadlineT1 AND deadlineT1 <= 5".
  std::string text(const VarRegistry& reg) const;

  /// Redundancy-removal threshold (constraint count) above which entailment
  /// pruning runs during canonicalization.
  static constexpr size_t kRedundancyThreshold = 64;

 private:
  void drop_entailed();

  uint32_t dims_;
  std::vector<LinearConstraint> cs_;
};

}  // namespace psa
