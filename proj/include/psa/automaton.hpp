#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psa/polyhedron.hpp"
#include "psa/vars.hpp"

namespace psa {

struct ActionId {
  uint32_t v = UINT32_MAX;
  bool operator==(const ActionId& o) const { return v == o.v; }
  bool operator<(const ActionId& o) const { return v < o.v; }
};

struct Location {
  std::string name;
  Polyhedron invariant;
  std::vector<VarId> stopped;  // clocks frozen while the automaton sits here
  bool is_bad = false;

  explicit Location(std::string n, Polyhedron inv)
      : name(std::move(n)), invariant(std::move(inv)) {}
};

struct Edge {
  uint32_t source;
  Polyhedron guard;
  ActionId action;
  std::vector<VarId> resets;
  uint32_t target;
};

class Automaton {
 public:
  std::string name;
  std::vector<ActionId> alphabet;  // sorted
  std::vector<Location> locations;
  uint32_t initial = 0;
  std::vector<Edge> edges;

  bool in_alphabet(ActionId a) const;
  std::vector<uint32_t> edges_from(uint32_t loc, ActionId a) const;
  void validate(const VarRegistry& reg) const;
};

/// A clock meaningful only while some automaton sits in one of the listed
/// locations; projected away elsewhere so symbolic states stay canonical.
/// Sound when every edge into a live location resets the clock.
struct ScopedClock {
  VarId clock;
  // (automaton index, location index) pairs where the clock is live
  std::vector<std::pair<uint32_t, uint32_t>> live_at;
};

struct SymbolicState {
  std::vector<uint32_t> locations;
  Polyhedron constraint;

  bool operator==(const SymbolicState& o) const {
    return locations == o.locations && constraint == o.constraint;
  }
};

class Network {
 public:
  const VarRegistry* registry = nullptr;
  std::vector<Automaton> automata;
  std::vector<std::string> action_names;
  Polyhedron initial_param_domain{0};
  std::vector<ScopedClock> scoped_clocks;

  ActionId action(const std::string& name) const;
  ActionId add_action(const std::string& name);

  /// Automata whose alphabet contains a; they all move together.
  std::vector<uint32_t> sync_sets(ActionId a) const;

  /// Actions in no alphabet (dead) — diagnosed by validate().
  std::vector<std::string> validate() const;

  SymbolicState initial_state() const;
  std::vector<SymbolicState> discrete_successors(const SymbolicState& s, ActionId a) const;
  std::vector<std::pair<ActionId, SymbolicState>> successors(const SymbolicState& s) const;

  bool state_is_bad(const SymbolicState& s) const;
  std::string state_name(const SymbolicState& s) const;

  /// Human-readable listing for golden-file review.
  std::string dump() const;

 private:
  // post-discrete closure: conjoin invariants, elapse under the union of the
  // stop sets, re-conjoin invariants, project dead scoped clocks
  bool close_state(SymbolicState& s) const;
  std::vector<uint32_t> advancing_clocks(const std::vector<uint32_t>& locs) const;
};

/// Same location vector and s2's constraint includes s1's.
bool state_included(const SymbolicState& s1, const SymbolicState& s2);

}  // namespace psa
