#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "psa/automaton.hpp"
#include "psa/compile.hpp"
#include "psa/region.hpp"

namespace psa {

struct ExplorationOptions {
  size_t max_states = 1000000;
  size_t max_depth = SIZE_MAX;
  bool prune_subsumed_by_bad = true;
};

struct ExplorationStats {
  size_t states_explored = 0;
  size_t max_depth_reached = 0;
  double duration_seconds = 0;
};

struct SynthesisResult {
  Region bad_region;
  Region good_region;
  bool exact = false;
  ExplorationStats stats;

  SynthesisResult() : bad_region(0), good_region(0) {}
};

/// Breadth-first symbolic reachability synthesis: collects the parameter
/// projections of states hitting bad locations (not expanding them),
/// discards states included in already-visited ones, and on fixpoint
/// complements the bad region within the initial parameter domain.
/// Limit exhaustion yields exact = false, never an exception.
SynthesisResult reach_synth(const Network& n, const BadSpec& bad,
                            const ExplorationOptions& opts);

enum class Verdict { Schedulable, Unschedulable, Indeterminate };

/// Instantiates all parameters and decides reachability of the bad set.
Verdict verify(const Network& n, const BadSpec& bad,
               const std::vector<std::pair<VarId, Rational>>& valuation,
               const ExplorationOptions& opts = {});

/// Per-variant synthesis with intersection of good regions (one observer per
/// variant, shared parameter set).
SynthesisResult compositional_synth(
    const std::vector<std::pair<const Network*, const BadSpec*>>& variants,
    const ExplorationOptions& opts);

/// Substitutes a parameter valuation into every guard, invariant and the
/// initial domain; the result is a closed network over the same universe.
Network instantiate_network(const Network& n,
                            const std::vector<std::pair<VarId, Rational>>& valuation);

std::string verdict_str(Verdict v);

}  // namespace psa
