#include "psa/synthesis.hpp"

#include <chrono>
#include <deque>
#include <unordered_map>

namespace psa {

namespace {

struct LocsHash {
  size_t operator()(const std::vector<uint32_t>& v) const noexcept {
    size_t h = 1469598103934665603ull;
    for (uint32_t x : v) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

}  // namespace

SynthesisResult reach_synth(const Network& n, const BadSpec& bad,
                            const ExplorationOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  const uint32_t dims = n.registry->size();
  SynthesisResult res;
  res.bad_region = Region(dims);
  res.good_region = Region(dims);

  std::vector<std::vector<bool>> is_bad_loc(n.automata.size());
  for (uint32_t a = 0; a < n.automata.size(); ++a)
    is_bad_loc[a].assign(n.automata[a].locations.size(), false);
  for (auto [a, l] : bad.targets) is_bad_loc[a][l] = true;
  auto hits_bad = [&is_bad_loc](const SymbolicState& s) {
    for (uint32_t a = 0; a < s.locations.size(); ++a)
      if (is_bad_loc[a][s.locations[a]]) return true;
    return false;
  };

  std::unordered_map<std::vector<uint32_t>, std::vector<Polyhedron>, LocsHash> visited;
  std::deque<std::pair<SymbolicState, size_t>> frontier;

  auto record = [&](SymbolicState&& s, size_t depth) -> bool {
    auto& bucket = visited[s.locations];
    for (const auto& c : bucket)
      if (c.includes(s.constraint)) return false;
    bucket.push_back(s.constraint);
    frontier.emplace_back(std::move(s), depth);
    return true;
  };

  SymbolicState init = n.initial_state();
  if (hits_bad(init)) {
    res.bad_region.add(init.constraint.project_to_params(*n.registry));
  } else {
    record(std::move(init), 0);
  }

  bool exhausted = false;
  size_t explored = 0;
  while (!frontier.empty()) {
    if (explored >= opts.max_states) {
      exhausted = true;
      break;
    }
    auto [state, depth] = std::move(frontier.front());
    frontier.pop_front();
    ++explored;
    res.stats.max_depth_reached = std::max(res.stats.max_depth_reached, depth);
    if (depth >= opts.max_depth) {
      exhausted = true;
      continue;
    }
    for (auto& [act, nxt] : n.successors(state)) {
      (void)act;
      if (hits_bad(nxt)) {
        res.bad_region.add(nxt.constraint.project_to_params(*n.registry));
        continue;
      }
      if (opts.prune_subsumed_by_bad) {
        Polyhedron proj = nxt.constraint.project_to_params(*n.registry);
        bool subsumed = false;
        for (const auto& d : res.bad_region.disjuncts())
          if (d.includes(proj)) {
            subsumed = true;
            break;
          }
        if (subsumed) continue;
      }
      record(std::move(nxt), depth + 1);
    }
  }

  res.stats.states_explored = explored;
  res.exact = !exhausted;
  if (res.exact)
    res.good_region = Region::complement(res.bad_region, n.initial_param_domain);
  res.stats.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

Network instantiate_network(const Network& n,
                            const std::vector<std::pair<VarId, Rational>>& valuation) {
  Network out = n;
  for (auto& aut : out.automata) {
    for (auto& loc : aut.locations) loc.invariant = loc.invariant.instantiate(valuation);
    for (auto& e : aut.edges) e.guard = e.guard.instantiate(valuation);
  }
  out.initial_param_domain = out.initial_param_domain.instantiate(valuation);
  return out;
}

Verdict verify(const Network& n, const BadSpec& bad,
               const std::vector<std::pair<VarId, Rational>>& valuation,
               const ExplorationOptions& opts) {
  Network closed = instantiate_network(n, valuation);
  SynthesisResult r = reach_synth(closed, bad, opts);
  if (!r.bad_region.is_empty()) return Verdict::Unschedulable;
  return r.exact ? Verdict::Schedulable : Verdict::Indeterminate;
}

SynthesisResult compositional_synth(
    const std::vector<std::pair<const Network*, const BadSpec*>>& variants,
    const ExplorationOptions& opts) {
  SynthesisResult out;
  bool first = true;
  for (const auto& [net, bad] : variants) {
    SynthesisResult r = reach_synth(*net, *bad, opts);
    if (first) {
      out = std::move(r);
      first = false;
      continue;
    }
    out.exact = out.exact && r.exact;
    out.bad_region.add(r.bad_region);
    if (out.exact) out.good_region = Region::intersect(out.good_region, r.good_region);
    out.stats.states_explored += r.stats.states_explored;
    out.stats.max_depth_reached =
        std::max(out.stats.max_depth_reached, r.stats.max_depth_reached);
    out.stats.duration_seconds += r.stats.duration_seconds;
  }
  if (!out.exact) {
    out.good_region = Region(out.good_region.dims());
  }
  return out;
}

std::string verdict_str(Verdict v) {
  switch (v) {
    case Verdict::Schedulable: return "schedulable";
    case Verdict::Unschedulable: return "unschedulable";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

}  // namespace psa
