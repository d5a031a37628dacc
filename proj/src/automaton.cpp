#include "psa/automaton.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace psa {

bool Automaton::in_alphabet(ActionId a) const {
  return std::binary_search(alphabet.begin(), alphabet.end(), a);
}

std::vector<uint32_t> Automaton::edges_from(uint32_t loc, ActionId a) const {
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < edges.size(); ++i)
    if (edges[i].source == loc && edges[i].action == a) out.push_back(i);
  return out;
}

void Automaton::validate(const VarRegistry& reg) const {
  if (initial >= locations.size()) throw std::logic_error(name + ": bad initial location");
  for (const auto& e : edges) {
    if (e.source >= locations.size() || e.target >= locations.size())
      throw std::logic_error(name + ": edge endpoint out of range");
    if (!in_alphabet(e.action)) throw std::logic_error(name + ": edge action not in alphabet");
    for (VarId r : e.resets)
      if (r.kind != VarKind::Clock) throw std::logic_error(name + ": reset of non-clock");
  }
  for (const auto& l : locations)
    for (VarId s : l.stopped)
      if (reg.kind(s.index) != VarKind::Clock)
        throw std::logic_error(name + ": stopped non-clock in " + l.name);
}

ActionId Network::action(const std::string& name) const {
  for (uint32_t i = 0; i < action_names.size(); ++i)
    if (action_names[i] == name) return ActionId{i};
  throw std::invalid_argument("unknown action: " + name);
}

ActionId Network::add_action(const std::string& name) {
  for (uint32_t i = 0; i < action_names.size(); ++i)
    if (action_names[i] == name) return ActionId{i};
  action_names.push_back(name);
  return ActionId{static_cast<uint32_t>(action_names.size() - 1)};
}

std::vector<uint32_t> Network::sync_sets(ActionId a) const {
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < automata.size(); ++i)
    if (automata[i].in_alphabet(a)) out.push_back(i);
  return out;
}

std::vector<std::string> Network::validate() const {
  std::vector<std::string> diags;
  for (const auto& aut : automata) aut.validate(*registry);
  for (uint32_t a = 0; a < action_names.size(); ++a)
    if (sync_sets(ActionId{a}).empty())
      diags.push_back("dead action: " + action_names[a]);
  return diags;
}

std::vector<uint32_t> Network::advancing_clocks(const std::vector<uint32_t>& locs) const {
  std::set<uint32_t> frozen;
  for (uint32_t i = 0; i < automata.size(); ++i)
    for (VarId v : automata[i].locations[locs[i]].stopped) frozen.insert(v.index);
  std::vector<uint32_t> adv;
  for (uint32_t d = 0; d < registry->size(); ++d)
    if (registry->kind(d) == VarKind::Clock && !frozen.count(d)) adv.push_back(d);
  return adv;
}

bool Network::close_state(SymbolicState& s) const {
  Polyhedron inv = s.constraint;
  for (uint32_t i = 0; i < automata.size(); ++i)
    inv.add(automata[i].locations[s.locations[i]].invariant);
  inv.canonicalize();
  if (inv.syntactically_empty() || inv.is_empty()) return false;
  Polyhedron elapsed = inv.time_elapse(advancing_clocks(s.locations));
  for (uint32_t i = 0; i < automata.size(); ++i)
    elapsed.add(automata[i].locations[s.locations[i]].invariant);
  elapsed.canonicalize();
  if (elapsed.syntactically_empty() || elapsed.is_empty()) return false;
  // project scoped clocks that are dead in this location vector
  std::vector<VarId> dead;
  for (const auto& sc : scoped_clocks) {
    bool live = false;
    for (auto [ai, li] : sc.live_at)
      if (s.locations[ai] == li) { live = true; break; }
    if (!live) dead.push_back(sc.clock);
  }
  if (!dead.empty()) elapsed = elapsed.eliminate(dead);
  s.constraint = std::move(elapsed);
  return true;
}

SymbolicState Network::initial_state() const {
  SymbolicState s;
  s.locations.reserve(automata.size());
  for (const auto& a : automata) s.locations.push_back(a.initial);
  Polyhedron c(registry->size());
  for (uint32_t d = 0; d < registry->size(); ++d) {
    if (registry->kind(d) == VarKind::Clock) {
      LinExpr e;
      e.terms[d] = 1;
      c.add(LinearConstraint(registry->size(), e, Rel::Eq));
    }
  }
  c.add(initial_param_domain);
  c.canonicalize();
  s.constraint = std::move(c);
  if (!close_state(s))
    throw std::runtime_error("inconsistent initial state (empty constraint)");
  return s;
}

std::vector<SymbolicState> Network::discrete_successors(const SymbolicState& s,
                                                        ActionId a) const {
  std::vector<SymbolicState> out;
  std::vector<uint32_t> parts = sync_sets(a);
  if (parts.empty()) return out;
  // per participant, enabled edge indices; none anywhere => blocked
  std::vector<std::vector<uint32_t>> choices;
  choices.reserve(parts.size());
  for (uint32_t ai : parts) {
    auto es = automata[ai].edges_from(s.locations[ai], a);
    if (es.empty()) return out;
    choices.push_back(std::move(es));
  }
  std::vector<uint32_t> pick(parts.size(), 0);
  while (true) {
    Polyhedron c = s.constraint;
    std::vector<VarId> resets;
    SymbolicState next;
    next.locations = s.locations;
    for (size_t k = 0; k < parts.size(); ++k) {
      const Edge& e = automata[parts[k]].edges[choices[k][pick[k]]];
      c.add(e.guard);
      for (VarId r : e.resets) resets.push_back(r);
      next.locations[parts[k]] = e.target;
    }
    c.canonicalize();
    if (!c.syntactically_empty() && !c.is_empty()) {
      std::sort(resets.begin(), resets.end());
      resets.erase(std::unique(resets.begin(), resets.end()), resets.end());
      next.constraint = c.reset(resets);
      if (close_state(next)) out.push_back(std::move(next));
    }
    // advance the cartesian index
    size_t k = 0;
    while (k < pick.size()) {
      if (++pick[k] < choices[k].size()) break;
      pick[k] = 0;
      ++k;
    }
    if (k == pick.size()) break;
  }
  return out;
}

std::vector<std::pair<ActionId, SymbolicState>> Network::successors(
    const SymbolicState& s) const {
  std::vector<std::pair<ActionId, SymbolicState>> out;
  for (uint32_t a = 0; a < action_names.size(); ++a)
    for (auto& nxt : discrete_successors(s, ActionId{a}))
      out.emplace_back(ActionId{a}, std::move(nxt));
  return out;
}

bool Network::state_is_bad(const SymbolicState& s) const {
  for (uint32_t i = 0; i < automata.size(); ++i)
    if (automata[i].locations[s.locations[i]].is_bad) return true;
  return false;
}

std::string Network::state_name(const SymbolicState& s) const {
  std::string out;
  for (uint32_t i = 0; i < automata.size(); ++i) {
    if (i) out += ",";
    out += automata[i].locations[s.locations[i]].name;
  }
  return out;
}

std::string Network::dump() const {
  std::string out;
  for (const auto& aut : automata) {
    out += "automaton " + aut.name + "\n";
    for (uint32_t l = 0; l < aut.locations.size(); ++l) {
      const auto& loc = aut.locations[l];
      out += "  loc " + loc.name;
      if (l == aut.initial) out += " [initial]";
      if (loc.is_bad) out += " [bad]";
      out += "\n    invariant: " + loc.invariant.text(*registry) + "\n";
      if (!loc.stopped.empty()) {
        out += "    stop: {";
        for (size_t i = 0; i < loc.stopped.size(); ++i) {
          if (i) out += ", ";
          out += registry->name(loc.stopped[i]);
        }
        out += "}\n";
      }
    }
    for (const auto& e : aut.edges) {
      out += "  edge " + aut.locations[e.source].name + " --" + action_names[e.action.v];
      if (!(e.guard.constraints().empty())) out += " when " + e.guard.text(*registry);
      if (!e.resets.empty()) {
        out += " reset {";
        for (size_t i = 0; i < e.resets.size(); ++i) {
          if (i) out += ", ";
          out += registry->name(e.resets[i]);
        }
        out += "}";
      }
      out += "--> " + aut.locations[e.target].name + "\n";
    }
  }
  return out;
}

bool state_included(const SymbolicState& s1, const SymbolicState& s2) {
  if (s1.locations != s2.locations) return false;
  return s2.constraint.includes(s1.constraint);
}

}  // namespace psa
