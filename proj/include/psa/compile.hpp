#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "psa/automaton.hpp"
#include "psa/system.hpp"

namespace psa {

struct CompileOptions {
  /// Reactivity names to attach as observers.
  std::vector<std::string> observers;
  /// Free quantities: "offsets", "deadlines", or individual "offsetT1",
  /// "deadlineT2", "wcetNavigation" style names.
  std::set<std::string> free;
  ReactivityEndpoint endpoint = ReactivityEndpoint::Completion;
  /// Observer edges to bad from any measuring location once the bound is
  /// exceeded; switchable to final-event-only checking.
  bool observer_early_bad = true;
};

struct BadSpec {
  std::vector<std::pair<uint32_t, uint32_t>> targets;  // (automaton, location)
};

struct ThreadSymbols {
  VarId clock;                      // xT
  ActionId start, fin, end, miss;
  VarId offset_param;               // valid iff offset free
  VarId deadline_param;             // valid iff deadline free
};

struct ProcessingSymbols {
  VarId exec_clock;                 // xExec
  VarId act_clock;                  // xAct
  ActionId act, start, finish, overrun;
  VarId wcet_param;                 // valid iff wcet free
};

struct CompiledModel {
  std::unique_ptr<VarRegistry> registry;
  Network network;
  BadSpec bad;
  std::map<std::string, ThreadSymbols> threads;
  std::map<std::string, ProcessingSymbols> processings;
  std::map<std::string, VarId> params;        // parameter name -> id
  std::map<std::string, ActionId> actions;    // action name -> id

  std::vector<VarId> parameter_ids() const;
};

/// Compiles the system into a PSA network: one activation automaton per
/// processing, one automaton per thread, the generated FPS scheduler, and
/// one observer per selected reactivity.
/// Throws std::invalid_argument on unknown names; the spec must have passed
/// validate() without errors.
CompiledModel compile(const SystemSpec& spec, const CompileOptions& opts);

}  // namespace psa
