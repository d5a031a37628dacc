#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psa/rational.hpp"

namespace psa {

/// A quantity that is either a concrete rational or left free ("?") for
/// synthesis.
struct Quantity {
  std::optional<Rational> value;  // nullopt => synthesis parameter
  bool concrete() const { return value.has_value(); }
};

struct ProcessingSpec {
  std::string name;
  Quantity wcet;          // may be freed by compile()
  Rational period = 0;    // PP, relative period (activation-window length)
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

struct Slot {
  std::string processing;
  long modulus = 1;   // cycle mod modulus == rest
  long rest = 0;
};

struct ThreadSpec {
  std::string name;
  int priority = 0;  // smaller = higher
  Rational period = 0;
  Quantity offset;
  Quantity deadline;
  Rational maf = 0;
  std::vector<Slot> slots;  // execution order within a cycle = listed order

  long cycles_per_maf() const {
    Rational c = maf / period;
    return c.get_num().get_si();
  }
};

enum class ReactivityEndpoint { Completion, Publication };

struct ReactivitySpec {
  std::string name;
  std::string bus_in;                  // data read by the first processing
  std::vector<std::string> chain;      // processing names, length >= 1
  std::string bus_out;                 // data written by the last processing
  Rational bound = 0;                  // DR
  ReactivityEndpoint endpoint = ReactivityEndpoint::Completion;
};

struct SystemSpec {
  std::vector<ProcessingSpec> processings;
  std::vector<ThreadSpec> threads;
  std::vector<ReactivitySpec> reactivities;

  const ProcessingSpec* processing(const std::string& name) const;
  const ThreadSpec* thread(const std::string& name) const;
  /// Host thread of a processing, if allocated.
  const ThreadSpec* host_of(const std::string& processing) const;
  const Slot* slot_of(const std::string& processing) const;

  /// lcm of thread MAFs.
  Rational hyperperiod() const;
  Rational max_offset_bound() const;  // max period (offsets bounded by periods)
};

struct Diagnostic {
  enum class Severity { Error, Warning } severity;
  std::string message;
  int line = 0, column = 0;
};

/// Structural checks: harmonic periods, MAF multiples, allocation,
/// PP consistency with slot predicates, reactivity chains, priorities.
std::vector<Diagnostic> validate(const SystemSpec& spec);

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds)
    if (d.severity == Diagnostic::Severity::Error) return true;
  return false;
}

}  // namespace psa
