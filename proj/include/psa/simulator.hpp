#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psa/system.hpp"

namespace psa {

struct SimConfig {
  /// Default: max offset + 2 * lcm(MAFs).
  std::optional<Rational> horizon;
  /// Values for free quantities, keyed like compile parameters
  /// ("offsetT1", "deadlineT2", "wcetNavigation").
  std::map<std::string, Rational> valuation;
  ReactivityEndpoint endpoint = ReactivityEndpoint::Completion;
};

struct Segment {
  std::string thread, processing;
  Rational start, end;
};

struct SimEvent {
  Rational time;
  std::string name;
};

struct MissRecord {
  std::string who;   // thread or processing name
  Rational time;
  std::string kind;  // "deadline" or "window-overrun"
};

struct LatencyRecord {
  Rational chain_start, chain_end, latency;
};

struct ScheduleTrace {
  Rational horizon;
  std::vector<Segment> segments;
  std::vector<SimEvent> events;
  std::vector<MissRecord> deadline_misses;
  std::map<std::string, std::vector<LatencyRecord>> reactivity_latencies;
  /// Reactivities for which no complete chain fits in the horizon.
  std::vector<std::string> unmeasured;

  bool schedulable_core() const { return deadline_misses.empty(); }
};

/// Substitutes a total valuation into the free quantities of a spec.
/// Throws std::invalid_argument if a free quantity is missing a value or a
/// key is unknown.
SystemSpec instantiate_spec(const SystemSpec& spec, const std::map<std::string, Rational>& val);

/// Exact event-driven preemptive fixed-priority simulation with the
/// deterministic tie rule: at equal instants publications are processed
/// first, then activations, then completion signals of threads holding the
/// CPU. A thread whose work exhausts exactly when a higher-priority thread
/// activates signals its completion only when it next holds the CPU (capped
/// at its own frame end and at the pending processing's activation-window
/// end). Deadline misses and activation-window overruns are recorded as
/// data, never thrown.
ScheduleTrace simulate(const SystemSpec& spec, const SimConfig& cfg);

/// Worst observed latency per reactivity over the trace horizon.
std::map<std::string, Rational> measure_reactivities(const ScheduleTrace& trace,
                                                     const SystemSpec& spec);

enum class GanttFormat { Ascii, Svg };
std::string render_gantt(const ScheduleTrace& trace, const SystemSpec& spec, GanttFormat fmt);

/// JSON dump: {segments, events, misses, latencies}.
std::string trace_json(const ScheduleTrace& trace);

}  // namespace psa
