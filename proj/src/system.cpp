#include "psa/system.hpp"

#include <algorithm>
#include <set>

namespace psa {

const ProcessingSpec* SystemSpec::processing(const std::string& name) const {
  for (const auto& p : processings)
    if (p.name == name) return &p;
  return nullptr;
}

const ThreadSpec* SystemSpec::thread(const std::string& name) const {
  for (const auto& t : threads)
    if (t.name == name) return &t;
  return nullptr;
}

const ThreadSpec* SystemSpec::host_of(const std::string& proc) const {
  for (const auto& t : threads)
    for (const auto& s : t.slots)
      if (s.processing == proc) return &t;
  return nullptr;
}

const Slot* SystemSpec::slot_of(const std::string& proc) const {
  for (const auto& t : threads)
    for (const auto& s : t.slots)
      if (s.processing == proc) return &s;
  return nullptr;
}

Rational SystemSpec::hyperperiod() const {
  Integer num(1), den(1);
  for (const auto& t : threads) {
    num = lcm(num, t.maf.get_num());
    den = gcd(den, t.maf.get_den());
  }
  Rational h(num, den);
  h.canonicalize();
  return h;
}

Rational SystemSpec::max_offset_bound() const {
  Rational m = 0;
  for (const auto& t : threads) m = std::max(m, t.period);
  return m;
}

std::vector<Diagnostic> validate(const SystemSpec& spec) {
  std::vector<Diagnostic> out;
  auto error = [&out](const std::string& m) {
    out.push_back({Diagnostic::Severity::Error, m});
  };
  auto warn = [&out](const std::string& m) {
    out.push_back({Diagnostic::Severity::Warning, m});
  };

  if (spec.threads.empty()) error("no threads defined");
  if (spec.threads.size() > 16) error("more than 16 threads (scheduler location blow-up)");

  // harmonic periods: sorted periods pairwise divide
  std::vector<Rational> periods;
  for (const auto& t : spec.threads) {
    if (t.period <= 0) error("thread " + t.name + ": period must be positive");
    else periods.push_back(t.period);
  }
  std::sort(periods.begin(), periods.end());
  for (size_t i = 0; i + 1 < periods.size(); ++i) {
    Rational q = periods[i + 1] / periods[i];
    if (q.get_den() != 1)
      error("non-harmonic periods: " + rat_str(periods[i + 1]) + " is not a multiple of " +
            rat_str(periods[i]));
  }

  std::set<int> prios;
  for (const auto& t : spec.threads) {
    if (!prios.insert(t.priority).second)
      error("thread " + t.name + ": duplicate priority " + std::to_string(t.priority));
    if (t.maf <= 0 || (t.period > 0 && (t.maf / t.period).get_den() != 1))
      error("thread " + t.name + ": MAF must be a positive integer multiple of the period");
    if (t.offset.concrete() && (*t.offset.value < 0 || *t.offset.value > t.period))
      error("thread " + t.name + ": offset outside [0, period]");
    if (t.deadline.concrete() && (*t.deadline.value <= 0 || *t.deadline.value > t.period))
      error("thread " + t.name + ": deadline outside (0, period]");
    for (const auto& s : t.slots) {
      if (!spec.processing(s.processing))
        error("thread " + t.name + ": unknown processing " + s.processing);
      if (s.modulus <= 0 || s.rest < 0 || s.rest >= s.modulus)
        error("thread " + t.name + ": bad slot predicate for " + s.processing);
    }
    // per-cycle demand check (warning only)
    if (t.maf > 0 && t.period > 0 && (t.maf / t.period).get_den() == 1) {
      long n = t.cycles_per_maf();
      for (long c = 0; c < n; ++c) {
        Rational demand = 0;
        bool all_concrete = true;
        for (const auto& s : t.slots) {
          if (c % s.modulus != s.rest) continue;
          const ProcessingSpec* p = spec.processing(s.processing);
          if (!p) continue;
          if (p->wcet.concrete()) demand += *p->wcet.value;
          else all_concrete = false;
        }
        if (all_concrete && demand > t.period)
          warn("thread " + t.name + ": cycle " + std::to_string(c) + " demand " +
               rat_str(demand) + " exceeds period " + rat_str(t.period));
      }
    }
  }

  for (const auto& p : spec.processings) {
    if (p.wcet.concrete() && (*p.wcet.value <= 0 || *p.wcet.value > p.period))
      error("processing " + p.name + ": WCET outside (0, period]");
    int hosts = 0;
    for (const auto& t : spec.threads)
      for (const auto& s : t.slots)
        if (s.processing == p.name) ++hosts;
    if (hosts == 0) error("processing " + p.name + " is not allocated to any thread");
    if (hosts > 1) error("processing " + p.name + " is allocated more than once");
    // PP must equal host period * slot modulus
    const ThreadSpec* host = spec.host_of(p.name);
    const Slot* slot = spec.slot_of(p.name);
    if (host && slot) {
      Rational expect = host->period * Rational(slot->modulus);
      if (p.period != expect)
        error("processing " + p.name + ": period " + rat_str(p.period) +
              " inconsistent with slot (" + rat_str(host->period) + " * " +
              std::to_string(slot->modulus) + " = " + rat_str(expect) + ")");
    }
  }

  for (const auto& r : spec.reactivities) {
    if (r.chain.empty()) {
      error("reactivity " + r.name + ": empty chain");
      continue;
    }
    if (r.bound <= 0) error("reactivity " + r.name + ": bound must be positive");
    for (const auto& pn : r.chain)
      if (!spec.processing(pn)) error("reactivity " + r.name + ": unknown processing " + pn);
    const ProcessingSpec* first = spec.processing(r.chain.front());
    const ProcessingSpec* last = spec.processing(r.chain.back());
    if (first &&
        std::find(first->inputs.begin(), first->inputs.end(), r.bus_in) == first->inputs.end())
      error("reactivity " + r.name + ": " + r.chain.front() + " does not read " + r.bus_in);
    if (last &&
        std::find(last->outputs.begin(), last->outputs.end(), r.bus_out) == last->outputs.end())
      error("reactivity " + r.name + ": " + r.chain.back() + " does not write " + r.bus_out);
    for (size_t i = 0; i + 1 < r.chain.size(); ++i) {
      const ProcessingSpec* a = spec.processing(r.chain[i]);
      const ProcessingSpec* b = spec.processing(r.chain[i + 1]);
      if (!a || !b) continue;
      bool linked = false;
      for (const auto& d : a->outputs)
        if (std::find(b->inputs.begin(), b->inputs.end(), d) != b->inputs.end()) linked = true;
      if (!linked)
        error("reactivity " + r.name + ": no data link " + r.chain[i] + " -> " + r.chain[i + 1]);
      if (spec.host_of(r.chain[i]) == nullptr || spec.host_of(r.chain[i + 1]) == nullptr)
        continue;
    }
  }
  return out;
}

}  // namespace psa
