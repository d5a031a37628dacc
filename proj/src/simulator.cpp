#include "psa/simulator.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace psa {

SystemSpec instantiate_spec(const SystemSpec& spec,
                            const std::map<std::string, Rational>& val) {
  SystemSpec out = spec;
  std::set<std::string> used;
  auto fill = [&](Quantity& q, const std::string& key) {
    auto it = val.find(key);
    if (it != val.end()) {
      q.value = it->second;
      used.insert(key);
    }
    if (!q.concrete()) throw std::invalid_argument("no value for free quantity " + key);
  };
  for (auto& t : out.threads) {
    fill(t.offset, "offset" + t.name);
    fill(t.deadline, "deadline" + t.name);
  }
  for (auto& p : out.processings) fill(p.wcet, "wcet" + p.name);
  for (const auto& [k, v] : val)
    if (!used.count(k)) throw std::invalid_argument("unknown valuation key " + k);
  return out;
}

namespace {

struct ProcState {
  const ProcessingSpec* spec;
  const ThreadSpec* host;
  Rational anchor;        // zero-anchored first window start (slot rest * PT)
  long exhausted = 0;     // completed executions (work-wise)
  long signaled = 0;      // finish events emitted
  std::vector<Rational> exhaust_times;
  std::vector<Rational> signal_times;
};

struct CycleRecord {
  Rational act;
  std::map<std::string, int> snapshot;  // data -> publication index (-1 none)
  std::map<std::string, bool> snapshot_tie;
  std::vector<std::string> procs;  // executed this cycle
  Rational fin_signal = -1;        // -1: not yet
  bool missed = false;
};

struct Pub {
  Rational time;
  std::string thread;
  size_t cycle_index;  // into per-thread cycle records
};

struct ThreadState {
  const ThreadSpec* spec;
  Rational next_act;
  long cycle = 0;
  bool active = false;
  Rational act_time = 0;
  std::vector<std::pair<std::string, Rational>> queue;  // (proc, remaining)
  std::optional<Rational> exhaust;                      // pending cycle completion
  std::optional<Rational> pending_proc_exhaust;         // pending finishP of queue front
  std::vector<CycleRecord> records;
  std::vector<Rational> pubs_due;  // publication instants not yet emitted
};

}  // namespace

ScheduleTrace simulate(const SystemSpec& spec0, const SimConfig& cfg) {
  SystemSpec spec = cfg.valuation.empty() ? spec0 : instantiate_spec(spec0, cfg.valuation);
  for (const auto& t : spec.threads)
    if (!t.offset.concrete() || !t.deadline.concrete())
      throw std::invalid_argument("simulate requires a total valuation");
  for (const auto& p : spec.processings)
    if (!p.wcet.concrete()) throw std::invalid_argument("simulate requires a total valuation");

  ScheduleTrace trace;
  Rational horizon;
  if (cfg.horizon) horizon = *cfg.horizon;
  else {
    Rational maxoff = 0;
    for (const auto& t : spec.threads) maxoff = std::max(maxoff, *t.offset.value);
    horizon = maxoff + Rational(2) * spec.hyperperiod();
  }
  trace.horizon = horizon;

  std::map<std::string, ThreadState> ts;
  std::map<std::string, ProcState> ps;
  for (const auto& t : spec.threads) {
    ThreadState s;
    s.spec = &t;
    s.next_act = *t.offset.value;
    ts[t.name] = std::move(s);
  }
  for (const auto& p : spec.processings) {
    ProcState s;
    s.spec = &p;
    s.host = spec.host_of(p.name);
    s.anchor = Rational(spec.slot_of(p.name)->rest) * s.host->period;
    ps[p.name] = std::move(s);
  }

  std::map<std::string, std::vector<Pub>> pubs;  // data -> publications
  auto emit = [&trace](const Rational& t, const std::string& n) {
    trace.events.push_back({t, n});
  };

  // ordered thread list by priority (smaller value first)
  std::vector<ThreadState*> by_prio;
  for (auto& [n, s] : ts) by_prio.push_back(&s);
  std::sort(by_prio.begin(), by_prio.end(),
            [](auto* a, auto* b) { return a->spec->priority < b->spec->priority; });

  auto top_active = [&by_prio]() -> ThreadState* {
    for (auto* s : by_prio)
      if (s->active) return s;
    return nullptr;
  };

  auto cycle_procs = [&spec](const ThreadSpec& t, long cy) {
    std::vector<const ProcessingSpec*> out;
    for (const auto& sl : t.slots)
      if (cy % sl.modulus == sl.rest) out.push_back(spec.processing(sl.processing));
    return out;
  };

  // completion signal of the thread's current cycle at time sg
  auto signal_cycle = [&](ThreadState& s, const Rational& sg) {
    CycleRecord& rec = s.records.back();
    rec.fin_signal = sg;
    emit(sg, "fin" + s.spec->name);
    if (sg > s.act_time + *s.spec->deadline.value) {
      trace.deadline_misses.push_back({s.spec->name, sg, "deadline"});
      rec.missed = true;
    }
    s.pubs_due.push_back(s.act_time + *s.spec->deadline.value);
    s.active = false;
    s.exhaust.reset();
  };

  // finishP of the queue-front processing at time sg
  auto signal_proc = [&](ThreadState& s, const Rational& sg) {
    const std::string& pn = s.queue.front().first;
    ProcState& p = ps[pn];
    p.signaled++;
    p.signal_times.push_back(sg);
    emit(sg, "finish" + pn);
    s.queue.erase(s.queue.begin());
    s.pending_proc_exhaust.reset();
    if (!s.queue.empty()) emit(sg, "start" + s.queue.front().first);
  };

  Rational now = 0;
  const std::string* running = nullptr;  // thread currently holding the CPU
  Rational run_since = 0;

  auto close_segment = [&](const Rational& upto) {
    if (running && upto > run_since) {
      ThreadState& s = ts[*running];
      if (!s.queue.empty())
        trace.segments.push_back({*running, s.queue.front().first, run_since, upto});
    }
    running = nullptr;
  };

  long guard_iterations = 0;
  while (now < horizon) {
    if (++guard_iterations > 2000000) break;  // defensive
    // -- 1. forced pending resolutions: frame end or window end ------------
    for (auto* s : by_prio) {
      // pending finishP capped at its activation-window end
      if (s->active && s->pending_proc_exhaust) {
        ProcState& p = ps[s->queue.front().first];
        Rational wend = p.anchor + Rational(p.exhausted) * p.spec->period;
        if (now == wend) signal_proc(*s, now);
      }
      if (s->active && s->exhaust && now == s->act_time + s->spec->period)
        signal_cycle(*s, now);
    }
    // -- 2. publications due at now ----------------------------------------
    for (auto* s : by_prio) {
      auto& due = s->pubs_due;
      for (size_t i = 0; i < due.size();) {
        if (due[i] == now) {
          emit(now, "end" + s->spec->name);
          // publish the outputs of all processings of that cycle
          size_t ci = 0;
          for (size_t k = 0; k < s->records.size(); ++k)
            if (s->records[k].act + *s->spec->deadline.value == now) ci = k;
          for (const auto& pn : s->records[ci].procs)
            for (const auto& d : spec.processing(pn)->outputs)
              pubs[d].push_back({now, s->spec->name, ci});
          due.erase(due.begin() + static_cast<long>(i));
        } else {
          ++i;
        }
      }
    }
    // -- 3. activations due at now ------------------------------------------
    for (auto* s : by_prio) {
      if (s->next_act != now) continue;
      if (s->active) {
        // previous cycle incomplete at its own frame end: the forced
        // resolution above handles exhausted-pending; a cycle with real work
        // left keeps running (its miss was recorded at the deadline instant)
        ;
      }
      CycleRecord rec;
      rec.act = now;
      for (const auto& pspec : spec.processings) {
        (void)pspec;
      }
      // input snapshot: freshest publication per data name
      std::set<std::string> inputs;
      for (const auto* p : cycle_procs(*s->spec, s->cycle))
        for (const auto& d : p->inputs) inputs.insert(d);
      for (const auto& d : inputs) {
        const auto& v = pubs[d];
        int idx = -1;
        bool tie = false;
        for (int i = 0; i < static_cast<int>(v.size()); ++i) {
          if (v[i].time <= now) idx = i;
          if (v[i].time == now) tie = true;
        }
        rec.snapshot[d] = idx;
        rec.snapshot_tie[d] = tie;
      }
      auto procs = cycle_procs(*s->spec, s->cycle);
      for (const auto* p : procs) rec.procs.push_back(p->name);
      if (!s->active) {
        s->records.push_back(std::move(rec));
        s->active = true;
        s->act_time = now;
        s->queue.clear();
        for (const auto* p : procs) s->queue.emplace_back(p->name, *p->wcet.value);
        emit(now, "start" + s->spec->name);
        if (!s->queue.empty()) emit(now, "start" + s->queue.front().first);
        else s->exhaust = now;  // empty cycle completes immediately
      } else {
        // overrun of the thread itself; keep the old cycle running
        s->records.push_back(std::move(rec));
        trace.deadline_misses.push_back({s->spec->name, now, "reactivation-overlap"});
      }
      s->cycle++;
      s->next_act = now + s->spec->period;
    }
    // -- 4. processing activation grid: actP events and window overruns ----
    for (auto& [pn, p] : ps) {
      // grid points anchor, anchor+PP, ... ; actP at each, overrun when the
      // instance that should have finished is still incomplete (work-wise)
      if (now >= p.anchor) {
        Rational k = (now - p.anchor) / p.spec->period;
        if (k.get_den() == 1) {
          emit(now, "act" + pn);
          long kk = k.get_num().get_si();
          if (kk >= 1 && p.exhausted < kk)
            trace.deadline_misses.push_back({pn, now, "window-overrun"});
        }
      }
    }
    // -- 5. completion signals for threads holding the CPU ------------------
    bool changed = true;
    while (changed) {
      changed = false;
      ThreadState* top = top_active();
      if (!top) break;
      if (top->pending_proc_exhaust) {
        signal_proc(*top, now);
        if (top->queue.empty()) top->exhaust = now;
        changed = true;
        continue;
      }
      if (top->exhaust) {
        signal_cycle(*top, now);
        changed = true;
      }
    }
    // -- 6. deadline instants: unfinished work at act + DT ------------------
    for (auto* s : by_prio) {
      if (s->active && now == s->act_time + *s->spec->deadline.value && !s->records.empty() &&
          s->records.back().fin_signal < 0 && !s->records.back().missed) {
        trace.deadline_misses.push_back({s->spec->name, now, "deadline"});
        s->records.back().missed = true;
      }
    }
    // -- 7. dispatch and advance --------------------------------------------
    ThreadState* top = top_active();
    std::vector<Rational> nexts;
    for (auto* s : by_prio) {
      nexts.push_back(s->next_act);
      if (s->active) nexts.push_back(s->act_time + *s->spec->deadline.value);
      if (s->active && s->exhaust) nexts.push_back(s->act_time + s->spec->period);
      for (const Rational& pd : s->pubs_due) nexts.push_back(pd);
    }
    for (auto& [pn, p] : ps) {
      // next grid point of this processing
      Rational base = p.anchor;
      if (now >= base) {
        Rational k = (now - base) / p.spec->period;
        Integer kc = k.get_num() / k.get_den();  // floor for nonneg
        base = p.anchor + Rational(kc + 1) * p.spec->period;
      }
      nexts.push_back(base);
    }
    Rational exhaust_at = -1;
    if (top && !top->queue.empty() && !top->pending_proc_exhaust) {
      exhaust_at = now + top->queue.front().second;
      nexts.push_back(exhaust_at);
    }
    Rational nt = horizon;
    for (const Rational& x : nexts)
      if (x > now && x < nt) nt = x;

    if (top && !top->queue.empty() && !top->pending_proc_exhaust) {
      const std::string& pn = top->queue.front().first;
      Rational ran = std::min(nt - now, top->queue.front().second);
      if (ran > 0) {
        trace.segments.push_back({top->spec->name, pn, now, now + ran});
        top->queue.front().second -= ran;
      }
      if (top->queue.front().second == 0) {
        Rational fin = now + ran;
        ProcState& p = ps[pn];
        p.exhausted++;
        p.exhaust_times.push_back(fin);
        top->pending_proc_exhaust = fin;
        nt = fin;
      }
    }
    (void)close_segment;
    (void)run_since;
    now = nt;
  }

  // ---- reactivity latencies (backward provenance, pessimistic at ties) ----
  for (const auto& r : spec.reactivities) {
    std::vector<const ThreadSpec*> hosts;
    for (const auto& pn : r.chain) hosts.push_back(spec.host_of(pn));
    // data link consumed by chain element i (from element i-1)
    std::vector<std::string> link(r.chain.size());
    link[0] = r.bus_in;
    for (size_t i = 1; i < r.chain.size(); ++i) {
      const ProcessingSpec* a = spec.processing(r.chain[i - 1]);
      const ProcessingSpec* b = spec.processing(r.chain[i]);
      for (const auto& d : a->outputs)
        if (std::find(b->inputs.begin(), b->inputs.end(), d) != b->inputs.end()) link[i] = d;
    }
    // walk back from a consumer cycle of element i to the earliest possible
    // activation time of element 0's cycle; -1 when the chain leaves the trace
    std::function<Rational(size_t, const ThreadState&, size_t)> origin =
        [&](size_t i, const ThreadState& host, size_t cyi) -> Rational {
      const CycleRecord& rec = host.records[cyi];
      if (i == 0) return rec.act;
      auto it = rec.snapshot.find(link[i]);
      if (it == rec.snapshot.end() || it->second < 0) return Rational(-1);
      Rational best = -1;
      std::vector<int> candidates{it->second};
      if (rec.snapshot_tie.at(link[i]) && it->second > 0)
        candidates.push_back(it->second - 1);  // tie: publication may be unseen
      for (int ci : candidates) {
        const Pub& pub = pubs[link[i]][static_cast<size_t>(ci)];
        const ThreadState& prod = ts.at(pub.thread);
        Rational o = origin(i - 1, prod, pub.cycle_index);
        if (o >= 0 && (best < 0 || o < best)) best = o;
      }
      return best;
    };
    const ThreadState& z = ts.at(hosts.back()->name);
    bool measured = false;
    for (size_t cyi = 0; cyi < z.records.size(); ++cyi) {
      const CycleRecord& rec = z.records[cyi];
      if (std::find(rec.procs.begin(), rec.procs.end(), r.chain.back()) == rec.procs.end())
        continue;
      ReactivityEndpoint ep = cfg.endpoint;
      Rational end;
      if (ep == ReactivityEndpoint::Completion) {
        if (rec.fin_signal < 0) continue;  // not completed within horizon
        end = rec.fin_signal;
      } else {
        end = rec.act + *z.spec->deadline.value;
        if (end > trace.horizon) continue;
      }
      Rational o = origin(r.chain.size() - 1, z, cyi);
      if (o < 0) continue;
      trace.reactivity_latencies[r.name].push_back({o, end, end - o});
      measured = true;
    }
    if (!measured) trace.unmeasured.push_back(r.name);
  }

  std::stable_sort(trace.events.begin(), trace.events.end(),
                   [](const SimEvent& a, const SimEvent& b) { return a.time < b.time; });
  return trace;
}

std::map<std::string, Rational> measure_reactivities(const ScheduleTrace& trace,
                                                     const SystemSpec& spec) {
  std::map<std::string, Rational> out;
  for (const auto& r : spec.reactivities) {
    auto it = trace.reactivity_latencies.find(r.name);
    if (it == trace.reactivity_latencies.end()) continue;
    Rational worst = 0;
    for (const auto& l : it->second) worst = std::max(worst, l.latency);
    out[r.name] = worst;
  }
  return out;
}

std::string render_gantt(const ScheduleTrace& trace, const SystemSpec& spec, GanttFormat fmt) {
  std::ostringstream o;
  if (fmt == GanttFormat::Ascii) {
    // one char per time quantum (gcd of segment boundaries capped at 1)
    Rational quantum(1);
    o << "gantt 0.." << rat_pretty(trace.horizon) << " (one column = " << rat_pretty(quantum)
      << ")\n";
    for (const auto& t : spec.threads) {
      o << t.name << " |";
      Rational pos = 0;
      while (pos < trace.horizon) {
        char c = '.';
        for (const auto& s : trace.segments) {
          if (s.thread != t.name) continue;
          if (s.start <= pos && pos < s.end) c = s.processing.empty() ? '#' : s.processing[0];
        }
        o << c;
        pos += quantum;
      }
      o << "|\n";
    }
    for (const auto& m : trace.deadline_misses)
      o << "miss: " << m.who << " at " << rat_pretty(m.time) << " (" << m.kind << ")\n";
    return o.str();
  }
  // SVG
  const int rowh = 28, scale = 12, left = 90, top = 20;
  double width = left + trace.horizon.get_d() * scale + 20;
  double height = top + static_cast<double>(spec.threads.size()) * rowh + 30;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << static_cast<int>(width)
    << "\" height=\"" << static_cast<int>(height) << "\">\n";
  const char* colors[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860"};
  std::vector<std::string> procnames;
  for (const auto& p : spec.processings) procnames.push_back(p.name);
  int row = 0;
  for (const auto& t : spec.threads) {
    int y = top + row * rowh;
    o << "<text x=\"4\" y=\"" << y + 18 << "\" font-size=\"13\">" << t.name << "</text>\n";
    for (const auto& s : trace.segments) {
      if (s.thread != t.name) continue;
      size_t ci = 0;
      for (size_t i = 0; i < procnames.size(); ++i)
        if (procnames[i] == s.processing) ci = i % 6;
      double x = left + s.start.get_d() * scale;
      double w = (s.end - s.start).get_d() * scale;
      o << "<rect x=\"" << x << "\" y=\"" << y + 4 << "\" width=\"" << w
        << "\" height=\"" << rowh - 8 << "\" fill=\"" << colors[ci] << "\"><title>"
        << s.processing << " [" << rat_pretty(s.start) << "," << rat_pretty(s.end)
        << ")</title></rect>\n";
    }
    row++;
  }
  for (const auto& m : trace.deadline_misses) {
    double x = left + m.time.get_d() * scale;
    o << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\""
      << top + row * rowh << "\" stroke=\"red\" stroke-width=\"2\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string trace_json(const ScheduleTrace& trace) {
  nlohmann::json j;
  j["horizon"] = rat_str(trace.horizon);
  j["segments"] = nlohmann::json::array();
  for (const auto& s : trace.segments)
    j["segments"].push_back({{"thread", s.thread},
                             {"processing", s.processing},
                             {"start", rat_str(s.start)},
                             {"end", rat_str(s.end)}});
  j["events"] = nlohmann::json::array();
  for (const auto& e : trace.events)
    j["events"].push_back({{"time", rat_str(e.time)}, {"name", e.name}});
  j["misses"] = nlohmann::json::array();
  for (const auto& m : trace.deadline_misses)
    j["misses"].push_back({{"who", m.who}, {"time", rat_str(m.time)}, {"kind", m.kind}});
  j["latencies"] = nlohmann::json::object();
  for (const auto& [name, ls] : trace.reactivity_latencies) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& l : ls)
      arr.push_back({{"start", rat_str(l.chain_start)},
                     {"end", rat_str(l.chain_end)},
                     {"latency", rat_str(l.latency)}});
    j["latencies"][name] = arr;
  }
  return j.dump(2);
}

}  // namespace psa
