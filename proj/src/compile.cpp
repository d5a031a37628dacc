#include "psa/compile.hpp"

#include <algorithm>
#include <stdexcept>

namespace psa {

namespace {

// A quantity resolved to either a constant or a parameter.
struct Quant {
  std::optional<Rational> c;
  VarId p;
  LinExpr expr() const { return c ? lin(*c) : lin(p); }
};

struct ThreadCtx {
  const ThreadSpec* t;
  Quant offset, deadline;
  std::vector<const ProcessingSpec*> procs;  // hosted, slot order
};

}  // namespace

std::vector<VarId> CompiledModel::parameter_ids() const {
  std::vector<VarId> out;
  for (const auto& [name, id] : params) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

CompiledModel compile(const SystemSpec& spec, const CompileOptions& opts) {
  auto diags = validate(spec);
  if (has_errors(diags)) {
    std::string msg = "invalid system:";
    for (const auto& d : diags)
      if (d.severity == Diagnostic::Severity::Error) msg += "\n  " + d.message;
    throw std::invalid_argument(msg);
  }

  CompiledModel m;
  m.registry = std::make_unique<VarRegistry>();
  VarRegistry& reg = *m.registry;

  // ---- free-name resolution ----------------------------------------------
  std::set<std::string> free = opts.free;
  auto take = [&free](const std::string& n) {
    auto it = free.find(n);
    if (it == free.end()) return false;
    free.erase(it);
    return true;
  };
  bool all_offsets = take("offsets");
  bool all_deadlines = take("deadlines");
  std::set<std::string> free_offsets, free_deadlines, free_wcets;
  for (const auto& t : spec.threads) {
    if (all_offsets || take("offset" + t.name) || !t.offset.concrete())
      free_offsets.insert(t.name);
    if (all_deadlines || take("deadline" + t.name) || !t.deadline.concrete())
      free_deadlines.insert(t.name);
  }
  for (const auto& p : spec.processings)
    if (take("wcet" + p.name) || !p.wcet.concrete()) free_wcets.insert(p.name);
  if (!free.empty())
    throw std::invalid_argument("unknown free quantity: " + *free.begin());

  // ---- variable registry --------------------------------------------------
  VarId xurg = reg.add_clock("xUrg");
  std::map<std::string, VarId> xt, xexec, xact, xr;
  for (const auto& t : spec.threads) xt[t.name] = reg.add_clock("x" + t.name);
  for (const auto& p : spec.processings) {
    xexec[p.name] = reg.add_clock("xExec" + p.name);
    xact[p.name] = reg.add_clock("xAct" + p.name);
  }
  std::vector<const ReactivitySpec*> observers;
  for (const auto& name : opts.observers) {
    const ReactivitySpec* r = nullptr;
    for (const auto& rr : spec.reactivities)
      if (rr.name == name) r = &rr;
    if (!r) throw std::invalid_argument("unknown reactivity: " + name);
    observers.push_back(r);
  }
  for (const auto* r : observers) xr[r->name] = reg.add_clock("xR" + r->name);

  std::map<std::string, Quant> offq, dlq, wcq;
  for (const auto& t : spec.threads) {
    if (free_offsets.count(t.name)) {
      VarId p = reg.add_parameter("offset" + t.name);
      m.params["offset" + t.name] = p;
      offq[t.name] = Quant{std::nullopt, p};
    } else {
      offq[t.name] = Quant{*t.offset.value, VarId{}};
    }
    if (free_deadlines.count(t.name)) {
      VarId p = reg.add_parameter("deadline" + t.name);
      m.params["deadline" + t.name] = p;
      dlq[t.name] = Quant{std::nullopt, p};
    } else {
      dlq[t.name] = Quant{*t.deadline.value, VarId{}};
    }
  }
  for (const auto& p : spec.processings) {
    if (free_wcets.count(p.name)) {
      VarId v = reg.add_parameter("wcet" + p.name);
      m.params["wcet" + p.name] = v;
      wcq[p.name] = Quant{std::nullopt, v};
    } else {
      wcq[p.name] = Quant{*p.wcet.value, VarId{}};
    }
  }
  reg.freeze();
  const uint32_t dims = reg.size();
  Network& net = m.network;
  net.registry = &reg;

  // ---- actions (fixed registration order) ---------------------------------
  for (const auto& t : spec.threads) {
    ThreadSymbols sym;
    sym.clock = xt[t.name];
    sym.start = net.add_action("start" + t.name);
    sym.fin = net.add_action("fin" + t.name);
    sym.end = net.add_action("end" + t.name);
    sym.miss = net.add_action("miss" + t.name);
    if (free_offsets.count(t.name)) sym.offset_param = offq[t.name].p;
    if (free_deadlines.count(t.name)) sym.deadline_param = dlq[t.name].p;
    m.threads[t.name] = sym;
  }
  for (const auto& p : spec.processings) {
    ProcessingSymbols sym;
    sym.exec_clock = xexec[p.name];
    sym.act_clock = xact[p.name];
    sym.act = net.add_action("act" + p.name);
    sym.start = net.add_action("start" + p.name);
    sym.finish = net.add_action("finish" + p.name);
    sym.overrun = net.add_action("overrun" + p.name);
    if (free_wcets.count(p.name)) sym.wcet_param = wcq[p.name].p;
    m.processings[p.name] = sym;
  }
  std::map<std::string, ActionId> late;
  for (const auto* r : observers) late[r->name] = net.add_action("late" + r->name);
  for (uint32_t a = 0; a < net.action_names.size(); ++a)
    m.actions[net.action_names[a]] = ActionId{a};

  auto top = [dims](void) { return Polyhedron::universal(dims); };
  auto le = [dims](const LinExpr& a, const LinExpr& b) {
    return LinearConstraint::le(dims, a, b);
  };
  auto lt = [dims](const LinExpr& a, const LinExpr& b) {
    return LinearConstraint::lt(dims, a, b);
  };
  auto eqc = [dims](const LinExpr& a, const LinExpr& b) {
    return LinearConstraint::eq(dims, a, b);
  };
  auto inv1 = [&](const LinearConstraint& c) {
    Polyhedron p = Polyhedron::universal(dims);
    p.add(c);
    p.canonicalize();
    return p;
  };
  auto guard1 = inv1;

  // ---- activation automata (one per processing) ----------------------------
  // Clock anchored at system start: the activation grid of processing P is
  // c0*PT, c0*PT + PP, ... independent of the host thread's offset. Instance
  // k must have completed (finishP seen) when the next grid point arrives;
  // otherwise the automaton enters its overrun location.
  for (const auto& p : spec.processings) {
    const ThreadSpec* host = spec.host_of(p.name);
    const Slot* slot = spec.slot_of(p.name);
    const ProcessingSymbols& ps = m.processings[p.name];
    Rational anchor = Rational(slot->rest) * host->period;
    VarId xp = ps.act_clock;
    Automaton a;
    a.name = "act" + p.name;
    a.alphabet = {ps.act, ps.finish, ps.overrun};
    std::sort(a.alphabet.begin(), a.alphabet.end());
    a.locations.emplace_back("wait", inv1(le(lin(xp), lin(anchor))));
    a.locations.emplace_back("busy", inv1(le(lin(xp), lin(p.period))));
    a.locations.emplace_back("ok", inv1(le(lin(xp), lin(p.period))));
    a.locations.emplace_back("overrun", top());
    a.locations[3].is_bad = true;
    a.initial = 0;
    a.edges.push_back({0, guard1(eqc(lin(xp), lin(anchor))), ps.act, {xp}, 1});
    a.edges.push_back({1, top(), ps.finish, {}, 2});
    {
      Polyhedron g = Polyhedron::universal(dims);
      g.add(eqc(lin(xp), lin(p.period)));
      g.add(lt(lin(xexec[p.name]), wcq[p.name].expr()));
      g.canonicalize();
      a.edges.push_back({1, g, ps.overrun, {}, 3});
    }
    a.edges.push_back({2, guard1(eqc(lin(xp), lin(p.period))), ps.act, {xp}, 1});
    net.automata.push_back(std::move(a));
  }

  // ---- thread automata ------------------------------------------------------
  std::vector<ThreadCtx> tctx;
  for (const auto& t : spec.threads) {
    ThreadCtx c;
    c.t = &t;
    c.offset = offq[t.name];
    c.deadline = dlq[t.name];
    for (const auto& s : t.slots) c.procs.push_back(spec.processing(s.processing));
    tctx.push_back(c);
  }

  std::vector<std::pair<uint32_t, uint32_t>> urgent_locs;  // for xUrg scoping

  for (const auto& c : tctx) {
    const ThreadSpec& t = *c.t;
    const ThreadSymbols& ts = m.threads[t.name];
    VarId xT = ts.clock;
    long ncycles = t.cycles_per_maf();

    std::vector<VarId> all_exec;
    for (const auto* p : c.procs) all_exec.push_back(xexec[p->name]);

    Automaton a;
    a.name = "thread" + t.name;
    a.alphabet = {ts.start, ts.fin, ts.end, ts.miss};
    for (const auto* p : c.procs) {
      a.alphabet.push_back(m.processings[p->name].start);
      a.alphabet.push_back(m.processings[p->name].finish);
    }
    std::sort(a.alphabet.begin(), a.alphabet.end());
    a.alphabet.erase(std::unique(a.alphabet.begin(), a.alphabet.end()), a.alphabet.end());

    auto stop_all = all_exec;
    auto stop_except = [&all_exec](VarId keep) {
      std::vector<VarId> out;
      for (VarId v : all_exec)
        if (v != keep) out.push_back(v);
      return out;
    };

    // location indices are assigned as we append; record per-cycle anchors
    struct CycleLocs {
      std::vector<uint32_t> disp, exec;
      uint32_t done, idle, pub, first;
    };
    std::vector<CycleLocs> cl(ncycles);

    auto add_loc = [&a](const std::string& n, Polyhedron inv, std::vector<VarId> stop,
                        bool bad = false) {
      a.locations.emplace_back(n, std::move(inv));
      a.locations.back().stopped = std::move(stop);
      a.locations.back().is_bad = bad;
      return static_cast<uint32_t>(a.locations.size() - 1);
    };

    uint32_t wait_off =
        add_loc("wait_offset", inv1(le(lin(xT), c.offset.expr())), stop_all);
    Polyhedron urg_inv = inv1(le(lin(xurg), lin(0L)));
    for (long cy = 0; cy < ncycles; ++cy) {
      std::vector<const ProcessingSpec*> cyprocs;
      for (size_t si = 0; si < t.slots.size(); ++si)
        if (cy % t.slots[si].modulus == t.slots[si].rest) cyprocs.push_back(c.procs[si]);
      std::string pre = "c" + std::to_string(cy) + "_";
      for (const auto* p : cyprocs) {
        uint32_t d = add_loc(pre + "disp_" + p->name, urg_inv, stop_all);
        Polyhedron einv = Polyhedron::universal(dims);
        einv.add(le(lin(xT), lin(t.period)));
        einv.add(le(lin(xexec[p->name]), wcq[p->name].expr()));
        einv.canonicalize();
        uint32_t e = add_loc(pre + "exec_" + p->name, einv, stop_except(xexec[p->name]));
        cl[cy].disp.push_back(d);
        cl[cy].exec.push_back(e);
      }
      cl[cy].done = add_loc(pre + "done", urg_inv, stop_all);
      cl[cy].idle = add_loc(pre + "idle", inv1(le(lin(xT), c.deadline.expr())), stop_all);
      cl[cy].pub = add_loc(pre + "pub", inv1(le(lin(xT), lin(t.period))), stop_all);
      cl[cy].first = cyprocs.empty() ? cl[cy].done : cl[cy].disp.front();
    }
    uint32_t missed = add_loc("deadline_missed", top(), stop_all, true);

    // offset expiry starts the first cycle
    a.edges.push_back({wait_off, guard1(eqc(lin(xT), c.offset.expr())), ts.start,
                       {xT, xurg}, cl[0].first});
    for (long cy = 0; cy < ncycles; ++cy) {
      std::vector<const ProcessingSpec*> cyprocs;
      for (size_t si = 0; si < t.slots.size(); ++si)
        if (cy % t.slots[si].modulus == t.slots[si].rest) cyprocs.push_back(c.procs[si]);
      for (size_t j = 0; j < cyprocs.size(); ++j) {
        const ProcessingSpec* p = cyprocs[j];
        const ProcessingSymbols& ps = m.processings[p->name];
        a.edges.push_back({cl[cy].disp[j], top(), ps.start, {}, cl[cy].exec[j]});
        uint32_t next = (j + 1 < cyprocs.size()) ? cl[cy].disp[j + 1] : cl[cy].done;
        a.edges.push_back({cl[cy].exec[j],
                           guard1(eqc(lin(xexec[p->name]), wcq[p->name].expr())), ps.finish,
                           {xexec[p->name], xurg}, next});
        // deadline miss, genuinely unfinished work at the deadline instant
        Polyhedron g = Polyhedron::universal(dims);
        g.add(eqc(lin(xT), c.deadline.expr()));
        g.add(lt(lin(xexec[p->name]), wcq[p->name].expr()));
        g.canonicalize();
        a.edges.push_back({cl[cy].exec[j], g, ts.miss, {}, missed});
        // deadline miss, completion signal still pending past the deadline
        a.edges.push_back(
            {cl[cy].exec[j], guard1(lt(c.deadline.expr(), lin(xT))), ts.miss, {}, missed});
      }
      a.edges.push_back({cl[cy].done, top(), ts.fin, {}, cl[cy].idle});
      a.edges.push_back(
          {cl[cy].idle, guard1(eqc(lin(xT), c.deadline.expr())), ts.end, {}, cl[cy].pub});
      uint32_t nxt = cl[(cy + 1) % ncycles].first;
      a.edges.push_back(
          {cl[cy].pub, guard1(eqc(lin(xT), lin(t.period))), ts.start, {xT, xurg}, nxt});
    }

    uint32_t aidx = static_cast<uint32_t>(net.automata.size());
    for (long cy = 0; cy < ncycles; ++cy) {
      for (uint32_t d : cl[cy].disp) urgent_locs.emplace_back(aidx, d);
      urgent_locs.emplace_back(aidx, cl[cy].done);
    }
    net.automata.push_back(std::move(a));
  }

  // ---- FPS scheduler ---------------------------------------------------------
  // One location per set of active threads; the stop set freezes the
  // execution clocks of every active thread except the highest-priority one.
  {
    size_t n = spec.threads.size();
    if (n > 16) throw std::invalid_argument("scheduler limited to 16 threads");
    Automaton a;
    a.name = "scheduler";
    for (const auto& t : spec.threads) {
      a.alphabet.push_back(m.threads[t.name].start);
      a.alphabet.push_back(m.threads[t.name].fin);
    }
    std::sort(a.alphabet.begin(), a.alphabet.end());
    uint32_t nmask = 1u << n;
    for (uint32_t mask = 0; mask < nmask; ++mask) {
      std::string name = "run";
      int best = -1;
      for (size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) {
          name += "_" + spec.threads[i].name;
          if (best < 0 || spec.threads[i].priority < spec.threads[best].priority)
            best = static_cast<int>(i);
        }
      if (mask == 0) name = "idle";
      std::vector<VarId> stop;
      for (size_t i = 0; i < n; ++i) {
        if (!(mask & (1u << i)) || static_cast<int>(i) == best) continue;
        for (const auto& s : spec.threads[i].slots) stop.push_back(xexec[s.processing]);
      }
      std::sort(stop.begin(), stop.end());
      a.locations.emplace_back(name, top());
      a.locations.back().stopped = std::move(stop);
    }
    uint32_t conflict = static_cast<uint32_t>(a.locations.size());
    a.locations.emplace_back("conflict", top());
    a.locations.back().is_bad = true;
    a.initial = 0;
    for (uint32_t mask = 0; mask < nmask; ++mask) {
      for (size_t i = 0; i < n; ++i) {
        ActionId st = m.threads[spec.threads[i].name].start;
        ActionId fi = m.threads[spec.threads[i].name].fin;
        if (mask & (1u << i)) {
          a.edges.push_back({mask, top(), fi, {}, mask & ~(1u << i)});
          a.edges.push_back({mask, top(), st, {}, conflict});
        } else {
          a.edges.push_back({mask, top(), st, {}, mask | (1u << i)});
        }
      }
    }
    net.automata.push_back(std::move(a));
  }

  // ---- reactivity observers ---------------------------------------------------
  std::vector<std::pair<uint32_t, std::vector<uint32_t>>> xr_live;  // aut -> locs
  for (const auto* r : observers) {
    VarId clock = xr[r->name];
    std::vector<const ThreadSpec*> hosts;
    for (const auto& pn : r->chain) hosts.push_back(spec.host_of(pn));
    const ThreadSpec* final_host = hosts.back();
    ActionId ep = opts.endpoint == ReactivityEndpoint::Completion
                      ? m.threads[final_host->name].fin
                      : m.threads[final_host->name].end;

    Automaton a;
    a.name = "obs" + r->name;
    std::vector<ActionId> sigma{m.threads[hosts[0]->name].start, ep, late[r->name]};
    for (size_t i = 0; i < r->chain.size(); ++i) {
      sigma.push_back(m.processings[r->chain[i]].start);
      sigma.push_back(m.processings[r->chain[i]].finish);
      if (i + 1 < r->chain.size() && hosts[i + 1] != hosts[i]) {
        sigma.push_back(m.threads[hosts[i]->name].end);
        sigma.push_back(m.threads[hosts[i + 1]->name].start);
      }
    }
    std::sort(sigma.begin(), sigma.end());
    sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());
    a.alphabet = sigma;

    auto add_loc = [&a](const std::string& n, Polyhedron inv) {
      a.locations.emplace_back(n, std::move(inv));
      return static_cast<uint32_t>(a.locations.size() - 1);
    };
    uint32_t idle = add_loc("idle", top());
    // per element: wait_start, wait_finish; hops insert wait_pub/wait_hop
    std::vector<uint32_t> ws(r->chain.size()), wf(r->chain.size());
    for (size_t i = 0; i < r->chain.size(); ++i) {
      ws[i] = add_loc("wait_start_" + r->chain[i], top());
      wf[i] = add_loc("wait_finish_" + r->chain[i], top());
    }
    std::vector<uint32_t> wpub(r->chain.size(), UINT32_MAX), whop(r->chain.size(), UINT32_MAX);
    for (size_t i = 0; i + 1 < r->chain.size(); ++i) {
      if (hosts[i + 1] != hosts[i]) {
        wpub[i] = add_loc("wait_pub_" + std::to_string(i), top());
        whop[i] = add_loc("wait_hop_" + std::to_string(i), top());
      }
    }
    uint32_t wend = add_loc("wait_end", top());
    uint32_t good = add_loc("good", top());
    uint32_t bad = add_loc("bad", top());
    a.locations[bad].is_bad = true;
    a.initial = idle;

    auto loops = [&](uint32_t loc, const std::vector<ActionId>& except) {
      for (ActionId s : sigma) {
        if (s == late[r->name]) continue;
        if (std::find(except.begin(), except.end(), s) != except.end()) continue;
        a.edges.push_back({loc, top(), s, {}, loc});
      }
    };
    loops(idle, {});
    a.edges.push_back({idle, top(), m.threads[hosts[0]->name].start, {clock}, ws[0]});
    for (size_t i = 0; i < r->chain.size(); ++i) {
      const ProcessingSymbols& ps = m.processings[r->chain[i]];
      loops(ws[i], {ps.start});
      a.edges.push_back({ws[i], top(), ps.start, {}, wf[i]});
      loops(wf[i], {ps.finish, ps.start});  // a second start would be a new instance
      uint32_t next;
      if (i + 1 == r->chain.size()) next = wend;
      else if (hosts[i + 1] == hosts[i]) next = ws[i + 1];
      else next = wpub[i];
      a.edges.push_back({wf[i], top(), ps.finish, {}, next});
      if (i + 1 < r->chain.size() && hosts[i + 1] != hosts[i]) {
        ActionId pub = m.threads[hosts[i]->name].end;
        ActionId hopstart = m.threads[hosts[i + 1]->name].start;
        loops(wpub[i], {pub});
        a.edges.push_back({wpub[i], top(), pub, {}, whop[i]});
        // blocking: no edge for pub here kills wrong-guess branches
        loops(whop[i], {hopstart, pub});
        a.edges.push_back({whop[i], top(), hopstart, {}, ws[i + 1]});
      }
    }
    loops(wend, {ep});
    a.edges.push_back({wend, guard1(le(lin(clock), lin(r->bound))), ep, {}, good});
    a.edges.push_back({wend, guard1(lt(lin(r->bound), lin(clock))), ep, {}, bad});
    loops(good, {});
    if (opts.observer_early_bad) {
      Polyhedron g = guard1(lt(lin(r->bound), lin(clock)));
      std::vector<uint32_t> measuring;
      for (size_t i = 0; i < r->chain.size(); ++i) {
        measuring.push_back(ws[i]);
        measuring.push_back(wf[i]);
        if (wpub[i] != UINT32_MAX) measuring.push_back(wpub[i]);
        if (whop[i] != UINT32_MAX) measuring.push_back(whop[i]);
      }
      measuring.push_back(wend);
      for (uint32_t l : measuring) a.edges.push_back({l, g, late[r->name], {}, bad});
    }

    uint32_t aidx = static_cast<uint32_t>(net.automata.size());
    std::vector<uint32_t> live;
    for (uint32_t l = 0; l < a.locations.size(); ++l)
      if (l != idle && l != good && l != bad) live.push_back(l);
    xr_live.emplace_back(aidx, live);
    net.automata.push_back(std::move(a));
  }

  // ---- scoped clocks, bad set, parameter domain --------------------------------
  {
    ScopedClock sc;
    sc.clock = xurg;
    sc.live_at = urgent_locs;
    net.scoped_clocks.push_back(std::move(sc));
  }
  for (size_t i = 0; i < observers.size(); ++i) {
    ScopedClock sc;
    sc.clock = xr[observers[i]->name];
    for (uint32_t l : xr_live[i].second) sc.live_at.emplace_back(xr_live[i].first, l);
    net.scoped_clocks.push_back(std::move(sc));
  }

  for (uint32_t ai = 0; ai < net.automata.size(); ++ai)
    for (uint32_t li = 0; li < net.automata[ai].locations.size(); ++li)
      if (net.automata[ai].locations[li].is_bad) m.bad.targets.emplace_back(ai, li);

  Polyhedron dom = Polyhedron::universal(dims);
  for (const auto& t : spec.threads) {
    if (free_offsets.count(t.name)) {
      VarId p = offq[t.name].p;
      dom.add(LinearConstraint::ge(dims, lin(p), lin(0L)));
      dom.add(le(lin(p), lin(t.period)));
    }
    if (free_deadlines.count(t.name)) {
      VarId p = dlq[t.name].p;
      dom.add(lt(lin(0L), lin(p)));
      dom.add(le(lin(p), lin(t.period)));
    }
  }
  for (const auto& p : spec.processings) {
    if (free_wcets.count(p.name)) {
      VarId v = wcq[p.name].p;
      dom.add(lt(lin(0L), lin(v)));
      dom.add(le(lin(v), lin(p.period)));
    }
  }
  dom.canonicalize();
  net.initial_param_domain = std::move(dom);
  return m;
}

}  // namespace psa
