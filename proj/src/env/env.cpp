#include "tsim/env.hpp"

namespace tsim {

const char *to_string(Mode m) { return m == Mode::Env ? "env" : "classic"; }

std::string primed(const std::string &name) { return name + "'"; }

EnvInstance EnvInstance::of(const GBTA &env, const GBTA &model, const GBTA &spec) {
  EnvInstance inst;
  inst.env.push_back(Proc{env.automaton, env.automaton.name});
  inst.env_fair = env.fairness;
  inst.model = Proc{model.automaton, model.automaton.name};
  inst.model_fair = model.fairness;
  inst.spec = Proc{spec.automaton, spec.automaton.name};
  inst.spec_fair = spec.fairness;
  return inst;
}

namespace {

using NameMap = std::map<std::string, std::string>;

MFAssumption merged(const MFAssumption &a, const MFAssumption &b) {
  MFAssumption out = a;
  out.strong.insert(out.strong.end(), b.strong.begin(), b.strong.end());
  out.weak.insert(out.weak.end(), b.weak.begin(), b.weak.end());
  return out;
}

std::string mapped(const NameMap &m, const std::string &s) {
  auto it = m.find(s);
  return it == m.end() ? s : it->second;
}

TimedAutomaton rename_ta(const TimedAutomaton &ta, const NameMap &props, const NameMap &clocks,
                         const std::string &name) {
  TimedAutomaton out = ta;
  out.name = name;
  for (auto &l : out.locations) {
    l.name = mapped(props, l.name);
    l.lambda = rename(l.lambda, props, clocks);
  }
  for (auto &p : out.props) p = mapped(props, p);
  for (auto &c : out.clocks) c = mapped(clocks, c);
  out.initial = rename(out.initial, props, clocks);
  for (auto &t : out.transitions) {
    t.guard = rename(t.guard, props, clocks);
    for (auto &r : t.resets) r = mapped(clocks, r);
  }
  return out;
}

FairPred rename_fair(const FairPred &f, const NameMap &props, const NameMap &clocks) {
  FairPred out = f;
  if (out.is_event) {
    out.ev.pre = rename(f.ev.pre, props, clocks);
    out.ev.post = rename(f.ev.post, props, clocks);
  } else {
    out.state = rename(f.state, props, clocks);
  }
  return out;
}

}  // namespace

CheckInstance env_instance(const EnvInstance &inst) {
  CheckInstance c;
  c.model_side = inst.env;
  c.model_side.push_back(inst.model);
  c.spec_side.push_back(inst.spec);
  c.shared = static_cast<int>(inst.env.size());
  c.model_fair = merged(inst.env_fair, inst.model_fair);
  c.spec_fair = inst.spec_fair;
  c.tag_map[inst.spec.tag] = inst.model.tag;
  c.cmfs = inst.cmfs;
  c.extrapolate = inst.extrapolate;
  return c;
}

CheckInstance env_to_product(const EnvInstance &inst) {
  NameMap props, clocks;
  for (const auto &p : inst.env) {
    for (const auto &l : p.ta.locations) props[l.name] = primed(l.name);
    for (const auto &x : p.ta.props) props[x] = primed(x);
    for (const auto &x : p.ta.clocks) clocks[x] = primed(x);
  }
  std::set<std::string> model_syms(inst.model.ta.props.begin(), inst.model.ta.props.end());
  for (const auto &l : inst.model.ta.locations) model_syms.insert(l.name);
  model_syms.insert(inst.model.ta.clocks.begin(), inst.model.ta.clocks.end());

  CheckInstance c;
  c.model_side = inst.env;
  c.model_side.push_back(inst.model);
  for (const auto &p : inst.env) {
    std::set<std::string> ps, cs;
    for (const auto &t : p.ta.transitions) collect_symbols(t.guard, ps, cs);
    for (const auto &l : p.ta.locations) collect_symbols(l.lambda, ps, cs);
    for (const auto &s : ps)
      if (model_syms.count(s)) throw model_error("environment refers to model symbol " + s);
    for (const auto &s : cs)
      if (model_syms.count(s)) throw model_error("environment refers to model clock " + s);
    c.spec_side.push_back(Proc{rename_ta(p.ta, props, clocks, primed(p.ta.name)), p.tag});
  }
  c.spec_side.push_back(Proc{rename_ta(inst.spec.ta, props, clocks, inst.spec.ta.name), inst.spec.tag});
  c.model_fair = merged(inst.env_fair, inst.model_fair);
  for (const auto &f : inst.spec_fair.strong) c.spec_fair.strong.push_back(rename_fair(f, props, clocks));
  for (const auto &f : inst.spec_fair.weak) c.spec_fair.weak.push_back(rename_fair(f, props, clocks));
  c.tag_map[inst.spec.tag] = inst.model.tag;
  c.mirrored = static_cast<int>(inst.env.size());
  c.cmfs = inst.cmfs;
  c.extrapolate = inst.extrapolate;
  return c;
}

Verdict check_simulation_env(const EnvInstance &inst) { return check_simulation(env_instance(inst)); }

Verdict check_env(const EnvInstance &inst, Mode mode) {
  return check_simulation(mode == Mode::Env ? env_instance(inst) : env_to_product(inst));
}

}  // namespace tsim
