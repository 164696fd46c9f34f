#include <json.hpp>

#include "tsim/lang.hpp"

namespace tsim::lang {

std::string symbol(const std::string &name, long long k) { return name + "@" + std::to_string(k); }

namespace {

struct SemanticError {
  LangDiagnostic diag;
};

[[noreturn]] void fail(SrcLoc at, const std::string &msg) { throw SemanticError{{"semantic", at, msg}}; }

struct Scope {
  std::optional<long long> ps;
  std::map<std::string, long long> binds;
  std::optional<long long> self;  // process whose symbols are meant by unqualified names
};

long long eval(const IntExpr &e, const Scope &s, SrcLoc at) {
  switch (e.kind) {
    case IntExpr::Kind::Lit: return e.value;
    case IntExpr::Kind::PS:
      if (!s.ps) fail(at, "#PS is not defined");
      return *s.ps;
    case IntExpr::Kind::Var: {
      auto it = s.binds.find(e.var);
      if (it == s.binds.end()) fail(at, "unbound index variable " + e.var);
      return it->second;
    }
    case IntExpr::Kind::Add: return eval(e.args[0], s, at) + eval(e.args[1], s, at);
    case IntExpr::Kind::Sub: return eval(e.args[0], s, at) - eval(e.args[1], s, at);
    case IntExpr::Kind::Neg: return -eval(e.args[0], s, at);
  }
  return 0;
}

std::vector<long long> range(const Quant &q, const Scope &s) {
  long long lo = eval(q.lo, s, q.loc), hi = eval(q.hi, s, q.loc);
  if (lo > hi) fail(q.loc, "empty range " + std::to_string(lo) + ".." + std::to_string(hi) + " for " + q.var);
  if (hi - lo > 100000) fail(q.loc, "range for " + q.var + " too large");
  std::vector<long long> out;
  for (long long v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

struct ProcSyms {
  std::set<std::string> locations, clocks, events;
};

class Expander {
public:
  Expander(const RequirementFile &f, std::optional<long long> ps) : f_(f) { scope_.ps = ps ? ps : f.ps; }

  Network run() {
    Network net;
    if (!scope_.ps) fail(SrcLoc{1, 1}, "#PS is not defined");
    net.ps = *scope_.ps;
    collect_instances();
    resolve_roles(net);
    for (const auto &[k, inst] : instances_) net.procs[static_cast<int>(k)] = build(*inst.decl, k, inst.binds);
    assumptions(net);
    return net;
  }

private:
  struct Instance {
    const ProcessDecl *decl = nullptr;
    std::map<std::string, long long> binds;
  };

  void collect_instances() {
    for (const auto &p : f_.processes) {
      std::vector<std::pair<long long, std::map<std::string, long long>>> ks;
      if (p.range) {
        for (long long v : range(*p.range, scope_)) ks.push_back({v, {{p.range->var, v}}});
      } else {
        ks.push_back({eval(p.index, scope_, p.loc), {}});
      }
      for (auto &[k, b] : ks) {
        if (scope_.ps && (k < 1 || k > *scope_.ps))
          fail(p.loc, "process index " + std::to_string(k) + " outside 1..#PS");
        if (instances_.count(k)) fail(p.loc, "process " + std::to_string(k) + " declared twice");
        instances_[k] = Instance{&p, b};
        ProcSyms &sy = syms_[k];
        for (const auto &l : p.locations)
          if (!sy.locations.insert(l.name).second)
            fail(p.loc, "location " + l.name + " declared twice in process " + std::to_string(k));
        for (const auto &c : p.clocks)
          if (!sy.clocks.insert(c).second)
            fail(p.loc, "clock " + c + " declared twice in process " + std::to_string(k));
        if (p.locations.empty()) fail(p.loc, "process " + std::to_string(k) + " has no locations");
        for (const auto &t : p.transitions)
          if (t.dir) sy.events.insert(t.event);
      }
    }
  }

  void resolve_roles(Network &net) {
    auto indices = [&](const std::vector<IntExpr> &v, const char *role) {
      std::vector<int> out;
      for (const auto &e : v) {
        long long k = eval(e, scope_, {});
        if (!instances_.count(k))
          fail({}, std::string(role) + " index " + std::to_string(k) + " names no declared process");
        out.push_back(static_cast<int>(k));
      }
      return out;
    };
    net.model = indices(f_.model_indices, "model");
    net.spec = indices(f_.spec_indices, "spec");
    for (int m : net.model)
      for (int s : net.spec)
        if (m == s) fail({}, "process " + std::to_string(m) + " is both model and spec");
    for (const auto &[k, inst] : instances_) {
      int ki = static_cast<int>(k);
      if (std::find(net.model.begin(), net.model.end(), ki) == net.model.end() &&
          std::find(net.spec.begin(), net.spec.end(), ki) == net.spec.end())
        net.env.push_back(ki);
    }
  }

  std::string resolve(const PredAst &p, const Scope &s, bool clock) {
    long long k;
    if (p.proc) {
      k = eval(*p.proc, s, p.loc);
    } else {
      if (!s.self) fail(p.loc, "symbol " + p.name + " needs a process index here");
      k = *s.self;
    }
    auto it = syms_.find(k);
    if (it == syms_.end()) fail(p.loc, "process " + std::to_string(k) + " is not declared");
    const auto &set = clock ? it->second.clocks : it->second.locations;
    if (!set.count(p.name))
      fail(p.loc, std::string("unknown ") + (clock ? "clock " : "location ") + p.name + " of process " +
                      std::to_string(k));
    return symbol(p.name, k);
  }

  Pred pred(const PredAst &p, const Scope &s) {
    switch (p.kind) {
      case PredAst::Kind::True: return p_true();
      case PredAst::Kind::False: return p_false();
      case PredAst::Kind::Ref: return p_prop(resolve(p, s, false));
      case PredAst::Kind::Clock: return p_clock(resolve(p, s, true), p.cmp, p.value);
      case PredAst::Kind::Not: return p_not(pred(p.args[0], s));
      case PredAst::Kind::And:
      case PredAst::Kind::Or: {
        std::vector<Pred> args;
        for (const auto &a : p.args) args.push_back(pred(a, s));
        return p.kind == PredAst::Kind::And ? p_and(args) : p_or(args);
      }
    }
    return p_true();
  }

  Proc build(const ProcessDecl &d, long long k, const std::map<std::string, long long> &binds) {
    Scope s = scope_;
    s.binds = binds;
    s.self = k;
    AutomatonBuilder b(symbol(d.name.value_or("p"), k));
    for (const auto &c : d.clocks) b.clock(symbol(c, k));
    for (const auto &l : d.locations) b.location(symbol(l.name, k), l.inv ? pred(*l.inv, s) : p_true());
    if (d.initial) {
      b.initial(pred(*d.initial, s));
    } else {
      std::vector<Pred> init{p_prop(symbol(d.locations.front().name, k))};
      for (const auto &c : d.clocks) init.push_back(p_clock(symbol(c, k), Cmp::EQ, 0));
      b.initial(p_and(init));
    }
    const ProcSyms &sy = syms_.at(k);
    for (const auto &t : d.transitions) {
      for (const auto *q : {&t.source, &t.target})
        if (!sy.locations.count(*q)) fail(t.loc, "unknown location " + *q + " of process " + std::to_string(k));
      std::vector<std::string> resets;
      for (const auto &r : t.resets) {
        if (!sy.clocks.count(r)) fail(t.loc, "reset of unknown clock " + r);
        resets.push_back(symbol(r, k));
      }
      std::optional<Event> ev;
      if (t.dir) ev = Event{t.event, *t.dir, std::to_string(k)};
      b.edge(symbol(t.source, k), symbol(t.target, k), ev, t.guard ? pred(*t.guard, s) : p_true(), resets);
    }
    return Proc{b.build(), std::to_string(k)};
  }

  FairPred fair(const FairItem &it, const Scope &s) {
    if (!it.is_event) return FairPred::of_state(pred(*it.pre, s));
    EventPred e;
    bool known = false;
    for (const auto &[k, sy] : syms_) known = known || sy.events.count(it.event);
    if (!known) fail(it.loc, "no process synchronizes on event " + it.event);
    e.event = it.event;
    e.dir = it.dir;
    if (it.tag) {
      long long t = eval(*it.tag, s, it.loc);
      if (!syms_.count(t)) fail(it.loc, "event tag " + std::to_string(t) + " names no declared process");
      e.tag = std::to_string(t);
    }
    if (it.pre) e.pre = pred(*it.pre, s);
    if (it.post) e.post = pred(*it.post, s);
    return FairPred::of_event(std::move(e));
  }

  void assumptions(Network &net) {
    for (const auto &b : f_.assumes) {
      Scope s = scope_;
      MFAssumption *dst = &net.env_fair;
      if (b.owner) {
        long long k = eval(*b.owner, s, b.loc);
        if (!instances_.count(k)) fail(b.loc, "assumptions for undeclared process " + std::to_string(k));
        s.self = k;
        s.binds = instances_.at(k).binds;
        int ki = static_cast<int>(k);
        if (std::find(net.model.begin(), net.model.end(), ki) != net.model.end())
          dst = &net.model_fair;
        else if (std::find(net.spec.begin(), net.spec.end(), ki) != net.spec.end())
          dst = &net.spec_fair;
      }
      auto add = [&](const FairItem &it, const Scope &sc) {
        (it.strong ? dst->strong : dst->weak).push_back(fair(it, sc));
      };
      size_t split = b.quant ? b.quant_from : b.items.size();
      for (size_t i = 0; i < split; ++i) add(b.items[i], s);
      if (!b.quant) continue;
      for (long long v : range(*b.quant, s)) {
        Scope sc = s;
        sc.binds[b.quant->var] = v;
        for (size_t i = split; i < b.items.size(); ++i) add(b.items[i], sc);
      }
    }
  }

  const RequirementFile &f_;
  Scope scope_;
  std::map<long long, Instance> instances_;
  std::map<long long, ProcSyms> syms_;
};

}  // namespace

ExpandResult expand(const RequirementFile &f, std::optional<long long> ps) {
  ExpandResult r;
  try {
    r.net = Expander(f, ps).run();
  } catch (const SemanticError &e) {
    r.diags.push_back(e.diag);
  } catch (const model_error &e) {
    r.diags.push_back({"semantic", {}, e.what()});
  }
  return r;
}

std::optional<RoleAssumptions> expand_assumptions(const RequirementFile &f, long long ps,
                                                  std::vector<LangDiagnostic> &diags) {
  auto r = expand(f, ps);
  diags.insert(diags.end(), r.diags.begin(), r.diags.end());
  if (!r.net) return std::nullopt;
  return RoleAssumptions{r.net->model_fair, r.net->spec_fair, r.net->env_fair};
}

EnvInstance to_env_instance(const Network &net) {
  if (net.model.size() != 1 || net.spec.size() != 1)
    throw model_error("a check needs exactly one model and one spec process, got " +
                      std::to_string(net.model.size()) + " and " + std::to_string(net.spec.size()));
  EnvInstance inst;
  for (int k : net.env) inst.env.push_back(net.procs.at(k));
  inst.env_fair = net.env_fair;
  inst.model = net.procs.at(net.model.front());
  inst.model_fair = net.model_fair;
  inst.spec = net.procs.at(net.spec.front());
  inst.spec_fair = net.spec_fair;
  return inst;
}

CheckInstance to_check_instance(const Network &net, Mode mode) {
  EnvInstance inst = to_env_instance(net);
  return mode == Mode::Env ? env_instance(inst) : env_to_product(inst);
}

std::string to_json(const Network &net) {
  using nlohmann::json;
  auto fairness = [](const MFAssumption &a) {
    json j = {{"strong", json::array()}, {"weak", json::array()}};
    for (const auto &f : a.strong) j["strong"].push_back(to_string(f));
    for (const auto &f : a.weak) j["weak"].push_back(to_string(f));
    return j;
  };
  json j;
  j["ps"] = net.ps;
  j["model"] = net.model;
  j["spec"] = net.spec;
  j["env"] = net.env;
  j["processes"] = json::array();
  for (const auto &[k, p] : net.procs) {
    json jp;
    jp["index"] = k;
    jp["name"] = p.ta.name;
    jp["tag"] = p.tag;
    jp["clocks"] = p.ta.clocks;
    jp["initial"] = to_string(p.ta.initial);
    for (const auto &l : p.ta.locations) jp["locations"].push_back({{"name", l.name}, {"lambda", to_string(l.lambda)}});
    jp["transitions"] = json::array();
    for (const auto &t : p.ta.transitions) {
      json jt = {{"source", p.ta.locations[t.source].name},
                 {"target", p.ta.locations[t.target].name},
                 {"guard", to_string(t.guard)},
                 {"resets", t.resets},
                 {"events", json::array()}};
      for (const auto &e : t.events) jt["events"].push_back(to_string(e));
      jp["transitions"].push_back(jt);
    }
    j["processes"].push_back(jp);
  }
  j["fairness"] = {{"model", fairness(net.model_fair)},
                   {"spec", fairness(net.spec_fair)},
                   {"env", fairness(net.env_fair)}};
  return j.dump(2);
}

}  // namespace tsim::lang
