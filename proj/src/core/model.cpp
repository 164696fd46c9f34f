#include "tsim/model.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>

namespace tsim {

const char *to_string(Cmp c) {
  switch (c) {
    case Cmp::LT: return "<";
    case Cmp::LE: return "<=";
    case Cmp::EQ: return "==";
    case Cmp::GE: return ">=";
    case Cmp::GT: return ">";
  }
  return "?";
}

namespace {

Pred make(PredNode n) { return std::make_shared<const PredNode>(std::move(n)); }

const Pred &true_node() {
  static const Pred t = make(PredNode{PredNode::Kind::True, "", Cmp::LE, 0, {}});
  return t;
}
const Pred &false_node() {
  static const Pred f = make(PredNode{PredNode::Kind::False, "", Cmp::LE, 0, {}});
  return f;
}

}  // namespace

Pred p_true() { return true_node(); }
Pred p_false() { return false_node(); }

Pred p_prop(const std::string &name) {
  return make(PredNode{PredNode::Kind::Prop, name, Cmp::LE, 0, {}});
}

Pred p_clock(const std::string &clock, Cmp cmp, int64_t c) {
  if (c < 0) throw model_error("negative clock constant in atom over " + clock);
  return make(PredNode{PredNode::Kind::Clock, clock, cmp, c, {}});
}

Pred p_not(Pred a) {
  if (a->kind == PredNode::Kind::True) return p_false();
  if (a->kind == PredNode::Kind::False) return p_true();
  if (a->kind == PredNode::Kind::Not) return a->args[0];
  return make(PredNode{PredNode::Kind::Not, "", Cmp::LE, 0, {std::move(a)}});
}

Pred p_and(Pred a, Pred b) { return p_and(std::vector<Pred>{std::move(a), std::move(b)}); }

Pred p_and(const std::vector<Pred> &args) {
  std::vector<Pred> kept;
  for (const auto &a : args) {
    if (a->kind == PredNode::Kind::False) return p_false();
    if (a->kind == PredNode::Kind::True) continue;
    if (a->kind == PredNode::Kind::And)
      kept.insert(kept.end(), a->args.begin(), a->args.end());
    else
      kept.push_back(a);
  }
  if (kept.empty()) return p_true();
  if (kept.size() == 1) return kept[0];
  return make(PredNode{PredNode::Kind::And, "", Cmp::LE, 0, std::move(kept)});
}

Pred p_or(Pred a, Pred b) { return p_or(std::vector<Pred>{std::move(a), std::move(b)}); }

Pred p_or(const std::vector<Pred> &args) {
  std::vector<Pred> kept;
  for (const auto &a : args) {
    if (a->kind == PredNode::Kind::True) return p_true();
    if (a->kind == PredNode::Kind::False) continue;
    if (a->kind == PredNode::Kind::Or)
      kept.insert(kept.end(), a->args.begin(), a->args.end());
    else
      kept.push_back(a);
  }
  if (kept.empty()) return p_false();
  if (kept.size() == 1) return kept[0];
  return make(PredNode{PredNode::Kind::Or, "", Cmp::LE, 0, std::move(kept)});
}

std::string to_string(const Pred &p) {
  switch (p->kind) {
    case PredNode::Kind::True: return "true";
    case PredNode::Kind::False: return "false";
    case PredNode::Kind::Prop: return p->name;
    case PredNode::Kind::Clock:
      return p->name + " " + to_string(p->cmp) + " " + std::to_string(p->value);
    case PredNode::Kind::Not: return "!(" + to_string(p->args[0]) + ")";
    case PredNode::Kind::And:
    case PredNode::Kind::Or: {
      std::string sep = p->kind == PredNode::Kind::And ? " && " : " || ";
      std::string out = "(";
      for (size_t i = 0; i < p->args.size(); ++i) {
        if (i) out += sep;
        out += to_string(p->args[i]);
      }
      return out + ")";
    }
  }
  return "?";
}

bool structurally_equal(const Pred &a, const Pred &b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->name != b->name || a->args.size() != b->args.size()) return false;
  if (a->kind == PredNode::Kind::Clock && (a->cmp != b->cmp || a->value != b->value)) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!structurally_equal(a->args[i], b->args[i])) return false;
  return true;
}

void collect_symbols(const Pred &p, std::set<std::string> &props, std::set<std::string> &clocks) {
  if (p->kind == PredNode::Kind::Prop) props.insert(p->name);
  if (p->kind == PredNode::Kind::Clock) clocks.insert(p->name);
  for (const auto &a : p->args) collect_symbols(a, props, clocks);
}

int64_t max_constant(const Pred &p, const std::string &clock) {
  int64_t best = -1;
  if (p->kind == PredNode::Kind::Clock && (clock.empty() || p->name == clock)) best = p->value;
  for (const auto &a : p->args) best = std::max(best, max_constant(a, clock));
  return best;
}

Pred rename(const Pred &p, const std::map<std::string, std::string> &props,
            const std::map<std::string, std::string> &clocks) {
  switch (p->kind) {
    case PredNode::Kind::True:
    case PredNode::Kind::False: return p;
    case PredNode::Kind::Prop: {
      auto it = props.find(p->name);
      return it == props.end() ? p : p_prop(it->second);
    }
    case PredNode::Kind::Clock: {
      auto it = clocks.find(p->name);
      return it == clocks.end() ? p : p_clock(it->second, p->cmp, p->value);
    }
    default: {
      PredNode n = *p;
      for (auto &a : n.args) a = rename(a, props, clocks);
      return make(std::move(n));
    }
  }
}

bool Event::operator<(const Event &o) const {
  return std::tie(name, dir, tag) < std::tie(o.name, o.dir, o.tag);
}

std::string to_string(const Event &e) {
  std::string s = (e.dir == Dir::Send ? "!" : "?") + e.name;
  if (!e.tag.empty()) s += "@(" + e.tag + ")";
  return s;
}

int TimedAutomaton::location_index(const std::string &loc) const {
  for (size_t i = 0; i < locations.size(); ++i)
    if (locations[i].name == loc) return static_cast<int>(i);
  return -1;
}

Pred TimedAutomaton::invariance() const {
  std::vector<Pred> alts;
  for (const auto &l : locations) alts.push_back(l.lambda);
  return p_or(alts);
}

AutomatonBuilder::AutomatonBuilder(std::string name) { ta_.name = std::move(name); }

AutomatonBuilder &AutomatonBuilder::clock(const std::string &x) {
  ta_.clocks.push_back(x);
  return *this;
}

AutomatonBuilder &AutomatonBuilder::location(const std::string &q, Pred inv) {
  ta_.locations.push_back(Location{q, p_true()});
  ta_.props.push_back(q);
  inv_.push_back(std::move(inv));
  return *this;
}

AutomatonBuilder &AutomatonBuilder::initial(Pred init) {
  ta_.initial = std::move(init);
  return *this;
}

AutomatonBuilder &AutomatonBuilder::edge(const std::string &src, const std::string &dst,
                                         std::optional<Event> ev, Pred guard,
                                         std::vector<std::string> resets) {
  Transition t;
  t.source = ta_.location_index(src);
  t.target = ta_.location_index(dst);
  if (t.source < 0 || t.target < 0) throw model_error("unknown location in edge " + src + "->" + dst);
  if (ev) {
    t.events.push_back(*ev);
    ta_.alphabet.insert(ev->name);
  }
  t.guard = std::move(guard);
  t.resets = std::move(resets);
  ta_.transitions.push_back(std::move(t));
  return *this;
}

Pred location_lambda(const TimedAutomaton &ta, int q, Pred inv) {
  std::vector<Pred> parts{p_prop(ta.locations[q].name)};
  for (size_t i = 0; i < ta.locations.size(); ++i)
    if (static_cast<int>(i) != q) parts.push_back(p_not(p_prop(ta.locations[i].name)));
  parts.push_back(std::move(inv));
  return p_and(parts);
}

TimedAutomaton AutomatonBuilder::build() const {
  TimedAutomaton out = ta_;
  for (size_t i = 0; i < out.locations.size(); ++i)
    out.locations[i].lambda = location_lambda(out, static_cast<int>(i), inv_[i]);
  return out;
}

FairPred FairPred::of_state(Pred p) {
  FairPred f;
  f.state = std::move(p);
  return f;
}

FairPred FairPred::of_event(EventPred e) {
  FairPred f;
  f.is_event = true;
  f.ev = std::move(e);
  return f;
}

std::string to_string(const FairPred &f) {
  if (!f.is_event) return to_string(f.state);
  std::string ev = f.ev.event;
  if (f.ev.dir) ev = (*f.ev.dir == Dir::Send ? "!" : "?") + ev;
  if (f.ev.tag) ev += "@(" + *f.ev.tag + ")";
  return to_string(f.ev.pre) + " " + ev + " " + to_string(f.ev.post);
}

// ---------------------------------------------------------------------------
// Satisfiability: enumerate propositions, then intersect per-clock intervals.

namespace {

struct Interval {
  // lower bound: value lo, strict lo_s; upper bound hi (inf when hi_inf), strict hi_s
  int64_t lo = 0;
  bool lo_s = false;
  int64_t hi = 0;
  bool hi_s = false;
  bool hi_inf = true;

  bool empty() const {
    if (hi_inf) return false;
    if (lo < hi) return false;
    if (lo > hi) return true;
    return lo_s || hi_s;
  }
  void meet(const Interval &o) {
    if (o.lo > lo || (o.lo == lo && o.lo_s)) {
      lo = o.lo;
      lo_s = o.lo_s;
    }
    if (!o.hi_inf && (hi_inf || o.hi < hi || (o.hi == hi && o.hi_s))) {
      hi = o.hi;
      hi_s = o.hi_s;
      hi_inf = false;
    }
  }
};

using Box = std::map<std::string, Interval>;

std::vector<Box> atom_boxes(const std::string &x, Cmp cmp, int64_t c, bool negated) {
  auto iv = [](int64_t lo, bool los, std::optional<int64_t> hi, bool his) {
    Interval i;
    i.lo = lo;
    i.lo_s = los;
    if (hi) {
      i.hi = *hi;
      i.hi_s = his;
      i.hi_inf = false;
    }
    return i;
  };
  std::vector<Interval> parts;
  if (negated) {
    switch (cmp) {
      case Cmp::LT: cmp = Cmp::GE; break;
      case Cmp::LE: cmp = Cmp::GT; break;
      case Cmp::GE: cmp = Cmp::LT; break;
      case Cmp::GT: cmp = Cmp::LE; break;
      case Cmp::EQ:
        parts.push_back(iv(0, false, c, true));
        parts.push_back(iv(c, true, std::nullopt, false));
        break;
    }
  }
  if (parts.empty()) {
    switch (cmp) {
      case Cmp::LT: parts.push_back(iv(0, false, c, true)); break;
      case Cmp::LE: parts.push_back(iv(0, false, c, false)); break;
      case Cmp::EQ: parts.push_back(iv(c, false, c, false)); break;
      case Cmp::GE: parts.push_back(iv(c, false, std::nullopt, false)); break;
      case Cmp::GT: parts.push_back(iv(c, true, std::nullopt, false)); break;
    }
  }
  std::vector<Box> out;
  for (auto &p : parts)
    if (!p.empty()) out.push_back(Box{{x, p}});
  return out;
}

std::vector<Box> boxes(const Pred &p, const std::map<std::string, bool> &props, bool neg) {
  using K = PredNode::Kind;
  switch (p->kind) {
    case K::True: return neg ? std::vector<Box>{} : std::vector<Box>{Box{}};
    case K::False: return neg ? std::vector<Box>{Box{}} : std::vector<Box>{};
    case K::Prop: {
      bool v = props.at(p->name);
      return (v != neg) ? std::vector<Box>{Box{}} : std::vector<Box>{};
    }
    case K::Clock: return atom_boxes(p->name, p->cmp, p->value, neg);
    case K::Not: return boxes(p->args[0], props, !neg);
    case K::And:
    case K::Or: {
      bool conj = (p->kind == K::And) != neg;
      if (!conj) {
        std::vector<Box> out;
        for (const auto &a : p->args) {
          auto b = boxes(a, props, neg);
          out.insert(out.end(), b.begin(), b.end());
        }
        return out;
      }
      std::vector<Box> acc{Box{}};
      for (const auto &a : p->args) {
        auto b = boxes(a, props, neg);
        std::vector<Box> next;
        for (const auto &x : acc)
          for (const auto &y : b) {
            Box m = x;
            bool ok = true;
            for (const auto &[clk, iv] : y) {
              auto it = m.find(clk);
              if (it == m.end())
                m.emplace(clk, iv);
              else {
                it->second.meet(iv);
                if (it->second.empty()) ok = false;
              }
            }
            if (ok) next.push_back(std::move(m));
          }
        acc = std::move(next);
        if (acc.empty()) break;
      }
      return acc;
    }
  }
  return {};
}

}  // namespace

bool satisfiable(const Pred &p) {
  std::set<std::string> props, clocks;
  collect_symbols(p, props, clocks);
  std::vector<std::string> pv(props.begin(), props.end());
  if (pv.size() > 20) throw model_error("too many propositions for satisfiability check");
  for (uint64_t mask = 0; mask < (uint64_t{1} << pv.size()); ++mask) {
    std::map<std::string, bool> val;
    for (size_t i = 0; i < pv.size(); ++i) val[pv[i]] = (mask >> i) & 1;
    if (!boxes(p, val, false).empty()) return true;
  }
  return false;
}

std::vector<Diagnostic> validate(const TimedAutomaton &ta, const std::set<std::string> &external_props,
                                 const std::set<std::string> &external_clocks) {
  std::vector<Diagnostic> out;
  std::set<std::string> props(ta.props.begin(), ta.props.end());
  std::set<std::string> clocks(ta.clocks.begin(), ta.clocks.end());
  auto in_scope_props = props;
  in_scope_props.insert(external_props.begin(), external_props.end());
  auto in_scope_clocks = clocks;
  in_scope_clocks.insert(external_clocks.begin(), external_clocks.end());

  if (ta.locations.empty()) out.push_back({"no locations", "automaton " + ta.name + " has no locations"});
  std::set<std::string> seen;
  for (const auto &l : ta.locations)
    if (!seen.insert(l.name).second)
      out.push_back({"duplicate location", "location " + l.name + " declared twice"});

  auto check_pred = [&](const Pred &p, const std::string &where) {
    std::set<std::string> ps, cs;
    collect_symbols(p, ps, cs);
    for (const auto &x : ps)
      if (!in_scope_props.count(x))
        out.push_back({"unknown proposition", "proposition " + x + " in " + where});
    for (const auto &x : cs)
      if (!in_scope_clocks.count(x)) out.push_back({"unknown clock", "clock " + x + " in " + where});
  };

  check_pred(ta.initial, "initial condition");
  for (const auto &l : ta.locations) check_pred(l.lambda, "invariant of " + l.name);
  for (size_t i = 0; i < ta.transitions.size(); ++i) {
    const auto &t = ta.transitions[i];
    std::string where = "transition " + std::to_string(i);
    if (t.source < 0 || t.target < 0 || t.source >= (int)ta.locations.size() ||
        t.target >= (int)ta.locations.size())
      out.push_back({"unknown location", where + " has an endpoint outside the location set"});
    check_pred(t.guard, where);
    for (const auto &r : t.resets)
      if (!clocks.count(r)) out.push_back({"unknown clock", "reset of " + r + " in " + where});
    if (t.events.size() > 1 && std::any_of(t.events.begin(), t.events.end(),
                                           [](const Event &e) { return e.tag.empty(); }))
      out.push_back({"multiple events", where + " carries more than one untagged event"});
    for (const auto &e : t.events)
      if (!ta.alphabet.count(e.name))
        out.push_back({"unknown event", "event " + e.name + " in " + where});
  }
  // Mutual exclusion of location invariants; only meaningful when symbols are in scope.
  bool scoped = std::none_of(out.begin(), out.end(), [](const Diagnostic &d) {
    return d.kind == "unknown proposition" || d.kind == "unknown clock";
  });
  if (scoped) {
    for (size_t i = 0; i < ta.locations.size(); ++i)
      for (size_t j = i + 1; j < ta.locations.size(); ++j)
        if (satisfiable(p_and(ta.locations[i].lambda, ta.locations[j].lambda)))
          out.push_back({"overlapping invariants",
                         "invariants of " + ta.locations[i].name + " and " + ta.locations[j].name +
                             " are jointly satisfiable"});
  }
  return out;
}

std::vector<int> compatible_transitions(const TimedAutomaton &a, int e, const TimedAutomaton &b) {
  std::vector<int> out;
  if (e == kNull) {
    out.push_back(kNull);
    for (size_t i = 0; i < b.transitions.size(); ++i)
      if (b.transitions[i].events.empty()) out.push_back(static_cast<int>(i));
    return out;
  }
  const auto &ev = a.transitions.at(e).events;
  if (ev.empty()) return {kNull};
  auto sorted = [](std::vector<Event> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  auto want = sorted(ev);
  for (size_t i = 0; i < b.transitions.size(); ++i)
    if (sorted(b.transitions[i].events) == want) out.push_back(static_cast<int>(i));
  return out;
}

TimedAutomaton build_product(const TimedAutomaton &a, const TimedAutomaton &b) {
  auto clash = [](const std::vector<std::string> &x, const std::vector<std::string> &y,
                  const char *what) {
    for (const auto &s : x)
      if (std::find(y.begin(), y.end(), s) != y.end())
        throw model_error(std::string("product: shared ") + what + " " + s);
  };
  clash(a.props, b.props, "proposition");
  clash(a.clocks, b.clocks, "clock");
  std::vector<std::string> la, lb;
  for (const auto &l : a.locations) la.push_back(l.name);
  for (const auto &l : b.locations) lb.push_back(l.name);
  clash(la, lb, "location");

  TimedAutomaton p;
  p.name = a.name + "*" + b.name;
  p.props = a.props;
  p.props.insert(p.props.end(), b.props.begin(), b.props.end());
  p.clocks = a.clocks;
  p.clocks.insert(p.clocks.end(), b.clocks.begin(), b.clocks.end());
  p.initial = p_and(a.initial, b.initial);
  p.alphabet = a.alphabet;
  p.alphabet.insert(b.alphabet.begin(), b.alphabet.end());
  const int nb = static_cast<int>(b.locations.size());
  for (const auto &qa : a.locations)
    for (const auto &qb : b.locations)
      p.locations.push_back(Location{"(" + qa.name + "," + qb.name + ")", p_and(qa.lambda, qb.lambda)});
  auto idx = [nb](int i, int j) { return i * nb + j; };
  auto tagged = [](Event e, const std::string &who) {
    if (e.tag.empty()) e.tag = who;
    return e;
  };
  for (const auto &e : a.transitions)
    if (e.events.empty())
      for (int j = 0; j < nb; ++j)
        p.transitions.push_back(Transition{idx(e.source, j), idx(e.target, j), {}, e.guard, e.resets});
  for (const auto &f : b.transitions)
    if (f.events.empty())
      for (int i = 0; i < (int)a.locations.size(); ++i)
        p.transitions.push_back(Transition{idx(i, f.source), idx(i, f.target), {}, f.guard, f.resets});
  for (const auto &e : a.transitions) {
    if (e.events.size() != 1) continue;
    for (const auto &f : b.transitions) {
      if (f.events.size() != 1) continue;
      const auto &x = e.events[0];
      const auto &y = f.events[0];
      if (x.name != y.name || x.dir == y.dir) continue;
      Transition t;
      t.source = idx(e.source, f.source);
      t.target = idx(e.target, f.target);
      t.events = {tagged(x, a.name), tagged(y, b.name)};
      t.guard = p_and(e.guard, f.guard);
      t.resets = e.resets;
      for (const auto &r : f.resets)
        if (std::find(t.resets.begin(), t.resets.end(), r) == t.resets.end()) t.resets.push_back(r);
      p.transitions.push_back(std::move(t));
    }
  }
  return p;
}

bool eval_predicate(const ConcreteState &s, const Pred &p) {
  using K = PredNode::Kind;
  switch (p->kind) {
    case K::True: return true;
    case K::False: return false;
    case K::Prop: {
      auto it = s.props.find(p->name);
      if (it == s.props.end()) throw model_error("proposition out of scope: " + p->name);
      return it->second;
    }
    case K::Clock: {
      auto it = s.clocks.find(p->name);
      if (it == s.clocks.end()) throw model_error("clock out of scope: " + p->name);
      double v = it->second, c = static_cast<double>(p->value);
      switch (p->cmp) {
        case Cmp::LT: return v < c;
        case Cmp::LE: return v <= c;
        case Cmp::EQ: return v == c;
        case Cmp::GE: return v >= c;
        case Cmp::GT: return v > c;
      }
      return false;
    }
    case K::Not: return !eval_predicate(s, p->args[0]);
    case K::And:
      for (const auto &a : p->args)
        if (!eval_predicate(s, a)) return false;
      return true;
    case K::Or:
      for (const auto &a : p->args)
        if (eval_predicate(s, a)) return true;
      return false;
  }
  return false;
}

}  // namespace tsim
