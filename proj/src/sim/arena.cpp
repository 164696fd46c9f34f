#include "tsim/arena.hpp"

#include <algorithm>
#include <set>

namespace tsim {

CheckInstance CheckInstance::plain(const GBTA &model, const GBTA &spec) {
  CheckInstance inst;
  inst.model_side.push_back(Proc{model.automaton, model.automaton.name});
  inst.spec_side.push_back(Proc{spec.automaton, spec.automaton.name});
  inst.model_fair = model.fairness;
  inst.spec_fair = spec.fairness;
  inst.tag_map[spec.automaton.name] = model.automaton.name;
  return inst;
}

namespace {

void fair_constants(const MFAssumption &a, std::map<std::string, int64_t> &per_clock, int64_t &overall) {
  auto visit = [&](const Pred &p) {
    std::set<std::string> ps, cs;
    collect_symbols(p, ps, cs);
    for (const auto &x : cs) per_clock[x] = std::max(per_clock[x], max_constant(p, x));
    overall = std::max(overall, max_constant(p));
  };
  for (const auto *set : {&a.strong, &a.weak})
    for (const auto &f : *set) {
      if (f.is_event) {
        visit(f.ev.pre);
        visit(f.ev.post);
      } else {
        visit(f.state);
      }
    }
}

}  // namespace

Arena::Arena(const CheckInstance &inst) {
  if (inst.model_side.empty() || inst.spec_side.empty())
    throw model_error("arena needs a model and a spec process");
  if (inst.shared < 0 || inst.shared >= static_cast<int>(inst.model_side.size()))
    throw model_error("invalid shared environment size");
  shared_ = inst.shared;
  mirrored_ = inst.mirrored;
  tag_map_ = inst.tag_map;
  owned_.reserve(inst.model_side.size() + inst.spec_side.size());
  for (const auto &p : inst.model_side) {
    owned_.push_back(p.ta);
    tags_.push_back(p.tag);
  }
  n_model_ = static_cast<int>(inst.model_side.size());
  for (const auto &p : inst.spec_side) {
    owned_.push_back(p.ta);
    tags_.push_back(p.tag);
  }
  for (const auto &t : owned_) procs_.push_back(&t);

  // Spaces: auxiliary clocks first, then model-side clocks, then spec-only clocks.
  std::vector<Space::Component> comps;
  std::vector<std::string> model_clocks{"$z", "$c"};
  std::vector<std::string> all_clocks;
  for (size_t i = 0; i < procs_.size(); ++i) {
    Space::Component c;
    c.name = tags_[i].empty() ? procs_[i]->name : tags_[i];
    for (const auto &l : procs_[i]->locations) c.locations.push_back(l.name);
    comps.push_back(std::move(c));
    if (static_cast<int>(i) < n_model_)
      model_clocks.insert(model_clocks.end(), procs_[i]->clocks.begin(), procs_[i]->clocks.end());
  }
  all_clocks = model_clocks;
  for (size_t i = static_cast<size_t>(n_model_); i < procs_.size(); ++i)
    all_clocks.insert(all_clocks.end(), procs_[i]->clocks.begin(), procs_[i]->clocks.end());

  // Constants and ceilings.
  std::map<std::string, int64_t> per_clock;
  int64_t overall = 0;
  auto visit = [&](const Pred &p) {
    std::set<std::string> ps, cs;
    collect_symbols(p, ps, cs);
    for (const auto &x : cs) per_clock[x] = std::max(per_clock[x], max_constant(p, x));
    overall = std::max(overall, max_constant(p));
  };
  for (const auto *ta : procs_) {
    visit(ta->initial);
    for (const auto &l : ta->locations) visit(l.lambda);
    for (const auto &t : ta->transitions) visit(t.guard);
  }
  fair_constants(inst.model_fair, per_clock, overall);
  fair_constants(inst.spec_fair, per_clock, overall);
  cmfs_ = inst.cmfs > 0 ? inst.cmfs : static_cast<int>(std::max<int64_t>(1, overall));

  auto make_space = [&](std::vector<Space::Component> cs, std::vector<std::string> clocks) {
    auto sp = std::make_shared<Space>(std::move(cs), std::move(clocks));
    for (const auto &x : sp->clock_names()) {
      auto it = per_clock.find(x);
      if (it != per_clock.end()) sp->set_ceiling(x, static_cast<int32_t>(it->second));
    }
    sp->set_ceiling("$z", cmfs_);
    sp->set_ceiling("$c", cmfs_);
    return sp;
  };
  std::vector<Space::Component> model_comps(comps.begin(), comps.begin() + n_model_);
  joint_ = make_space(comps, all_clocks);
  model_ = make_space(model_comps, model_clocks);

  for (const auto &[x, c] : per_clock)
    if (joint_->clock_index(x) < 0) diag_.push_back("unknown clock " + x);

  reset_idx_.resize(procs_.size());
  for (size_t i = 0; i < procs_.size(); ++i)
    for (const auto &t : procs_[i]->transitions) {
      std::vector<int> idx;
      for (const auto &r : t.resets) {
        int k = joint_->clock_index(r);
        if (k < 0) throw model_error("reset of unknown clock " + r);
        idx.push_back(k);
      }
      reset_idx_[i].push_back(std::move(idx));
    }

  // Global moves of each side.
  std::vector<int> mside, sside;
  for (int c = 0; c < n_model_; ++c) mside.push_back(c);
  for (int c = 0; c < shared_; ++c) sside.push_back(c);
  for (int c = n_model_; c < static_cast<int>(procs_.size()); ++c) sside.push_back(c);
  build_moves(mside, mside.size() == 1, model_moves_);
  build_moves(sside, sside.size() == 1, spec_moves_);

  auto shared_part = [&](const Move &m) {
    std::vector<Fire> s;
    for (const auto &f : m.fires)
      if (f.comp < shared_) s.push_back(f);
    return s;
  };
  auto merge = [](const Move *e, const Move *f) {
    std::vector<Fire> out;
    if (e) out = e->fires;
    if (f)
      for (const auto &x : f->fires)
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    return out;
  };
  static const std::vector<Event> kNoLabel;

  // Spec moves grouped by their shared-environment part (env mode enumerates only within a group).
  std::map<std::vector<std::pair<int, int>>, std::vector<int>> by_shared;
  for (size_t g = 0; g < spec_moves_.size(); ++g) {
    std::vector<std::pair<int, int>> k;
    for (const auto &f : shared_part(spec_moves_[g])) k.emplace_back(f.comp, f.trans);
    by_shared[k].push_back(static_cast<int>(g));
  }

  for (size_t g = 0; g < spec_moves_.size(); ++g) {
    const auto &m = spec_moves_[g];
    if (m.label.empty() && shared_part(m).empty())
      internal_.push_back(Step{-1, static_cast<int>(g), m.fires, &kNoLabel, &m.label});
  }

  steps_.resize(model_moves_.size() + 1);
  model_only_.push_back(Step{-1, -1, {}, &kNoLabel, &kNoLabel});
  steps_[0].push_back(Step{-1, -1, {}, &kNoLabel, &kNoLabel});
  for (const auto &s : internal_) steps_[0].push_back(s);
  tuples_ += spec_moves_.size() + 1;
  for (size_t e = 0; e < model_moves_.size(); ++e) {
    const auto &m = model_moves_[e];
    model_only_.push_back(Step{static_cast<int>(e), -1, m.fires, &m.label, &kNoLabel});
    auto &out = steps_[e + 1];
    if (m.label.empty()) {
      ++tuples_;
      out.push_back(Step{static_cast<int>(e), -1, m.fires, &m.label, &kNoLabel});
      continue;
    }
    const std::string want = key(m.label, false);
    std::vector<int> candidates;
    if (shared_ > 0) {
      std::vector<std::pair<int, int>> k;
      for (const auto &f : shared_part(m)) k.emplace_back(f.comp, f.trans);
      auto it = by_shared.find(k);
      if (it != by_shared.end()) candidates = it->second;
    } else {
      for (size_t g = 0; g < spec_moves_.size(); ++g) candidates.push_back(static_cast<int>(g));
    }
    tuples_ += candidates.size();
    for (int g : candidates) {
      const auto &f = spec_moves_[static_cast<size_t>(g)];
      if (f.label.empty() || key(f.label, true) != want) continue;
      out.push_back(Step{static_cast<int>(e), g, merge(&m, &f), &m.label, &f.label});
    }
  }
}

void Arena::build_moves(const std::vector<int> &comps, bool open_allowed, std::vector<Move> &out) const {
  auto tagged = [&](const Event &ev, int comp) {
    Event e = ev;
    if (e.tag.empty()) e.tag = tags_[static_cast<size_t>(comp)];
    return e;
  };
  for (int c : comps) {
    const auto &ta = *procs_[static_cast<size_t>(c)];
    for (size_t t = 0; t < ta.transitions.size(); ++t) {
      const auto &tr = ta.transitions[t];
      const bool mirror = c < mirrored_ || (c >= n_model_ && c < n_model_ + mirrored_);
      if (tr.events.empty() && mirror)
        out.push_back(Move{{Fire{c, static_cast<int>(t)}}, {tagged(Event{"~" + std::to_string(t), Dir::Send, ""}, c)}});
      else if (tr.events.empty())
        out.push_back(Move{{Fire{c, static_cast<int>(t)}}, {}});
      else if (open_allowed) {
        Move m{{Fire{c, static_cast<int>(t)}}, {}};
        for (const auto &e : tr.events) m.label.push_back(tagged(e, c));
        std::sort(m.label.begin(), m.label.end());
        out.push_back(std::move(m));
      }
    }
  }
  if (open_allowed) return;
  for (size_t a = 0; a < comps.size(); ++a)
    for (size_t b = a + 1; b < comps.size(); ++b) {
      int ca = comps[a], cb = comps[b];
      const auto &ta = *procs_[static_cast<size_t>(ca)];
      const auto &tb = *procs_[static_cast<size_t>(cb)];
      for (size_t i = 0; i < ta.transitions.size(); ++i) {
        const auto &x = ta.transitions[i];
        if (x.events.size() != 1) continue;
        for (size_t j = 0; j < tb.transitions.size(); ++j) {
          const auto &y = tb.transitions[j];
          if (y.events.size() != 1) continue;
          if (x.events[0].name != y.events[0].name || x.events[0].dir == y.events[0].dir) continue;
          Move m{{Fire{ca, static_cast<int>(i)}, Fire{cb, static_cast<int>(j)}},
                 {tagged(x.events[0], ca), tagged(y.events[0], cb)}};
          std::sort(m.label.begin(), m.label.end());
          out.push_back(std::move(m));
        }
      }
    }
}

std::string Arena::key(const std::vector<Event> &label, bool spec) const {
  std::vector<std::string> parts;
  for (const auto &e : label) {
    std::string tag = e.tag;
    if (spec) {
      auto it = tag_map_.find(tag);
      if (it != tag_map_.end()) tag = it->second;
    }
    parts.push_back(e.name + (e.dir == Dir::Send ? "!" : "?") + "@" + tag);
  }
  std::sort(parts.begin(), parts.end());
  std::string k;
  for (const auto &p : parts) k += p + ";";
  return k;
}

uint64_t Arena::joint_steps() const {
  uint64_t n = 0;
  for (const auto &v : steps_) n += v.size();
  return n;
}

Fed Arena::validity(const Space &sp, DPart d, bool model, bool spec) const {
  const bool joint = &sp == joint_.get();
  auto &cache = joint ? inv_cache_joint_ : inv_cache_model_;
  if (cache.empty()) cache.resize(procs_.size());
  Fed acc = Fed::universe(sp.nclocks());
  const int ncomp = sp.components();
  for (int c = 0; c < ncomp; ++c) {
    bool is_spec = c >= n_model_;
    if ((is_spec && !spec) || (!is_spec && !model)) continue;
    int l = sp.loc(d, c);
    auto &slot = cache[static_cast<size_t>(c)];
    auto it = slot.find(l);
    if (it == slot.end()) {
      DPart probe = sp.with(0, c, l);
      it = slot.emplace(l, eval_pred(sp, probe, procs_[static_cast<size_t>(c)]->locations[static_cast<size_t>(l)].lambda)).first;
    }
    acc = acc.meet(it->second);
    if (acc.empty()) break;
  }
  return acc;
}

Fed Arena::guard(const Space &sp, DPart src, const Step &s) const {
  Fed acc = Fed::universe(sp.nclocks());
  for (const auto &f : s.fires) {
    const auto &g = procs_[static_cast<size_t>(f.comp)]->transitions[static_cast<size_t>(f.trans)].guard;
    if (g->kind == PredNode::Kind::True) continue;
    acc = acc.meet(eval_pred(sp, src, g));
    if (acc.empty()) break;
  }
  return acc;
}

Fed Arena::back_image(const Step &s, const Space &sp, DPart ds, DPart dt, const Fed &fed) const {
  const bool joint = &sp == joint_.get();
  Fed land = fed.meet(validity(sp, dt, true, joint));
  if (land.empty()) return land;
  Fed back = land.map([&](DBM &z) {
    for (const auto &f : s.fires)
      for (int k : reset_idx_[static_cast<size_t>(f.comp)][static_cast<size_t>(f.trans)]) z.unreset(k);
  });
  back = back.meet(validity(sp, ds, true, joint));
  if (back.empty()) return back;
  return back.meet(guard(sp, ds, s));
}

SymSet Arena::pre(const Step &s, const SymSet &eta) const {
  const Space &sp = *eta.space();
  SymSet out(eta.space());
  for (const auto &[dt, fed] : eta.parts()) {
    bool ok = true;
    DPart ds = dt;
    for (const auto &f : s.fires) {
      const auto &tr = procs_[static_cast<size_t>(f.comp)]->transitions[static_cast<size_t>(f.trans)];
      if (sp.loc(dt, f.comp) != tr.target) {
        ok = false;
        break;
      }
      ds = sp.with(ds, f.comp, tr.source);
    }
    if (ok) out.add(ds, back_image(s, sp, ds, dt, fed));
  }
  return out;
}

SymSet Arena::pre_on(const Step &s, const SymSet &eta, const SymSet &sources) const {
  const Space &sp = *eta.space();
  SymSet out(eta.space());
  for (const auto &[ds, unused] : sources.parts()) {
    (void)unused;
    bool ok = true;
    DPart dt = ds;
    for (const auto &f : s.fires) {
      const auto &tr = procs_[static_cast<size_t>(f.comp)]->transitions[static_cast<size_t>(f.trans)];
      if (sp.loc(ds, f.comp) != tr.source) {
        ok = false;
        break;
      }
      dt = sp.with(dt, f.comp, tr.target);
    }
    if (!ok) continue;
    const Fed *fed = eta.find(dt);
    if (fed) out.add(ds, back_image(s, sp, ds, dt, *fed));
  }
  return out;
}

SymSet Arena::reach(const SymSet &init) const {
  const Space &sp = *joint_;
  auto loosen = [](DBM &z) {
    z.free(kZ);
    z.free(kC);
  };
  std::vector<const Step *> all;
  for (const auto &v : steps_)
    for (const auto &st : v) all.push_back(&st);
  for (const auto &st : internal_) all.push_back(&st);

  SymSet r = init.map_zones(loosen);
  SymSet frontier = r;
  while (!frontier.empty()) {
    SymSet next(joint_);
    for (const auto &[ds, fed] : frontier.parts()) {
      next.add(ds, fed.map([&](DBM &z) {
        z.up();
        loosen(z);
      }));
      for (const Step *st : all) {
        bool ok = true;
        DPart dt = ds;
        for (const auto &f : st->fires) {
          const auto &tr = procs_[static_cast<size_t>(f.comp)]->transitions[static_cast<size_t>(f.trans)];
          if (sp.loc(ds, f.comp) != tr.source) {
            ok = false;
            break;
          }
          dt = sp.with(dt, f.comp, tr.target);
        }
        if (!ok) continue;
        Fed src = fed.meet(validity(sp, ds, true, true));
        if (src.empty()) continue;
        src = src.meet(guard(sp, ds, *st));
        if (src.empty()) continue;
        Fed land = src.map([&](DBM &z) {
          for (const auto &f : st->fires)
            for (int k : reset_idx_[static_cast<size_t>(f.comp)][static_cast<size_t>(f.trans)]) z.reset(k);
        });
        land = land.meet(validity(sp, dt, true, true));
        if (!land.empty()) next.add(dt, land);
      }
    }
    next = next.extrapolated().minus(r);
    r = r.unite(next).merged();
    frontier = std::move(next);
  }
  return r;
}

bool Arena::matches(const Step &s, const SidedPred &p) const {
  if (!p.pred.is_event) return false;
  const auto *label = p.side == Side::Model ? s.model_label : s.spec_label;
  if (!label) return false;
  const auto &ev = p.pred.ev;
  for (const auto &e : *label) {
    if (e.name != ev.event) continue;
    if (ev.dir && *ev.dir != e.dir) continue;
    if (ev.tag && *ev.tag != e.tag) continue;
    return true;
  }
  return false;
}

}  // namespace tsim
