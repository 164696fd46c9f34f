#include "tsim/sim.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace tsim {

const char *to_string(Outcome o) {
  switch (o) {
    case Outcome::Simulates: return "SIMULATES";
    case Outcome::NotSimulates: return "NOT-SIMULATES";
    case Outcome::RejectedNonUSF: return "REJECTED-NON-USF";
  }
  return "?";
}

void Stats::observe(const SymSet &s) { peak_zones = std::max(peak_zones, s.zone_count()); }

int Stats::total_iterations(const std::string &kind) const {
  auto it = iterations.find(kind);
  if (it == iterations.end()) return 0;
  return std::accumulate(it->second.begin(), it->second.end(), 0);
}

std::string Stats::str() const {
  std::ostringstream os;
  os << "tuples=" << tuples_enumerated << " joint_steps=" << joint_steps << " step_evaluations=" << step_evaluations
     << " peak_zones=" << peak_zones;
  for (const auto &[k, v] : iterations)
    os << " iter_" << k << "=" << total_iterations(k) << " runs_" << k << "=" << v.size();
  os << " seconds=" << seconds;
  return os.str();
}

namespace {

FairPred negate(const FairPred &p) {
  FairPred q = p;
  if (q.is_event)
    q.ev.post = p_not(p.ev.post);
  else
    q.state = p_not(p.state);
  return q;
}

}  // namespace

std::vector<FairPred> flip(const std::vector<FairPred> &delta, const std::vector<FairPred> &deltaPrime) {
  std::vector<FairPred> out = delta;
  for (const auto &p : deltaPrime) out.push_back(negate(p));
  return out;
}

FlippedAssumptions flip_assumptions(const MFAssumption &model, const MFAssumption &spec) {
  FlippedAssumptions fa;
  for (const auto &p : model.strong) fa.strong_side.push_back({p, Side::Model});
  for (const auto &p : spec.weak) fa.strong_side.push_back({negate(p), Side::Spec});
  for (const auto &p : model.weak) fa.weak_side.push_back({p, Side::Model});
  for (const auto &p : spec.strong) fa.weak_side.push_back({negate(p), Side::Spec});
  return fa;
}

std::vector<Pred> FlippedAssumptions::weak_states() const {
  std::vector<Pred> out;
  for (const auto &p : weak_side)
    if (!p.pred.is_event) out.push_back(p.pred.state);
  return out;
}

std::vector<SidedPred> FlippedAssumptions::weak_events() const {
  std::vector<SidedPred> out;
  for (const auto &p : weak_side)
    if (p.pred.is_event) out.push_back(p);
  return out;
}

Engine::Engine(const CheckInstance &inst) : inst_(inst), arena_(inst_) {
  const auto &J = joint();
  const auto &M = model_space();
  vv_ = SymSet(J);
  for (DPart d = 0; d < J->dpart_count(); ++d) vv_.set(d, arena_.validity(*J, d, true, true));
  if (inst_.restrict_reachable) {
    std::vector<Pred> init;
    for (int c = 0; c < J->components(); ++c) init.push_back(arena_.automaton(c).initial);
    reach_ = arena_.reach(joint_pred(p_and(init)).meet(vv_));
    vv_ = vv_.meet(reach_);
  }
  vm_model_ = SymSet(M);
  for (DPart d = 0; d < M->dpart_count(); ++d) vm_model_.set(d, arena_.validity(*M, d, true, false));
  const int64_t C = arena_.cmfs();
  z_le_joint_ = vv_.meet(joint_pred(p_clock("$z", Cmp::LE, C)));
  z_lt_joint_ = vv_.meet(joint_pred(p_clock("$z", Cmp::LT, C)));
  z_eq_joint_ = vv_.meet(joint_pred(p_clock("$z", Cmp::EQ, C)));
  c_gt_joint_ = vv_.meet(joint_pred(p_clock("$c", Cmp::GT, C)));
  z_le_model_ = vm_model_.meet(model_pred(p_clock("$z", Cmp::LE, C)));
  z_eq_model_ = vm_model_.meet(model_pred(p_clock("$z", Cmp::EQ, C)));
  c_gt_model_ = vm_model_.meet(model_pred(p_clock("$c", Cmp::GT, C)));
  stats_.tuples_enumerated = arena_.tuples_enumerated();
  stats_.joint_steps = arena_.joint_steps();
}

SymSet Engine::compile(const Pred &p, bool joint_space) const {
  return SymSet::from_pred(joint_space ? joint() : model_space(), p);
}

void Engine::fix(SymSet &s) const {
  if (inst_.extrapolate) s = s.extrapolated();
  if (inst_.restrict_reachable && s.space() == joint()) s = s.meet(reach_);
  s = s.merged();
}

SymSet Engine::unreset_cycle(const SymSet &s) const {
  return s.map_zones([](DBM &z) { z.unreset(Arena::kC); });
}

std::vector<Engine::EventSets> Engine::compile_events(const std::vector<SidedPred> &evs, bool joint_space) const {
  std::vector<EventSets> out;
  for (const auto &p : evs) {
    if (!p.pred.is_event) continue;
    out.push_back({p, compile(p.pred.ev.pre, joint_space), compile(p.pred.ev.post, joint_space)});
  }
  return out;
}

SymSet Engine::model_step_pre(int e, const SymSet &eta, const std::vector<EventSets> &wev) const {
  const Step &s = arena_.model_step(e);
  SymSet r = arena_.pre(s, eta);
  for (const auto &w : wev) {
    if (!arena_.matches(s, w.pred)) continue;
    r = r.meet(arena_.pre(s, eta.meet(w.post))).unite(r.minus(w.pre));
  }
  return r;
}

SymSet Engine::model_until(const SymSet &path, const SymSet &target, const std::vector<EventSets> &wev,
                           const EventSets *goal) {
  const int n = static_cast<int>(arena_.model_moves().size());
  SymSet base = target.meet(path);
  if (goal) {
    for (int e = 0; e < n; ++e) {
      const Step &s = arena_.model_step(e);
      if (!arena_.matches(s, goal->pred)) continue;
      base = base.unite(arena_.pre(s, goal->post).meet(goal->pre));
    }
    base = base.meet(path);
  }
  SymSet z(path.space());
  int it = 0;
  while (true) {
    ++it;
    SymSet g = base;
    for (int e = 0; e < n; ++e) g = g.unite(model_step_pre(e, z, wev));
    SymSet zn = elapse_pre(path, g.meet(path)).unite(z);
    fix(zn);
    stats_.observe(zn);
    if (zn.subset_of(z)) break;
    z = std::move(zn);
  }
  stats_.note("until", it);
  return z;
}

SymSet Engine::fair_states(const std::vector<SidedPred> &strong, const std::vector<SidedPred> &weak) {
  SymSet path0 = vm_model_;
  std::vector<SidedPred> wev_list;
  for (const auto &w : weak) {
    if (w.pred.is_event)
      wev_list.push_back(w);
    else
      path0 = path0.meet(compile(w.pred.state, false));
  }
  auto wev = compile_events(wev_list, false);
  std::vector<SidedPred> goals = strong;
  if (goals.empty()) goals.push_back({FairPred::of_state(p_true()), Side::Model});
  SymSet w = path0;
  int it = 0;
  while (!w.empty()) {
    ++it;
    SymSet wn = w;
    for (const auto &phi : goals) {
      SymSet x;
      if (phi.pred.is_event) {
        EventSets g{phi, compile(phi.pred.ev.pre, false).meet(path0),
                    w.meet(compile(phi.pred.ev.post, false)).meet(c_gt_model_)};
        x = model_until(path0, SymSet(model_space()), wev, &g);
      } else {
        x = model_until(path0, w.meet(compile(phi.pred.state, false)).meet(c_gt_model_), wev);
      }
      wn = wn.meet(unreset_cycle(x));
      if (wn.empty()) break;
    }
    fix(wn);
    wn = wn.meet(w);
    if (w.subset_of(wn)) break;
    w = std::move(wn);
  }
  stats_.note("fair", it);
  return model_until(vm_model_, w, {});
}

const SymSet &Engine::model_fair_states() {
  if (!fair_) {
    std::vector<SidedPred> strong, weak;
    for (const auto &p : inst_.model_fair.strong) strong.push_back({p, Side::Model});
    for (const auto &p : inst_.model_fair.weak) weak.push_back({p, Side::Model});
    fair_ = fair_states(strong, weak);
  }
  return *fair_;
}

const SymSet &Engine::lifted_m1(int e) {
  auto it = m1_lifted_.find(e);
  if (it != m1_lifted_.end()) return it->second;
  const SymSet &fair = model_fair_states();
  SymSet land = e < 0 ? fair.meet(vm_model_) : arena_.pre(arena_.model_step(e), fair);
  land = land.meet(z_eq_model_);
  SymSet m1 = elapse_pre(z_le_model_, land);
  fix(m1);
  return m1_lifted_.emplace(e, lift(m1, joint())).first->second;
}

SymSet Engine::force_step(int e, const std::vector<EventSets> &wev, const SymSet &eta1, const StepGoal &goal) {
  const SymSet &m1 = lifted_m1(e);
  if (m1.empty()) return SymSet(joint());
  // Spec refutation: from the current pair with z in [0,C], S (moving internally and then
  // answering at z = C) escapes the model's goal.
  SymSet search = (goal.outside ? *goal.outside : z_le_joint_.minus(goal.target)).meet(m1);
  SymSet at_c = search.meet(z_eq_joint_);
  const SymSet bl = goal.bad_landing ? *goal.bad_landing : vv_.minus(goal.target);
  SymSet tgt = search.meet(z_lt_joint_).minus(eta1);
  SymSet bl_no_post = goal.event ? bl.minus(goal.event_post) : SymSet(joint());
  for (const auto &s : arena_.steps(e)) {
    ++stats_.step_evaluations;
    SymSet r;
    if (goal.event && arena_.matches(s, *goal.event))
      r = arena_.pre_on(s, bl_no_post, at_c).unite(arena_.pre_on(s, bl, at_c).minus(goal.event_pre));
    else
      r = arena_.pre_on(s, bl, at_c);
    for (const auto &w : wev)
      if (arena_.matches(s, w.pred)) r = r.unite(arena_.pre_on(s, vv_.minus(w.post), at_c).meet(w.pre));
    tgt = tgt.unite(r.meet(at_c));
  }
  SymSet ref = tgt;
  int it = 0;
  while (true) {
    ++it;
    SymSet g = ref;
    for (const auto &s : arena_.internal_steps()) g = g.unite(arena_.pre_on(s, ref, search));
    SymSet rn = elapse_pre(search, g.meet(search)).unite(ref);
    fix(rn);
    if (rn.subset_of(ref)) break;
    ref = std::move(rn);
  }
  stats_.note("refute", it);
  stats_.observe(ref);
  // eta1 and vv do not mention z, so they can narrow m1 before the subtraction.
  return m1.meet(eta1).meet(vv_).minus(ref).quantify({}, {Arena::kZ}, false);
}

SymSet Engine::one_step_force(int e, const std::vector<SidedPred> &weak_events, const SymSet &eta1, StepGoal goal) {
  return force_step(e, compile_events(weak_events, true), eta1, goal);
}

SymSet Engine::force(const std::vector<EventSets> &wev, const SymSet &eta1, const SymSet &eta2,
                     const std::optional<SidedPred> &event, const SymSet *event_pre, const SymSet *event_post) {
  const int n = static_cast<int>(arena_.model_moves().size());
  SymSet y = eta2;
  int it = 0;
  while (true) {
    ++it;
    StepGoal g{y, vv_.minus(y), z_le_joint_.minus(y), event, event_pre ? *event_pre : SymSet(joint()),
               event_post ? *event_post : SymSet(joint())};
    SymSet yn = y;
    for (int e = -1; e < n; ++e) yn = yn.unite(force_step(e, wev, eta1, g));
    fix(yn);
    stats_.observe(yn);
    if (yn.subset_of(y)) break;
    y = std::move(yn);
  }
  stats_.note("attractor", it);
  return y;
}

SymSet Engine::multi_step_force(const std::vector<SidedPred> &weak_events, const SymSet &eta1, const SymSet &eta2,
                                const std::optional<SidedPred> &event, const SymSet *event_pre,
                                const SymSet *event_post) {
  return force(compile_events(weak_events, true), eta1, eta2, event, event_pre, event_post);
}

SymSet Engine::csr_states(const FlippedAssumptions &fa) {
  if (inst_.spec_fair.size() == 0) return SymSet(joint());
  SymSet spms = vv_;
  for (const auto &p : fa.weak_states()) spms = spms.meet(compile(p, true));
  auto epms = compile_events(fa.weak_events(), true);
  std::vector<SidedPred> goals = fa.strong_side;
  if (goals.empty()) goals.push_back({FairPred::of_state(p_true()), Side::Model});
  SymSet w = spms;
  int it = 0;
  while (!w.empty()) {
    ++it;
    SymSet wn = w;
    for (const auto &phi : goals) {
      SymSet x;
      if (phi.pred.is_event) {
        SymSet pre = compile(phi.pred.ev.pre, true);
        SymSet post = w.meet(compile(phi.pred.ev.post, true)).meet(c_gt_joint_);
        x = force(epms, spms, SymSet(joint()), phi, &pre, &post);
      } else {
        x = force(epms, spms, w.meet(compile(phi.pred.state, true)).meet(c_gt_joint_), std::nullopt, nullptr,
                  nullptr);
      }
      wn = wn.meet(unreset_cycle(x));
      if (wn.empty()) break;
    }
    fix(wn);
    wn = wn.meet(w);
    if (w.subset_of(wn)) break;
    w = std::move(wn);
  }
  stats_.note("csr", it);
  return w;
}

SymSet Engine::isr_states(const FlippedAssumptions &fa) {
  SymSet csr = csr_states(fa);
  return force({}, vv_, csr, std::nullopt, nullptr, nullptr);
}

SymSet Engine::first_class_isr() { return force({}, vv_, SymSet(joint()), std::nullopt, nullptr, nullptr); }

SymSet Engine::spec_internal_until(const SymSet &eta1, const SymSet &eta2) {
  SymSet path = eta1.meet(vv_);
  SymSet z(joint());
  int it = 0;
  while (true) {
    ++it;
    SymSet g = eta2.meet(vv_);
    for (const auto &s : arena_.internal_steps()) g = g.unite(arena_.pre(s, z));
    SymSet zn = elapse_pre(path, g.meet(path)).unite(g.meet(eta2)).unite(z);
    fix(zn);
    if (zn.subset_of(z)) break;
    z = std::move(zn);
  }
  stats_.note("spec_until", it);
  return z;
}

Verdict Engine::check() {
  auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  if (inst_.spec_fair.size() > 1) {
    v.outcome = Outcome::RejectedNonUSF;
    v.reason = "spec assumption has " + std::to_string(inst_.spec_fair.size()) + " members";
    v.stats = stats_;
    return v;
  }
  auto fa = flip_assumptions(inst_.model_fair, inst_.spec_fair);
  SymSet r = isr_states(fa);

  std::vector<Pred> mi, si;
  for (int c = 0; c < arena_.model_comps(); ++c) mi.push_back(arena_.automaton(c).initial);
  for (int c = arena_.model_comps(); c < joint()->components(); ++c) si.push_back(arena_.automaton(c).initial);
  SymSet pairs = joint_pred(p_and(p_and(mi), p_and(si))).meet(vv_).minus(r);
  SymSet covered = project(pairs, model_space());
  SymSet bad = model_pred(p_and(mi)).meet(vm_model_).minus(covered);

  v.outcome = bad.empty() ? Outcome::Simulates : Outcome::NotSimulates;
  if (!bad.empty()) {
    v.witness = bad;
    v.reason = "initial model states without a winning spec partner";
  }
  stats_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.stats = stats_;
  return v;
}

Verdict check_simulation(const CheckInstance &inst) {
  auto t0 = std::chrono::steady_clock::now();
  Engine eng(inst);
  Verdict v = eng.check();
  // Include arena construction and the reachability pass.
  v.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return v;
}

}  // namespace tsim
