// Fair simulation checking by symbolic forcing fixpoints over state-pairs.
#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tsim/arena.hpp"
#include "tsim/symset.hpp"

namespace tsim {

enum class Outcome { Simulates, NotSimulates, RejectedNonUSF };

const char *to_string(Outcome o);

struct Stats {
  std::map<std::string, std::vector<int>> iterations;  // per fixpoint kind, one entry per run
  uint64_t tuples_enumerated = 0;
  uint64_t joint_steps = 0;
  uint64_t step_evaluations = 0;
  size_t peak_zones = 0;
  double seconds = 0;

  void note(const std::string &kind, int iters) { iterations[kind].push_back(iters); }
  void observe(const SymSet &s);
  int total_iterations(const std::string &kind) const;
  std::string str() const;
};

struct Verdict {
  Outcome outcome = Outcome::Simulates;
  std::optional<SymSet> witness;
  Stats stats;
  std::string reason;
};

/// Delta united with the negation of every member of deltaPrime (state: not eta; event: post negated).
std::vector<FairPred> flip(const std::vector<FairPred> &delta, const std::vector<FairPred> &deltaPrime);

/// Flipped assumptions of a check, with each predicate bound to the run it inspects.
struct FlippedAssumptions {
  std::vector<SidedPred> strong_side;
  std::vector<SidedPred> weak_side;

  std::vector<Pred> weak_states() const;
  std::vector<SidedPred> weak_events() const;
};

FlippedAssumptions flip_assumptions(const MFAssumption &model, const MFAssumption &spec);

/// Goal of one forcing step: land in `target`, or (when set) take a step matching `event` from
/// `event_pre` into `event_post`.
struct StepGoal {
  SymSet target;
  /// valid pairs outside target; derived from target when left empty
  std::optional<SymSet> bad_landing;
  /// pairs with z <= C outside target; derived from target when left empty
  std::optional<SymSet> outside;
  std::optional<SidedPred> event;
  SymSet event_pre;
  SymSet event_post;
};

class Engine {
public:
  explicit Engine(const CheckInstance &inst);

  const Arena &arena() const { return arena_; }
  const SpacePtr &joint() const { return arena_.joint(); }
  const SpacePtr &model_space() const { return arena_.model_space(); }
  Stats &stats() { return stats_; }

  SymSet joint_pred(const Pred &p) const { return SymSet::from_pred(joint(), p); }
  SymSet model_pred(const Pred &p) const { return SymSet::from_pred(model_space(), p); }
  /// V_M and V_S over the joint space.
  const SymSet &valid_pairs() const { return vv_; }
  const SymSet &valid_model() const { return vm_model_; }

  /// ef(eta): pairs that can take the joint step (e,f) now and land in eta.
  SymSet trans_pre(const Step &s, const SymSet &eta) const { return arena_.pre(s, eta); }
  /// Pairs from which S alone (model idle) reaches eta2 through eta1.
  SymSet spec_internal_until(const SymSet &eta1, const SymSet &eta2);
  /// Model states (model space) starting a non-Zeno run satisfying the model's own assumptions.
  const SymSet &model_fair_states();
  /// Model-side fair states for an arbitrary assumption over the model space.
  SymSet fair_states(const std::vector<SidedPred> &strong, const std::vector<SidedPred> &weak);

  /// exists z. one forcing step with model move e (-1 for the null move), staying in eta1.
  SymSet one_step_force(int e, const std::vector<SidedPred> &weak_events, const SymSet &eta1, StepGoal goal);
  /// Least fixpoint of eta2 or one forcing step (over all model moves) into the current set.
  SymSet multi_step_force(const std::vector<SidedPred> &weak_events, const SymSet &eta1, const SymSet &eta2,
                          const std::optional<SidedPred> &event = std::nullopt,
                          const SymSet *event_pre = nullptr, const SymSet *event_post = nullptr);
  SymSet csr_states(const FlippedAssumptions &fa);
  SymSet isr_states(const FlippedAssumptions &fa);
  /// Pairs from which the model forces a dead end of S.
  SymSet first_class_isr();

  Verdict check();

private:
  /// An event predicate with pre and post compiled over one space.
  struct EventSets {
    SidedPred pred;
    SymSet pre, post;
  };

  std::vector<EventSets> compile_events(const std::vector<SidedPred> &evs, bool joint_space) const;
  SymSet model_step_pre(int e, const SymSet &eta, const std::vector<EventSets> &wev) const;
  SymSet model_until(const SymSet &path, const SymSet &target, const std::vector<EventSets> &wev,
                     const EventSets *goal = nullptr);
  const SymSet &lifted_m1(int e);
  SymSet force_step(int e, const std::vector<EventSets> &wev, const SymSet &eta1, const StepGoal &goal);
  SymSet force(const std::vector<EventSets> &wev, const SymSet &eta1, const SymSet &eta2,
               const std::optional<SidedPred> &event, const SymSet *event_pre, const SymSet *event_post);
  SymSet compile(const Pred &p, bool joint_space) const;
  SymSet unreset_cycle(const SymSet &s) const;
  void fix(SymSet &s) const;

  CheckInstance inst_;
  Arena arena_;
  Stats stats_;
  SymSet vv_, vm_model_;
  SymSet reach_;
  SymSet z_le_joint_, z_lt_joint_, z_eq_joint_, c_gt_joint_;
  SymSet z_le_model_, z_eq_model_, c_gt_model_;
  std::optional<SymSet> fair_;
  std::map<int, SymSet> m1_lifted_;
};

/// Convenience: check a plain model/spec pair.
Verdict check_simulation(const CheckInstance &inst);

}  // namespace tsim
