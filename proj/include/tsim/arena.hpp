// Game arena: the joint component space of model side and spec side, global moves and joint steps.
#pragma once

#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "tsim/model.hpp"
#include "tsim/symset.hpp"

namespace tsim {

/// A network member: an automaton plus the process identity used to tag its events.
struct Proc {
  TimedAutomaton ta;
  std::string tag;
};

enum class Side { Model, Spec };

/// A fairness predicate bound to the run whose labels it inspects.
struct SidedPred {
  FairPred pred;
  Side side = Side::Model;
};

/// The input of a simulation check. Processes listed first in `model_side` and `shared` in number are
/// the shared environment (env mode); the last entries of `model_side`/`spec_side` are M and S.
struct CheckInstance {
  std::vector<Proc> model_side;
  std::vector<Proc> spec_side;
  int shared = 0;
  MFAssumption model_fair;
  MFAssumption spec_fair;
  /// spec-side tag -> model-side tag, used when comparing labels
  std::map<std::string, std::string> tag_map;
  /// 0 selects max(1, largest constant)
  int cmfs = 0;
  bool extrapolate = true;
  /// Restricts the fixpoints to joint states reachable from the initial pairs (over-approximated).
  bool restrict_reachable = true;
  /// Leading processes of both sides that are copies of one environment. Their autonomous
  /// transitions carry a synthetic label, so each copy must follow the other.
  int mirrored = 0;

  static CheckInstance plain(const GBTA &model, const GBTA &spec);
};

struct Fire {
  int comp = 0;
  int trans = 0;
  bool operator==(const Fire &o) const { return comp == o.comp && trans == o.trans; }
};

/// A global move of one side: null, one autonomous/open transition, or a binary synchronization.
struct Move {
  std::vector<Fire> fires;
  std::vector<Event> label;
};

/// A joint step (e,f): model move e answered by spec move f.
struct Step {
  int model_move = -1;  // -1: null
  int spec_move = -1;   // -1: null
  std::vector<Fire> fires;
  const std::vector<Event> *model_label = nullptr;
  const std::vector<Event> *spec_label = nullptr;
};

class Arena {
public:
  explicit Arena(const CheckInstance &inst);
  Arena(const Arena &) = delete;
  Arena &operator=(const Arena &) = delete;

  const SpacePtr &joint() const { return joint_; }
  const SpacePtr &model_space() const { return model_; }
  int model_comps() const { return n_model_; }
  int shared_comps() const { return shared_; }
  const TimedAutomaton &automaton(int comp) const { return *procs_[static_cast<size_t>(comp)]; }
  bool is_spec_comp(int comp) const { return comp >= n_model_; }

  /// DBM indices of the auxiliary clocks.
  static constexpr int kZ = 1;
  static constexpr int kC = 2;
  int cmfs() const { return cmfs_; }

  const std::vector<Move> &model_moves() const { return model_moves_; }
  const std::vector<Move> &spec_moves() const { return spec_moves_; }
  /// Joint steps answering model move e (index e+1; slot 0 is the null model move).
  const std::vector<Step> &steps(int e) const { return steps_[static_cast<size_t>(e + 1)]; }
  /// Steps (null, g) with g a spec-internal move.
  const std::vector<Step> &internal_steps() const { return internal_; }
  /// Model-only steps (e, null) used on the model space.
  const Step &model_step(int e) const { return model_only_[static_cast<size_t>(e + 1)]; }

  /// Candidate (e,f) pairs examined while building the steps.
  uint64_t tuples_enumerated() const { return tuples_; }
  uint64_t joint_steps() const;

  /// Validity of model comps, spec comps, or both, at a discrete part of the given space.
  Fed validity(const Space &sp, DPart d, bool model, bool spec) const;
  Fed guard(const Space &sp, DPart src, const Step &s) const;

  /// Pre-image: states that can take step s now, land in eta, with validity at both ends.
  SymSet pre(const Step &s, const SymSet &eta) const;
  /// Same, only considering source discrete parts present in `sources`.
  SymSet pre_on(const Step &s, const SymSet &eta, const SymSet &sources) const;

  bool matches(const Step &s, const SidedPred &p) const;

  /// Joint states reachable from `init` by delays and joint steps, over-approximated by extrapolation.
  /// The auxiliary clocks are left unconstrained.
  SymSet reach(const SymSet &init) const;

  const std::vector<std::string> &diagnostics() const { return diag_; }

private:
  void build_moves(const std::vector<int> &comps, bool open_allowed, std::vector<Move> &out) const;
  std::string key(const std::vector<Event> &label, bool spec) const;
  Fed back_image(const Step &s, const Space &sp, DPart ds, DPart dt, const Fed &fed) const;

  SpacePtr joint_, model_;
  std::vector<const TimedAutomaton *> procs_;
  std::vector<std::string> tags_;
  std::vector<TimedAutomaton> owned_;
  int n_model_ = 0;
  int shared_ = 0;
  int mirrored_ = 0;
  int cmfs_ = 1;
  std::map<std::string, std::string> tag_map_;
  std::vector<Move> model_moves_, spec_moves_;
  std::vector<std::vector<Step>> steps_;
  std::vector<Step> internal_;
  std::vector<Step> model_only_;
  std::vector<std::vector<std::vector<int>>> reset_idx_;  // per comp, per transition: DBM indices
  uint64_t tuples_ = 0;
  std::vector<std::string> diag_;
  mutable std::vector<std::unordered_map<int, Fed>> inv_cache_model_, inv_cache_joint_;
};

}  // namespace tsim
