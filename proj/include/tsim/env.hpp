// Simulation against a shared environment, and its reduction to a plain product check.
#pragma once

#include <string>
#include <vector>

#include "tsim/sim.hpp"

namespace tsim {

struct EnvInstance {
  /// environment processes, stored once and shared by both runs
  std::vector<Proc> env;
  MFAssumption env_fair;
  Proc model;
  MFAssumption model_fair;
  Proc spec;
  MFAssumption spec_fair;
  int cmfs = 0;
  bool extrapolate = true;

  /// Single-automaton environment; process tags are the automaton names, S's events are
  /// compared as if issued by the model.
  static EnvInstance of(const GBTA &env, const GBTA &model, const GBTA &spec);
};

enum class Mode { Env, Classic };

const char *to_string(Mode m);

/// Name of the S-side copy of an environment symbol.
std::string primed(const std::string &name);

/// The shared-environment arena: environment components appear once, joint steps pair model and
/// spec moves that fire the same environment transitions.
CheckInstance env_instance(const EnvInstance &inst);
/// Classic form: E x M against a renamed copy E' x S.
CheckInstance env_to_product(const EnvInstance &inst);

Verdict check_simulation_env(const EnvInstance &inst);
Verdict check_env(const EnvInstance &inst, Mode mode);

}  // namespace tsim
