#include <doctest.h>

#include "fixtures.hpp"
#include "random_ta.hpp"
#include "tsim/region.hpp"
#include "tsim/sim.hpp"

using namespace tsim;
using namespace tsim::testing;

namespace {

bool simulates(const GBTA &m, const GBTA &s, bool extrapolate = true) {
  auto inst = CheckInstance::plain(m, s);
  inst.extrapolate = extrapolate;
  return check_simulation(inst).outcome == Outcome::Simulates;
}

MFAssumption at_most_one(MFAssumption f) {
  if (f.size() <= 1) return f;
  MFAssumption out;
  if (!f.strong.empty())
    out.strong.push_back(f.strong[0]);
  else
    out.weak.push_back(f.weak[0]);
  return out;
}

bool equivalent(const Pred &a, const Pred &b) {
  return !satisfiable(p_and(a, p_not(b))) && !satisfiable(p_and(b, p_not(a)));
}

ConcreteState initial_state(const TimedAutomaton &a) {
  ConcreteState st;
  for (const auto &l : a.locations) st.props[l.name] = false;
  st.props[a.locations[0].name] = true;
  for (const auto &c : a.clocks) st.clocks[c] = 0;
  return st;
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("worked example without fairness is refuted") {
    Verdict v = check_simulation(CheckInstance::plain(GBTA{fig1_model(), {}}, GBTA{fig1_spec(), {}}));
    CHECK(v.outcome == Outcome::NotSimulates);
    REQUIRE(v.witness);
    CHECK_FALSE(v.witness->empty());
  }

  TEST_CASE("serve fairness does not save S when the model may stop") {
    MFAssumption mf, sf;
    mf.weak.push_back(FairPred::of_state(p_prop("stop1")));
    EventPred e;
    e.event = "serve";
    e.dir = Dir::Recv;
    sf.strong.push_back(FairPred::of_event(e));
    CHECK_FALSE(simulates(GBTA{fig1_model(), mf}, GBTA{fig1_spec(), sf}));
  }

  TEST_CASE("spec with two assumptions is rejected") {
    MFAssumption sf;
    sf.strong.push_back(FairPred::of_state(p_prop("wait2")));
    sf.weak.push_back(FairPred::of_state(p_prop("idle2")));
    Verdict v = check_simulation(CheckInstance::plain(GBTA{fig1_model(), {}}, GBTA{fig1_spec(), sf}));
    CHECK(v.outcome == Outcome::RejectedNonUSF);
  }

  TEST_CASE("plain verdicts agree with the region oracle") {
    std::mt19937 rng(2024);
    int disagreements = 0;
    for (int i = 0; i < 80; ++i) {
      auto m = random_ta(rng, "m", "x");
      auto s = random_ta(rng, "s", "y");
      bool oracle = solve_plain_simulation(m, s).simulates;
      if (simulates(GBTA{m, {}}, GBTA{s, {}}) != oracle) ++disagreements;
    }
    CHECK(disagreements == 0);
  }

  TEST_CASE("model fair states agree with explicit fair-run search") {
    std::mt19937 rng(77);
    int disagreements = 0;
    for (int i = 0; i < 80; ++i) {
      auto m = random_ta(rng, "m", "x");
      auto f = random_fairness(rng, m);
      auto s = random_ta(rng, "s", "y");
      Engine eng(CheckInstance::plain(GBTA{m, f}, GBTA{s, {}}));
      bool symbolic = eng.model_fair_states().contains(0, {0, 0, 0});
      if (symbolic != fair_run_exists(GBTA{m, f}, initial_state(m))) ++disagreements;
    }
    CHECK(disagreements == 0);
  }

  TEST_CASE("identical copies simulate each other") {
    for (unsigned seed = 1; seed <= 40; ++seed) {
      std::mt19937 a(seed), b(seed);
      auto m = random_ta(a, "m", "x");
      auto s = random_ta(b, "s", "y");
      CHECK(simulates(GBTA{m, {}}, GBTA{s, {}}));
    }
    CHECK(simulates(GBTA{fig1_model(), {}}, GBTA{renamed_copy(fig1_model(), "'"), {}}));
  }

  TEST_CASE("adding model assumptions never breaks simulation") {
    std::mt19937 rng(99);
    for (int i = 0; i < 40; ++i) {
      auto m = random_ta(rng, "m", "x");
      auto s = random_ta(rng, "s", "y");
      auto sf = at_most_one(random_fairness(rng, s));
      auto mf = random_fairness(rng, m);
      auto more = mf;
      for (const auto &p : random_fairness(rng, m).strong) more.strong.push_back(p);
      more.weak.push_back(FairPred::of_state(random_state_pred(rng, m, 3)));
      if (simulates(GBTA{m, mf}, GBTA{s, sf})) CHECK(simulates(GBTA{m, more}, GBTA{s, sf}));
    }
  }

  TEST_CASE("flipping twice restores the assumptions") {
    std::mt19937 rng(5);
    for (int i = 0; i < 50; ++i) {
      auto m = random_ta(rng, "m", "x");
      auto f = random_fairness(rng, m);
      std::vector<FairPred> all = f.strong;
      all.insert(all.end(), f.weak.begin(), f.weak.end());
      auto twice = flip({}, flip({}, all));
      REQUIRE(twice.size() == all.size());
      for (size_t k = 0; k < all.size(); ++k) {
        CHECK(twice[k].is_event == all[k].is_event);
        if (all[k].is_event) {
          CHECK(twice[k].ev.event == all[k].ev.event);
          CHECK(equivalent(twice[k].ev.pre, all[k].ev.pre));
          CHECK(equivalent(twice[k].ev.post, all[k].ev.post));
        } else {
          CHECK(equivalent(twice[k].state, all[k].state));
        }
      }
      auto once = flip(all, all);
      CHECK(once.size() == 2 * all.size());
    }
  }

  TEST_CASE("flipped assumptions land on the documented sides") {
    MFAssumption mf, sf;
    mf.strong.push_back(FairPred::of_state(p_prop("wait1")));
    mf.weak.push_back(FairPred::of_state(p_prop("idle1")));
    sf.weak.push_back(FairPred::of_state(p_prop("idle2")));
    auto fa = flip_assumptions(mf, sf);
    REQUIRE(fa.strong_side.size() == 2);
    CHECK(fa.strong_side[0].side == Side::Model);
    CHECK(fa.strong_side[1].side == Side::Spec);
    CHECK(equivalent(fa.strong_side[1].pred.state, p_not(p_prop("idle2"))));
    CHECK(fa.weak_states().size() == 1);
    CHECK(fa.weak_events().empty());
  }

  TEST_CASE("extrapolation does not change verdicts") {
    std::mt19937 rng(31);
    for (int i = 0; i < 40; ++i) {
      auto m = random_ta(rng, "m", "x");
      auto s = random_ta(rng, "s", "y");
      auto mf = random_fairness(rng, m);
      auto sf = at_most_one(random_fairness(rng, s));
      CHECK(simulates(GBTA{m, mf}, GBTA{s, sf}, true) == simulates(GBTA{m, mf}, GBTA{s, sf}, false));
    }
  }

  TEST_CASE("reachability restriction does not change verdicts") {
    std::mt19937 rng(57);
    for (int i = 0; i < 80; ++i) {
      auto m = random_ta(rng, "m", "x");
      auto s = random_ta(rng, "s", "y");
      auto mf = random_fairness(rng, m);
      auto sf = at_most_one(random_fairness(rng, s));
      auto inst = CheckInstance::plain(GBTA{m, mf}, GBTA{s, sf});
      Outcome with = check_simulation(inst).outcome;
      inst.restrict_reachable = false;
      CAPTURE(i);
      CHECK(with == check_simulation(inst).outcome);
    }
  }

  TEST_CASE("fixpoint statistics are reported") {
    MFAssumption sf;
    EventPred e;
    e.event = "serve";
    e.dir = Dir::Recv;
    sf.strong.push_back(FairPred::of_event(e));
    Verdict v = check_simulation(CheckInstance::plain(GBTA{fig1_model(), {}}, GBTA{fig1_spec(), sf}));
    CHECK_FALSE(v.stats.iterations.empty());
    for (const auto &[kind, runs] : v.stats.iterations)
      for (int n : runs) CHECK(n >= 1);
    CHECK(v.stats.tuples_enumerated > 0);
    CHECK(v.stats.str().find("tuples=") == 0);
  }

  TEST_CASE("deadline constant override keeps the verdict") {
    for (int c : {0, 1, 25}) {
      auto inst = CheckInstance::plain(GBTA{fig1_model(), {}}, GBTA{fig1_spec(), {}});
      inst.cmfs = c;
      CHECK(check_simulation(inst).outcome == Outcome::NotSimulates);
    }
  }
}
