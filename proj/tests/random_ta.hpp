// Random small automata for differential tests.
#pragma once

#include <random>
#include <string>

#include "tsim/model.hpp"

namespace tsim::testing {

inline Pred random_atom(std::mt19937 &rng, const std::string &x, int max_c) {
  static const Cmp cmps[] = {Cmp::LT, Cmp::LE, Cmp::EQ, Cmp::GE, Cmp::GT};
  std::uniform_int_distribution<int> c(0, max_c), k(0, 4);
  return p_clock(x, cmps[k(rng)], c(rng));
}

/// At most `max_locs` locations, one clock, constants up to `max_c`, events drawn from {a, b}.
inline TimedAutomaton random_ta(std::mt19937 &rng, const std::string &prefix, const std::string &x, int max_locs = 3,
                                int max_c = 3) {
  std::uniform_int_distribution<int> nl(1, max_locs), coin(0, 2), nt(1, 4), ck(1, max_c);
  AutomatonBuilder b(prefix);
  b.clock(x);
  int n = nl(rng);
  for (int i = 0; i < n; ++i) {
    Pred inv = p_true();
    if (coin(rng) == 0) inv = p_clock(x, coin(rng) == 0 ? Cmp::LT : Cmp::LE, ck(rng));
    b.location(prefix + std::to_string(i), inv);
  }
  b.initial(p_and(p_prop(prefix + "0"), p_clock(x, Cmp::EQ, 0)));
  std::uniform_int_distribution<int> loc(0, n - 1);
  int t = nt(rng);
  for (int i = 0; i < t; ++i) {
    std::optional<Event> ev;
    int kind = coin(rng);
    if (kind == 1) ev = Event{"a", Dir::Send, ""};
    if (kind == 2) ev = Event{"b", Dir::Send, ""};
    Pred g = coin(rng) == 0 ? p_true() : random_atom(rng, x, max_c);
    std::vector<std::string> rs;
    if (coin(rng) != 0) rs.push_back(x);
    b.edge(prefix + std::to_string(loc(rng)), prefix + std::to_string(loc(rng)), ev, g, rs);
  }
  return b.build();
}

}  // namespace tsim::testing

namespace tsim::testing {

inline Pred random_state_pred(std::mt19937 &rng, const TimedAutomaton &a, int max_c) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<size_t> loc(0, a.locations.size() - 1);
  switch (kind(rng)) {
    case 0: return p_prop(a.locations[loc(rng)].name);
    case 1: return p_not(p_prop(a.locations[loc(rng)].name));
    case 2: return random_atom(rng, a.clocks[0], max_c);
    default: return p_and(p_prop(a.locations[loc(rng)].name), random_atom(rng, a.clocks[0], max_c));
  }
}

/// Up to two assumptions, each a strong or weak state or event predicate.
inline MFAssumption random_fairness(std::mt19937 &rng, const TimedAutomaton &a, int max_c = 3) {
  std::uniform_int_distribution<int> count(0, 2), coin(0, 1), ev(0, 2);
  MFAssumption f;
  int n = count(rng);
  for (int i = 0; i < n; ++i) {
    FairPred p;
    if (coin(rng)) {
      EventPred e;
      e.event = ev(rng) == 0 ? "b" : "a";
      e.dir = Dir::Send;
      e.pre = coin(rng) ? p_true() : random_state_pred(rng, a, max_c);
      e.post = coin(rng) ? p_true() : random_state_pred(rng, a, max_c);
      p = FairPred::of_event(e);
    } else {
      p = FairPred::of_state(random_state_pred(rng, a, max_c));
    }
    (coin(rng) ? f.strong : f.weak).push_back(p);
  }
  return f;
}

}  // namespace tsim::testing
