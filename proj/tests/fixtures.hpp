// Hand-built automata of the worked examples, shared by unit and acceptance tests.
#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "tsim/model.hpp"

namespace tsim::testing {

inline TimedAutomaton fig1_model() {
  return AutomatonBuilder("M")
      .clock("x1")
      .location("idle1")
      .location("wait1", p_clock("x1", Cmp::LT, 20))
      .location("stop1")
      .initial(p_and(p_prop("idle1"), p_clock("x1", Cmp::EQ, 0)))
      .edge("idle1", "wait1", Event{"request", Dir::Send, ""}, p_clock("x1", Cmp::GT, 5), {"x1"})
      .edge("wait1", "idle1", Event{"serve", Dir::Recv, ""}, p_true(), {"x1"})
      .edge("wait1", "stop1", Event{"end", Dir::Send, ""}, p_clock("x1", Cmp::GT, 10))
      .build();
}

inline TimedAutomaton fig1_spec() {
  return AutomatonBuilder("S")
      .clock("x2")
      .location("idle2")
      .location("wait2", p_clock("x2", Cmp::LT, 15))
      .initial(p_and(p_prop("idle2"), p_clock("x2", Cmp::EQ, 0)))
      .edge("idle2", "wait2", Event{"request", Dir::Send, ""}, p_clock("x2", Cmp::GT, 5))
      .edge("wait2", "idle2", Event{"serve", Dir::Recv, ""}, p_true(), {"x2"})
      .build();
}

inline TimedAutomaton fig3_env(bool responsive) {
  return AutomatonBuilder("E")
      .clock("x3")
      .location("standby")
      .location("process", responsive ? p_clock("x3", Cmp::LT, 10) : p_true())
      .location("sleep")
      .initial(p_and(p_prop("standby"), p_clock("x3", Cmp::EQ, 0)))
      .edge("standby", "process", Event{"request", Dir::Recv, ""}, p_true(), {"x3"})
      .edge("process", "standby", Event{"serve", Dir::Send, ""})
      .edge("process", "sleep", Event{"end", Dir::Recv, ""})
      .build();
}

inline std::string read_text(const std::string &path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_file(const std::string &name) { return std::string(TSIM_DATA_DIR) + "/" + name; }

// A copy of `a` with every own symbol suffixed, so it can sit next to the original.
inline TimedAutomaton renamed_copy(const TimedAutomaton &a, const std::string &suffix) {
  std::map<std::string, std::string> props, clocks;
  TimedAutomaton b = a;
  b.name = a.name + suffix;
  for (auto &p : b.props) p = props[p] = p + suffix;
  for (auto &c : b.clocks) c = clocks[c] = c + suffix;
  for (auto &l : b.locations) {
    l.name += suffix;
    l.lambda = rename(l.lambda, props, clocks);
  }
  b.initial = rename(b.initial, props, clocks);
  for (auto &t : b.transitions) {
    t.guard = rename(t.guard, props, clocks);
    for (auto &r : t.resets) r = clocks.at(r);
  }
  return b;
}

}  // namespace tsim::testing
