// Timed automata, state predicates, fairness assumptions and products.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsim {

class model_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Cmp { LT, LE, EQ, GE, GT };

const char *to_string(Cmp c);

struct PredNode;
using Pred = std::shared_ptr<const PredNode>;

/// Boolean combination of location propositions and clock atoms `x ~ c`.
struct PredNode {
  enum class Kind { True, False, Prop, Clock, Not, And, Or };
  Kind kind = Kind::True;
  std::string name;  // proposition or clock
  Cmp cmp = Cmp::LE;
  int64_t value = 0;
  std::vector<Pred> args;
};

Pred p_true();
Pred p_false();
Pred p_prop(const std::string &name);
Pred p_clock(const std::string &clock, Cmp cmp, int64_t c);
Pred p_not(Pred a);
Pred p_and(Pred a, Pred b);
Pred p_and(const std::vector<Pred> &args);
Pred p_or(Pred a, Pred b);
Pred p_or(const std::vector<Pred> &args);

std::string to_string(const Pred &p);
bool structurally_equal(const Pred &a, const Pred &b);
void collect_symbols(const Pred &p, std::set<std::string> &props, std::set<std::string> &clocks);
/// Largest constant compared with `clock` in p (or with any clock when clock is empty); -1 if none.
int64_t max_constant(const Pred &p, const std::string &clock = "");
Pred rename(const Pred &p, const std::map<std::string, std::string> &props,
            const std::map<std::string, std::string> &clocks);

enum class Dir { Send, Recv };

struct Event {
  std::string name;
  Dir dir = Dir::Send;
  std::string tag;  // process identity, empty in source automata

  bool operator==(const Event &o) const { return name == o.name && dir == o.dir && tag == o.tag; }
  bool operator<(const Event &o) const;
};

std::string to_string(const Event &e);

struct Transition {
  int source = 0;
  int target = 0;
  std::vector<Event> events;
  Pred guard = p_true();
  std::vector<std::string> resets;
};

struct Location {
  std::string name;
  Pred lambda;  // full invariance predicate of the location, including its own proposition
};

/// Index of the null transition in transition references.
inline constexpr int kNull = -1;

struct TimedAutomaton {
  std::string name;
  std::vector<Location> locations;
  std::vector<std::string> props;
  std::vector<std::string> clocks;
  Pred initial = p_true();
  std::vector<Transition> transitions;
  std::set<std::string> alphabet;

  int location_index(const std::string &loc) const;
  /// Clock part of the invariant: the location predicate as given by the user.
  Pred invariance() const;
};

/// Builder that keeps location propositions mutually exclusive: lambda(q) = q /\ !q' ... /\ inv.
class AutomatonBuilder {
public:
  explicit AutomatonBuilder(std::string name);
  AutomatonBuilder &clock(const std::string &x);
  AutomatonBuilder &location(const std::string &q, Pred inv = p_true());
  AutomatonBuilder &initial(Pred init);
  AutomatonBuilder &edge(const std::string &src, const std::string &dst, std::optional<Event> ev,
                         Pred guard = p_true(), std::vector<std::string> resets = {});
  TimedAutomaton build() const;

private:
  TimedAutomaton ta_;
  std::vector<Pred> inv_;
};

/// Lambda of location q given its clock invariant, following the builder convention.
Pred location_lambda(const TimedAutomaton &ta, int q, Pred inv);

struct EventPred {
  Pred pre = p_true();
  std::string event;
  std::optional<Dir> dir;
  std::optional<std::string> tag;
  Pred post = p_true();
};

/// A state predicate or an event predicate.
struct FairPred {
  bool is_event = false;
  Pred state;
  EventPred ev;

  static FairPred of_state(Pred p);
  static FairPred of_event(EventPred e);
};

std::string to_string(const FairPred &f);

struct MFAssumption {
  std::vector<FairPred> strong;
  std::vector<FairPred> weak;

  size_t size() const { return strong.size() + weak.size(); }
};

struct GBTA {
  TimedAutomaton automaton;
  MFAssumption fairness;
};

struct Diagnostic {
  std::string kind;
  std::string message;
};

/// Structural checks; `external_props`/`external_clocks` widen the scope for network members.
std::vector<Diagnostic> validate(const TimedAutomaton &ta,
                                 const std::set<std::string> &external_props = {},
                                 const std::set<std::string> &external_clocks = {});

/// E^{(e)}_B; an entry kNull stands for the null transition. e may be kNull.
std::vector<int> compatible_transitions(const TimedAutomaton &a, int e, const TimedAutomaton &b);

TimedAutomaton build_product(const TimedAutomaton &a, const TimedAutomaton &b);

struct ConcreteState {
  std::map<std::string, bool> props;
  std::map<std::string, double> clocks;
};

bool eval_predicate(const ConcreteState &s, const Pred &p);

/// Satisfiability over propositions and interval clock constraints.
bool satisfiable(const Pred &p);

}  // namespace tsim
