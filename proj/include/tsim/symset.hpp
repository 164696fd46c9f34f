// Symbolic sets: maps from discrete parts to federations over a shared clock space.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "tsim/dbm.hpp"
#include "tsim/model.hpp"

namespace tsim {

/// Discrete part: one location index per component, packed in mixed radix.
using DPart = uint64_t;

class Space {
public:
  struct Component {
    std::string name;
    std::vector<std::string> locations;  // location propositions
  };

  Space(std::vector<Component> comps, std::vector<std::string> clocks);

  int components() const { return static_cast<int>(comps_.size()); }
  const Component &component(int c) const { return comps_[static_cast<size_t>(c)]; }
  int nclocks() const { return static_cast<int>(clocks_.size()); }
  const std::vector<std::string> &clock_names() const { return clocks_; }
  uint64_t dpart_count() const { return count_; }

  int loc(DPart d, int comp) const {
    return static_cast<int>((d / stride_[static_cast<size_t>(comp)]) % comps_[static_cast<size_t>(comp)].locations.size());
  }
  DPart with(DPart d, int comp, int loc) const;
  DPart make(const std::vector<int> &locs) const;

  /// DBM index (1-based) of a clock, or -1.
  int clock_index(const std::string &x) const;
  /// (component, location) of a location proposition.
  std::pair<int, int> prop(const std::string &p) const;
  bool has_prop(const std::string &p) const { return props_.count(p) > 0; }

  /// Ceilings indexed by DBM index; entry 0 unused.
  const std::vector<int32_t> &ceilings() const { return ceil_; }
  void set_ceiling(const std::string &x, int32_t c);

  std::string dpart_str(DPart d) const;

private:
  std::vector<Component> comps_;
  std::vector<std::string> clocks_;
  std::vector<uint64_t> stride_;
  uint64_t count_ = 1;
  std::unordered_map<std::string, std::pair<int, int>> props_;
  std::unordered_map<std::string, int> clock_idx_;
  std::vector<int32_t> ceil_;
};

using SpacePtr = std::shared_ptr<const Space>;

/// Clock part of predicate p at discrete part d.
Fed eval_pred(const Space &sp, DPart d, const Pred &p);

class SymSet {
public:
  SymSet() = default;
  explicit SymSet(SpacePtr sp) : sp_(std::move(sp)) {}

  static SymSet full(SpacePtr sp);
  static SymSet from_pred(SpacePtr sp, const Pred &p);
  /// Restricts predicate evaluation to the discrete parts of `support`.
  static SymSet from_pred_on(SpacePtr sp, const Pred &p, const SymSet &support);

  const SpacePtr &space() const { return sp_; }
  const std::map<DPart, Fed> &parts() const { return parts_; }
  const Fed *find(DPart d) const;
  Fed at(DPart d) const;
  void set(DPart d, Fed f);
  void add(DPart d, const Fed &f);
  void add(DPart d, DBM z);

  bool empty() const { return parts_.empty(); }
  size_t zone_count() const;

  SymSet unite(const SymSet &o) const;
  SymSet meet(const SymSet &o) const;
  SymSet minus(const SymSet &o) const;
  SymSet complement() const;
  /// Complement restricted to the discrete parts of `support`.
  SymSet complement_on(const SymSet &support) const;
  bool subset_of(const SymSet &o) const;
  bool equals(const SymSet &o) const { return subset_of(o) && o.subset_of(*this); }

  /// Existential elimination of whole components and of clocks; with reset, eliminated clocks are set to 0.
  SymSet quantify(const std::vector<int> &comps, const std::vector<int> &clocks, bool reset) const;
  /// Applies f to every zone.
  SymSet map_zones(const std::function<void(DBM &)> &f) const;
  SymSet extrapolated() const;
  /// Same set with convex-union zone pairs merged.
  SymSet merged() const;

  bool contains(DPart d, const std::vector<double> &clocks) const;

  /// One line per (discrete part, zone), sorted.
  std::string dump() const;

private:
  SpacePtr sp_;
  std::map<DPart, Fed> parts_;
};

/// T(path, goal): states in path that reach goal by delay, staying in path on [0,t).
SymSet elapse_pre(const SymSet &path, const SymSet &goal);

/// Embeds a set over a prefix space (same leading components and clocks) into a larger space.
SymSet lift(const SymSet &s, const SpacePtr &to);
/// Projects a set onto a prefix space, eliminating the trailing components and clocks.
SymSet project(const SymSet &s, const SpacePtr &to);

}  // namespace tsim
