// Explicit region construction: ground truth for the symbolic engine on small instances.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "tsim/model.hpp"

namespace tsim {

/// A clock region: integer parts (ceiling+1 meaning "above the ceiling") and fractional ranks
/// (0 for an integral or unbounded clock, otherwise 1..k ordering the fractional parts).
struct Region {
  std::vector<int> ip;
  std::vector<int> fr;
  bool operator<(const Region &o) const { return ip != o.ip ? ip < o.ip : fr < o.fr; }
  bool operator==(const Region &o) const { return ip == o.ip && fr == o.fr; }
};

class RegionSpace {
public:
  RegionSpace(std::vector<std::string> clocks, std::vector<int> ceilings);

  size_t size() const { return regions_.size(); }
  const Region &region(int r) const { return regions_[static_cast<size_t>(r)]; }
  int index(const Region &r) const;
  const std::vector<std::string> &clocks() const { return clocks_; }
  int ceiling(int k) const { return ceil_[static_cast<size_t>(k)]; }

  int succ(int r) const { return succ_[static_cast<size_t>(r)]; }
  int reset(int r, const std::vector<int> &clocks) const;
  bool unbounded(int r, int k) const { return region(r).ip[static_cast<size_t>(k)] > ceiling(k); }
  bool is_zero(int r, int k) const;
  /// A valuation inside the region.
  std::vector<double> point(int r) const;
  /// The region over a subset of the clocks (given by positions in this space) in `to`.
  int project(int r, const std::vector<int> &keep, const RegionSpace &to) const;
  std::string str(int r) const;

private:
  static Region normalize(Region r);

  std::vector<std::string> clocks_;
  std::vector<int> ceil_;
  std::vector<Region> regions_;
  std::map<Region, int> idx_;
  std::vector<int> succ_;
};

struct RegionEdge {
  int from = 0;
  int to = 0;
  int trans = -1;  // -1: time successor
};

/// Valid (location, region) vertices of one automaton with time-successor and transition edges.
struct RegionGraph {
  const TimedAutomaton *ta = nullptr;
  std::shared_ptr<RegionSpace> space;
  std::vector<std::pair<int, int>> vertices;  // (location, region)
  std::map<std::pair<int, int>, int> vertex_index;
  std::vector<RegionEdge> edges;

  int vertex(int loc, int region) const;
  ConcreteState state(int v) const;
  std::string dump() const;
};

/// Per-clock largest constant of the automaton (guards, locations, initial condition).
std::vector<int> max_constants(const TimedAutomaton &a);

/// Rejects ceilings below a constant of the automaton and graphs beyond the scale guard.
RegionGraph build_region_graph(const TimedAutomaton &a, const std::vector<int> &ceilings);

/// Vertices from which a non-Zeno run satisfying the assumption exists.
std::vector<bool> fair_vertices(const RegionGraph &g, const MFAssumption &fair);
bool fair_run_exists(const GBTA &g, const ConcreteState &from);

struct PlainSimResult {
  bool simulates = false;
  /// z-free pair regions from which the model wins, as "qm qs region" lines
  std::vector<std::string> losing;
  int iterations = 0;
  size_t pair_states = 0;
};

/// Timed simulation game without fairness, solved on explicit regions.
PlainSimResult solve_plain_simulation(const TimedAutomaton &m, const TimedAutomaton &s, int cmfs = 0);

/// Maximum number of vertices any oracle graph may have.
inline constexpr size_t kOracleScaleGuard = 2'000'000;

}  // namespace tsim
