// Difference bound matrices and finite unions of them.
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace tsim {

/// Encoded bound: (c << 1) | 1 for `<= c`, (c << 1) for `< c`; kInf for no bound.
using raw_t = int32_t;

inline constexpr raw_t kInf = std::numeric_limits<raw_t>::max();
inline constexpr raw_t kLeZero = 1;
inline constexpr raw_t kLtZero = 0;

inline raw_t bound(int32_t c, bool strict) { return static_cast<raw_t>((c << 1) | (strict ? 0 : 1)); }
inline int32_t bound_value(raw_t b) { return b >> 1; }
inline bool bound_strict(raw_t b) { return (b & 1) == 0; }
inline raw_t bound_add(raw_t a, raw_t b) {
  if (a == kInf || b == kInf) return kInf;
  return static_cast<raw_t>((((a >> 1) + (b >> 1)) << 1) | (a & b & 1));
}
/// Bound of the complementary constraint on the transposed entry.
inline raw_t bound_negate(raw_t b) { return static_cast<raw_t>(((-(b >> 1)) << 1) | (1 - (b & 1))); }

/// A zone over clocks 1..n (index 0 is the constant reference clock). Kept canonical.
class DBM {
public:
  DBM() = default;
  /// All valuations with nonnegative clocks.
  static DBM universe(int nclocks);
  /// The single valuation with every clock at 0.
  static DBM zero(int nclocks);

  int dim() const { return dim_; }
  int clocks() const { return dim_ - 1; }
  bool empty() const { return empty_; }
  raw_t at(int i, int j) const { return m_[static_cast<size_t>(i * dim_ + j)]; }

  /// Adds x_i - x_j (bound b); returns false when the zone becomes empty.
  bool constrain(int i, int j, raw_t b);
  void close();
  void up();
  void down();
  void free(int k);
  void reset(int k);
  /// Pre-image of x_k := 0.
  void unreset(int k);
  void extrapolate(const std::vector<int32_t> &ceilings);
  /// Adds n unconstrained clocks at the end.
  DBM extend(int n) const;
  /// Keeps the first n clocks.
  DBM project(int n) const;

  bool includes(const DBM &o) const;
  bool intersects(const DBM &o) const;
  DBM meet(const DBM &o) const;
  /// Smallest zone containing both.
  DBM hull(const DBM &o) const;
  /// Points of this zone where some non-strict lower bound is tight (no earlier point of the zone on the ray).
  std::vector<DBM> entry_points() const;
  /// Disjoint zones covering this minus o.
  std::vector<DBM> subtract(const DBM &o) const;

  bool operator==(const DBM &o) const { return dim_ == o.dim_ && empty_ == o.empty_ && m_ == o.m_; }
  bool operator<(const DBM &o) const { return m_ < o.m_; }
  size_t hash() const;

  std::string str(const std::vector<std::string> &names) const;
  bool contains_point(const std::vector<double> &v) const;

private:
  int dim_ = 1;
  bool empty_ = false;
  std::vector<raw_t> m_{kLeZero};
  raw_t &ref(int i, int j) { return m_[static_cast<size_t>(i * dim_ + j)]; }
};

/// A finite union of zones with pairwise non-inclusion.
class Fed {
public:
  Fed() = default;
  explicit Fed(int nclocks) : nclocks_(nclocks) {}
  Fed(int nclocks, DBM z) : nclocks_(nclocks) { add(std::move(z)); }

  static Fed universe(int nclocks) { return Fed(nclocks, DBM::universe(nclocks)); }

  int clocks() const { return nclocks_; }
  bool empty() const { return zones_.empty(); }
  size_t size() const { return zones_.size(); }
  const std::vector<DBM> &zones() const { return zones_; }

  /// Adds a zone unless included in a member; drops members it includes.
  void add(DBM z);
  void add(const Fed &f);
  Fed meet(const Fed &o) const;
  Fed meet(const DBM &z) const;
  Fed minus(const Fed &o) const;
  Fed complement() const;
  bool subset_of(const Fed &o) const;
  bool equals(const Fed &o) const { return subset_of(o) && o.subset_of(*this); }
  bool contains_point(const std::vector<double> &v) const;

  template <class F>
  Fed map(F &&f) const {
    Fed out(nclocks_);
    for (const auto &z : zones_) {
      DBM c = z;
      f(c);
      if (!c.empty()) out.add(std::move(c));
    }
    return out;
  }

  Fed down() const;
  /// Points of `path` that reach this set by a delay t staying in `path` on [0,t).
  Fed elapse_pre(const Fed &path) const;
  void extrapolate(const std::vector<int32_t> &ceilings);
  void sort();
  /// Replaces pairs of zones by their hull where the hull adds no points.
  void merge();

private:
  int nclocks_ = 0;
  std::vector<DBM> zones_;
};

}  // namespace tsim
