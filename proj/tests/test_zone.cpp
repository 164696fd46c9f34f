#include <doctest.h>

#include <random>

#include "tsim/dbm.hpp"
#include "tsim/symset.hpp"

using namespace tsim;

namespace {

// Two clocks, integer constants up to 4. Points on a 1/4 grid hit every region of that range.
constexpr int kClocks = 2;

std::vector<std::vector<double>> grid() {
  std::vector<std::vector<double>> pts;
  for (int a = 0; a <= 24; ++a)
    for (int b = 0; b <= 24; ++b) pts.push_back({a * 0.25, b * 0.25});
  return pts;
}

DBM random_zone(std::mt19937 &rng) {
  std::uniform_int_distribution<int> idx(0, kClocks), c(-4, 4), coin(0, 1), n(1, 3);
  DBM z = DBM::universe(kClocks);
  for (int k = n(rng); k > 0; --k) {
    int i = idx(rng), j = idx(rng);
    if (i == j) continue;
    int v = c(rng);
    if (j == 0 && v < 0) v = -v;
    if (!z.constrain(i, j, bound(v, coin(rng) == 1))) break;
  }
  return z;
}

Fed random_fed(std::mt19937 &rng) {
  Fed f(kClocks);
  std::uniform_int_distribution<int> n(0, 3);
  for (int k = n(rng); k > 0; --k) {
    DBM z = random_zone(rng);
    if (!z.empty()) f.add(z);
  }
  return f;
}

bool in(const Fed &f, const std::vector<double> &v) { return f.contains_point(v); }

std::vector<double> shifted(const std::vector<double> &v, double t) {
  std::vector<double> out = v;
  for (auto &x : out) x += t;
  return out;
}

}  // namespace

TEST_SUITE("zone") {
  TEST_CASE("bounds encode value and strictness") {
    CHECK(bound_value(bound(3, true)) == 3);
    CHECK(bound_strict(bound(3, true)));
    CHECK_FALSE(bound_strict(bound(-2, false)));
    CHECK(bound_add(bound(2, false), bound(3, true)) == bound(5, true));
    CHECK(bound_add(kInf, bound(1, false)) == kInf);
    CHECK(bound_negate(bound(2, true)) == bound(-2, false));
  }

  TEST_CASE("universe, zero and emptiness") {
    DBM u = DBM::universe(2);
    CHECK(u.contains_point({0, 7.5}));
    DBM z = DBM::zero(2);
    CHECK(z.contains_point({0, 0}));
    CHECK_FALSE(z.contains_point({0, 0.5}));
    DBM e = u;
    CHECK(e.constrain(1, 0, bound(2, false)));
    CHECK_FALSE(e.constrain(0, 1, bound(-3, false)));
    CHECK(e.empty());
  }

  TEST_CASE("up, down and reset follow their pointwise definitions") {
    std::mt19937 rng(7);
    auto pts = grid();
    for (int round = 0; round < 60; ++round) {
      DBM z = random_zone(rng);
      if (z.empty()) continue;
      DBM up = z, down = z, reset = z;
      up.up();
      down.down();
      reset.reset(1);
      for (const auto &p : pts) {
        bool future = false, past = false;
        // Delays on a 1/8 grid: open intervals between quarter points still contain a sample.
        for (int k = 0; k <= 96 && !(future && past); ++k) {
          double t = k * 0.125;
          if (p[0] >= t && p[1] >= t && z.contains_point(shifted(p, -t))) future = true;
          if (z.contains_point(shifted(p, t))) past = true;
        }
        CHECK(up.contains_point(p) == future);
        CHECK(down.contains_point(p) == past);
        bool r = p[0] == 0;
        bool any = false;
        for (int k = 0; k <= 96 && r && !any; ++k) any = z.contains_point({k * 0.125, p[1]});
        CHECK(reset.contains_point(p) == (r && any));
      }
    }
  }

  TEST_CASE("subtract, meet, hull and intersects agree with points") {
    std::mt19937 rng(11);
    auto pts = grid();
    for (int round = 0; round < 150; ++round) {
      DBM a = random_zone(rng), b = random_zone(rng);
      if (a.empty() || b.empty()) continue;
      auto diff = a.subtract(b);
      DBM m = a.meet(b);
      DBM h = a.hull(b);
      bool meet_nonempty = false;
      for (const auto &p : pts) {
        bool pa = a.contains_point(p), pb = b.contains_point(p);
        int hits = 0;
        for (const auto &d : diff) hits += d.contains_point(p);
        CHECK(hits == (pa && !pb ? 1 : 0));
        CHECK((!m.empty() && m.contains_point(p)) == (pa && pb));
        if (pa || pb) CHECK(h.contains_point(p));
        meet_nonempty |= pa && pb;
      }
      if (meet_nonempty) CHECK(a.intersects(b));
      CHECK(a.intersects(b) == !m.empty());
      CHECK(h.includes(a));
      CHECK(h.includes(b));
    }
  }

  TEST_CASE("federation algebra and merge preserve point sets") {
    std::mt19937 rng(5);
    auto pts = grid();
    for (int round = 0; round < 150; ++round) {
      Fed f = random_fed(rng), g = random_fed(rng);
      Fed u = f;
      u.add(g);
      Fed mi = f.minus(g), me = f.meet(g), merged = u, co = f.complement();
      merged.merge();
      CHECK(merged.size() <= u.size());
      for (const auto &p : pts) {
        bool pf = in(f, p), pg = in(g, p);
        CHECK(in(u, p) == (pf || pg));
        CHECK(in(mi, p) == (pf && !pg));
        CHECK(in(me, p) == (pf && pg));
        CHECK(in(merged, p) == (pf || pg));
        CHECK(in(co, p) == !pf);
      }
      CHECK(mi.subset_of(f));
      CHECK(me.subset_of(g));
      CHECK(merged.equals(u));
      for (size_t i = 0; i < merged.size(); ++i)
        for (size_t j = 0; j < merged.size(); ++j)
          if (i != j) CHECK_FALSE(merged.zones()[i].includes(merged.zones()[j]));
    }
  }

  TEST_CASE("merge joins adjacent intervals exactly") {
    Fed f(1);
    DBM a = DBM::universe(1), b = DBM::universe(1);
    a.constrain(1, 0, bound(2, false));
    b.constrain(0, 1, bound(-2, false));
    b.constrain(1, 0, bound(4, true));
    f.add(a);
    f.add(b);
    f.merge();
    CHECK(f.size() == 1);
    CHECK(f.contains_point({3.5}));
    CHECK_FALSE(f.contains_point({4}));
    Fed gap(1);
    DBM c = DBM::universe(1);
    c.constrain(0, 1, bound(-3, false));
    gap.add(a);
    gap.add(c);
    gap.merge();
    CHECK(gap.size() == 2);
  }

  TEST_CASE("elapse_pre matches the timed-until definition") {
    std::mt19937 rng(3);
    auto pts = grid();
    for (int round = 0; round < 80; ++round) {
      Fed goal = random_fed(rng), path = random_fed(rng);
      Fed pre = goal.elapse_pre(path);
      for (const auto &p : pts) {
        // Crossings happen at multiples of 1/4; even k are crossing points, odd k the open
        // segments between them. Inside an open segment the path must hold before the goal is hit.
        // Sources must lie in the path themselves.
        bool want = false;
        for (int k = 0; k <= 80 && in(path, p); ++k) {
          auto q = shifted(p, k * 0.125);
          bool g = in(goal, q), pa = in(path, q);
          if (k % 2 == 0 && g) want = true;
          if (k % 2 == 1 && g && pa) want = true;
          if (want || !pa) break;
        }
        CHECK(in(pre, p) == want);
      }
    }
  }

  TEST_CASE("extrapolation only adds valuations beyond the ceilings") {
    std::mt19937 rng(9);
    for (int round = 0; round < 100; ++round) {
      DBM z = random_zone(rng);
      if (z.empty()) continue;
      DBM x = z;
      x.extrapolate({0, 2, 2});
      CHECK(x.includes(z));
      for (const auto &p : grid())
        if (p[0] <= 2 && p[1] <= 2) CHECK(x.contains_point(p) == z.contains_point(p));
    }
  }

  TEST_CASE("symbolic sets over discrete parts") {
    auto sp = std::make_shared<Space>(std::vector<Space::Component>{{"A", {"a0", "a1"}}, {"B", {"b0", "b1", "b2"}}},
                                      std::vector<std::string>{"x"});
    CHECK(sp->dpart_count() == 6);
    DPart d = sp->make({1, 2});
    CHECK(sp->loc(d, 0) == 1);
    CHECK(sp->loc(d, 1) == 2);
    CHECK(sp->with(d, 1, 0) == sp->make({1, 0}));
    SymSet a = SymSet::from_pred(sp, p_and(p_prop("a1"), p_clock("x", Cmp::LT, 3)));
    SymSet b = SymSet::from_pred(sp, p_prop("b2"));
    SymSet both = a.meet(b);
    CHECK(both.contains(d, {2.5}));
    CHECK_FALSE(both.contains(d, {3}));
    CHECK_FALSE(both.contains(sp->make({1, 1}), {1}));
    CHECK(both.subset_of(a));
    CHECK(a.unite(b).minus(b).equals(a.minus(b)));
    CHECK(a.complement().meet(a).empty());
    CHECK(a.complement().unite(a).equals(SymSet::full(sp)));
    SymSet pre = elapse_pre(SymSet::full(sp), SymSet::from_pred(sp, p_clock("x", Cmp::EQ, 4)));
    CHECK(pre.contains(d, {0.5}));
    CHECK_FALSE(pre.contains(d, {4.5}));
  }
}
