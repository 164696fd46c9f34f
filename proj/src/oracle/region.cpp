#include "tsim/region.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace tsim {

RegionSpace::RegionSpace(std::vector<std::string> clocks, std::vector<int> ceilings)
    : clocks_(std::move(clocks)), ceil_(std::move(ceilings)) {
  const size_t n = clocks_.size();
  if (ceil_.size() != n) throw model_error("one ceiling per clock expected");
  // Integer parts with a flag for a non-zero fraction, then every weak ordering of the fractions.
  std::vector<Region> out;
  Region cur{std::vector<int>(n), std::vector<int>(n)};
  std::vector<bool> frac(n);
  std::function<void(size_t)> ints = [&](size_t k) {
    if (k == n) {
      std::vector<size_t> fk;
      for (size_t i = 0; i < n; ++i)
        if (frac[i]) fk.push_back(i);
      const size_t m = fk.size();
      std::vector<int> rank(m, 1);
      while (true) {
        int mx = 0;
        for (int x : rank) mx = std::max(mx, x);
        bool dense = true;
        for (int v = 1; v <= mx && dense; ++v) dense = std::find(rank.begin(), rank.end(), v) != rank.end();
        if (dense) {
          Region r = cur;
          for (size_t i = 0; i < m; ++i) r.fr[fk[i]] = rank[i];
          out.push_back(r);
        }
        size_t i = 0;
        while (i < m && rank[i] == static_cast<int>(m)) rank[i++] = 1;
        if (i == m) break;
        ++rank[i];
      }
      return;
    }
    for (int v = 0; v <= ceil_[k] + 1; ++v) {
      cur.ip[k] = v;
      frac[k] = false;
      ints(k + 1);
      if (v < ceil_[k]) {
        frac[k] = true;
        ints(k + 1);
        frac[k] = false;
      }
    }
  };
  ints(0);
  std::sort(out.begin(), out.end());
  regions_ = std::move(out);
  for (size_t i = 0; i < regions_.size(); ++i) idx_.emplace(regions_[i], static_cast<int>(i));

  succ_.resize(regions_.size());
  for (size_t i = 0; i < regions_.size(); ++i) {
    Region r = regions_[i];
    bool any_bounded = false, any_int = false;
    int maxr = 0;
    for (size_t k = 0; k < n; ++k) {
      if (r.ip[k] > ceil_[k]) continue;
      any_bounded = true;
      if (r.fr[k] == 0) any_int = true;
      maxr = std::max(maxr, r.fr[k]);
    }
    if (!any_bounded) {
      succ_[i] = static_cast<int>(i);
      continue;
    }
    if (any_int) {
      for (size_t k = 0; k < n; ++k) {
        if (r.ip[k] > ceil_[k]) continue;
        if (r.fr[k] > 0)
          ++r.fr[k];
        else if (r.ip[k] == ceil_[k])
          r.ip[k] = ceil_[k] + 1;
        else
          r.fr[k] = 1;
      }
    } else {
      for (size_t k = 0; k < n; ++k)
        if (r.ip[k] <= ceil_[k] && r.fr[k] == maxr) {
          ++r.ip[k];
          r.fr[k] = 0;
        }
    }
    succ_[i] = index(normalize(r));
  }
}

Region RegionSpace::normalize(Region r) {
  std::vector<int> used;
  for (int x : r.fr)
    if (x > 0) used.push_back(x);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  for (int &x : r.fr)
    if (x > 0) x = static_cast<int>(std::lower_bound(used.begin(), used.end(), x) - used.begin()) + 1;
  return r;
}

int RegionSpace::index(const Region &r) const {
  auto it = idx_.find(r);
  if (it == idx_.end()) throw model_error("region outside the space");
  return it->second;
}

int RegionSpace::reset(int r, const std::vector<int> &clocks) const {
  Region x = region(r);
  for (int k : clocks) {
    x.ip[static_cast<size_t>(k)] = 0;
    x.fr[static_cast<size_t>(k)] = 0;
  }
  return index(normalize(x));
}

bool RegionSpace::is_zero(int r, int k) const {
  const Region &x = region(r);
  return x.ip[static_cast<size_t>(k)] == 0 && x.fr[static_cast<size_t>(k)] == 0;
}

std::vector<double> RegionSpace::point(int r) const {
  const Region &x = region(r);
  int maxr = 0;
  for (int f : x.fr) maxr = std::max(maxr, f);
  std::vector<double> v(clocks_.size());
  for (size_t k = 0; k < v.size(); ++k) {
    if (x.ip[k] > ceil_[k])
      v[k] = ceil_[k] + 1;
    else
      v[k] = x.ip[k] + static_cast<double>(x.fr[k]) / (maxr + 1);
  }
  return v;
}

int RegionSpace::project(int r, const std::vector<int> &keep, const RegionSpace &to) const {
  const Region &x = region(r);
  Region y;
  for (int k : keep) {
    y.ip.push_back(x.ip[static_cast<size_t>(k)]);
    y.fr.push_back(x.fr[static_cast<size_t>(k)]);
  }
  return to.index(normalize(y));
}

std::string RegionSpace::str(int r) const {
  const Region &x = region(r);
  std::ostringstream os;
  for (size_t k = 0; k < clocks_.size(); ++k) {
    if (k) os << ' ';
    const auto &c = clocks_[k];
    if (x.ip[k] > ceil_[k])
      os << c << '>' << ceil_[k];
    else if (x.fr[k] == 0)
      os << c << '=' << x.ip[k];
    else
      os << c << "~" << x.ip[k] << "+f" << x.fr[k];
  }
  return os.str();
}

int RegionGraph::vertex(int loc, int region) const {
  auto it = vertex_index.find({loc, region});
  return it == vertex_index.end() ? -1 : it->second;
}

ConcreteState RegionGraph::state(int v) const {
  ConcreteState s;
  auto [loc, r] = vertices[static_cast<size_t>(v)];
  for (const auto &p : ta->props) s.props[p] = false;
  for (size_t l = 0; l < ta->locations.size(); ++l) s.props[ta->locations[l].name] = static_cast<int>(l) == loc;
  auto pt = space->point(r);
  for (size_t k = 0; k < pt.size(); ++k) s.clocks[space->clocks()[k]] = pt[k];
  return s;
}

std::string RegionGraph::dump() const {
  std::ostringstream os;
  for (size_t v = 0; v < vertices.size(); ++v)
    os << "v " << v << ' ' << ta->locations[static_cast<size_t>(vertices[v].first)].name << ' '
       << space->str(vertices[v].second) << '\n';
  for (const auto &e : edges) {
    os << "e " << e.from << ' ' << e.to << ' ';
    if (e.trans < 0)
      os << "delay";
    else
      os << 't' << e.trans;
    os << '\n';
  }
  return os.str();
}

std::vector<int> max_constants(const TimedAutomaton &a) {
  std::vector<int> out;
  for (const auto &x : a.clocks) {
    int64_t c = max_constant(a.initial, x);
    for (const auto &l : a.locations) c = std::max(c, max_constant(l.lambda, x));
    for (const auto &t : a.transitions) c = std::max(c, max_constant(t.guard, x));
    out.push_back(static_cast<int>(std::max<int64_t>(0, c)));
  }
  return out;
}

namespace {

std::vector<int> clock_positions(const TimedAutomaton &a, const std::vector<std::string> &resets) {
  std::vector<int> out;
  for (const auto &r : resets) {
    auto it = std::find(a.clocks.begin(), a.clocks.end(), r);
    if (it == a.clocks.end()) throw model_error("reset of unknown clock " + r);
    out.push_back(static_cast<int>(it - a.clocks.begin()));
  }
  return out;
}

}  // namespace

RegionGraph build_region_graph(const TimedAutomaton &a, const std::vector<int> &ceilings) {
  auto need = max_constants(a);
  if (ceilings.size() != a.clocks.size()) throw model_error("one ceiling per clock expected");
  for (size_t k = 0; k < need.size(); ++k)
    if (need[k] > ceilings[k]) throw model_error("ceiling of " + a.clocks[k] + " below a constant of the automaton");
  RegionGraph g;
  g.ta = &a;
  g.space = std::make_shared<RegionSpace>(a.clocks, ceilings);
  if (g.space->size() * a.locations.size() > kOracleScaleGuard) throw model_error("region graph exceeds scale guard");
  for (size_t l = 0; l < a.locations.size(); ++l)
    for (size_t r = 0; r < g.space->size(); ++r) {
      g.vertices.emplace_back(static_cast<int>(l), static_cast<int>(r));
      if (!eval_predicate(g.state(static_cast<int>(g.vertices.size() - 1)), a.locations[l].lambda)) {
        g.vertices.pop_back();
        continue;
      }
      g.vertex_index[{static_cast<int>(l), static_cast<int>(r)}] = static_cast<int>(g.vertices.size() - 1);
    }
  std::vector<std::vector<int>> resets;
  for (const auto &t : a.transitions) resets.push_back(clock_positions(a, t.resets));
  for (size_t v = 0; v < g.vertices.size(); ++v) {
    auto [l, r] = g.vertices[v];
    int w = g.vertex(l, g.space->succ(r));
    if (w >= 0) g.edges.push_back({static_cast<int>(v), w, -1});
    ConcreteState st = g.state(static_cast<int>(v));
    for (size_t t = 0; t < a.transitions.size(); ++t) {
      const auto &tr = a.transitions[t];
      if (tr.source != l || !eval_predicate(st, tr.guard)) continue;
      int u = g.vertex(tr.target, g.space->reset(r, resets[t]));
      if (u >= 0) g.edges.push_back({static_cast<int>(v), u, static_cast<int>(t)});
    }
  }
  return g;
}

namespace {

bool event_matches(const TimedAutomaton &a, const Transition &t, const EventPred &ep) {
  for (const auto &e : t.events) {
    if (e.name != ep.event) continue;
    if (ep.dir && *ep.dir != e.dir) continue;
    const std::string tag = e.tag.empty() ? a.name : e.tag;
    if (ep.tag && *ep.tag != tag) continue;
    return true;
  }
  return false;
}

// Tarjan's algorithm over the edges accepted by `keep`.
std::vector<int> scc_ids(size_t n, const std::vector<std::vector<int>> &out, const std::vector<RegionEdge> &edges,
                         const std::vector<bool> &vok, const std::vector<bool> &eok, int &count) {
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on(n, false);
  std::vector<int> stack;
  int next = 0;
  count = 0;
  struct Frame {
    int v;
    size_t i;
  };
  for (size_t s = 0; s < n; ++s) {
    if (!vok[s] || index[s] >= 0) continue;
    std::vector<Frame> call{{static_cast<int>(s), 0}};
    index[s] = low[s] = next++;
    stack.push_back(static_cast<int>(s));
    on[s] = true;
    while (!call.empty()) {
      auto &f = call.back();
      auto v = static_cast<size_t>(f.v);
      if (f.i < out[v].size()) {
        int ei = out[v][f.i++];
        if (!eok[static_cast<size_t>(ei)]) continue;
        auto w = static_cast<size_t>(edges[static_cast<size_t>(ei)].to);
        if (!vok[w]) continue;
        if (index[w] < 0) {
          index[w] = low[w] = next++;
          stack.push_back(static_cast<int>(w));
          on[w] = true;
          call.push_back({static_cast<int>(w), 0});
        } else if (on[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        while (true) {
          auto w = static_cast<size_t>(stack.back());
          stack.pop_back();
          on[w] = false;
          comp[w] = count;
          if (w == v) break;
        }
        ++count;
      }
      call.pop_back();
      if (!call.empty()) {
        auto u = static_cast<size_t>(call.back().v);
        low[u] = std::min(low[u], low[v]);
      }
    }
  }
  return comp;
}

}  // namespace

std::vector<bool> fair_vertices(const RegionGraph &g, const MFAssumption &fair) {
  const size_t n = g.vertices.size();
  const auto &a = *g.ta;
  std::vector<ConcreteState> st;
  st.reserve(n);
  for (size_t v = 0; v < n; ++v) st.push_back(g.state(static_cast<int>(v)));
  std::vector<std::vector<int>> out(n), in(n);
  for (size_t e = 0; e < g.edges.size(); ++e) {
    out[static_cast<size_t>(g.edges[e].from)].push_back(static_cast<int>(e));
    in[static_cast<size_t>(g.edges[e].to)].push_back(static_cast<int>(e));
  }
  std::vector<bool> vok(n, true), eok(g.edges.size(), true);
  for (size_t v = 0; v < n; ++v)
    for (const auto &w : fair.weak)
      if (!w.is_event && !eval_predicate(st[v], w.state)) vok[v] = false;
  for (size_t e = 0; e < g.edges.size(); ++e) {
    const auto &ed = g.edges[e];
    if (ed.trans < 0) continue;
    const auto &t = a.transitions[static_cast<size_t>(ed.trans)];
    for (const auto &w : fair.weak)
      if (w.is_event && event_matches(a, t, w.ev) && eval_predicate(st[static_cast<size_t>(ed.from)], w.ev.pre) &&
          !eval_predicate(st[static_cast<size_t>(ed.to)], w.ev.post))
        eok[e] = false;
  }
  int count = 0;
  auto comp = scc_ids(n, out, g.edges, vok, eok, count);

  const size_t nc = g.space->clocks().size();
  std::vector<std::vector<int>> members(static_cast<size_t>(count));
  for (size_t v = 0; v < n; ++v)
    if (comp[v] >= 0) members[static_cast<size_t>(comp[v])].push_back(static_cast<int>(v));
  std::vector<bool> good(static_cast<size_t>(count), false);
  std::vector<std::vector<int>> resets;
  for (const auto &t : a.transitions) resets.push_back(clock_positions(a, t.resets));
  for (int c = 0; c < count; ++c) {
    std::vector<int> internal;
    for (int v : members[static_cast<size_t>(c)])
      for (int e : out[static_cast<size_t>(v)]) {
        const auto &ed = g.edges[static_cast<size_t>(e)];
        if (eok[static_cast<size_t>(e)] && comp[static_cast<size_t>(ed.to)] == c) internal.push_back(e);
      }
    if (internal.empty()) continue;
    bool ok = true;
    for (const auto &s : fair.strong) {
      bool hit = false;
      if (!s.is_event) {
        for (int v : members[static_cast<size_t>(c)]) hit = hit || eval_predicate(st[static_cast<size_t>(v)], s.state);
      } else {
        for (int e : internal) {
          const auto &ed = g.edges[static_cast<size_t>(e)];
          if (ed.trans < 0) continue;
          hit = hit || (event_matches(a, a.transitions[static_cast<size_t>(ed.trans)], s.ev) &&
                        eval_predicate(st[static_cast<size_t>(ed.from)], s.ev.pre) &&
                        eval_predicate(st[static_cast<size_t>(ed.to)], s.ev.post));
        }
      }
      ok = ok && hit;
    }
    // Time divergence: every clock either exceeds its ceiling or is reset and grows again.
    for (size_t k = 0; k < nc && ok; ++k) {
      bool above = false, grows = false, reset = false;
      for (int v : members[static_cast<size_t>(c)]) {
        int r = g.vertices[static_cast<size_t>(v)].second;
        above = above || g.space->unbounded(r, static_cast<int>(k));
        grows = grows || !g.space->is_zero(r, static_cast<int>(k));
      }
      for (int e : internal) {
        int t = g.edges[static_cast<size_t>(e)].trans;
        if (t < 0) continue;
        const auto &rs = resets[static_cast<size_t>(t)];
        reset = reset || std::find(rs.begin(), rs.end(), static_cast<int>(k)) != rs.end();
      }
      ok = above || (reset && grows);
    }
    good[static_cast<size_t>(c)] = ok;
  }
  std::vector<bool> res(n, false);
  std::vector<int> work;
  for (size_t v = 0; v < n; ++v)
    if (comp[v] >= 0 && good[static_cast<size_t>(comp[v])]) {
      res[v] = true;
      work.push_back(static_cast<int>(v));
    }
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    for (int e : in[static_cast<size_t>(v)]) {
      auto u = static_cast<size_t>(g.edges[static_cast<size_t>(e)].from);
      if (!res[u]) {
        res[u] = true;
        work.push_back(static_cast<int>(u));
      }
    }
  }
  return res;
}

bool fair_run_exists(const GBTA &g, const ConcreteState &from) {
  const auto &a = g.automaton;
  int64_t c = 1;
  for (int x : max_constants(a)) c = std::max<int64_t>(c, x);
  for (const auto *set : {&g.fairness.strong, &g.fairness.weak})
    for (const auto &f : *set) {
      if (f.is_event)
        c = std::max({c, max_constant(f.ev.pre), max_constant(f.ev.post)});
      else
        c = std::max(c, max_constant(f.state));
    }
  RegionGraph graph = build_region_graph(a, std::vector<int>(a.clocks.size(), static_cast<int>(c)));
  // Locate the vertex of the given state.
  int loc = -1;
  for (size_t l = 0; l < a.locations.size(); ++l) {
    auto it = from.props.find(a.locations[l].name);
    if (it != from.props.end() && it->second) loc = static_cast<int>(l);
  }
  if (loc < 0) throw model_error("state has no location");
  Region r;
  std::vector<double> fracs;
  for (const auto &x : a.clocks) {
    auto it = from.clocks.find(x);
    double v = it == from.clocks.end() ? 0.0 : it->second;
    double f = v - std::floor(v);
    if (v > c) {
      r.ip.push_back(static_cast<int>(c) + 1);
      r.fr.push_back(0);
    } else {
      r.ip.push_back(static_cast<int>(std::floor(v)));
      r.fr.push_back(f > 0 ? 1 : 0);
      if (f > 0) fracs.push_back(f);
    }
  }
  std::sort(fracs.begin(), fracs.end());
  fracs.erase(std::unique(fracs.begin(), fracs.end()), fracs.end());
  for (size_t k = 0; k < a.clocks.size(); ++k) {
    if (r.fr[k] == 0) continue;
    auto it = from.clocks.find(a.clocks[k]);
    double f = it->second - std::floor(it->second);
    r.fr[k] = static_cast<int>(std::lower_bound(fracs.begin(), fracs.end(), f) - fracs.begin()) + 1;
  }
  int v = graph.vertex(loc, graph.space->index(r));
  if (v < 0) return false;
  return fair_vertices(graph, g.fairness)[static_cast<size_t>(v)];
}

}  // namespace tsim
