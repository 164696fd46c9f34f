#include <algorithm>
#include <functional>
#include <numeric>

#include "tsim/region.hpp"

namespace tsim {

namespace {

// Events of a transition as comparable (name, direction) pairs.
std::vector<std::pair<std::string, int>> label_of(const Transition &t) {
  std::vector<std::pair<std::string, int>> out;
  for (const auto &e : t.events) out.emplace_back(e.name, static_cast<int>(e.dir));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> positions(const std::vector<std::string> &all, const std::vector<std::string> &names, int offset) {
  std::vector<int> out;
  for (const auto &n : names) {
    auto it = std::find(all.begin(), all.end(), n);
    if (it == all.end()) throw model_error("reset of unknown clock " + n);
    out.push_back(static_cast<int>(it - all.begin()) + offset);
  }
  return out;
}

struct Evaluator {
  const TimedAutomaton &m;
  const TimedAutomaton &s;

  bool operator()(const Pred &p, int qm, int qs, const RegionSpace &sp, int r) const {
    ConcreteState st;
    for (size_t l = 0; l < m.locations.size(); ++l) st.props[m.locations[l].name] = static_cast<int>(l) == qm;
    if (qs >= 0)
      for (size_t l = 0; l < s.locations.size(); ++l) st.props[s.locations[l].name] = static_cast<int>(l) == qs;
    auto pt = sp.point(r);
    for (size_t k = 0; k < pt.size(); ++k) st.clocks[sp.clocks()[k]] = pt[k];
    return eval_predicate(st, p);
  }
};

}  // namespace

PlainSimResult solve_plain_simulation(const TimedAutomaton &m, const TimedAutomaton &s, int cmfs) {
  int c = 1;
  for (const auto *a : {&m, &s}) {
    for (int x : max_constants(*a)) c = std::max(c, x);
    c = std::max<int>(c, static_cast<int>(max_constant(a->initial)));
  }
  if (cmfs > 0) c = std::max(c, cmfs);
  const int C = cmfs > 0 ? cmfs : c;
  const int nm = static_cast<int>(m.clocks.size());

  std::vector<std::string> zf_clocks = m.clocks;
  zf_clocks.insert(zf_clocks.end(), s.clocks.begin(), s.clocks.end());
  std::vector<std::string> ext_clocks{"$z"};
  ext_clocks.insert(ext_clocks.end(), zf_clocks.begin(), zf_clocks.end());
  std::vector<std::string> mext_clocks{"$z"};
  mext_clocks.insert(mext_clocks.end(), m.clocks.begin(), m.clocks.end());

  auto ceil = [&](const std::vector<std::string> &cl) {
    std::vector<int> v(cl.size(), c);
    if (!cl.empty() && cl[0] == "$z") v[0] = C;
    return v;
  };
  RegionSpace E(ext_clocks, ceil(ext_clocks)), Z(zf_clocks, ceil(zf_clocks)), ME(mext_clocks, ceil(mext_clocks));
  RegionGraph mg = build_region_graph(m, std::vector<int>(m.clocks.size(), c));
  const RegionSpace &MO = *mg.space;
  const size_t LM = m.locations.size(), LS = s.locations.size();
  if (E.size() * LM * LS > kOracleScaleGuard) throw model_error("pair region space exceeds scale guard");

  std::vector<int> keep_z(zf_clocks.size()), keep_me(mext_clocks.size()), keep_mo(m.clocks.size());
  std::iota(keep_z.begin(), keep_z.end(), 1);
  std::iota(keep_me.begin(), keep_me.end(), 0);
  std::iota(keep_mo.begin(), keep_mo.end(), 1);
  std::vector<int> keep_zm(m.clocks.size());
  std::iota(keep_zm.begin(), keep_zm.end(), 0);

  std::vector<int> pz(E.size()), pme(E.size()), me_mo(ME.size()), z_mo(Z.size());
  std::vector<std::vector<int>> ext_of_z(Z.size()), z_of_mo(MO.size());
  for (size_t r = 0; r < E.size(); ++r) {
    pz[r] = E.project(static_cast<int>(r), keep_z, Z);
    pme[r] = E.project(static_cast<int>(r), keep_me, ME);
    ext_of_z[static_cast<size_t>(pz[r])].push_back(static_cast<int>(r));
  }
  for (size_t r = 0; r < ME.size(); ++r) me_mo[r] = ME.project(static_cast<int>(r), keep_mo, MO);
  for (size_t r = 0; r < Z.size(); ++r) {
    z_mo[r] = Z.project(static_cast<int>(r), keep_zm, MO);
    z_of_mo[static_cast<size_t>(z_mo[r])].push_back(static_cast<int>(r));
  }

  Evaluator ev{m, s};
  auto table = [&](const TimedAutomaton &a, bool model, const RegionSpace &sp) {
    std::vector<std::vector<char>> t(a.locations.size(), std::vector<char>(sp.size()));
    for (size_t l = 0; l < a.locations.size(); ++l)
      for (size_t r = 0; r < sp.size(); ++r)
        t[l][r] = model ? ev(a.locations[l].lambda, static_cast<int>(l), -1, sp, static_cast<int>(r))
                        : ev(a.locations[l].lambda, 0, static_cast<int>(l), sp, static_cast<int>(r));
    return t;
  };
  auto vm_e = table(m, true, E), vs_e = table(s, false, E), vm_me = table(m, true, ME);
  auto vm_z = table(m, true, Z), vs_z = table(s, false, Z);

  auto fair_v = fair_vertices(mg, {});
  auto fair_m = [&](int q, int rmo) {
    int v = mg.vertex(q, rmo);
    return v >= 0 && fair_v[static_cast<size_t>(v)];
  };

  // Model moves: -1 is the null move.
  const int nmoves = static_cast<int>(m.transitions.size());
  std::vector<std::vector<int>> resp(static_cast<size_t>(nmoves + 1));
  resp[0].push_back(-1);
  for (size_t f = 0; f < s.transitions.size(); ++f)
    if (s.transitions[f].events.empty()) resp[0].push_back(static_cast<int>(f));
  for (int e = 0; e < nmoves; ++e) {
    auto &rv = resp[static_cast<size_t>(e + 1)];
    const auto &t = m.transitions[static_cast<size_t>(e)];
    if (t.events.empty()) {
      rv.push_back(-1);
      continue;
    }
    auto want = label_of(t);
    for (size_t f = 0; f < s.transitions.size(); ++f)
      if (!s.transitions[f].events.empty() && label_of(s.transitions[f]) == want) rv.push_back(static_cast<int>(f));
  }
  std::vector<std::vector<int>> m_reset_e, s_reset_e, m_reset_me;
  for (const auto &t : m.transitions) {
    m_reset_e.push_back(positions(m.clocks, t.resets, 1));
    m_reset_me.push_back(positions(m.clocks, t.resets, 1));
  }
  for (const auto &t : s.transitions) s_reset_e.push_back(positions(s.clocks, t.resets, 1 + nm));
  std::vector<std::vector<char>> m_guard_e, s_guard_e, m_guard_me;
  for (const auto &t : m.transitions) {
    std::vector<char> g(E.size()), h(ME.size());
    for (size_t r = 0; r < E.size(); ++r) g[r] = ev(t.guard, t.source, -1, E, static_cast<int>(r));
    for (size_t r = 0; r < ME.size(); ++r) h[r] = ev(t.guard, t.source, -1, ME, static_cast<int>(r));
    m_guard_e.push_back(std::move(g));
    m_guard_me.push_back(std::move(h));
  }
  for (const auto &t : s.transitions) {
    std::vector<char> g(E.size());
    for (size_t r = 0; r < E.size(); ++r) g[r] = ev(t.guard, 0, t.source, E, static_cast<int>(r));
    s_guard_e.push_back(std::move(g));
  }

  auto z_at = [&](const RegionSpace &sp, int r, bool eq) {
    const Region &x = sp.region(r);
    if (x.ip[0] > C) return false;
    return eq ? (x.ip[0] == C && x.fr[0] == 0) : true;
  };

  // M1(e): from (qm, model region with z) the model delays to z = C validly and then takes e
  // into a state with a fair continuation.
  std::vector<std::vector<char>> m1(static_cast<size_t>(nmoves + 1), std::vector<char>(LM * ME.size(), 0));
  for (int e = -1; e < nmoves; ++e) {
    auto &tab = m1[static_cast<size_t>(e + 1)];
    std::vector<char> done(LM * ME.size(), 0);
    std::function<bool(int, int)> eval = [&](int q, int r) -> bool {
      size_t k = static_cast<size_t>(q) * ME.size() + static_cast<size_t>(r);
      if (done[k]) return tab[k];
      done[k] = 1;
      bool res = false;
      if (vm_me[static_cast<size_t>(q)][static_cast<size_t>(r)] && z_at(ME, r, false)) {
        bool land = false;
        if (z_at(ME, r, true)) {
          if (e < 0) {
            land = fair_m(q, me_mo[static_cast<size_t>(r)]);
          } else {
            const auto &t = m.transitions[static_cast<size_t>(e)];
            if (t.source == q && m_guard_me[static_cast<size_t>(e)][static_cast<size_t>(r)]) {
              int r2 = ME.reset(r, m_reset_me[static_cast<size_t>(e)]);
              land = vm_me[static_cast<size_t>(t.target)][static_cast<size_t>(r2)] &&
                     fair_m(t.target, me_mo[static_cast<size_t>(r2)]);
            }
          }
        }
        int nx = ME.succ(r);
        res = land || (nx != r && eval(q, nx));
      }
      tab[k] = res;
      return res;
    };
    for (size_t q = 0; q < LM; ++q)
      for (size_t r = 0; r < ME.size(); ++r) eval(static_cast<int>(q), static_cast<int>(r));
  }

  auto zidx = [&](size_t qm, size_t qs, size_t r) { return (qm * LS + qs) * Z.size() + r; };
  auto eidx = [&](size_t qm, size_t qs, size_t r) { return (qm * LS + qs) * E.size() + r; };
  std::vector<char> Y(LM * LS * Z.size(), 0);
  PlainSimResult res;
  res.pair_states = Y.size();

  while (true) {
    ++res.iterations;
    std::vector<char> Yn = Y;
    for (int e = -1; e < nmoves; ++e) {
      std::vector<char> search(LM * LS * E.size(), 0), ref(LM * LS * E.size(), 0);
      for (size_t qm = 0; qm < LM; ++qm)
        for (size_t qs = 0; qs < LS; ++qs)
          for (size_t r = 0; r < E.size(); ++r)
            search[eidx(qm, qs, r)] = vm_e[qm][r] && vs_e[qs][r] && z_at(E, static_cast<int>(r), false) &&
                                      !Y[zidx(qm, qs, static_cast<size_t>(pz[r]))];
      // Refutation targets: at z = C S answers into a valid pair outside the goal.
      for (size_t qm = 0; qm < LM; ++qm)
        for (size_t qs = 0; qs < LS; ++qs)
          for (size_t r = 0; r < E.size(); ++r) {
            if (!search[eidx(qm, qs, r)] || !z_at(E, static_cast<int>(r), true)) continue;
            int mq = static_cast<int>(qm);
            std::vector<int> mres;
            if (e >= 0) {
              const auto &t = m.transitions[static_cast<size_t>(e)];
              if (t.source != mq || !m_guard_e[static_cast<size_t>(e)][r]) continue;
              mq = t.target;
              mres = m_reset_e[static_cast<size_t>(e)];
            }
            for (int f : resp[static_cast<size_t>(e + 1)]) {
              int sq = static_cast<int>(qs);
              std::vector<int> rs = mres;
              if (f >= 0) {
                const auto &t = s.transitions[static_cast<size_t>(f)];
                if (t.source != sq || !s_guard_e[static_cast<size_t>(f)][r]) continue;
                sq = t.target;
                rs.insert(rs.end(), s_reset_e[static_cast<size_t>(f)].begin(), s_reset_e[static_cast<size_t>(f)].end());
              }
              int r2 = E.reset(static_cast<int>(r), rs);
              auto mq2 = static_cast<size_t>(mq), sq2 = static_cast<size_t>(sq);
              if (vm_e[mq2][static_cast<size_t>(r2)] && vs_e[sq2][static_cast<size_t>(r2)] &&
                  !Y[zidx(mq2, sq2, static_cast<size_t>(pz[static_cast<size_t>(r2)]))]) {
                ref[eidx(qm, qs, r)] = 1;
                break;
              }
            }
          }
      // Close under delay and spec-internal moves inside the search region.
      bool changed = true;
      while (changed) {
        changed = false;
        for (size_t qm = 0; qm < LM; ++qm)
          for (size_t qs = 0; qs < LS; ++qs)
            for (size_t r = 0; r < E.size(); ++r) {
              size_t k = eidx(qm, qs, r);
              if (ref[k] || !search[k]) continue;
              int nx = E.succ(static_cast<int>(r));
              bool hit = nx != static_cast<int>(r) && ref[eidx(qm, qs, static_cast<size_t>(nx))];
              for (size_t g = 0; g < s.transitions.size() && !hit; ++g) {
                const auto &t = s.transitions[g];
                if (!t.events.empty() || t.source != static_cast<int>(qs) || !s_guard_e[g][r]) continue;
                int r2 = E.reset(static_cast<int>(r), s_reset_e[g]);
                hit = ref[eidx(qm, static_cast<size_t>(t.target), static_cast<size_t>(r2))];
              }
              if (hit) {
                ref[k] = 1;
                changed = true;
              }
            }
      }
      const auto &tab = m1[static_cast<size_t>(e + 1)];
      for (size_t qm = 0; qm < LM; ++qm)
        for (size_t qs = 0; qs < LS; ++qs)
          for (size_t rz = 0; rz < Z.size(); ++rz) {
            size_t k = zidx(qm, qs, rz);
            if (Yn[k] || !vm_z[qm][rz] || !vs_z[qs][rz]) continue;
            for (int r : ext_of_z[rz]) {
              if (tab[qm * ME.size() + static_cast<size_t>(pme[static_cast<size_t>(r)])] &&
                  !ref[eidx(qm, qs, static_cast<size_t>(r))]) {
                Yn[k] = 1;
                break;
              }
            }
          }
    }
    if (Yn == Y) break;
    Y = std::move(Yn);
  }

  // Initial model states need a valid initial spec partner outside the model's winning set.
  res.simulates = true;
  for (size_t qm = 0; qm < LM && res.simulates; ++qm)
    for (size_t rmo = 0; rmo < MO.size(); ++rmo) {
      if (!mg.vertex_index.count({static_cast<int>(qm), static_cast<int>(rmo)})) continue;
      if (!ev(m.initial, static_cast<int>(qm), -1, MO, static_cast<int>(rmo))) continue;
      bool partner = false;
      for (int rz : z_of_mo[rmo]) {
        for (size_t qs = 0; qs < LS && !partner; ++qs)
          partner = vs_z[qs][static_cast<size_t>(rz)] && vm_z[qm][static_cast<size_t>(rz)] &&
                    ev(s.initial, 0, static_cast<int>(qs), Z, rz) && !Y[zidx(qm, qs, static_cast<size_t>(rz))];
        if (partner) break;
      }
      if (!partner) {
        res.simulates = false;
        break;
      }
    }
  for (size_t qm = 0; qm < LM; ++qm)
    for (size_t qs = 0; qs < LS; ++qs)
      for (size_t rz = 0; rz < Z.size(); ++rz)
        if (Y[zidx(qm, qs, rz)])
          res.losing.push_back(m.locations[qm].name + " " + s.locations[qs].name + " " + Z.str(static_cast<int>(rz)));
  std::sort(res.losing.begin(), res.losing.end());
  return res;
}

}  // namespace tsim
