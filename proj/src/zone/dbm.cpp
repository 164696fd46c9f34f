#include "tsim/dbm.hpp"

#include <algorithm>
#include <sstream>

namespace tsim {

DBM DBM::universe(int nclocks) {
  DBM d;
  d.dim_ = nclocks + 1;
  d.m_.assign(static_cast<size_t>(d.dim_ * d.dim_), kInf);
  for (int i = 0; i < d.dim_; ++i) {
    d.ref(i, i) = kLeZero;
    d.ref(0, i) = kLeZero;
  }
  return d;
}

DBM DBM::zero(int nclocks) {
  DBM d;
  d.dim_ = nclocks + 1;
  d.m_.assign(static_cast<size_t>(d.dim_ * d.dim_), kLeZero);
  return d;
}

bool DBM::constrain(int i, int j, raw_t b) {
  if (empty_) return false;
  if (b >= at(i, j)) return true;
  if (bound_add(b, at(j, i)) < kLeZero) {
    empty_ = true;
    return false;
  }
  ref(i, j) = b;
  for (int k = 0; k < dim_; ++k) {
    raw_t ki = at(k, i);
    if (ki == kInf) continue;
    raw_t kij = bound_add(ki, b);
    for (int l = 0; l < dim_; ++l) {
      raw_t v = bound_add(kij, at(j, l));
      if (v < at(k, l)) ref(k, l) = v;
    }
  }
  return true;
}

void DBM::close() {
  if (empty_) return;
  for (int k = 0; k < dim_; ++k)
    for (int i = 0; i < dim_; ++i) {
      raw_t ik = at(i, k);
      if (ik == kInf) continue;
      for (int j = 0; j < dim_; ++j) {
        raw_t v = bound_add(ik, at(k, j));
        if (v < at(i, j)) ref(i, j) = v;
      }
      if (at(i, i) < kLeZero) {
        empty_ = true;
        return;
      }
    }
}

void DBM::up() {
  if (empty_) return;
  for (int i = 1; i < dim_; ++i) ref(i, 0) = kInf;
}

void DBM::down() {
  if (empty_) return;
  for (int j = 1; j < dim_; ++j) {
    ref(0, j) = kLeZero;
    for (int i = 1; i < dim_; ++i)
      if (at(i, j) < at(0, j)) ref(0, j) = at(i, j);
  }
}

void DBM::free(int k) {
  if (empty_) return;
  for (int i = 0; i < dim_; ++i) {
    if (i == k) continue;
    ref(k, i) = kInf;
    ref(i, k) = at(i, 0);
  }
}

void DBM::reset(int k) {
  if (empty_) return;
  for (int i = 0; i < dim_; ++i) {
    if (i == k) continue;
    ref(k, i) = at(0, i);
    ref(i, k) = at(i, 0);
  }
  ref(k, k) = kLeZero;
}

void DBM::unreset(int k) {
  if (constrain(k, 0, kLeZero)) free(k);
}

void DBM::extrapolate(const std::vector<int32_t> &ceilings) {
  if (empty_) return;
  bool changed = false;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      if (i == j) continue;
      raw_t b = at(i, j);
      if (b == kInf) continue;
      if (i != 0 && b > bound(ceilings[static_cast<size_t>(i)], false)) {
        ref(i, j) = kInf;
        changed = true;
      } else if (j != 0 && b < bound(-ceilings[static_cast<size_t>(j)], true)) {
        ref(i, j) = bound(-ceilings[static_cast<size_t>(j)], true);
        changed = true;
      }
    }
  if (changed) close();
}

DBM DBM::extend(int n) const {
  DBM d;
  d.dim_ = dim_ + n;
  d.empty_ = empty_;
  d.m_.assign(static_cast<size_t>(d.dim_ * d.dim_), kInf);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) d.ref(i, j) = at(i, j);
  for (int y = dim_; y < d.dim_; ++y) {
    d.ref(y, y) = kLeZero;
    d.ref(0, y) = kLeZero;
    for (int i = 1; i < dim_; ++i) d.ref(i, y) = at(i, 0);
  }
  return d;
}

DBM DBM::project(int n) const {
  DBM d;
  d.dim_ = n + 1;
  d.empty_ = empty_;
  d.m_.resize(static_cast<size_t>(d.dim_ * d.dim_));
  for (int i = 0; i < d.dim_; ++i)
    for (int j = 0; j < d.dim_; ++j) d.ref(i, j) = at(i, j);
  return d;
}

bool DBM::includes(const DBM &o) const {
  if (o.empty_) return true;
  if (empty_) return false;
  for (size_t k = 0; k < m_.size(); ++k)
    if (m_[k] < o.m_[k]) return false;
  return true;
}

DBM DBM::hull(const DBM &o) const {
  if (o.empty_) return *this;
  if (empty_) return o;
  DBM d = *this;
  for (size_t k = 0; k < m_.size(); ++k) d.m_[k] = std::max(m_[k], o.m_[k]);
  return d;
}

DBM DBM::meet(const DBM &o) const {
  DBM d = *this;
  if (d.empty_ || o.empty_) {
    d.empty_ = true;
    return d;
  }
  bool changed = false;
  for (size_t k = 0; k < m_.size(); ++k)
    if (o.m_[k] < d.m_[k]) {
      d.m_[k] = o.m_[k];
      changed = true;
    }
  if (changed) d.close();
  return d;
}

bool DBM::intersects(const DBM &o) const {
  if (empty_ || o.empty_) return false;
  // Both operands are canonical, so a negative cycle in the meet already shows up on two edges.
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      if (bound_add(at(i, j), o.at(j, i)) < kLeZero) return false;
  return true;
}

std::vector<DBM> DBM::entry_points() const {
  std::vector<DBM> out;
  if (empty_) return out;
  for (int i = 1; i < dim_; ++i) {
    raw_t lo = at(0, i);
    if (bound_strict(lo)) continue;
    DBM d = *this;
    if (d.constrain(i, 0, bound(-bound_value(lo), false))) out.push_back(std::move(d));
  }
  return out;
}

std::vector<DBM> DBM::subtract(const DBM &o) const {
  if (empty_) return {};
  if (!intersects(o)) return {*this};
  // Split only on a minimal constraint set of o. An edge is dropped when a two-edge path over edges
  // still kept implies it, so every dropped edge stays implied by the kept ones.
  const int n = dim_;
  std::vector<char> keep(static_cast<size_t>(n * n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) keep[static_cast<size_t>(i * n + j)] = i != j && o.at(i, j) != kInf;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!keep[static_cast<size_t>(i * n + j)]) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j || !keep[static_cast<size_t>(i * n + k)] || !keep[static_cast<size_t>(k * n + j)])
          continue;
        if (bound_add(o.at(i, k), o.at(k, j)) <= o.at(i, j)) {
          keep[static_cast<size_t>(i * n + j)] = 0;
          break;
        }
      }
    }
  std::vector<DBM> out;
  DBM cur = *this;
  for (int i = 0; i < n && !cur.empty_; ++i)
    for (int j = 0; j < n && !cur.empty_; ++j) {
      if (!keep[static_cast<size_t>(i * n + j)]) continue;
      raw_t b = o.at(i, j);
      if (cur.at(i, j) <= b) continue;
      DBM piece = cur;
      if (piece.constrain(j, i, bound_negate(b))) out.push_back(std::move(piece));
      cur.constrain(i, j, b);
    }
  return out;
}

size_t DBM::hash() const {
  size_t h = 1469598103934665603ull;
  for (raw_t v : m_) {
    h ^= static_cast<size_t>(static_cast<uint32_t>(v));
    h *= 1099511628211ull;
  }
  return h;
}

std::string DBM::str(const std::vector<std::string> &names) const {
  if (empty_) return "false";
  auto nm = [&](int i) {
    return i - 1 < static_cast<int>(names.size()) ? names[static_cast<size_t>(i - 1)] : "x" + std::to_string(i);
  };
  std::vector<std::string> parts;
  for (int i = 1; i < dim_; ++i) {
    raw_t lo = at(0, i);
    raw_t hi = at(i, 0);
    if (hi != kInf && lo != kInf && bound_value(hi) == -bound_value(lo) && !bound_strict(hi) &&
        !bound_strict(lo)) {
      parts.push_back(nm(i) + "==" + std::to_string(bound_value(hi)));
      continue;
    }
    if (lo != kLeZero)
      parts.push_back(nm(i) + (bound_strict(lo) ? ">" : ">=") + std::to_string(-bound_value(lo)));
    if (hi != kInf) parts.push_back(nm(i) + (bound_strict(hi) ? "<" : "<=") + std::to_string(bound_value(hi)));
  }
  for (int i = 1; i < dim_; ++i)
    for (int j = 1; j < dim_; ++j) {
      if (i == j) continue;
      raw_t b = at(i, j);
      if (b == kInf) continue;
      // skip diagonals implied by the unary bounds
      if (bound_add(at(i, 0), at(0, j)) <= b) continue;
      parts.push_back(nm(i) + "-" + nm(j) + (bound_strict(b) ? "<" : "<=") + std::to_string(bound_value(b)));
    }
  if (parts.empty()) return "true";
  std::string s;
  for (size_t k = 0; k < parts.size(); ++k) s += (k ? " && " : "") + parts[k];
  return s;
}

bool DBM::contains_point(const std::vector<double> &v) const {
  if (empty_) return false;
  auto val = [&](int i) { return i == 0 ? 0.0 : v[static_cast<size_t>(i - 1)]; };
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      raw_t b = at(i, j);
      if (i == j || b == kInf) continue;
      double d = val(i) - val(j);
      double c = bound_value(b);
      if (bound_strict(b) ? !(d < c) : !(d <= c)) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------

void Fed::add(DBM z) {
  if (z.empty()) return;
  for (const auto &e : zones_)
    if (e.includes(z)) return;
  zones_.erase(std::remove_if(zones_.begin(), zones_.end(), [&](const DBM &e) { return z.includes(e); }),
               zones_.end());
  zones_.push_back(std::move(z));
}

void Fed::add(const Fed &f) {
  for (const auto &z : f.zones_) add(z);
}

Fed Fed::meet(const Fed &o) const {
  Fed out(nclocks_);
  for (const auto &a : zones_)
    for (const auto &b : o.zones_) {
      if (!a.intersects(b)) continue;
      out.add(a.meet(b));
    }
  return out;
}

Fed Fed::meet(const DBM &z) const {
  Fed out(nclocks_);
  for (const auto &a : zones_)
    if (a.intersects(z)) out.add(a.meet(z));
  return out;
}

Fed Fed::minus(const Fed &o) const {
  Fed cur = *this;
  for (const auto &b : o.zones_) {
    Fed next(nclocks_);
    bool hit = false;
    for (const auto &a : cur.zones_) {
      if (!a.intersects(b)) {
        next.zones_.push_back(a);
        continue;
      }
      hit = true;
      if (b.includes(a)) continue;
      for (auto &z : a.subtract(b)) next.add(std::move(z));
    }
    if (!hit) continue;
    if (next.zones_.size() > 2 * cur.zones_.size() + 8) next.merge();
    cur = std::move(next);
    if (cur.empty()) break;
  }
  return cur;
}

namespace {

// False when a gap separates the closures of a and b; then their union is never convex.
bool touching(const DBM &a, const DBM &b) {
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      if (bound_add(a.at(i, j) | 1, b.at(j, i) | 1) < kLeZero) return false;
  return true;
}

}  // namespace

void Fed::merge() {
  for (size_t i = 0; i < zones_.size(); ++i) {
    bool grown = true;
    while (grown) {
      grown = false;
      for (size_t j = 0; j < zones_.size(); ++j) {
        if (j == i || !touching(zones_[i], zones_[j])) continue;
        DBM h = zones_[i].hull(zones_[j]);
        bool exact = true;
        for (const auto &piece : h.subtract(zones_[i]))
          if (!zones_[j].includes(piece)) {
            exact = false;
            break;
          }
        if (!exact) continue;
        zones_[i] = std::move(h);
        zones_.erase(zones_.begin() + static_cast<std::ptrdiff_t>(j));
        if (j < i) --i;
        // Drop zones swallowed by the hull.
        for (size_t k = 0; k < zones_.size();) {
          if (k != i && zones_[i].includes(zones_[k])) {
            zones_.erase(zones_.begin() + static_cast<std::ptrdiff_t>(k));
            if (k < i) --i;
          } else {
            ++k;
          }
        }
        grown = true;
        break;
      }
    }
  }
}

Fed Fed::complement() const { return universe(nclocks_).minus(*this); }

bool Fed::subset_of(const Fed &o) const {
  for (const auto &a : zones_) {
    bool covered = false;
    for (const auto &b : o.zones_)
      if (b.includes(a)) {
        covered = true;
        break;
      }
    if (covered) continue;
    std::vector<DBM> rest{a};
    for (const auto &b : o.zones_) {
      std::vector<DBM> next;
      for (const auto &r : rest) {
        auto parts = r.subtract(b);
        next.insert(next.end(), parts.begin(), parts.end());
      }
      rest = std::move(next);
      if (rest.empty()) break;
    }
    if (!rest.empty()) return false;
  }
  return true;
}

bool Fed::contains_point(const std::vector<double> &v) const {
  return std::any_of(zones_.begin(), zones_.end(), [&](const DBM &z) { return z.contains_point(v); });
}

Fed Fed::down() const {
  return map([](DBM &z) { z.down(); });
}

namespace {

// Points that reach g by delay without touching the convex bad zone b before arriving.
Fed pred_avoiding(const DBM &g, const DBM &b, int n) {
  Fed out(n);
  DBM gd = g;
  gd.down();
  DBM bd = b;
  bd.down();
  for (auto &z : gd.subtract(bd)) out.add(std::move(z));
  DBM gb = g.meet(bd);
  if (!gb.empty())
    for (auto &z : gb.subtract(b)) {
      z.down();
      out.add(std::move(z));
    }
  if (g.intersects(b))
    for (auto &e : b.entry_points()) {
      DBM y = g.meet(e);
      if (y.empty()) continue;
      y.down();
      out.add(std::move(y));
    }
  return out;
}

}  // namespace

Fed Fed::elapse_pre(const Fed &path) const {
  Fed out(nclocks_);
  for (const auto &g : zones_) {
    DBM gd = g;
    gd.down();
    // Delay trajectories into g never leave down(g), so only the bad part inside it matters.
    Fed cone(nclocks_);
    cone.add(gd);
    Fed bad = cone.minus(path);
    if (bad.empty()) {
      out.add(std::move(gd));
      continue;
    }
    Fed acc(nclocks_);
    bool first = true;
    for (const auto &b : bad.zones()) {
      Fed p = pred_avoiding(g, b, nclocks_);
      acc = first ? std::move(p) : acc.meet(p);
      first = false;
      if (acc.empty()) break;
    }
    out.add(acc);
  }
  return out.meet(path);
}

void Fed::extrapolate(const std::vector<int32_t> &ceilings) {
  std::vector<DBM> old = std::move(zones_);
  zones_.clear();
  for (auto &z : old) {
    z.extrapolate(ceilings);
    add(std::move(z));
  }
}

void Fed::sort() { std::sort(zones_.begin(), zones_.end()); }

}  // namespace tsim
