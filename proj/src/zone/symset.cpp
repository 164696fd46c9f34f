#include "tsim/symset.hpp"

#include <algorithm>
#include <sstream>

namespace tsim {

Space::Space(std::vector<Component> comps, std::vector<std::string> clocks)
    : comps_(std::move(comps)), clocks_(std::move(clocks)) {
  for (size_t c = 0; c < comps_.size(); ++c) {
    if (comps_[c].locations.empty()) throw model_error("component without locations: " + comps_[c].name);
    stride_.push_back(count_);
    count_ *= comps_[c].locations.size();
    for (size_t l = 0; l < comps_[c].locations.size(); ++l)
      if (!props_.emplace(comps_[c].locations[l], std::make_pair(int(c), int(l))).second)
        throw model_error("duplicate location proposition " + comps_[c].locations[l]);
  }
  for (size_t i = 0; i < clocks_.size(); ++i)
    if (!clock_idx_.emplace(clocks_[i], int(i) + 1).second)
      throw model_error("duplicate clock " + clocks_[i]);
  ceil_.assign(clocks_.size() + 1, 0);
}

DPart Space::with(DPart d, int comp, int l) const {
  auto c = static_cast<size_t>(comp);
  uint64_t cur = (d / stride_[c]) % comps_[c].locations.size();
  return d - cur * stride_[c] + static_cast<uint64_t>(l) * stride_[c];
}

DPart Space::make(const std::vector<int> &locs) const {
  DPart d = 0;
  for (size_t c = 0; c < locs.size(); ++c) d += static_cast<uint64_t>(locs[c]) * stride_[c];
  return d;
}

int Space::clock_index(const std::string &x) const {
  auto it = clock_idx_.find(x);
  return it == clock_idx_.end() ? -1 : it->second;
}

std::pair<int, int> Space::prop(const std::string &p) const {
  auto it = props_.find(p);
  if (it == props_.end()) throw model_error("proposition out of scope: " + p);
  return it->second;
}

void Space::set_ceiling(const std::string &x, int32_t c) {
  int i = clock_index(x);
  if (i < 0) throw model_error("clock out of scope: " + x);
  ceil_[static_cast<size_t>(i)] = c;
}

std::string Space::dpart_str(DPart d) const {
  std::string s;
  for (int c = 0; c < components(); ++c) {
    if (c) s += ' ';
    s += component(c).locations[static_cast<size_t>(loc(d, c))];
  }
  return s;
}

Fed eval_pred(const Space &sp, DPart d, const Pred &p) {
  using K = PredNode::Kind;
  const int n = sp.nclocks();
  switch (p->kind) {
    case K::True: return Fed::universe(n);
    case K::False: return Fed(n);
    case K::Prop: {
      auto [c, l] = sp.prop(p->name);
      return sp.loc(d, c) == l ? Fed::universe(n) : Fed(n);
    }
    case K::Clock: {
      int i = sp.clock_index(p->name);
      if (i < 0) throw model_error("clock out of scope: " + p->name);
      auto c = static_cast<int32_t>(p->value);
      DBM z = DBM::universe(n);
      switch (p->cmp) {
        case Cmp::LT: z.constrain(i, 0, bound(c, true)); break;
        case Cmp::LE: z.constrain(i, 0, bound(c, false)); break;
        case Cmp::EQ:
          z.constrain(i, 0, bound(c, false));
          z.constrain(0, i, bound(-c, false));
          break;
        case Cmp::GE: z.constrain(0, i, bound(-c, false)); break;
        case Cmp::GT: z.constrain(0, i, bound(-c, true)); break;
      }
      return Fed(n, z);
    }
    case K::Not: return eval_pred(sp, d, p->args[0]).complement();
    case K::And: {
      Fed acc = Fed::universe(n);
      for (const auto &a : p->args) {
        acc = acc.meet(eval_pred(sp, d, a));
        if (acc.empty()) break;
      }
      return acc;
    }
    case K::Or: {
      Fed acc(n);
      for (const auto &a : p->args) acc.add(eval_pred(sp, d, a));
      return acc;
    }
  }
  return Fed(n);
}

SymSet SymSet::full(SpacePtr sp) {
  SymSet s(sp);
  for (DPart d = 0; d < sp->dpart_count(); ++d) s.parts_.emplace(d, Fed::universe(sp->nclocks()));
  return s;
}

SymSet SymSet::from_pred(SpacePtr sp, const Pred &p) {
  SymSet s(sp);
  for (DPart d = 0; d < sp->dpart_count(); ++d) s.set(d, eval_pred(*sp, d, p));
  return s;
}

SymSet SymSet::from_pred_on(SpacePtr sp, const Pred &p, const SymSet &support) {
  SymSet s(sp);
  for (const auto &[d, f] : support.parts_) s.set(d, eval_pred(*sp, d, p));
  return s;
}

const Fed *SymSet::find(DPart d) const {
  auto it = parts_.find(d);
  return it == parts_.end() ? nullptr : &it->second;
}

Fed SymSet::at(DPart d) const {
  auto it = parts_.find(d);
  return it == parts_.end() ? Fed(sp_->nclocks()) : it->second;
}

void SymSet::set(DPart d, Fed f) {
  if (f.empty())
    parts_.erase(d);
  else
    parts_[d] = std::move(f);
}

void SymSet::add(DPart d, const Fed &f) {
  if (f.empty()) return;
  auto it = parts_.find(d);
  if (it == parts_.end())
    parts_.emplace(d, f);
  else
    it->second.add(f);
}

void SymSet::add(DPart d, DBM z) {
  if (z.empty()) return;
  auto it = parts_.find(d);
  if (it == parts_.end())
    parts_.emplace(d, Fed(sp_->nclocks(), std::move(z)));
  else
    it->second.add(std::move(z));
}

size_t SymSet::zone_count() const {
  size_t n = 0;
  for (const auto &[d, f] : parts_) n += f.size();
  return n;
}

SymSet SymSet::unite(const SymSet &o) const {
  SymSet out = *this;
  for (const auto &[d, f] : o.parts_) out.add(d, f);
  return out;
}

SymSet SymSet::meet(const SymSet &o) const {
  SymSet out(sp_);
  const auto &small = parts_.size() <= o.parts_.size() ? parts_ : o.parts_;
  const auto &large = parts_.size() <= o.parts_.size() ? o.parts_ : parts_;
  for (const auto &[d, f] : small) {
    auto it = large.find(d);
    if (it == large.end()) continue;
    out.set(d, f.meet(it->second));
  }
  return out;
}

SymSet SymSet::minus(const SymSet &o) const {
  SymSet out(sp_);
  for (const auto &[d, f] : parts_) {
    auto it = o.parts_.find(d);
    out.set(d, it == o.parts_.end() ? f : f.minus(it->second));
  }
  return out;
}

SymSet SymSet::complement() const { return full(sp_).minus(*this); }

SymSet SymSet::complement_on(const SymSet &support) const {
  SymSet out(sp_);
  for (const auto &[d, f] : support.parts_) {
    auto it = parts_.find(d);
    out.set(d, it == parts_.end() ? Fed::universe(sp_->nclocks()) : it->second.complement());
  }
  return out;
}

bool SymSet::subset_of(const SymSet &o) const {
  for (const auto &[d, f] : parts_) {
    auto it = o.parts_.find(d);
    if (it == o.parts_.end() || !f.subset_of(it->second)) return false;
  }
  return true;
}

SymSet SymSet::quantify(const std::vector<int> &comps, const std::vector<int> &clocks, bool reset) const {
  SymSet out(sp_);
  // First collapse the eliminated components onto location 0, then spread.
  std::map<DPart, Fed> collapsed;
  for (const auto &[d, f] : parts_) {
    DPart base = d;
    for (int c : comps) base = sp_->with(base, c, 0);
    Fed g = f.map([&](DBM &z) {
      for (int x : clocks) {
        z.free(x);
        if (reset) z.constrain(x, 0, kLeZero);
      }
    });
    auto it = collapsed.find(base);
    if (it == collapsed.end())
      collapsed.emplace(base, std::move(g));
    else
      it->second.add(g);
  }
  for (auto &[base, f] : collapsed) {
    std::vector<DPart> ds{base};
    for (int c : comps) {
      std::vector<DPart> next;
      int n = static_cast<int>(sp_->component(c).locations.size());
      for (DPart d : ds)
        for (int l = 0; l < n; ++l) next.push_back(sp_->with(d, c, l));
      ds = std::move(next);
    }
    for (DPart d : ds) out.add(d, f);
  }
  return out;
}

SymSet SymSet::map_zones(const std::function<void(DBM &)> &f) const {
  SymSet out(sp_);
  for (const auto &[d, fed] : parts_) out.set(d, fed.map(f));
  return out;
}

SymSet SymSet::extrapolated() const {
  SymSet out(sp_);
  for (const auto &[d, f] : parts_) {
    Fed g = f;
    g.extrapolate(sp_->ceilings());
    out.set(d, std::move(g));
  }
  return out;
}

SymSet SymSet::merged() const {
  SymSet out(sp_);
  for (const auto &[d, f] : parts_) {
    Fed g = f;
    g.merge();
    out.set(d, std::move(g));
  }
  return out;
}

bool SymSet::contains(DPart d, const std::vector<double> &clocks) const {
  auto it = parts_.find(d);
  return it != parts_.end() && it->second.contains_point(clocks);
}

std::string SymSet::dump() const {
  std::vector<std::string> lines;
  for (const auto &[d, f] : parts_) {
    std::string head = sp_->dpart_str(d);
    for (const auto &z : f.zones()) lines.push_back(head + " :: " + z.str(sp_->clock_names()));
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto &l : lines) out += l + "\n";
  return out;
}

SymSet elapse_pre(const SymSet &path, const SymSet &goal) {
  SymSet out(path.space());
  for (const auto &[d, g] : goal.parts()) {
    const Fed *p = path.find(d);
    if (!p) continue;
    out.set(d, g.elapse_pre(*p));
  }
  return out;
}

SymSet lift(const SymSet &s, const SpacePtr &to) {
  const auto &from = *s.space();
  uint64_t base = from.dpart_count();
  uint64_t copies = to->dpart_count() / base;
  int extra = to->nclocks() - from.nclocks();
  SymSet out(to);
  for (const auto &[d, f] : s.parts()) {
    Fed g(to->nclocks());
    for (const auto &z : f.zones()) g.add(z.extend(extra));
    for (uint64_t k = 0; k < copies; ++k) out.set(d + k * base, g);
  }
  return out;
}

SymSet project(const SymSet &s, const SpacePtr &to) {
  uint64_t base = to->dpart_count();
  int n = to->nclocks();
  SymSet out(to);
  for (const auto &[d, f] : s.parts()) {
    Fed g(n);
    for (const auto &z : f.zones()) g.add(z.project(n));
    out.add(d % base, g);
  }
  return out;
}

}  // namespace tsim
