#include <sstream>

#include "tsim/lang.hpp"

namespace tsim::lang {

namespace {

bool compound(const IntExpr &e) { return e.kind == IntExpr::Kind::Add || e.kind == IntExpr::Kind::Sub; }

std::string expr_atom(const IntExpr &e) { return compound(e) ? "(" + print(e) + ")" : print(e); }

// Nested conjunctions and disjunctions keep their parentheses so the tree shape survives a reparse.
std::string pred_atom(const PredAst &p) {
  bool wrap = p.kind == PredAst::Kind::And || p.kind == PredAst::Kind::Or;
  return wrap ? "(" + print(p) + ")" : print(p);
}

std::string proc_suffix(const std::optional<IntExpr> &e) { return e ? "@(" + print(*e) + ")" : ""; }

std::string quant(const Quant &q) { return "|" + q.var + ":" + print(q.lo) + ".." + print(q.hi); }

std::string dir(const std::optional<Dir> &d) {
  if (!d) return "";
  return *d == Dir::Send ? "!" : "?";
}

void list(std::ostringstream &os, const std::vector<IntExpr> &v) {
  for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << print(v[i]);
}

void fair_item(std::ostringstream &os, const FairItem &it) {
  os << (it.strong ? "strong" : "weak");
  if (it.pre) os << " " << print(*it.pre);
  if (it.is_event) {
    os << " event {" << dir(it.dir) << it.event << proc_suffix(it.tag) << "}";
    if (it.post) os << " " << print(*it.post);
  }
  os << ";";
}

}  // namespace

std::string print(const IntExpr &e) {
  switch (e.kind) {
    case IntExpr::Kind::Lit: return std::to_string(e.value);
    case IntExpr::Kind::PS: return "#PS";
    case IntExpr::Kind::Var: return e.var;
    case IntExpr::Kind::Add: return print(e.args[0]) + " + " + expr_atom(e.args[1]);
    case IntExpr::Kind::Sub: return print(e.args[0]) + " - " + expr_atom(e.args[1]);
    case IntExpr::Kind::Neg: return "-" + expr_atom(e.args[0]);
  }
  return "";
}

std::string print(const PredAst &p) {
  switch (p.kind) {
    case PredAst::Kind::True: return "true";
    case PredAst::Kind::False: return "false";
    case PredAst::Kind::Ref: return p.name + proc_suffix(p.proc);
    case PredAst::Kind::Clock:
      return p.name + proc_suffix(p.proc) + " " + to_string(p.cmp) + " " + std::to_string(p.value);
    case PredAst::Kind::Not: return "!" + pred_atom(p.args[0]);
    case PredAst::Kind::And:
    case PredAst::Kind::Or: {
      std::string sep = p.kind == PredAst::Kind::And ? " && " : " || ";
      std::string out;
      for (size_t i = 0; i < p.args.size(); ++i) out += (i ? sep : "") + pred_atom(p.args[i]);
      return out;
    }
  }
  return "";
}

std::string print(const RequirementFile &f) {
  std::ostringstream os;
  if (f.ps) os << "#PS = " << *f.ps << ";\n";
  if (!f.model_indices.empty() || !f.spec_indices.empty()) {
    list(os, f.model_indices);
    os << "; ";
    list(os, f.spec_indices);
    os << ";\n";
  }
  for (const auto &p : f.processes) {
    os << "\nprocess " << (p.range ? quant(*p.range) : print(p.index));
    if (p.name) os << " \"" << *p.name << "\"";
    os << " {\n";
    if (!p.clocks.empty()) {
      os << "  clock ";
      for (size_t i = 0; i < p.clocks.size(); ++i) os << (i ? ", " : "") << p.clocks[i];
      os << ";\n";
    }
    for (const auto &l : p.locations) {
      os << "  location " << l.name;
      if (l.inv) os << " inv " << print(*l.inv);
      os << ";\n";
    }
    if (p.initial) os << "  initial " << print(*p.initial) << ";\n";
    for (const auto &t : p.transitions) {
      os << "  trans " << t.source << " -> " << t.target;
      if (t.guard) os << " when " << print(*t.guard);
      if (t.dir) os << " sync " << dir(t.dir) << t.event;
      if (!t.resets.empty()) {
        os << " reset ";
        for (size_t i = 0; i < t.resets.size(); ++i) os << (i ? ", " : "") << t.resets[i];
      }
      os << ";\n";
    }
    os << "}\n";
  }
  for (const auto &b : f.assumes) {
    os << "\n";
    if (b.owner) os << print(*b.owner) << " ";
    os << "assume {\n";
    for (size_t i = 0; i <= b.items.size(); ++i) {
      if (b.quant && b.quant_from == i) os << "  " << quant(*b.quant) << ",\n";
      if (i < b.items.size()) {
        os << "  ";
        fair_item(os, b.items[i]);
        os << "\n";
      }
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace tsim::lang
