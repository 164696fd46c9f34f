#include <sstream>
#include <stdexcept>

#include "tsim/bench.hpp"

namespace tsim::bench {

namespace {

std::string header(const std::string &comment, int ps) {
  std::ostringstream os;
  os << "// " << comment << "\n#PS = " << ps << ";\n" << ps - 1 << "; " << ps << ";\n";
  return os.str();
}

std::string join(const std::vector<std::string> &parts, const std::string &sep, const std::string &empty) {
  if (parts.empty()) return empty;
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return parts.size() > 1 ? "(" + out + ")" : out;
}

void require(bool ok, const char *msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// One Fischer process whose lock value is `id`.
std::string fischer_proc(int k, int id, bool mutated) {
  std::ostringstream os;
  std::string mine = "id" + std::to_string(id) + "@(1)";
  os << "\nprocess " << k << " \"fischer\" {\n"
     << "  clock x;\n"
     << "  location idle;\n"
     << "  location req inv x <= 10;\n"
     << "  location wait;\n"
     << "  location cs;\n"
     << "  trans idle -> req when id0@(1) reset x;\n"
     << "  trans req -> wait sync !set" << id << " reset x;\n"
     << "  trans wait -> cs when x > 19 && " << (mutated ? "id0@(1)" : mine) << ";\n"
     << "  trans wait -> idle when x > 19 && !" << mine << ";\n"
     << "  trans cs -> idle sync !unlock;\n"
     << "}\n";
  return os.str();
}

}  // namespace

std::string gen_fischer(int m, Variant v) {
  require(m >= 2, "fischer needs m >= 2");
  int ps = m + 1;  // lock, m-2 environment processes, model, spec
  std::ostringstream os;
  os << header("Fischer mutual exclusion, " + std::to_string(m) + " processes" +
                   (v == Variant::Mutated ? ", spec enters the critical section on a wrong lock value" : ""),
               ps);
  os << "\nprocess 1 \"lock\" {\n  location id0;\n";
  for (int id = 2; id < ps; ++id) os << "  location id" << id << ";\n";
  for (int from = 0; from < ps; ++from) {
    if (from == 1) continue;
    for (int id = 2; id < ps; ++id) os << "  trans id" << from << " -> id" << id << " sync ?set" << id << ";\n";
    os << "  trans id" << from << " -> id0 sync ?unlock;\n";
  }
  os << "}\n";
  // S reuses the model's lock value, so both compete for the lock in the same way.
  for (int k = 2; k < ps; ++k) os << fischer_proc(k, k, false);
  os << fischer_proc(ps, ps - 1, v == Variant::Mutated);
  return os.str();
}

std::string gen_csma(int m, Variant v) {
  require(m >= 1, "csma needs m >= 1");
  int ps = m + 2;
  std::ostringstream os;
  os << header("CSMA/CD, bus and " + std::to_string(m) + " senders" +
                   (v == Variant::Mutated ? ", spec frame time bound made strict" : ""),
               ps);
  os << "\nprocess 1 \"bus\" {\n"
     << "  clock y;\n"
     << "  location free;\n"
     << "  location active;\n"
     << "  location collision inv y < 26;\n"
     << "  trans free -> active sync ?begin reset y;\n"
     << "  trans free -> free sync ?end;\n"
     << "  trans active -> free sync ?end reset y;\n"
     << "  trans active -> collision when y < 26 sync ?begin reset y;\n"
     << "  trans collision -> collision sync ?abort;\n"
     << "  trans collision -> collision sync ?end;\n"
     << "  trans collision -> free when y < 26 reset y;\n"
     << "}\n";
  for (int k = 2; k <= ps; ++k) {
    bool mutated = k == ps && v == Variant::Mutated;
    os << "\nprocess " << k << " \"sender\" {\n"
       << "  clock x;\n"
       << "  location wait;\n"
       << "  location transm inv x " << (mutated ? "<" : "<=") << " 808;\n"
       << "  location retry inv x < 52;\n"
       << "  trans wait -> transm when !collision@(1) sync !begin reset x;\n"
       << "  trans wait -> retry when active@(1) && y@(1) >= 26 reset x;\n"
       << "  trans transm -> wait when x == 808 sync !end reset x;\n"
       << "  trans transm -> retry when x < 52 sync !abort reset x;\n"
       << "  trans retry -> transm when !collision@(1) sync !begin reset x;\n"
       << "  trans retry -> retry when !free@(1) reset x;\n"
       << "}\n";
  }
  return os.str();
}

std::string gen_prodcons(int m, Variant v) {
  require(m >= 1, "prodcons needs m >= 1");
  int ps = m + 3;
  std::ostringstream os;
  os << header("Producer/consumer, one producer and " + std::to_string(m) + " consumers" +
                   (v == Variant::Mutated ? ", spec consumes no earlier than 20" : ""),
               ps);
  // A put on a full buffer and a get on an empty one leave it unchanged, so nobody blocks.
  os << "\nprocess 1 \"buffer\" {\n"
     << "  location empty;\n"
     << "  location full;\n"
     << "  trans empty -> full sync ?put;\n"
     << "  trans full -> full sync ?put;\n"
     << "  trans full -> empty sync ?get;\n"
     << "  trans empty -> empty sync ?get;\n"
     << "}\n"
     << "\nprocess 2 \"producer\" {\n"
     << "  clock x;\n"
     << "  location run inv x <= 10;\n"
     << "  trans run -> run when x >= 5 sync !put reset x;\n"
     << "}\n";
  for (int k = 3; k <= ps; ++k) {
    bool mutated = k == ps && v == Variant::Mutated;
    os << "\nprocess " << k << " \"consumer\" {\n"
       << "  clock x;\n"
       << "  location run inv x <= 20;\n"
       << "  trans run -> run when x >= " << (mutated ? 20 : 15) << " sync !get reset x;\n"
       << "}\n";
  }
  return os.str();
}

const char *to_string(Topology t) {
  switch (t) {
    case Topology::Linear: return "linear";
    case Topology::Tree: return "tree";
    case Topology::Irregular: return "irregular";
  }
  return "?";
}
const char *to_string(Service s) { return s == Service::All ? "all" : "one"; }
const char *to_string(Requirement r) { return r == Requirement::Strong ? "strong" : "weak"; }

int prime_mod8(int i) {
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  return primes[((i % 8) + 8) % 8];
}

bool serve(Topology t, int h, int k, int n) {
  if (h < 2 || k < 2 || h > n || k > n) return false;
  switch (t) {
    case Topology::Linear: return h <= n - 1 && k == h + 1;
    case Topology::Tree: return k / 2 == h;
    case Topology::Irregular: return (h * prime_mod8(h) + prime_mod8(k)) % 7 == 0;
  }
  return false;
}

std::vector<std::pair<int, int>> serve_pairs(Topology t, int n) {
  std::vector<std::pair<int, int>> out;
  for (int h = 2; h <= n; ++h)
    for (int k = 2; k <= n; ++k)
      if (serve(t, h, k, n)) out.emplace_back(h, k);
  return out;
}

std::string gen_network(Topology t, int m, Service s, Requirement r) {
  require(m >= 1, "network needs m >= 1");
  int n = m + 2, ps = n + 1;
  std::ostringstream os;
  os << header(std::string(to_string(t)) + " network, " + std::to_string(m) + " workers, service by " +
                   (s == Service::All ? "all incomings" : "one incoming") + ", " + to_string(r) + " requirement",
               ps);
  os << "\nprocess 1 \"dispatcher\" {\n  location disp;\n  trans disp -> disp sync !execute;\n}\n";
  for (int k = 2; k <= ps; ++k) {
    int self = k == ps ? n : k;  // S has the model's channels
    std::vector<std::string> act, idle;
    for (int h = 2; h <= n; ++h) {
      // Workers never read the model, which keeps the environment closed under copying.
      if (!serve(t, h, self, n) || (h == n && self != n)) continue;
      std::string at = h == self ? "" : "@(" + std::to_string(h) + ")";
      act.push_back("active" + at);
      idle.push_back("idle" + at);
    }
    std::string g_act, g_idle;
    if (s == Service::All) {
      g_act = act.empty() ? "false" : join(act, " && ", "true");
      g_idle = join(idle, " && ", "true");
    } else {
      g_act = join(act, " || ", "false");
      g_idle = idle.empty() ? "true" : join(idle, " || ", "false");
    }
    os << "\nprocess " << k << " \"worker\" {\n"
       << "  clock x;\n"
       << "  location active;\n"
       << "  location idle;\n"
       << "  trans active -> idle when x > 1 && " << g_idle << " sync ?execute reset x;\n"
       << "  trans idle -> active when x > 1 && " << g_act << " sync ?execute reset x;\n"
       << "  trans idle -> idle sync ?execute;\n"
       << "}\n";
  }
  os << "\n#PS-1 assume {\n  strong event {execute@(#PS-1)};\n};\n";
  if (r == Requirement::Strong)
    os << "#PS assume {\n  strong true event {execute@(#PS)} true;\n};\n";
  else
    os << "#PS assume {\n  weak idle@(#PS);\n};\n";
  os << "assume {\n  |k:2..#PS-2,\n  strong true event {execute@(k)};\n}\n";
  return os.str();
}

}  // namespace tsim::bench
