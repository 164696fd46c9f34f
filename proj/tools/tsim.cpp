// tsim: fair simulation checking for networks of timed automata.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tsim/bench.hpp"
#include "tsim/lang.hpp"
#include "tsim/region.hpp"

namespace {

using namespace tsim;

enum Exit { kSimulates = 0, kNotSimulates = 1, kUsage = 2, kRejected = 3 };

bool read_file(const std::string &path, std::string &out) {
  std::ifstream in(path);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

// Parses and expands `path`; prints diagnostics and returns nullopt on failure.
std::optional<lang::Network> load(const std::string &path, std::optional<long long> ps) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << path << ": cannot read file\n";
    return std::nullopt;
  }
  auto parsed = lang::parse(text);
  for (const auto &d : parsed.diags) std::cerr << path << ":" << d.str() << "\n";
  if (!parsed.file) return std::nullopt;
  auto expanded = lang::expand(*parsed.file, ps);
  for (const auto &d : expanded.diags) std::cerr << path << ":" << d.str() << "\n";
  return expanded.net;
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::Simulates: return kSimulates;
    case Outcome::NotSimulates: return kNotSimulates;
    case Outcome::RejectedNonUSF: return kRejected;
  }
  return kUsage;
}

struct CheckOpts {
  std::string file;
  std::string mode;
  int cmfs = 0;
  bool stats = false;
  bool witness = false;
  bool no_extrapolate = false;
  long long ps = 0;
};

int run_check(const CheckOpts &o) {
  auto net = load(o.file, o.ps > 0 ? std::optional<long long>(o.ps) : std::nullopt);
  if (!net) return kUsage;
  Mode mode = net->env.empty() ? Mode::Classic : Mode::Env;
  if (o.mode == "classic") mode = Mode::Classic;
  if (o.mode == "env") mode = Mode::Env;
  Verdict v;
  try {
    CheckInstance inst = lang::to_check_instance(*net, mode);
    inst.cmfs = o.cmfs;
    inst.extrapolate = !o.no_extrapolate;
    v = check_simulation(inst);
  } catch (const model_error &e) {
    std::cerr << o.file << ": " << e.what() << "\n";
    return kUsage;
  }
  std::cout << "RESULT: " << to_string(v.outcome) << "\n";
  if (!v.reason.empty()) std::cout << "reason=" << v.reason << "\n";
  if (o.witness && v.witness) std::cout << v.witness->dump();
  if (o.stats) std::cout << "mode=" << to_string(mode) << " " << v.stats.str() << "\n";
  return exit_code(v.outcome);
}

struct GenOpts {
  std::string family;
  int m = 0;
  std::string variant = "correct";
  std::string topology = "linear";
  std::string service = "all";
  std::string requirement = "strong";
  std::string out;
};

int run_gen(const GenOpts &o) {
  using namespace tsim::bench;
  Variant v = o.variant == "mutated" ? Variant::Mutated : Variant::Correct;
  std::string text;
  try {
    if (o.family == "fischer") {
      text = gen_fischer(o.m, v);
    } else if (o.family == "csma") {
      text = gen_csma(o.m, v);
    } else if (o.family == "prodcons") {
      text = gen_prodcons(o.m, v);
    } else {
      Topology t = o.topology == "tree" ? Topology::Tree
                   : o.topology == "irregular" ? Topology::Irregular
                                               : Topology::Linear;
      text = gen_network(t, o.m, o.service == "one" ? Service::One : Service::All,
                         o.requirement == "weak" ? Requirement::Weak : Requirement::Strong);
    }
  } catch (const std::invalid_argument &e) {
    std::cerr << "gen: " << e.what() << "\n";
    return kUsage;
  }
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(o.out);
  if (!(out << text)) {
    std::cerr << o.out << ": cannot write file\n";
    return kUsage;
  }
  return 0;
}

// Plain simulation (fairness dropped) by the symbolic engine and by explicit regions.
int run_oracle(const std::string &file, int cmfs) {
  auto net = load(file, std::nullopt);
  if (!net) return kUsage;
  if (!net->env.empty() || net->model.size() != 1 || net->spec.size() != 1) {
    std::cerr << file << ": the oracle handles a single model/spec pair without environment\n";
    return kUsage;
  }
  const Proc &m = net->procs.at(net->model[0]);
  const Proc &s = net->procs.at(net->spec[0]);
  CheckInstance inst;
  inst.model_side = {m};
  inst.spec_side = {s};
  inst.tag_map[s.tag] = m.tag;
  inst.cmfs = cmfs;
  Outcome symbolic;
  PlainSimResult explicit_result;
  try {
    symbolic = check_simulation(inst).outcome;
    explicit_result = solve_plain_simulation(m.ta, s.ta, cmfs);
  } catch (const model_error &e) {
    std::cerr << file << ": " << e.what() << "\n";
    return kUsage;
  }
  bool sym = symbolic == Outcome::Simulates;
  bool agree = sym == explicit_result.simulates;
  std::cout << "RESULT: " << (agree ? "AGREE" : "DISAGREE") << "\n"
            << "symbolic=" << to_string(symbolic)
            << " oracle=" << (explicit_result.simulates ? "SIMULATES" : "NOT-SIMULATES")
            << " pair_states=" << explicit_result.pair_states << " iterations=" << explicit_result.iterations << "\n";
  return agree ? 0 : 1;
}

int run_dump(const std::string &file, long long ps) {
  auto net = load(file, ps > 0 ? std::optional<long long>(ps) : std::nullopt);
  if (!net) return kUsage;
  std::cout << lang::to_json(*net) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Fair simulation checker for timed automata networks"};
  app.require_subcommand(1);

  CheckOpts check;
  auto *c = app.add_subcommand("check", "Decide whether S simulates the model");
  c->add_option("file", check.file, "Input file")->required();
  c->add_option("--mode", check.mode, "classic or env (env by default when an environment exists)")
      ->check(CLI::IsMember({"classic", "env"}));
  c->add_option("--cmfs", check.cmfs, "Deadline constant, 0 for the largest clock constant")
      ->check(CLI::NonNegativeNumber);
  c->add_option("--ps", check.ps, "Override #PS")->check(CLI::PositiveNumber);
  c->add_flag("--stats", check.stats, "Print statistics");
  c->add_flag("--dump-witness", check.witness, "Print the refuting or winning state-pairs");
  c->add_flag("--no-extrapolate", check.no_extrapolate, "Disable zone extrapolation");

  GenOpts gen;
  auto *g = app.add_subcommand("gen", "Generate a benchmark instance");
  g->add_option("family", gen.family, "fischer, csma, prodcons or network")
      ->required()
      ->check(CLI::IsMember({"fischer", "csma", "prodcons", "network"}));
  g->add_option("--m", gen.m, "Size parameter")->required();
  g->add_option("--variant", gen.variant, "correct or mutated")->check(CLI::IsMember({"correct", "mutated"}));
  g->add_option("--topology", gen.topology, "Network topology")
      ->check(CLI::IsMember({"linear", "tree", "irregular"}));
  g->add_option("--service", gen.service, "Network service mode")->check(CLI::IsMember({"all", "one"}));
  g->add_option("--requirement", gen.requirement, "Network requirement")
      ->check(CLI::IsMember({"strong", "weak"}));
  g->add_option("-o,--output", gen.out, "Output file, stdout when absent");

  std::string oracle_file;
  int oracle_cmfs = 0;
  auto *o = app.add_subcommand("oracle", "Cross-check plain simulation against explicit regions");
  o->add_option("file", oracle_file, "Input file")->required();
  o->add_option("--cmfs", oracle_cmfs, "Deadline constant")->check(CLI::NonNegativeNumber);

  std::string dump_file;
  long long dump_ps = 0;
  auto *d = app.add_subcommand("dump", "Print the expanded network as JSON");
  d->add_option("file", dump_file, "Input file")->required();
  d->add_option("--ps", dump_ps, "Override #PS")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  if (*c) return run_check(check);
  if (*g) return run_gen(gen);
  if (*o) return run_oracle(oracle_file, oracle_cmfs);
  return run_dump(dump_file, dump_ps);
}
