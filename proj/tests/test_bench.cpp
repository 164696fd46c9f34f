#include <doctest.h>

#include "tsim/bench.hpp"
#include "tsim/lang.hpp"

using namespace tsim;
using namespace tsim::bench;

namespace {

using Pairs = std::vector<std::pair<int, int>>;

lang::Network expand(const std::string &text) {
  auto r = lang::parse(text);
  REQUIRE(r.file);
  auto e = lang::expand(*r.file);
  REQUIRE(e.net);
  return *e.net;
}

std::string guards(const Proc &p) {
  std::string out;
  for (const auto &t : p.ta.transitions) out += to_string(t.guard) + ";";
  return out;
}

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("service channels per topology") {
    CHECK(serve_pairs(Topology::Linear, 5) == Pairs{{2, 3}, {3, 4}, {4, 5}});
    CHECK(serve_pairs(Topology::Tree, 5) == Pairs{{2, 4}, {2, 5}});
    CHECK(serve_pairs(Topology::Irregular, 5) == Pairs{{2, 4}, {3, 3}, {4, 2}, {5, 2}});
    CHECK(serve_pairs(Topology::Irregular, 6).back() == std::make_pair(6, 6));
    CHECK_FALSE(serve(Topology::Linear, 1, 2, 5));
    CHECK(prime_mod8(9) == 3);
    CHECK(prime_mod8(-1) == 19);
  }

  TEST_CASE("families reject sizes below their minimum") {
    CHECK_THROWS_AS(gen_fischer(1, Variant::Correct), std::invalid_argument);
    CHECK_THROWS_AS(gen_csma(0, Variant::Correct), std::invalid_argument);
    CHECK_THROWS_AS(gen_prodcons(0, Variant::Correct), std::invalid_argument);
    CHECK_THROWS_AS(gen_network(Topology::Tree, 0, Service::All, Requirement::Weak), std::invalid_argument);
  }

  TEST_CASE("process roles") {
    auto f = expand(gen_fischer(3, Variant::Correct));
    CHECK(f.ps == 4);
    CHECK(f.model == std::vector<int>{3});
    CHECK(f.spec == std::vector<int>{4});
    CHECK(f.env == std::vector<int>{1, 2});
    auto c = expand(gen_csma(2, Variant::Correct));
    CHECK(c.env == std::vector<int>{1, 2});
    auto p = expand(gen_prodcons(3, Variant::Correct));
    CHECK(p.env == std::vector<int>{1, 2, 3, 4});
    auto n = expand(gen_network(Topology::Linear, 3, Service::All, Requirement::Strong));
    CHECK(n.model == std::vector<int>{5});
    CHECK(n.spec == std::vector<int>{6});
    CHECK(n.env_fair.strong.size() == 3);
    CHECK(n.model_fair.strong.size() == 1);
    CHECK(n.spec_fair.strong.size() == 1);
    auto w = expand(gen_network(Topology::Linear, 3, Service::All, Requirement::Weak));
    CHECK(w.spec_fair.weak.size() == 1);
  }

  TEST_CASE("mutation touches only S") {
    for (auto gen : {gen_fischer, gen_csma, gen_prodcons}) {
      auto ok = expand(gen(2, Variant::Correct));
      auto bad = expand(gen(2, Variant::Mutated));
      for (const auto &[k, p] : ok.procs) {
        CAPTURE(k);
        const Proc &q = bad.procs.at(k);
        bool same = guards(p) == guards(q) && to_string(p.ta.locations.back().lambda) ==
                                                  to_string(q.ta.locations.back().lambda);
        bool inv_same = true;
        for (size_t i = 0; i < p.ta.locations.size(); ++i)
          inv_same &= to_string(p.ta.locations[i].lambda) == to_string(q.ta.locations[i].lambda);
        CHECK((same && inv_same) == (k != ok.spec[0]));
      }
    }
  }

  TEST_CASE("network workers never read the model and S mirrors it") {
    for (auto t : {Topology::Linear, Topology::Tree, Topology::Irregular})
      for (auto s : {Service::All, Service::One}) {
        auto net = expand(gen_network(t, 3, s, Requirement::Strong));
        int model = net.model[0], spec = net.spec[0];
        const std::string mark = "@" + std::to_string(model);
        for (int k : net.env) CHECK(guards(net.procs.at(k)).find(mark) == std::string::npos);
        std::string g = guards(net.procs.at(spec));
        std::string expected = guards(net.procs.at(model));
        // S's own symbols carry its index; rename them to compare.
        auto rename = [](std::string text, const std::string &from, const std::string &to) {
          for (size_t at = text.find(from); at != std::string::npos; at = text.find(from, at + to.size()))
            text.replace(at, from.size(), to);
          return text;
        };
        CHECK(rename(g, "@" + std::to_string(spec), mark) == expected);
      }
  }

  TEST_CASE("generation is deterministic") {
    CHECK(gen_network(Topology::Irregular, 3, Service::One, Requirement::Weak) ==
          gen_network(Topology::Irregular, 3, Service::One, Requirement::Weak));
    CHECK(gen_fischer(4, Variant::Mutated) == gen_fischer(4, Variant::Mutated));
  }
}
