// Benchmark families emitted as input-language text.
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tsim::bench {

enum class Variant { Correct, Mutated };

/// Fischer mutual exclusion: lock process 1, m-2 environment processes, model, spec. m >= 2.
std::string gen_fischer(int m, Variant v);
/// CSMA/CD: bus 1, m-1 environment senders, model sender, spec. m >= 1.
std::string gen_csma(int m, Variant v);
/// Producer/consumer: buffer 1, producer 2, m-1 environment consumers, model consumer, spec. m >= 1.
std::string gen_prodcons(int m, Variant v);

enum class Topology { Linear, Tree, Irregular };
enum class Service { All, One };
enum class Requirement { Strong, Weak };

const char *to_string(Topology t);
const char *to_string(Service s);
const char *to_string(Requirement r);

/// prime(i % 8) with the table 2,3,5,7,11,13,17,19.
int prime_mod8(int i);
/// Service channel h -> k; n is the model index.
bool serve(Topology t, int h, int k, int n);
/// All channels over [2, n].
std::vector<std::pair<int, int>> serve_pairs(Topology t, int n);

/// Dispatcher 1, workers 2..m+1, model m+2, spec m+3. m >= 1.
std::string gen_network(Topology t, int m, Service s, Requirement r);

}  // namespace tsim::bench
