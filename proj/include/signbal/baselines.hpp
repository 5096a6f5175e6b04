#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "signbal/graph.hpp"

namespace signbal {

// One threshold of the eigenvector sweep: vertices with |v_i| >= tau.
struct TauPoint {
  double tau = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
  bool balanced = false;
};

struct BaselineResult {
  SignedGraph subgraph;
  Partition partition;           // over subgraph's vertices
  std::vector<Vertex> vertices;  // indices of the input graph, ascending
  std::map<std::string, double> meta;
  std::vector<TauPoint> sweep;            // eigen only
  std::vector<Vertex> insertion_order;    // grasp only
};

// Thresholds the dominant adjacency eigenvector at every tau in {|v_i|} and
// keeps the largest balanced candidate. Requires a connected graph.
BaselineResult eigen_baseline(const SignedGraph& g, std::uint64_t seed);

// Random-order greedy insertion: a vertex is accepted when its edges into the
// accepted set all force the same side.
BaselineResult grasp_construct(const SignedGraph& g, std::uint64_t seed);

// Random spanning tree, switching that makes the tree positive, then a
// greedy minimum-degree independent set of the remaining negative edges.
// Requires a connected graph.
BaselineResult ggmz(const SignedGraph& g, std::uint64_t seed);

inline constexpr std::size_t kBruteForceGuard = 22;

struct MbsResult {
  std::size_t size = 0;
  std::vector<Vertex> witness;  // ascending
  Partition partition;          // over the witness, in ascending order
};

// Exact maximum balanced induced subgraph by enumeration in decreasing
// cardinality. Throws GuardError above kBruteForceGuard vertices.
MbsResult brute_force_mbs(const SignedGraph& g);

}  // namespace signbal
