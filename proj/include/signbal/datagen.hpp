#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "signbal/graph.hpp"

namespace signbal {

// Preferential attachment from m isolated seed vertices; every later vertex
// links to m distinct earlier ones. m * (n - m) edges, all positive.
SignedGraph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed);

struct PlantSpec {
  std::size_t planted_size = 0;
  std::uint64_t seed = 0;
  double sign_flip_prob = 0.5;  // chance of -1 on edges not inside the planted set
};

struct PlantResult {
  SignedGraph graph;
  std::vector<Vertex> planted;  // ascending
  Partition partition;          // over `planted`, in the same order
};

// Random subset with random sides; edges inside it follow the sides, all
// other edges get random signs. Topology and labels are kept.
PlantResult plant_balanced(const SignedGraph& g, const PlantSpec& spec);

}  // namespace signbal
