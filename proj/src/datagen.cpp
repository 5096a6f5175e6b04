#include "signbal/datagen.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "signbal/errors.hpp"
#include "signbal/rng.hpp"

namespace signbal {

SignedGraph barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1 || m >= n) throw ArgumentError("barabasi_albert: need 1 <= m < n");
  Rng rng(seed);
  std::vector<SignedEdge> edges;
  edges.reserve(m * (n - m));
  // Each vertex appears once per incident edge.
  std::vector<Vertex> repeated;
  repeated.reserve(2 * m * (n - m));
  std::vector<Vertex> targets(m);
  std::iota(targets.begin(), targets.end(), Vertex{0});
  std::unordered_set<Vertex> picked;

  for (std::size_t source = m; source < n; ++source) {
    const auto s = static_cast<Vertex>(source);
    for (Vertex t : targets) {
      edges.push_back({std::min(s, t), std::max(s, t), 1});
      repeated.push_back(t);
      repeated.push_back(s);
    }
    targets.clear();
    picked.clear();
    while (targets.size() < m) {
      const Vertex t = repeated[uniform_below(rng, repeated.size())];
      if (picked.insert(t).second) targets.push_back(t);
    }
  }
  return SignedGraph::from_edges(n, edges);
}

PlantResult plant_balanced(const SignedGraph& g, const PlantSpec& spec) {
  const std::size_t n = g.num_vertices();
  if (spec.planted_size > n) throw ArgumentError("plant_balanced: planted size exceeds vertex count");
  if (!(spec.sign_flip_prob >= 0 && spec.sign_flip_prob <= 1)) {
    throw ArgumentError("plant_balanced: sign flip probability must lie in [0, 1]");
  }
  Rng rng(spec.seed);

  std::vector<Vertex> pool(n);
  std::iota(pool.begin(), pool.end(), Vertex{0});
  for (std::size_t i = 0; i < spec.planted_size; ++i) {
    std::swap(pool[i], pool[i + uniform_below(rng, n - i)]);
  }
  std::vector<std::int8_t> side(n, 0);
  for (std::size_t i = 0; i < spec.planted_size; ++i) side[pool[i]] = uniform_below(rng, 2) ? 1 : -1;

  auto edges = g.edges();
  for (auto& e : edges) {
    if (side[e.u] != 0 && side[e.v] != 0) {
      e.sign = static_cast<std::int8_t>(side[e.u] * side[e.v]);
    } else {
      e.sign = uniform_unit(rng) < spec.sign_flip_prob ? -1 : 1;
    }
  }

  std::vector<std::string> labels(n);
  for (Vertex v = 0; v < n; ++v) labels[v] = g.label(v);

  PlantResult out;
  out.graph = SignedGraph::from_edges(n, edges, labels);
  for (Vertex v = 0; v < n; ++v) {
    if (side[v] != 0) {
      out.planted.push_back(v);
      out.partition.side.push_back(side[v]);
    }
  }
  return out;
}

}  // namespace signbal
