#include "signbal/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "signbal/errors.hpp"
#include "signbal/metrics.hpp"
#include "signbal/rng.hpp"

namespace signbal {

namespace {

// Union-find that also tracks each vertex's side relative to its root.
class ParityForest {
 public:
  explicit ParityForest(std::size_t n) : parent_(n), parity_(n, 0), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), Vertex{0});
  }

  std::pair<Vertex, std::int8_t> find(Vertex v) {
    std::int8_t p = 1;
    Vertex r = v;
    while (parent_[r] != r) {
      p = static_cast<std::int8_t>(p * (parity_[r] ? -1 : 1));
      r = parent_[r];
    }
    // Path compression, recomputing parities bottom-up.
    std::int8_t acc = p;
    while (parent_[v] != r) {
      const Vertex next = parent_[v];
      const std::int8_t own = parity_[v] ? -1 : 1;
      parent_[v] = r;
      parity_[v] = acc < 0;
      acc = static_cast<std::int8_t>(acc * own);
      v = next;
    }
    return {r, p};
  }

  // Requires side(u) * side(v) == sign. Returns false on contradiction.
  bool unite(Vertex u, Vertex v, int sign) {
    auto [ru, pu] = find(u);
    auto [rv, pv] = find(v);
    if (ru == rv) return pu * pv == sign;
    if (rank_[ru] < rank_[rv]) std::swap(ru, rv);
    parent_[rv] = ru;
    parity_[rv] = pu * pv * sign < 0;
    if (rank_[ru] == rank_[rv]) ++rank_[ru];
    return true;
  }

 private:
  std::vector<Vertex> parent_;
  std::vector<std::uint8_t> parity_;
  std::vector<std::uint8_t> rank_;
};

void require_connected(const SignedGraph& g, const char* what) {
  if (g.num_vertices() > 0 && connected_components(g).count() != 1) {
    throw ArgumentError(std::string(what) + ": graph must be connected");
  }
}

// Induced subgraph on `vertices` with the coloring from check_balance.
BaselineResult finish(const SignedGraph& g, std::vector<Vertex> vertices) {
  std::sort(vertices.begin(), vertices.end());
  BaselineResult out;
  out.subgraph = induced_subgraph(g, vertices);
  out.vertices = std::move(vertices);
  auto bal = check_balance(out.subgraph);
  if (!std::holds_alternative<Partition>(bal)) {
    throw Error("baseline produced an unbalanced subgraph");
  }
  out.partition = std::move(std::get<Partition>(bal));
  return out;
}

}  // namespace

BaselineResult eigen_baseline(const SignedGraph& g, std::uint64_t seed) {
  require_connected(g, "eigen_baseline");
  const std::size_t n = g.num_vertices();
  if (n == 0) return {};
  if (n == 1) return finish(g, {0});

  const auto dom = dominant_adjacency_eigenpair(g, seed);
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return std::abs(dom.v[a]) > std::abs(dom.v[b]); });

  ParityForest forest(n);
  std::vector<std::uint8_t> present(n, 0);
  std::vector<TauPoint> sweep;
  std::size_t edges = 0;
  bool balanced = true;
  std::size_t best_len = 0;
  double best_tau = 0.0;
  for (std::size_t i = 0; i < n;) {
    const double tau = std::abs(dom.v[order[i]]);
    std::size_t j = i;
    for (; j < n && std::abs(dom.v[order[j]]) == tau; ++j) {
      const Vertex u = order[j];
      present[u] = 1;
      for (const auto& nb : g.neighbors(u)) {
        if (!present[nb.vertex]) continue;
        ++edges;
        if (balanced && !forest.unite(u, nb.vertex, nb.sign)) balanced = false;
      }
    }
    sweep.push_back({tau, j, edges, balanced});
    // Later candidates are supersets, so the last balanced one is the largest.
    if (balanced && j >= 2) {
      best_len = j;
      best_tau = tau;
    }
    i = j;
  }

  BaselineResult out;
  if (best_len == 0) {
    out = finish(g, {order[0]});
    out.meta["tau"] = std::abs(dom.v[order[0]]);
  } else {
    out = finish(g, std::vector<Vertex>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_len)));
    out.meta["tau"] = best_tau;
  }
  out.meta["eigenvalue"] = dom.value;
  out.meta["eig_iterations"] = static_cast<double>(dom.iterations);
  out.sweep = std::move(sweep);
  return out;
}

BaselineResult grasp_construct(const SignedGraph& g, std::uint64_t seed) {
  const std::size_t n = g.num_vertices();
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  Rng rng(seed);
  shuffle(perm, rng);

  // Sides are tracked relative to each accepted component, so a vertex that
  // bridges two components can orient them freely.
  ParityForest forest(n);
  std::vector<std::uint8_t> accepted(n, 0);
  std::vector<Vertex> order;
  std::vector<std::pair<Vertex, std::int8_t>> forced;
  for (Vertex v : perm) {
    forced.clear();
    bool consistent = true;
    for (const auto& nb : g.neighbors(v)) {
      if (!accepted[nb.vertex]) continue;
      const auto [root, parity] = forest.find(nb.vertex);
      const auto side = static_cast<std::int8_t>(nb.sign * parity);
      for (const auto& [r, s] : forced) {
        if (r == root && s != side) consistent = false;
      }
      if (!consistent) break;
      forced.emplace_back(root, side);
    }
    if (!consistent) continue;
    for (const auto& nb : g.neighbors(v)) {
      if (accepted[nb.vertex]) forest.unite(v, nb.vertex, nb.sign);
    }
    accepted[v] = 1;
    order.push_back(v);
  }

  auto out = finish(g, order);
  out.insertion_order = std::move(order);
  return out;
}

BaselineResult ggmz(const SignedGraph& g, std::uint64_t seed) {
  require_connected(g, "ggmz");
  const std::size_t n = g.num_vertices();
  if (n == 0) return {};

  auto edges = g.edges();
  Rng rng(seed);
  shuffle(edges, rng);
  ParityForest forest(n);
  std::vector<std::vector<Neighbor>> tree(n);
  std::size_t tree_edges = 0;
  for (const auto& e : edges) {
    if (forest.find(e.u).first == forest.find(e.v).first) continue;
    forest.unite(e.u, e.v, 1);
    tree[e.u].push_back({e.v, e.sign});
    tree[e.v].push_back({e.u, e.sign});
    ++tree_edges;
  }

  // Switching signs s with s_u * s_v == sign on every tree edge.
  std::vector<std::int8_t> s(n, 0);
  s[0] = 1;
  std::vector<Vertex> stack{0};
  while (!stack.empty()) {
    const Vertex u = stack.back();
    stack.pop_back();
    for (const auto& nb : tree[u]) {
      if (s[nb.vertex] != 0) continue;
      s[nb.vertex] = static_cast<std::int8_t>(nb.sign * s[u]);
      stack.push_back(nb.vertex);
    }
  }
  for (Vertex u = 0; u < n; ++u) {
    for (const auto& nb : tree[u]) {
      if (nb.sign * s[u] * s[nb.vertex] != 1) throw Error("ggmz: switching left a negative tree edge");
    }
  }

  std::vector<std::vector<Vertex>> residual(n);
  std::size_t residual_edges = 0;
  for (const auto& e : g.edges()) {
    if (e.sign * s[e.u] * s[e.v] < 0) {
      residual[e.u].push_back(e.v);
      residual[e.v].push_back(e.u);
      ++residual_edges;
    }
  }
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return residual[a].size() < residual[b].size(); });
  std::vector<std::uint8_t> blocked(n, 0);
  std::vector<Vertex> chosen;
  for (Vertex v : order) {
    if (blocked[v]) continue;
    chosen.push_back(v);
    for (Vertex w : residual[v]) blocked[w] = 1;
  }

  auto out = finish(g, chosen);
  out.meta["tree_edges"] = static_cast<double>(tree_edges);
  out.meta["switched"] = static_cast<double>(std::count(s.begin(), s.end(), std::int8_t{-1}));
  out.meta["residual_edges"] = static_cast<double>(residual_edges);
  return out;
}

MbsResult brute_force_mbs(const SignedGraph& g) {
  const std::size_t n = g.num_vertices();
  if (n > kBruteForceGuard) {
    throw GuardError("brute_force_mbs: " + std::to_string(n) + " vertices exceeds guard of " +
                     std::to_string(kBruteForceGuard));
  }
  MbsResult out;
  if (n == 0) return out;

  std::vector<std::uint32_t> pos(n, 0), neg(n, 0);
  for (const auto& e : g.edges()) {
    (e.sign > 0 ? pos : neg)[e.u] |= 1u << e.v;
    (e.sign > 0 ? pos : neg)[e.v] |= 1u << e.u;
  }

  // Two-colors the subgraph induced by mask; plus holds the +1 side.
  auto balanced = [&](std::uint32_t mask, std::uint32_t& plus) {
    plus = 0;
    std::uint32_t minus = 0;
    std::uint32_t todo = mask;
    while (todo) {
      const std::uint32_t root = todo & (~todo + 1);
      plus |= root;
      std::uint32_t frontier = root;
      while (frontier) {
        const int u = __builtin_ctz(frontier);
        frontier &= frontier - 1;
        const std::uint32_t bit = 1u << u;
        const bool on_plus = (plus & bit) != 0;
        const std::uint32_t same = pos[u] & mask;
        const std::uint32_t other = neg[u] & mask;
        std::uint32_t& mine = on_plus ? plus : minus;
        std::uint32_t& theirs = on_plus ? minus : plus;
        if ((same & theirs) || (other & mine)) return false;
        frontier |= (same & ~mine) | (other & ~theirs);
        mine |= same;
        theirs |= other;
      }
      todo &= ~(plus | minus);
    }
    return true;
  };

  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::size_t k = n; k >= 1; --k) {
    // Gosper's hack over k-subsets, ascending as integers.
    std::uint64_t mask = (std::uint64_t{1} << k) - 1;
    while (mask < limit) {
      std::uint32_t plus = 0;
      if (balanced(static_cast<std::uint32_t>(mask), plus)) {
        out.size = k;
        for (Vertex v = 0; v < n; ++v) {
          if (mask >> v & 1) {
            out.witness.push_back(v);
            out.partition.side.push_back(plus >> v & 1 ? 1 : -1);
          }
        }
        return out;
      }
      const std::uint64_t c = mask & (~mask + 1);
      const std::uint64_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
  }
  return out;
}

}  // namespace signbal
