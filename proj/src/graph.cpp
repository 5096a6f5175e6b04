#include "signbal/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "signbal/errors.hpp"

namespace signbal {

namespace {

std::shared_ptr<const std::vector<std::string>> decimal_labels(std::size_t n) {
  auto labels = std::make_shared<std::vector<std::string>>();
  labels->reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels->push_back(std::to_string(i));
  return labels;
}

// Marks `subset` in an n-sized mask, rejecting out-of-range and repeated
// vertices.
std::vector<std::uint8_t> membership_mask(std::size_t n, std::span<const Vertex> subset,
                                          const char* what) {
  std::vector<std::uint8_t> mask(n, 0);
  for (Vertex v : subset) {
    if (v >= n) {
      throw ArgumentError(std::string(what) + ": vertex " + std::to_string(v) +
                          " out of range (n=" + std::to_string(n) + ")");
    }
    if (mask[v]) {
      throw ArgumentError(std::string(what) + ": vertex " + std::to_string(v) + " repeated");
    }
    mask[v] = 1;
  }
  return mask;
}

}  // namespace

SignedGraph::SignedGraph() : offsets_(1, 0), label_pool_(decimal_labels(0)) {}

SignedGraph SignedGraph::from_edges(std::size_t n, std::span<const SignedEdge> edges,
                                    std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != n) {
    throw ArgumentError("from_edges: " + std::to_string(labels.size()) + " labels for " +
                        std::to_string(n) + " vertices");
  }
  SignedGraph g;
  g.offsets_.assign(n + 1, 0);
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw ArgumentError("from_edges: endpoint out of range");
    if (e.u == e.v) throw ArgumentError("from_edges: self-loop at " + std::to_string(e.u));
    if (e.sign != 1 && e.sign != -1) throw ArgumentError("from_edges: sign must be +1 or -1");
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
    (e.sign > 0 ? g.m_pos_ : g.m_neg_) += 1;
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.adjacency_.resize(g.offsets_.back());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& e : edges) {
    g.adjacency_[cursor[e.u]++] = {e.v, e.sign};
    g.adjacency_[cursor[e.v]++] = {e.u, e.sign};
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
    auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
    std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
    auto dup = std::adjacent_find(first, last, [](const Neighbor& a, const Neighbor& b) {
      return a.vertex == b.vertex;
    });
    if (dup != last) {
      throw ArgumentError("from_edges: repeated pair " + std::to_string(v) + "-" +
                          std::to_string(dup->vertex));
    }
    g.max_degree_ = std::max(g.max_degree_, g.offsets_[v + 1] - g.offsets_[v]);
  }
  g.origin_.resize(n);
  std::iota(g.origin_.begin(), g.origin_.end(), 0U);
  if (labels.empty()) {
    g.label_pool_ = decimal_labels(n);
  } else {
    g.label_pool_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
  }
  return g;
}

int SignedGraph::edge_sign(Vertex u, Vertex v) const noexcept {
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v,
                             [](const Neighbor& a, Vertex x) { return a.vertex < x; });
  return (it != nb.end() && it->vertex == v) ? it->sign : 0;
}

std::vector<SignedEdge> SignedGraph::edges() const {
  std::vector<SignedEdge> out;
  out.reserve(num_edges());
  for (Vertex u = 0; u < num_vertices(); ++u) {
    for (const auto& nb : neighbors(u)) {
      if (u < nb.vertex) out.push_back({u, nb.vertex, nb.sign});
    }
  }
  return out;
}

bool operator==(const SignedGraph& a, const SignedGraph& b) {
  if (a.num_vertices() != b.num_vertices() || a.offsets_ != b.offsets_ ||
      a.adjacency_ != b.adjacency_) {
    return false;
  }
  for (Vertex v = 0; v < a.num_vertices(); ++v) {
    if (a.label(v) != b.label(v)) return false;
  }
  return true;
}

std::vector<Vertex> Partition::v1() const {
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < side.size(); ++v) {
    if (side[v] > 0) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

std::vector<Vertex> Partition::v2() const {
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < side.size(); ++v) {
    if (side[v] < 0) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

std::size_t Partition::covered() const {
  return static_cast<std::size_t>(std::count_if(side.begin(), side.end(), [](auto s) { return s != 0; }));
}

std::vector<Vertex> ComponentLabeling::members(std::uint32_t id) const {
  std::vector<Vertex> out;
  if (id < sizes.size()) out.reserve(sizes[id]);
  for (std::size_t v = 0; v < component.size(); ++v) {
    if (component[v] == id) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

SignedGraph induced_subgraph(const SignedGraph& g, std::span<const Vertex> keep) {
  const std::size_t n = g.num_vertices();
  auto mask = membership_mask(n, keep, "induced_subgraph");

  constexpr Vertex kAbsent = static_cast<Vertex>(-1);
  std::vector<Vertex> new_index(n, kAbsent);
  Vertex next = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (mask[v]) new_index[v] = next++;
  }

  SignedGraph sub;
  sub.label_pool_ = g.label_pool_;
  sub.offsets_.assign(std::size_t{next} + 1, 0);
  sub.origin_.resize(next);
  sub.adjacency_.reserve(std::min(g.adjacency_.size(), keep.size() * g.max_degree()));
  for (Vertex v = 0; v < n; ++v) {
    if (!mask[v]) continue;
    const Vertex nv = new_index[v];
    sub.origin_[nv] = g.origin_[v];
    for (const auto& nb : g.neighbors(v)) {
      const Vertex w = new_index[nb.vertex];
      if (w == kAbsent) continue;
      sub.adjacency_.push_back({w, nb.sign});
      if (nv < w) (nb.sign > 0 ? sub.m_pos_ : sub.m_neg_) += 1;
    }
    sub.offsets_[nv + 1] = sub.adjacency_.size();
    sub.max_degree_ = std::max(sub.max_degree_, sub.offsets_[nv + 1] - sub.offsets_[nv]);
  }
  return sub;
}

SignedGraph remove_vertices(const SignedGraph& g, std::span<const Vertex> remove) {
  auto mask = membership_mask(g.num_vertices(), remove, "remove_vertices");
  std::vector<Vertex> keep;
  keep.reserve(g.num_vertices() - remove.size());
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!mask[v]) keep.push_back(v);
  }
  return induced_subgraph(g, keep);
}

ComponentLabeling connected_components(const SignedGraph& g) {
  const std::size_t n = g.num_vertices();
  constexpr std::uint32_t kUnseen = static_cast<std::uint32_t>(-1);
  ComponentLabeling out;
  out.component.assign(n, kUnseen);
  std::vector<Vertex> stack;
  for (Vertex root = 0; root < n; ++root) {
    if (out.component[root] != kUnseen) continue;
    const auto id = static_cast<std::uint32_t>(out.sizes.size());
    std::size_t size = 0;
    out.component[root] = id;
    stack.push_back(root);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      ++size;
      for (const auto& nb : g.neighbors(v)) {
        if (out.component[nb.vertex] == kUnseen) {
          out.component[nb.vertex] = id;
          stack.push_back(nb.vertex);
        }
      }
    }
    out.sizes.push_back(size);
    if (size > out.sizes[out.largest]) out.largest = id;
  }
  return out;
}

BalanceResult check_balance(const SignedGraph& g) {
  const std::size_t n = g.num_vertices();
  Partition p;
  p.side.assign(n, 0);
  std::deque<Vertex> queue;
  for (Vertex root = 0; root < n; ++root) {
    if (p.side[root] != 0) continue;
    p.side[root] = 1;
    queue.push_back(root);
    while (!queue.empty()) {
      const Vertex u = queue.front();
      queue.pop_front();
      for (const auto& nb : g.neighbors(u)) {
        const auto forced = static_cast<std::int8_t>(nb.sign * p.side[u]);
        if (p.side[nb.vertex] == 0) {
          p.side[nb.vertex] = forced;
          queue.push_back(nb.vertex);
        } else if (p.side[nb.vertex] != forced) {
          return Conflict{u, nb.vertex, nb.sign};
        }
      }
    }
  }
  return p;
}

bool is_balanced(const SignedGraph& g) {
  return std::holds_alternative<Partition>(check_balance(g));
}

SignedGraph switch_signs(const SignedGraph& g, std::span<const Vertex> s) {
  auto mask = membership_mask(g.num_vertices(), s, "switch_signs");
  SignedGraph out = g;
  out.m_pos_ = 0;
  out.m_neg_ = 0;
  for (Vertex u = 0; u < out.num_vertices(); ++u) {
    for (std::size_t k = out.offsets_[u]; k < out.offsets_[u + 1]; ++k) {
      auto& nb = out.adjacency_[k];
      if (mask[u] != mask[nb.vertex]) nb.sign = static_cast<std::int8_t>(-nb.sign);
      if (u < nb.vertex) (nb.sign > 0 ? out.m_pos_ : out.m_neg_) += 1;
    }
  }
  return out;
}

std::size_t count_frustrated(const SignedGraph& g, const Partition& p) {
  if (p.side.size() != g.num_vertices()) {
    throw ArgumentError("count_frustrated: partition size does not match graph");
  }
  std::size_t bad = 0;
  for (Vertex u = 0; u < g.num_vertices(); ++u) {
    for (const auto& nb : g.neighbors(u)) {
      if (u >= nb.vertex || p.side[u] == 0 || p.side[nb.vertex] == 0) continue;
      if (nb.sign * p.side[u] * p.side[nb.vertex] < 0) ++bad;
    }
  }
  return bad;
}

}  // namespace signbal
