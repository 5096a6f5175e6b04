#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace signbal {

// Dense 0-based vertex index within one SignedGraph.
using Vertex = std::uint32_t;

struct Neighbor {
  Vertex vertex;
  std::int8_t sign;  // +1 or -1

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct SignedEdge {
  Vertex u;
  Vertex v;
  std::int8_t sign;

  friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

// Immutable simple undirected signed graph in compressed adjacency form.
//
// Every vertex carries an origin id: its index in the label pool of the graph
// it was originally loaded from. Induced subgraphs share the pool, so labels
// and origins survive any number of restrictions without copying strings.
class SignedGraph {
 public:
  SignedGraph();

  // Builds from dense edges. Rejects self-loops, repeated pairs, signs other
  // than +-1 and out-of-range endpoints with ArgumentError. When `labels` is
  // empty the decimal index is used as label.
  static SignedGraph from_edges(std::size_t n, std::span<const SignedEdge> edges,
                                std::vector<std::string> labels = {});

  std::size_t num_vertices() const noexcept { return offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return m_pos_ + m_neg_; }
  std::size_t num_positive_edges() const noexcept { return m_pos_; }
  std::size_t num_negative_edges() const noexcept { return m_neg_; }

  // Sorted by neighbor index.
  std::span<const Neighbor> neighbors(Vertex v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_degree() const noexcept { return max_degree_; }

  // Sign of edge u-v, or 0 when absent. O(log deg(u)).
  int edge_sign(Vertex u, Vertex v) const noexcept;

  const std::string& label(Vertex v) const noexcept { return (*label_pool_)[origin_[v]]; }
  std::uint32_t origin(Vertex v) const noexcept { return origin_[v]; }
  std::span<const std::uint32_t> origins() const noexcept { return origin_; }
  const std::shared_ptr<const std::vector<std::string>>& label_pool() const noexcept {
    return label_pool_;
  }

  // Canonical edge list: u < v, ascending by (u, v).
  std::vector<SignedEdge> edges() const;

  // Same vertex order, labels and signed adjacency.
  friend bool operator==(const SignedGraph& a, const SignedGraph& b);

 private:
  friend SignedGraph induced_subgraph(const SignedGraph&, std::span<const Vertex>);
  friend SignedGraph switch_signs(const SignedGraph&, std::span<const Vertex>);

  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<std::uint32_t> origin_;
  std::shared_ptr<const std::vector<std::string>> label_pool_;
  std::size_t m_pos_ = 0;
  std::size_t m_neg_ = 0;
  std::size_t max_degree_ = 0;
};

// Two-sided coloring. side[v] is +1 (v1), -1 (v2) or 0 (not covered).
struct Partition {
  std::vector<std::int8_t> side;

  std::vector<Vertex> v1() const;
  std::vector<Vertex> v2() const;
  std::size_t covered() const;
};

// Edge whose sign contradicts the coloring forced by a spanning forest.
struct Conflict {
  Vertex u;
  Vertex v;
  std::int8_t sign;
};

using BalanceResult = std::variant<Partition, Conflict>;

struct ComponentLabeling {
  std::vector<std::uint32_t> component;  // per vertex
  std::vector<std::size_t> sizes;        // per component id
  // Index of the largest component, smallest id on ties. Meaningless when
  // there are no components.
  std::uint32_t largest = 0;

  std::size_t count() const noexcept { return sizes.size(); }
  std::vector<Vertex> members(std::uint32_t id) const;
};

// Vertices of `keep` (any order, no duplicates) in ascending order become
// 0..|keep|-1 of the result.
SignedGraph induced_subgraph(const SignedGraph& g, std::span<const Vertex> keep);

// Complement form: drop `remove` and everything incident to it.
SignedGraph remove_vertices(const SignedGraph& g, std::span<const Vertex> remove);

ComponentLabeling connected_components(const SignedGraph& g);

// Componentwise two-coloring; each component's smallest-index vertex gets +1.
BalanceResult check_balance(const SignedGraph& g);
bool is_balanced(const SignedGraph& g);

// Flip the sign of every edge with exactly one endpoint in `s`.
SignedGraph switch_signs(const SignedGraph& g, std::span<const Vertex> s);

// Number of edges that disagree with a partition covering both endpoints:
// positive edges across sides plus negative edges within a side.
std::size_t count_frustrated(const SignedGraph& g, const Partition& p);

}  // namespace signbal
