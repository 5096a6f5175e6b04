#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "signbal/graph.hpp"

namespace signbal::testing {

// Self-contained helpers; they use std:: random engines and dense Eigen so
// they share no code path with the library under test.

inline SignedGraph make_graph(std::size_t n, std::initializer_list<SignedEdge> edges) {
  std::vector<SignedEdge> e(edges);
  return SignedGraph::from_edges(n, e);
}

// 0-1, 0-2, 1-2 all negative.
inline SignedGraph neg_triangle() { return make_graph(3, {{0, 1, -1}, {0, 2, -1}, {1, 2, -1}}); }

// K4 with edge 2-3 positive, the other five negative.
inline SignedGraph figure2_left() {
  return make_graph(4, {{0, 1, -1}, {0, 2, -1}, {0, 3, -1}, {1, 2, -1}, {1, 3, -1}, {2, 3, 1}});
}

inline SignedGraph random_graph(std::size_t n, double density, double rho_neg, std::uint64_t seed) {
  std::mt19937 rng(static_cast<std::uint32_t>(seed * 2654435761u + 17));
  std::bernoulli_distribution edge(density), neg(rho_neg);
  std::vector<SignedEdge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (edge(rng)) edges.push_back({u, v, static_cast<std::int8_t>(neg(rng) ? -1 : 1)});
    }
  }
  return SignedGraph::from_edges(n, edges);
}

// Random spanning tree plus extra edges, signs forced by random sides.
inline SignedGraph random_balanced(std::size_t n, double extra_density, std::uint64_t seed,
                                   std::vector<std::int8_t>* sides = nullptr) {
  std::mt19937 rng(static_cast<std::uint32_t>(seed * 40503u + 3));
  std::vector<std::int8_t> s(n);
  for (auto& x : s) x = (rng() & 1) ? 1 : -1;
  std::vector<std::vector<std::uint8_t>> has(n, std::vector<std::uint8_t>(n, 0));
  std::vector<SignedEdge> edges;
  auto add = [&](Vertex u, Vertex v) {
    if (u > v) std::swap(u, v);
    if (u == v || has[u][v]) return;
    has[u][v] = 1;
    edges.push_back({u, v, static_cast<std::int8_t>(s[u] * s[v])});
  };
  for (Vertex v = 1; v < n; ++v) add(v, static_cast<Vertex>(rng() % v));
  std::bernoulli_distribution extra(extra_density);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (extra(rng)) add(u, v);
    }
  }
  if (sides) *sides = s;
  return SignedGraph::from_edges(n, edges);
}

// Sparse balanced graph for larger n: tree plus `extra` random edges.
inline SignedGraph random_balanced_sparse(std::size_t n, std::size_t extra, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::int8_t> s(n);
  for (auto& x : s) x = (rng() & 1) ? 1 : -1;
  std::vector<SignedEdge> edges;
  std::vector<std::uint64_t> keys;
  auto add = [&](Vertex u, Vertex v) {
    if (u > v) std::swap(u, v);
    if (u == v) return;
    keys.push_back(std::uint64_t{u} << 32 | v);
    edges.push_back({u, v, static_cast<std::int8_t>(s[u] * s[v])});
  };
  for (Vertex v = 1; v < n; ++v) add(v, static_cast<Vertex>(rng() % v));
  for (std::size_t i = 0; i < extra; ++i) add(static_cast<Vertex>(rng() % n), static_cast<Vertex>(rng() % n));
  // Drop repeated pairs, keeping the first occurrence.
  std::vector<std::size_t> idx(edges.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<SignedEdge> unique;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i == 0 || keys[idx[i]] != keys[idx[i - 1]]) unique.push_back(edges[idx[i]]);
  }
  return SignedGraph::from_edges(n, unique);
}

inline Eigen::MatrixXd oracle_laplacian(const SignedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    l(e.u, e.u) += 1;
    l(e.v, e.v) += 1;
    l(e.u, e.v) -= e.sign;
    l(e.v, e.u) -= e.sign;
  }
  return l;
}

inline Eigen::VectorXd oracle_spectrum(const SignedGraph& g) {
  if (g.num_vertices() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle_laplacian(g), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double oracle_lambda1(const SignedGraph& g) {
  if (g.num_vertices() == 0) return 0.0;
  return oracle_spectrum(g)[0];
}

inline double oracle_lambda_max(const SignedGraph& g) {
  if (g.num_vertices() == 0) return 0.0;
  const auto s = oracle_spectrum(g);
  return s[s.size() - 1];
}

// Largest per-component smallest eigenvalue; 0 iff every component is
// balanced.
inline double oracle_worst_component_lambda1(const SignedGraph& g) {
  const auto comps = connected_components(g);
  double worst = 0.0;
  for (std::uint32_t c = 0; c < comps.count(); ++c) {
    worst = std::max(worst, oracle_lambda1(induced_subgraph(g, comps.members(c))));
  }
  return worst;
}

// Every covered edge agrees with the sides.
inline bool witnesses(const SignedGraph& g, const Partition& p) {
  if (p.side.size() != g.num_vertices()) return false;
  for (const auto& e : g.edges()) {
    if (p.side[e.u] == 0 || p.side[e.v] == 0) return false;
    if (p.side[e.u] * p.side[e.v] != e.sign) return false;
  }
  return true;
}

// Balance by cycle-free reasoning: try all 2^n side assignments (n <= 16).
inline bool brute_balanced(const SignedGraph& g) {
  const std::size_t n = g.num_vertices();
  const auto edges = g.edges();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (const auto& e : edges) {
      const int su = (mask >> e.u & 1) ? -1 : 1;
      const int sv = (mask >> e.v & 1) ? -1 : 1;
      if (su * sv != e.sign) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace signbal::testing
