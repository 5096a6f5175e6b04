#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "signbal/graph.hpp"

namespace signbal {

struct DominantEigenpair {
  double value = 0.0;
  std::vector<double> v;  // unit norm
  double residual = 0.0;
  std::size_t iterations = 0;
};

// Largest algebraic eigenpair of the signed adjacency matrix, found as the
// smallest eigenpair of the shifted operator max_degree * I - A. Throws
// ConvergenceError when the iteration budget runs out.
DominantEigenpair dominant_adjacency_eigenpair(const SignedGraph& g, std::uint64_t seed,
                                               double tol = 1e-6,
                                               std::optional<std::size_t> max_iter = {});

// x = sign(v) with sign(0) = +1.
std::vector<std::int8_t> sign_pattern(std::span<const double> v);

// x^T A x / ||A||_F^2 for a given sign pattern, computed edgewise.
double edge_agreement_for(const SignedGraph& g, std::span<const std::int8_t> x);

// Edge agreement under the sign pattern of the dominant adjacency
// eigenvector. Requires at least one edge.
double edge_agreement_ratio(const SignedGraph& g, std::uint64_t seed = 0);

// 2m / n. Requires n >= 1.
double average_degree(const SignedGraph& g);

struct GraphMetrics {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t m_pos = 0;
  std::size_t m_neg = 0;
  double avg_degree = 0.0;
  double rho_neg = 0.0;  // m_neg / m
  double density = 0.0;  // 2m / (n (n - 1))
  std::optional<double> edge_agreement;
  // Disagreeing edges under the supplied partition, or under the
  // eigenvector-derived one when none is supplied.
  std::optional<std::size_t> frustration_edges;
};

GraphMetrics summarize(const SignedGraph& g, const Partition* partition = nullptr,
                       std::uint64_t seed = 0);

}  // namespace signbal
