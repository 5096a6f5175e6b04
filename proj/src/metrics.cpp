#include "signbal/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "signbal/errors.hpp"
#include "signbal/lobpcg.hpp"
#include "signbal/spectral.hpp"

namespace signbal {

DominantEigenpair dominant_adjacency_eigenpair(const SignedGraph& g, std::uint64_t seed, double tol,
                                               std::optional<std::size_t> max_iter) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw ArgumentError("dominant_adjacency_eigenpair: empty graph");
  const double shift = static_cast<double>(g.max_degree());

  BlockOperator apply = [&g, shift](const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
    y.resize(x.rows(), x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      for (Vertex i = 0; i < g.num_vertices(); ++i) {
        double acc = shift * x(i, c);
        for (const auto& nb : g.neighbors(i)) acc -= nb.sign * x(nb.vertex, c);
        y(i, c) = acc;
      }
    }
  };

  LobpcgOptions lo;
  lo.tol = tol;
  lo.scale = std::max(1.0, 2.0 * shift);
  lo.max_iter = max_iter.value_or(default_max_iter(n));
  lo.seed = seed;
  auto r = lobpcg_smallest(n, apply, Eigen::VectorXd(), std::nullopt, lo);
  std::vector<double> v(r.vector.data(), r.vector.data() + r.vector.size());
  if (!r.converged) {
    throw ConvergenceError("dominant_adjacency_eigenpair: no convergence after " +
                               std::to_string(r.iterations) + " iterations",
                           shift - r.value, std::move(v), r.residual, r.iterations);
  }
  return {shift - r.value, std::move(v), r.residual, r.iterations};
}

std::vector<std::int8_t> sign_pattern(std::span<const double> v) {
  std::vector<std::int8_t> x(v.size());
  std::transform(v.begin(), v.end(), x.begin(), [](double e) -> std::int8_t { return e < 0 ? -1 : 1; });
  return x;
}

double edge_agreement_for(const SignedGraph& g, std::span<const std::int8_t> x) {
  if (g.num_edges() == 0) throw ArgumentError("edge_agreement: graph has no edges");
  if (x.size() != g.num_vertices()) throw ArgumentError("edge_agreement: pattern size mismatch");
  long long agree = 0;
  for (const auto& e : g.edges()) agree += e.sign * x[e.u] * x[e.v];
  // x^T A x counts every edge twice, as does ||A||_F^2 = 2m.
  return static_cast<double>(2 * agree) / static_cast<double>(2 * g.num_edges());
}

double edge_agreement_ratio(const SignedGraph& g, std::uint64_t seed) {
  if (g.num_edges() == 0) throw ArgumentError("edge_agreement_ratio: graph has no edges");
  const auto dom = dominant_adjacency_eigenpair(g, seed);
  return edge_agreement_for(g, sign_pattern(dom.v));
}

double average_degree(const SignedGraph& g) {
  if (g.num_vertices() == 0) throw ArgumentError("average_degree: empty graph");
  return 2.0 * static_cast<double>(g.num_edges()) / static_cast<double>(g.num_vertices());
}

GraphMetrics summarize(const SignedGraph& g, const Partition* partition, std::uint64_t seed) {
  GraphMetrics out;
  out.n = g.num_vertices();
  out.m = g.num_edges();
  out.m_pos = g.num_positive_edges();
  out.m_neg = g.num_negative_edges();
  if (out.n > 0) out.avg_degree = average_degree(g);
  if (out.m > 0) out.rho_neg = static_cast<double>(out.m_neg) / static_cast<double>(out.m);
  if (out.n > 1) {
    out.density = 2.0 * static_cast<double>(out.m) /
                  (static_cast<double>(out.n) * static_cast<double>(out.n - 1));
  }
  std::vector<std::int8_t> x;
  if (out.m > 0) {
    x = sign_pattern(dominant_adjacency_eigenpair(g, seed).v);
    out.edge_agreement = edge_agreement_for(g, x);
  }
  if (partition) {
    out.frustration_edges = count_frustrated(g, *partition);
  } else if (!x.empty()) {
    out.frustration_edges = count_frustrated(g, Partition{std::move(x)});
  }
  return out;
}

}  // namespace signbal
