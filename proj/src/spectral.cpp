#include "signbal/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "signbal/errors.hpp"
#include "signbal/lobpcg.hpp"

namespace signbal {

namespace {

void check_estimate(const SignedGraph& g, const EigenEstimate& est, const char* what) {
  if (est.v.size() != g.num_vertices()) {
    throw ArgumentError(std::string(what) + ": eigenvector has " + std::to_string(est.v.size()) +
                        " entries for " + std::to_string(g.num_vertices()) + " vertices");
  }
}

// sum_{j in N(i)} v_j^2
double neighbor_mass(const SignedGraph& g, const std::vector<double>& v, Vertex i) {
  double s = 0.0;
  for (const auto& nb : g.neighbors(i)) s += v[nb.vertex] * v[nb.vertex];
  return s;
}

// Contribution of removing i to the numerator of the restricted Rayleigh
// quotient, excluding the leading lambda term.
double removal_term(const SignedGraph& g, const EigenEstimate& est, Vertex i) {
  const double w = est.v[i] * est.v[i];
  return w * static_cast<double>(g.degree(i)) - neighbor_mass(g, est.v, i) - 2.0 * est.lambda1 * w;
}

}  // namespace

std::size_t default_max_iter(std::size_t n) {
  return static_cast<std::size_t>(10.0 * std::sqrt(static_cast<double>(n))) + 200;
}

void laplacian_apply(const SignedGraph& g, std::span<const double> x, std::span<double> y) {
  const std::size_t n = g.num_vertices();
  if (x.size() != n || y.size() != n) {
    throw ArgumentError("laplacian_apply: expected vectors of length " + std::to_string(n));
  }
  for (Vertex i = 0; i < n; ++i) {
    double acc = static_cast<double>(g.degree(i)) * x[i];
    for (const auto& nb : g.neighbors(i)) acc -= nb.sign * x[nb.vertex];
    y[i] = acc;
  }
}

std::vector<double> laplacian_apply(const SignedGraph& g, std::span<const double> x) {
  std::vector<double> y(x.size());
  laplacian_apply(g, x, y);
  return y;
}

EigenEstimate smallest_eigenpair(const SignedGraph& g, const EigensolverOptions& options) {
  const std::size_t n = g.num_vertices();
  if (n < 2) throw ArgumentError("smallest_eigenpair: need at least 2 vertices");
  if (!(options.tol > 0)) throw ArgumentError("smallest_eigenpair: tol must be positive");

  BlockOperator apply = [&g](const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
    y.resize(x.rows(), x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      laplacian_apply(g, std::span<const double>(x.col(c).data(), static_cast<std::size_t>(x.rows())),
                      std::span<double>(y.col(c).data(), static_cast<std::size_t>(y.rows())));
    }
  };

  Eigen::VectorXd inverse_diagonal(static_cast<Eigen::Index>(n));
  for (Vertex i = 0; i < n; ++i) {
    inverse_diagonal[i] = 1.0 / std::max<double>(1.0, static_cast<double>(g.degree(i)));
  }

  std::optional<Eigen::VectorXd> initial;
  if (options.initial && options.initial->size() == n) {
    initial = Eigen::Map<const Eigen::VectorXd>(options.initial->data(), static_cast<Eigen::Index>(n));
  }

  LobpcgOptions lo;
  lo.tol = options.tol;
  lo.scale = std::max(1.0, 2.0 * static_cast<double>(g.max_degree()));
  lo.max_iter = options.max_iter.value_or(default_max_iter(n));
  lo.block_size = options.block_size;
  lo.seed = options.seed;

  auto result = lobpcg_smallest(n, apply, inverse_diagonal, initial, lo);
  std::vector<double> v(result.vector.data(), result.vector.data() + result.vector.size());
  if (!result.converged) {
    throw ConvergenceError("smallest_eigenpair: no convergence after " +
                               std::to_string(result.iterations) + " iterations (residual " +
                               std::to_string(result.residual) + ")",
                           result.value, std::move(v), result.residual, result.iterations);
  }
  return {std::max(0.0, result.value), std::move(v), result.residual, result.iterations};
}

BoundVector bound_vector(const SignedGraph& g, const EigenEstimate& est, double eta) {
  const std::size_t n = g.num_vertices();
  if (n <= 1) throw ArgumentError("bound_vector: need at least 2 vertices");
  check_estimate(g, est, "bound_vector");

  BoundVector out;
  out.r.assign(n, 0.0);
  out.excluded.assign(n, 0);
  const double lambda = est.lambda1;
  for (Vertex i = 0; i < n; ++i) {
    const double w = est.v[i] * est.v[i];
    if (w >= 1.0 - eta) {
      out.excluded[i] = 1;
      out.r[i] = std::numeric_limits<double>::infinity();
      continue;
    }
    const double numer = lambda * (1.0 - 2.0 * w) - neighbor_mass(g, est.v, i) +
                         w * static_cast<double>(g.degree(i));
    out.r[i] = numer / (1.0 - w);
  }
  return out;
}

double batch_bound(const SignedGraph& g, const EigenEstimate& est, std::span<const Vertex> batch,
                   double eta) {
  check_estimate(g, est, "batch_bound");
  if (batch.empty()) throw ArgumentError("batch_bound: empty batch");
  std::vector<std::uint8_t> in_batch(g.num_vertices(), 0);
  for (Vertex i : batch) {
    if (i >= g.num_vertices()) throw ArgumentError("batch_bound: vertex out of range");
    if (in_batch[i]) throw ArgumentError("batch_bound: vertex repeated");
    in_batch[i] = 1;
  }
  double numer = est.lambda1;
  double denom = 1.0;
  for (Vertex i : batch) {
    for (const auto& nb : g.neighbors(i)) {
      if (in_batch[nb.vertex]) {
        throw ArgumentError("batch_bound: vertices " + std::to_string(i) + " and " +
                            std::to_string(nb.vertex) + " are adjacent");
      }
    }
    numer += removal_term(g, est, i);
    denom -= est.v[i] * est.v[i];
  }
  if (denom <= eta) {
    throw DegenerateBatchError("batch_bound: remaining eigenvector mass " + std::to_string(denom) +
                               " is not above eta");
  }
  return numer / denom;
}

std::vector<Vertex> select_batch(const SignedGraph& g, const BoundVector& bounds,
                                 const EigenEstimate& est, std::size_t k_max,
                                 const BatchOptions& options) {
  const std::size_t n = g.num_vertices();
  if (k_max < 1) throw ArgumentError("select_batch: k_max must be at least 1");
  check_estimate(g, est, "select_batch");
  if (bounds.r.size() != n || bounds.excluded.size() != n) {
    throw ArgumentError("select_batch: bound vector does not match graph");
  }

  std::vector<Vertex> order;
  order.reserve(n);
  for (Vertex i = 0; i < n; ++i) {
    if (!bounds.is_excluded(i)) order.push_back(i);
  }
  if (order.empty()) throw SelectionError("select_batch: every vertex is excluded");
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    return bounds.r[a] != bounds.r[b] ? bounds.r[a] < bounds.r[b] : a < b;
  });

  std::vector<std::uint8_t> blocked(n, 0);
  std::vector<Vertex> chosen;
  double numer = est.lambda1;
  double denom = 1.0;
  double current = 0.0;
  for (Vertex i : order) {
    if (chosen.size() == k_max) break;
    if (blocked[i]) continue;
    const double w = est.v[i] * est.v[i];
    const double next_numer = numer + removal_term(g, est, i);
    const double next_denom = denom - w;
    if (!chosen.empty()) {
      if (next_denom <= options.eta) break;
      const double next = next_numer / next_denom;
      if (next > current - options.rel_improve * std::abs(current)) break;
    }
    chosen.push_back(i);
    numer = next_numer;
    denom = next_denom;
    current = numer / denom;
    blocked[i] = 1;
    for (const auto& nb : g.neighbors(i)) blocked[nb.vertex] = 1;
  }
  return chosen;
}

std::vector<double> star_spectrum(std::size_t k) {
  if (k < 2) throw ArgumentError("star_spectrum: a star needs at least 2 vertices");
  std::vector<double> spectrum;
  spectrum.reserve(k);
  spectrum.push_back(0.0);
  spectrum.insert(spectrum.end(), k - 2, 1.0);
  spectrum.push_back(static_cast<double>(k));
  return spectrum;
}

Eigen::MatrixXd dense_laplacian(const SignedGraph& g) {
  const std::size_t n = g.num_vertices();
  if (n > kDenseGuard) {
    throw GuardError("dense_laplacian: " + std::to_string(n) + " vertices exceeds guard of " +
                     std::to_string(kDenseGuard));
  }
  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(size, size);
  for (Vertex i = 0; i < n; ++i) {
    l(i, i) = static_cast<double>(g.degree(i));
    for (const auto& nb : g.neighbors(i)) l(i, nb.vertex) = -nb.sign;
  }
  return l;
}

DenseSpectrum dense_spectrum(const SignedGraph& g, bool with_vectors) {
  const Eigen::MatrixXd l = dense_laplacian(g);
  DenseSpectrum out;
  if (l.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      l, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  out.values = eig.eigenvalues();
  if (with_vectors) out.vectors = eig.eigenvectors();
  return out;
}

}  // namespace signbal
