#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "signbal/graph.hpp"

namespace signbal {

// Approximate smallest eigenpair of the signed Laplacian L = D - A.
struct EigenEstimate {
  double lambda1 = 0.0;
  std::vector<double> v;  // unit norm
  double residual = 0.0;  // ||L v - lambda1 v||
  std::size_t iterations = 0;
};

struct EigensolverOptions {
  double tol = 1e-6;
  // Defaults to 10 * sqrt(n) + 200.
  std::optional<std::size_t> max_iter;
  std::uint64_t seed = 0;
  std::size_t block_size = 3;
  // Warm start, e.g. the previous eigenvector restricted to the survivors.
  std::optional<std::vector<double>> initial;
};

std::size_t default_max_iter(std::size_t n);

// y = (D - A) x, edgewise.
void laplacian_apply(const SignedGraph& g, std::span<const double> x, std::span<double> y);
std::vector<double> laplacian_apply(const SignedGraph& g, std::span<const double> x);

// Matrix-free smallest eigenpair by block LOBPCG with a Jacobi
// preconditioner. Converged when the residual is at most
// tol * max(1, 2 * max_degree), the Gershgorin bound on the spectrum.
// Throws ConvergenceError (carrying the best iterate) when max_iter runs out.
EigenEstimate smallest_eigenpair(const SignedGraph& g, const EigensolverOptions& options = {});

// Per-vertex upper bounds on the smallest eigenvalue after deleting that
// vertex, evaluated at an approximate eigenpair:
//   r_i = (l (1 - 2 v_i^2) - sum_{j in N(i)} v_j^2 + v_i^2 d(i)) / (1 - v_i^2).
// Vertices with v_i^2 >= 1 - eta get no bound and are marked excluded.
struct BoundVector {
  std::vector<double> r;
  std::vector<std::uint8_t> excluded;

  bool is_excluded(Vertex v) const noexcept { return excluded[v] != 0; }
};

inline constexpr double kDefaultEta = 1e-6;
inline constexpr double kDefaultRelImprove = 1e-3;

BoundVector bound_vector(const SignedGraph& g, const EigenEstimate& est, double eta = kDefaultEta);

// Upper bound on the smallest eigenvalue after deleting an independent set R
// at once: the Rayleigh quotient of v restricted to the survivors,
//   (l (1 - 2 sum_R v_i^2) + sum_R (v_i^2 d(i) - sum_{j in N(i)} v_j^2))
//   / (1 - sum_R v_i^2).
// Reduces to r_i for R = {i}.
double batch_bound(const SignedGraph& g, const EigenEstimate& est, std::span<const Vertex> batch,
                   double eta = kDefaultEta);

struct BatchOptions {
  double rel_improve = kDefaultRelImprove;
  double eta = kDefaultEta;
};

// Greedy independent batch in ascending bound order (ties by index). Stops at
// k_max, when no independent candidate remains, when the batch bound stops
// improving by rel_improve (last pick undone), or when the remaining mass
// 1 - sum v_i^2 would drop to eta. Never empty.
std::vector<Vertex> select_batch(const SignedGraph& g, const BoundVector& bounds,
                                 const EigenEstimate& est, std::size_t k_max,
                                 const BatchOptions& options = {});

// Spectrum of the signed Laplacian of any k-vertex signed star, ascending.
std::vector<double> star_spectrum(std::size_t k);

// Dense oracle for small graphs.
inline constexpr std::size_t kDenseGuard = 2000;

Eigen::MatrixXd dense_laplacian(const SignedGraph& g);

struct DenseSpectrum {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, empty unless requested
};

DenseSpectrum dense_spectrum(const SignedGraph& g, bool with_vectors = false);

}  // namespace signbal
