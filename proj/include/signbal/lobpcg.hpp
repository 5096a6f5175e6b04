#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

#include <Eigen/Dense>

namespace signbal {

// Y = A X for a symmetric operator A, column by column.
using BlockOperator = std::function<void(const Eigen::MatrixXd& x, Eigen::MatrixXd& y)>;

struct LobpcgOptions {
  double tol = 1e-6;
  // Convergence: ||A x - theta x|| <= tol * scale.
  double scale = 1.0;
  std::size_t max_iter = 1000;
  std::size_t block_size = 3;
  std::uint64_t seed = 0;
  // Problems at or below this size are solved by applying the operator to
  // the identity and diagonalizing the result.
  std::size_t dense_cutoff = 24;
};

struct LobpcgResult {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Smallest eigenpair of a symmetric operator by block LOBPCG with a diagonal
// preconditioner (`inverse_diagonal`, empty for none). `initial` seeds the
// first block column; remaining columns are seeded Gaussian.
//
// Never throws on non-convergence: the caller decides, using `converged`.
LobpcgResult lobpcg_smallest(std::size_t n, const BlockOperator& apply,
                             const Eigen::VectorXd& inverse_diagonal,
                             const std::optional<Eigen::VectorXd>& initial,
                             const LobpcgOptions& options);

}  // namespace signbal
