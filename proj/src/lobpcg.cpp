#include "signbal/lobpcg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "signbal/rng.hpp"

namespace signbal {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Flip so the entry of largest magnitude (first on ties) is positive.
void canonicalize_sign(VectorXd& v) {
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  }
  if (v.size() > 0 && v[arg] < 0) v = -v;
}

void orthonormalize(MatrixXd& x) {
  Eigen::HouseholderQR<MatrixXd> qr(x);
  x = qr.householderQ() * MatrixXd::Identity(x.rows(), x.cols());
}

// Scales each column of `x` to unit norm and applies the same scaling to
// `ax`. Columns that have vanished are left as zero; the Gram step discards
// them.
void normalize_columns(MatrixXd& x, MatrixXd& ax) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double norm = x.col(j).norm();
    if (norm > std::numeric_limits<double>::min()) {
      x.col(j) /= norm;
      ax.col(j) /= norm;
    } else {
      x.col(j).setZero();
      ax.col(j).setZero();
    }
  }
}

LobpcgResult dense_smallest(std::size_t n, const BlockOperator& apply) {
  const auto size = static_cast<Eigen::Index>(n);
  MatrixXd identity = MatrixXd::Identity(size, size);
  MatrixXd a(size, size);
  apply(identity, a);
  MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(sym);
  LobpcgResult out;
  out.value = eig.eigenvalues()[0];
  out.vector = eig.eigenvectors().col(0);
  canonicalize_sign(out.vector);
  out.residual = (sym * out.vector - out.value * out.vector).norm();
  out.iterations = 1;
  out.converged = true;
  return out;
}

}  // namespace

LobpcgResult lobpcg_smallest(std::size_t n, const BlockOperator& apply,
                             const VectorXd& inverse_diagonal,
                             const std::optional<VectorXd>& initial,
                             const LobpcgOptions& options) {
  if (n == 0) return {};
  if (n <= std::max<std::size_t>(options.dense_cutoff, 3 * options.block_size)) {
    return dense_smallest(n, apply);
  }

  const auto rows = static_cast<Eigen::Index>(n);
  const auto b = static_cast<Eigen::Index>(std::max<std::size_t>(1, options.block_size));
  const double threshold = options.tol * options.scale;

  Rng rng(options.seed);
  MatrixXd x(rows, b);
  for (Eigen::Index j = 0; j < b; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) x(i, j) = standard_normal(rng);
  }
  if (initial && initial->size() == rows && initial->norm() > 0) x.col(0) = *initial;
  orthonormalize(x);

  MatrixXd ax(rows, b);
  auto refresh = [&](VectorXd& theta) {
    apply(x, ax);
    MatrixXd h = x.transpose() * ax;
    h = 0.5 * (h + h.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(h);
    x = x * eig.eigenvectors();
    ax = ax * eig.eigenvectors();
    theta = eig.eigenvalues();
  };

  VectorXd theta;
  refresh(theta);

  MatrixXd p(rows, 0);
  MatrixXd ap(rows, 0);

  LobpcgResult best;
  best.residual = std::numeric_limits<double>::infinity();

  constexpr std::size_t kRefreshEvery = 25;
  for (std::size_t it = 1; it <= options.max_iter; ++it) {
    MatrixXd r = ax - x * theta.asDiagonal();
    double res = r.col(0).norm();

    if (res <= threshold || it % kRefreshEvery == 0) {
      // Implicit updates drift; confirm against the operator itself.
      orthonormalize(x);
      refresh(theta);
      r = ax - x * theta.asDiagonal();
      res = r.col(0).norm();
    }
    if (res < best.residual) {
      best.value = theta[0];
      best.vector = x.col(0);
      best.residual = res;
    }
    best.iterations = it;
    if (res <= threshold) {
      best.converged = true;
      break;
    }

    MatrixXd w = r;
    if (inverse_diagonal.size() == rows) w = inverse_diagonal.asDiagonal() * w;
    w -= x * (x.transpose() * w);
    MatrixXd aw(rows, b);
    {
      MatrixXd unit_w = w;
      for (Eigen::Index j = 0; j < b; ++j) {
        const double norm = unit_w.col(j).norm();
        if (norm > std::numeric_limits<double>::min()) unit_w.col(j) /= norm;
      }
      w = std::move(unit_w);
    }
    apply(w, aw);

    const Eigen::Index k = 2 * b + p.cols();
    MatrixXd s(rows, k);
    MatrixXd as(rows, k);
    s << x, w, p;
    as << ax, aw, ap;

    MatrixXd gram_b = s.transpose() * s;
    MatrixXd gram_a = s.transpose() * as;
    gram_b = 0.5 * (gram_b + gram_b.transpose());
    gram_a = 0.5 * (gram_a + gram_a.transpose());

    // Whiten the basis, dropping numerically dependent directions.
    Eigen::SelfAdjointEigenSolver<MatrixXd> gram_eig(gram_b);
    const VectorXd& mu = gram_eig.eigenvalues();
    const double mu_max = mu.maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      if (mu[i] > 1e-10 * mu_max) keep.push_back(i);
    }
    MatrixXd z(k, static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
      z.col(static_cast<Eigen::Index>(c)) =
          gram_eig.eigenvectors().col(keep[c]) / std::sqrt(mu[keep[c]]);
    }
    MatrixXd h = z.transpose() * gram_a * z;
    h = 0.5 * (h + h.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> ritz(h);
    const Eigen::Index take = std::min<Eigen::Index>(b, ritz.eigenvalues().size());
    MatrixXd c = z * ritz.eigenvectors().leftCols(take);

    MatrixXd x_next = s * c;
    MatrixXd ax_next = as * c;
    // The search direction is the part of the update outside the old X.
    p = s.rightCols(k - b) * c.bottomRows(k - b);
    ap = as.rightCols(k - b) * c.bottomRows(k - b);
    normalize_columns(p, ap);

    if (take < b) {
      // Basis collapsed below the block size; restart from X alone.
      orthonormalize(x);
      refresh(theta);
      p.resize(rows, 0);
      ap.resize(rows, 0);
      continue;
    }
    x = std::move(x_next);
    ax = std::move(ax_next);
    theta = ritz.eigenvalues().head(b);
  }

  canonicalize_sign(best.vector);
  return best;
}

}  // namespace signbal
