#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "oscent/error.hpp"
#include "oscent/oracle.hpp"

namespace oscent {
namespace {

using Apply = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

constexpr int kKrylovSize = 60;

EigenPair lanczos_smallest(const Apply& apply, Eigen::Index n, double tol, int max_restarts,
                           const Eigen::VectorXd* start) {
  if (n < 1) throw InvalidArgument("empty operator");
  if (!(tol > 0.0)) throw InvalidArgument("eigensolver tolerance must be positive");

  Eigen::VectorXd v;
  if (start != nullptr && start->size() == n && start->norm() > 0.0) {
    v = *start;
  } else {
    std::mt19937_64 rng(0x1a2c05ULL);
    std::normal_distribution<double> normal;
    v.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  }
  v.normalize();

  const auto m = static_cast<Eigen::Index>(std::min<Eigen::Index>(n, kKrylovSize));
  Eigen::MatrixXd basis(n, m);
  Eigen::VectorXd w(n);
  Eigen::VectorXd ritz(n);
  Eigen::VectorXd image(n);
  EigenPair result;

  for (int restart = 0; restart < max_restarts; ++restart) {
    std::vector<double> diag;
    std::vector<double> off;
    basis.col(0) = v;
    Eigen::Index k = 0;
    for (; k < m; ++k) {
      apply(basis.col(k), w);
      ++result.matvecs;
      diag.push_back(basis.col(k).dot(w));
      // Full reorthogonalization, twice.
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd overlap = basis.leftCols(k + 1).transpose() * w;
        w.noalias() -= basis.leftCols(k + 1) * overlap;
      }
      const double beta = w.norm();
      const double scale = std::max(1.0, std::abs(diag.back()));
      if (k + 1 == m || beta <= 1e-13 * scale) {
        ++k;
        break;
      }
      off.push_back(beta);
      basis.col(k + 1) = w / beta;
    }

    Eigen::MatrixXd tridiagonal = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      tridiagonal(i, i) = diag[static_cast<std::size_t>(i)];
      if (i + 1 < k) {
        tridiagonal(i, i + 1) = tridiagonal(i + 1, i) = off[static_cast<std::size_t>(i)];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(tridiagonal);
    ritz.noalias() = basis.leftCols(k) * small.eigenvectors().col(0);
    ritz.normalize();
    apply(ritz, image);
    ++result.matvecs;
    const double rayleigh = ritz.dot(image);
    const double residual = (image - rayleigh * ritz).norm();

    result.value = rayleigh;
    result.vector = ritz;
    result.residual = residual;
    if (residual < tol) return result;
    v = ritz;
  }
  throw NumericalFailure("Lanczos did not reach residual " + std::to_string(tol) + " (last " +
                         std::to_string(result.residual) + ")");
}

}  // namespace

EigenPair smallest_eigenpair(const SparseMatrix& matrix, double tol, int max_iterations, const Eigen::VectorXd* start) {
  if (matrix.rows() != matrix.cols()) throw InvalidArgument("matrix must be square");
  return lanczos_smallest([&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = matrix * x; },
                          matrix.rows(), tol, max_iterations, start);
}

EigenPair smallest_eigenpair(const Eigen::MatrixXd& matrix, double tol, int max_iterations,
                             const Eigen::VectorXd* start) {
  if (matrix.rows() != matrix.cols()) throw InvalidArgument("matrix must be square");
  return lanczos_smallest([&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = matrix * x; },
                          matrix.rows(), tol, max_iterations, start);
}

double smallest_eigenvalue(const SparseMatrix& matrix, double tol, int max_iterations) {
  return smallest_eigenpair(matrix, tol, max_iterations).value;
}

double smallest_eigenvalue(const Eigen::MatrixXd& matrix, double tol, int max_iterations) {
  return smallest_eigenpair(matrix, tol, max_iterations).value;
}

}  // namespace oscent
