#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "confgeo/errors.hpp"

namespace confgeo {

/// Signature of a pseudo-Euclidean space R^N_s: the inner product matrix is
/// diag(-1 x s, +1 x (N - s)), negative axes first.
struct Signature {
  int dim = 0;
  int index = 0;

  Signature() = default;
  Signature(int dim_, int index_) : dim(dim_), index(index_) {
    if (dim <= 0 || index < 0 || index > dim)
      throw DomainError("invalid signature (" + std::to_string(dim_) + "," + std::to_string(index_) + ")");
  }

  double sign(int axis) const { return axis < index ? -1.0 : 1.0; }

  Eigen::VectorXd signs() const {
    Eigen::VectorXd s(dim);
    for (int i = 0; i < dim; ++i) s[i] = sign(i);
    return s;
  }

  bool operator==(const Signature& o) const { return dim == o.dim && index == o.index; }
};

/// Signed inner product <x,y> = -sum_{i<s} x_i y_i + sum_{i>=s} x_i y_i.
double inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Signature& sig);

/// Gram matrix G(i,j) = <v_i, v_j>.
Eigen::MatrixXd gram(const std::vector<Eigen::VectorXd>& vectors, const Signature& sig);

/// Relative degeneracy threshold: |det M| < kDegeneracyRel * scale^dim flags NearSingular.
inline constexpr double kDegeneracyRel = 1e-12;

/// Solve M x = rhs. Throws NearSingular when |det M| falls below the relative
/// degeneracy threshold (signals a non-regular point upstream).
Eigen::VectorXd solve(const Eigen::MatrixXd& M, const Eigen::VectorXd& rhs);
Eigen::MatrixXd solve(const Eigen::MatrixXd& M, const Eigen::MatrixXd& rhs);

/// Signed Gram-Schmidt in the given order, no pivoting. The output frame spans
/// the same subspace and gram(frame) = diag(signs). Throws NullDirection when an
/// intermediate vector is null (degenerate subspace).
std::pair<std::vector<Eigen::VectorXd>, std::vector<double>> orthonormalize(
    const std::vector<Eigen::VectorXd>& vectors, const Signature& sig);

/// Number of negative eigenvalues of a symmetric matrix (index of a metric).
int metric_index(const Eigen::MatrixXd& M);

}  // namespace confgeo
