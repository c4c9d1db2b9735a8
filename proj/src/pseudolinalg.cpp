#include "confgeo/pseudolinalg.hpp"

#include <cmath>

namespace confgeo {

double inner(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Signature& sig) {
  if (x.size() != sig.dim || y.size() != sig.dim)
    throw DimensionMismatch("inner: vector length does not match signature dimension");
  double acc = 0.0;
  for (int i = 0; i < sig.dim; ++i) acc += sig.sign(i) * x[i] * y[i];
  return acc;
}

Eigen::MatrixXd gram(const std::vector<Eigen::VectorXd>& vectors, const Signature& sig) {
  const int n = static_cast<int>(vectors.size());
  Eigen::MatrixXd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      G(i, j) = inner(vectors[i], vectors[j], sig);
      G(j, i) = G(i, j);
    }
  return G;
}

namespace {

Eigen::FullPivLU<Eigen::MatrixXd> checked_lu(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw DimensionMismatch("solve: matrix must be square");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  const double scale = std::max(M.cwiseAbs().maxCoeff(), 1e-300);
  const double det = std::abs(lu.determinant());
  if (det < kDegeneracyRel * std::pow(scale, M.rows()))
    throw NearSingular("solve: |det| = " + std::to_string(det) + " below degeneracy threshold");
  return lu;
}

}  // namespace

Eigen::VectorXd solve(const Eigen::MatrixXd& M, const Eigen::VectorXd& rhs) {
  if (rhs.size() != M.rows()) throw DimensionMismatch("solve: rhs size mismatch");
  return checked_lu(M).solve(rhs);
}

Eigen::MatrixXd solve(const Eigen::MatrixXd& M, const Eigen::MatrixXd& rhs) {
  if (rhs.rows() != M.rows()) throw DimensionMismatch("solve: rhs size mismatch");
  return checked_lu(M).solve(rhs);
}

std::pair<std::vector<Eigen::VectorXd>, std::vector<double>> orthonormalize(
    const std::vector<Eigen::VectorXd>& vectors, const Signature& sig) {
  std::vector<Eigen::VectorXd> frame;
  std::vector<double> signs;
  frame.reserve(vectors.size());
  for (const auto& v0 : vectors) {
    if (v0.size() != sig.dim) throw DimensionMismatch("orthonormalize: vector length mismatch");
    Eigen::VectorXd v = v0;
    for (size_t j = 0; j < frame.size(); ++j)
      v -= signs[j] * inner(v, frame[j], sig) * frame[j];
    const double nn = inner(v, v, sig);
    const double scale = std::max(v.cwiseAbs().maxCoeff(), 1e-300);
    if (std::abs(nn) < 1e-12 * scale * scale)
      throw NullDirection("orthonormalize: null direction encountered");
    frame.push_back(v / std::sqrt(std::abs(nn)));
    signs.push_back(nn > 0 ? 1.0 : -1.0);
  }
  return {frame, signs};
}

int metric_index(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  int neg = 0;
  for (int i = 0; i < M.rows(); ++i)
    if (es.eigenvalues()[i] < 0) ++neg;
  return neg;
}

}  // namespace confgeo
