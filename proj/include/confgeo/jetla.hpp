#pragma once

#include <cmath>
#include <vector>

#include "confgeo/errors.hpp"
#include "confgeo/jet.hpp"

namespace confgeo {

using JetVec = std::vector<Jet>;
using JetMat = std::vector<std::vector<Jet>>;

/// Signed dot product of jet-valued vectors: sum_i eta_i a_i b_i.
inline Jet jet_dot(const JetVec& a, const JetVec& b, const std::vector<double>& eta) {
  if (a.size() != b.size() || a.size() != eta.size())
    throw DimensionMismatch("jet_dot: size mismatch");
  Jet acc = Jet::constant(0.0, a[0].nvars());
  for (size_t i = 0; i < a.size(); ++i) acc += eta[i] * (a[i] * b[i]);
  return acc;
}

/// Determinant of a small jet-valued matrix by Laplace expansion with memoized
/// column-subset minors. Division-free, exact over the truncated ring.
inline Jet jet_det(const JetMat& M) {
  const int n = static_cast<int>(M.size());
  if (n == 0) throw DimensionMismatch("jet_det: empty matrix");
  const int nv = M[0][0].nvars();
  const int full = 1 << n;
  std::vector<Jet> D(full);
  D[0] = Jet::constant(1.0, nv);
  for (int mask = 1; mask < full; ++mask) {
    const int r = __builtin_popcount(mask) - 1;  // row index for this subset size
    Jet acc = Jet::constant(0.0, nv);
    double sgn = 1.0;
    for (int j = 0; j < n; ++j) {
      if (!(mask & (1 << j))) continue;
      acc += sgn * (M[r][j] * D[mask ^ (1 << j)]);
      sgn = -sgn;
    }
    D[mask] = acc;
  }
  return D[full - 1];
}

/// Inverse of a small jet-valued matrix via adjugate / determinant. Throws
/// DegenerateMetric when the determinant's value is below the relative threshold.
inline JetMat jet_inverse(const JetMat& M, double rel_tol = 1e-12) {
  const int n = static_cast<int>(M.size());
  const int nv = M[0][0].nvars();
  const Jet det = jet_det(M);
  double scale = 0.0;
  for (const auto& row : M)
    for (const auto& e : row) scale = std::max(scale, std::abs(e.value()));
  scale = std::max(scale, 1e-300);
  if (std::abs(det.value()) < rel_tol * std::pow(scale, n))
    throw DegenerateMetric("jet_inverse: determinant below degeneracy threshold");
  const Jet inv_det = recip(det);
  JetMat out(n, JetVec(n, Jet::constant(0.0, nv)));
  if (n == 1) {
    out[0][0] = inv_det;
    return out;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      JetMat minor(n - 1, JetVec(n - 1, Jet::constant(0.0, nv)));
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor[rr][cc] = M[r][c];
          ++cc;
        }
        ++rr;
      }
      const double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      out[j][i] = sgn * (jet_det(minor) * inv_det);  // adjugate transpose
    }
  return out;
}

/// Orthogonal complement of N-1 jet-valued vectors in R^N with signature eta:
/// returns x with <x, rows_r> = 0 for every row. Built from the Euclidean
/// generalized cross product (cofactor expansion) followed by the metric flip.
inline JetVec jet_cross_complement(const std::vector<JetVec>& rows,
                                   const std::vector<double>& eta) {
  const int N = static_cast<int>(eta.size());
  if (static_cast<int>(rows.size()) != N - 1)
    throw DimensionMismatch("jet_cross_complement: need N-1 rows");
  const int nv = rows[0][0].nvars();
  JetVec x(N, Jet::constant(0.0, nv));
  for (int i = 0; i < N; ++i) {
    JetMat minor(N - 1, JetVec(N - 1, Jet::constant(0.0, nv)));
    for (int r = 0; r < N - 1; ++r)
      for (int c = 0, cc = 0; c < N; ++c) {
        if (c == i) continue;
        minor[r][cc++] = rows[r][c];
      }
    const double sgn = (i % 2 == 0) ? 1.0 : -1.0;
    x[i] = eta[i] * sgn * jet_det(minor);
  }
  return x;
}

}  // namespace confgeo
