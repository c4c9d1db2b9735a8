#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "confgeo/immersion.hpp"

namespace confgeo {

/// A regular point stops being one when ||II|^2 - m|H|^2| drops below this.
inline constexpr double kRegularityThreshold = 1e-10;

/// Per-point isometric data of a hypersurface in a space form.
struct PointFrame {
  Eigen::VectorXd point;
  Eigen::MatrixXd I, I_inv;                  // induced metric and its inverse
  std::vector<Eigen::MatrixXd> II;           // h^a_{ij}, one matrix per normal
  std::vector<Eigen::VectorXd> normal_frame; // unit normals in the container
  std::vector<double> normal_signs;          // <xi_a, xi_a> = +-1
  Eigen::VectorXd H_vec;                     // mean curvature components H^a
  std::vector<Eigen::MatrixXd> christoffels; // Gamma^k_{ij}, indexed [k](i,j)
  double norm_II = 0.0;                      // |II|^2 (signature-weighted)
  double norm_H2 = 0.0;                      // |H|^2 (signature-weighted)
};

/// Per-point conformal data: the conformal factor, metric, Blaschke tensor A,
/// conformal second fundamental form B and conformal form C, plus curvature
/// bookkeeping used by the residual checks.
struct ConformalData {
  Eigen::VectorXd point;
  int m = 0;
  double tau = 0.0;
  int sign_choice = 1;       // sign making the conformal factor positive
  double eps_normal = 1.0;   // <xi, xi> of the unit normal
  double eps_ambient = 0.0;  // space-form curvature of the target
  double H = 0.0;            // mean curvature scalar of the hypersurface
  Eigen::MatrixXd I, g, g_inv;
  Eigen::MatrixXd A, A_raised;
  std::vector<Eigen::MatrixXd> B, B_raised;
  std::vector<Eigen::VectorXd> C;
  std::vector<Eigen::MatrixXd> christoffels_g;
  double rho = 0.0;            // conformal scalar curvature recovered from tr A
  double rho_intrinsic = 0.0;  // scalar curvature of g computed intrinsically
  double rho_I = 0.0;          // isometric scalar curvature (curvature-inclusive form)
};

/// Canonical light-cone lift data at a point.
struct FrameLift {
  Signature lift_sig;
  Eigen::VectorXd Y;                      // canonical lift, <Y,Y> = 0
  Eigen::MatrixXd Y_i;                    // columns: coordinate derivatives of Y
  std::vector<Eigen::MatrixXd> Y_ij;      // second derivatives, [i] has columns over j
  Eigen::VectorXd N_vec;                  // <N,Y> = 1, <N,N> = 0
  std::vector<Eigen::VectorXd> xi;        // conformal normal(s), <xi,xi> = +-1
};

PointFrame fundamental_forms(const ImmersionSpec& spec, const Eigen::VectorXd& point);

/// Isometric scalar curvature by the curvature-inclusive extrinsic formula.
double scalar_curvature(const PointFrame& pf, const AmbientSpec& ambient);

struct CurvatureCheck {
  double extrinsic = 0.0;  // m(m-1)eps + m^2|H|^2 - |II|^2
  double intrinsic = 0.0;  // from Christoffels and their finite differences
  double discrepancy = 0.0;
};
CurvatureCheck scalar_curvature_check(const ImmersionSpec& spec, const Eigen::VectorXd& point,
                                      double step = 1e-3);

/// Conformal factor exponent: e^{2 tau} = sign * m/(m-1) * (|II|^2 - m|H|^2),
/// sign chosen to make the right side positive. Throws NotRegular at
/// (quasi-)umbilic points.
std::pair<double, int> conformal_factor(const PointFrame& pf);

ConformalData conformal_tensors(const ImmersionSpec& spec, const Eigen::VectorXd& point);

/// Residuals of the pointwise trace identities: trace_B, norm_B (trace-free
/// normalization of B) and trace_A (trace of A against the scalar curvature of g).
std::map<std::string, double> identity_residuals(const ConformalData& cd);

/// Residuals of the integrability conditions: the two Codazzi-type identities,
/// the Ricci identity for C, the conformal Gauss equation, and the trace
/// identity (1-m) C = div_g B. Covariant derivatives and the curvature of g are
/// built from central finite differences (one Richardson level).
std::map<std::string, double> integrability_residuals(const ImmersionSpec& spec,
                                                      const Eigen::VectorXd& point,
                                                      double step = 1e-3);

FrameLift frame_lift(const ImmersionSpec& spec, const Eigen::VectorXd& point);

/// max |R_{ijkl}| of the conformal metric g, computed through jets (no FD).
double conformal_metric_curvature(const ImmersionSpec& spec, const Eigen::VectorXd& point);

struct PointAnalysis {
  ConformalData cd;
  FrameLift lift;
};

/// One pipeline pass producing both the conformal tensors and the lift.
PointAnalysis analyze_point(const ImmersionSpec& spec, const Eigen::VectorXd& point);

}  // namespace confgeo
