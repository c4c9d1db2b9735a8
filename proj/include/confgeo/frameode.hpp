#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "confgeo/invariants.hpp"

namespace confgeo {

/// Moving frame (Y, N, Y_u, Y_v, xi) along a flat conformal surface; all five
/// vectors live in R^5_2. The Gram matrix of the frame is the conserved
/// quantity of the integration.
struct FrameState {
  Eigen::VectorXd Y, N, Yu, Yv, xi;
  double u = 0.0, v = 0.0;
};

/// One classification case: constant Blaschke eigenvalues (a, b) in the frame
/// where the trace-free form has eigenvalue B1 along u, plus the closed-form
/// split Y = F(u) + G(v) used as ground truth.
struct CaseSpec {
  std::string id;
  double r = 0.0;
  double a = 0.0, b = 0.0;   // index-raised Blaschke eigenvalues
  double eta1 = 1.0;         // <Y_u, Y_u> (-1 on time-like cases)
  double eps_n = -1.0;       // <xi, xi>
  double B1 = 0.5;           // raised trace-free eigenvalue along u
  double kF = 0.0, kG = 0.0; // scalar coefficients in f''' + k f' = 0
  std::string surface;       // catalog registry name
  std::map<std::string, double> surface_params;
  std::function<Eigen::VectorXd(double)> F, dF, d2F, G, dG, d2G;
};

/// Case ids: I, II, III (space-like) and TL-H11xH1, TL-S11xH1, TL-S11xS1,
/// TL-R11xS1, TL-S11xR1 (time-like). Invalid r throws InvalidParam.
CaseSpec case_spec(const std::string& id, double r);
const std::vector<std::string>& case_ids();

/// Closed-form frame at (u, v), assembled from F, G and the structural relations.
FrameState closed_form_state(const CaseSpec& cs, double u, double v);

/// Canonical Gram matrix of (Y, N, Yu, Yv, xi) for a case.
Eigen::MatrixXd canonical_gram(const CaseSpec& cs);
Eigen::MatrixXd frame_gram(const CaseSpec& cs, const FrameState& st);

struct ScalarOdeResult {
  std::vector<double> t;
  std::vector<double> f, df, ddf;
  std::vector<double> analytic;
  double max_error = 0.0;    // |f - analytic| over the grid
  double energy_drift = 0.0; // relative drift of (k f'^2 + f''^2)/2
};

/// Fixed-step RK4 for f''' + k f' = 0 against the closed-form solution.
/// Throws StepTooLarge when the conserved energy drifts.
ScalarOdeResult solve_scalar_ode(double k, const std::array<double, 3>& init,
                                 const std::vector<double>& tgrid, double step = 1e-3);

struct FrameTrajectory {
  std::vector<FrameState> states;  // at each path waypoint
  double gram_drift = 0.0;         // max |Gram - canonical| along the path
  double length = 0.0;
};

/// RK4 integration of the frame system along axis-parallel path segments.
/// Throws GramDrift when the Gram matrix drifts beyond tol per unit length.
FrameTrajectory integrate_frame(const CaseSpec& cs, const std::vector<std::pair<double, double>>& path,
                                const FrameState& init, double step = 1e-3,
                                double drift_tol = 1e-7);

/// Discrete witness of the additive splitting Y(u,v) = F(u) + G(v):
/// max |Y(u,v) + Y(u0,v0) - Y(u,v0) - Y(u0,v)| over the grid.
double splitting_check(const std::function<Eigen::VectorXd(double, double)>& Y,
                       const std::vector<double>& ugrid, const std::vector<double>& vgrid);

struct RoundtripReport {
  std::string case_id;
  double r = 0.0;
  double a_mean = 0.0, b_mean = 0.0;
  double a_stddev = 0.0, b_stddev = 0.0;
  double budget_residual = 0.0;     // |a + b - eps_n/4|
  double relation_residual = 0.0;   // eigenvalue set vs the case's (a, b)
  double B_eigen_residual = 0.0;    // eigenvalues of raised B vs {+1/2, -1/2}
  double max_C = 0.0;
  double g_curvature_max = 0.0;
};

/// Runs the invariants pipeline on the case's catalog surface and checks the
/// constant-eigenvalue relations.
RoundtripReport roundtrip_with_invariants(const CaseSpec& cs, int samples = 25);

}  // namespace confgeo
