#include "confgeo/invariants.hpp"

#include <cmath>

#include "confgeo/jetla.hpp"

namespace confgeo {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::array<int, 4> e1(int i) {
  std::array<int, 4> a{0, 0, 0, 0};
  a[i] = 1;
  return a;
}

std::array<int, 4> e2(int i, int j) {
  std::array<int, 4> a{0, 0, 0, 0};
  a[i] += 1;
  a[j] += 1;
  return a;
}

MatrixXd jet_values(const JetMat& M) {
  MatrixXd out(M.size(), M[0].size());
  for (size_t i = 0; i < M.size(); ++i)
    for (size_t j = 0; j < M[i].size(); ++j) out(i, j) = M[i][j].value();
  return out;
}

/// Christoffel symbols Gamma^k_{ij} (values) of a jet-valued metric.
std::vector<MatrixXd> christoffel_values(const JetMat& M, const MatrixXd& Minv0) {
  const int m = static_cast<int>(M.size());
  std::vector<MatrixXd> low(m, MatrixXd(m, m));  // low[l](i,j) = Gamma_{ij,l}
  for (int l = 0; l < m; ++l)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        low[l](i, j) = 0.5 * (M[j][l].extract(e1(i)) + M[i][l].extract(e1(j)) -
                              M[i][j].extract(e1(l)));
  std::vector<MatrixXd> out(m, MatrixXd::Zero(m, m));
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) out[k] += Minv0(k, l) * low[l];
  return out;
}

/// Christoffel symbols as jets (valid to one order below the metric jets).
std::vector<JetMat> christoffel_jets(const JetMat& M, const JetMat& Minv) {
  const int m = static_cast<int>(M.size());
  const int nv = M[0][0].nvars();
  std::vector<JetMat> low(m, JetMat(m, JetVec(m, Jet::constant(0.0, nv))));
  for (int l = 0; l < m; ++l)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        low[l][i][j] =
            0.5 * (M[j][l].derivative(i) + M[i][l].derivative(j) - M[i][j].derivative(l));
  std::vector<JetMat> out(m, JetMat(m, JetVec(m, Jet::constant(0.0, nv))));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        Jet acc = Jet::constant(0.0, nv);
        for (int l = 0; l < m; ++l) acc += Minv[k][l] * low[l][i][j];
        out[k][i][j] = acc;
      }
  return out;
}

struct CurvatureOut {
  std::vector<double> R_low;  // R_{ijkl}, flattened i*m^3 + j*m^2 + k*m + l
  double scalar = 0.0;
  double max_abs = 0.0;
  int m = 0;
  double R(int i, int j, int k, int l) const { return R_low[((i * m + j) * m + k) * m + l]; }
};

/// Curvature tensor and scalar curvature of a jet-valued metric, via jet
/// Christoffels. Convention: R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj}
/// + Gamma^i_{kp} Gamma^p_{lj} - Gamma^i_{lp} Gamma^p_{kj}; Ric_{jl} = R^k_{jkl}.
/// The unit round 2-sphere has scalar curvature +2.
CurvatureOut curvature_from_jets(const JetMat& M, const JetMat& Minv) {
  const int m = static_cast<int>(M.size());
  const MatrixXd M0 = jet_values(M);
  const MatrixXd Minv0 = jet_values(Minv);
  const auto Gj = christoffel_jets(M, Minv);
  std::vector<MatrixXd> G0(m);
  for (int k = 0; k < m; ++k) G0[k] = jet_values(Gj[k]);

  CurvatureOut out;
  out.m = m;
  std::vector<double> R_up(m * m * m * m, 0.0);
  auto idx = [m](int i, int j, int k, int l) { return ((i * m + j) * m + k) * m + l; };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double v = Gj[i][l][j].extract(e1(k)) - Gj[i][k][j].extract(e1(l));
          for (int p = 0; p < m; ++p) v += G0[i](k, p) * G0[p](l, j) - G0[i](l, p) * G0[p](k, j);
          R_up[idx(i, j, k, l)] = v;
        }
  out.R_low.assign(m * m * m * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double v = 0;
          for (int p = 0; p < m; ++p) v += M0(i, p) * R_up[idx(p, j, k, l)];
          out.R_low[idx(i, j, k, l)] = v;
          out.max_abs = std::max(out.max_abs, std::abs(v));
        }
  double scalar = 0.0;
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < m; ++l) {
      double ric = 0.0;
      for (int k = 0; k < m; ++k) ric += R_up[idx(k, j, k, l)];
      scalar += Minv0(j, l) * ric;
    }
  out.scalar = scalar;
  return out;
}

/// Full jet pipeline state at one parameter point.
struct Pipe {
  int m = 0, N = 0;
  VectorXd point;
  std::vector<double> eta;
  double eps_a = 0.0, radius = 1.0, eps_n = 1.0;
  int sign_choice = 1;
  JetVec u;
  std::vector<JetVec> du;
  std::vector<std::vector<JetVec>> ddu;
  JetMat I, Iinv;
  JetVec zeta;
  JetMat h;
  JetMat shape;  // Iinv * h
  Jet Hjet, normII, normH2;
  // conformal stage (filled when regular)
  Jet X, e2tau, tau, etau;
  JetMat g, ginv;
};

Pipe build_pipe(const ImmersionSpec& spec, const VectorXd& point, bool need_conformal) {
  Pipe P;
  P.m = spec.m;
  P.N = spec.ambient.container.dim;
  P.point = point;
  P.eps_a = spec.ambient.epsilon;
  P.radius = spec.ambient.radius;
  const VectorXd signs = spec.ambient.container.signs();
  P.eta.assign(signs.data(), signs.data() + P.N);

  const int extra = spec.ambient.epsilon != 0 ? 1 : 0;
  if (P.N != P.m + 1 + extra)
    throw DomainError("pipeline: hypersurfaces only (container dim must be m+1 plus the radial axis)");

  P.u = evaluate(spec, point);
  P.du.resize(P.m);
  for (int i = 0; i < P.m; ++i) {
    P.du[i].reserve(P.N);
    for (int a = 0; a < P.N; ++a) P.du[i].push_back(P.u[a].derivative(i));
  }
  P.ddu.assign(P.m, std::vector<JetVec>(P.m));
  for (int i = 0; i < P.m; ++i)
    for (int j = 0; j < P.m; ++j) {
      P.ddu[i][j].reserve(P.N);
      for (int a = 0; a < P.N; ++a) P.ddu[i][j].push_back(P.du[i][a].derivative(j));
    }

  P.I.assign(P.m, JetVec(P.m, Jet::constant(0.0, P.m)));
  for (int i = 0; i < P.m; ++i)
    for (int j = i; j < P.m; ++j) {
      P.I[i][j] = jet_dot(P.du[i], P.du[j], P.eta);
      P.I[j][i] = P.I[i][j];
    }
  P.Iinv = jet_inverse(P.I);  // throws DegenerateMetric

  std::vector<JetVec> rows = P.du;
  if (extra) rows.push_back(P.u);
  JetVec x = jet_cross_complement(rows, P.eta);
  Jet nn = jet_dot(x, x, P.eta);
  double scale = 0.0;
  for (const auto& c : x) scale = std::max(scale, std::abs(c.value()));
  if (std::abs(nn.value()) < 1e-12 * std::max(scale * scale, 1e-300))
    throw NullNormal("pipeline: normal direction is null");
  P.eps_n = nn.value() > 0 ? 1.0 : -1.0;
  Jet inv_len = recip(sqrt(P.eps_n * nn));
  P.zeta.reserve(P.N);
  for (int a = 0; a < P.N; ++a) P.zeta.push_back(x[a] * inv_len);
  // Deterministic orientation: first significant component of zeta negative.
  double zmax = 0.0;
  for (const auto& c : P.zeta) zmax = std::max(zmax, std::abs(c.value()));
  for (int a = 0; a < P.N; ++a) {
    if (std::abs(P.zeta[a].value()) > 1e-6 * zmax) {
      if (P.zeta[a].value() > 0)
        for (auto& c : P.zeta) c = -c;
      break;
    }
  }

  P.h.assign(P.m, JetVec(P.m, Jet::constant(0.0, P.m)));
  for (int i = 0; i < P.m; ++i)
    for (int j = i; j < P.m; ++j) {
      P.h[i][j] = P.eps_n * jet_dot(P.ddu[i][j], P.zeta, P.eta);
      P.h[j][i] = P.h[i][j];
    }

  P.shape.assign(P.m, JetVec(P.m, Jet::constant(0.0, P.m)));
  for (int i = 0; i < P.m; ++i)
    for (int j = 0; j < P.m; ++j) {
      Jet acc = Jet::constant(0.0, P.m);
      for (int k = 0; k < P.m; ++k) acc += P.Iinv[i][k] * P.h[k][j];
      P.shape[i][j] = acc;
    }

  Jet trS = Jet::constant(0.0, P.m);
  for (int i = 0; i < P.m; ++i) trS += P.shape[i][i];
  P.Hjet = trS / static_cast<double>(P.m);
  Jet tr2 = Jet::constant(0.0, P.m);
  for (int i = 0; i < P.m; ++i)
    for (int j = 0; j < P.m; ++j) tr2 += P.shape[i][j] * P.shape[j][i];
  P.normII = P.eps_n * tr2;
  P.normH2 = P.eps_n * (P.Hjet * P.Hjet);

  if (!need_conformal) return P;
  if (P.m < 2) throw DomainError("pipeline: conformal invariants need m >= 2");

  P.X = P.normII - static_cast<double>(P.m) * P.normH2;
  if (std::abs(P.X.value()) < kRegularityThreshold)
    throw NotRegular("pipeline: |II|^2 - m|H|^2 vanishes (quasi-umbilic point)");
  P.sign_choice = P.X.value() > 0 ? 1 : -1;
  P.e2tau = (static_cast<double>(P.m) / (P.m - 1.0)) * P.sign_choice * P.X;
  P.tau = 0.5 * log(P.e2tau);
  P.etau = sqrt(P.e2tau);

  P.g.assign(P.m, JetVec(P.m, Jet::constant(0.0, P.m)));
  P.ginv.assign(P.m, JetVec(P.m, Jet::constant(0.0, P.m)));
  Jet inv_e2tau = recip(P.e2tau);
  for (int i = 0; i < P.m; ++i)
    for (int j = 0; j < P.m; ++j) {
      P.g[i][j] = P.e2tau * P.I[i][j];
      P.ginv[i][j] = inv_e2tau * P.Iinv[i][j];
    }
  return P;
}

PointFrame frame_from_pipe(const Pipe& P) {
  PointFrame pf;
  pf.point = P.point;
  pf.I = jet_values(P.I);
  pf.I_inv = jet_values(P.Iinv);
  MatrixXd h0(P.m, P.m);
  for (int i = 0; i < P.m; ++i)
    for (int j = 0; j < P.m; ++j) h0(i, j) = P.h[i][j].value();
  pf.II = {h0};
  VectorXd zeta0(P.N);
  for (int a = 0; a < P.N; ++a) zeta0[a] = P.zeta[a].value();
  pf.normal_frame = {zeta0};
  pf.normal_signs = {P.eps_n};
  pf.H_vec = VectorXd::Constant(1, P.Hjet.value());
  pf.christoffels = christoffel_values(P.I, pf.I_inv);
  pf.norm_II = P.normII.value();
  pf.norm_H2 = P.normH2.value();
  return pf;
}

ConformalData tensors_from_pipe(const Pipe& P) {
  ConformalData cd;
  cd.point = P.point;
  cd.m = P.m;
  cd.tau = P.tau.value();
  cd.sign_choice = P.sign_choice;
  cd.eps_normal = P.eps_n;
  cd.eps_ambient = P.eps_a;
  cd.H = P.Hjet.value();
  cd.I = jet_values(P.I);
  cd.g = jet_values(P.g);
  cd.g_inv = jet_values(P.ginv);

  const int m = P.m;
  VectorXd taugrad(m);
  for (int i = 0; i < m; ++i) taugrad[i] = P.tau.extract(e1(i));
  const MatrixXd Iinv0 = jet_values(P.Iinv);
  const auto GammaI = christoffel_values(P.I, Iinv0);
  MatrixXd tauhess(m, m);  // Hessian of tau with respect to the induced metric
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double v = P.tau.extract(e2(i, j));
      for (int k = 0; k < m; ++k) v -= GammaI[k](i, j) * taugrad[k];
      tauhess(i, j) = v;
    }

  MatrixXd h0(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) h0(i, j) = P.h[i][j].value();
  const MatrixXd I0 = cd.I;
  const double H0 = cd.H;
  const double gradsq = taugrad.dot(Iinv0 * taugrad);

  MatrixXd A(m, m);
  const double H_low = P.eps_n * H0;  // H with the normal index lowered
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      A(i, j) = taugrad[i] * taugrad[j] + h0(i, j) * H_low - tauhess(i, j) -
                0.5 * (gradsq + P.normH2.value() - P.eps_a) * I0(i, j);
  cd.A = A;

  const double et = std::exp(cd.tau);
  MatrixXd B0 = et * (h0 - H0 * I0);
  cd.B = {B0};

  const VectorXd tau_up = Iinv0 * taugrad;
  VectorXd C0(m);
  for (int i = 0; i < m; ++i) {
    double v = H0 * taugrad[i] - P.Hjet.extract(e1(i));
    for (int j = 0; j < m; ++j) v -= h0(i, j) * tau_up[j];
    C0[i] = v / et;
  }
  cd.C = {C0};

  cd.A_raised = cd.g_inv * A;
  cd.B_raised = {MatrixXd(cd.g_inv * B0)};
  cd.christoffels_g = christoffel_values(P.g, cd.g_inv);

  const auto curv = curvature_from_jets(P.g, P.ginv);
  cd.rho_intrinsic = curv.scalar;
  const double trA = cd.A_raised.trace();
  cd.rho = ((2.0 * m) * trA - P.sign_choice) * (m - 1.0) / m;
  cd.rho_I = m * (m - 1.0) * P.eps_a + m * m * P.normH2.value() - P.normII.value();
  return cd;
}

FrameLift lift_from_pipe(const Pipe& P, const AmbientSpec& amb) {
  const int m = P.m, N = P.N;
  const Signature lsig = lift_signature(amb);
  const int L = lsig.dim;
  const VectorXd lsigns = lsig.signs();

  JetVec y0;
  y0.reserve(L);
  if (amb.epsilon == 0) {
    Jet q = jet_dot(P.u, P.u, P.eta);
    y0.push_back(0.5 * (q + 1.0));
    for (int a = 0; a < N; ++a) y0.push_back(P.u[a]);
    y0.push_back(0.5 * (q - 1.0));
  } else if (amb.epsilon > 0) {
    y0.push_back(Jet::constant(amb.radius, m));
    for (int a = 0; a < N; ++a) y0.push_back(P.u[a]);
  } else {
    for (int a = 0; a < N; ++a) y0.push_back(P.u[a]);
    y0.push_back(Jet::constant(amb.radius, m));
  }

  JetVec Yj(L, Jet::constant(0.0, m));
  for (int a = 0; a < L; ++a) Yj[a] = P.etau * y0[a];

  FrameLift out;
  out.lift_sig = lsig;
  out.Y = VectorXd(L);
  out.Y_i = MatrixXd(L, m);
  out.Y_ij.assign(m, MatrixXd(L, m));
  for (int a = 0; a < L; ++a) {
    out.Y[a] = Yj[a].value();
    for (int i = 0; i < m; ++i) {
      out.Y_i(a, i) = Yj[a].extract(e1(i));
      for (int j = 0; j < m; ++j) out.Y_ij[i](a, j) = Yj[a].extract(e2(i, j));
    }
  }

  const MatrixXd ginv0 = jet_values(P.ginv);
  const auto Gammag = christoffel_values(P.g, ginv0);
  VectorXd lap = VectorXd::Zero(L);
  for (int a = 0; a < L; ++a) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double t = out.Y_ij[i](a, j);
        for (int k = 0; k < m; ++k) t -= Gammag[k](i, j) * out.Y_i(a, k);
        acc += ginv0(i, j) * t;
      }
    lap[a] = acc;
  }
  double lap2 = 0.0;
  for (int a = 0; a < L; ++a) lap2 += lsigns[a] * lap[a] * lap[a];
  out.N_vec = -(1.0 / m) * lap - (lap2 / (2.0 * m * m)) * out.Y;

  VectorXd zeta0(N);
  for (int a = 0; a < N; ++a) zeta0[a] = P.zeta[a].value();
  VectorXd zhat = VectorXd::Zero(L);
  if (amb.epsilon == 0) {
    double uz = 0.0;
    for (int a = 0; a < N; ++a) uz += P.eta[a] * P.u[a].value() * zeta0[a];
    zhat[0] = uz;
    zhat.segment(1, N) = zeta0;
    zhat[L - 1] = uz;
  } else if (amb.epsilon > 0) {
    zhat.segment(1, N) = zeta0;
  } else {
    zhat.segment(0, N) = zeta0;
  }
  const double scale = P.eps_n * P.Hjet.value() * std::exp(-P.tau.value());
  out.xi = {VectorXd(scale * out.Y + zhat)};
  return out;
}

}  // namespace

PointFrame fundamental_forms(const ImmersionSpec& spec, const VectorXd& point) {
  return frame_from_pipe(build_pipe(spec, point, false));
}

double scalar_curvature(const PointFrame& pf, const AmbientSpec& ambient) {
  const int m = static_cast<int>(pf.I.rows());
  return m * (m - 1.0) * ambient.epsilon + m * m * pf.norm_H2 - pf.norm_II;
}

std::pair<double, int> conformal_factor(const PointFrame& pf) {
  const int m = static_cast<int>(pf.I.rows());
  if (m < 2) throw DomainError("conformal_factor: needs m >= 2");
  const double X = pf.norm_II - m * pf.norm_H2;
  if (std::abs(X) < kRegularityThreshold)
    throw NotRegular("conformal_factor: |II|^2 - m|H|^2 vanishes");
  const int sign = X > 0 ? 1 : -1;
  const double tau = 0.5 * std::log((static_cast<double>(m) / (m - 1.0)) * sign * X);
  return {tau, sign};
}

ConformalData conformal_tensors(const ImmersionSpec& spec, const VectorXd& point) {
  return tensors_from_pipe(build_pipe(spec, point, true));
}

FrameLift frame_lift(const ImmersionSpec& spec, const VectorXd& point) {
  return lift_from_pipe(build_pipe(spec, point, true), spec.ambient);
}

PointAnalysis analyze_point(const ImmersionSpec& spec, const VectorXd& point) {
  Pipe P = build_pipe(spec, point, true);
  return {tensors_from_pipe(P), lift_from_pipe(P, spec.ambient)};
}

double conformal_metric_curvature(const ImmersionSpec& spec, const VectorXd& point) {
  Pipe P = build_pipe(spec, point, true);
  return curvature_from_jets(P.g, P.ginv).max_abs;
}

std::map<std::string, double> identity_residuals(const ConformalData& cd) {
  const int m = cd.m;
  std::map<std::string, double> out;
  const MatrixXd& Br = cd.B_raised[0];
  out["trace_B"] = std::abs(Br.trace());
  out["norm_B"] = std::abs((Br * Br).trace() - (m - 1.0) / m);
  const double target = (1.0 / (2.0 * m)) * ((static_cast<double>(m) / (m - 1.0)) * cd.rho_intrinsic +
                                             cd.sign_choice);
  out["trace_A"] = std::abs(cd.A_raised.trace() - target);
  return out;
}

namespace {

/// Conformal data on an integer half-step stencil around a center point.
struct StencilEval {
  const ImmersionSpec& spec;
  VectorXd center;
  double h;
  std::map<std::array<int, 4>, ConformalData> cache;

  const ConformalData& at(const std::array<int, 4>& off) {
    auto it = cache.find(off);
    if (it != cache.end()) return it->second;
    VectorXd p = center;
    for (int i = 0; i < spec.m; ++i) {
      p[i] += 0.5 * h * off[i];
      if (p[i] < spec.domain[i][0] || p[i] > spec.domain[i][1])
        throw StencilLeftDomain("integrability: finite-difference stencil leaves the domain");
    }
    return cache.emplace(off, conformal_tensors(spec, p)).first->second;
  }
};

/// Central difference with one Richardson level along one axis.
template <class Field>
double richardson(StencilEval& E, int axis, Field field) {
  std::array<int, 4> o{0, 0, 0, 0};
  o[axis] = 1;
  const double f1 = field(E.at(o));
  o[axis] = -1;
  const double fm1 = field(E.at(o));
  o[axis] = 2;
  const double f2 = field(E.at(o));
  o[axis] = -2;
  const double fm2 = field(E.at(o));
  return (8.0 * (f1 - fm1) - (f2 - fm2)) / (6.0 * E.h);
}

}  // namespace

std::map<std::string, double> integrability_residuals(const ImmersionSpec& spec,
                                                      const VectorXd& point, double step) {
  const int m = spec.m;
  StencilEval E{spec, point, step, {}};
  const ConformalData cd = E.at({0, 0, 0, 0});
  const MatrixXd& g0 = cd.g;
  const MatrixXd& gi = cd.g_inv;
  const MatrixXd& A = cd.A;
  const MatrixXd& B = cd.B[0];
  const VectorXd& C = cd.C[0];
  const auto& G = cd.christoffels_g;
  const double en = cd.eps_normal;

  // Partial derivatives of the tensor fields.
  std::vector<MatrixXd> dA(m, MatrixXd(m, m)), dB(m, MatrixXd(m, m));
  std::vector<VectorXd> dC(m, VectorXd(m));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i) {
      dC[k][i] = richardson(E, k, [&](const ConformalData& c) { return c.C[0][i]; });
      for (int j = 0; j < m; ++j) {
        dA[k](i, j) = richardson(E, k, [&](const ConformalData& c) { return c.A(i, j); });
        dB[k](i, j) = richardson(E, k, [&](const ConformalData& c) { return c.B[0](i, j); });
      }
    }

  auto covA = [&](int i, int j, int k) {
    double v = dA[k](i, j);
    for (int l = 0; l < m; ++l) v -= G[l](k, i) * A(l, j) + G[l](k, j) * A(i, l);
    return v;
  };
  auto covB = [&](int i, int j, int k) {
    double v = dB[k](i, j);
    for (int l = 0; l < m; ++l) v -= G[l](k, i) * B(l, j) + G[l](k, j) * B(i, l);
    return v;
  };
  auto covC = [&](int i, int j) {
    double v = dC[j][i];
    for (int l = 0; l < m; ++l) v -= G[l](j, i) * C[l];
    return v;
  };

  // Curvature of g from finite differences of its Christoffels.
  std::vector<std::vector<MatrixXd>> dG(m, std::vector<MatrixXd>(m, MatrixXd(m, m)));
  for (int k = 0; k < m; ++k)
    for (int up = 0; up < m; ++up)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          dG[k][up](i, j) =
              richardson(E, k, [&](const ConformalData& c) { return c.christoffels_g[up](i, j); });
  auto R_low = [&](int i, int j, int k, int l) {
    double v = 0.0;
    for (int p = 0; p < m; ++p) {
      double rup = dG[k][p](l, j) - dG[l][p](k, j);
      for (int q = 0; q < m; ++q) rup += G[p](k, q) * G[q](l, j) - G[p](l, q) * G[q](k, j);
      v += g0(i, p) * rup;
    }
    return v;
  };

  std::map<std::string, double> out{{"codazzi_B", 0.0}, {"codazzi_A", 0.0},
                                    {"ricci_C", 0.0},   {"gauss", 0.0},
                                    {"trace_codazzi", 0.0}};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const double rB = covB(i, j, k) - covB(i, k, j) - (g0(i, j) * C[k] - g0(i, k) * C[j]);
        out["codazzi_B"] = std::max(out["codazzi_B"], std::abs(rB));
        const double rA = covA(i, j, k) - covA(i, k, j) + en * (B(i, j) * C[k] - B(i, k) * C[j]);
        out["codazzi_A"] = std::max(out["codazzi_A"], std::abs(rA));
      }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double rhs = 0.0;
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) rhs += gi(k, l) * (B(i, k) * A(l, j) - B(j, k) * A(l, i));
      const double r = covC(i, j) - covC(j, i) - rhs;
      out["ricci_C"] = std::max(out["ricci_C"], std::abs(r));
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          const double rhs = en * (B(i, k) * B(j, l) - B(i, l) * B(j, k)) +
                             (g0(i, k) * A(j, l) - g0(i, l) * A(j, k)) +
                             (A(i, k) * g0(j, l) - A(i, l) * g0(j, k));
          const double r = R_low(i, j, k, l) - rhs;
          out["gauss"] = std::max(out["gauss"], std::abs(r));
        }
  for (int i = 0; i < m; ++i) {
    double div = 0.0;
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) div += gi(j, k) * covB(i, j, k);
    out["trace_codazzi"] = std::max(out["trace_codazzi"], std::abs((1.0 - m) * C[i] - div));
  }
  return out;
}

CurvatureCheck scalar_curvature_check(const ImmersionSpec& spec, const VectorXd& point,
                                      double step) {
  const int m = spec.m;
  // Christoffels of the induced metric on a half-step stencil.
  std::map<std::array<int, 4>, PointFrame> cache;
  auto at = [&](const std::array<int, 4>& off) -> const PointFrame& {
    auto it = cache.find(off);
    if (it != cache.end()) return it->second;
    VectorXd p = point;
    for (int i = 0; i < m; ++i) {
      p[i] += 0.5 * step * off[i];
      if (p[i] < spec.domain[i][0] || p[i] > spec.domain[i][1])
        throw StencilLeftDomain("scalar_curvature_check: stencil leaves the domain");
    }
    return cache.emplace(off, fundamental_forms(spec, p)).first->second;
  };
  const PointFrame& pf0 = at({0, 0, 0, 0});
  auto rich = [&](int axis, auto field) {
    std::array<int, 4> o{0, 0, 0, 0};
    o[axis] = 1;
    const double f1 = field(at(o));
    o[axis] = -1;
    const double fm1 = field(at(o));
    o[axis] = 2;
    const double f2 = field(at(o));
    o[axis] = -2;
    const double fm2 = field(at(o));
    return (8.0 * (f1 - fm1) - (f2 - fm2)) / (6.0 * step);
  };
  double scalar = 0.0;
  for (int j = 0; j < m; ++j)
    for (int l = 0; l < m; ++l) {
      double ric = 0.0;
      for (int k = 0; k < m; ++k) {
        double rup = rich(k, [&](const PointFrame& f) { return f.christoffels[k](l, j); });
        // d_k Gamma^k_{lj} - d_l Gamma^k_{kj} + Gamma^k_{kp}Gamma^p_{lj} - Gamma^k_{lp}Gamma^p_{kj}
        rup -= rich(l, [&](const PointFrame& f) { return f.christoffels[k](k, j); });
        for (int p = 0; p < m; ++p)
          rup += pf0.christoffels[k](k, p) * pf0.christoffels[p](l, j) -
                 pf0.christoffels[k](l, p) * pf0.christoffels[p](k, j);
        ric += rup;
      }
      scalar += pf0.I_inv(j, l) * ric;
    }
  CurvatureCheck out;
  out.extrinsic = scalar_curvature(pf0, spec.ambient);
  out.intrinsic = scalar;
  out.discrepancy = std::abs(out.extrinsic - out.intrinsic);
  return out;
}

}  // namespace confgeo
