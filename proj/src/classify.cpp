#include "confgeo/classify.hpp"

#include <cmath>
#include <numeric>

namespace confgeo {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* space_form_name(SpaceFormCase c) {
  switch (c) {
    case SpaceFormCase::Flat: return "Flat";
    case SpaceFormCase::Spherical: return "Spherical";
    case SpaceFormCase::Hyperbolic: return "Hyperbolic";
    case SpaceFormCase::Indeterminate: return "Indeterminate";
  }
  return "?";
}

namespace {

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double stddev(const std::vector<double>& v) {
  const double mu = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - mu) * (x - mu);
  return std::sqrt(acc / v.size());
}

}  // namespace

bool is_conformal(std::span<const ConformalData> samples, double tol) {
  if (samples.empty()) throw DomainError("is_conformal: no samples");
  double worst = 0.0;
  for (const auto& cd : samples)
    for (const auto& C : cd.C) worst = std::max(worst, C.cwiseAbs().maxCoeff());
  return worst < tol;
}

FitResult fit_para_umbilical(std::span<const ConformalData> samples, double tol) {
  if (samples.empty()) throw DomainError("fit_para_umbilical: no samples");
  if (samples[0].m < 2) throw DomainError("fit_para_umbilical: needs m >= 2");
  if (!is_conformal(samples, tol))
    throw NotConformal("fit_para_umbilical: conformal form is not negligible");
  FitResult out;
  for (const auto& cd : samples) {
    const MatrixXd& A = cd.A_raised;
    const MatrixXd& B = cd.B_raised[0];
    const int m = cd.m;
    const double lambda = A.trace() / m;
    const double bb = B.cwiseProduct(B).sum();
    const double mu = A.cwiseProduct(B).sum() / bb;
    const MatrixXd R = A - lambda * MatrixXd::Identity(m, m) - mu * B;
    out.lambda_per.push_back(lambda);
    out.mu_per.push_back(mu);
    out.residual = std::max(out.residual, R.norm());
  }
  out.lambda = mean(out.lambda_per);
  out.mu = mean(out.mu_per);
  out.lambda_stddev = stddev(out.lambda_per);
  out.mu_stddev = stddev(out.mu_per);
  return out;
}

CVectorResult build_c_vector(std::span<const PointAnalysis> samples, double lambda, double mu) {
  if (samples.empty()) throw DomainError("build_c_vector: no samples");
  const Signature lsig = samples[0].lift.lift_sig;
  std::vector<VectorXd> cs;
  CVectorResult out;
  double xi_acc = 0.0;
  for (const auto& pa : samples) {
    const FrameLift& fl = pa.lift;
    const double en = pa.cd.eps_normal;
    const VectorXd c = fl.N_vec - lambda * fl.Y + en * mu * fl.xi[0];
    cs.push_back(c);
    out.c_dot_Y_residual = std::max(out.c_dot_Y_residual, std::abs(inner(c, fl.Y, lsig) - 1.0));
    xi_acc += inner(c, fl.xi[0], lsig);
  }
  VectorXd meanc = VectorXd::Zero(lsig.dim);
  for (const auto& c : cs) meanc += c;
  meanc /= static_cast<double>(cs.size());
  for (const auto& c : cs)
    out.constancy = std::max(out.constancy, (c - meanc).cwiseAbs().maxCoeff());
  out.c = meanc;
  out.c_dot_xi_mean = xi_acc / cs.size();
  out.c_norm = inner(meanc, meanc, lsig);
  return out;
}

SpaceFormCase locate_space_form(double c_norm, double lambda, double mu, double eps_normal,
                                double tol) {
  const double predicted = -2.0 * lambda + eps_normal * mu * mu;
  const bool cross_ok = std::abs(c_norm - predicted) <= tol;
  if (std::abs(c_norm) < tol) {
    if (!cross_ok) return SpaceFormCase::Indeterminate;
    return SpaceFormCase::Flat;
  }
  return c_norm < 0 ? SpaceFormCase::Spherical : SpaceFormCase::Hyperbolic;
}

ClassificationResult classify_surface(const ImmersionSpec& spec, const ClassifyOptions& opts) {
  ClassificationResult res;
  const auto points = interior_grid(spec, opts.samples);
  std::vector<PointAnalysis> analyses;
  std::vector<ConformalData> cds;
  try {
    for (const auto& p : points) {
      analyses.push_back(analyze_point(spec, p));
      cds.push_back(analyses.back().cd);
    }
  } catch (const NotRegular& e) {
    res.regular = false;
    res.failure = e.what();
    return res;
  } catch (const NullNormal& e) {
    res.regular = false;
    res.failure = e.what();
    return res;
  } catch (const DegenerateMetric& e) {
    res.regular = false;
    res.failure = e.what();
    return res;
  }
  res.regular = true;
  res.eps_normal = cds[0].eps_normal;
  res.sign_choice = cds[0].sign_choice;

  double maxC = 0.0, max_id = 0.0;
  std::vector<double> Hs, taus;
  for (const auto& cd : cds) {
    for (const auto& C : cd.C) maxC = std::max(maxC, C.cwiseAbs().maxCoeff());
    for (const auto& [k, v] : identity_residuals(cd)) max_id = std::max(max_id, v);
    Hs.push_back(cd.H);
    taus.push_back(cd.tau);
  }
  res.residuals["conformal_form_max"] = maxC;
  res.residuals["identity_max"] = max_id;
  res.H_mean = mean(Hs);
  res.H_stddev = stddev(Hs);
  res.conformal = maxC < opts.conformal_tol;
  if (!res.conformal) return res;

  const FitResult fit = fit_para_umbilical(cds, opts.conformal_tol);
  res.lambda = fit.lambda;
  res.mu = fit.mu;
  res.lambda_stddev = fit.lambda_stddev;
  res.mu_stddev = fit.mu_stddev;
  res.residuals["fit_residual"] = fit.residual;
  res.para_umbilical = fit.residual < opts.fit_tol && fit.lambda_stddev < opts.fit_tol &&
                       fit.mu_stddev < opts.fit_tol;
  if (!res.para_umbilical) return res;

  const CVectorResult cv = build_c_vector(analyses, fit.lambda, fit.mu);
  res.c_vec = cv.c;
  res.c_norm = cv.c_norm;
  res.residuals["c_constancy"] = cv.constancy;
  res.residuals["c_dot_Y"] = cv.c_dot_Y_residual;
  res.residuals["c_dot_xi_minus_mu"] = std::abs(cv.c_dot_xi_mean - fit.mu);
  res.space_form_case = locate_space_form(cv.c_norm, fit.lambda, fit.mu, res.eps_normal, opts.c_tol);

  // Convention bookkeeping: both exponents and the quadratic relation.
  const double tau0 = mean(taus);
  res.mu_minus_eps_emtau_H = fit.mu - res.eps_normal * std::exp(-tau0) * res.H_mean;
  res.mu_minus_eps_eptau_H = fit.mu - res.eps_normal * std::exp(tau0) * res.H_mean;
  res.H_plus_mu_sq = res.H_mean + fit.mu * fit.mu;

  // Second route to lambda through the scalar curvature of g.
  double lam2_max = 0.0;
  for (const auto& cd : cds) {
    const int m = cd.m;
    const double lam2 =
        (1.0 / m) * (cd.rho_intrinsic / (2.0 * (m - 1.0)) + cd.sign_choice / (2.0 * m));
    lam2_max = std::max(lam2_max, std::abs(lam2 - fit.lambda));
  }
  res.lambda_two_route_residual = lam2_max;
  res.residuals["lambda_two_route"] = lam2_max;
  return res;
}

}  // namespace confgeo
