#pragma once

#include <Eigen/Dense>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "confgeo/invariants.hpp"

namespace confgeo {

enum class SpaceFormCase { Flat, Spherical, Hyperbolic, Indeterminate };

const char* space_form_name(SpaceFormCase c);

struct ClassifyOptions {
  int samples = 25;
  double conformal_tol = 1e-7;
  double fit_tol = 1e-6;
  double c_tol = 1e-5;
};

struct FitResult {
  double lambda = 0.0, mu = 0.0;
  double residual = 0.0;  // max Frobenius residual of A - lambda Id - mu B over samples
  double lambda_stddev = 0.0, mu_stddev = 0.0;
  std::vector<double> lambda_per, mu_per;
};

struct CVectorResult {
  Eigen::VectorXd c;
  double constancy = 0.0;        // max deviation of per-sample c from the mean
  double c_dot_Y_residual = 0.0; // max |<c,Y> - 1|
  double c_dot_xi_mean = 0.0;
  double c_norm = 0.0;           // <c,c>
};

struct ClassificationResult {
  bool regular = false;
  bool conformal = false;
  bool para_umbilical = false;
  double lambda = 0.0, mu = 0.0;
  double lambda_stddev = 0.0, mu_stddev = 0.0;
  Eigen::VectorXd c_vec;
  double c_norm = 0.0;
  SpaceFormCase space_form_case = SpaceFormCase::Indeterminate;
  std::map<std::string, double> residuals;
  double eps_normal = 1.0;
  int sign_choice = 1;
  double H_mean = 0.0, H_stddev = 0.0;
  // Both mean-curvature/mu conventions, reported rather than chosen:
  double mu_minus_eps_emtau_H = 0.0;  // mu - eps_n e^{-tau} H
  double mu_minus_eps_eptau_H = 0.0;  // mu - eps_n e^{+tau} H
  double H_plus_mu_sq = 0.0;          // H + mu^2
  double lambda_two_route_residual = 0.0;
  std::string failure;  // set when not regular
};

/// True iff max |C^a_i| over all samples is below tol. Throws on empty input.
bool is_conformal(std::span<const ConformalData> samples, double tol);

/// Least-squares fit of the index-raised Blaschke tensor onto {Id, B} per
/// sample; exact projections since tr B = 0. Throws NotConformal when the
/// conformal form is not negligible.
FitResult fit_para_umbilical(std::span<const ConformalData> samples, double tol);

/// Constant vector with N = lambda Y - eps_n mu xi + ... resolved per sample as
/// c = N - lambda Y + eps_n mu xi; reports the constancy defect and pairings.
CVectorResult build_c_vector(std::span<const PointAnalysis> samples, double lambda, double mu);

/// Case decision by the sign of <c,c>, cross-checked against -2 lambda + eps_n mu^2.
SpaceFormCase locate_space_form(double c_norm, double lambda, double mu, double eps_normal,
                                double tol);

ClassificationResult classify_surface(const ImmersionSpec& spec, const ClassifyOptions& opts = {});

}  // namespace confgeo
