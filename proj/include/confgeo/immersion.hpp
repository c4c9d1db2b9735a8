#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "confgeo/expr.hpp"
#include "confgeo/pseudolinalg.hpp"

namespace confgeo {

/// Target geometry of an immersion: a space form of curvature epsilon sitting
/// in a flat pseudo-Euclidean container. R^n_s is its own container; S^n_s
/// lives in R^{n+1}_s as <u,u> = r^2; H^n_s lives in R^{n+1}_{s+1} as <u,u> = -r^2.
struct AmbientSpec {
  int epsilon = 0;       // -1, 0, +1
  int space_dim = 0;     // n
  int space_index = 0;   // s
  double radius = 1.0;
  Signature container;   // flat container of the space form

  static AmbientSpec make(char space, int n, int s, double radius = 1.0);
};

struct ImmersionSpec {
  int m = 0;                                   // intrinsic dimension
  std::vector<std::string> param_names;
  std::vector<ExprPtr> components;             // one per container coordinate
  AmbientSpec ambient;
  std::vector<std::array<double, 2>> domain;   // per-parameter интервалы; default [-1,1]
  int expected_index = -1;                     // index of the induced metric, -1 = unset
  Eigen::MatrixXd linear_map;                  // optional post-map (0x0 = identity)
  std::string name;
};

/// Parses one spec in the DSL grammar. Errors carry line/column positions.
ImmersionSpec parse(const std::string& text);

/// Pretty-prints a spec so that parse(print(s)) reproduces the AST.
std::string print(const ImmersionSpec& spec);

/// Order-4 jets of every container coordinate at the given parameter point.
/// Checks the point against the declared domain and, for curved targets, the
/// space-form constraint <u,u> = eps * r^2.
std::vector<Jet> evaluate(const ImmersionSpec& spec, const Eigen::VectorXd& point);

struct CatalogEntry {
  std::string name;
  std::string description;
  std::string constraints;
  std::map<std::string, double> defaults;
};

const std::vector<CatalogEntry>& catalog_entries();

/// Builds a registered surface. Unknown names throw UnknownSurface; bad
/// parameters throw InvalidParam.
ImmersionSpec catalog(const std::string& name, const std::map<std::string, double>& params = {});

/// Composes a constant isometry of the flat container with the immersion.
ImmersionSpec apply_isometry(const ImmersionSpec& spec, const Eigen::MatrixXd& T);

/// Applies a conformal transformation: lifts to the light cone of the ambient
/// conformal space, applies T in O(n-s+1, s+1), and re-charts through the flat
/// space form. The result is an immersion into R^n_s with rational components.
ImmersionSpec conformal_image(const ImmersionSpec& spec, const Eigen::MatrixXd& T);

/// Parameter substitution u_i -> scale_i * u_i + offset_i (domain transformed).
ImmersionSpec reparametrize_affine(const ImmersionSpec& spec, const Eigen::VectorXd& scale,
                                   const Eigen::VectorXd& offset);

/// Signature of the conformal container R^{n+2}_{s+1} the canonical lift lives in.
Signature lift_signature(const AmbientSpec& amb);

/// Uniform grid strictly inside the domain (10% margin per side), about
/// `target` points total: per-axis count ceil(target^(1/m)).
std::vector<Eigen::VectorXd> interior_grid(const ImmersionSpec& spec, int target);

/// Random element of O(signature) from the identity component, exp of a small
/// Lie-algebra generator with entries ~ U(-magnitude, magnitude).
Eigen::MatrixXd random_signature_orthogonal(const Signature& sig, std::mt19937_64& rng,
                                            double magnitude = 0.15);

}  // namespace confgeo
