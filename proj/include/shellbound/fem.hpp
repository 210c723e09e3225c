#pragma once

// P1 finite elements for the Robin-Neumann quotient on a perforated mesh.
//
// Every continuous piecewise-linear field is admissible in the continuous
// problems, so the discrete eigenvalue bounds lambda(beta, Sigma) from above and
// the discrete torsion bounds T(beta, Sigma) from below (up to the reported
// quadrature slack for non-polynomial integrands).

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

#include "shellbound/mesh.hpp"
#include "shellbound/radial.hpp"

namespace shellbound {

/// One value per mesh vertex, continuous and piecewise linear.
using ScalarField = Eigen::VectorXd;

/// The three integrals appearing in the quotients.
struct QuotientTerms {
  double gradient = 0;  // int_Sigma |grad u|^p
  double boundary = 0;  // int_{dD} |u|^p
  double power = 0;     // int_Sigma |u|^q
  double l1 = 0;        // int_Sigma |u|
};

/// Edge integrals use the closed-form antiderivative of |x|^p (16-point Gauss when the
/// endpoint values nearly coincide); area integrals use the degree-8 triangle rule,
/// optionally on `subdivisions`^2 congruent sub-triangles.
QuotientTerms assemble_terms(const Mesh& mesh, double p, const ScalarField& field, double q_exponent,
                             int subdivisions = 1);

/// [int |grad u|^p + beta int_{dD} |u|^p] / (int |u|^q)^{p/q}
double assemble_quotient(const Mesh& mesh, double p, double beta, const ScalarField& field, double q_exponent);
inline double assemble_quotient(const Mesh& mesh, double p, double beta, const ScalarField& field) {
  return assemble_quotient(mesh, p, beta, field, p);
}

/// (int |u|)^p / [int |grad u|^p + beta int_{dD} |u|^p]
double torsion_quotient(const Mesh& mesh, double p, double beta, const ScalarField& field);

/// int_{dD} |u|^p / int_Sigma |u|^p, the beta-derivative of the eigenvalue at an eigenfield.
double mesh_beta_derivative(const Mesh& mesh, double p, const ScalarField& field);

struct FemOptions {
  double tol = 1e-8;          // relative quotient change for nonlinear solves
  int max_iterations = 10000;
  double residual_tol = 1e-11;  // p = 2 eigen solves: ||A u - lambda M u|| / ||lambda M u||
};

struct MeshEigenResult {
  double lambda = 0;
  double beta = 0;
  double p = 2;
  double q_exponent = 2;
  ScalarField field;
  double residual = 0;          // weak-form residual (p = 2) or last relative quotient change
  double quadrature_slack = 0;  // |quotient(refined quadrature) - quotient|
  int iterations = 0;
  std::vector<double> trace;    // quotient after every accepted iteration
  BoundDirection bound_direction = BoundDirection::upper_bound_discrete;
};

struct MeshTorsionResult {
  double T = 0;
  double beta = 0;
  double p = 2;
  ScalarField field;
  double quadrature_slack = 0;
  int iterations = 0;
  std::vector<double> trace;    // energy after every accepted iteration
  BoundDirection bound_direction = BoundDirection::lower_bound_discrete;
};

MeshEigenResult minimize_eigen(const Mesh& mesh, double p, double beta, double q_exponent,
                               const FemOptions& options = {});
inline MeshEigenResult minimize_eigen(const Mesh& mesh, double p, double beta) {
  return minimize_eigen(mesh, p, beta, p);
}

/// Discrete Dirichlet-Neumann eigenvalue: the field is frozen to zero on the hole boundary.
MeshEigenResult dirichlet_neumann_eigen(const Mesh& mesh, double p, const FemOptions& options = {});

MeshTorsionResult maximize_torsion(const Mesh& mesh, double p, double beta, const FemOptions& options = {});

struct TrivialBounds {
  double constant_field = 0;     // beta P(D) / |Sigma|
  double dirichlet_neumann = 0;  // Lambda_mesh
};

TrivialBounds trivial_bounds(const Mesh& mesh, double p, double beta, const FemOptions& options = {});

/// Length of the hole boundary as represented by the mesh.
double inner_boundary_length(const Mesh& mesh);

}  // namespace shellbound
