#pragma once

// First Robin-Neumann eigenvalue, p-torsion function and Dirichlet-Neumann
// eigenvalue of the p-Laplacian on a spherical shell, reduced to the radial ODE
//
//   -(r^{n-1} q)' = r^{n-1} f,   q = |psi'|^{p-2} psi',
//
// with f = lambda psi^{p-1} (eigenproblem) or f = 1 (torsion), q(R1) = beta psi(R1)^{p-1}
// and q(R2) = 0. The domain normal on the inner sphere points toward the origin, so
// the Robin condition on the hole reads -q(R1) + beta psi(R1)^{p-1} = 0.

#include <Eigen/Dense>

#include <functional>
#include <utility>
#include <vector>

#include "shellbound/geometry.hpp"

namespace shellbound {

enum class BoundDirection { exact_radial, upper_bound_discrete, lower_bound_discrete };

const char* to_string(BoundDirection d);

/// sign(x) |x|^e
inline double signed_pow(double x, double e) { return x >= 0 ? std::pow(x, e) : -std::pow(-x, e); }

/// Radial function psi on a uniform grid of [R1, R2] together with its flux
/// q = |psi'|^{p-2} psi' and the flux derivative q'. The flux is a cubic Hermite
/// interpolant; psi between nodes is the integral of the slope q^{1/(p-1)}, so that
/// value' = slope holds to quadrature accuracy. The top deficit v_M - psi is kept
/// separately because psi is flat to rounding near R2 when p < 2.
struct RadialProfile {
  ShellSpecd shell;
  double p = 2;
  Eigen::VectorXd r;
  Eigen::VectorXd psi;
  Eigen::VectorXd q;
  Eigen::VectorXd dq;
  Eigen::VectorXd deficit;  // v_M - psi(r_i), accumulated from R2

  Eigen::Index intervals() const { return r.size() - 1; }
  double step() const { return (shell.R2 - shell.R1) / static_cast<double>(intervals()); }
  double v_min() const { return psi(0); }
  double v_max() const { return psi(psi.size() - 1); }

  /// psi'(r_i)
  double slope_at(Eigen::Index i) const { return signed_pow(q(i), 1.0 / (p - 1)); }

  double value(double radius) const;
  double slope(double radius) const;
  double flux(double radius) const;
  /// v_M - psi(radius) without cancellation.
  double deficit_at(double radius) const;
  /// Radius where psi = t, for t in [v_min, v_max].
  double inverse(double t) const;
  /// Radius where v_M - psi = tau, for tau in [0, v_max - v_min].
  double inverse_deficit(double tau) const;
};

/// Rebuilds psi (from psi(0)) and deficit by integrating the slope of the stored flux.
/// Requires q(R2) = 0 and q > 0 elsewhere.
void integrate_profile(RadialProfile& profile);

/// Checks of the structural properties a converged eigen profile must have.
struct ProfileCheck {
  bool strictly_increasing = false;
  bool weighted_flux_decreasing = false;
  double min_increment = 0;
};

ProfileCheck check_profile(const RadialProfile& profile);

struct RadialOptions {
  int initial_steps = 4096;
  int max_steps = 1 << 18;
  double tol = 1e-10;
  int scan_points = 64;
};

struct RadialEigenResult {
  double lambda = 0;
  double beta = 0;  // +inf for the Dirichlet-Neumann problem
  RadialProfile profile;
  double residual = 0;  // |q(R2)| relative to the boundary flux scale
  BoundDirection bound_direction = BoundDirection::exact_radial;
  int steps = 0;
  std::vector<std::pair<double, double>> scan;  // (lambda, weighted terminal flux)
};

struct RadialTorsionResult {
  double T = 0;
  double beta = 0;
  RadialProfile profile;
  BoundDirection bound_direction = BoundDirection::exact_radial;
};

/// beta P(B_{R1}) / |A|, the value of the quotient at constant functions.
double constant_field_bound(const ShellSpecd& shell, double beta);

RadialEigenResult solve_radial_eigen(const ShellSpecd& shell, double p, double beta, const RadialOptions& options = {});

RadialEigenResult radial_dirichlet_neumann(const ShellSpecd& shell, double p, const RadialOptions& options = {});

RadialTorsionResult solve_radial_torsion(const ShellSpecd& shell, double p, double beta, double tol = 1e-10,
                                         int grid_steps = 4096);

/// g(t) = |Dv| on the level set {v = t}.
double level_speed(const RadialProfile& profile, double t);

/// G^{-1}(t) = psi^{-1}(t) - R1, the distance from the inner sphere at which psi reaches t.
double level_distance(const RadialProfile& profile, double t);

/// P(B_{R1}) psi(R1)^p / int_A psi^p dx.
double eigen_beta_derivative(const RadialProfile& profile);

/// Integrals of a radial profile over the shell (full measure, including n omega_n).
struct RadialIntegrals {
  double gradient = 0;  // int_A |psi'|^p
  double boundary = 0;  // int_{dB_R1} psi^p
  double power = 0;     // int_A |psi|^q_exponent
  double mass = 0;      // int_A psi
};

RadialIntegrals radial_integrals(const RadialProfile& profile, double q_exponent);

using RadialFunction = std::function<double(double)>;

/// Rayleigh quotient of the radial test function phi on the shell.
double radial_rayleigh_quotient(const ShellSpecd& shell, double p, double beta, const RadialFunction& phi,
                                const RadialFunction& dphi, double tol = 1e-12);

/// Torsion quotient (int |phi|)^p / (int |phi'|^p + beta int_{dB_R1} |phi|^p) of a radial test function.
double radial_torsion_quotient(const ShellSpecd& shell, double p, double beta, const RadialFunction& phi,
                               const RadialFunction& dphi, double tol = 1e-12);

}  // namespace shellbound
