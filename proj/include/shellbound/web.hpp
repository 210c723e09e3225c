#pragma once

// Web test functions w(x) = psi(R1 + d(x)) transplanted from the shell onto a
// perforated domain, and a level-by-level check of the comparison chain
//
//   H^{n-1}({w = t}) <= P(D + rho B) <= P(B_{R1 + rho}),   rho = G^{-1}(t),
//   mu(t) = |{w < t}| <= eta(t) = |B_{R1 + rho}| - |B_{R1}|,
//   int |grad w|^p <= int_A |grad v|^p,  int_{dD} w^p <= int_{dB_R1} v^p,
//   int w^p >= int_A v^p,
//
// which together bound the quotient of w by the shell value.

#include <string>
#include <vector>

#include "shellbound/fem.hpp"

namespace shellbound {

enum class ChainKind { eigen, torsion };

/// One compared pair. For `lhs <= rhs` checks the margin is rhs - lhs; for `lhs >= rhs`
/// it is lhs - rhs. The check passes when margin >= -slack.
struct ChainCheck {
  std::string name;
  std::string relation;  // "<=" or ">="
  double lhs = 0;
  double rhs = 0;
  double slack = 0;
  double margin = 0;
  bool pass = false;
};

/// Relative slack per unit of h / (R2 - R1). The worst ratio seen on inscribed-polygon
/// shells (N = ceil(2 pi R / h), p in {1.5, 2, 3}, h / width in [0.05, 0.2]) was 0.35.
inline constexpr double kWebSlackConstant = 0.4;

struct WebChainReport {
  ChainKind kind = ChainKind::eigen;
  double p = 2;
  double beta = 1;
  double h = 0;
  ShellSpecd shell;
  double v_min = 0;
  double v_max = 0;

  std::vector<double> t_grid;
  std::vector<double> g;
  std::vector<double> rho;
  std::vector<double> live_perimeter;
  std::vector<double> steiner_perimeter;
  std::vector<double> shell_perimeter;
  std::vector<double> mu;
  std::vector<double> eta;

  double gradient_lhs = 0;  // int_Sigma |grad w|^p on the mesh
  double gradient_mid = 0;  // int g^{p-1} P(D + G^{-1}(t) B) dt
  double gradient_rhs = 0;  // int_A |grad v|^p
  double boundary_lhs = 0;
  double boundary_rhs = 0;
  double lp_lhs = 0;        // int_Sigma w^p (eigen) or int_Sigma w (torsion)
  double lp_rhs = 0;
  double final_quotient = 0;
  double shell_value = 0;   // lambda(beta, A) or T(beta, A)
  double plateau_area = 0;  // |{w = v_M}|
  double inverse_width = 0; // int_{v_m}^{v_M} dt / g(t), equals R2 - R1

  double slack_constant = kWebSlackConstant;
  std::vector<ChainCheck> checks;

  bool ok() const;
  /// Most negative margin + slack over all checks (>= 0 when every check passes).
  double worst_excess() const;
};

/// w at every mesh vertex: psi(R1 + d) below the shell width, v_M beyond, v_m on the hole.
ScalarField build_web_field(const DomainSpec& domain, const RadialProfile& profile, const Mesh& mesh);

/// Quotient of the web field (eigen quotient; delegates to assemble_quotient).
double web_quotient(const Mesh& mesh, const ScalarField& w, double p, double beta);

/// Length of {w = t} inside the mesh and area of {w < t} for a P1 field.
struct LevelSetMeasure {
  double length = 0;
  double sublevel_area = 0;
};

LevelSetMeasure measure_level_set(const Mesh& mesh, const ScalarField& w, double t);

/// int_{v_m}^{v_M} dt / g(t), by quadrature in t.
double inverse_level_width(const RadialProfile& profile);

struct ChainOptions {
  int t_count = 64;
  double slack_constant = kWebSlackConstant;
};

/// `profile` must belong to the matched shell: the eigen profile for ChainKind::eigen
/// (with `shell_value` = lambda(beta, A)), the torsion profile for ChainKind::torsion
/// (with `shell_value` = T(beta, A)).
WebChainReport verify_chain(const DomainSpec& domain, const RadialProfile& profile, const Mesh& mesh, ChainKind kind,
                            double beta, double shell_value, const ChainOptions& options = {});

}  // namespace shellbound
