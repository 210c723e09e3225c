#include "shellbound/web.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shellbound/errors.hpp"
#include "shellbound/quadrature.hpp"

namespace shellbound {

bool WebChainReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const ChainCheck& c) { return c.pass; });
}

double WebChainReport::worst_excess() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : checks) worst = std::min(worst, c.margin + c.slack);
  return worst;
}

namespace {

void require_matched(const DomainSpec& domain, const RadialProfile& profile) {
  const auto shell = match_shell(quermassintegrals(domain.hole()), domain.area());
  const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(b)); };
  if (profile.shell.n != 2 || !close(profile.shell.R1, shell.R1) || !close(profile.shell.R2, shell.R2))
    throw ValidationError("web field: profile shell (" + std::to_string(profile.shell.R1) + ", " +
                          std::to_string(profile.shell.R2) + ") is not the shell matched to the domain (" +
                          std::to_string(shell.R1) + ", " + std::to_string(shell.R2) + ")");
}

ChainCheck make_check(std::string name, const std::string& relation, double lhs, double rhs, double rel_slack) {
  ChainCheck c;
  c.name = std::move(name);
  c.relation = relation;
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = rel_slack * std::max(std::abs(lhs), std::abs(rhs));
  if (relation == "<=")
    c.margin = rhs - lhs;
  else if (relation == ">=")
    c.margin = lhs - rhs;
  else
    c.margin = -std::abs(lhs - rhs);
  c.pass = c.margin >= -c.slack;
  return c;
}

// Worst level of a family of "a[k] <= b[k]" comparisons, as a single check. The slack
// scales with the largest member of the family: small levels carry the same absolute error.
ChainCheck worst_level(const std::string& name, const std::vector<double>& a, const std::vector<double>& b,
                       double rel_slack) {
  double scale = 0;
  for (std::size_t k = 0; k < a.size(); ++k) scale = std::max({scale, std::abs(a[k]), std::abs(b[k])});
  ChainCheck worst;
  double worst_excess = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < a.size(); ++k) {
    auto c = make_check(name + "[" + std::to_string(k) + "]", "<=", a[k], b[k], 0);
    c.slack = rel_slack * scale;
    c.pass = c.margin >= -c.slack;
    const double excess = c.margin + c.slack;
    if (excess < worst_excess) {
      worst_excess = excess;
      worst = std::move(c);
    }
  }
  return worst;
}

}  // namespace

ScalarField build_web_field(const DomainSpec& domain, const RadialProfile& profile, const Mesh& mesh) {
  require_matched(domain, profile);
  const double r1 = profile.shell.R1;
  const double width = profile.shell.width();
  ScalarField w(mesh.num_vertices());
  for (Eigen::Index i = 0; i < mesh.num_vertices(); ++i) {
    if (mesh.vertex_tags[static_cast<std::size_t>(i)] == VertexTag::inner) {
      w(i) = profile.v_min();
      continue;
    }
    const double d = distance_to_body(domain.hole(), mesh.vertex(i));
    w(i) = d >= width ? profile.v_max() : profile.value(r1 + d);
  }
  return w;
}

double web_quotient(const Mesh& mesh, const ScalarField& w, double p, double beta) {
  return assemble_quotient(mesh, p, beta, w);
}

LevelSetMeasure measure_level_set(const Mesh& mesh, const ScalarField& w, double t) {
  if (w.size() != mesh.num_vertices()) throw ValidationError("measure_level_set: field size does not match mesh");
  LevelSetMeasure out;
  for (Eigen::Index k = 0; k < mesh.num_triangles(); ++k) {
    int idx[3] = {mesh.triangles(0, k), mesh.triangles(1, k), mesh.triangles(2, k)};
    std::sort(idx, idx + 3, [&](int a, int b) { return w(a) < w(b); });
    const double w0 = w(idx[0]), w1 = w(idx[1]), w2 = w(idx[2]);
    const int below = (w0 < t) + (w1 < t) + (w2 < t);
    const double area = std::abs(mesh.signed_area(k));
    if (below == 0) continue;
    if (below == 3) {
      out.sublevel_area += area;
      continue;
    }
    const Point2d x0 = mesh.vertex(idx[0]), x1 = mesh.vertex(idx[1]), x2 = mesh.vertex(idx[2]);
    const auto cross = [&](const Point2d& a, const Point2d& b, double wa, double wb) -> Point2d {
      return a + (t - wa) / (wb - wa) * (b - a);
    };
    if (below == 1) {
      const Point2d a = cross(x0, x1, w0, w1), b = cross(x0, x2, w0, w2);
      out.length += (a - b).norm();
      out.sublevel_area += area * (t - w0) * (t - w0) / ((w1 - w0) * (w2 - w0));
    } else {
      const Point2d a = cross(x0, x2, w0, w2), b = cross(x1, x2, w1, w2);
      out.length += (a - b).norm();
      out.sublevel_area += area - area * (w2 - t) * (w2 - t) / ((w2 - w0) * (w2 - w1));
    }
  }
  return out;
}

double inverse_level_width(const RadialProfile& profile) {
  // v_M - t = (v_M - v_m)(1 - s)^6 absorbs the (v_M - t)^{-1/p} growth of 1/g at the top; the
  // level is located through the deficit so the flat top keeps its relative precision.
  const double span = profile.v_max() - profile.v_min();
  constexpr int k = 6;
  constexpr int panels = 128;
  const auto f = [&](double s) {
    const double u = 1 - s;
    const double tau = span * std::pow(u, k);
    if (!(tau > 0)) return 0.0;
    const double g = profile.slope(profile.inverse_deficit(tau));
    if (!(g > 0)) return 0.0;
    return k * span * std::pow(u, k - 1) / g;
  };
  const auto& rule = gauss16();
  double total = 0;
  for (int i = 0; i < panels; ++i) total += rule.integrate(f, double(i) / panels, double(i + 1) / panels);
  return total;
}

WebChainReport verify_chain(const DomainSpec& domain, const RadialProfile& profile, const Mesh& mesh, ChainKind kind,
                            double beta, double shell_value, const ChainOptions& options) {
  if (options.t_count < 16) throw ValidationError("verify_chain: t_count must be >= 16");
  if (!(beta > 0) || !std::isfinite(beta)) throw ValidationError("verify_chain: beta must be positive and finite");
  WebChainReport rep;
  rep.kind = kind;
  rep.p = profile.p;
  rep.beta = beta;
  rep.h = mesh.target_h;
  rep.shell = profile.shell;
  rep.v_min = profile.v_min();
  rep.v_max = profile.v_max();
  rep.shell_value = shell_value;
  rep.slack_constant = options.slack_constant;

  const ScalarField w = build_web_field(domain, profile, mesh);
  const auto hole_q = quermassintegrals(domain.hole());
  const double p = profile.p;
  const double r1 = profile.shell.R1;

  const int m = options.t_count;
  for (int k = 0; k < m; ++k) {
    const double t = rep.v_min + (rep.v_max - rep.v_min) * k / m;
    const double rho = std::max(0.0, level_distance(profile, t));
    const auto level = measure_level_set(mesh, w, t);
    rep.t_grid.push_back(t);
    rep.rho.push_back(rho);
    rep.g.push_back(level_speed(profile, t));
    rep.live_perimeter.push_back(level.length);
    rep.steiner_perimeter.push_back(parallel_perimeter(hole_q, rho));
    rep.shell_perimeter.push_back(profile.shell.sphere_area(r1 + rho));
    rep.mu.push_back(level.sublevel_area);
    rep.eta.push_back(steiner_volume(quermassintegrals_ball<double>(2, r1), rho) - unit_ball_volume<double>(2) * r1 * r1);
  }
  rep.plateau_area = mesh.area() - measure_level_set(mesh, w, rep.v_max).sublevel_area;

  const double q_exponent = kind == ChainKind::eigen ? p : 1.0;
  const auto terms = assemble_terms(mesh, p, w, q_exponent);
  const auto radial = radial_integrals(profile, q_exponent);
  rep.gradient_lhs = terms.gradient;
  rep.gradient_rhs = radial.gradient;
  {
    // int g^{p-1} P(D + rho B) dt with t = psi(R1 + rho), dt = psi' d rho.
    const Eigen::Index n = profile.intervals();
    Eigen::VectorXd f(n + 1);
    for (Eigen::Index i = 0; i <= n; ++i)
      f(i) = std::pow(std::abs(profile.slope_at(i)), p) * parallel_perimeter(hole_q, profile.r(i) - r1);
    rep.gradient_mid = composite_simpson(f, profile.step());
  }
  rep.boundary_lhs = terms.boundary;
  rep.boundary_rhs = radial.boundary;
  rep.lp_lhs = kind == ChainKind::eigen ? terms.power : terms.l1;
  rep.lp_rhs = kind == ChainKind::eigen ? radial.power : radial.mass;
  rep.final_quotient = kind == ChainKind::eigen ? assemble_quotient(mesh, p, beta, w) : torsion_quotient(mesh, p, beta, w);
  rep.inverse_width = inverse_level_width(profile);

  const double rel = options.slack_constant * mesh.target_h / profile.shell.width();
  rep.checks.push_back(worst_level("live_perimeter<=steiner_perimeter", rep.live_perimeter, rep.steiner_perimeter, rel));
  rep.checks.push_back(worst_level("steiner_perimeter<=shell_perimeter", rep.steiner_perimeter, rep.shell_perimeter, rel));
  rep.checks.push_back(worst_level("mu<=eta", rep.mu, rep.eta, rel));
  rep.checks.push_back(make_check("gradient_mesh<=gradient_levels", "<=", rep.gradient_lhs, rep.gradient_mid, rel));
  rep.checks.push_back(make_check("gradient_levels<=gradient_shell", "<=", rep.gradient_mid, rep.gradient_rhs, rel));
  rep.checks.push_back(make_check("boundary", "<=", rep.boundary_lhs, rep.boundary_rhs, rel));
  rep.checks.push_back(make_check(kind == ChainKind::eigen ? "lp_norm" : "l1_norm", ">=", rep.lp_lhs, rep.lp_rhs, rel));
  // Pure 1-D quadrature, so no mesh slack.
  rep.checks.push_back(make_check("inverse_width", "==", rep.inverse_width, profile.shell.width(), 1e-8));
  if (kind == ChainKind::eigen)
    rep.checks.push_back(make_check("quotient<=shell_lambda", "<=", rep.final_quotient, shell_value, rel));
  else
    rep.checks.push_back(make_check("quotient>=shell_torsion", ">=", rep.final_quotient, shell_value, rel));
  return rep;
}

}  // namespace shellbound
