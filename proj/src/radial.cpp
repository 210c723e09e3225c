#include "shellbound/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shellbound/quadrature.hpp"

namespace shellbound {

const char* to_string(BoundDirection d) {
  switch (d) {
    case BoundDirection::exact_radial: return "exact_radial";
    case BoundDirection::upper_bound_discrete: return "upper_bound_discrete";
    case BoundDirection::lower_bound_discrete: return "lower_bound_discrete";
  }
  return "unknown";
}

namespace {

void require_exponent(double p) {
  if (!(p > 1) || !std::isfinite(p)) throw DomainError("p must lie in (1, inf)");
}

void require_beta(double beta) {
  if (!(beta > 0) || !std::isfinite(beta)) throw DomainError("beta must be positive and finite");
}

/// Cubic Hermite interpolation on [0, 1] scaled to an interval of length h.
double hermite(double y0, double y1, double s0, double s1, double h, double x) {
  const double x2 = x * x, x3 = x2 * x;
  return (2 * x3 - 3 * x2 + 1) * y0 + (x3 - 2 * x2 + x) * h * s0 + (-2 * x3 + 3 * x2) * y1 + (x3 - x2) * h * s1;
}

/// Relative-tolerance wrapper around adaptive Simpson.
template <typename F>
double integrate_relative(F&& f, double a, double b, double rel) {
  const auto& gl = gauss16();
  double rough = 0;
  const int panels = 16;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + (b - a) * i / panels, hi = a + (b - a) * (i + 1) / panels;
    rough += gl.integrate([&](double x) { return std::abs(f(x)); }, lo, hi);
  }
  return adaptive_simpson(f, a, b, rel * std::max(rough, std::numeric_limits<double>::min()));
}

struct Shot {
  double weighted_flux = 0;  // r^{n-1} q at R2, or at the first node where q < 0
  bool reached_end = false;
};

/// Integrates the eigen ODE from R1 with (psi, q) = (psi0, q0) using RK4 on `steps` cells.
/// Stops early once q turns negative: while psi > 0 the weighted flux keeps decreasing,
/// so the terminal flux is negative as well.
Shot shoot(const ShellSpecd& shell, double p, double lambda, double psi0, double q0, int steps,
           RadialProfile* record) {
  const int n = shell.n;
  const double h = shell.width() / steps;
  const double inv = 1.0 / (p - 1);
  auto rhs = [&](double r, double psi, double q, double& dpsi, double& dq) {
    dpsi = signed_pow(q, inv);
    dq = -(n - 1) / r * q - lambda * signed_pow(psi, p - 1);
  };
  if (record) {
    record->shell = shell;
    record->p = p;
    record->r.resize(steps + 1);
    record->psi.resize(steps + 1);
    record->q.resize(steps + 1);
    record->dq.resize(steps + 1);
  }
  double psi = psi0, q = q0;
  for (int i = 0; i <= steps; ++i) {
    const double r = (i == steps) ? shell.R2 : shell.R1 + i * h;
    if (record) {
      double dpsi, dq;
      rhs(r, psi, q, dpsi, dq);
      record->r(i) = r;
      record->psi(i) = psi;
      record->q(i) = q;
      record->dq(i) = dq;
    }
    if (q < 0 || (i > 0 && psi <= 0)) {
      return {std::pow(r, n - 1) * std::min(q, -std::numeric_limits<double>::min()), false};
    }
    if (i == steps) break;
    double a1, b1, a2, b2, a3, b3, a4, b4;
    rhs(r, psi, q, a1, b1);
    rhs(r + h / 2, psi + h / 2 * a1, q + h / 2 * b1, a2, b2);
    rhs(r + h / 2, psi + h / 2 * a2, q + h / 2 * b2, a3, b3);
    rhs(r + h, psi + h * a3, q + h * b3, a4, b4);
    psi += h / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
    q += h / 6 * (b1 + 2 * b2 + 2 * b3 + b4);
  }
  return {std::pow(shell.R2, n - 1) * q, true};
}

struct ShootingProblem {
  ShellSpecd shell;
  double p;
  double psi0;
  double q0;
  double lambda_max;
};

/// Smallest lambda at which the weighted terminal flux changes sign.
double first_sign_change(const ShootingProblem& prob, int steps, const RadialOptions& options,
                         std::vector<std::pair<double, double>>* scan, double hint) {
  auto defect = [&](double lambda) {
    return shoot(prob.shell, prob.p, lambda, prob.psi0, prob.q0, steps, nullptr).weighted_flux;
  };
  double lo = 0, hi = 0;
  bool bracketed = false;
  if (hint > 0) {
    for (double delta = 1e-6; delta < 1e-1 && !bracketed; delta *= 10) {
      lo = hint * (1 - delta);
      hi = hint * (1 + delta);
      bracketed = defect(lo) > 0 && defect(hi) <= 0;
    }
  }
  if (!bracketed) {
    std::vector<std::pair<double, double>> trace;
    double prev = 0;
    for (int k = 1; k <= options.scan_points; ++k) {
      const double lambda = prob.lambda_max * k / options.scan_points;
      const double d = defect(lambda);
      trace.emplace_back(lambda, d);
      if (d <= 0) {
        lo = prev;
        hi = lambda;
        bracketed = true;
        break;
      }
      prev = lambda;
    }
    if (!bracketed) {
      throw BracketingError("radial shooting: no sign change of the terminal flux in (0, " +
                                std::to_string(prob.lambda_max) + "]",
                            std::move(trace));
    }
    if (scan) *scan = std::move(trace);
  }
  const double rel = std::max(options.tol * 1e-3, 8 * std::numeric_limits<double>::epsilon());
  for (int it = 0; it < 200 && hi - lo > rel * hi; ++it) {
    const double mid = (lo + hi) / 2;
    if (mid <= lo || mid >= hi) break;
    (defect(mid) > 0 ? lo : hi) = mid;
  }
  return lo;
}

RadialEigenResult solve_shooting(const ShootingProblem& prob, double beta, const RadialOptions& options) {
  if (options.initial_steps < 2 || options.initial_steps % 2) throw DomainError("initial_steps must be even");
  RadialEigenResult result;
  result.beta = beta;
  int steps = options.initial_steps;
  double previous = std::numeric_limits<double>::quiet_NaN();
  double lambda = 0;
  for (;;) {
    lambda = first_sign_change(prob, steps, options, result.scan.empty() ? &result.scan : nullptr,
                               std::isnan(previous) ? 0.0 : previous);
    if (!std::isnan(previous) && std::abs(lambda - previous) <= options.tol * lambda) break;
    if (2 * steps > options.max_steps) break;
    previous = lambda;
    steps *= 2;
  }
  const Shot final_shot = shoot(prob.shell, prob.p, lambda, prob.psi0, prob.q0, steps, &result.profile);
  const double scale = std::pow(prob.shell.R1, prob.shell.n - 1) * std::abs(prob.q0);
  result.lambda = lambda;
  result.steps = steps;
  result.residual = std::abs(final_shot.weighted_flux) / scale;
  result.bound_direction = BoundDirection::exact_radial;
  // Snap the Neumann end: the bisection leaves a flux of relative size ~ tol.
  result.profile.q(steps) = 0;
  result.profile.dq(steps) = -lambda * signed_pow(result.profile.psi(steps), prob.p - 1);
  integrate_profile(result.profile);
  return result;
}


const GaussLegendre<double>& gauss8() {
  static const GaussLegendre<double> rule(8);
  return rule;
}

Eigen::Index cell_of(const RadialProfile& prof, double radius) {
  return std::clamp<Eigen::Index>(static_cast<Eigen::Index>((radius - prof.shell.R1) / prof.step()), 0,
                                  prof.intervals() - 1);
}

/// int_a^b slope inside one cell away from R2, where the slope is smooth.
double cell_integral(const RadialProfile& prof, double a, double b) {
  return gauss8().integrate([&](double x) { return prof.slope(x); }, a, b);
}

/// int_{R2-H}^{R2} slope with H inside the last cell. There q = (R2 - s) Q(s) with Q a smooth
/// quadratic, and R2 - s = H y^{1/(a+1)} absorbs the (R2 - s)^a endpoint behaviour.
double top_integral(const RadialProfile& prof, double H) {
  if (!(H > 0)) return 0;
  const Eigen::Index m = prof.intervals();
  const double h = prof.step();
  const double a = 1.0 / (prof.p - 1);
  // Hermite cubic of the last cell in z = (R2 - s) / h: q = -h dq1 z + A z^2 + B z^3.
  const double c1 = prof.q(m - 1) - prof.q(m) + h * prof.dq(m);
  const double c2 = h * (prof.dq(m) - prof.dq(m - 1));
  const double B = c2 - 2 * c1, A = c1 - B;
  const auto f = [&](double y) {
    const double z = std::pow(y, 1 / (a + 1)) * H / h;
    return std::pow(std::max(-prof.dq(m) + (A * z + B * z * z) / h, 0.0), a);
  };
  return std::pow(H, a + 1) / (a + 1) * gauss16().integrate(f, 0.0, 1.0);
}

/// Root of an increasing f on [lo, hi]: Newton steps with bisection as a safeguard.
template <typename F, typename D>
double solve_increasing(F&& f, D&& df, double lo, double hi) {
  const double flo = f(lo), fhi = f(hi);
  if (flo >= 0) return lo;
  if (fhi <= 0) return hi;
  double x = lo - flo * (hi - lo) / (fhi - flo);
  if (!(x > lo && x < hi)) x = (lo + hi) / 2;
  for (int it = 0; it < 100; ++it) {
    const double fx = f(x);
    if (fx == 0) return x;
    (fx < 0 ? lo : hi) = x;
    const double d = df(x);
    double next = d > 0 ? x - fx / d : (lo + hi) / 2;
    if (!(next > lo && next < hi)) next = (lo + hi) / 2;
    const double eps = 4 * std::numeric_limits<double>::epsilon() * std::abs(x);
    if (std::abs(next - x) <= eps || hi - lo <= eps) return next;
    x = next;
  }
  return x;
}

}  // namespace

void integrate_profile(RadialProfile& prof) {
  const Eigen::Index m = prof.intervals();
  if (m < 2) throw DomainError("integrate_profile: need at least two cells");
  if (prof.q(m) != 0) throw DomainError("integrate_profile: flux must vanish at R2");
  Eigen::VectorXd inc(m);
  for (Eigen::Index i = 0; i + 1 < m; ++i) inc(i) = cell_integral(prof, prof.r(i), prof.r(i + 1));
  inc(m - 1) = top_integral(prof, prof.shell.R2 - prof.r(m - 1));
  prof.deficit.resize(m + 1);
  prof.deficit(m) = 0;
  for (Eigen::Index i = m - 1; i >= 0; --i) prof.deficit(i) = prof.deficit(i + 1) + inc(i);
  for (Eigen::Index i = 1; i <= m; ++i) prof.psi(i) = prof.psi(i - 1) + inc(i - 1);
}

double RadialProfile::value(double radius) const {
  radius = std::clamp(radius, shell.R1, shell.R2);
  const Eigen::Index i = cell_of(*this, radius);
  if (i == intervals() - 1) return v_max() - top_integral(*this, shell.R2 - radius);
  return psi(i) + cell_integral(*this, r(i), radius);
}

double RadialProfile::deficit_at(double radius) const {
  radius = std::clamp(radius, shell.R1, shell.R2);
  const Eigen::Index i = cell_of(*this, radius);
  if (i == intervals() - 1) return top_integral(*this, shell.R2 - radius);
  return deficit(i + 1) + cell_integral(*this, radius, r(i + 1));
}

double RadialProfile::flux(double radius) const {
  const double h = step();
  const Eigen::Index i = cell_of(*this, radius);
  const double x = std::clamp((radius - r(i)) / h, 0.0, 1.0);
  return hermite(q(i), q(i + 1), dq(i), dq(i + 1), h, x);
}

double RadialProfile::slope(double radius) const { return signed_pow(flux(radius), 1.0 / (p - 1)); }

double RadialProfile::inverse(double t) const {
  if (!(t >= v_min() && t <= v_max())) throw DomainError("RadialProfile::inverse: level outside [v_min, v_max]");
  // Upper half through the deficit, which keeps full relative precision near v_M.
  if (t - v_min() > v_max() - t) return inverse_deficit(v_max() - t);
  if (t == v_min()) return shell.R1;
  const double* begin = psi.data();
  const Eigen::Index i = std::clamp<Eigen::Index>(std::upper_bound(begin, begin + psi.size(), t) - begin - 1, 0,
                                                  intervals() - 1);
  return solve_increasing([&](double x) { return value(x) - t; }, [&](double x) { return slope(x); }, r(i),
                          r(i + 1));
}

double RadialProfile::inverse_deficit(double tau) const {
  if (!(tau >= 0) || !std::isfinite(tau)) throw DomainError("RadialProfile::inverse_deficit: tau must be >= 0");
  if (tau == 0) return shell.R2;
  if (tau >= deficit(0)) return shell.R1;
  // deficit is decreasing: first node with deficit < tau closes the cell.
  Eigen::Index lo = 0, hi = intervals();
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    (deficit(mid) >= tau ? lo : hi) = mid;
  }
  return solve_increasing([&](double x) { return tau - deficit_at(x); }, [&](double x) { return slope(x); }, r(lo),
                          r(hi));
}

ProfileCheck check_profile(const RadialProfile& profile) {
  ProfileCheck check;
  check.strictly_increasing = true;
  check.weighted_flux_decreasing = true;
  check.min_increment = std::numeric_limits<double>::infinity();
  const int n = profile.shell.n;
  for (Eigen::Index i = 0; i < profile.intervals(); ++i) {
    // The deficit keeps the increments resolvable where psi is flat to rounding.
    const double inc = profile.deficit.size() == profile.psi.size() ? profile.deficit(i) - profile.deficit(i + 1)
                                                                     : profile.psi(i + 1) - profile.psi(i);
    check.min_increment = std::min(check.min_increment, inc);
    if (!(inc > 0)) check.strictly_increasing = false;
    const double w0 = std::pow(profile.r(i), n - 1) * profile.q(i);
    const double w1 = std::pow(profile.r(i + 1), n - 1) * profile.q(i + 1);
    if (!(w1 < w0)) check.weighted_flux_decreasing = false;
  }
  return check;
}

double constant_field_bound(const ShellSpecd& shell, double beta) {
  return beta * shell.inner_perimeter() / shell.volume();
}

RadialEigenResult solve_radial_eigen(const ShellSpecd& shell, double p, double beta, const RadialOptions& options) {
  require_exponent(p);
  require_beta(beta);
  const ShootingProblem prob{shell, p, 1.0, beta, constant_field_bound(shell, beta)};
  return solve_shooting(prob, beta, options);
}

RadialEigenResult radial_dirichlet_neumann(const ShellSpecd& shell, double p, const RadialOptions& options) {
  require_exponent(p);
  // Any admissible test function bounds the eigenvalue from above; psi = r - R1 vanishes on the hole.
  const double R1 = shell.R1;
  const double upper = radial_rayleigh_quotient(
      shell, p, 0.0, [R1](double r) { return r - R1; }, [](double) { return 1.0; }, 1e-10);
  const ShootingProblem prob{shell, p, 0.0, 1.0, upper * (1 + 1e-6)};
  return solve_shooting(prob, std::numeric_limits<double>::infinity(), options);
}

RadialTorsionResult solve_radial_torsion(const ShellSpecd& shell, double p, double beta, double tol,
                                         int grid_steps) {
  require_exponent(p);
  require_beta(beta);
  if (grid_steps < 2 || grid_steps % 2) throw DomainError("grid_steps must be even");
  const int n = shell.n;
  const double R1 = shell.R1, R2 = shell.R2;
  const double R2n = std::pow(R2, n);
  const double inv = 1.0 / (p - 1);
  auto flux = [=](double r) { return std::max(R2n - std::pow(r, n), 0.0) / (n * std::pow(r, n - 1)); };
  auto slope = [=](double r) { return std::pow(flux(r), inv); };
  const double psi_inner = std::pow(beta, -inv) * slope(R1);

  // int_{R1}^{R2} Psi r^{n-1} dr after integrating by parts.
  const double tail =
      integrate_relative([&](double r) { return slope(r) * (R2n - std::pow(r, n)) / n; }, R1, R2, tol * 1e-2);
  const double moment = psi_inner * (R2n - std::pow(R1, n)) / n + tail;
  const double total = n * unit_ball_volume<double>(n) * moment;

  RadialTorsionResult result;
  result.beta = beta;
  result.T = std::pow(total, p - 1);
  result.bound_direction = BoundDirection::exact_radial;

  RadialProfile& prof = result.profile;
  prof.shell = shell;
  prof.p = p;
  prof.r.resize(grid_steps + 1);
  prof.psi.resize(grid_steps + 1);
  prof.q.resize(grid_steps + 1);
  prof.dq.resize(grid_steps + 1);
  const double h = shell.width() / grid_steps;
  for (int i = 0; i <= grid_steps; ++i) {
    const double r = (i == grid_steps) ? R2 : R1 + i * h;
    prof.r(i) = r;
    prof.q(i) = flux(r);
    prof.dq(i) = -(n - 1) / r * prof.q(i) - 1.0;
  }
  prof.psi.setZero();
  prof.psi(0) = psi_inner;
  integrate_profile(prof);
  return result;
}

double level_distance(const RadialProfile& profile, double t) { return profile.inverse(t) - profile.shell.R1; }

double level_speed(const RadialProfile& profile, double t) {
  if (!(t >= profile.v_min() && t <= profile.v_max())) throw DomainError("level_speed: t outside [v_m, v_M]");
  return profile.slope(profile.inverse(t));
}

RadialIntegrals radial_integrals(const RadialProfile& profile, double q_exponent) {
  const int n = profile.shell.n;
  const Eigen::Index m = profile.intervals();
  if (m % 2) throw DomainError("radial_integrals: profile needs an even number of intervals");
  const Eigen::ArrayXd weight = profile.r.array().pow(n - 1);
  Eigen::ArrayXd grad(m + 1);
  for (Eigen::Index i = 0; i <= m; ++i) grad(i) = std::pow(std::abs(profile.slope_at(i)), profile.p);
  const double h = profile.step();
  const double surface = n * unit_ball_volume<double>(n);
  RadialIntegrals out;
  out.gradient = surface * composite_simpson((grad * weight).matrix(), h);
  out.boundary = profile.shell.inner_perimeter() * std::pow(std::abs(profile.psi(0)), profile.p);
  out.power = surface * composite_simpson((profile.psi.array().abs().pow(q_exponent) * weight).matrix(), h);
  out.mass = surface * composite_simpson((profile.psi.array() * weight).matrix(), h);
  return out;
}

double eigen_beta_derivative(const RadialProfile& profile) {
  const RadialIntegrals in = radial_integrals(profile, profile.p);
  return in.boundary / in.power;
}

double radial_rayleigh_quotient(const ShellSpecd& shell, double p, double beta, const RadialFunction& phi,
                                const RadialFunction& dphi, double tol) {
  const int n = shell.n;
  const double grad = integrate_relative(
      [&](double r) { return std::pow(std::abs(dphi(r)), p) * std::pow(r, n - 1); }, shell.R1, shell.R2, tol);
  const double bdry = beta * std::pow(shell.R1, n - 1) * std::pow(std::abs(phi(shell.R1)), p);
  const double mass = integrate_relative(
      [&](double r) { return std::pow(std::abs(phi(r)), p) * std::pow(r, n - 1); }, shell.R1, shell.R2, tol);
  if (!(mass > 0)) throw DomainError("radial_rayleigh_quotient: test function vanishes");
  return (grad + bdry) / mass;
}

double radial_torsion_quotient(const ShellSpecd& shell, double p, double beta, const RadialFunction& phi,
                               const RadialFunction& dphi, double tol) {
  const int n = shell.n;
  const double surface = n * unit_ball_volume<double>(n);
  const double grad = integrate_relative(
      [&](double r) { return std::pow(std::abs(dphi(r)), p) * std::pow(r, n - 1); }, shell.R1, shell.R2, tol);
  const double bdry = beta * std::pow(shell.R1, n - 1) * std::pow(std::abs(phi(shell.R1)), p);
  const double l1 =
      integrate_relative([&](double r) { return std::abs(phi(r)) * std::pow(r, n - 1); }, shell.R1, shell.R2, tol);
  const double denom = surface * (grad + bdry);
  if (!(denom > 0)) throw DomainError("radial_torsion_quotient: test function vanishes");
  return std::pow(surface * l1, p) / denom;
}

}  // namespace shellbound
