// One PASS/FAIL line per acceptance criterion. Exit status 1 when any line fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "shellbound/report.hpp"

using namespace shellbound;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

const std::vector<std::string> kFixtures = {"square-in-square", "triangle-in-hexagon", "offcenter-square"};
const std::vector<double> kPs = {1.5, 2.0, 3.0};
const std::vector<double> kBetas = {0.5, 2.0};

// verify-eigen reports are shared between the eigen, chain and trivial-bound criteria.
std::vector<Json> eigen_reports;

RunConfig verify_config(const std::string& command, const std::string& fixture, double p, double beta, double h) {
  RunConfig c;
  c.command = command;
  c.fixture = fixture;
  c.p = p;
  c.beta = beta;
  c.h = h;
  return c;
}

std::string tag(const Json& r) {
  const auto& c = r.at("config");
  std::ostringstream s;
  s << c.at("fixture").get<std::string>() << " p=" << c.at("p").get<double>() << " beta=" << c.at("beta").get<double>();
  return s.str();
}

void torsion_closed_form(Outcome& o) {
  RunConfig c;
  c.command = "radial-torsion";
  c.beta = 1;
  const double T = run(c).report.at("T").get<double>();
  const double e = rel(T, oracle::torsion_closed_form());
  o.detail << "T=" << format_double(T) << " rel.err=" << e;
  o.require(e <= 1e-8, "relative error > 1e-8");
}

void radial_vs_fd(Outcome& o) {
  double worst = 0;
  for (int n : {2, 3}) {
    for (double beta : {0.5, 1.0, 5.0}) {
      const ShellSpecd shell(n, 1, 2);
      worst = std::max(worst, rel(solve_radial_eigen(shell, 2, beta).lambda, oracle::fd_radial_eigen(n, 1, 2, beta)));
    }
  }
  o.detail << "worst rel.diff=" << worst;
  o.require(worst <= 1e-6, "relative difference > 1e-6");
}

// Gap between the shell eigenvalue and the mesh eigenvalue on the shell-identity polygons.
std::vector<double> shell_identity_gaps(const std::vector<double>& hs) {
  const double lambda = solve_radial_eigen(ShellSpecd(2, 1, 2), 2, 1).lambda;
  std::vector<double> gaps;
  for (double h : hs) {
    const Mesh m = triangulate(fixture_domain("shell-identity", h), h);
    gaps.push_back(std::abs(lambda - minimize_eigen(m, 2, 1).lambda));
  }
  return gaps;
}

void eigen_comparison(Outcome& o) {
  double min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& f : kFixtures)
    for (double p : kPs)
      for (double beta : kBetas) {
        const auto res = run(verify_config("verify-eigen", f, p, beta, 0.05));
        const double margin = res.report.at("margin").get<double>(), slack = res.report.at("slack").get<double>();
        o.require(margin > slack, tag(res.report) + " margin " + format_double(margin) + " <= slack");
        min_ratio = std::min(min_ratio, margin / std::max(slack, 1e-300));
        eigen_reports.push_back(res.report);
      }
  o.detail << eigen_reports.size() << " runs, min margin/slack=" << min_ratio;
  const auto gaps = shell_identity_gaps({0.2, 0.1, 0.05});
  o.detail << "; shell identity gaps";
  for (double g : gaps) o.detail << " " << g;
  for (std::size_t k = 1; k < gaps.size(); ++k) {
    o.detail << " ratio " << gaps[k - 1] / gaps[k];
    o.require(gaps[k - 1] / gaps[k] >= 3.5, "shell identity gap ratio < 3.5");
  }
}

void torsion_comparison(Outcome& o) {
  int runs = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& f : kFixtures)
    for (double p : kPs)
      for (double beta : kBetas) {
        const auto res = run(verify_config("verify-torsion", f, p, beta, 0.05));
        const double margin = res.report.at("margin").get<double>(), slack = res.report.at("slack").get<double>();
        o.require(margin >= -slack, tag(res.report) + " T_mesh < T_shell - slack");
        o.require(res.pass, tag(res.report) + " report failed");
        worst = std::min(worst, margin + slack);
        ++runs;
      }
  o.detail << runs << " runs, min margin+slack=" << worst << "; shell identity T";
  const double exact = oracle::torsion_closed_form();
  double last = 0;
  for (double h : {0.2, 0.1, 0.05}) {
    const Mesh m = triangulate(fixture_domain("shell-identity", h), h);
    const double T = maximize_torsion(m, 2, 1).T;
    o.detail << " " << format_double(T);
    o.require(T < exact, "shell identity T above the closed form");
    o.require(T > last, "shell identity T not increasing as h halves");
    last = T;
  }
  o.detail << " -> " << format_double(exact);
}

void web_chain(Outcome& o) {
  int checks = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& r : eigen_reports) {
    const auto& chain = r.at("web_chain");
    for (const auto& c : chain.at("checks")) {
      ++checks;
      const double excess = c.at("margin").get<double>() + c.at("slack").get<double>();
      worst = std::min(worst, excess);
      o.require(c.at("pass").get<bool>(), tag(r) + " " + c.at("name").get<std::string>());
    }
  }
  o.require(!eigen_reports.empty(), "no verify-eigen reports");
  o.detail << checks << " checks over " << eigen_reports.size() << " runs, min margin+slack=" << worst;
}

void beta_suite(Outcome& o) {
  const ShellSpecd shell(2, 1, 2);
  const double p = 2;
  const auto betas = BetaGrid{0.01, 100, 20, true}.values();
  std::vector<double> lambda;
  for (double b : betas) lambda.push_back(solve_radial_eigen(shell, p, b).lambda);
  double worst_inc = std::numeric_limits<double>::infinity(), worst_curv = -worst_inc, worst_deriv = 0;
  for (std::size_t k = 1; k < betas.size(); ++k) worst_inc = std::min(worst_inc, lambda[k] - lambda[k - 1]);
  for (std::size_t k = 1; k + 1 < betas.size(); ++k) {
    const double s0 = (lambda[k] - lambda[k - 1]) / (betas[k] - betas[k - 1]);
    const double s1 = (lambda[k + 1] - lambda[k]) / (betas[k + 1] - betas[k]);
    worst_curv = std::max(worst_curv, (s1 - s0) / std::max(1.0, std::abs(s0)));
  }
  for (double b : betas) {
    const double hb = 1e-4 * b;
    const double fd = (solve_radial_eigen(shell, p, b + hb).lambda - solve_radial_eigen(shell, p, b - hb).lambda) / (2 * hb);
    worst_deriv = std::max(worst_deriv, rel(eigen_beta_derivative(solve_radial_eigen(shell, p, b).profile), fd));
  }
  const double ratio = solve_radial_eigen(shell, p, 1e4).lambda / radial_dirichlet_neumann(shell, p).lambda;
  o.detail << "min increment=" << worst_inc << " max second difference=" << worst_curv << " worst derivative rel.err="
           << worst_deriv << " lambda(1e4)/Lambda=" << ratio;
  o.require(worst_inc >= 0, "not monotone");
  o.require(worst_curv <= 1e-8, "not concave");
  o.require(worst_deriv <= 1e-5, "derivative mismatch");
  o.require(ratio >= 0.99 && ratio <= 1, "limit ratio outside [0.99, 1]");
}

void trivial_bounds_all(Outcome& o) {
  int solves = 0;
  for (const auto& r : eigen_reports) {
    const double lambda = r.at("lambda_mesh").get<double>();
    const auto& tb = r.at("trivial_bounds");
    o.require(lambda <= std::min(tb.at("constant_field").get<double>(), tb.at("dirichlet_neumann").get<double>()),
              tag(r) + " mesh");
    ++solves;
  }
  for (double p : {1.5, 2.0, 3.0})
    for (int n : {2, 3})
      for (double beta : {0.01, 0.5, 5.0, 100.0}) {
        const ShellSpecd shell(n, 1, 2);
        const double lambda = solve_radial_eigen(shell, p, beta).lambda;
        o.require(lambda <= std::min(constant_field_bound(shell, beta), radial_dirichlet_neumann(shell, p).lambda),
                  "radial p=" + format_double(p));
        ++solves;
      }
  o.detail << solves << " eigen solves (mesh and radial)";
}

void geometry_suite(Outcome& o) {
  std::mt19937_64 rng(2024);
  double worst_af = std::numeric_limits<double>::infinity(), worst_steiner = 0, worst_iso = worst_af;
  for (int k = 0; k < 500; ++k) {
    const auto hull = oracle::random_hull(rng);
    const auto q = quermassintegrals(hull);
    worst_af = std::min(worst_af, af_check(q).min_margin());
    for (double rho : {0.1, 1.0, 3.0}) {
      const auto r = oracle::rounded_polygon(hull.vertices(), rho);
      worst_steiner = std::max({worst_steiner, rel(steiner_volume(hull, rho), r.area), rel(parallel_perimeter(hull, rho), r.perimeter)});
    }
    worst_iso = std::min(worst_iso, q.perimeter() * q.perimeter() - 4 * oracle::kPi * q.volume());
  }
  const auto disk = quermassintegrals_ball(2, 1.7);
  const auto daf = af_check(disk);
  double disk_err = std::abs(disk.perimeter() * disk.perimeter() - 4 * oracle::kPi * disk.volume()) /
                    (disk.perimeter() * disk.perimeter());
  for (const auto& m : daf.margins) disk_err = std::max(disk_err, std::abs(m.margin));
  for (const auto& b : daf.ball) disk_err = std::max(disk_err, rel(b.body, b.matched_ball));
  o.detail << "500 hulls: min AF margin=" << worst_af << " worst Steiner rel.err=" << worst_steiner
           << " min P^2-4piA=" << worst_iso << "; disk equality err=" << disk_err;
  o.require(worst_af >= -1e-10, "AF margin");
  o.require(worst_steiner <= 1e-12, "Steiner consistency");
  o.require(worst_iso >= 0, "isoperimetric");
  o.require(disk_err <= 1e-12, "disk equality");
}

void profile_invariant(Outcome& o) {
  int profiles = 0;
  double min_increment = std::numeric_limits<double>::infinity();
  for (double p : {1.2, 1.5, 2.0, 3.0, 6.0})
    for (int n : {2, 3})
      for (double beta : {0.01, 0.5, 5.0, 100.0}) {
        const auto chk = check_profile(solve_radial_eigen(ShellSpecd(n, 1, 2), p, beta).profile);
        const std::string id = "p=" + format_double(p) + " n=" + std::to_string(n) + " beta=" + format_double(beta);
        o.require(chk.strictly_increasing, id + " not increasing");
        o.require(chk.weighted_flux_decreasing, id + " flux not decreasing");
        min_increment = std::min(min_increment, chk.min_increment);
        ++profiles;
      }
  o.detail << profiles << " profiles, min increment=" << min_increment;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"closed-form torsion", torsion_closed_form},
      {"radial eigenvalue vs finite differences", radial_vs_fd},
      {"mesh eigenvalue below the matched shell", eigen_comparison},
      {"mesh torsion above the matched shell", torsion_comparison},
      {"web-function chain", web_chain},
      {"beta monotonicity, concavity and derivative", beta_suite},
      {"trivial bounds", trivial_bounds_all},
      {"convex geometry properties", geometry_suite},
      {"profile monotonicity", profile_invariant},
  };
  bool all = true;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", index, name.c_str(), o.detail.str().c_str(), seconds);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
