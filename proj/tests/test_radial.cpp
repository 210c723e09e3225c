#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "shellbound/radial.hpp"

using namespace shellbound;
using doctest::Approx;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const ShellSpecd kShell(2, 1, 2);

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> b(count);
  for (int k = 0; k < count; ++k) b[k] = lo * std::pow(hi / lo, double(k) / (count - 1));
  return b;
}

}  // namespace

TEST_CASE("eigenvalue against the finite-difference oracle") {
  for (int n : {2, 3}) {
    const ShellSpecd shell(n, 1, 2);
    for (double beta : {0.5, 1.0, 5.0}) {
      CAPTURE(n);
      CAPTURE(beta);
      const double lambda = solve_radial_eigen(shell, 2, beta).lambda;
      CHECK(rel(lambda, oracle::fd_radial_eigen(n, 1, 2, beta)) < 1e-6);
      CHECK(lambda > 0);
      CHECK(lambda <= constant_field_bound(shell, beta));
    }
    CHECK(rel(radial_dirichlet_neumann(shell, 2).lambda, oracle::fd_radial_eigen(n, 1, 2, -1)) < 1e-6);
  }
  CHECK(solve_radial_eigen(kShell, 2, 1).lambda < 2.0 / 3);
}

TEST_CASE("robin to dirichlet limit and ordering") {
  for (double p : {1.5, 2.0, 3.0}) {
    CAPTURE(p);
    const double Lambda = radial_dirichlet_neumann(kShell, p).lambda;
    for (double beta : {0.1, 1.0, 10.0, 100.0}) CHECK(solve_radial_eigen(kShell, p, beta).lambda <= Lambda);
  }
  const double Lambda = radial_dirichlet_neumann(kShell, 2).lambda;
  CHECK(solve_radial_eigen(kShell, 2, 1e6).lambda / Lambda > 0.99);
}

TEST_CASE("small beta: constant test function is optimal to first order") {
  const double beta = 1e-4;
  const auto res = solve_radial_eigen(kShell, 2, beta);
  CHECK(res.lambda / beta == Approx(2.0 / 3).epsilon(1e-3));
  CHECK(eigen_beta_derivative(res.profile) == Approx(2.0 / 3).epsilon(1e-3));
}

TEST_CASE("dirichlet-neumann homogeneity") {
  for (double p : {2.0, 3.0}) {
    const double a = radial_dirichlet_neumann(ShellSpecd(2, 1, 2), p).lambda;
    const double b = radial_dirichlet_neumann(ShellSpecd(2, 2, 4), p).lambda;
    CHECK(rel(b, a * std::pow(2.0, -p)) < 1e-8);
  }
}

TEST_CASE("torsion closed form") {
  const auto res = solve_radial_torsion(kShell, 2, 1);
  CHECK(rel(res.T, oracle::torsion_closed_form()) < 1e-8);
  CHECK(res.bound_direction == BoundDirection::exact_radial);
  // Psi = 3/2 + 2 ln r - (r^2 - 1)/4
  for (double r : {1.0, 1.3, 1.77, 2.0})
    CHECK(res.profile.value(r) == Approx(1.5 + 2 * std::log(r) - (r * r - 1) / 4).epsilon(1e-10));
  CHECK(res.profile.slope(2.0) == 0);
  CHECK(solve_radial_torsion(kShell, 2, 1e8).profile.v_min() < 1e-7);
  CHECK(solve_radial_torsion(kShell, 3, 1e8).profile.v_min() < 1e-3);
}

TEST_CASE("torsion quotient optimality") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> amp(-0.3, 0.3);
  for (double p : {1.5, 2.0, 3.0}) {
    for (int n : {2, 3}) {
      CAPTURE(p);
      CAPTURE(n);
      const ShellSpecd shell(n, 1, 2);
      const double beta = 0.7;
      const auto res = solve_radial_torsion(shell, p, beta);
      const auto& prof = res.profile;
      const auto psi = [&](double r) { return prof.value(r); };
      const auto dpsi = [&](double r) { return prof.slope(r); };
      const double best = radial_torsion_quotient(shell, p, beta, psi, dpsi, 1e-11);
      CHECK(rel(best, res.T) < 1e-8);
      for (int k = 0; k < 10; ++k) {
        const double e = amp(rng);
        const int mode = 1 + k % 3;
        const double w = mode * oracle::kPi / shell.width();
        const auto phi = [&](double r) { return psi(r) * (1 + e * std::sin(w * (r - 1))); };
        const auto dphi = [&](double r) {
          return dpsi(r) * (1 + e * std::sin(w * (r - 1))) + psi(r) * e * w * std::cos(w * (r - 1));
        };
        CHECK(radial_torsion_quotient(shell, p, beta, phi, dphi, 1e-10) <= best * (1 + 1e-9));
      }
    }
  }
}

TEST_CASE("eigen quotient of the profile reproduces lambda") {
  for (double p : {1.5, 2.0, 3.0}) {
    const auto res = solve_radial_eigen(kShell, p, 1.0);
    const auto& prof = res.profile;
    const double q = radial_rayleigh_quotient(
        kShell, p, 1.0, [&](double r) { return prof.value(r); }, [&](double r) { return prof.slope(r); }, 1e-11);
    CHECK(rel(q, res.lambda) < 1e-7);
  }
}

TEST_CASE("profile invariants") {
  for (double p : {1.2, 1.5, 2.0, 3.0, 6.0}) {
    for (int n : {2, 3}) {
      for (double beta : {0.01, 1.0, 100.0}) {
        CAPTURE(p);
        CAPTURE(n);
        CAPTURE(beta);
        const auto res = solve_radial_eigen(ShellSpecd(n, 0.5, 1.7), p, beta);
        const auto& prof = res.profile;
        const auto chk = check_profile(prof);
        CHECK(chk.strictly_increasing);
        CHECK(chk.weighted_flux_decreasing);
        CHECK(chk.min_increment > 0);
        CHECK(prof.psi(0) == 1.0);
        CHECK(prof.q(0) == Approx(beta).epsilon(1e-14));
        CHECK(prof.q(prof.intervals()) == 0);
        CHECK(res.residual < 1e-6);
        CHECK(res.lambda <= constant_field_bound(prof.shell, beta));
      }
    }
  }
}

TEST_CASE("profile interpolation") {
  for (double p : {1.5, 2.0, 4.0}) {
    CAPTURE(p);
    const auto prof = solve_radial_eigen(kShell, p, 2.0).profile;
    // nodes
    for (Eigen::Index i = 0; i <= prof.intervals(); i += 97) CHECK(prof.value(prof.r(i)) == Approx(prof.psi(i)).epsilon(1e-13));
    // value' = slope and value + deficit = v_M
    for (double r : {1.01, 1.3, 1.5, 1.9, 1.999}) {
      const double d = 1e-5;
      CHECK((prof.value(r + d) - prof.value(r - d)) / (2 * d) == Approx(prof.slope(r)).epsilon(1e-6));
      CHECK(prof.value(r) + prof.deficit_at(r) == Approx(prof.v_max()).epsilon(1e-14));
    }
    // inverse round trips
    for (double s : {0.0, 0.1, 0.5, 0.9, 0.999, 1.0}) {
      const double t = prof.v_min() + s * (prof.v_max() - prof.v_min());
      CHECK(prof.value(prof.inverse(t)) == Approx(t).epsilon(1e-14));
    }
    for (double tau : {1e-12, 1e-8, 1e-4}) CHECK(prof.deficit_at(prof.inverse_deficit(tau)) == Approx(tau).epsilon(1e-10));
    CHECK_THROWS_AS(prof.inverse(prof.v_max() * 1.01), DomainError);
  }
}

TEST_CASE("level speed") {
  for (double p : {1.5, 2.0, 3.0}) {
    const double beta = 0.8;
    const auto prof = solve_radial_eigen(kShell, p, beta).profile;
    CHECK(level_speed(prof, prof.v_min()) ==
          Approx(std::pow(beta * std::pow(prof.v_min(), p - 1), 1 / (p - 1))).epsilon(1e-12));
    CHECK(level_speed(prof, prof.v_max()) == 0);
    const double t = 0.5 * (prof.v_min() + prof.v_max());
    const double r = prof.inverse(t);
    const double d = 1e-4;
    CHECK(level_speed(prof, t) == Approx((prof.value(r + d) - prof.value(r - d)) / (2 * d)).epsilon(1e-7));
    CHECK(level_distance(prof, prof.v_max()) == Approx(kShell.width()));
    CHECK_THROWS_AS(level_speed(prof, prof.v_min() - 1e-3), DomainError);
  }
}

TEST_CASE("beta derivative") {
  for (double p : {1.5, 2.0, 3.0}) {
    for (double beta : {0.05, 0.5, 2.0, 10.0}) {
      CAPTURE(p);
      CAPTURE(beta);
      const double hb = 1e-4 * beta;
      const double fd =
          (solve_radial_eigen(kShell, p, beta + hb).lambda - solve_radial_eigen(kShell, p, beta - hb).lambda) / (2 * hb);
      const double d = eigen_beta_derivative(solve_radial_eigen(kShell, p, beta).profile);
      CHECK(d >= 0);
      CHECK(rel(d, fd) < 1e-5);
    }
  }
}

TEST_CASE("monotone and concave in beta") {
  for (double p : {1.5, 2.0, 3.0}) {
    CAPTURE(p);
    const auto betas = log_grid(0.01, 100, 20);
    std::vector<double> lambda;
    for (double b : betas) lambda.push_back(solve_radial_eigen(kShell, p, b).lambda);
    double last_slope = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < betas.size(); ++k) {
      CHECK(lambda[k + 1] >= lambda[k]);
      const double s = (lambda[k + 1] - lambda[k]) / (betas[k + 1] - betas[k]);
      if (k > 0) CHECK((s - last_slope) / std::max(1.0, std::abs(last_slope)) <= 1e-8);
      last_slope = s;
    }
  }
}

TEST_CASE("grid refinement") {
  RadialOptions coarse;
  coarse.initial_steps = 4096;
  coarse.max_steps = 4096;
  RadialOptions fine = coarse;
  fine.initial_steps = fine.max_steps = 8192;
  for (double p : {1.5, 2.0, 3.0}) {
    const double a = solve_radial_eigen(kShell, p, 1.0, coarse).lambda;
    const double b = solve_radial_eigen(kShell, p, 1.0, fine).lambda;
    CHECK(rel(a, b) < 10 * coarse.tol);
  }
}

TEST_CASE("torsion decreases in beta") {
  double last = std::numeric_limits<double>::infinity();
  for (double beta : {0.1, 1.0, 10.0, 100.0}) {
    const double T = solve_radial_torsion(kShell, 2, beta).T;
    CHECK(T < last);
    last = T;
  }
}

TEST_CASE("input errors") {
  CHECK_THROWS_AS(solve_radial_eigen(kShell, 2, 0.0), DomainError);
  CHECK_THROWS_AS(solve_radial_eigen(kShell, 2, -1.0), DomainError);
  CHECK_THROWS_AS(solve_radial_eigen(kShell, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(solve_radial_torsion(kShell, 2, 0.0), DomainError);
  CHECK_THROWS_AS(ShellSpecd(2, 2, 1), ValidationError);
}
