// Command-line front end: one subcommand per report kind.
//
//   shellbound verify-eigen --fixture square-in-square --p 2 --beta 1 --h 0.05
//   shellbound sweep-beta --beta-grid 0.01,100,20,log --format csv --out sweep.csv
//
// Exit status: 0 when every asserted inequality holds, 1 when one fails (the report lists
// it under "failures"), 2 on invalid input or a solver failure (failure JSON on stdout).

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "shellbound/report.hpp"

namespace {

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw shellbound::ValidationError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace shellbound;
  CLI::App app{"Robin-Neumann p-Laplacian bounds on domains with a convex hole"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print this help");  // -h would clash with --h

  RunConfig config;
  double beta = 0;
  std::string beta_grid;
  double q_exponent = 0;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"quermass", "quermassintegrals and Aleksandrov-Fenchel margins of a convex body"},
      {"radial-eigen", "Robin-Neumann eigenvalue of a spherical shell by shooting"},
      {"radial-torsion", "torsional rigidity of a spherical shell"},
      {"mesh-eigen", "P1 eigenvalue on a perforated polygon"},
      {"mesh-torsion", "P1 torsional rigidity on a perforated polygon"},
      {"verify-eigen", "eigenvalue comparison with the matched shell plus the web-function chain"},
      {"verify-torsion", "torsion comparison with the matched shell plus the web-function chain"},
      {"sweep-beta", "eigenvalue or torsion over a beta grid with monotonicity and concavity flags"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->set_help_flag("--help", "print this help");
    sub->add_option("--p", config.p, "exponent p > 1")->capture_default_str();
    sub->add_option("--beta", beta, "Robin parameter beta > 0");
    sub->add_option("--beta-grid", beta_grid, "min,max,count[,log|lin] (sweep-beta)");
    sub->add_option("--n", config.n, "dimension of the shell or ball")->capture_default_str();
    sub->add_option("--r1", config.r1, "inner shell radius")->capture_default_str();
    sub->add_option("--r2", config.r2, "outer shell radius")->capture_default_str();
    sub->add_option("--domain", config.domain_file, "domain JSON {\"outer\": [...], \"hole\": [...]}");
    sub->add_option("--fixture", config.fixture, "built-in domain")
        ->check(CLI::IsMember(fixture_names()));
    sub->add_option("--body", config.body, "ball:r, disk:r, cube:a, cuboid:a,b,c or polygon:x1,y1,...");
    sub->add_option("--quantity", config.quantity, "eigen or torsion (sweep-beta)")->capture_default_str();
    sub->add_option("--q", q_exponent, "power exponent q in [1, p] (mesh-eigen)");
    sub->add_option("--h", config.h, "target mesh size")->capture_default_str();
    sub->add_option("--tol", config.tol, "relative tolerance of the mesh solvers")->capture_default_str();
    sub->add_option("--t-count", config.t_count, "levels in the web chain")->capture_default_str();
    sub->add_option("--random-hulls", config.random_hulls, "quermass: check this many random hulls");
    sub->add_option("--out", config.out, "output path (default stdout)");
    sub->add_option("--format", config.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", config.seed, "seed for randomized suites")->capture_default_str();
    sub->add_flag("--timing", config.timing, "add wall-clock seconds to sweep rows");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    config.command = sub->get_name();
    if (sub->count("--beta")) config.beta = beta;
    if (sub->count("--q")) config.q_exponent = q_exponent;
    if (sub->count("--beta-grid")) config.beta_grid = parse_beta_grid(beta_grid);

    const RunResult result = run(config);
    if (result.report.contains("warnings"))
      for (const auto& w : result.report.at("warnings")) std::cerr << "warning: " << w.get<std::string>() << "\n";
    if (config.format == "csv") {
      write_output(config.out, to_csv(result.table));
      if (!result.pass) {
        Json fail{{"status", "fail"}, {"failures", result.report.at("failures")}, {"checks", result.report.at("checks")}};
        std::cerr << fail.dump(2) << "\n";
      }
    } else {
      write_output(config.out, result.report.dump(2) + "\n");
    }
    return result.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cout << failure_json(e).dump(2) << "\n";
    return 2;
  }
}
