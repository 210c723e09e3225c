#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "shellbound/report.hpp"

using namespace shellbound;
using doctest::Approx;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("shellbound_test_" + name);
}

// Runs the command-line tool and returns its exit status.
int cli(const std::string& args, const std::filesystem::path& out) {
  const std::string cmd = std::string("\"") + SHELLBOUND_CLI + "\" " + args + " > \"" + out.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
#ifdef WEXITSTATUS
  return WEXITSTATUS(status);
#else
  return status;
#endif
}

RunConfig radial_config(const std::string& command, double beta) {
  RunConfig c;
  c.command = command;
  c.beta = beta;
  return c;
}

}  // namespace

TEST_CASE("beta grids") {
  const auto g = parse_beta_grid("0.01,100,5,log");
  CHECK(g.count == 5);
  CHECK(g.log);
  const auto v = g.values();
  REQUIRE(v.size() == 5);
  CHECK(v.front() == 0.01);
  CHECK(v.back() == 100);
  CHECK(v[2] == Approx(1).epsilon(1e-14));
  const auto lin = parse_beta_grid("1,3,3,lin").values();
  CHECK(lin == std::vector<double>{1, 2, 3});
  CHECK(parse_beta_grid("2,2,1").values() == std::vector<double>{2});
  CHECK_THROWS_AS(parse_beta_grid("1,2"), ValidationError);
  CHECK_THROWS_AS(parse_beta_grid("0,2,3"), ValidationError);
  CHECK_THROWS_AS(parse_beta_grid("3,2,3"), ValidationError);
  CHECK_THROWS_AS(parse_beta_grid("1,2,2.5"), ValidationError);
  CHECK_THROWS_AS(parse_beta_grid("1,2,3,cubic"), ValidationError);
  CHECK_THROWS_AS(parse_beta_grid("1,2x,3"), ValidationError);
}

TEST_CASE("csv formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2) == "2");
  CHECK(std::stod(format_double(oracle::kPi)) == oracle::kPi);
  Table t;
  t.header = {"a", "b"};
  t.add({"1", "2"});
  t.add({"3", "4"});
  CHECK(to_csv(t) == "a,b\n1,2\n3,4\n");
}

TEST_CASE("domain json") {
  const Json ccw = Json::parse(R"({"outer": [[-2,-2],[2,-2],[2,2],[-2,2]], "hole": [[-0.5,-0.5],[0.5,-0.5],[0.5,0.5],[-0.5,0.5]]})");
  std::vector<std::string> warnings;
  const auto d = domain_from_json(ccw, &warnings);
  CHECK(warnings.empty());
  CHECK(d.area() == Approx(15));

  const Json cw = Json::parse(R"({"outer": [[-2,-2],[-2,2],[2,2],[2,-2]], "hole": [[-0.5,-0.5],[-0.5,0.5],[0.5,0.5],[0.5,-0.5]]})");
  const auto r = domain_from_json(cw, &warnings);
  CHECK(warnings.size() == 2);
  CHECK(r.area() == Approx(15));
  CHECK(r.hole().area() == Approx(1));

  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"outer": [[0,0],[1,0],[0,1]]})")), ValidationError);
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"outer": [[0,0],[1,0],[0,"x"]], "hole": []})")), ValidationError);
  CHECK_THROWS_AS(domain_from_json(Json::parse("[1, 2]")), ValidationError);

  // round trip
  const auto back = domain_from_json(domain_to_json(d));
  CHECK(back.outer() == d.outer());
  CHECK(back.hole().vertices() == d.hole().vertices());
}

TEST_CASE("fixture files match the built-in domains") {
  for (const std::string name : {"square-in-square", "triangle-in-hexagon", "offcenter-square"}) {
    CAPTURE(name);
    std::string file_name = name;
    std::replace(file_name.begin(), file_name.end(), '-', '_');
    const auto path = std::filesystem::path(SHELLBOUND_FIXTURES) / (file_name + ".json");
    REQUIRE(std::filesystem::exists(path));
    const auto file = domain_from_json(Json::parse(slurp(path)));
    const auto builtin = fixture_domain(name);
    REQUIRE(file.outer().size() == builtin.outer().size());
    for (std::size_t i = 0; i < file.outer().size(); ++i) CHECK((file.outer()[i] - builtin.outer()[i]).norm() < 1e-15);
    for (std::size_t i = 0; i < file.hole().size(); ++i) CHECK((file.hole()[i] - builtin.hole()[i]).norm() < 1e-15);
  }
  const auto shell = fixture_domain("shell-identity", 0.1);
  const auto m = match_shell(quermassintegrals(shell.hole()), shell.area());
  CHECK(m.R1 == Approx(1).epsilon(1e-13));
  CHECK(m.R2 == Approx(2).epsilon(1e-13));
  CHECK_THROWS_AS(fixture_domain("nope"), ValidationError);
}

TEST_CASE("radial reports") {
  const auto t = run(radial_config("radial-torsion", 1));
  CHECK(t.pass);
  CHECK(std::abs(t.report.at("T").get<double>() - oracle::torsion_closed_form()) < 1e-8 * oracle::torsion_closed_form());
  CHECK(t.report.at("status") == "pass");
  CHECK(t.report.at("bound_direction") == "exact_radial");

  const auto e = run(radial_config("radial-eigen", 1));
  CHECK(e.pass);
  CHECK(e.report.at("lambda").get<double>() < e.report.at("constant_field_bound").get<double>());
  CHECK(e.report.at("lambda").get<double>() < e.report.at("dirichlet_neumann").get<double>());
  CHECK_FALSE(e.table.rows.empty());
  CHECK(e.table.rows.front().size() == e.table.header.size());
}

TEST_CASE("config validation") {
  auto bad = [](auto edit) {
    RunConfig c = radial_config("radial-eigen", 1);
    edit(c);
    return c;
  };
  CHECK_THROWS_AS(run(bad([](RunConfig& c) { c.p = 1; })), ValidationError);
  CHECK_THROWS_AS(run(bad([](RunConfig& c) { c.beta = 0.0; })), ValidationError);
  CHECK_THROWS_AS(run(bad([](RunConfig& c) { c.beta.reset(); })), ValidationError);
  CHECK_THROWS_AS(run(bad([](RunConfig& c) { c.h = 0; })), ValidationError);
  CHECK_THROWS_AS(run(bad([](RunConfig& c) { c.r2 = 0.5; })), ValidationError);
  CHECK_THROWS_AS(run(bad([](RunConfig& c) { c.t_count = 3; })), ValidationError);
  CHECK_THROWS_AS(run(bad([](RunConfig& c) { c.command = "frobnicate"; })), ValidationError);
  CHECK_THROWS_AS(run(bad([](RunConfig& c) {
                    c.command = "mesh-eigen";
                    c.fixture = "square-in-square";
                    c.domain_file = "x.json";
                  })),
                  ValidationError);
  CHECK_THROWS_AS(run(bad([](RunConfig& c) {
                    c.command = "sweep-beta";
                    c.quantity = "volume";
                  })),
                  ValidationError);
}

TEST_CASE("failure json") {
  const auto v = failure_json(ValidationError("bad"));
  CHECK(v.at("status") == "error");
  CHECK(v.at("error").at("type") == "validation");
  CHECK(v.at("error").at("message") == "bad");
  const auto c = failure_json(ConvergenceError("slow", {3.0, 2.0}));
  CHECK(c.at("error").at("type") == "convergence");
  CHECK(c.at("error").at("trace").size() == 2);
  CHECK(failure_json(DomainError("d")).at("error").at("type") == "domain");
  CHECK(failure_json(std::runtime_error("x")).at("error").at("type") == "error");
}

TEST_CASE("worker pool") {
  ::setenv("SHELLSPEC_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  const auto sq = parallel_map<int>(50, [](int i) { return i * i; });
  for (int i = 0; i < 50; ++i) CHECK(sq[i] == i * i);
  // the lowest failing index wins regardless of scheduling
  try {
    parallel_map<int>(40, [](int i) -> int {
      if (i % 7 == 5) throw std::runtime_error(std::to_string(i));
      return i;
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "5");
  }
  ::setenv("SHELLSPEC_THREADS", "zero", 1);
  CHECK(worker_count() >= 1);
  ::setenv("SHELLSPEC_THREADS", "-2", 1);
  CHECK(worker_count() >= 1);
  ::unsetenv("SHELLSPEC_THREADS");
  CHECK(parallel_map<int>(0, [](int i) { return i; }).empty());
}

TEST_CASE("runs are deterministic") {
  RunConfig c;
  c.command = "verify-eigen";
  c.fixture = "square-in-square";
  c.beta = 1;
  c.h = 0.2;
  const auto a = run(c), b = run(c);
  CHECK(a.report.dump() == b.report.dump());
  CHECK(a.pass);
  CHECK(a.report.at("verdict") == "PASS");

  RunConfig s;
  s.command = "sweep-beta";
  s.beta_grid = parse_beta_grid("0.1,10,6");
  ::setenv("SHELLSPEC_THREADS", "1", 1);
  const auto one = run(s);
  ::setenv("SHELLSPEC_THREADS", "4", 1);
  const auto four = run(s);
  ::unsetenv("SHELLSPEC_THREADS");
  CHECK(one.report.dump() == four.report.dump());
  CHECK(to_csv(one.table) == to_csv(four.table));
  CHECK(one.pass);
}

TEST_CASE("command line") {
  const auto out = scratch_file("out.txt");
  CHECK(cli("radial-torsion --beta 1", out) == 0);
  const Json j = Json::parse(slurp(out));
  CHECK(std::abs(j.at("T").get<double>() - oracle::torsion_closed_form()) < 1e-8 * oracle::torsion_closed_form());

  const auto csv = scratch_file("sweep.csv");
  CHECK(cli("sweep-beta --beta-grid 0.1,10,4 --format csv --out \"" + csv.string() + "\"", out) == 0);
  const std::string text = slurp(csv);
  CHECK(text.rfind("beta,lambda,derivative_estimate,monotone,concave\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);

  CHECK(cli("radial-eigen --beta 1 --p 0.5", out) == 2);
  const Json err = Json::parse(slurp(out));
  CHECK(err.at("status") == "error");
  CHECK(err.at("error").at("type") == "validation");
  CHECK(cli("radial-eigen", out) == 2);
  CHECK(cli("mesh-eigen --beta 1 --domain /nonexistent/domain.json", out) == 2);
  CHECK(cli("mesh-eigen --beta 1 --fixture nowhere", out) != 0);
  CHECK(cli("verify-eigen --beta 1 --h 0.2 --domain \"" + std::string(SHELLBOUND_FIXTURES) + "/square_in_square.json\"", out) == 0);
  std::filesystem::remove(out);
  std::filesystem::remove(csv);
}
