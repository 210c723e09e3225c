#include "shellbound/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "shellbound/errors.hpp"

namespace shellbound {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Radial solves are far more accurate than the mesh; this is the relative slack charged to them.
constexpr double kRadialRelSlack = 1e-9;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_number(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError(std::string(what) + ": not a number: '" + s + "'");
  }
  if (used != s.size()) throw ValidationError(std::string(what) + ": trailing characters in '" + s + "'");
  return v;
}

double signed_loop_area(const std::vector<Point2d>& loop) {
  double a = 0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const auto& u = loop[i];
    const auto& v = loop[(i + 1) % loop.size()];
    a += u.x() * v.y() - u.y() * v.x();
  }
  return a / 2;
}

std::vector<Point2d> read_loop(const Json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("domain file: missing key '") + key + "'");
  const Json& arr = j.at(key);
  if (!arr.is_array()) throw ValidationError(std::string("domain file: '") + key + "' must be an array");
  std::vector<Point2d> loop;
  for (const auto& pt : arr) {
    if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
      throw ValidationError(std::string("domain file: '") + key + "' entries must be [x, y] number pairs");
    loop.emplace_back(pt[0].get<double>(), pt[1].get<double>());
  }
  return loop;
}

std::vector<Point2d> regular_polygon(int count, double radius, Point2d centre = Point2d(0, 0), double phase = 0) {
  std::vector<Point2d> v;
  for (int k = 0; k < count; ++k) {
    const double a = phase + 2 * kPi * k / count;
    v.push_back(centre + radius * Point2d(std::cos(a), std::sin(a)));
  }
  return v;
}

std::vector<Point2d> rectangle(double x0, double y0, double x1, double y1) {
  return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

Json check_json(const std::string& name, const std::string& relation, double lhs, double rhs, double slack) {
  ChainCheck c;
  c.name = name;
  c.relation = relation;
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = slack;
  c.margin = relation == "<=" ? rhs - lhs : lhs - rhs;
  c.pass = c.margin >= -slack;
  return to_json(c);
}

// Collects checks and the names of those that failed.
struct Verdict {
  Json checks = Json::array();
  Json failures = Json::array();

  void add(const Json& check) {
    checks.push_back(check);
    if (!check.at("pass").get<bool>()) failures.push_back(check.at("name"));
  }
  void add(const std::string& name, const std::string& relation, double lhs, double rhs, double slack) {
    add(check_json(name, relation, lhs, rhs, slack));
  }
  void flag(const std::string& name, bool ok) {
    Json c;
    c["name"] = name;
    c["relation"] = "holds";
    c["pass"] = ok;
    add(c);
  }
  bool pass() const { return failures.empty(); }

  void write(Json& report) const {
    report["checks"] = checks;
    report["failures"] = failures;
    report["status"] = pass() ? "pass" : "fail";
  }
};

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["n"] = c.n;
  j["p"] = c.p;
  if (c.beta) j["beta"] = *c.beta;
  if (c.beta_grid) {
    j["beta_grid"] = {{"min", c.beta_grid->min}, {"max", c.beta_grid->max}, {"count", c.beta_grid->count},
                      {"log", c.beta_grid->log}};
  }
  j["r1"] = c.r1;
  j["r2"] = c.r2;
  if (!c.domain_file.empty()) j["domain"] = c.domain_file;
  if (!c.fixture.empty()) j["fixture"] = c.fixture;
  if (!c.body.empty()) j["body"] = c.body;
  if (c.q_exponent) j["q"] = *c.q_exponent;
  j["h"] = c.h;
  j["tol"] = c.tol;
  j["t_count"] = c.t_count;
  j["seed"] = c.seed;
  return j;
}

double require_beta(const RunConfig& c) {
  if (!c.beta) throw ValidationError(c.command + ": --beta is required");
  return *c.beta;
}

ShellSpecd config_shell(const RunConfig& c) { return ShellSpecd(c.n, c.r1, c.r2); }

struct LoadedDomain {
  DomainSpec domain;
  std::vector<std::string> warnings;
};

LoadedDomain load_domain(const RunConfig& c) {
  if (!c.domain_file.empty() && !c.fixture.empty())
    throw ValidationError("give either --domain or --fixture, not both");
  if (!c.fixture.empty()) return {fixture_domain(c.fixture, c.h), {}};
  if (c.domain_file.empty()) throw ValidationError(c.command + ": --domain or --fixture is required");
  std::ifstream in(c.domain_file);
  if (!in) throw ValidationError("cannot open domain file '" + c.domain_file + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("domain file '" + c.domain_file + "': " + e.what());
  }
  std::vector<std::string> warnings;
  DomainSpec d = domain_from_json(j, &warnings);
  return {std::move(d), std::move(warnings)};
}

Json domain_summary(const DomainSpec& d) {
  Json j;
  j["area"] = d.area();
  j["hole_area"] = d.hole().area();
  j["hole_perimeter"] = d.hole().perimeter();
  j["outer_perimeter"] = d.outer_perimeter();
  j["outer_convex"] = d.outer_is_convex();
  j["clearance"] = d.clearance();
  return j;
}

Json mesh_summary(const Mesh& m) {
  const auto q = mesh_quality(m);
  Json j;
  j["vertices"] = m.num_vertices();
  j["triangles"] = m.num_triangles();
  j["h"] = m.target_h;
  j["min_angle_deg"] = q.min_angle_deg;
  j["max_aspect"] = q.max_aspect;
  j["h_max"] = q.h_max;
  j["experimental"] = m.experimental;
  return j;
}

Json shell_json(const ShellSpecd& s) { return {{"n", s.n}, {"R1", s.R1}, {"R2", s.R2}, {"volume", s.volume()}}; }

Table profile_table(const RadialProfile& profile) {
  Table t;
  t.header = {"r", "psi", "q"};
  for (Eigen::Index i = 0; i < profile.r.size(); ++i)
    t.add({format_double(profile.r(i)), format_double(profile.psi(i)), format_double(profile.q(i))});
  return t;
}

Table field_table(const Mesh& mesh, const ScalarField& u) {
  Table t;
  t.header = {"x", "y", "u"};
  for (Eigen::Index i = 0; i < mesh.num_vertices(); ++i)
    t.add({format_double(mesh.vertices(0, i)), format_double(mesh.vertices(1, i)), format_double(u(i))});
  return t;
}

Table level_table(const WebChainReport& r) {
  Table t;
  t.header = {"t", "g", "rho", "live_perimeter", "steiner_perimeter", "shell_perimeter", "mu", "eta"};
  for (std::size_t k = 0; k < r.t_grid.size(); ++k) {
    t.add({format_double(r.t_grid[k]), format_double(r.g[k]), format_double(r.rho[k]),
           format_double(r.live_perimeter[k]), format_double(r.steiner_perimeter[k]),
           format_double(r.shell_perimeter[k]), format_double(r.mu[k]), format_double(r.eta[k])});
  }
  return t;
}

FemOptions fem_options(const RunConfig& c) {
  FemOptions o;
  o.tol = c.tol;
  return o;
}

// quermass ------------------------------------------------------------------

QuermassVector<double> body_quermass(const std::string& spec, int n) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ValidationError("--body: expected kind:parameters, got '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  std::vector<double> args;
  for (const auto& s : split(spec.substr(colon + 1), ',')) args.push_back(parse_number(s, "--body"));
  auto want = [&](std::size_t k) {
    if (args.size() != k) throw ValidationError("--body " + kind + ": expected " + std::to_string(k) + " values");
  };
  if (kind == "ball") {
    want(1);
    return quermassintegrals_ball<double>(n, args[0]);
  }
  if (kind == "disk") {
    want(1);
    return quermassintegrals_ball<double>(2, args[0]);
  }
  if (kind == "cube") {
    want(1);
    return quermassintegrals(ConvexBody3D<double>::cuboid(args[0], args[0], args[0]));
  }
  if (kind == "cuboid") {
    want(3);
    return quermassintegrals(ConvexBody3D<double>::cuboid(args[0], args[1], args[2]));
  }
  if (kind == "polygon") {
    if (args.size() < 6 || args.size() % 2) throw ValidationError("--body polygon: expected x1,y1,x2,y2,x3,y3,...");
    std::vector<Point2d> pts;
    for (std::size_t i = 0; i < args.size(); i += 2) pts.emplace_back(args[i], args[i + 1]);
    return quermassintegrals(ConvexPolygond(pts));
  }
  throw ValidationError("--body: unknown kind '" + kind + "'");
}

RunResult run_quermass(const RunConfig& c) {
  RunResult out;
  Json& rep = out.report;
  rep["config"] = config_json(c);
  Verdict v;
  if (c.random_hulls > 0) {
    std::mt19937_64 rng(c.seed);
    std::uniform_int_distribution<int> count(3, 40);
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst_af = std::numeric_limits<double>::infinity();
    double worst_iso = std::numeric_limits<double>::infinity();
    Table& t = out.table;
    t.header = {"index", "vertices", "area", "perimeter", "min_af_margin", "isoperimetric_margin"};
    for (int k = 0; k < c.random_hulls; ++k) {
      std::vector<Point2d> pts;
      const int m = count(rng);
      for (int i = 0; i < m; ++i) pts.emplace_back(normal(rng), normal(rng));
      const auto hull = convex_hull(pts);
      const auto q = quermassintegrals(hull);
      const auto af = af_check(q);
      const double iso = (q.perimeter() * q.perimeter() - 4 * kPi * q.volume()) / (q.perimeter() * q.perimeter());
      worst_af = std::min(worst_af, af.min_margin());
      worst_iso = std::min(worst_iso, iso);
      t.add({std::to_string(k), std::to_string(hull.size()), format_double(q.volume()), format_double(q.perimeter()),
             format_double(af.min_margin()), format_double(iso)});
    }
    rep["hulls"] = c.random_hulls;
    rep["min_af_margin"] = worst_af;
    rep["min_isoperimetric_margin"] = worst_iso;
    v.add("af_margins", ">=", worst_af, 0.0, AfReport<double>::kTolerance);
    v.add("isoperimetric", ">=", worst_iso, 0.0, 1e-12);
  } else {
    QuermassVector<double> q;
    if (!c.body.empty()) {
      q = body_quermass(c.body, c.n);
    } else if (!c.domain_file.empty() || !c.fixture.empty()) {
      auto loaded = load_domain(c);
      for (const auto& w : loaded.warnings) rep["warnings"].push_back(w);
      q = quermassintegrals(loaded.domain.hole());
    } else {
      throw ValidationError("quermass: give --body, --domain, --fixture or --random-hulls");
    }
    const auto af = af_check(q);
    rep["quermass"] = to_json(q);
    rep["af"] = to_json(af);
    out.table.header = {"i", "W"};
    for (int i = 0; i <= q.n; ++i) out.table.add({std::to_string(i), format_double(q[i])});
    for (const auto& m : af.margins)
      v.add("af[" + std::to_string(m.i) + "," + std::to_string(m.j) + "]", ">=", m.margin, 0.0,
            AfReport<double>::kTolerance);
  }
  v.write(rep);
  out.pass = v.pass();
  return out;
}

// radial --------------------------------------------------------------------

RunResult run_radial_eigen(const RunConfig& c) {
  const double beta = require_beta(c);
  const auto shell = config_shell(c);
  const auto res = solve_radial_eigen(shell, c.p, beta);
  const auto dn = radial_dirichlet_neumann(shell, c.p);
  const double constant = constant_field_bound(shell, beta);
  const auto pc = check_profile(res.profile);

  RunResult out;
  Json& rep = out.report;
  rep["config"] = config_json(c);
  rep["shell"] = shell_json(shell);
  rep["lambda"] = res.lambda;
  rep["residual"] = res.residual;
  rep["steps"] = res.steps;
  rep["bound_direction"] = to_string(res.bound_direction);
  rep["beta_derivative"] = eigen_beta_derivative(res.profile);
  rep["constant_field_bound"] = constant;
  rep["dirichlet_neumann"] = dn.lambda;
  rep["v_min"] = res.profile.v_min();
  rep["v_max"] = res.profile.v_max();
  Verdict v;
  v.add("lambda<=constant_field", "<=", res.lambda, constant, 0.0);
  v.add("lambda<=dirichlet_neumann", "<=", res.lambda, dn.lambda, 0.0);
  v.flag("profile_strictly_increasing", pc.strictly_increasing);
  v.flag("weighted_flux_decreasing", pc.weighted_flux_decreasing);
  v.write(rep);
  out.pass = v.pass();
  out.table = profile_table(res.profile);
  return out;
}

RunResult run_radial_torsion(const RunConfig& c) {
  const double beta = require_beta(c);
  const auto shell = config_shell(c);
  const auto res = solve_radial_torsion(shell, c.p, beta);
  RunResult out;
  Json& rep = out.report;
  rep["config"] = config_json(c);
  rep["shell"] = shell_json(shell);
  rep["T"] = res.T;
  rep["bound_direction"] = to_string(res.bound_direction);
  rep["v_min"] = res.profile.v_min();
  rep["v_max"] = res.profile.v_max();
  Verdict v;
  v.flag("profile_strictly_increasing", check_profile(res.profile).strictly_increasing);
  v.write(rep);
  out.pass = v.pass();
  out.table = profile_table(res.profile);
  return out;
}

// mesh ----------------------------------------------------------------------

RunResult run_mesh_eigen(const RunConfig& c) {
  const double beta = require_beta(c);
  auto loaded = load_domain(c);
  const Mesh mesh = triangulate(loaded.domain, c.h);
  const double q = c.q_exponent.value_or(c.p);
  const auto res = minimize_eigen(mesh, c.p, beta, q, fem_options(c));

  RunResult out;
  Json& rep = out.report;
  rep["config"] = config_json(c);
  for (const auto& w : loaded.warnings) rep["warnings"].push_back(w);
  rep["domain"] = domain_summary(loaded.domain);
  rep["mesh"] = mesh_summary(mesh);
  rep["lambda"] = res.lambda;
  rep["q"] = q;
  rep["residual"] = res.residual;
  rep["quadrature_slack"] = res.quadrature_slack;
  rep["iterations"] = res.iterations;
  rep["bound_direction"] = to_string(res.bound_direction);
  rep["beta_derivative"] = mesh_beta_derivative(mesh, c.p, res.field);
  Verdict v;
  if (q == c.p) {
    const auto tb = trivial_bounds(mesh, c.p, beta, fem_options(c));
    rep["constant_field_bound"] = tb.constant_field;
    rep["dirichlet_neumann"] = tb.dirichlet_neumann;
    v.add("lambda<=constant_field", "<=", res.lambda, tb.constant_field, 0.0);
    v.add("lambda<=dirichlet_neumann", "<=", res.lambda, tb.dirichlet_neumann, 0.0);
  }
  v.write(rep);
  out.pass = v.pass();
  out.table = field_table(mesh, res.field);
  return out;
}

RunResult run_mesh_torsion(const RunConfig& c) {
  const double beta = require_beta(c);
  auto loaded = load_domain(c);
  const Mesh mesh = triangulate(loaded.domain, c.h);
  const auto res = maximize_torsion(mesh, c.p, beta, fem_options(c));
  RunResult out;
  Json& rep = out.report;
  rep["config"] = config_json(c);
  for (const auto& w : loaded.warnings) rep["warnings"].push_back(w);
  rep["domain"] = domain_summary(loaded.domain);
  rep["mesh"] = mesh_summary(mesh);
  rep["T"] = res.T;
  rep["quadrature_slack"] = res.quadrature_slack;
  rep["iterations"] = res.iterations;
  rep["bound_direction"] = to_string(res.bound_direction);
  Verdict v;
  v.write(rep);
  out.pass = v.pass();
  out.table = field_table(mesh, res.field);
  return out;
}

// verify --------------------------------------------------------------------

RunResult run_verify(const RunConfig& c, ChainKind kind) {
  const double beta = require_beta(c);
  auto loaded = load_domain(c);
  const DomainSpec& domain = loaded.domain;
  const Mesh mesh = triangulate(domain, c.h);
  const auto shell = match_shell(quermassintegrals(domain.hole()), domain.area());
  ChainOptions chain_options;
  chain_options.t_count = c.t_count;

  RunResult out;
  Json& rep = out.report;
  rep["config"] = config_json(c);
  for (const auto& w : loaded.warnings) rep["warnings"].push_back(w);
  rep["domain"] = domain_summary(domain);
  rep["mesh"] = mesh_summary(mesh);
  rep["shell"] = shell_json(shell);
  Verdict v;

  if (kind == ChainKind::eigen) {
    const auto radial = solve_radial_eigen(shell, c.p, beta);
    const auto fem = minimize_eigen(mesh, c.p, beta, c.p, fem_options(c));
    const auto tb = trivial_bounds(mesh, c.p, beta, fem_options(c));
    const auto chain = verify_chain(domain, radial.profile, mesh, kind, beta, radial.lambda, chain_options);
    const double slack = fem.quadrature_slack + kRadialRelSlack * radial.lambda;
    rep["lambda_shell"] = radial.lambda;
    rep["lambda_mesh"] = fem.lambda;
    rep["margin"] = radial.lambda - fem.lambda;
    rep["slack"] = slack;
    rep["mesh_solve"] = {{"residual", fem.residual},
                         {"quadrature_slack", fem.quadrature_slack},
                         {"iterations", fem.iterations},
                         {"bound_direction", to_string(fem.bound_direction)}};
    rep["radial_solve"] = {{"residual", radial.residual}, {"steps", radial.steps}};
    rep["trivial_bounds"] = {{"constant_field", tb.constant_field}, {"dirichlet_neumann", tb.dirichlet_neumann}};
    rep["web_chain"] = to_json(chain);
    v.add("lambda_mesh<=lambda_shell", "<=", fem.lambda, radial.lambda, slack);
    v.add("lambda_mesh<=constant_field", "<=", fem.lambda, tb.constant_field, 0.0);
    v.add("lambda_mesh<=dirichlet_neumann", "<=", fem.lambda, tb.dirichlet_neumann, 0.0);
    v.add("web_quotient>=lambda_mesh", ">=", chain.final_quotient, fem.lambda, fem.quadrature_slack + c.tol * fem.lambda);
    for (const auto& ch : chain.checks) v.add(to_json(ch));
    out.table = level_table(chain);
  } else {
    const auto radial = solve_radial_torsion(shell, c.p, beta);
    const auto fem = maximize_torsion(mesh, c.p, beta, fem_options(c));
    const auto chain = verify_chain(domain, radial.profile, mesh, kind, beta, radial.T, chain_options);
    const double slack = fem.quadrature_slack + kRadialRelSlack * radial.T;
    rep["T_shell"] = radial.T;
    rep["T_mesh"] = fem.T;
    rep["margin"] = fem.T - radial.T;
    rep["slack"] = slack;
    rep["mesh_solve"] = {{"quadrature_slack", fem.quadrature_slack},
                         {"iterations", fem.iterations},
                         {"bound_direction", to_string(fem.bound_direction)}};
    rep["web_chain"] = to_json(chain);
    v.add("T_mesh>=T_shell", ">=", fem.T, radial.T, slack);
    v.add("T_mesh>=web_quotient", ">=", fem.T, chain.final_quotient, fem.quadrature_slack + c.tol * fem.T);
    for (const auto& ch : chain.checks) v.add(to_json(ch));
    out.table = level_table(chain);
  }
  v.write(rep);
  rep["verdict"] = v.pass() ? "PASS" : "FAIL";
  out.pass = v.pass();
  return out;
}

// sweep ---------------------------------------------------------------------

struct SweepPoint {
  double beta = 0;
  double value = 0;
  double derivative = 0;
  double seconds = 0;
};

RunResult run_sweep(const RunConfig& c) {
  if (c.quantity != "eigen" && c.quantity != "torsion")
    throw ValidationError("sweep-beta: --quantity must be eigen or torsion");
  const bool torsion = c.quantity == "torsion";
  const BetaGrid grid = c.beta_grid.value_or(BetaGrid{});
  const std::vector<double> betas = grid.values();
  const bool on_mesh = !c.domain_file.empty() || !c.fixture.empty();

  RunResult out;
  Json& rep = out.report;
  rep["config"] = config_json(c);
  rep["quantity"] = c.quantity;

  std::optional<LoadedDomain> loaded;
  std::optional<Mesh> mesh;
  if (on_mesh) {
    loaded.emplace(load_domain(c));
    mesh.emplace(triangulate(loaded->domain, c.h));
    for (const auto& w : loaded->warnings) rep["warnings"].push_back(w);
    rep["domain"] = domain_summary(loaded->domain);
    rep["mesh"] = mesh_summary(*mesh);
  } else {
    rep["shell"] = shell_json(config_shell(c));
  }
  const ShellSpecd shell = on_mesh ? ShellSpecd{} : config_shell(c);
  const FemOptions fo = fem_options(c);

  auto solve = [&](int i) {
    const auto start = std::chrono::steady_clock::now();
    SweepPoint pt;
    pt.beta = betas[static_cast<std::size_t>(i)];
    if (!on_mesh && !torsion) {
      const auto r = solve_radial_eigen(shell, c.p, pt.beta);
      pt.value = r.lambda;
      pt.derivative = eigen_beta_derivative(r.profile);
    } else if (!on_mesh) {
      const auto r = solve_radial_torsion(shell, c.p, pt.beta);
      const auto ri = radial_integrals(r.profile, 1.0);
      pt.value = r.T;
      pt.derivative = -r.T * ri.boundary / (ri.gradient + pt.beta * ri.boundary);
    } else if (!torsion) {
      const auto r = minimize_eigen(*mesh, c.p, pt.beta, c.p, fo);
      pt.value = r.lambda;
      pt.derivative = mesh_beta_derivative(*mesh, c.p, r.field);
    } else {
      const auto r = maximize_torsion(*mesh, c.p, pt.beta, fo);
      const auto t = assemble_terms(*mesh, c.p, r.field, 1.0);
      pt.value = r.T;
      pt.derivative = -r.T * t.boundary / (t.gradient + pt.beta * t.boundary);
    }
    pt.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return pt;
  };
  const auto points = parallel_map<SweepPoint>(static_cast<int>(betas.size()), solve);

  // Eigenvalues are nondecreasing and concave in beta; torsion is nonincreasing with 1/T concave.
  const std::size_t m = points.size();
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) y[i] = torsion ? 1.0 / points[i].value : points[i].value;
  std::vector<bool> monotone(m, true), concave(m, true);
  double worst_increment = std::numeric_limits<double>::infinity();
  double worst_curvature = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < m; ++i) {
    const double inc = y[i] - y[i - 1];
    worst_increment = std::min(worst_increment, inc);
    monotone[i] = inc >= 0;
  }
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const double s0 = (y[i] - y[i - 1]) / (points[i].beta - points[i - 1].beta);
    const double s1 = (y[i + 1] - y[i]) / (points[i + 1].beta - points[i].beta);
    const double curvature = (s1 - s0) / std::max(1.0, std::abs(s0));
    worst_curvature = std::max(worst_curvature, curvature);
    concave[i] = curvature <= c.tol;
  }

  Table& t = out.table;
  t.header = {"beta", torsion ? "T" : "lambda", "derivative_estimate", "monotone", "concave"};
  if (c.timing) t.header.push_back("seconds");
  Json rows = Json::array();
  for (std::size_t i = 0; i < m; ++i) {
    const auto& pt = points[i];
    std::vector<std::string> row{format_double(pt.beta), format_double(pt.value), format_double(pt.derivative),
                                 monotone[i] ? "1" : "0", concave[i] ? "1" : "0"};
    Json r{{"beta", pt.beta},
           {torsion ? "T" : "lambda", pt.value},
           {"derivative_estimate", pt.derivative},
           {"monotone", static_cast<bool>(monotone[i])},
           {"concave", static_cast<bool>(concave[i])}};
    if (c.timing) {
      row.push_back(format_double(pt.seconds));
      r["seconds"] = pt.seconds;
    }
    t.add(std::move(row));
    rows.push_back(std::move(r));
  }
  rep["rows"] = rows;
  Verdict v;
  if (m > 1) v.add(torsion ? "inverse_T_nondecreasing" : "lambda_nondecreasing", ">=", worst_increment, 0.0, 0.0);
  if (m > 2) v.add(torsion ? "inverse_T_concave" : "lambda_concave", "<=", worst_curvature, c.tol, 0.0);
  v.write(rep);
  out.pass = v.pass();
  return out;
}

}  // namespace

std::vector<double> BetaGrid::values() const {
  if (count < 1) throw ValidationError("beta grid: count must be >= 1");
  if (!(min > 0) || !(max >= min) || !std::isfinite(max)) throw ValidationError("beta grid: need 0 < min <= max");
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double s = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    v[static_cast<std::size_t>(i)] = log ? min * std::pow(max / min, s) : min + (max - min) * s;
  }
  v.back() = count == 1 ? min : max;
  return v;
}

BetaGrid parse_beta_grid(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3 && parts.size() != 4)
    throw ValidationError("--beta-grid: expected min,max,count[,log|lin], got '" + text + "'");
  BetaGrid g;
  g.min = parse_number(parts[0], "--beta-grid min");
  g.max = parse_number(parts[1], "--beta-grid max");
  const double count = parse_number(parts[2], "--beta-grid count");
  if (count != std::floor(count) || count < 1) throw ValidationError("--beta-grid: count must be a positive integer");
  g.count = static_cast<int>(count);
  g.log = true;
  if (parts.size() == 4) {
    if (parts[3] == "log")
      g.log = true;
    else if (parts[3] == "lin")
      g.log = false;
    else
      throw ValidationError("--beta-grid: spacing must be log or lin");
  }
  g.values();
  return g;
}

void RunConfig::validate() const {
  if (!(p > 1) || !std::isfinite(p)) throw ValidationError("p must lie in (1, inf)");
  if (beta && (!(*beta > 0) || !std::isfinite(*beta))) throw ValidationError("beta must be positive and finite");
  if (!(h > 0)) throw ValidationError("h must be positive");
  if (!(tol > 0)) throw ValidationError("tol must be positive");
  if (n < 2) throw ValidationError("n must be >= 2");
  if (!(r1 > 0 && r2 > r1)) throw ValidationError("need 0 < r1 < r2");
  if (q_exponent && !(*q_exponent >= 1 && *q_exponent <= p)) throw ValidationError("q must lie in [1, p]");
  if (format != "json" && format != "csv") throw ValidationError("format must be json or csv");
  if (t_count < 16) throw ValidationError("t-count must be >= 16");
  if (random_hulls < 0) throw ValidationError("random-hulls must be >= 0");
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

Json failure_json(const std::exception& e) {
  Json j;
  j["status"] = "error";
  std::string type = "error";
  Json extra;
  if (dynamic_cast<const ValidationError*>(&e)) {
    type = "validation";
  } else if (const auto* b = dynamic_cast<const BracketingError*>(&e)) {
    type = "bracketing";
    for (const auto& [x, y] : b->scan()) extra["scan"].push_back({x, y});
  } else if (const auto* c = dynamic_cast<const ConvergenceError*>(&e)) {
    type = "convergence";
    extra["trace"] = c->trace();
  } else if (dynamic_cast<const DomainError*>(&e)) {
    type = "domain";
  }
  j["error"] = {{"type", type}, {"message", e.what()}};
  if (!extra.is_null()) j["error"].update(extra);
  return j;
}

DomainSpec domain_from_json(const Json& j, std::vector<std::string>* warnings) {
  if (!j.is_object()) throw ValidationError("domain file: top level must be an object");
  auto outer = read_loop(j, "outer");
  auto hole = read_loop(j, "hole");
  if (outer.size() < 3 || hole.size() < 3) throw ValidationError("domain file: loops need at least 3 vertices");
  auto orient = [&](std::vector<Point2d>& loop, const char* name) {
    if (signed_loop_area(loop) < 0) {
      std::reverse(loop.begin(), loop.end());
      if (warnings) warnings->push_back(std::string(name) + " loop was clockwise; reversed");
    }
  };
  orient(outer, "outer");
  orient(hole, "hole");
  return DomainSpec(std::move(outer), ConvexPolygond(std::move(hole)));
}

Json domain_to_json(const DomainSpec& domain) {
  Json j;
  j["outer"] = Json::array();
  for (const auto& x : domain.outer()) j["outer"].push_back({x.x(), x.y()});
  j["hole"] = Json::array();
  for (const auto& x : domain.hole().vertices()) j["hole"].push_back({x.x(), x.y()});
  return j;
}

std::vector<std::string> fixture_names() {
  return {"square-in-square", "triangle-in-hexagon", "offcenter-square", "shell-identity"};
}

DomainSpec fixture_domain(const std::string& name, double h) {
  if (name == "square-in-square")
    return DomainSpec(rectangle(-2, -2, 2, 2), ConvexPolygond(rectangle(-0.5, -0.5, 0.5, 0.5)));
  if (name == "triangle-in-hexagon")
    return DomainSpec(regular_polygon(6, 2.0), ConvexPolygond(regular_polygon(3, 0.6, Point2d(0, 0), kPi / 2)));
  if (name == "offcenter-square")
    return DomainSpec(rectangle(-2.5, -1.5, 2.5, 1.5), ConvexPolygond(rectangle(0.3, -0.2, 1.3, 0.8)));
  if (name == "shell-identity") {
    if (!(h > 0)) throw ValidationError("shell-identity fixture: h must be positive");
    const double r1 = 1, r2 = 2;
    const int n1 = static_cast<int>(std::ceil(2 * kPi * r1 / h));
    const int n2 = static_cast<int>(std::ceil(2 * kPi * r2 / h));
    // Circumradius of the n1-gon with perimeter 2 pi r1.
    const double c1 = kPi * r1 / (n1 * std::sin(kPi / n1));
    const double hole_area = 0.5 * n1 * c1 * c1 * std::sin(2 * kPi / n1);
    const double outer_area = kPi * (r2 * r2 - r1 * r1) + hole_area;
    const double c2 = std::sqrt(outer_area / (0.5 * n2 * std::sin(2 * kPi / n2)));
    return DomainSpec(regular_polygon(n2, c2), ConvexPolygond(regular_polygon(n1, c1)));
  }
  throw ValidationError("unknown fixture '" + name + "'");
}

int worker_count() {
  if (const char* env = std::getenv("SHELLSPEC_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 256));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Json to_json(const QuermassVector<double>& q) {
  Json j;
  j["n"] = q.n;
  j["W"] = Json::array();
  for (int i = 0; i <= q.n; ++i) j["W"].push_back(q[i]);
  j["volume"] = q.volume();
  j["perimeter"] = q.perimeter();
  return j;
}

Json to_json(const AfReport<double>& af) {
  Json j;
  j["tolerance"] = AfReport<double>::kTolerance;
  j["min_margin"] = af.min_margin();
  j["ok"] = af.ok();
  j["margins"] = Json::array();
  for (const auto& m : af.margins) j["margins"].push_back({{"i", m.i}, {"j", m.j}, {"margin", m.margin}});
  j["matched_ball"] = Json::array();
  for (const auto& b : af.ball)
    j["matched_ball"].push_back({{"i", b.i}, {"body", b.body}, {"ball", b.matched_ball}});
  return j;
}

Json to_json(const ChainCheck& c) {
  Json j;
  j["name"] = c.name;
  j["relation"] = c.relation;
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["margin"] = c.margin;
  j["slack"] = c.slack;
  j["pass"] = c.pass;
  return j;
}

Json to_json(const WebChainReport& r) {
  Json j;
  j["kind"] = r.kind == ChainKind::eigen ? "eigen" : "torsion";
  j["p"] = r.p;
  j["beta"] = r.beta;
  j["h"] = r.h;
  j["shell"] = shell_json(r.shell);
  j["v_min"] = r.v_min;
  j["v_max"] = r.v_max;
  j["t_grid"] = r.t_grid;
  j["g"] = r.g;
  j["rho"] = r.rho;
  j["live_perimeter"] = r.live_perimeter;
  j["steiner_perimeter"] = r.steiner_perimeter;
  j["shell_perimeter"] = r.shell_perimeter;
  j["mu"] = r.mu;
  j["eta"] = r.eta;
  j["gradient_lhs"] = r.gradient_lhs;
  j["gradient_mid"] = r.gradient_mid;
  j["gradient_rhs"] = r.gradient_rhs;
  j["boundary_lhs"] = r.boundary_lhs;
  j["boundary_rhs"] = r.boundary_rhs;
  j["lp_lhs"] = r.lp_lhs;
  j["lp_rhs"] = r.lp_rhs;
  j["final_quotient"] = r.final_quotient;
  j[r.kind == ChainKind::eigen ? "shell_lambda" : "shell_torsion"] = r.shell_value;
  j["plateau_area"] = r.plateau_area;
  j["inverse_width"] = r.inverse_width;
  j["slack_constant"] = r.slack_constant;
  j["checks"] = Json::array();
  for (const auto& c : r.checks) j["checks"].push_back(to_json(c));
  j["ok"] = r.ok();
  return j;
}

RunResult run(const RunConfig& config) {
  config.validate();
  const std::string& cmd = config.command;
  if (cmd == "quermass") return run_quermass(config);
  if (cmd == "radial-eigen") return run_radial_eigen(config);
  if (cmd == "radial-torsion") return run_radial_torsion(config);
  if (cmd == "mesh-eigen") return run_mesh_eigen(config);
  if (cmd == "mesh-torsion") return run_mesh_torsion(config);
  if (cmd == "verify-eigen") return run_verify(config, ChainKind::eigen);
  if (cmd == "verify-torsion") return run_verify(config, ChainKind::torsion);
  if (cmd == "sweep-beta") return run_sweep(config);
  throw ValidationError("unknown command '" + cmd + "'");
}

}  // namespace shellbound
