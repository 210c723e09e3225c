#include "shellbound/fem.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "shellbound/quadrature.hpp"

namespace shellbound {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct Element {
  std::array<int, 3> v;
  double area;
  Eigen::Matrix<double, 3, 2> grad;  // row k: gradient of the hat function of v[k]
};

struct InnerEdge {
  int a, b;
  double length;
};

struct FemContext {
  std::vector<Element> elements;
  std::vector<InnerEdge> inner;
  Eigen::Index nv = 0;

  explicit FemContext(const Mesh& mesh) : nv(mesh.num_vertices()) {
    elements.reserve(mesh.num_triangles());
    for (Eigen::Index t = 0; t < mesh.num_triangles(); ++t) {
      Element e;
      for (int k = 0; k < 3; ++k) e.v[k] = mesh.triangles(k, t);
      const Point2d x0 = mesh.vertex(e.v[0]), x1 = mesh.vertex(e.v[1]), x2 = mesh.vertex(e.v[2]);
      e.area = mesh.signed_area(t);
      const std::array<Point2d, 3> x{x0, x1, x2};
      for (int k = 0; k < 3; ++k) {
        const Point2d& a = x[(k + 1) % 3];
        const Point2d& b = x[(k + 2) % 3];
        e.grad(k, 0) = (a.y() - b.y()) / (2 * e.area);
        e.grad(k, 1) = (b.x() - a.x()) / (2 * e.area);
      }
      elements.push_back(e);
    }
    for (const auto& be : mesh.boundary_edges) {
      if (be.tag != BoundaryTag::inner) continue;
      inner.push_back({be.a, be.b, (mesh.vertex(be.a) - mesh.vertex(be.b)).norm()});
    }
  }
};

// Differences, so constant fields give an exactly zero gradient.
Eigen::RowVector2d element_gradient(const Element& e, const Eigen::Vector3d& ue) {
  return (ue(1) - ue(0)) * e.grad.row(1) + (ue(2) - ue(0)) * e.grad.row(2);
}

/// int_0^1 |a (1 - s) + b s|^p ds
double edge_power(double a, double b, double p) {
  const double scale = std::abs(a) + std::abs(b);
  if (scale == 0) return 0;
  if (std::abs(b - a) <= 1e-2 * scale) {
    return gauss16().integrate([&](double s) { return std::pow(std::abs(a + (b - a) * s), p); }, 0.0, 1.0);
  }
  // d/dx [sign(x) |x|^{p+1} / (p+1)] = |x|^p
  auto F = [p](double x) { return signed_pow(x, p + 1) / (p + 1); };
  return (F(b) - F(a)) / (b - a);
}

/// Sub-triangles of the reference triangle in barycentric coordinates.
std::vector<std::array<std::array<double, 3>, 3>> subdivide(int s) {
  std::vector<std::array<std::array<double, 3>, 3>> out;
  auto node = [s](int i, int j) {
    const double a = static_cast<double>(i) / s, b = static_cast<double>(j) / s;
    return std::array<double, 3>{1 - a - b, a, b};
  };
  for (int i = 0; i < s; ++i) {
    for (int j = 0; i + j < s; ++j) {
      out.push_back({node(i, j), node(i + 1, j), node(i, j + 1)});
      if (i + j + 1 < s) out.push_back({node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)});
    }
  }
  return out;
}

struct Evaluation {
  QuotientTerms terms;
  Eigen::VectorXd d_gradient;  // d/du int |grad u|^p
  Eigen::VectorXd d_boundary;  // d/du int_{dD} |u|^p
  Eigen::VectorXd d_power;     // d/du int |u|^q
};

Evaluation evaluate(const FemContext& ctx, const ScalarField& u, double p, double q, bool with_derivatives,
                    int subdivisions = 1) {
  Evaluation ev;
  if (with_derivatives) {
    ev.d_gradient = Eigen::VectorXd::Zero(ctx.nv);
    ev.d_boundary = Eigen::VectorXd::Zero(ctx.nv);
    ev.d_power = Eigen::VectorXd::Zero(ctx.nv);
  }
  const TriangleRule& rule = triangle_rule_degree8();
  const auto pieces = subdivide(subdivisions);
  const double piece_area = 1.0 / (subdivisions * subdivisions);
  for (const Element& e : ctx.elements) {
    const Eigen::Vector3d ue(u(e.v[0]), u(e.v[1]), u(e.v[2]));
    const Eigen::RowVector2d g = element_gradient(e, ue);
    const double g2 = g.squaredNorm();
    ev.terms.gradient += e.area * std::pow(g2, p / 2);
    if (with_derivatives && g2 > 0) {
      const Eigen::Vector3d dg = p * std::pow(g2, p / 2 - 1) * e.area * (e.grad * g.transpose());
      for (int k = 0; k < 3; ++k) ev.d_gradient(e.v[k]) += dg(k);
    }
    for (const auto& piece : pieces) {
      for (std::size_t k = 0; k < rule.weight.size(); ++k) {
        std::array<double, 3> lam{};
        for (int c = 0; c < 3; ++c) {
          for (int m = 0; m < 3; ++m) lam[m] += rule.bary[k][c] * piece[c][m];
        }
        const double val = lam[0] * ue(0) + lam[1] * ue(1) + lam[2] * ue(2);
        const double w = rule.weight[k] * e.area * piece_area;
        ev.terms.power += w * std::pow(std::abs(val), q);
        ev.terms.l1 += w * std::abs(val);
        if (with_derivatives && val != 0) {
          const double dv = q * signed_pow(val, q - 1) * w;
          for (int m = 0; m < 3; ++m) ev.d_power(e.v[m]) += dv * lam[m];
        }
      }
    }
  }
  const auto& gl = gauss16();
  for (const InnerEdge& edge : ctx.inner) {
    const double a = u(edge.a), b = u(edge.b);
    ev.terms.boundary += edge.length * edge_power(a, b, p);
    if (with_derivatives) {
      for (Eigen::Index k = 0; k < gl.nodes.size(); ++k) {
        const double s = (gl.nodes(k) + 1) / 2;
        const double val = a + (b - a) * s;
        const double w = gl.weights(k) / 2 * edge.length * p * signed_pow(val, p - 1);
        ev.d_boundary(edge.a) += w * (1 - s);
        ev.d_boundary(edge.b) += w * s;
      }
    }
  }
  return ev;
}

/// Global vertex -> unknown index, -1 for vertices frozen to zero.
std::vector<int> make_dofs(const Mesh& mesh, bool freeze_inner) {
  std::vector<int> dof(mesh.num_vertices(), -1);
  int next = 0;
  for (Eigen::Index i = 0; i < mesh.num_vertices(); ++i) {
    if (freeze_inner && mesh.vertex_tags[i] == VertexTag::inner) continue;
    dof[i] = next++;
  }
  return dof;
}

int count_dofs(const std::vector<int>& dof) {
  return static_cast<int>(std::count_if(dof.begin(), dof.end(), [](int d) { return d >= 0; }));
}

Eigen::VectorXd restrict_to(const std::vector<int>& dof, const Eigen::VectorXd& full) {
  Eigen::VectorXd r(count_dofs(dof));
  for (std::size_t i = 0; i < dof.size(); ++i) {
    if (dof[i] >= 0) r(dof[i]) = full(i);
  }
  return r;
}

Eigen::VectorXd extend(const std::vector<int>& dof, const Eigen::VectorXd& reduced) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dof.size()));
  for (std::size_t i = 0; i < dof.size(); ++i) {
    if (dof[i] >= 0) full(i) = reduced(dof[i]);
  }
  return full;
}

/// The quadratic forms of the p = 2 problem on the free unknowns.
struct LinearForms {
  SparseMatrix stiffness, boundary_mass, mass;
  Eigen::VectorXd load;  // int phi_i
};

LinearForms linear_forms(const FemContext& ctx, const std::vector<int>& dof) {
  const int n = count_dofs(dof);
  std::vector<Triplet> k, b, m;
  Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
  for (const Element& e : ctx.elements) {
    const Eigen::Matrix3d ke = e.area * e.grad * e.grad.transpose();
    for (int i = 0; i < 3; ++i) {
      const int di = dof[e.v[i]];
      if (di < 0) continue;
      load(di) += e.area / 3;
      for (int j = 0; j < 3; ++j) {
        const int dj = dof[e.v[j]];
        if (dj < 0) continue;
        k.emplace_back(di, dj, ke(i, j));
        m.emplace_back(di, dj, e.area / 12 * (i == j ? 2 : 1));
      }
    }
  }
  for (const InnerEdge& edge : ctx.inner) {
    const int da = dof[edge.a], db = dof[edge.b];
    if (da < 0 || db < 0) continue;
    b.emplace_back(da, da, edge.length / 3);
    b.emplace_back(db, db, edge.length / 3);
    b.emplace_back(da, db, edge.length / 6);
    b.emplace_back(db, da, edge.length / 6);
  }
  LinearForms f{SparseMatrix(n, n), SparseMatrix(n, n), SparseMatrix(n, n), load};
  f.stiffness.setFromTriplets(k.begin(), k.end());
  f.boundary_mass.setFromTriplets(b.begin(), b.end());
  f.mass.setFromTriplets(m.begin(), m.end());
  return f;
}

/// Regularized Hessian of int |grad u|^p + beta int_{dD} |u|^p on the free unknowns.
SparseMatrix numerator_hessian(const FemContext& ctx, const std::vector<int>& dof, const ScalarField& u, double p,
                               double beta) {
  double g2max = 0, umax = 0;
  std::vector<Eigen::RowVector2d> grads(ctx.elements.size());
  for (std::size_t t = 0; t < ctx.elements.size(); ++t) {
    const Element& e = ctx.elements[t];
    const Eigen::Vector3d ue(u(e.v[0]), u(e.v[1]), u(e.v[2]));
    grads[t] = element_gradient(e, ue);
    g2max = std::max(g2max, grads[t].squaredNorm());
  }
  umax = u.cwiseAbs().maxCoeff();
  const double delta_g = 1e-6 * std::max(g2max, std::numeric_limits<double>::min());
  const double delta_u = 1e-6 * std::max(umax * umax, std::numeric_limits<double>::min());

  const int n = count_dofs(dof);
  std::vector<Triplet> trip;
  trip.reserve(9 * ctx.elements.size() + 4 * ctx.inner.size());
  for (std::size_t t = 0; t < ctx.elements.size(); ++t) {
    const Element& e = ctx.elements[t];
    const Eigen::RowVector2d& g = grads[t];
    const double s2 = g.squaredNorm() + delta_g;
    const Eigen::Matrix2d local =
        p * std::pow(s2, p / 2 - 1) * (Eigen::Matrix2d::Identity() + (p - 2) * g.transpose() * g / s2);
    const Eigen::Matrix3d ke = e.area * e.grad * local * e.grad.transpose();
    for (int i = 0; i < 3; ++i) {
      const int di = dof[e.v[i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int dj = dof[e.v[j]];
        if (dj >= 0) trip.emplace_back(di, dj, ke(i, j));
      }
    }
  }
  const auto& gl = gauss16();
  for (const InnerEdge& edge : ctx.inner) {
    const int da = dof[edge.a], db = dof[edge.b];
    if (da < 0 || db < 0) continue;
    const double a = u(edge.a), b = u(edge.b);
    Eigen::Matrix2d local = Eigen::Matrix2d::Zero();
    for (Eigen::Index k = 0; k < gl.nodes.size(); ++k) {
      const double s = (gl.nodes(k) + 1) / 2;
      const double val = a + (b - a) * s;
      const double w = gl.weights(k) / 2 * edge.length * beta * p * (p - 1) * std::pow(val * val + delta_u, p / 2 - 1);
      const Eigen::Vector2d phi(1 - s, s);
      local += w * phi * phi.transpose();
    }
    trip.emplace_back(da, da, local(0, 0));
    trip.emplace_back(da, db, local(0, 1));
    trip.emplace_back(db, da, local(1, 0));
    trip.emplace_back(db, db, local(1, 1));
  }
  SparseMatrix H(n, n);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

double quotient_of(const QuotientTerms& t, double p, double beta, double q) {
  return (t.gradient + beta * t.boundary) / std::pow(t.power, p / q);
}

void normalize(ScalarField& u, double q, double power) {
  u *= std::pow(power, -1.0 / q);
  if (u.sum() < 0) u = -u;
}

/// Inverse iteration for (K + beta B) u = lambda M u on the free unknowns.
MeshEigenResult inverse_iteration(const FemContext& ctx, const std::vector<int>& dof, double beta,
                                  const FemOptions& options) {
  const LinearForms f = linear_forms(ctx, dof);
  const SparseMatrix A = f.stiffness + beta * f.boundary_mass;
  Eigen::SimplicialLDLT<SparseMatrix> solver(A);
  if (solver.info() != Eigen::Success) throw ConvergenceError("inverse iteration: factorization failed", {});

  MeshEigenResult result;
  result.beta = beta;
  Eigen::VectorXd u = Eigen::VectorXd::Ones(A.rows());
  const SparseMatrix absA = A.cwiseAbs(), absM = f.mass.cwiseAbs();
  double lambda = 0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    u = solver.solve(f.mass * u);
    u /= std::sqrt(u.dot(f.mass * u));
    const Eigen::VectorXd Mu = f.mass * u;
    lambda = u.dot(A * u);
    result.trace.push_back(lambda);
    result.residual = (A * u - lambda * Mu).norm() / (lambda * Mu).norm();
    result.iterations = it;
    // For small lambda, rounding in A u alone can sit above the tolerance.
    const Eigen::VectorXd au = u.cwiseAbs();
    const double floor = 64 * std::numeric_limits<double>::epsilon() * (absA * au + lambda * (absM * au)).norm() /
                         (lambda * Mu).norm();
    if (result.residual <= std::max(options.residual_tol, floor)) break;
    if (it == options.max_iterations) {
      throw ConvergenceError("inverse iteration did not converge", result.trace);
    }
  }
  if (u.sum() < 0) u = -u;
  result.field = extend(dof, u);
  result.lambda = lambda;
  return result;
}

/// Newton-preconditioned descent on the quotient. The preconditioner is the Hessian of the
/// numerator, so at p = q = 2 a unit step is exactly one inverse-iteration step.
void quotient_descent(const FemContext& ctx, const std::vector<int>& dof, double p, double beta, double q,
                      const FemOptions& options, MeshEigenResult& result) {
  ScalarField u = result.field;
  Evaluation ev = evaluate(ctx, u, p, q, true);
  normalize(u, q, ev.terms.power);
  ev = evaluate(ctx, u, p, q, true);
  double Q = quotient_of(ev.terms, p, beta, q);
  result.trace.assign(1, Q);

  Eigen::SimplicialLDLT<SparseMatrix> solver;
  bool analyzed = false;
  for (int it = 1;; ++it) {
    if (it > options.max_iterations) throw ConvergenceError("quotient descent did not converge", result.trace);
    const double D = std::pow(ev.terms.power, p / q);
    const Eigen::VectorXd dD = (p / q) * std::pow(ev.terms.power, p / q - 1) * ev.d_power;
    const Eigen::VectorXd r = restrict_to(dof, ev.d_gradient + beta * ev.d_boundary - Q * dD);
    const SparseMatrix H = numerator_hessian(ctx, dof, u, p, beta);
    if (!analyzed) {
      solver.analyzePattern(H);
      analyzed = true;
    }
    solver.factorize(H);
    if (solver.info() != Eigen::Success) throw ConvergenceError("quotient descent: factorization failed", result.trace);
    const ScalarField d = extend(dof, -solver.solve(r));
    const double slope = r.dot(restrict_to(dof, d)) / D;
    if (!(slope < 0)) {
      result.iterations = it;
      result.residual = 0;
      break;
    }
    double alpha = 1;
    bool accepted = false;
    ScalarField trial;
    Evaluation trial_ev;
    double trial_Q = Q;
    for (int k = 0; k < 50; ++k, alpha /= 2) {
      trial = u + alpha * d;
      trial_ev = evaluate(ctx, trial, p, q, false);
      trial_Q = quotient_of(trial_ev.terms, p, beta, q);
      if (trial_Q <= Q + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
    }
    result.iterations = it;
    if (!accepted) {
      // No decrease representable in double precision: the quotient is stationary.
      result.residual = 0;
      break;
    }
    normalize(trial, q, trial_ev.terms.power);
    u = trial;
    ev = evaluate(ctx, u, p, q, true);
    const double next = quotient_of(ev.terms, p, beta, q);
    const double change = (Q - next) / next;
    Q = std::min(Q, next);
    result.trace.push_back(next);
    result.residual = std::abs(change);
    if (std::abs(change) <= options.tol) break;
  }
  result.field = u;
}

void require_p(double p) {
  if (!(p > 1) || !std::isfinite(p)) throw DomainError("p must lie in (1, inf)");
}

MeshEigenResult solve_eigen(const Mesh& mesh, double p, double beta, double q, bool freeze_inner,
                            const FemOptions& options) {
  require_p(p);
  if (!(beta >= 0)) throw DomainError("beta must be nonnegative");
  if (!(q >= 1 && q <= p)) throw DomainError("q_exponent must lie in [1, p]");
  const FemContext ctx(mesh);
  const auto dof = make_dofs(mesh, freeze_inner);
  MeshEigenResult result = inverse_iteration(ctx, dof, freeze_inner ? 0.0 : beta, options);
  if (p != 2 || q != 2) {
    const int linear_iterations = result.iterations;
    quotient_descent(ctx, dof, p, freeze_inner ? 0.0 : beta, q, options, result);
    result.iterations += linear_iterations;
  }
  result.beta = beta;
  result.p = p;
  result.q_exponent = q;
  const double b = freeze_inner ? 0.0 : beta;
  const Evaluation coarse = evaluate(ctx, result.field, p, q, false, 1);
  const Evaluation fine = evaluate(ctx, result.field, p, q, false, 2);
  result.lambda = quotient_of(coarse.terms, p, b, q);
  result.quadrature_slack = std::abs(quotient_of(fine.terms, p, b, q) - result.lambda);
  result.bound_direction = BoundDirection::upper_bound_discrete;
  return result;
}

}  // namespace

QuotientTerms assemble_terms(const Mesh& mesh, double p, const ScalarField& field, double q_exponent,
                             int subdivisions) {
  if (field.size() != mesh.num_vertices()) throw ValidationError("field size does not match the mesh");
  return evaluate(FemContext(mesh), field, p, q_exponent, false, subdivisions).terms;
}

double assemble_quotient(const Mesh& mesh, double p, double beta, const ScalarField& field, double q_exponent) {
  require_p(p);
  if (!(q_exponent >= 1 && q_exponent <= p)) throw DomainError("q_exponent must lie in [1, p]");
  if (field.size() != mesh.num_vertices()) throw ValidationError("field size does not match the mesh");
  if (!field.allFinite()) throw DomainError("assemble_quotient: non-finite field");
  if (field.cwiseAbs().maxCoeff() == 0) throw DomainError("assemble_quotient: zero field");
  return quotient_of(assemble_terms(mesh, p, field, q_exponent), p, beta, q_exponent);
}

double torsion_quotient(const Mesh& mesh, double p, double beta, const ScalarField& field) {
  require_p(p);
  if (field.size() != mesh.num_vertices()) throw ValidationError("field size does not match the mesh");
  if (field.cwiseAbs().maxCoeff() == 0) throw DomainError("torsion_quotient: zero field");
  const QuotientTerms t = assemble_terms(mesh, p, field, 1.0);
  return std::pow(t.l1, p) / (t.gradient + beta * t.boundary);
}

double mesh_beta_derivative(const Mesh& mesh, double p, const ScalarField& field) {
  const QuotientTerms t = assemble_terms(mesh, p, field, p);
  return t.boundary / t.power;
}

double inner_boundary_length(const Mesh& mesh) {
  double total = 0;
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag == BoundaryTag::inner) total += (mesh.vertex(e.a) - mesh.vertex(e.b)).norm();
  }
  return total;
}

MeshEigenResult minimize_eigen(const Mesh& mesh, double p, double beta, double q_exponent,
                               const FemOptions& options) {
  if (!(beta > 0)) throw DomainError("minimize_eigen: beta must be positive");
  return solve_eigen(mesh, p, beta, q_exponent, false, options);
}

MeshEigenResult dirichlet_neumann_eigen(const Mesh& mesh, double p, const FemOptions& options) {
  MeshEigenResult r = solve_eigen(mesh, p, 0.0, p, true, options);
  r.beta = std::numeric_limits<double>::infinity();
  return r;
}

MeshTorsionResult maximize_torsion(const Mesh& mesh, double p, double beta, const FemOptions& options) {
  require_p(p);
  if (!(beta > 0)) throw DomainError("maximize_torsion: beta must be positive");
  const FemContext ctx(mesh);
  const auto dof = make_dofs(mesh, false);
  const LinearForms f = linear_forms(ctx, dof);
  const SparseMatrix A = f.stiffness + beta * f.boundary_mass;
  Eigen::SimplicialLDLT<SparseMatrix> linear(A);
  if (linear.info() != Eigen::Success) throw ConvergenceError("torsion: factorization failed", {});
  ScalarField u = linear.solve(f.load);

  MeshTorsionResult result;
  result.beta = beta;
  result.p = p;
  result.iterations = 1;
  auto energy = [&](const Evaluation& ev) { return (ev.terms.gradient + beta * ev.terms.boundary) / p - ev.terms.l1; };

  if (p != 2) {
    // Best multiple of the linear solution as the starting point: J(s u) = s^p N / p - s int u.
    Evaluation ev = evaluate(ctx, u, p, 1.0, true);
    u *= std::pow(ev.terms.l1 / (ev.terms.gradient + beta * ev.terms.boundary), 1.0 / (p - 1));
    ev = evaluate(ctx, u, p, 1.0, true);
    double J = energy(ev);
    result.trace.push_back(J);
    Eigen::SimplicialLDLT<SparseMatrix> solver;
    bool analyzed = false;
    for (int it = 1;; ++it) {
      if (it > options.max_iterations) throw ConvergenceError("torsion Newton did not converge", result.trace);
      const Eigen::VectorXd grad = ev.d_gradient + beta * ev.d_boundary - p * f.load;  // p dJ/du
      const SparseMatrix H = numerator_hessian(ctx, dof, u, p, beta);
      if (!analyzed) {
        solver.analyzePattern(H);
        analyzed = true;
      }
      solver.factorize(H);
      if (solver.info() != Eigen::Success) throw ConvergenceError("torsion: factorization failed", result.trace);
      const Eigen::VectorXd d = -solver.solve(grad);
      const double slope = grad.dot(d) / p;
      result.iterations = it + 1;
      if (!(slope < 0)) break;
      double alpha = 1;
      bool accepted = false;
      ScalarField trial;
      Evaluation trial_ev;
      for (int k = 0; k < 50; ++k, alpha /= 2) {
        trial = u + alpha * d;
        trial_ev = evaluate(ctx, trial, p, 1.0, false);
        if (energy(trial_ev) <= J + 1e-4 * alpha * slope) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      u = trial;
      ev = evaluate(ctx, u, p, 1.0, true);
      const double next = energy(ev);
      const double change = std::abs(J - next) / std::max(std::abs(next), 1e-300);
      J = next;
      result.trace.push_back(J);
      if (change <= options.tol * 1e-2 && -slope <= options.tol * std::abs(J)) break;
    }
  } else {
    result.trace.push_back(0.5 * u.dot(A * u) - u.dot(f.load));
  }
  result.field = u;
  const QuotientTerms coarse = evaluate(ctx, u, p, 1.0, false, 1).terms;
  const QuotientTerms fine = evaluate(ctx, u, p, 1.0, false, 2).terms;
  auto tq = [&](const QuotientTerms& t) { return std::pow(t.l1, p) / (t.gradient + beta * t.boundary); };
  result.T = tq(coarse);
  result.quadrature_slack = std::abs(tq(fine) - result.T);
  result.bound_direction = BoundDirection::lower_bound_discrete;
  return result;
}

TrivialBounds trivial_bounds(const Mesh& mesh, double p, double beta, const FemOptions& options) {
  TrivialBounds b;
  b.constant_field = beta * inner_boundary_length(mesh) / mesh.area();
  b.dirichlet_neumann = dirichlet_neumann_eigen(mesh, p, options).lambda;
  return b;
}

}  // namespace shellbound
