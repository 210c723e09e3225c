#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "shellbound/mesh.hpp"

using namespace shellbound;
using doctest::Approx;

namespace {

std::vector<Point2d> rect(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }

DomainSpec square_annulus() { return DomainSpec(rect(-2, -2, 2, 2), ConvexPolygond(rect(-0.5, -0.5, 0.5, 0.5))); }

std::vector<Point2d> regular(int m, double r, double phase = 0, Point2d c = Point2d(0, 0)) {
  std::vector<Point2d> v;
  for (int k = 0; k < m; ++k) v.push_back(c + r * Point2d(std::cos(phase + 2 * oracle::kPi * k / m), std::sin(phase + 2 * oracle::kPi * k / m)));
  return v;
}

// Largest relative intrusion of any point into a triangle's circumcircle (<= 0 when empty).
double worst_incircle(const Eigen::Matrix2Xd& pts, const Eigen::Matrix3Xi& tris) {
  double worst = -1;
  for (Eigen::Index t = 0; t < tris.cols(); ++t) {
    const Point2d a = pts.col(tris(0, t)), b = pts.col(tris(1, t)), c = pts.col(tris(2, t));
    const double d = 2 * (a.x() * (b.y() - c.y()) + b.x() * (c.y() - a.y()) + c.x() * (a.y() - b.y()));
    const Point2d centre((a.squaredNorm() * (b.y() - c.y()) + b.squaredNorm() * (c.y() - a.y()) + c.squaredNorm() * (a.y() - b.y())) / d,
                         (a.squaredNorm() * (c.x() - b.x()) + b.squaredNorm() * (a.x() - c.x()) + c.squaredNorm() * (b.x() - a.x())) / d);
    const double R = (a - centre).norm();
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
      if (i == tris(0, t) || i == tris(1, t) || i == tris(2, t)) continue;
      worst = std::max(worst, (R - (Point2d(pts.col(i)) - centre).norm()) / R);
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("square annulus mesh") {
  const auto domain = square_annulus();
  const Mesh m = triangulate(domain, 0.1);
  CHECK_NOTHROW(validate_mesh(m));
  CHECK(m.area() == Approx(15).epsilon(1e-10));
  CHECK(std::abs(m.area() - 15) < 1e-10);
  CHECK(boundary_loops(m).size() == 2);
  CHECK_FALSE(m.experimental);
  for (Eigen::Index t = 0; t < m.num_triangles(); ++t) CHECK(m.signed_area(t) >= 1e-14 * 0.01);

  const Mesh fine = triangulate(domain, 0.05);
  const double ratio = double(fine.num_vertices()) / m.num_vertices();
  CHECK(ratio > 4 * 0.7);
  CHECK(ratio < 4 * 1.3);

  const auto q = mesh_quality(fine);
  CHECK(q.min_angle_deg >= 30);
  CHECK(q.admissible());
  CHECK(q.h_max < 2 * 0.05);
}

TEST_CASE("boundary vertices sit on the polygons") {
  const DomainSpec domain(regular(6, 2.0), ConvexPolygond(regular(3, 0.6, oracle::kPi / 2)));
  const Mesh m = triangulate(domain, 0.05);
  CHECK(std::abs(m.area() - domain.area()) < 1e-10);
  const auto loops = boundary_loops(m);
  REQUIRE(loops.size() == 2);
  const auto& hole = domain.hole();
  for (int v : loops[0]) {
    CHECK(m.vertex_tags[v] == VertexTag::inner);
    double d = 1e300;
    for (std::size_t i = 0; i < hole.size(); ++i) d = std::min(d, segment_distance<double>(m.vertex(v), hole[i], hole.next(i)));
    CHECK(d < 1e-12);
  }
  for (int v : loops[1]) {
    CHECK(m.vertex_tags[v] == VertexTag::outer);
    CHECK(domain.distance_to_outer_boundary(m.vertex(v)) < 1e-12);
  }
  for (const auto& e : m.boundary_edges) {
    const Point2d mid = 0.5 * (m.vertex(e.a) + m.vertex(e.b));
    if (e.tag == BoundaryTag::inner)
      CHECK(distance_to_body(hole, mid) < 1e-12);
    else
      CHECK(domain.distance_to_outer_boundary(mid) < 1e-12);
    CHECK((m.vertex(e.b) - m.vertex(e.a)).norm() <= 0.05 * (1 + 1e-12));
  }
}

TEST_CASE("delaunay of random point sets") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 20; ++k) {
    std::vector<Point2d> pts(50 + 20 * k);
    for (auto& x : pts) x = Point2d(u(rng), u(rng));
    const Eigen::Matrix3Xi tris = delaunay(pts);
    Eigen::Matrix2Xd P(2, pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) P.col(i) = pts[i];
    CHECK(worst_incircle(P, tris) <= 1e-12);
    // A triangulation of the hull: 2n - h - 2 triangles.
    CHECK(tris.cols() == long(2 * pts.size() - convex_hull(pts).size() - 2));
  }
  CHECK_THROWS_AS(delaunay({{0, 0}, {1, 0}}), ValidationError);
}

TEST_CASE("random perforated domains") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> sides(3, 8);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 12; ++k) {
    const auto outer = regular(sides(rng), 3.0, 2 * oracle::kPi * u(rng));
    auto hull = oracle::random_hull(rng);
    std::vector<Point2d> hv = hull.vertices();
    double reach = 0;
    for (const auto& x : hv) reach = std::max(reach, (x - hull.centroid()).norm());
    const Point2d shift(0.3 * (u(rng) - 0.5), 0.3 * (u(rng) - 0.5));
    const Point2d c = hull.centroid();
    for (auto& x : hv) x = shift + (x - c) * (0.9 / reach);
    const DomainSpec domain(outer, ConvexPolygond(hv));
    const double h = std::min(0.15, 0.5 * domain.clearance());
    const Mesh m = triangulate(domain, h);
    CAPTURE(k);
    CHECK_NOTHROW(validate_mesh(m));
    CHECK(boundary_loops(m).size() == 2);
    CHECK(std::abs(m.area() - domain.area()) < 1e-10 * domain.area());
    CHECK(worst_incircle(m.vertices, m.triangles) <= 1e-12);
  }
}

TEST_CASE("nonconvex outer boundary is flagged") {
  const std::vector<Point2d> ell{{-2, -2}, {2, -2}, {2, 0}, {0, 0}, {0, 2}, {-2, 2}};
  const DomainSpec domain(ell, ConvexPolygond(rect(-1.2, -1.2, -0.6, -0.6)));
  CHECK_FALSE(domain.outer_is_convex());
  const Mesh m = triangulate(domain, 0.1);
  CHECK(m.experimental);
  CHECK_NOTHROW(validate_mesh(m));
  CHECK(std::abs(m.area() - domain.area()) < 1e-10);
}

TEST_CASE("domain errors") {
  const auto hole = ConvexPolygond(rect(-0.5, -0.5, 0.5, 0.5));
  CHECK_THROWS_AS(DomainSpec(rect(-0.4, -2, 2, 2), hole), ValidationError);            // hole pokes out
  CHECK_THROWS_AS(DomainSpec({{-2, -2}, {-2, 2}, {2, 2}, {2, -2}}, hole), ValidationError);  // clockwise
  CHECK_THROWS_AS(DomainSpec({{-2, -2}, {2, 2}, {2, -2}, {-2, 2}}, hole), ValidationError);  // bow tie
  CHECK_THROWS_AS(triangulate(square_annulus(), 0.0), ValidationError);
  CHECK_THROWS_AS(triangulate(square_annulus(), 2.0), ValidationError);  // above the clearance 1.5
}

TEST_CASE("quality statistics") {
  Mesh sliver;
  sliver.vertices.resize(2, 3);
  sliver.vertices << 0, 1, 0.5, 0, 0, 0.01;
  sliver.triangles.resize(3, 1);
  sliver.triangles << 0, 1, 2;
  const auto q = mesh_quality(sliver);
  CHECK_FALSE(q.admissible());
  CHECK(q.max_aspect > 10);

  Mesh equilateral = sliver;
  equilateral.vertices << 0, 1, 0.5, 0, 0, std::sqrt(3.0) / 2;
  CHECK(mesh_quality(equilateral).min_angle_deg == Approx(60));
  CHECK(mesh_quality(equilateral).max_aspect == Approx(1));

  CHECK_THROWS_AS(mesh_quality(Mesh{}), ValidationError);
  CHECK_THROWS_AS(validate_mesh(Mesh{}), ValidationError);
}

TEST_CASE("text round trip") {
  const Mesh m = triangulate(square_annulus(), 0.2);
  std::stringstream ss;
  write_mesh(ss, m);
  const std::string first = ss.str();
  CHECK(first.substr(0, first.find('\n')) ==
        std::to_string(m.num_vertices()) + " " + std::to_string(m.num_triangles()) + " " + std::to_string(m.boundary_edges.size()));
  const Mesh back = read_mesh(ss);
  CHECK(back.vertices == m.vertices);
  CHECK(back.triangles == m.triangles);
  REQUIRE(back.boundary_edges.size() == m.boundary_edges.size());
  for (std::size_t i = 0; i < m.boundary_edges.size(); ++i) {
    CHECK(back.boundary_edges[i].a == m.boundary_edges[i].a);
    CHECK(back.boundary_edges[i].tag == m.boundary_edges[i].tag);
  }
  std::istringstream bad("3 1 0\n0 0\n1 0\n");
  CHECK_THROWS_AS(read_mesh(bad), ValidationError);
}
