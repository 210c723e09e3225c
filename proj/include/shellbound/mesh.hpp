#pragma once

// Triangulations of perforated polygonal domains Sigma = Omega \ closure(D).

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "shellbound/geometry.hpp"

namespace shellbound {

/// Outer simple polygon Omega (counter-clockwise) with a convex hole D strictly inside.
class DomainSpec {
public:
  DomainSpec(std::vector<Point2d> outer, ConvexPolygond hole);

  const std::vector<Point2d>& outer() const noexcept { return outer_; }
  const ConvexPolygond& hole() const noexcept { return hole_; }

  double outer_area() const;
  double outer_perimeter() const;
  /// |Sigma| = |Omega| - |D|
  double area() const { return outer_area() - hole_.area(); }
  bool outer_is_convex() const;
  /// Minimum distance between the hole boundary and the outer boundary.
  double clearance() const { return clearance_; }
  bool inside_outer(const Point2d& x) const;
  double distance_to_outer_boundary(const Point2d& x) const;

private:
  std::vector<Point2d> outer_;
  ConvexPolygond hole_;
  double clearance_ = 0;
};

enum class BoundaryTag : std::uint8_t { outer, inner };

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  BoundaryTag tag = BoundaryTag::outer;
};

enum class VertexTag : std::uint8_t { interior, inner, outer };

struct Mesh {
  Eigen::Matrix2Xd vertices;
  Eigen::Matrix3Xi triangles;  // counter-clockwise
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<VertexTag> vertex_tags;
  double target_h = 0;
  bool experimental = false;  // set for non-convex outer boundaries

  Eigen::Index num_vertices() const { return vertices.cols(); }
  Eigen::Index num_triangles() const { return triangles.cols(); }
  Point2d vertex(Eigen::Index i) const { return vertices.col(i); }
  double signed_area(Eigen::Index t) const;
  double area() const;
};

/// Delaunay triangulation of a point set (Bowyer-Watson with a super-triangle).
/// Returns counter-clockwise index triples into `points`.
Eigen::Matrix3Xi delaunay(const std::vector<Point2d>& points);

Mesh triangulate(const DomainSpec& domain, double h);

/// Closed boundary loops as vertex sequences; inner loops first.
std::vector<std::vector<int>> boundary_loops(const Mesh& mesh);

/// Checks orientation, conformity and the two-loop boundary structure; throws ValidationError.
void validate_mesh(const Mesh& mesh);

struct MeshQuality {
  double min_angle_deg = 0;
  double max_aspect = 0;  // circumradius / (2 inradius); 1 for equilateral
  double h_max = 0;       // longest edge
  bool admissible(double min_angle_required = 20.0) const { return min_angle_deg >= min_angle_required; }
};

MeshQuality mesh_quality(const Mesh& mesh);

/// Text format: "nv nt nbe", then nv lines "x y", nt lines "i j k", nbe lines "a b tag".
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

}  // namespace shellbound
