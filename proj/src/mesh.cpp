#include "shellbound/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <string>

namespace shellbound {

namespace {

double orient(const Point2d& a, const Point2d& b, const Point2d& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool segments_intersect(const Point2d& a, const Point2d& b, const Point2d& c, const Point2d& d) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
  auto on_segment = [](const Point2d& p, const Point2d& q, const Point2d& x) {
    return x.x() >= std::min(p.x(), q.x()) && x.x() <= std::max(p.x(), q.x()) && x.y() >= std::min(p.y(), q.y()) &&
           x.y() <= std::max(p.y(), q.y());
  };
  return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) || (o3 == 0 && on_segment(c, d, a)) ||
         (o4 == 0 && on_segment(c, d, b));
}

double segment_segment_distance(const Point2d& a, const Point2d& b, const Point2d& c, const Point2d& d) {
  if (segments_intersect(a, b, c, d)) return 0;
  return std::min({segment_distance<double>(a, c, d), segment_distance<double>(b, c, d),
                   segment_distance<double>(c, a, b), segment_distance<double>(d, a, b)});
}

/// Incremental Bowyer-Watson with walking point location. Vertices 0..2 are the
/// super-triangle; input point i is stored at index i + 3.
class BowyerWatson {
public:
  explicit BowyerWatson(const std::vector<Point2d>& input) {
    Eigen::AlignedBox2d box;
    for (const auto& p : input) box.extend(p);
    const Point2d c = box.center();
    const double r = std::max(box.diagonal().norm(), 1e-12) * 100;
    points_.reserve(input.size() + 3);
    for (int k = 0; k < 3; ++k) {
      const double angle = std::numbers::pi / 2 + 2 * std::numbers::pi * k / 3;
      points_.push_back(c + 2 * r * Point2d(std::cos(angle), std::sin(angle)));
    }
    points_.insert(points_.end(), input.begin(), input.end());
    add_triangle({0, 1, 2}, {-1, -1, -1});
    for (std::size_t i = 0; i < input.size(); ++i) insert(static_cast<int>(i) + 3);
  }

  Eigen::Matrix3Xi result() const {
    std::vector<std::array<int, 3>> kept;
    for (const auto& t : tris_) {
      if (!t.alive || t.v[0] < 3 || t.v[1] < 3 || t.v[2] < 3) continue;
      kept.push_back({t.v[0] - 3, t.v[1] - 3, t.v[2] - 3});
    }
    Eigen::Matrix3Xi out(3, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) out.col(i) << kept[i][0], kept[i][1], kept[i][2];
    return out;
  }

private:
  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> nb;  // nb[e] is across the edge opposite v[e]
    Point2d center;
    double radius2;
    bool alive;
    int stamp;
  };

  int add_triangle(const std::array<int, 3>& v, const std::array<int, 3>& nb) {
    const Point2d& a = points_[v[0]];
    const Point2d b = points_[v[1]] - a, c = points_[v[2]] - a;
    const double d = 2 * (b.x() * c.y() - b.y() * c.x());
    const Point2d u((c.y() * b.squaredNorm() - b.y() * c.squaredNorm()) / d,
                    (b.x() * c.squaredNorm() - c.x() * b.squaredNorm()) / d);
    tris_.push_back({v, nb, a + u, u.squaredNorm(), true, -1});
    return static_cast<int>(tris_.size()) - 1;
  }

  bool in_circumcircle(int t, const Point2d& p) const {
    const auto& v = tris_[t].v;
    const int super = (v[0] < 3) + (v[1] < 3) + (v[2] < 3);
    if (super == 1) {
      // Treat the super vertex as a point at infinity: the circle degenerates to the open
      // half-plane on its side of the real edge. A finite super-triangle loses hull triangles.
      const int e = v[0] < 3 ? 0 : (v[1] < 3 ? 1 : 2);
      const Point2d& a = points_[v[(e + 1) % 3]];
      const Point2d& b = points_[v[(e + 2) % 3]];
      return orient(a, b, p) > 1e-12 * (b - a).norm() * ((p - a).norm() + (p - b).norm());
    }
    return (p - tris_[t].center).squaredNorm() < tris_[t].radius2 * (1 - 2e-12);
  }

  // Orientation of p against edge (a, b) scaled by the edge length, so points on an edge
  // read as zero up to rounding in either adjacent triangle.
  double edge_side(int a, int b, const Point2d& p) const {
    const Point2d& pa = points_[a];
    const Point2d& pb = points_[b];
    return orient(pa, pb, p) / std::max((pb - pa).norm() * ((p - pa).norm() + (p - pb).norm()), 1e-300);
  }

  int locate(const Point2d& p) {
    constexpr double tol = 1e-13;
    int t = last_;
    int rotate = 0;
    for (std::size_t step = 0; step < 4 * tris_.size() + 16; ++step) {
      bool moved = false;
      for (int k = 0; k < 3; ++k) {
        const int e = (k + rotate) % 3;
        const auto& tri = tris_[t];
        if (tri.nb[e] >= 0 && edge_side(tri.v[(e + 1) % 3], tri.v[(e + 2) % 3], p) < -tol) {
          t = tri.nb[e];
          moved = true;
          break;
        }
      }
      if (!moved) return t;
      rotate = (rotate + 1) % 3;
    }
    // The walk cycled; take the triangle p is least outside of.
    int best = -1;
    double best_side = -std::numeric_limits<double>::infinity();
    for (std::size_t t2 = 0; t2 < tris_.size(); ++t2) {
      if (!tris_[t2].alive) continue;
      const auto& v = tris_[t2].v;
      const double side = std::min({edge_side(v[0], v[1], p), edge_side(v[1], v[2], p), edge_side(v[2], v[0], p)});
      if (side > best_side) {
        best_side = side;
        best = static_cast<int>(t2);
      }
    }
    if (best < 0 || best_side < -tol) throw ValidationError("delaunay: point location failed");
    return best;
  }

  void insert(int pi) {
    const Point2d& p = points_[pi];
    const int start = locate(p);
    std::vector<int> cavity{start};
    tris_[start].stamp = pi;
    for (std::size_t k = 0; k < cavity.size(); ++k) {
      for (int nb : tris_[cavity[k]].nb) {
        if (nb >= 0 && tris_[nb].stamp != pi && in_circumcircle(nb, p)) {
          tris_[nb].stamp = pi;
          cavity.push_back(nb);
        }
      }
    }

    struct Rim {
      int a, b, outside;
    };
    std::vector<Rim> rim;
    for (;;) {
      rim.clear();
      int grow = -1;
      for (int t : cavity) {
        for (int e = 0; e < 3 && grow < 0; ++e) {
          const int nb = tris_[t].nb[e];
          if (nb >= 0 && tris_[nb].stamp == pi) continue;
          const int a = tris_[t].v[(e + 1) % 3], b = tris_[t].v[(e + 2) % 3];
          const double len = (points_[b] - points_[a]).norm() * (p - points_[a]).norm();
          if (orient(points_[a], points_[b], p) <= 1e-13 * len) {
            if (nb < 0) throw ValidationError("delaunay: point on the super-triangle boundary");
            grow = nb;
          }
          rim.push_back({a, b, nb});
        }
        if (grow >= 0) break;
      }
      if (grow < 0) break;
      tris_[grow].stamp = pi;
      cavity.push_back(grow);
    }

    for (int t : cavity) tris_[t].alive = false;
    std::vector<int> created;
    created.reserve(rim.size());
    for (const auto& r : rim) {
      const int t = add_triangle({r.a, r.b, pi}, {-1, -1, r.outside});
      created.push_back(t);
      if (r.outside >= 0) {
        for (int& slot : tris_[r.outside].nb) {
          if (slot >= 0 && !tris_[slot].alive && tris_[slot].stamp == pi) {
            // The outside triangle shares exactly the edge (b, a) with the cavity.
            const auto& ov = tris_[r.outside].v;
            const int idx = static_cast<int>(&slot - tris_[r.outside].nb.data());
            const int oa = ov[(idx + 1) % 3], ob = ov[(idx + 2) % 3];
            if (oa == r.b && ob == r.a) {
              slot = t;
              break;
            }
          }
        }
      }
    }
    // Link the fan: opposite a lies edge (b, p), shared with the triangle starting at b.
    for (std::size_t i = 0; i < created.size(); ++i) {
      auto& ti = tris_[created[i]];
      for (std::size_t j = 0; j < created.size(); ++j) {
        if (i == j) continue;
        const auto& tj = tris_[created[j]];
        if (tj.v[0] == ti.v[1]) ti.nb[0] = created[j];
        if (tj.v[1] == ti.v[0]) ti.nb[1] = created[j];
      }
    }
    last_ = created.back();
  }

  std::vector<Point2d> points_;
  std::vector<Tri> tris_;
  int last_ = 0;
};

std::vector<Point2d> sample_loop(const std::vector<Point2d>& loop, double h) {
  std::vector<Point2d> out;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Point2d& a = loop[i];
    const Point2d& b = loop[(i + 1) % loop.size()];
    const int k = std::max(1, static_cast<int>(std::ceil((b - a).norm() / h - 1e-9)));
    for (int j = 0; j < k; ++j) out.push_back(a + (b - a) * (static_cast<double>(j) / k));
  }
  return out;
}

}  // namespace

DomainSpec::DomainSpec(std::vector<Point2d> outer, ConvexPolygond hole)
    : outer_(std::move(outer)), hole_(std::move(hole)) {
  const std::size_t m = outer_.size();
  if (m < 3) throw ValidationError("DomainSpec: outer polygon needs at least 3 vertices");
  for (const auto& v : outer_) {
    if (!v.allFinite()) throw ValidationError("DomainSpec: non-finite outer vertex");
  }
  if (!(outer_area() > 0)) throw ValidationError("DomainSpec: outer polygon must be counter-clockwise");
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == m - 1);
      if (adjacent) continue;
      if (segments_intersect(outer_[i], outer_[(i + 1) % m], outer_[j], outer_[(j + 1) % m])) {
        throw ValidationError("DomainSpec: outer polygon self-intersects (edges " + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
      }
    }
  }
  for (const auto& v : hole_.vertices()) {
    if (!inside_outer(v)) throw ValidationError("DomainSpec: hole vertex outside the outer polygon");
  }
  clearance_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hole_.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      clearance_ = std::min(clearance_,
                            segment_segment_distance(hole_[i], hole_.next(i), outer_[j], outer_[(j + 1) % m]));
    }
  }
  if (!(clearance_ > 0)) throw ValidationError("DomainSpec: hole touches the outer boundary");
}

double DomainSpec::outer_area() const {
  double twice = 0;
  for (std::size_t i = 0; i < outer_.size(); ++i) {
    const Point2d& a = outer_[i];
    const Point2d& b = outer_[(i + 1) % outer_.size()];
    twice += a.x() * b.y() - a.y() * b.x();
  }
  return twice / 2;
}

double DomainSpec::outer_perimeter() const {
  double total = 0;
  for (std::size_t i = 0; i < outer_.size(); ++i) total += (outer_[(i + 1) % outer_.size()] - outer_[i]).norm();
  return total;
}

bool DomainSpec::outer_is_convex() const {
  const std::size_t m = outer_.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (orient(outer_[i], outer_[(i + 1) % m], outer_[(i + 2) % m]) < 0) return false;
  }
  return true;
}

bool DomainSpec::inside_outer(const Point2d& x) const {
  bool inside = false;
  for (std::size_t i = 0, j = outer_.size() - 1; i < outer_.size(); j = i++) {
    const Point2d& a = outer_[i];
    const Point2d& b = outer_[j];
    if ((a.y() > x.y()) != (b.y() > x.y()) && x.x() < (b.x() - a.x()) * (x.y() - a.y()) / (b.y() - a.y()) + a.x()) {
      inside = !inside;
    }
  }
  return inside;
}

double DomainSpec::distance_to_outer_boundary(const Point2d& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < outer_.size(); ++i) {
    d = std::min(d, segment_distance<double>(x, outer_[i], outer_[(i + 1) % outer_.size()]));
  }
  return d;
}

double Mesh::signed_area(Eigen::Index t) const {
  return 0.5 * orient(vertices.col(triangles(0, t)), vertices.col(triangles(1, t)), vertices.col(triangles(2, t)));
}

double Mesh::area() const {
  double total = 0;
  for (Eigen::Index t = 0; t < num_triangles(); ++t) total += signed_area(t);
  return total;
}

Eigen::Matrix3Xi delaunay(const std::vector<Point2d>& points) {
  if (points.size() < 3) throw ValidationError("delaunay: need at least 3 points");
  return BowyerWatson(points).result();
}

Mesh triangulate(const DomainSpec& domain, double h) {
  if (!(h > 0)) throw ValidationError("triangulate: h must be positive");
  if (!(h < domain.clearance())) {
    throw ValidationError("triangulate: h = " + std::to_string(h) + " is not below the hole clearance " +
                          std::to_string(domain.clearance()));
  }
  const ConvexPolygond& hole = domain.hole();

  std::vector<Point2d> points;
  std::vector<VertexTag> tags;
  for (const auto& p : sample_loop(hole.vertices(), h)) {
    points.push_back(p);
    tags.push_back(VertexTag::inner);
  }
  for (const auto& p : sample_loop(domain.outer(), h)) {
    points.push_back(p);
    tags.push_back(VertexTag::outer);
  }

  // Hexagonal lattice, kept away from both boundaries.
  Eigen::AlignedBox2d box;
  for (const auto& v : domain.outer()) box.extend(v);
  const double margin = 0.7 * h;
  const double dy = h * std::sqrt(3.0) / 2;
  const int rows = static_cast<int>(std::ceil(box.sizes().y() / dy)) + 1;
  const int cols = static_cast<int>(std::ceil(box.sizes().x() / h)) + 2;
  for (int j = 0; j <= rows; ++j) {
    const double y = box.min().y() + j * dy;
    for (int i = -1; i <= cols; ++i) {
      const Point2d x(box.min().x() + (i + (j % 2 ? 0.5 : 0.0)) * h, y);
      if (!domain.inside_outer(x) || hole.contains(x)) continue;
      if (domain.distance_to_outer_boundary(x) < margin || distance_to_body(hole, x) < margin) continue;
      points.push_back(x);
      tags.push_back(VertexTag::interior);
    }
  }

  const Eigen::Matrix3Xi all = delaunay(points);
  std::vector<int> keep;
  for (Eigen::Index t = 0; t < all.cols(); ++t) {
    const Point2d c = (points[all(0, t)] + points[all(1, t)] + points[all(2, t)]) / 3;
    if (domain.inside_outer(c) && !hole.contains(c)) keep.push_back(static_cast<int>(t));
  }

  // Compact to the vertices actually used.
  std::vector<int> remap(points.size(), -1);
  int nv = 0;
  for (int t : keep) {
    for (int k = 0; k < 3; ++k) {
      if (remap[all(k, t)] < 0) remap[all(k, t)] = nv++;
    }
  }
  Mesh mesh;
  mesh.target_h = h;
  mesh.experimental = !domain.outer_is_convex();
  mesh.vertices.resize(2, nv);
  mesh.vertex_tags.resize(nv);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (remap[i] < 0) continue;
    mesh.vertices.col(remap[i]) = points[i];
    mesh.vertex_tags[remap[i]] = tags[i];
  }
  mesh.triangles.resize(3, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    for (int r = 0; r < 3; ++r) mesh.triangles(r, k) = remap[all(r, keep[k])];
  }

  std::map<std::pair<int, int>, int> edge_count;
  for (Eigen::Index t = 0; t < mesh.num_triangles(); ++t) {
    for (int e = 0; e < 3; ++e) {
      const int a = mesh.triangles(e, t), b = mesh.triangles((e + 1) % 3, t);
      ++edge_count[{std::min(a, b), std::max(a, b)}];
    }
  }
  for (Eigen::Index t = 0; t < mesh.num_triangles(); ++t) {
    for (int e = 0; e < 3; ++e) {
      const int a = mesh.triangles(e, t), b = mesh.triangles((e + 1) % 3, t);
      if (edge_count[{std::min(a, b), std::max(a, b)}] != 1) continue;
      const VertexTag ta = mesh.vertex_tags[a], tb = mesh.vertex_tags[b];
      if (ta == VertexTag::inner && tb == VertexTag::inner) {
        mesh.boundary_edges.push_back({a, b, BoundaryTag::inner});
      } else if (ta == VertexTag::outer && tb == VertexTag::outer) {
        mesh.boundary_edges.push_back({a, b, BoundaryTag::outer});
      } else {
        throw ValidationError("triangulate: boundary edge not recovered; refine h");
      }
    }
  }
  validate_mesh(mesh);
  return mesh;
}

std::vector<std::vector<int>> boundary_loops(const Mesh& mesh) {
  std::map<int, int> next;
  std::map<int, BoundaryTag> tag_of;
  for (const auto& e : mesh.boundary_edges) {
    if (!next.emplace(e.a, e.b).second) throw ValidationError("boundary_loops: vertex starts two boundary edges");
    tag_of[e.a] = e.tag;
  }
  std::vector<std::vector<int>> inner, outer;
  std::map<int, bool> seen;
  for (const auto& [start, unused] : next) {
    if (seen[start]) continue;
    std::vector<int> loop;
    int v = start;
    while (!seen[v]) {
      seen[v] = true;
      loop.push_back(v);
      auto it = next.find(v);
      if (it == next.end()) throw ValidationError("boundary_loops: open boundary chain");
      v = it->second;
    }
    if (v != start) throw ValidationError("boundary_loops: boundary chains merge");
    (tag_of[start] == BoundaryTag::inner ? inner : outer).push_back(std::move(loop));
  }
  inner.insert(inner.end(), outer.begin(), outer.end());
  return inner;
}

void validate_mesh(const Mesh& mesh) {
  if (mesh.num_triangles() == 0) throw ValidationError("mesh has no triangles");
  const double h = mesh.target_h > 0 ? mesh.target_h : 1.0;
  for (Eigen::Index t = 0; t < mesh.num_triangles(); ++t) {
    if (!(mesh.signed_area(t) >= 1e-14 * h * h)) {
      throw ValidationError("mesh: triangle " + std::to_string(t) + " is inverted or degenerate");
    }
  }
  std::map<std::pair<int, int>, int> directed;
  for (Eigen::Index t = 0; t < mesh.num_triangles(); ++t) {
    for (int e = 0; e < 3; ++e) {
      if (++directed[{mesh.triangles(e, t), mesh.triangles((e + 1) % 3, t)}] > 1) {
        throw ValidationError("mesh: non-conforming edge");
      }
    }
  }
  std::size_t boundary = 0;
  for (const auto& [edge, count] : directed) {
    if (!directed.count({edge.second, edge.first})) ++boundary;
  }
  if (boundary != mesh.boundary_edges.size()) throw ValidationError("mesh: boundary edge list is incomplete");
  for (const auto& e : mesh.boundary_edges) {
    if (!directed.count({e.a, e.b}) || directed.count({e.b, e.a})) {
      throw ValidationError("mesh: tagged edge is not a boundary edge");
    }
  }
  const auto loops = boundary_loops(mesh);
  int inner = 0, outer = 0;
  for (const auto& e : mesh.boundary_edges) (e.tag == BoundaryTag::inner ? inner : outer)++;
  if (loops.size() != 2 || inner == 0 || outer == 0) {
    throw ValidationError("mesh: expected one inner and one outer boundary loop, found " +
                          std::to_string(loops.size()) + " loops");
  }
}

MeshQuality mesh_quality(const Mesh& mesh) {
  if (mesh.num_triangles() == 0) throw ValidationError("mesh_quality: empty mesh");
  MeshQuality q;
  q.min_angle_deg = 180;
  for (Eigen::Index t = 0; t < mesh.num_triangles(); ++t) {
    std::array<Point2d, 3> v;
    for (int k = 0; k < 3; ++k) v[k] = mesh.vertices.col(mesh.triangles(k, t));
    std::array<double, 3> len;
    for (int k = 0; k < 3; ++k) len[k] = (v[(k + 1) % 3] - v[k]).norm();
    const double area = std::abs(mesh.signed_area(t));
    for (int k = 0; k < 3; ++k) {
      const Point2d a = v[(k + 1) % 3] - v[k], b = v[(k + 2) % 3] - v[k];
      const double angle = std::atan2(std::abs(a.x() * b.y() - a.y() * b.x()), a.dot(b)) * 180 / std::numbers::pi;
      q.min_angle_deg = std::min(q.min_angle_deg, angle);
    }
    const double s = (len[0] + len[1] + len[2]) / 2;
    const double inradius = area / s;
    const double circumradius = len[0] * len[1] * len[2] / (4 * std::max(area, 1e-300));
    q.max_aspect = std::max(q.max_aspect, circumradius / (2 * std::max(inradius, 1e-300)));
    q.h_max = std::max({q.h_max, len[0], len[1], len[2]});
  }
  return q;
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << ' ' << mesh.boundary_edges.size() << '\n';
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < mesh.num_vertices(); ++i) out << mesh.vertices(0, i) << ' ' << mesh.vertices(1, i) << '\n';
  for (Eigen::Index t = 0; t < mesh.num_triangles(); ++t) {
    out << mesh.triangles(0, t) << ' ' << mesh.triangles(1, t) << ' ' << mesh.triangles(2, t) << '\n';
  }
  for (const auto& e : mesh.boundary_edges) {
    out << e.a << ' ' << e.b << ' ' << (e.tag == BoundaryTag::inner ? "inner" : "outer") << '\n';
  }
}

Mesh read_mesh(std::istream& in) {
  Eigen::Index nv = 0, nt = 0;
  std::size_t nbe = 0;
  if (!(in >> nv >> nt >> nbe)) throw ValidationError("read_mesh: bad header");
  Mesh mesh;
  mesh.vertices.resize(2, nv);
  mesh.triangles.resize(3, nt);
  for (Eigen::Index i = 0; i < nv; ++i) in >> mesh.vertices(0, i) >> mesh.vertices(1, i);
  for (Eigen::Index t = 0; t < nt; ++t) in >> mesh.triangles(0, t) >> mesh.triangles(1, t) >> mesh.triangles(2, t);
  mesh.vertex_tags.assign(nv, VertexTag::interior);
  for (std::size_t k = 0; k < nbe; ++k) {
    BoundaryEdge e;
    std::string tag;
    in >> e.a >> e.b >> tag;
    if (tag != "inner" && tag != "outer") throw ValidationError("read_mesh: unknown boundary tag '" + tag + "'");
    e.tag = tag == "inner" ? BoundaryTag::inner : BoundaryTag::outer;
    mesh.boundary_edges.push_back(e);
    const VertexTag vt = e.tag == BoundaryTag::inner ? VertexTag::inner : VertexTag::outer;
    mesh.vertex_tags[e.a] = mesh.vertex_tags[e.b] = vt;
  }
  if (!in) throw ValidationError("read_mesh: truncated input");
  return mesh;
}

}  // namespace shellbound
