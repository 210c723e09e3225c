#pragma once

// Convex bodies in the plane and in space: quermassintegrals, Steiner
// polynomials, parallel-body perimeters, distance to a convex polygon,
// Aleksandrov-Fenchel margins and the matching of a spherical shell.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "shellbound/errors.hpp"

namespace shellbound {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace detail {

template <typename Scalar>
Scalar cross(const Point2<Scalar>& a, const Point2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

}  // namespace detail

/// Gamma function at x = k/2 for a positive integer k.
template <typename Scalar = double>
Scalar gamma_half_integer(int twice_x) {
  if (twice_x <= 0) throw DomainError("gamma_half_integer: argument must be positive");
  // Gamma(1) = 1, Gamma(1/2) = sqrt(pi), Gamma(x + 1) = x Gamma(x).
  Scalar value = (twice_x % 2 == 0) ? Scalar(1) : std::sqrt(std::numbers::pi_v<Scalar>);
  for (int k = (twice_x % 2 == 0) ? 2 : 1; k + 2 <= twice_x; k += 2) value *= Scalar(k) / 2;
  return value;
}

/// Volume of the unit ball in R^n, pi^{n/2} / Gamma(n/2 + 1).
template <typename Scalar = double>
Scalar unit_ball_volume(int n) {
  if (n < 1) throw DomainError("unit_ball_volume: dimension must be >= 1");
  return std::pow(std::numbers::pi_v<Scalar>, Scalar(n) / 2) / gamma_half_integer<Scalar>(n + 2);
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

/// Strictly convex polygon with counter-clockwise vertices.
template <typename Scalar>
class ConvexPolygon {
public:
  using Point = Point2<Scalar>;

  static constexpr double kTolerance = 1e-12;

  explicit ConvexPolygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) { validate(); }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }
  const Point& next(std::size_t i) const { return vertices_[(i + 1) % vertices_.size()]; }

  Scalar area() const {
    Scalar twice = 0;
    for (std::size_t i = 0; i < size(); ++i) twice += detail::cross<Scalar>(vertices_[i], next(i));
    return twice / 2;
  }

  Scalar perimeter() const {
    Scalar total = 0;
    for (std::size_t i = 0; i < size(); ++i) total += (next(i) - vertices_[i]).norm();
    return total;
  }

  Point centroid() const {
    Point c = Point::Zero();
    Scalar twice = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      const Scalar w = detail::cross<Scalar>(vertices_[i], next(i));
      c += w * (vertices_[i] + next(i));
      twice += w;
    }
    return c / (3 * twice);
  }

  /// Closed containment (boundary counts as inside).
  bool contains(const Point& x) const {
    for (std::size_t i = 0; i < size(); ++i) {
      if (detail::cross<Scalar>(next(i) - vertices_[i], x - vertices_[i]) < 0) return false;
    }
    return true;
  }

  /// Largest absolute coordinate; the length scale used by the tolerances.
  Scalar scale() const {
    Scalar s = 0;
    for (const auto& v : vertices_) s = std::max(s, v.cwiseAbs().maxCoeff());
    return std::max(s, Scalar(1e-300));
  }

private:
  void validate() const {
    const std::size_t m = vertices_.size();
    if (m < 3) throw ValidationError("ConvexPolygon: at least 3 vertices required");
    for (const auto& v : vertices_) {
      if (!v.allFinite()) throw ValidationError("ConvexPolygon: non-finite vertex");
    }
    const Scalar s = scale();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        if ((vertices_[i] - vertices_[j]).norm() <= kTolerance * s) {
          throw ValidationError("ConvexPolygon: repeated vertex " + std::to_string(i) + "/" + std::to_string(j));
        }
      }
    }
    Scalar turning = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const Point e0 = next(i) - vertices_[i];
      const Point e1 = vertices_[(i + 2) % m] - next(i);
      if (detail::cross<Scalar>(e0, e1) <= kTolerance * s * s) {
        throw ValidationError("ConvexPolygon: vertices must be strictly convex and counter-clockwise (vertex " +
                              std::to_string((i + 1) % m) + ")");
      }
      turning += std::atan2(detail::cross<Scalar>(e0, e1), e0.dot(e1));
    }
    // A star polygon has positive turns everywhere but winds more than once.
    if (std::abs(turning - 2 * std::numbers::pi_v<Scalar>) > 1e-6) {
      throw ValidationError("ConvexPolygon: vertex loop winds more than once");
    }
  }

  std::vector<Point> vertices_;
};

/// Convex hull (Andrew's monotone chain); collinear points are dropped.
template <typename Scalar>
ConvexPolygon<Scalar> convex_hull(std::vector<Point2<Scalar>> points) {
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) throw ValidationError("convex_hull: fewer than 3 distinct points");
  std::vector<Point2<Scalar>> hull(2 * points.size());
  std::size_t k = 0;
  auto turn = [](const auto& o, const auto& a, const auto& b) { return detail::cross<Scalar>(a - o, b - o); };
  for (const auto& p : points) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && turn(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return ConvexPolygon<Scalar>(std::move(hull));
}

/// Balls and boxes in R^3, the bodies with closed-form quermassintegrals.
template <typename Scalar>
struct ConvexBody3D {
  enum class Kind { ball, cuboid };

  Kind kind;
  Eigen::Matrix<Scalar, 3, 1> size;  // (r, r, r) for a ball, edge lengths for a cuboid

  static ConvexBody3D ball(Scalar radius) {
    if (!(radius > 0)) throw ValidationError("ConvexBody3D: ball radius must be positive");
    return {Kind::ball, Eigen::Matrix<Scalar, 3, 1>::Constant(radius)};
  }

  static ConvexBody3D cuboid(Scalar a, Scalar b, Scalar c) {
    if (!(a > 0 && b > 0 && c > 0)) throw ValidationError("ConvexBody3D: cuboid edges must be positive");
    return {Kind::cuboid, Eigen::Matrix<Scalar, 3, 1>(a, b, c)};
  }
};

/// W_0 ... W_n of a convex body in R^n; W_i scales like length^{n-i}.
template <typename Scalar>
struct QuermassVector {
  int n = 0;
  VectorX<Scalar> W;

  Scalar operator[](int i) const { return W(i); }
  Scalar volume() const { return W(0); }
  Scalar perimeter() const { return n * W(1); }
};

template <typename Scalar>
QuermassVector<Scalar> quermassintegrals_ball(int n, Scalar radius) {
  if (n < 2) throw ValidationError("quermassintegrals_ball: dimension must be >= 2");
  if (!(radius > 0)) throw ValidationError("quermassintegrals_ball: radius must be positive");
  QuermassVector<Scalar> q{n, VectorX<Scalar>(n + 1)};
  const Scalar omega = unit_ball_volume<Scalar>(n);
  for (int i = 0; i <= n; ++i) q.W(i) = omega * std::pow(radius, Scalar(n - i));
  return q;
}

template <typename Scalar>
QuermassVector<Scalar> quermassintegrals(const ConvexPolygon<Scalar>& body) {
  QuermassVector<Scalar> q{2, VectorX<Scalar>(3)};
  q.W << body.area(), body.perimeter() / 2, std::numbers::pi_v<Scalar>;
  return q;
}

template <typename Scalar>
QuermassVector<Scalar> quermassintegrals(const ConvexBody3D<Scalar>& body) {
  using Kind = typename ConvexBody3D<Scalar>::Kind;
  if (body.kind == Kind::ball) return quermassintegrals_ball<Scalar>(3, body.size(0));
  const Scalar a = body.size(0), b = body.size(1), c = body.size(2);
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  QuermassVector<Scalar> q{3, VectorX<Scalar>(4)};
  q.W << a * b * c, 2 * (a * b + b * c + c * a) / 3, pi * (a + b + c) / 3, 4 * pi / 3;
  return q;
}

/// |K + rho B_1| = sum_i C(n,i) W_i rho^i.
template <typename Scalar>
Scalar steiner_volume(const QuermassVector<Scalar>& q, Scalar rho) {
  if (!(rho >= 0)) throw DomainError("steiner_volume: rho must be >= 0");
  Scalar total = 0;
  for (int i = q.n; i >= 0; --i) total = total * rho + binomial(q.n, i) * q.W(i);
  return total;
}

/// P(K + rho B_1) = n sum_i C(n-1,i) W_{i+1} rho^i.
template <typename Scalar>
Scalar parallel_perimeter(const QuermassVector<Scalar>& q, Scalar rho) {
  if (!(rho >= 0)) throw DomainError("parallel_perimeter: rho must be >= 0");
  Scalar total = 0;
  for (int i = q.n - 1; i >= 0; --i) total = total * rho + binomial(q.n - 1, i) * q.W(i + 1);
  return q.n * total;
}

template <typename Body, typename Scalar>
Scalar steiner_volume(const Body& body, Scalar rho) {
  return steiner_volume(quermassintegrals(body), rho);
}

template <typename Body, typename Scalar>
Scalar parallel_perimeter(const Body& body, Scalar rho) {
  return parallel_perimeter(quermassintegrals(body), rho);
}

/// The spherical shell A_{R1,R2} = B_{R2} \ closure(B_{R1}) in R^n.
template <typename Scalar>
struct ShellSpec {
  int n = 2;
  Scalar R1 = 1;
  Scalar R2 = 2;

  ShellSpec() = default;
  ShellSpec(int dim, Scalar inner, Scalar outer) : n(dim), R1(inner), R2(outer) {
    if (n < 2) throw ValidationError("ShellSpec: dimension must be >= 2");
    if (!(R1 > 0 && R1 < R2) || !std::isfinite(R2)) throw ValidationError("ShellSpec: need 0 < R1 < R2");
  }

  Scalar volume() const { return unit_ball_volume<Scalar>(n) * (std::pow(R2, Scalar(n)) - std::pow(R1, Scalar(n))); }
  /// Surface measure of the sphere of radius r.
  Scalar sphere_area(Scalar r) const { return n * unit_ball_volume<Scalar>(n) * std::pow(r, Scalar(n - 1)); }
  Scalar inner_perimeter() const { return sphere_area(R1); }
  Scalar width() const { return R2 - R1; }
};

/// Shell with W_{n-1}(B_{R1}) = W_{n-1}(D) and |A| = volume.
template <typename Scalar>
ShellSpec<Scalar> match_shell(const QuermassVector<Scalar>& hole, Scalar volume) {
  if (!(volume > 0)) throw ValidationError("match_shell: volume must be positive");
  const int n = hole.n;
  const Scalar omega = unit_ball_volume<Scalar>(n);
  // W_{n-1}(B_R) = omega_n R.
  const Scalar r1 = hole[n - 1] / omega;
  const Scalar r2 = std::pow(std::pow(r1, Scalar(n)) + volume / omega, Scalar(1) / n);
  return ShellSpec<Scalar>(n, r1, r2);
}

/// Shell with P(B_{R1}) = P(D) and |A| = volume. Coincides with match_shell for n = 2.
template <typename Scalar>
ShellSpec<Scalar> match_shell_perimeter(const QuermassVector<Scalar>& hole, Scalar volume) {
  if (!(volume > 0)) throw ValidationError("match_shell_perimeter: volume must be positive");
  const int n = hole.n;
  const Scalar omega = unit_ball_volume<Scalar>(n);
  const Scalar r1 = std::pow(hole.perimeter() / (n * omega), Scalar(1) / (n - 1));
  const Scalar r2 = std::pow(std::pow(r1, Scalar(n)) + volume / omega, Scalar(1) / n);
  return ShellSpec<Scalar>(n, r1, r2);
}

template <typename Body, typename Scalar>
ShellSpec<Scalar> match_shell(const Body& hole, Scalar volume, int n) {
  const auto q = quermassintegrals(hole);
  if (q.n != n) throw ValidationError("match_shell: body dimension does not match n");
  return match_shell(q, volume);
}

/// Distance from x to a closed segment [a, b].
template <typename Scalar>
Scalar segment_distance(const Point2<Scalar>& x, const Point2<Scalar>& a, const Point2<Scalar>& b) {
  const Point2<Scalar> e = b - a;
  const Scalar len2 = e.squaredNorm();
  const Scalar s = len2 > 0 ? std::clamp((x - a).dot(e) / len2, Scalar(0), Scalar(1)) : Scalar(0);
  return (x - (a + s * e)).norm();
}

/// Euclidean distance from x to the closed polygon; zero inside.
template <typename Scalar>
Scalar distance_to_body(const ConvexPolygon<Scalar>& body, const Point2<Scalar>& x) {
  if (body.contains(x)) return 0;
  Scalar d = std::numeric_limits<Scalar>::infinity();
  for (std::size_t i = 0; i < body.size(); ++i) d = std::min(d, segment_distance<Scalar>(x, body[i], body.next(i)));
  return d;
}

template <typename Scalar>
struct AfMargin {
  int i = 0;
  int j = 0;
  Scalar margin = 0;  // (W_j/w_n)^{1/(n-j)} - (W_i/w_n)^{1/(n-i)}
};

template <typename Scalar>
struct BallComparison {
  int i = 0;
  Scalar body = 0;          // W_i(K)
  Scalar matched_ball = 0;  // W_i(K*) with W_{n-1}(K*) = W_{n-1}(K)
};

template <typename Scalar>
struct AfReport {
  static constexpr double kTolerance = 1e-10;

  std::vector<AfMargin<Scalar>> margins;
  std::vector<BallComparison<Scalar>> ball;

  Scalar min_margin() const {
    Scalar m = std::numeric_limits<Scalar>::infinity();
    for (const auto& a : margins) m = std::min(m, a.margin);
    return m;
  }

  bool ok() const {
    for (const auto& a : margins) {
      if (a.margin < -kTolerance) return false;
    }
    for (const auto& b : ball) {
      if (b.body > b.matched_ball * (1 + kTolerance)) return false;
    }
    return true;
  }
};

template <typename Scalar>
AfReport<Scalar> af_check(const QuermassVector<Scalar>& q) {
  const int n = q.n;
  const Scalar omega = unit_ball_volume<Scalar>(n);
  auto normalized = [&](int i) { return std::pow(q[i] / omega, Scalar(1) / (n - i)); };
  AfReport<Scalar> report;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j <= n - 1; ++j) report.margins.push_back({i, j, normalized(j) - normalized(i)});
  }
  const Scalar r_star = q[n - 1] / omega;
  for (int i = 0; i < n - 1; ++i) report.ball.push_back({i, q[i], omega * std::pow(r_star, Scalar(n - i))});
  return report;
}

template <typename Body>
auto af_check(const Body& body) {
  return af_check(quermassintegrals(body));
}

using ConvexPolygond = ConvexPolygon<double>;
using QuermassVectord = QuermassVector<double>;
using ShellSpecd = ShellSpec<double>;
using Point2d = Point2<double>;

}  // namespace shellbound
