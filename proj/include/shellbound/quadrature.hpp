#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

namespace shellbound {

/// Gauss-Legendre nodes and weights on [-1, 1].
template <typename Scalar = double>
struct GaussLegendre {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;

  explicit GaussLegendre(int count) : nodes(count), weights(count) {
    for (int i = 0; i < count; ++i) {
      Scalar x = std::cos(std::numbers::pi_v<Scalar> * (i + Scalar(0.75)) / (count + Scalar(0.5)));
      Scalar dp = 0;
      for (int it = 0; it < 100; ++it) {
        Scalar p0 = 1, p1 = x;
        for (int k = 2; k <= count; ++k) {
          const Scalar pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = count * (x * p1 - p0) / (x * x - 1);
        const Scalar dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 4 * std::numeric_limits<Scalar>::epsilon()) break;
      }
      nodes(i) = x;
      weights(i) = 2 / ((1 - x * x) * dp * dp);
    }
  }

  /// Integral of f over [a, b].
  template <typename F>
  Scalar integrate(F&& f, Scalar a, Scalar b) const {
    const Scalar half = (b - a) / 2, mid = (a + b) / 2;
    Scalar sum = 0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) sum += weights(i) * f(mid + half * nodes(i));
    return sum * half;
  }
};

/// Shared 16-point rule used for all edge integrals.
inline const GaussLegendre<double>& gauss16() {
  static const GaussLegendre<double> rule(16);
  return rule;
}

/// Symmetric degree-8 rule on a triangle (16 points); barycentric coordinates and
/// weights normalized to sum to one.
struct TriangleRule {
  std::array<std::array<double, 3>, 16> bary;
  std::array<double, 16> weight;
};

inline const TriangleRule& triangle_rule_degree8() {
  static const TriangleRule rule = [] {
    TriangleRule r{};
    int k = 0;
    auto put = [&](double w, double a, double b, double c) {
      r.bary[k] = {a, b, c};
      r.weight[k] = w;
      ++k;
    };
    put(0.144315607677787, 1.0 / 3, 1.0 / 3, 1.0 / 3);
    const std::array<std::pair<double, double>, 3> orbit3 = {{{0.081414823414554, 0.095091634267285},
                                                              {0.658861384496480, 0.103217370534718},
                                                              {0.898905543365938, 0.032458497623198}}};
    for (const auto& [a, w] : orbit3) {
      const double b = (1 - a) / 2;
      put(w, a, b, b);
      put(w, b, a, b);
      put(w, b, b, a);
    }
    const double a = 0.008394777409958, b = 0.263112829634638, c = 0.728492392955404, w = 0.027230314174435;
    put(w, a, b, c);
    put(w, a, c, b);
    put(w, b, a, c);
    put(w, b, c, a);
    put(w, c, a, b);
    put(w, c, b, a);
    return r;
  }();
  return rule;
}

namespace detail {

template <typename F, typename Scalar>
Scalar adaptive_simpson_step(F& f, Scalar a, Scalar b, Scalar fa, Scalar fm, Scalar fb, Scalar whole, Scalar tol,
                             int depth) {
  const Scalar m = (a + b) / 2;
  const Scalar lm = (a + m) / 2, rm = (m + b) / 2;
  const Scalar flm = f(lm), frm = f(rm);
  const Scalar left = (m - a) / 6 * (fa + 4 * flm + fm);
  const Scalar right = (b - m) / 6 * (fm + 4 * frm + fb);
  const Scalar delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15 * tol) return left + right + delta / 15;
  return adaptive_simpson_step(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson_step(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
template <typename F, typename Scalar>
Scalar adaptive_simpson(F&& f, Scalar a, Scalar b, Scalar tol, int max_depth = 40) {
  // Start from a few panels so that nearly symmetric integrands are not accepted on the first probe.
  constexpr int panels = 8;
  Scalar total = 0;
  const Scalar h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const Scalar lo = a + i * h, hi = (i + 1 == panels) ? b : a + (i + 1) * h;
    const Scalar flo = f(lo), fhi = f(hi), fm = f((lo + hi) / 2);
    const Scalar whole = (hi - lo) / 6 * (flo + 4 * fm + fhi);
    total += detail::adaptive_simpson_step(f, lo, hi, flo, fm, fhi, whole, tol / panels, max_depth);
  }
  return total;
}

/// Composite Simpson rule on a uniform grid with an even number of intervals.
template <typename Derived>
typename Derived::Scalar composite_simpson(const Eigen::MatrixBase<Derived>& values,
                                           typename Derived::Scalar step) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = values.size() - 1;
  Scalar sum = values(0) + values(m);
  for (Eigen::Index i = 1; i < m; ++i) sum += (i % 2 ? 4 : 2) * values(i);
  return sum * step / 3;
}

}  // namespace shellbound
