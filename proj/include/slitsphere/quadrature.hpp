#pragma once

// Quadrature on (chordal) triangles. Smooth integrands use a symmetric
// degree-6 rule; integrands with a point singularity at a triangle corner use
// a geometric subdivision toward that corner.

#include "slitsphere/core.hpp"

namespace slitsphere::quadrature {

struct TriRule {
  // barycentric coordinates + weights, weights sum to 1
  std::vector<std::array<double, 3>> pts;
  std::vector<double> w;
};

// Dunavant degree-6 rule, 12 points, fully symmetric (orbit sets closed under
// all vertex permutations), positive weights.
inline const TriRule& degree6_rule() {
  static const TriRule rule = [] {
    TriRule r;
    auto s21 = [&](double a, double w) {
      double b = 1.0 - 2.0 * a;
      r.pts.push_back({a, a, b});
      r.pts.push_back({a, b, a});
      r.pts.push_back({b, a, a});
      r.w.insert(r.w.end(), 3, w);
    };
    auto s111 = [&](double a, double b, double w) {
      double c = 1.0 - a - b;
      r.pts.push_back({a, b, c});
      r.pts.push_back({a, c, b});
      r.pts.push_back({b, a, c});
      r.pts.push_back({b, c, a});
      r.pts.push_back({c, a, b});
      r.pts.push_back({c, b, a});
      r.w.insert(r.w.end(), 6, w);
    };
    s21(0.063089014491502, 0.050844906370207);
    s21(0.249286745170910, 0.116786275726379);
    s111(0.310352451033785, 0.053145049844816, 0.082851075618374);
    return r;
  }();
  return rule;
}

// One planar sub-triangle expressed in barycentric coordinates of its parent.
using BaryTri = std::array<std::array<double, 3>, 3>;

inline void split_uniform(const BaryTri& t, int levels, std::vector<BaryTri>& out) {
  if (levels == 0) {
    out.push_back(t);
    return;
  }
  auto mid = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return std::array<double, 3>{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])};
  };
  auto m01 = mid(t[0], t[1]), m12 = mid(t[1], t[2]), m20 = mid(t[2], t[0]);
  split_uniform({t[0], m01, m20}, levels - 1, out);
  split_uniform({m01, t[1], m12}, levels - 1, out);
  split_uniform({m20, m12, t[2]}, levels - 1, out);
  split_uniform({m01, m12, m20}, levels - 1, out);
}

// Geometric grading toward corner 0 of the parent: repeatedly halve toward the
// corner, leaving a small core triangle after `levels` steps. The core is
// integrated with the base rule; fine for integrands no worse than r^{-1/2}.
inline std::vector<BaryTri> graded_toward_vertex(int corner, int levels) {
  std::vector<BaryTri> out;
  BaryTri id{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  std::swap(id[0], id[corner]);  // corner 0 of the working triangle = singular corner
  auto shrink = [](const BaryTri& t, double s) {
    BaryTri r = t;
    for (int k = 1; k < 3; ++k)
      for (int c = 0; c < 3; ++c) r[k][c] = t[0][c] + s * (t[k][c] - t[0][c]);
    return r;
  };
  BaryTri cur = id;
  for (int l = 0; l < levels; ++l) {
    BaryTri inner = shrink(cur, 0.5);
    // annulus between cur and inner = quad (v1, v2, m2, m1) as two triangles
    out.push_back({cur[1], cur[2], inner[2]});
    out.push_back({cur[1], inner[2], inner[1]});
    cur = inner;
  }
  out.push_back(cur);  // core
  return out;
}

// Ready-to-use point sets (barycentric wrt the parent triangle) with weights
// that already include the sub-triangle area fractions; weights sum to 1.
struct CompositeRule {
  std::vector<std::array<double, 3>> pts;
  std::vector<double> w;
};

inline double bary_area_fraction(const BaryTri& t) {
  // area of sub-triangle relative to parent = |det of edge coords|
  double a1 = t[1][0] - t[0][0], a2 = t[1][1] - t[0][1];
  double b1 = t[2][0] - t[0][0], b2 = t[2][1] - t[0][1];
  return std::abs(a1 * b2 - a2 * b1);
}

inline CompositeRule compose(const std::vector<BaryTri>& tris, const TriRule& base) {
  CompositeRule out;
  for (const auto& t : tris) {
    double frac = bary_area_fraction(t);
    for (size_t q = 0; q < base.pts.size(); ++q) {
      const auto& b = base.pts[q];
      std::array<double, 3> p;
      for (int c = 0; c < 3; ++c)
        p[c] = b[0] * t[0][c] + b[1] * t[1][c] + b[2] * t[2][c];
      out.pts.push_back(p);
      out.w.push_back(base.w[q] * frac);
    }
  }
  return out;
}

inline const CompositeRule& plain_rule() {
  static const CompositeRule r = compose({BaryTri{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}}, degree6_rule());
  return r;
}

inline const CompositeRule& refined_rule() {
  static const CompositeRule r = [] {
    std::vector<BaryTri> tris;
    split_uniform({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}, 2, tris);
    return compose(tris, degree6_rule());
  }();
  return r;
}

inline const CompositeRule& graded_rule(int corner, int levels) {
  // precompute all variants once; safe for concurrent use afterwards
  static const auto cache = [] {
    std::array<std::array<CompositeRule, 15>, 3> c;
    for (int v = 0; v < 3; ++v)
      for (int l = 0; l < 15; ++l)
        c[v][l] = compose(graded_toward_vertex(v, l), degree6_rule());
    return c;
  }();
  return cache.at(corner).at(levels);
}

}  // namespace slitsphere::quadrature
