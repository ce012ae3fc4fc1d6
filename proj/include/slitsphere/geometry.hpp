#pragma once

// Spherical primitives for the slit-sphere eigenproblem: the three fixed cut
// circles through the north pole, tip-local geodesic polar frames, the
// symmetry maps R (rotation by 2pi/3) and sigma (mirror across x=0), and the
// C2 cutoff profile used by the singular basis functions.

#include <algorithm>
#include <limits>
#include <optional>

#include "slitsphere/core.hpp"

namespace slitsphere::geometry {

// Azimuths of the three cut half-circles C_1, C_2, C_3. C_1 lies in the plane
// x=0 with y<=0; C_2 in x=sqrt(3)y, y>=0; C_3 in x=-sqrt(3)y, y>=0.
inline constexpr double kCutAzimuth[3] = {-kPi / 2, kPi / 6, 5 * kPi / 6};

namespace exact {
inline constexpr double kHalfSqrt3 = 0.86602540378443864676372317075293618;
// (cos, sin) of the cut azimuths, written out so that points of C_1 carry an
// exactly zero x coordinate
inline constexpr double kCutDir[3][2] = {{0.0, -1.0}, {kHalfSqrt3, 0.5}, {-kHalfSqrt3, 0.5}};
}  // namespace exact

inline Vec3 north_pole() { return {0, 0, 1}; }
inline Vec3 south_pole() { return {0, 0, -1}; }

inline double geodesic_distance(const Vec3& a, const Vec3& b) {
  return angle_between(a, b);
}

// Point of arc i at geodesic distance t from the north pole.
inline Vec3 cut_point(int arc, double t) {
  double st = std::sin(t);
  return {exact::kCutDir[arc][0] * st, exact::kCutDir[arc][1] * st, std::cos(t)};
}

enum class CutSide { east, west };

// Geodesic polar frame at a crack tip. theta is measured from e_cut (the
// tangent pointing back along the cut) toward e_perp, spanning (0, 2pi).
// e_perp is chosen so that sigma maps theta -> 2pi - theta on the frame at
// xi_1, which makes s_1 odd under sigma.
struct TipFrame {
  Vec3 tip;
  Vec3 e_cut;
  Vec3 e_perp;
};

struct PolarCoords {
  double r;
  double theta;  // in (0, 2pi); on-cut queries resolve via CutSide
};

inline TipFrame tip_frame_for_arc(int arc, double delta) {
  Vec3 tip = cut_point(arc, delta);
  // Tangent along the meridian toward the north pole (negated d/dt of
  // cut_point).
  double cd = std::cos(delta);
  Vec3 e_cut{-exact::kCutDir[arc][0] * cd, -exact::kCutDir[arc][1] * cd, std::sin(delta)};
  Vec3 e_perp = cross(e_cut, tip);
  return {tip, e_cut, e_perp};
}

// Frame at the north pole when it is a crack endpoint (exactly one arc
// present); the cut direction points down that arc.
inline TipFrame tip_frame_at_pole(int arc) {
  Vec3 e_cut{exact::kCutDir[arc][0], exact::kCutDir[arc][1], 0};
  Vec3 p = north_pole();
  return {p, e_cut, cross(e_cut, p)};
}

inline PolarCoords tip_polar(const TipFrame& f, const Vec3& x,
                             std::optional<CutSide> side = std::nullopt) {
  double r = geodesic_distance(f.tip, x);
  if (r < 1e-14) throw std::domain_error("tip_polar: point coincides with the tip");
  Vec3 u = x - dot(x, f.tip) * f.tip;
  double nu = norm(u);
  double theta;
  if (side) {
    theta = (*side == CutSide::east) ? 0.0 : 2 * kPi;
  } else {
    if (nu < 1e-300) {
      // antipode of the tip: angle undefined, pick the seam midpoint
      theta = kPi;
    } else {
      u = u * (1.0 / nu);
      theta = std::atan2(dot(u, f.e_perp), dot(u, f.e_cut));
      if (theta < 0) theta += 2 * kPi;
    }
  }
  return {r, theta};
}

// Inverse of tip_polar (used by tests).
inline Vec3 tip_polar_inverse(const TipFrame& f, double r, double theta) {
  Vec3 dir = std::cos(theta) * f.e_cut + std::sin(theta) * f.e_perp;
  return std::cos(r) * f.tip + std::sin(r) * dir;
}

// ---------------------------------------------------------------------------
// C2 cutoff profile: 1 on [0,1/2], quintic smoothstep down on [1/2,1], 0 on
// [1,inf). Value and first two derivatives are continuous.

struct CutoffProfile {
  double lo = 0.5;
  double hi = 1.0;

  struct Eval {
    double v, d1, d2;
  };

  Eval operator()(double t) const {
    if (t <= lo) return {1.0, 0.0, 0.0};
    if (t >= hi) return {0.0, 0.0, 0.0};
    double w = hi - lo;
    double u = (t - lo) / w;
    double um = 1.0 - u;
    double v = 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
    double d1 = -30.0 * u * u * um * um / w;
    double d2 = -60.0 * u * um * (1.0 - 2.0 * u) / (w * w);
    return {v, d1, d2};
  }
};

inline CutoffProfile::Eval cutoff_eval(const CutoffProfile& psi, double t) { return psi(t); }

// ---------------------------------------------------------------------------
// CutSpec: the triple of arc lengths plus fixed geometry and cutoff radii.

enum class RhoPolicy { automatic, explicit_values };

struct CutSpec {
  std::array<double, 3> delta{};
  std::array<double, 3> rho{};      // NaN when arc absent
  std::array<TipFrame, 3> frame{};  // valid when arc present
  CutoffProfile psi;

  // North pole treated as an extra crack tip when exactly one arc is present
  // (then the pole is a reentrant corner of angle 2pi, like the xi_i).
  bool pole_is_tip = false;
  TipFrame pole_frame{};
  double pole_rho = std::numeric_limits<double>::quiet_NaN();

  bool arc_present(int i) const { return delta[i] > 0; }
  int num_arcs() const {
    return (arc_present(0) ? 1 : 0) + (arc_present(1) ? 1 : 0) + (arc_present(2) ? 1 : 0);
  }
  bool mirror_symmetric() const { return delta[1] == delta[2]; }

  static Mat3 rotation() { return rot_z(2 * kPi / 3); }
  static Mat3 reflection() { return mirror_x(); }
};

// Geodesic distance from p to the arc {cut_point(arc,t) : t in [0,len]}.
inline double distance_to_arc(const Vec3& p, int arc, double len) {
  double az = kCutAzimuth[arc];
  // dot(p, m(t)) = A sin t + B cos t with:
  double A = p.x * std::cos(az) + p.y * std::sin(az);
  double B = p.z;
  double tstar = std::atan2(A, B);
  double t = std::clamp(tstar, 0.0, len);
  double d = std::acos(std::clamp(A * std::sin(t) + B * std::cos(t), -1.0, 1.0));
  return d;
}

// Separation of tip i from the other cuts and the north pole; an upper bound
// for admissible rho_i.
inline double tip_separation(const std::array<double, 3>& delta, int i) {
  Vec3 tip = cut_point(i, delta[i]);
  double sep = delta[i];  // distance to the north pole along C_i
  for (int j = 0; j < 3; ++j) {
    if (j == i || delta[j] <= 0) continue;
    sep = std::min(sep, distance_to_arc(tip, j, delta[j]));
  }
  return sep;
}

inline CutSpec make_cut_spec(double d1, double d2, double d3,
                             RhoPolicy policy = RhoPolicy::automatic,
                             std::array<double, 3> rho_explicit = {0, 0, 0}) {
  CutSpec s;
  s.delta = {d1, d2, d3};
  for (int i = 0; i < 3; ++i) {
    if (!(s.delta[i] >= 0.0 && s.delta[i] <= kPi))
      throw std::invalid_argument("make_cut_spec: delta outside [0, pi]");
  }
  if (s.num_arcs() == 1) {
    int arc = s.arc_present(0) ? 0 : (s.arc_present(1) ? 1 : 2);
    s.pole_is_tip = true;
    s.pole_frame = tip_frame_at_pole(arc);
  }
  // Surviving caps: the usual separation from the other cuts (and the pole,
  // so the tip disk never swallows the end of its own cut), plus half the
  // distance to every other enriched tip so that supports are pairwise
  // disjoint and enrichment cross-blocks vanish identically.
  std::vector<Vec3> tips;
  for (int i = 0; i < 3; ++i)
    if (s.arc_present(i)) tips.push_back(cut_point(i, s.delta[i]));
  if (s.pole_is_tip) tips.push_back(north_pole());
  auto half_pair_cap = [&](const Vec3& tip) {
    double cap = kPi;
    for (const Vec3& o : tips) {
      double d = geodesic_distance(tip, o);
      if (d > 1e-12) cap = std::min(cap, 0.5 * d);
    }
    return cap;
  };
  for (int i = 0; i < 3; ++i) {
    if (!s.arc_present(i)) {
      s.rho[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    s.frame[i] = tip_frame_for_arc(i, s.delta[i]);
    double sep = tip_separation(s.delta, i);
    double cap = std::min({0.9 * sep, half_pair_cap(s.frame[i].tip), kPi / 2});
    if (policy == RhoPolicy::automatic) {
      s.rho[i] = cap;
    } else {
      if (!(rho_explicit[i] > 0) || rho_explicit[i] > cap)
        throw std::invalid_argument("make_cut_spec: explicit rho violates separation");
      s.rho[i] = rho_explicit[i];
    }
  }
  if (s.pole_is_tip) {
    int arc = s.arc_present(0) ? 0 : (s.arc_present(1) ? 1 : 2);
    s.pole_rho = std::min({0.9 * s.delta[arc], half_pair_cap(north_pole()), kPi / 2});
  }
  return s;
}

}  // namespace slitsphere::geometry
