#include <catch2/catch_amalgamated.hpp>

#include "slitsphere/geometry.hpp"

using namespace slitsphere;
using namespace slitsphere::geometry;

TEST_CASE("geodesic distance basics", "[geometry]") {
  Vec3 n = north_pole(), s = south_pole();
  CHECK(geodesic_distance(n, s) == Catch::Approx(kPi));
  CHECK(geodesic_distance(n, n) == Catch::Approx(0.0).margin(1e-15));
  Vec3 eq{0, -1, 0};
  CHECK(geodesic_distance(n, eq) == Catch::Approx(kPi / 2));

  SplitMix64 rng(7);
  for (int i = 0; i < 200; ++i) {
    Vec3 a = rng.unit_vector(), b = rng.unit_vector(), c = rng.unit_vector();
    double ab = geodesic_distance(a, b), ba = geodesic_distance(b, a);
    CHECK(ab == Catch::Approx(ba).margin(1e-14));
    CHECK(geodesic_distance(a, c) <= ab + geodesic_distance(b, c) + 1e-12);
  }
}

TEST_CASE("cut circles and symmetries", "[geometry]") {
  // C1 in the plane x=0 with y<=0, C2 with x=sqrt(3)y, C3 with x=-sqrt(3)y
  for (double t : {0.3, 1.1, 2.5}) {
    Vec3 p1 = cut_point(0, t);
    CHECK(std::abs(p1.x) < 1e-15);
    CHECK(p1.y <= 0);
    Vec3 p2 = cut_point(1, t);
    CHECK(p2.x == Catch::Approx(std::sqrt(3.0) * p2.y));
    CHECK(p2.y >= 0);
    Vec3 p3 = cut_point(2, t);
    CHECK(p3.x == Catch::Approx(-std::sqrt(3.0) * p3.y));
    CHECK(p3.y >= 0);
  }
  Mat3 R = CutSpec::rotation(), S = CutSpec::reflection();
  SplitMix64 rng(21);
  for (int i = 0; i < 100; ++i) {
    Vec3 a = rng.unit_vector(), b = rng.unit_vector();
    // R and sigma are isometries, R^3 = id, sigma^2 = id
    CHECK(geodesic_distance(R * a, R * b) == Catch::Approx(geodesic_distance(a, b)).margin(1e-12));
    CHECK(geodesic_distance(S * a, S * b) == Catch::Approx(geodesic_distance(a, b)).margin(1e-12));
    CHECK(norm(R * (R * (R * a)) - a) < 1e-12);
    CHECK(norm(S * (S * a) - a) < 1e-12);
  }
  // R maps C1 -> C2 -> C3 -> C1; sigma fixes C1 and swaps C2, C3
  for (double t : {0.4, 2.0}) {
    CHECK(norm(R * cut_point(0, t) - cut_point(1, t)) < 1e-14);
    CHECK(norm(R * cut_point(1, t) - cut_point(2, t)) < 1e-14);
    CHECK(norm(R * cut_point(2, t) - cut_point(0, t)) < 1e-14);
    CHECK(norm(S * cut_point(0, t) - cut_point(0, t)) < 1e-14);
    CHECK(norm(S * cut_point(1, t) - cut_point(2, t)) < 1e-14);
  }
}

TEST_CASE("tip polar coordinates", "[geometry]") {
  double delta = 1.1;
  TipFrame f = tip_frame_for_arc(0, delta);

  // points approaching the cut: east side -> theta -> 0+, west -> 2pi-
  double r = 0.3;
  double t_on_cut = delta - r;  // colatitude of the on-cut point at radius r
  for (double eps : {1e-3, 1e-5, 1e-7}) {
    Vec3 east = make_unit(cut_point(0, t_on_cut) + Vec3{eps, 0, 0});
    Vec3 west = make_unit(cut_point(0, t_on_cut) + Vec3{-eps, 0, 0});
    auto pe = tip_polar(f, east);
    auto pw = tip_polar(f, west);
    CHECK(pe.theta < 0.01);
    CHECK(pe.theta > 0);
    CHECK(pw.theta > 2 * kPi - 0.01);
    CHECK(pw.theta < 2 * kPi);
    CHECK(pe.r == Catch::Approx(r).margin(1e-4));
  }

  // mirror symmetry: sigma x has (r, 2pi - theta) in the same frame at xi_1
  SplitMix64 rng(3);
  Mat3 S = CutSpec::reflection();
  for (int i = 0; i < 200; ++i) {
    Vec3 x = rng.unit_vector();
    auto p = tip_polar(f, x);
    if (p.theta < 1e-3 || p.theta > 2 * kPi - 1e-3) continue;
    auto ps = tip_polar(f, S * x);
    CHECK(ps.r == Catch::Approx(p.r).margin(1e-12));
    CHECK(ps.theta == Catch::Approx(2 * kPi - p.theta).margin(1e-10));
  }

  // round trip through the inverse
  for (int i = 0; i < 200; ++i) {
    double rr = 0.01 + 1.4 * rng.uniform();
    double th = 1e-4 + (2 * kPi - 2e-4) * rng.uniform();
    Vec3 x = tip_polar_inverse(f, rr, th);
    auto p = tip_polar(f, x);
    CHECK(p.r == Catch::Approx(rr).margin(1e-12));
    CHECK(p.theta == Catch::Approx(th).margin(1e-10));
  }

  CHECK_THROWS(tip_polar(f, f.tip));
  // side tags on the cut
  auto pe = tip_polar(f, cut_point(0, t_on_cut), CutSide::east);
  auto pw = tip_polar(f, cut_point(0, t_on_cut), CutSide::west);
  CHECK(pe.theta == 0.0);
  CHECK(pw.theta == 2 * kPi);
  CHECK(pe.r == Catch::Approx(r).margin(1e-14));
}

TEST_CASE("cutoff profile C2 smoothstep", "[geometry]") {
  CutoffProfile psi;
  CHECK(psi(0.3).v == 1.0);
  CHECK(psi(0.3).d1 == 0.0);
  CHECK(psi(0.3).d2 == 0.0);
  CHECK(psi(1.2).v == 0.0);
  CHECK(psi(1.2).d1 == 0.0);
  CHECK(psi(1.2).d2 == 0.0);
  auto mid = psi(0.75);
  CHECK(mid.v == Catch::Approx(0.5));
  CHECK(mid.v > 0);
  CHECK(mid.v < 1);

  // finite-difference oracle for the derivatives
  double h = 1e-5;
  for (double t : {0.55, 0.6, 0.75, 0.9, 0.97}) {
    double fd1 = (psi(t + h).v - psi(t - h).v) / (2 * h);
    double fd2 = (psi(t + h).v - 2 * psi(t).v + psi(t - h).v) / (h * h);
    CHECK(psi(t).d1 == Catch::Approx(fd1).margin(1e-6));
    CHECK(psi(t).d2 == Catch::Approx(fd2).margin(1e-4));
  }
  // C2 continuity at the breakpoints: one-sided second differences agree
  for (double bp : {0.5, 1.0}) {
    double dplus = psi(bp + 1e-7).d2;
    double dminus = psi(bp - 1e-7).d2;
    CHECK(std::abs(dplus - dminus) < 1e-4);
    CHECK(std::abs(psi(bp).d2 - dplus) < 1e-4);
  }
  for (double t = 0.0; t < 1.3; t += 0.01) {
    CHECK(psi(t).v >= 0.0);
    CHECK(psi(t).v <= 1.0);
  }
}

TEST_CASE("make_cut_spec populates tips, frames, rho", "[geometry]") {
  auto s = make_cut_spec(kPi / 2, kPi / 2, kPi / 2);
  for (int i = 0; i < 3; ++i) {
    CHECK(s.arc_present(i));
    CHECK(std::abs(s.frame[i].tip.z) < 1e-15);  // tips on the equator
    CHECK(s.rho[i] == Catch::Approx(s.rho[0]));
    CHECK(s.rho[i] > 0);
    // separation invariant: the support avoids the other cuts
    for (int j = 0; j < 3; ++j)
      if (j != i) CHECK(distance_to_arc(s.frame[i].tip, j, s.delta[j]) > s.rho[i]);
    // pairwise disjoint supports
    for (int j = 0; j < 3; ++j)
      if (j != i)
        CHECK(geodesic_distance(s.frame[i].tip, s.frame[j].tip) >= s.rho[i] + s.rho[j] - 1e-12);
  }
  CHECK_FALSE(s.pole_is_tip);

  auto none = make_cut_spec(0, 0, 0);
  CHECK(none.num_arcs() == 0);

  auto crack = make_cut_spec(kPi, 0, 0);
  CHECK(crack.num_arcs() == 1);
  CHECK(norm(crack.frame[0].tip - south_pole()) < 1e-15);
  CHECK(crack.pole_is_tip);
  CHECK(crack.pole_rho == Catch::Approx(kPi / 2));
  CHECK(crack.rho[0] == Catch::Approx(kPi / 2));

  CHECK_THROWS(make_cut_spec(-0.1, 0, 0));
  CHECK_THROWS(make_cut_spec(3.3, 0.5, 0.5));
  // explicit rho violating separation is rejected
  CHECK_THROWS(make_cut_spec(kPi / 2, kPi / 2, kPi / 2, RhoPolicy::explicit_values,
                             {kPi / 2 + 0.2, 0.3, 0.3}));
  auto ok = make_cut_spec(kPi / 2, kPi / 2, kPi / 2, RhoPolicy::explicit_values, {0.3, 0.3, 0.3});
  CHECK(ok.rho[0] == 0.3);
}

TEST_CASE("singular frame orientation makes s odd under sigma", "[geometry]") {
  // sigma maps theta to 2pi - theta, so cos(theta/2) flips sign: checked via
  // the frames of tips 2 and 3 being sigma images with reversed angle
  double d = 1.3;
  TipFrame f2 = tip_frame_for_arc(1, d), f3 = tip_frame_for_arc(2, d);
  Mat3 S = CutSpec::reflection();
  SplitMix64 rng(11);
  for (int i = 0; i < 100; ++i) {
    Vec3 x = rng.unit_vector();
    auto p3 = tip_polar(f3, x);
    if (p3.theta < 1e-3 || p3.theta > 2 * kPi - 1e-3) continue;
    auto p2 = tip_polar(f2, S * x);
    CHECK(p2.r == Catch::Approx(p3.r).margin(1e-12));
    CHECK(p2.theta == Catch::Approx(2 * kPi - p3.theta).margin(1e-10));
  }
}
