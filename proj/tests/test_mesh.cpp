#include <catch2/catch_amalgamated.hpp>

#include "slitsphere/mesh.hpp"
#include "slitsphere/quadrature.hpp"

using namespace slitsphere;
using namespace slitsphere::meshing;
using geometry::make_cut_spec;

TEST_CASE("admissible deltas", "[mesh]") {
  auto a4 = admissible_deltas(4);
  REQUIRE(a4.size() == 3);
  CHECK(a4[0] == Catch::Approx(kPi / 4));
  CHECK(a4[1] == Catch::Approx(kPi / 2));
  CHECK(a4[2] == Catch::Approx(3 * kPi / 4));
  auto a40 = admissible_deltas(40);
  CHECK(a40.size() == 39);
  for (size_t i = 0; i + 1 < a40.size(); ++i)
    CHECK(a40[i + 1] - a40[i] == Catch::Approx(kPi / 40));
  CHECK_THROWS(admissible_deltas(3));
}

TEST_CASE("unslit sphere mesh", "[mesh]") {
  auto spec = make_cut_spec(0, 0, 0);
  for (int n : {4, 8, 20}) {
    auto m = build_symmetric_mesh(n, spec);
    auto d = validate_mesh(m);
    INFO("n=" << n << " violations:" << (d.violations.empty() ? "" : d.violations[0]));
    CHECK(d.euler_characteristic == 2);
    CHECK(d.duplicated_dofs == 0);  // N^h = M^h without cuts
    CHECK(d.conformity_violations == 0);
    CHECK(d.sigma_closure);
    CHECK(d.rotation_closure);
    CHECK(d.min_quality > 0.2);
    CHECK(m.h_max / m.h_min < 4.0);
    CHECK(m.h_max < 1.7 * kPi / n);
  }
}

TEST_CASE("tiny slit mesh dof count", "[mesh]") {
  // n=4, delta=(pi/2)^3: each cut has one interior node (ring 1), the pole
  // splits into 3 wedge dofs: N^h - M^h = 3*1 + 2
  auto spec = make_cut_spec(kPi / 2, kPi / 2, kPi / 2);
  auto m = build_symmetric_mesh(4, spec);
  CHECK(m.n_dofs - m.n_geometric() == 5);
  auto d = validate_mesh(m);
  CHECK(d.euler_characteristic == 2);
  CHECK(d.conformity_violations == 0);

  // chains: pole -> ring1 -> tip
  for (int i = 0; i < 3; ++i) {
    REQUIRE(m.chain[i].size() == 3);
    CHECK(m.chain[i][0].ring == 0);
    CHECK(m.chain[i][2].ring == 2);
    CHECK(m.chain[i][1].dof_east != m.chain[i][1].dof_west);
    CHECK(m.chain[i][2].dof_east == m.chain[i][2].dof_west);  // tip: single dof
    CHECK(m.chain[i][1].r_to_tip == Catch::Approx(kPi / 4));
  }
}

TEST_CASE("dof symmetry tables", "[mesh]") {
  auto spec = make_cut_spec(kPi / 2, kPi / 2, kPi / 2);
  auto m = build_symmetric_mesh(8, spec);
  REQUIRE(m.dof_sigma_valid);
  REQUIRE(m.dof_R_valid);
  for (int d = 0; d < m.n_dofs; ++d) {
    CHECK(m.dof_sigma[m.dof_sigma[d]] == d);
    CHECK(m.dof_R[m.dof_R[m.dof_R[d]]] == d);
  }
  // asymmetric triple: sigma table requires delta2 == delta3
  auto spec2 = make_cut_spec(kPi / 4, kPi / 2, kPi / 2);
  auto m2 = build_symmetric_mesh(8, spec2);
  CHECK(m2.dof_sigma_valid);
  CHECK_FALSE(m2.dof_R_valid);
}

TEST_CASE("slit mesh structure across deltas", "[mesh]") {
  for (int n : {8, 16}) {
    auto adm = admissible_deltas(n);
    auto spec = make_cut_spec(adm[n / 4], adm[n / 2], adm[n / 2]);
    auto m = build_symmetric_mesh(n, spec);
    auto d = validate_mesh(m);
    INFO("n=" << n);
    for (auto& v : d.violations) INFO(v);
    CHECK(d.euler_characteristic == 2);
    CHECK(d.conformity_violations == 0);
    CHECK(d.sigma_closure);
    CHECK(d.rotation_closure);
    // duplicated dofs: interior cut nodes (one pair each) + pole wedges
    int expected = 0;
    for (int i = 0; i < 3; ++i) expected += m.tip_ring[i] - 1;
    expected += 2;  // pole: 3 wedges = 2 extra
    CHECK(m.n_dofs - m.n_geometric() == expected);
    CHECK(m.h_max / m.h_min < 4.0);
    CHECK(d.min_quality > 0.2);
  }
}

TEST_CASE("tip stars congruent across tips", "[mesh]") {
  // prerequisite for the trace-jump constants c_1 = c_2 = c_3
  for (int n : {16, 40}) {
    auto adm = admissible_deltas(n);
    auto spec = make_cut_spec(adm[n / 4 - 1], adm[5 * n / 8 - 1], adm[5 * n / 8 - 1]);
    auto m = build_symmetric_mesh(n, spec);
    auto d = validate_mesh(m);
    INFO("n=" << n << " mismatch=" << d.tip_star_mismatch);
    CHECK(d.tip_star_mismatch < 1e-10);
  }
}

TEST_CASE("full meridian cut: tip at the south pole", "[mesh]") {
  auto spec = make_cut_spec(kPi, 0, 0);
  auto m = build_symmetric_mesh(8, spec);
  auto d = validate_mesh(m);
  CHECK(d.euler_characteristic == 2);
  CHECK(d.conformity_violations == 0);
  // chain runs pole to pole; interior nodes duplicated, both endpoints single
  REQUIRE(m.chain[0].size() == 9);
  CHECK(m.chain[0][0].dof_east == m.chain[0][0].dof_west);
  CHECK(m.chain[0][8].dof_east == m.chain[0][8].dof_west);
  for (int k = 1; k < 8; ++k) CHECK(m.chain[0][k].dof_east != m.chain[0][k].dof_west);
  CHECK(m.n_dofs - m.n_geometric() == 7);
}

TEST_CASE("rejects off-grid deltas", "[mesh]") {
  auto spec = make_cut_spec(1.0, 1.0, 1.0);  // 1.0 is not k*pi/8
  CHECK_THROWS(build_symmetric_mesh(8, spec));
}

TEST_CASE("constructed conformity violation is flagged", "[mesh]") {
  auto spec = make_cut_spec(kPi / 2, kPi / 2, kPi / 2);
  auto m = build_symmetric_mesh(8, spec);
  // splice in a triangle straddling C2 (azimuth pi/6)
  int a = (int)m.verts.size();
  m.verts.push_back(unit_from_polar(0.8, kPi / 6 - 0.1));
  m.verts.push_back(unit_from_polar(0.8, kPi / 6 + 0.1));
  m.verts.push_back(unit_from_polar(0.9, kPi / 6));
  m.vertex_sigma.resize(m.verts.size());
  m.vertex_R.resize(m.verts.size());
  for (int i = a; i < a + 3; ++i) m.vertex_sigma[i] = m.vertex_R[i] = i;  // placeholder
  m.tris.push_back({a, a + 1, a + 2});
  m.tri_sector.push_back(0);
  auto d = validate_mesh(m);
  CHECK(d.conformity_violations > 0);
}

TEST_CASE("OFF export parses back", "[mesh]") {
  auto spec = make_cut_spec(kPi / 2, kPi / 2, kPi / 2);
  auto m = build_symmetric_mesh(4, spec);
  std::string path = "mesh_test.off";
  std::FILE* fp = std::fopen(path.c_str(), "w");
  REQUIRE(fp);
  write_off(m, fp);
  std::fclose(fp);
  fp = std::fopen(path.c_str(), "r");
  REQUIRE(fp);
  char line[256];
  REQUIRE(std::fgets(line, sizeof line, fp));
  CHECK(std::string(line) == "OFF\n");
  int nv = 0, nt = 0, ne = 0;
  while (std::fgets(line, sizeof line, fp)) {
    if (line[0] == '#') continue;
    REQUIRE(std::sscanf(line, "%d %d %d", &nv, &nt, &ne) == 3);
    break;
  }
  CHECK(nv == m.n_geometric());
  CHECK(nt == (int)m.tris.size());
  std::fclose(fp);
  std::remove(path.c_str());
}

TEST_CASE("quadrature rules integrate polynomials", "[mesh]") {
  // degree-6 rule integrates x^a y^b exactly on the reference triangle
  const auto& r = quadrature::degree6_rule();
  auto mono = [&](int a, int b) {
    double s = 0;
    for (size_t q = 0; q < r.pts.size(); ++q)
      s += r.w[q] * std::pow(r.pts[q][1], a) * std::pow(r.pts[q][2], b);
    return s;  // relative to area 1... reference integral over bary simplex
  };
  // int over the unit triangle of x^a y^b = a! b! / (a+b+2)! (area-normalized: x2)
  auto exact = [](int a, int b) {
    auto fact = [](int k) { double f = 1; for (int i = 2; i <= k; ++i) f *= i; return f; };
    return 2.0 * fact(a) * fact(b) / fact(a + b + 2);
  };
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; a + b <= 6; ++b)
      CHECK(mono(a, b) == Catch::Approx(exact(a, b)).margin(1e-14));

  // graded rule keeps total weight 1
  const auto& g = quadrature::graded_rule(1, 8);
  double tot = 0;
  for (double w : g.w) tot += w;
  CHECK(tot == Catch::Approx(1.0).margin(1e-12));
}
