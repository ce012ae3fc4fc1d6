#pragma once

// Symmetric geodesic triangulations of the sphere, conforming to the three
// cut meridians, with duplicated degrees of freedom along the slits.
//
// Construction: the fundamental half-lune (azimuths [-pi/2, -pi/6]) is meshed
// with latitude rings at k*pi/n. Next to the meridian sits a "collar" column
// of vertices at fixed perpendicular geodesic distance; collar vertices at
// different rings are exact rotations of one another along the meridian, so
// the triangle stars of all meridian vertices (in particular all crack tips)
// are congruent up to isometry at machine precision. The rest of each ring is
// filled with evenly spaced vertices and zipped together ring-to-ring. The 6
// images under the dihedral group {R, sigma} tile the sphere; shared boundary
// vertices are identified combinatorially, never by coordinate comparison.

#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>

#include "slitsphere/geometry.hpp"

namespace slitsphere::meshing {

using geometry::CutSpec;

// ---------------------------------------------------------------------------
// Dihedral group D3 as labels g = sigma^s R^r, id = 3*s + r.

namespace group {
inline int mul(int a, int b) {  // a after b
  int sa = a / 3, ra = a % 3, sb = b / 3, rb = b % 3;
  int s = (sa + sb) % 2;
  int r = ((sb ? -ra : ra) + rb) % 3;
  if (r < 0) r += 3;
  return 3 * s + r;
}
inline Mat3 mat(int g) {
  Mat3 m = rot_z(2 * kPi * (g % 3) / 3.0);
  if (g / 3) m = mirror_x() * m;
  return m;
}
inline int sector(int g) {  // sector index of g*F in {-1,0,1}
  int s = g / 3, r = g % 3;
  return s == 0 ? r - 1 : 1 - r;
}
inline int meridian(int g) {  // which C_i carries g*(meridian edge of F)
  static const int tab[6] = {0, 1, 2, 0, 2, 1};
  return tab[g];
}
inline int mid(int g) {  // which mid-meridian carries g*(mid edge of F)
  static const int tab[6] = {0, 1, 2, 2, 1, 0};
  return tab[g];
}
inline constexpr int kSigma = 3;  // label of sigma
inline constexpr int kR = 1;      // label of R
}  // namespace group

// east/west sectors adjacent to each cut meridian
inline constexpr int kEastSector[3] = {-1, 0, 1};
inline constexpr int kWestSector[3] = {1, -1, 0};

// mid-meridian azimuths (index: 0 in Omega_-1, 1 in Omega_0, 2 in Omega_1)
inline constexpr double kMidAzimuth[3] = {-kPi / 6, kPi / 2, 7 * kPi / 6};
inline constexpr double kMidDir[3][2] = {{geometry::exact::kHalfSqrt3, -0.5},
                                         {0.0, 1.0},
                                         {-geometry::exact::kHalfSqrt3, -0.5}};

inline Vec3 meridian_node(int arc, double colat) { return geometry::cut_point(arc, colat); }
inline Vec3 mid_node(int mid, double colat) {
  double st = std::sin(colat);
  return {kMidDir[mid][0] * st, kMidDir[mid][1] * st, std::cos(colat)};
}

// ---------------------------------------------------------------------------

inline std::vector<double> admissible_deltas(int n) {
  if (n < 4) throw std::invalid_argument("admissible_deltas: n >= 4 required");
  std::vector<double> out;
  for (int k = 1; k < n; ++k) out.push_back(k * kPi / n);
  return out;
}

enum class VertexKind : uint8_t { pole_north, pole_south, meridian, mid, interior };

struct ChainNode {
  int ring;
  int vertex;
  int dof_east;
  int dof_west;
  double r_to_tip;
};

struct SlitMesh {
  int rings = 0;          // n
  CutSpec spec;
  double h_target = 0;    // pi/n

  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> tris;  // vertex indices, outward orientation
  std::vector<int8_t> tri_sector;        // -1, 0, 1

  std::vector<VertexKind> vkind;
  std::vector<int16_t> vring;      // ring for meridian/mid/pole vertices, -1 else
  std::vector<int8_t> vmeridian;   // C_i index for meridian vertices, -1 else

  // dofs
  int n_dofs = 0;
  std::vector<std::array<int, 3>> vdof;  // per vertex, slot = sector+1
  std::vector<std::array<int, 3>> tri_dofs;
  std::vector<int> dof_vertex;

  std::array<std::vector<int>, 3> meridian_vertex;  // [arc][ring] -> vertex id
  std::array<int, 3> tip_ring{};                    // 0 when arc absent
  std::array<std::vector<ChainNode>, 3> chain;      // per present arc

  // symmetry maps
  std::vector<int> vertex_sigma, vertex_R;
  std::vector<int> dof_sigma;  // valid iff delta2 == delta3
  std::vector<int> dof_R;      // valid iff all deltas equal
  bool dof_sigma_valid = false, dof_R_valid = false;

  double h_max = 0, h_min = 0;

  int n_geometric() const { return (int)verts.size(); }
};

namespace detail {

struct FundVertex {
  VertexKind kind;
  int ring;   // for meridian/mid/interior (its ring), poles: 0 / n
  Vec3 pos;
};

struct FundMesh {
  std::vector<FundVertex> v;
  std::vector<std::array<int, 3>> tris;
  int pole_n = -1, pole_s = -1;
  std::vector<int> mer;  // per ring 1..n-1 (index ring-1)
  std::vector<int> mid;
};

inline FundMesh build_fundamental(int n) {
  FundMesh f;
  const double h = kPi / n;
  const double collar_d = 0.5 * h;
  const double az0 = -kPi / 2, az1 = -kPi / 6;

  f.pole_n = (int)f.v.size();
  f.v.push_back({VertexKind::pole_north, 0, {0, 0, 1}});
  f.pole_s = (int)f.v.size();
  f.v.push_back({VertexKind::pole_south, n, {0, 0, -1}});
  f.mer.assign(n + 1, -1);
  f.mid.assign(n + 1, -1);
  f.mer[0] = f.mid[0] = f.pole_n;
  f.mer[n] = f.mid[n] = f.pole_s;

  std::vector<std::vector<int>> chain(n + 1);
  chain[0] = {f.pole_n};
  chain[n] = {f.pole_s};
  for (int k = 1; k < n; ++k) {
    double t = k * h;
    double st = std::sin(t);
    f.mer[k] = (int)f.v.size();
    f.v.push_back({VertexKind::meridian, k, meridian_node(0, t)});
    chain[k].push_back(f.mer[k]);

    // collar vertex: exact meridian-rotation orbit of the ring-1 collar point
    Vec3 p = f.v.back().pos;
    Vec3 vc = std::cos(collar_d) * p + std::sin(collar_d) * Vec3{1, 0, 0};
    double az_c = az0 + std::atan2(std::sin(collar_d), std::cos(collar_d) * st);
    chain[k].push_back((int)f.v.size());
    f.v.push_back({VertexKind::interior, k, vc});

    double arc = (az1 - az_c) * st;
    int m = std::max(1, (int)std::ceil(arc / (1.25 * h)));
    for (int j = 1; j < m; ++j) {
      double az = az_c + (az1 - az_c) * j / m;
      chain[k].push_back((int)f.v.size());
      f.v.push_back({VertexKind::interior, k, unit_from_polar(t, az)});
    }
    f.mid[k] = (int)f.v.size();
    f.v.push_back({VertexKind::mid, k, mid_node(0, t)});
    chain[k].push_back(f.mid[k]);
  }

  auto chord2 = [&](int a, int b) {
    Vec3 d = f.v[a].pos - f.v[b].pos;
    return dot(d, d);
  };
  auto zip = [&](const std::vector<int>& A, const std::vector<int>& B) {
    size_t i = 0, j = 0;
    while (i + 1 < A.size() || j + 1 < B.size()) {
      bool advA;
      if (i + 1 >= A.size()) advA = false;
      else if (j + 1 >= B.size()) advA = true;
      else advA = chord2(A[i + 1], B[j]) <= chord2(B[j + 1], A[i]);
      if (advA) {
        f.tris.push_back({A[i], A[i + 1], B[j]});
        ++i;
      } else {
        f.tris.push_back({A[i], B[j + 1], B[j]});
        ++j;
      }
    }
  };

  // north fan
  for (size_t j = 0; j + 1 < chain[1].size(); ++j)
    f.tris.push_back({f.pole_n, chain[1][j], chain[1][j + 1]});
  // ladders + zipped remainders
  for (int k = 1; k < n - 1; ++k) {
    const auto& A = chain[k];
    const auto& B = chain[k + 1];
    f.tris.push_back({A[0], B[0], A[1]});
    f.tris.push_back({B[0], B[1], A[1]});
    std::vector<int> Ar(A.begin() + 1, A.end());
    std::vector<int> Br(B.begin() + 1, B.end());
    zip(Ar, Br);
  }
  // south fan
  for (size_t j = 0; j + 1 < chain[n - 1].size(); ++j)
    f.tris.push_back({chain[n - 1][j], chain[n - 1][j + 1], f.pole_s});
  return f;
}

struct UnionFind3 {
  std::array<int, 3> parent{0, 1, 2};
  int find(int s) {
    while (parent[s] != s) s = parent[s];
    return s;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace detail

inline SlitMesh build_symmetric_mesh(int n, const CutSpec& spec) {
  if (n < 4) throw std::invalid_argument("build_symmetric_mesh: n >= 4 required");
  std::array<int, 3> tip_ring{};
  for (int i = 0; i < 3; ++i) {
    if (!spec.arc_present(i)) {
      tip_ring[i] = 0;
      continue;
    }
    double k = spec.delta[i] * n / kPi;
    int ki = (int)std::lround(k);
    if (std::abs(k - ki) > 1e-9 || ki < 1 || ki > n)
      throw std::invalid_argument("build_symmetric_mesh: delta not on the admissible grid");
    tip_ring[i] = ki;
  }

  detail::FundMesh f = detail::build_fundamental(n);

  SlitMesh m;
  m.rings = n;
  m.spec = spec;
  m.h_target = kPi / n;
  m.tip_ring = tip_ring;

  // --- instantiate the 6 copies with combinatorial identification ---
  const int F = (int)f.v.size();
  std::vector<std::array<int, 6>> gid(F);  // fund vertex x copy -> global id
  for (auto& a : gid) a.fill(-1);

  std::array<std::array<int, 3>, 3> mer_id{};  // [C_i][ring] via vectors below
  std::array<std::vector<int>, 3> mer_vid, mid_vid;
  for (int i = 0; i < 3; ++i) {
    mer_vid[i].assign(n + 1, -1);
    mid_vid[i].assign(n + 1, -1);
  }
  (void)mer_id;

  auto add_vertex = [&](VertexKind kind, int ring, int meridian, const Vec3& pos) {
    m.verts.push_back(pos);
    m.vkind.push_back(kind);
    m.vring.push_back((int16_t)ring);
    m.vmeridian.push_back((int8_t)meridian);
    return (int)m.verts.size() - 1;
  };

  int gpole_n = add_vertex(VertexKind::pole_north, 0, -1, {0, 0, 1});
  int gpole_s = add_vertex(VertexKind::pole_south, n, -1, {0, 0, -1});
  for (int i = 0; i < 3; ++i) {
    mer_vid[i][0] = mid_vid[i][0] = gpole_n;
    mer_vid[i][n] = mid_vid[i][n] = gpole_s;
    for (int k = 1; k < n; ++k)
      mer_vid[i][k] = add_vertex(VertexKind::meridian, k, i, meridian_node(i, k * kPi / n));
    for (int k = 1; k < n; ++k)
      mid_vid[i][k] = add_vertex(VertexKind::mid, k, -1, mid_node(i, k * kPi / n));
  }
  for (int g = 0; g < 6; ++g) {
    Mat3 M = group::mat(g);
    for (int fv = 0; fv < F; ++fv) {
      switch (f.v[fv].kind) {
        case VertexKind::pole_north: gid[fv][g] = gpole_n; break;
        case VertexKind::pole_south: gid[fv][g] = gpole_s; break;
        case VertexKind::meridian: gid[fv][g] = mer_vid[group::meridian(g)][f.v[fv].ring]; break;
        case VertexKind::mid: gid[fv][g] = mid_vid[group::mid(g)][f.v[fv].ring]; break;
        case VertexKind::interior:
          gid[fv][g] = add_vertex(VertexKind::interior, f.v[fv].ring, -1, M * f.v[fv].pos);
          break;
      }
    }
  }

  for (int g = 0; g < 6; ++g) {
    for (const auto& t : f.tris) {
      std::array<int, 3> tv = {gid[t[0]][g], gid[t[1]][g], gid[t[2]][g]};
      const Vec3 &a = m.verts[tv[0]], &b = m.verts[tv[1]], &c = m.verts[tv[2]];
      if (dot(cross(a, b), c) < 0) std::swap(tv[1], tv[2]);
      m.tris.push_back(tv);
      m.tri_sector.push_back((int8_t)group::sector(g));
    }
  }
  m.meridian_vertex = mer_vid;

  // --- vertex symmetry maps ---
  const int V = (int)m.verts.size();
  m.vertex_sigma.assign(V, -1);
  m.vertex_R.assign(V, -1);
  m.vertex_sigma[gpole_n] = gpole_n;
  m.vertex_sigma[gpole_s] = gpole_s;
  m.vertex_R[gpole_n] = gpole_n;
  m.vertex_R[gpole_s] = gpole_s;
  static const int sig_mer[3] = {0, 2, 1}, rot_mer[3] = {1, 2, 0};
  static const int sig_mid[3] = {2, 1, 0}, rot_mid[3] = {1, 2, 0};
  for (int i = 0; i < 3; ++i)
    for (int k = 1; k < n; ++k) {
      m.vertex_sigma[mer_vid[i][k]] = mer_vid[sig_mer[i]][k];
      m.vertex_R[mer_vid[i][k]] = mer_vid[rot_mer[i]][k];
      m.vertex_sigma[mid_vid[i][k]] = mid_vid[sig_mid[i]][k];
      m.vertex_R[mid_vid[i][k]] = mid_vid[rot_mid[i]][k];
    }
  for (int g = 0; g < 6; ++g)
    for (int fv = 0; fv < F; ++fv)
      if (f.v[fv].kind == VertexKind::interior) {
        m.vertex_sigma[gid[fv][g]] = gid[fv][group::mul(group::kSigma, g)];
        m.vertex_R[gid[fv][g]] = gid[fv][group::mul(group::kR, g)];
      }

  // --- dofs ---
  m.vdof.assign(V, {-1, -1, -1});
  auto pole_wedges = [&](bool south) {
    detail::UnionFind3 uf;  // indices = sector+1
    for (int i = 0; i < 3; ++i) {
      bool separates = south ? (tip_ring[i] == n && spec.arc_present(i)) : spec.arc_present(i);
      if (!separates) uf.unite(kEastSector[i] + 1, kWestSector[i] + 1);
    }
    return uf;
  };
  auto assign_pole = [&](int v, bool south) {
    auto uf = pole_wedges(south);
    std::array<int, 3> dof{-1, -1, -1};
    for (int s = 0; s < 3; ++s) {
      int root = uf.find(s);
      if (dof[root] < 0) {
        dof[root] = m.n_dofs++;
        m.dof_vertex.push_back(v);
      }
      m.vdof[v][s] = dof[root];
    }
  };
  for (int v = 0; v < V; ++v) {
    if (v == gpole_n) {
      assign_pole(v, false);
    } else if (v == gpole_s) {
      assign_pole(v, true);
    } else if (m.vkind[v] == VertexKind::meridian && m.vring[v] < tip_ring[m.vmeridian[v]]) {
      int arc = m.vmeridian[v];
      int de = m.n_dofs++;
      m.dof_vertex.push_back(v);
      int dw = m.n_dofs++;
      m.dof_vertex.push_back(v);
      m.vdof[v][kEastSector[arc] + 1] = de;
      m.vdof[v][kWestSector[arc] + 1] = dw;
    } else {
      int d = m.n_dofs++;
      m.dof_vertex.push_back(v);
      m.vdof[v] = {d, d, d};
    }
  }
  m.tri_dofs.resize(m.tris.size());
  for (size_t t = 0; t < m.tris.size(); ++t) {
    int slot = m.tri_sector[t] + 1;
    for (int c = 0; c < 3; ++c) {
      int d = m.vdof[m.tris[t][c]][slot];
      if (d < 0) throw std::logic_error("dof lookup failed");
      m.tri_dofs[t][c] = d;
    }
  }

  // --- dof symmetry maps ---
  static const int sig_sector[3] = {1, 0, -1};  // image of sector -1,0,1
  static const int rot_sector[3] = {0, 1, -1};
  auto build_dof_map = [&](const std::vector<int>& vmap, const int smap[3]) {
    std::vector<int> dmap(m.n_dofs, -1);
    for (int v = 0; v < V; ++v) {
      for (int s = 0; s < 3; ++s) {
        int d = m.vdof[v][s];
        if (d < 0) continue;
        int dd = m.vdof[vmap[v]][smap[s] + 1];
        if (dd < 0) return std::vector<int>();  // structure not symmetric
        if (dmap[d] >= 0 && dmap[d] != dd) return std::vector<int>();
        dmap[d] = dd;
      }
    }
    return dmap;
  };
  if (spec.delta[1] == spec.delta[2]) {
    m.dof_sigma = build_dof_map(m.vertex_sigma, sig_sector);
    m.dof_sigma_valid = !m.dof_sigma.empty();
  }
  if (spec.delta[0] == spec.delta[1] && spec.delta[1] == spec.delta[2]) {
    m.dof_R = build_dof_map(m.vertex_R, rot_sector);
    m.dof_R_valid = !m.dof_R.empty();
  }

  // --- cut chains ---
  for (int i = 0; i < 3; ++i) {
    if (!spec.arc_present(i)) continue;
    for (int k = 0; k <= tip_ring[i]; ++k) {
      int v = mer_vid[i][k];
      ChainNode node;
      node.ring = k;
      node.vertex = v;
      node.dof_east = m.vdof[v][kEastSector[i] + 1];
      node.dof_west = m.vdof[v][kWestSector[i] + 1];
      node.r_to_tip = (tip_ring[i] - k) * kPi / n;
      m.chain[i].push_back(node);
    }
  }

  // --- mesh size ---
  m.h_max = 0;
  m.h_min = 1e30;
  for (const auto& t : m.tris)
    for (int c = 0; c < 3; ++c) {
      double e = angle_between(m.verts[t[c]], m.verts[t[(c + 1) % 3]]);
      m.h_max = std::max(m.h_max, e);
      m.h_min = std::min(m.h_min, e);
    }
  return m;
}

// ---------------------------------------------------------------------------
// Diagnostics

struct MeshDiagnostics {
  int n_vertices = 0, n_dofs = 0, n_triangles = 0, n_edges = 0;
  int euler_characteristic = 0;
  int duplicated_dofs = 0;  // N^h - M^h
  double h_max = 0, h_min = 0;
  double min_quality = 1;  // inradius/circumradius of chordal triangles
  int conformity_violations = 0;
  bool sigma_closure = false, rotation_closure = false;
  double tip_star_mismatch = 0;  // max over present tip pairs
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

namespace detail {

inline double triangle_quality(const Vec3& a, const Vec3& b, const Vec3& c) {
  double la = norm(b - c), lb = norm(c - a), lc = norm(a - b);
  double s = 0.5 * (la + lb + lc);
  double area2 = std::max(0.0, s * (s - la) * (s - lb) * (s - lc));
  double area = std::sqrt(area2);
  if (area <= 0) return 0;
  double inr = area / s;
  double circ = la * lb * lc / (4 * area);
  return inr / circ;
}

// Does the open geodesic edge (a,b) cross the open half-great-circle of cut
// circle C_i (colat 0..len, the correct azimuth half)?
inline bool edge_crosses_cut(const Vec3& a, const Vec3& b, int arc, double len) {
  // normal of the meridian plane (rotate the azimuth direction by +pi/2)
  Vec3 nrm{-geometry::exact::kCutDir[arc][1], geometry::exact::kCutDir[arc][0], 0};
  double fa = dot(a, nrm), fb = dot(b, nrm);
  // endpoints on the plane (vertices on the meridian) never count as crossings
  if (std::abs(fa) < 1e-13 || std::abs(fb) < 1e-13) return false;
  if (!(fa * fb < 0)) return false;
  // intersection of the edge's great circle with the plane
  Vec3 gc = cross(a, b);
  Vec3 w = cross(nrm, gc);
  double nw = norm(w);
  if (nw < 1e-14) return false;  // edge lies in the plane
  w = w * (1.0 / nw);
  for (const Vec3& cand : {w, -w}) {
    // on the short arc between a and b?
    if (dot(cand, a + b) <= 0) continue;
    if (dot(cross(a, cand), gc) < 0 || dot(cross(cand, b), gc) < 0) continue;
    // on the correct azimuth half and inside the arc length?
    double proj = cand.x * geometry::exact::kCutDir[arc][0] + cand.y * geometry::exact::kCutDir[arc][1];
    if (proj <= 0) continue;
    double colat = std::acos(std::clamp(cand.z, -1.0, 1.0));
    if (colat < len) return true;
  }
  return false;
}

// All edge lengths of the triangles incident to vtx, sorted; a tie-robust
// fingerprint of the star's shape multiset.
inline std::vector<double> star_shapes(const SlitMesh& m, int vtx) {
  std::vector<double> edges;
  for (const auto& t : m.tris) {
    if (t[0] != vtx && t[1] != vtx && t[2] != vtx) continue;
    edges.push_back(angle_between(m.verts[t[0]], m.verts[t[1]]));
    edges.push_back(angle_between(m.verts[t[1]], m.verts[t[2]]));
    edges.push_back(angle_between(m.verts[t[2]], m.verts[t[0]]));
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

}  // namespace detail

inline MeshDiagnostics validate_mesh(const SlitMesh& m) {
  MeshDiagnostics d;
  d.n_vertices = (int)m.verts.size();
  d.n_dofs = m.n_dofs;
  d.n_triangles = (int)m.tris.size();
  d.duplicated_dofs = m.n_dofs - d.n_vertices;
  d.h_max = m.h_max;
  d.h_min = m.h_min;

  std::set<std::pair<int, int>> edges;
  for (const auto& t : m.tris)
    for (int c = 0; c < 3; ++c) {
      int a = t[c], b = t[(c + 1) % 3];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  d.n_edges = (int)edges.size();
  d.euler_characteristic = d.n_vertices - d.n_edges + d.n_triangles;
  if (d.euler_characteristic != 2) d.violations.push_back("euler characteristic != 2");

  for (const auto& t : m.tris)
    d.min_quality =
        std::min(d.min_quality, detail::triangle_quality(m.verts[t[0]], m.verts[t[1]], m.verts[t[2]]));

  // edges must not cross any cut circle (full half-circles per the mesh
  // contract, not just the slit arcs)
  for (const auto& t : m.tris)
    for (int c = 0; c < 3; ++c) {
      const Vec3 &a = m.verts[t[c]], &b = m.verts[t[(c + 1) % 3]];
      for (int arc = 0; arc < 3; ++arc)
        if (detail::edge_crosses_cut(a, b, arc, kPi)) ++d.conformity_violations;
    }
  if (d.conformity_violations) d.violations.push_back("edges crossing cut circles");

  // symmetry closure
  d.sigma_closure = true;
  d.rotation_closure = true;
  for (int v = 0; v < d.n_vertices; ++v) {
    if (m.vertex_sigma[m.vertex_sigma[v]] != v) d.sigma_closure = false;
    if (m.vertex_R[m.vertex_R[m.vertex_R[v]]] != v) d.rotation_closure = false;
    Vec3 ps = CutSpec::reflection() * m.verts[v];
    Vec3 pr = CutSpec::rotation() * m.verts[v];
    if (norm(ps - m.verts[m.vertex_sigma[v]]) > 1e-12) d.sigma_closure = false;
    if (norm(pr - m.verts[m.vertex_R[v]]) > 1e-12) d.rotation_closure = false;
  }
  if (!d.sigma_closure) d.violations.push_back("sigma orbit closure failed");
  if (!d.rotation_closure) d.violations.push_back("rotation orbit closure failed");

  // tip-star congruence across present tips (meaningful away from the poles)
  std::vector<int> tips;
  for (int i = 0; i < 3; ++i)
    if (m.spec.arc_present(i) && m.tip_ring[i] >= 2 && m.tip_ring[i] <= m.rings - 2)
      tips.push_back(m.meridian_vertex[i][m.tip_ring[i]]);
  for (size_t i = 0; i + 1 < tips.size(); ++i) {
    auto sa = detail::star_shapes(m, tips[i]);
    auto sb = detail::star_shapes(m, tips[i + 1]);
    if (sa.size() != sb.size()) {
      d.tip_star_mismatch = 1;
      continue;
    }
    for (size_t q = 0; q < sa.size(); ++q)
      d.tip_star_mismatch = std::max(d.tip_star_mismatch, std::abs(sa[q] - sb[q]));
  }
  if (d.tip_star_mismatch > 1e-10) d.violations.push_back("tip stars not congruent");

  return d;
}

// OFF export; the dof table rides along as a comment block.
inline void write_off(const SlitMesh& m, std::FILE* out) {
  std::fprintf(out, "OFF\n");
  std::fprintf(out, "# slit sphere mesh: n=%d dofs=%d\n", m.rings, m.n_dofs);
  std::fprintf(out, "# dof table: vertex east_dof mid_dof west_dof (sector slots -1,0,1)\n");
  for (size_t v = 0; v < m.verts.size(); ++v)
    std::fprintf(out, "# dof %zu %d %d %d\n", v, m.vdof[v][0], m.vdof[v][1], m.vdof[v][2]);
  std::fprintf(out, "%zu %zu 0\n", m.verts.size(), m.tris.size());
  for (const auto& v : m.verts) std::fprintf(out, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
  for (const auto& t : m.tris) std::fprintf(out, "3 %d %d %d\n", t[0], t[1], t[2]);
}

}  // namespace slitsphere::meshing
