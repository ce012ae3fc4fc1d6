#pragma once

// P1 finite elements on the radially projected polyhedron: stiffness and mass
// over the slit dof space, singular-function enrichment blocks, and the
// constraint machinery (antisymmetry, zero mean).
//
// Element integrals are pulled back to the planar chordal triangle through
// the radial projection Pi with its exact Jacobian c/|p|^3. The stiffness
// coupling with a singular function uses -int (Delta s) phi, which is valid
// because s has zero Neumann data on the cuts and no tip flux; this keeps all
// 2D quadratures free of gradient singularities.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "slitsphere/mesh.hpp"
#include "slitsphere/quadrature.hpp"
#include "slitsphere/singular.hpp"

namespace slitsphere::fem {

using meshing::SlitMesh;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct SparseSymmetric {
  int n = 0;
  SpMat lower;  // lower triangle only

  SpMat full() const {
    SpMat f = lower.selfadjointView<Eigen::Lower>();
    return f;
  }
  Eigen::VectorXd operator*(const Eigen::VectorXd& v) const {
    return lower.selfadjointView<Eigen::Lower>() * v;
  }
  double quad(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return a.dot(lower.selfadjointView<Eigen::Lower>() * b);
  }
};

inline SparseSymmetric from_triplets(int n, std::vector<Triplet>& t) {
  SparseSymmetric s;
  s.n = n;
  s.lower.resize(n, n);
  s.lower.setFromTriplets(t.begin(), t.end());
  s.lower.makeCompressed();
  return s;
}

inline void write_matrix_market(const SparseSymmetric& m, std::FILE* out) {
  std::fprintf(out, "%%%%MatrixMarket matrix coordinate real symmetric\n");
  std::fprintf(out, "%d %d %d\n", m.n, m.n, (int)m.lower.nonZeros());
  for (int k = 0; k < m.lower.outerSize(); ++k)
    for (SpMat::InnerIterator it(m.lower, k); it; ++it)
      std::fprintf(out, "%d %d %.17g\n", (int)it.row() + 1, (int)it.col() + 1, it.value());
}

// ---------------------------------------------------------------------------
// Element geometry on the chordal triangle

namespace detail {

struct TriGeom {
  Vec3 A, B, C;
  Vec3 nrm;      // unit normal, outward
  double c;      // plane offset: A . nrm
  double area;   // planar area
  Vec3 g[3];     // in-plane gradients of barycentric coordinates

  Vec3 plane_point(const std::array<double, 3>& b) const {
    return b[0] * A + b[1] * B + b[2] * C;
  }
};

inline TriGeom tri_geom(const Vec3& A, const Vec3& B, const Vec3& C) {
  TriGeom t;
  t.A = A;
  t.B = B;
  t.C = C;
  Vec3 cr = cross(B - A, C - A);
  double n2 = norm(cr);
  t.area = 0.5 * n2;
  t.nrm = cr * (1.0 / n2);
  if (dot(t.nrm, A + B + C) < 0) throw std::logic_error("triangle not outward oriented");
  t.c = dot(t.A, t.nrm);
  if (t.area < 1e-14) throw std::invalid_argument("degenerate triangle");
  t.g[0] = cross(t.nrm, C - B) * (1.0 / (2 * t.area));
  t.g[1] = cross(t.nrm, A - C) * (1.0 / (2 * t.area));
  t.g[2] = cross(t.nrm, B - A) * (1.0 / (2 * t.area));
  return t;
}

struct QuadPoint {
  Vec3 s;        // point on the sphere
  double jw;     // weight * planar area * projection Jacobian
  double lam[3]; // barycentric values
  Vec3 sgrad[3]; // surface gradients of the three basis functions
};

inline void eval_quad_points(const TriGeom& t, const quadrature::CompositeRule& rule,
                             bool need_grads, std::vector<QuadPoint>& out) {
  out.clear();
  out.reserve(rule.pts.size());
  for (size_t q = 0; q < rule.pts.size(); ++q) {
    const auto& b = rule.pts[q];
    Vec3 p = t.plane_point(b);
    double pn = norm(p);
    Vec3 s = p * (1.0 / pn);
    double sn = dot(s, t.nrm);  // = c / |p|
    QuadPoint qp;
    qp.s = s;
    qp.jw = rule.w[q] * t.area * t.c / (pn * pn * pn);
    qp.lam[0] = b[0];
    qp.lam[1] = b[1];
    qp.lam[2] = b[2];
    if (need_grads) {
      double rho = t.c / sn;  // = |p|
      for (int i = 0; i < 3; ++i) {
        Vec3 w = rho * t.g[i] - (t.c * dot(t.g[i], s) / (sn * sn)) * t.nrm;
        qp.sgrad[i] = w - dot(w, s) * s;
      }
    }
    out.push_back(qp);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// FE blocks

struct FeBlocks {
  SparseSymmetric K, M;
};

inline FeBlocks assemble_fe_blocks(const SlitMesh& mesh,
                                   const quadrature::CompositeRule& rule = quadrature::plain_rule()) {
  std::vector<Triplet> kt, mt;
  kt.reserve(mesh.tris.size() * 6);
  mt.reserve(mesh.tris.size() * 6);
  std::vector<detail::QuadPoint> qps;
  for (size_t ti = 0; ti < mesh.tris.size(); ++ti) {
    const auto& tv = mesh.tris[ti];
    auto g = detail::tri_geom(mesh.verts[tv[0]], mesh.verts[tv[1]], mesh.verts[tv[2]]);
    detail::eval_quad_points(g, rule, true, qps);
    double ke[3][3] = {}, me[3][3] = {};
    for (const auto& qp : qps)
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          ke[i][j] += qp.jw * dot(qp.sgrad[i], qp.sgrad[j]);
          me[i][j] += qp.jw * qp.lam[i] * qp.lam[j];
        }
    const auto& td = mesh.tri_dofs[ti];
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        int r = std::max(td[i], td[j]), c = std::min(td[i], td[j]);
        kt.emplace_back(r, c, ke[i][j]);
        mt.emplace_back(r, c, me[i][j]);
      }
  }
  FeBlocks out;
  out.K = from_triplets(mesh.n_dofs, kt);
  out.M = from_triplets(mesh.n_dofs, mt);
  return out;
}

// ---------------------------------------------------------------------------
// Enriched system

struct TipBlock {
  singular::SingularTip tip;
  double k_diag = 0, m_diag = 0;
  double int_Ss = 0;    // int S_i s_i
  double load_ss = 0;   // int (Delta S_i) s_i
  Eigen::VectorXd k_cpl;      // -int (Delta s_i) phi_j
  Eigen::VectorXd m_cpl;      // int s_i phi_j
  Eigen::VectorXd dual_fe;    // int S_i phi_j
  Eigen::VectorXd dual_load;  // int (Delta S_i) phi_j
};

struct EnrichedSystem {
  SparseSymmetric K, M;  // dimension n_fe + n_tips
  int n_fe = 0;
  std::vector<TipBlock> tips;
  std::vector<std::string> warnings;

  int dim() const { return n_fe + (int)tips.size(); }
  // the constant function: ones on FE dofs, zero enrichment (int s_i = 0)
  Eigen::VectorXd constant_vector() const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim());
    c.head(n_fe).setOnes();
    return c;
  }
};

inline EnrichedSystem assemble_enriched(const SlitMesh& mesh, const FeBlocks& fe) {
  EnrichedSystem sys;
  sys.n_fe = mesh.n_dofs;
  auto tips = singular::tips_from_spec(mesh.spec);

  // pairwise disjoint supports; guaranteed by the rho policy
  for (size_t a = 0; a < tips.size(); ++a)
    for (size_t b = a + 1; b < tips.size(); ++b) {
      double d = geometry::geodesic_distance(tips[a].frame.tip, tips[b].frame.tip);
      if (d < tips[a].rho + tips[b].rho - 1e-9)
        throw std::logic_error("singular supports overlap; rho policy violated");
    }

  const double h = mesh.h_target;
  for (const auto& tip : tips) {
    TipBlock blk;
    blk.tip = tip;
    blk.k_diag = singular::stiffness_diag(tip);
    blk.m_diag = singular::mass_diag(tip);
    blk.int_Ss = singular::dual_primal_pairing(tip);
    blk.load_ss = singular::dual_load_on_primal(tip);
    blk.k_cpl = Eigen::VectorXd::Zero(sys.n_fe);
    blk.m_cpl = Eigen::VectorXd::Zero(sys.n_fe);
    blk.dual_fe = Eigen::VectorXd::Zero(sys.n_fe);
    blk.dual_load = Eigen::VectorXd::Zero(sys.n_fe);
    if (tip.rho < 4 * h)
      sys.warnings.push_back("rho < 4h at tip slot " + std::to_string(tip.alpha_slot));
    if (tip.rho / 2 < 4 * mesh.h_max)
      sys.warnings.push_back("cutoff annulus thinner than 4 elements at tip slot " +
                             std::to_string(tip.alpha_slot));

    std::vector<detail::QuadPoint> qps;
    for (size_t ti = 0; ti < mesh.tris.size(); ++ti) {
      const auto& tv = mesh.tris[ti];
      double r0 = geometry::geodesic_distance(mesh.verts[tv[0]], tip.frame.tip);
      double r1 = geometry::geodesic_distance(mesh.verts[tv[1]], tip.frame.tip);
      double r2 = geometry::geodesic_distance(mesh.verts[tv[2]], tip.frame.tip);
      double rmin = std::min({r0, r1, r2}), rmax = std::max({r0, r1, r2});
      if (rmin > tip.rho + 2 * mesh.h_max) continue;

      const quadrature::CompositeRule* rule;
      if (rmin < 1e-12) {
        int corner = (r0 < 1e-12) ? 0 : (r1 < 1e-12 ? 1 : 2);
        rule = &quadrature::graded_rule(corner, 12);
      } else if (rmin < 2.5 * h || (rmin < tip.rho / 2 && rmax > tip.rho / 2) ||
                 (rmin < tip.rho && rmax > tip.rho)) {
        rule = &quadrature::refined_rule();
      } else {
        rule = &quadrature::plain_rule();
      }

      auto g = detail::tri_geom(mesh.verts[tv[0]], mesh.verts[tv[1]], mesh.verts[tv[2]]);
      detail::eval_quad_points(g, *rule, false, qps);
      double s_acc[3] = {}, ds_acc[3] = {}, dual_acc[3] = {}, dl_acc[3] = {};
      for (const auto& qp : qps) {
        auto pc = geometry::tip_polar(tip.frame, qp.s);
        if (pc.r >= tip.rho) continue;
        geometry::CutoffProfile psi;
        auto pv = psi(pc.r / tip.rho);
        double f = singular::radial_f(pc.r);
        double ct = std::cos(0.5 * pc.theta);
        double sval = f * ct * pv.v;
        double dual = ct * pv.v / f;
        double dsval = 0, dlval = 0;
        if (pv.d1 != 0 || pv.d2 != 0) {
          double t = std::tan(0.5 * pc.r);
          dsval = ct * ((2.0 / f) * pv.d1 / tip.rho + f * pv.d2 / (tip.rho * tip.rho));
          dlval = ct * ((-t / f) * pv.d1 / tip.rho + (1.0 / f) * pv.d2 / (tip.rho * tip.rho));
        }
        for (int c = 0; c < 3; ++c) {
          double wl = qp.jw * qp.lam[c];
          s_acc[c] += wl * sval;
          ds_acc[c] += wl * dsval;
          dual_acc[c] += wl * dual;
          dl_acc[c] += wl * dlval;
        }
      }
      const auto& td = mesh.tri_dofs[ti];
      for (int c = 0; c < 3; ++c) {
        blk.m_cpl[td[c]] += s_acc[c];
        blk.k_cpl[td[c]] -= ds_acc[c];
        blk.dual_fe[td[c]] += dual_acc[c];
        blk.dual_load[td[c]] += dl_acc[c];
      }
    }
    sys.tips.push_back(std::move(blk));
  }

  // assemble enriched matrices: FE blocks bit-identical, then borders
  std::vector<Triplet> kt, mt;
  auto push_lower = [](std::vector<Triplet>& dst, const SpMat& lower) {
    for (int k = 0; k < lower.outerSize(); ++k)
      for (SpMat::InnerIterator it(lower, k); it; ++it)
        dst.emplace_back((int)it.row(), (int)it.col(), it.value());
  };
  push_lower(kt, fe.K.lower);
  push_lower(mt, fe.M.lower);
  for (size_t e = 0; e < sys.tips.size(); ++e) {
    int row = sys.n_fe + (int)e;
    const auto& blk = sys.tips[e];
    for (int j = 0; j < sys.n_fe; ++j) {
      if (blk.k_cpl[j] != 0) kt.emplace_back(row, j, blk.k_cpl[j]);
      if (blk.m_cpl[j] != 0) mt.emplace_back(row, j, blk.m_cpl[j]);
    }
    kt.emplace_back(row, row, blk.k_diag);
    mt.emplace_back(row, row, blk.m_diag);
  }
  sys.K = from_triplets(sys.dim(), kt);
  sys.M = from_triplets(sys.dim(), mt);
  return sys;
}

// ---------------------------------------------------------------------------
// Constraints

struct ConstraintSet {
  int n_full = 0;
  SpMat C;  // n_full x n_reduced embedding
  std::vector<Eigen::VectorXd> deflate;  // directions to project out, M-orthogonally
  int n_zero = 0, n_pairs = 0, n_free = 0;

  int reduced_dim() const { return (int)C.cols(); }
  int effective_dim() const { return reduced_dim() - (int)deflate.size(); }
};

inline ConstraintSet identity_constraint(int n) {
  ConstraintSet cs;
  cs.n_full = n;
  cs.C.resize(n, n);
  cs.C.setIdentity();
  cs.n_free = n;
  return cs;
}

// Zero mean via deflation of the constant direction (the embedding stays the
// identity; sparsity is untouched).
inline ConstraintSet build_zero_mean_constraint(const EnrichedSystem& sys) {
  ConstraintSet cs = identity_constraint(sys.dim());
  cs.deflate.push_back(sys.constant_vector());
  return cs;
}

inline ConstraintSet build_zero_mean_constraint_fe(const SlitMesh& mesh) {
  ConstraintSet cs = identity_constraint(mesh.n_dofs);
  cs.deflate.push_back(Eigen::VectorXd::Ones(mesh.n_dofs));
  return cs;
}

// Antisymmetric subspace: v(sigma x) = -v(x). FE dofs pair under the sigma
// dof permutation with sign -1 (sigma-fixed dofs are forced to zero);
// enrichment dofs transform with an extra sign because s_i o sigma = -s_i
// (slot 0 and the pole slot are free, slots 1 and 2 are tied with alpha2 =
// alpha3).
inline ConstraintSet build_antisymmetry_constraint(const SlitMesh& mesh, int n_tips = 0,
                                                   const std::vector<singular::SingularTip>* tips = nullptr) {
  if (!mesh.dof_sigma_valid)
    throw std::invalid_argument("antisymmetry constraint requires delta2 == delta3 mesh");
  int n_fe = mesh.n_dofs;
  int n = n_fe + n_tips;

  // signed involution P: v must satisfy sign(d) * v[perm(d)] = -v[d]
  std::vector<int> perm(n);
  std::vector<double> sign(n, 1.0);
  for (int d = 0; d < n_fe; ++d) perm[d] = mesh.dof_sigma[d];
  if (n_tips > 0) {
    std::array<int, 4> slot_pos{-1, -1, -1, -1};
    for (int e = 0; e < n_tips; ++e) slot_pos[(*tips)[e].alpha_slot] = n_fe + e;
    for (int e = 0; e < n_tips; ++e) {
      int d = n_fe + e;
      int slot = (*tips)[e].alpha_slot;
      sign[d] = -1.0;
      if (slot == 1 || slot == 2) {
        int other = slot_pos[3 - slot];
        if (other < 0) throw std::logic_error("mirror tip missing in enrichment");
        perm[d] = other;
      } else {
        perm[d] = d;
      }
    }
  }

  ConstraintSet cs;
  cs.n_full = n;
  std::vector<Triplet> ct;
  int col = 0;
  for (int d = 0; d < n; ++d) {
    int pd = perm[d];
    if (pd == d) {
      if (sign[d] > 0) {
        ++cs.n_zero;  // v[d] = -v[d]
      } else {
        ct.emplace_back(d, col++, 1.0);  // free
        ++cs.n_free;
      }
    } else if (d < pd) {
      ct.emplace_back(d, col, 1.0);
      ct.emplace_back(pd, col, -sign[d]);
      ++col;
      ++cs.n_pairs;
    }
  }
  cs.C.resize(n, col);
  cs.C.setFromTriplets(ct.begin(), ct.end());
  return cs;
}

struct ReducedPencil {
  SparseSymmetric K, M;
  std::vector<Eigen::VectorXd> deflate;  // reduced-space directions
};

inline ReducedPencil apply_constraints(const SparseSymmetric& K, const SparseSymmetric& M,
                                       const ConstraintSet& cs) {
  if (K.n != cs.n_full || M.n != cs.n_full)
    throw std::invalid_argument("apply_constraints: dimension mismatch");
  ReducedPencil out;
  SpMat Kf = K.full(), Mf = M.full();
  SpMat Kc = cs.C.transpose() * Kf * cs.C;
  SpMat Mc = cs.C.transpose() * Mf * cs.C;
  out.K.n = (int)Kc.rows();
  out.M.n = (int)Mc.rows();
  out.K.lower = Kc.triangularView<Eigen::Lower>();
  out.M.lower = Mc.triangularView<Eigen::Lower>();
  bool identity = cs.reduced_dim() == cs.n_full && cs.n_free == cs.n_full;
  for (const auto& d : cs.deflate) {
    if (!identity) throw std::invalid_argument("deflation with non-identity embedding unsupported");
    out.deflate.push_back(d);
  }
  return out;
}

}  // namespace slitsphere::fem
