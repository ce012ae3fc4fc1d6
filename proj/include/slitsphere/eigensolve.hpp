#pragma once

// Smallest eigenpairs of the constrained symmetric pencil K y = lambda M y.
// Shift-inverted block iteration with Rayleigh-Ritz extraction: factor
// A = K + shift*M once (SPD for shift > 0 since K is PSD and M is SPD),
// iterate X <- A^{-1} M X with M-orthonormalization, and recombine through
// the small dense generalized eigenproblem. Deterministic for a fixed seed;
// deflation directions are projected out of every iterate.

#include <Eigen/SparseCholesky>

#include "slitsphere/fem.hpp"

namespace slitsphere::spectral {

struct EigenPair {
  double lambda = 0;
  Eigen::VectorXd y;
  double residual = 0;
  bool converged = false;
};

struct SolverOptions {
  int k = 2;
  double tol = 1e-8;
  int max_iterations = 200;
  double shift = 0.1;
  int block_extra = 3;
  uint64_t seed = 12345;
};

namespace detail {

struct Deflator {
  std::vector<Eigen::VectorXd> dirs;
  std::vector<Eigen::VectorXd> mdirs;
  std::vector<double> mnorm;

  Deflator(const std::vector<Eigen::VectorXd>& d, const fem::SparseSymmetric& M) {
    for (const auto& v : d) {
      dirs.push_back(v);
      mdirs.push_back(M * v);
      mnorm.push_back(v.dot(mdirs.back()));
    }
  }
  void apply(Eigen::Ref<Eigen::VectorXd> v) const {
    for (size_t i = 0; i < dirs.size(); ++i)
      v -= dirs[i] * (mdirs[i].dot(v) / mnorm[i]);
  }
};

// M-orthonormalize the columns of X in place; rank-deficient directions are
// replaced from the deterministic random stream.
inline void m_orthonormalize(Eigen::MatrixXd& X, const fem::SparseSymmetric& M,
                             const Deflator& defl, SplitMix64& rng) {
  const int m = (int)X.cols();
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::MatrixXd MX(X.rows(), m);
    for (int j = 0; j < m; ++j) MX.col(j) = M * Eigen::VectorXd(X.col(j));
    Eigen::MatrixXd B = X.transpose() * MX;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
    double emax = es.eigenvalues().maxCoeff();
    if (es.eigenvalues().minCoeff() > 1e-12 * emax) {
      Eigen::VectorXd inv = es.eigenvalues().array().sqrt().inverse().matrix();
      X = X * es.eigenvectors() * inv.asDiagonal();
      return;
    }
    for (int j = 0; j < m; ++j) {
      if (es.eigenvalues()(j) <= 1e-12 * emax) {
        Eigen::VectorXd fresh(X.rows());
        for (int i = 0; i < X.rows(); ++i) fresh(i) = rng.normal();
        defl.apply(fresh);
        X.col(j) = fresh;
      }
    }
  }
  throw std::runtime_error("eigensolve: could not build an M-orthonormal block (M indefinite?)");
}

}  // namespace detail

inline std::vector<EigenPair> smallest_eigenpairs(const fem::ReducedPencil& pencil,
                                                  const SolverOptions& opts) {
  const auto& K = pencil.K;
  const auto& M = pencil.M;
  const int n = K.n;
  if (opts.k < 1) throw std::invalid_argument("eigensolve: k >= 1 required");
  if (n < opts.k) throw std::invalid_argument("eigensolve: pencil smaller than requested k");

  fem::SpMat A = K.lower + opts.shift * M.lower;
  Eigen::SimplicialLDLT<fem::SpMat, Eigen::Lower> ldlt;
  ldlt.compute(A);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("eigensolve: factorization of K + shift*M failed (pencil indefinite?)");

  detail::Deflator defl(pencil.deflate, M);
  SplitMix64 rng(opts.seed);
  const int m = std::min(n, opts.k + opts.block_extra);

  Eigen::MatrixXd X(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = rng.normal();
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd c = X.col(j);
    defl.apply(c);
    X.col(j) = c;
  }
  detail::m_orthonormalize(X, M, defl, rng);

  Eigen::VectorXd ritz(m);
  std::vector<double> residuals(opts.k, 1.0);
  bool done = false;
  int iter = 0;
  for (; iter < opts.max_iterations && !done; ++iter) {
    Eigen::MatrixXd Y(n, m);
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXd rhs = M * Eigen::VectorXd(X.col(j));
      Eigen::VectorXd sol = ldlt.solve(rhs);
      defl.apply(sol);
      Y.col(j) = sol;
    }
    detail::m_orthonormalize(Y, M, defl, rng);

    Eigen::MatrixXd KY(n, m), MY(n, m);
    for (int j = 0; j < m; ++j) {
      KY.col(j) = K * Eigen::VectorXd(Y.col(j));
      MY.col(j) = M * Eigen::VectorXd(Y.col(j));
    }
    Eigen::MatrixXd Kr = Y.transpose() * KY;
    Eigen::MatrixXd Mr = Y.transpose() * MY;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(Kr, Mr);
    X = Y * ges.eigenvectors();
    ritz = ges.eigenvalues();

    done = true;
    for (int j = 0; j < opts.k; ++j) {
      Eigen::VectorXd x = X.col(j);
      Eigen::VectorXd kx = K * x;
      Eigen::VectorXd r = kx - ritz(j) * (M * x);
      double denom = std::max(kx.norm(), 1e-300);
      residuals[j] = r.norm() / denom;
      if (residuals[j] > opts.tol) done = false;
    }
  }

  std::vector<EigenPair> out;
  for (int j = 0; j < opts.k; ++j) {
    EigenPair p;
    p.lambda = ritz(j);
    p.y = X.col(j);
    double mn = std::sqrt(M.quad(p.y, p.y));
    p.y /= mn;
    p.residual = residuals[j];
    p.converged = residuals[j] <= opts.tol;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace slitsphere::spectral
