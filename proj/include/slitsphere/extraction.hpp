#pragma once

// Singular-coefficient extraction. The Moussaoui route solves the Neumann
// corrector -Delta p_tilde = Delta S_i in the enriched space (zero mean via a
// bordered solve) and evaluates alpha_i = (lambda/pi)(int S_i Sigma +
// int p_tilde_i Sigma). The finite-element route divides the eigenvector's
// jump across the cut at the next-to-last chain node by the jump of the
// singular profile; only its cross-tip ratios are meaningful.

#include <Eigen/SparseLU>

#include "slitsphere/eigensolve.hpp"

namespace slitsphere::singular {

struct DualCorrector {
  int alpha_slot = -1;
  Eigen::VectorXd coeff;  // over the enriched dof space
  double residual = 0;
  double load_sum = 0;  // int Delta S_i over the domain; solvability check
  double mean = 0;
};

// Factors the bordered system [[K, w],[w^T, 0]] once (w = M * 1, the mean
// functional) and solves the three correctors against it.
class NeumannSolver {
 public:
  explicit NeumannSolver(const fem::EnrichedSystem& sys) : sys_(&sys) {
    const int n = sys.dim();
    fem::SpMat Kf = sys.K.full();
    Eigen::VectorXd w = sys.M * sys.constant_vector();
    std::vector<fem::Triplet> t;
    t.reserve(Kf.nonZeros() + 2 * n);
    for (int k = 0; k < Kf.outerSize(); ++k)
      for (fem::SpMat::InnerIterator it(Kf, k); it; ++it)
        t.emplace_back((int)it.row(), (int)it.col(), it.value());
    for (int i = 0; i < n; ++i) {
      if (w[i] != 0) {
        t.emplace_back(i, n, w[i]);
        t.emplace_back(n, i, w[i]);
      }
    }
    fem::SpMat B(n + 1, n + 1);
    B.setFromTriplets(t.begin(), t.end());
    B.makeCompressed();
    lu_.compute(B);
    if (lu_.info() != Eigen::Success)
      throw std::runtime_error("NeumannSolver: bordered factorization failed");
    w_ = std::move(w);
  }

  // Solves K x = b with zero mean; b must have zero total mass.
  Eigen::VectorXd solve(const Eigen::VectorXd& b, double* residual = nullptr,
                        double* mean = nullptr) const {
    const int n = sys_->dim();
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = b;
    rhs[n] = 0;
    Eigen::VectorXd sol = lu_.solve(rhs);
    Eigen::VectorXd x = sol.head(n);
    if (residual) {
      Eigen::VectorXd r = sys_->K * x - b;
      *residual = r.norm() / std::max(b.norm(), 1e-300);
    }
    if (mean) *mean = w_.dot(x);
    return x;
  }

  const Eigen::VectorXd& mean_functional() const { return w_; }

 private:
  const fem::EnrichedSystem* sys_;
  Eigen::SparseLU<fem::SpMat> lu_;
  Eigen::VectorXd w_;
};

inline std::vector<DualCorrector> solve_dual_correctors(const fem::EnrichedSystem& sys,
                                                        const NeumannSolver& solver) {
  std::vector<DualCorrector> out;
  const int n = sys.dim();
  for (size_t e = 0; e < sys.tips.size(); ++e) {
    const auto& blk = sys.tips[e];
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b.head(sys.n_fe) = blk.dual_load;
    b[sys.n_fe + (int)e] = blk.load_ss;
    DualCorrector c;
    c.alpha_slot = blk.tip.alpha_slot;
    c.load_sum = blk.dual_load.sum();  // = int Delta S_i (partition of unity)
    if (std::abs(c.load_sum) > 1e-8 * std::max(1.0, b.norm()))
      throw std::runtime_error("dual corrector: load violates Neumann solvability");
    c.coeff = solver.solve(b, &c.residual, &c.mean);
    out.push_back(std::move(c));
  }
  return out;
}

enum class ExtractionMethod { moussaoui, trace_jump };

struct ExtractionResult {
  std::array<double, 3> alpha{std::numeric_limits<double>::quiet_NaN(),
                              std::numeric_limits<double>::quiet_NaN(),
                              std::numeric_limits<double>::quiet_NaN()};
  double pole_alpha = std::numeric_limits<double>::quiet_NaN();
  ExtractionMethod method = ExtractionMethod::moussaoui;
  double worst_corrector_residual = 0;
  std::vector<std::string> flags;
};

// alpha_i = (lambda/pi) [ int S_i Sigma + int p_tilde_i Sigma ]; Sigma must
// be M-normalized (int Sigma^2 = 1).
inline ExtractionResult extract_moussaoui(const Eigen::VectorXd& sigma, double lambda,
                                          const std::vector<DualCorrector>& correctors,
                                          const fem::EnrichedSystem& sys) {
  ExtractionResult res;
  res.method = ExtractionMethod::moussaoui;
  Eigen::VectorXd msigma = sys.M * sigma;
  for (size_t e = 0; e < sys.tips.size(); ++e) {
    const auto& blk = sys.tips[e];
    double a_coeff = sigma[sys.n_fe + (int)e];
    double intS = blk.dual_fe.dot(sigma.head(sys.n_fe)) + a_coeff * blk.int_Ss;
    double intP = correctors[e].coeff.dot(msigma);
    double alpha = lambda / kPi * (intS + intP);
    res.worst_corrector_residual = std::max(res.worst_corrector_residual, correctors[e].residual);
    if (blk.tip.alpha_slot < 3)
      res.alpha[blk.tip.alpha_slot] = alpha;
    else
      res.pole_alpha = alpha;
  }
  if (res.worst_corrector_residual > 1e-6) res.flags.push_back("corrector_residual");
  return res;
}

// alpha_{i,EF} = [Sigma(east) - Sigma(west)] / (2 f(r)) at the next-to-last
// chain node before the tip. Raw values carry a mesh-dependent constant; only
// ratios across tips are meaningful.
inline ExtractionResult extract_trace_jump(const Eigen::VectorXd& sigma_fe, const SlitMesh& mesh) {
  ExtractionResult res;
  res.method = ExtractionMethod::trace_jump;
  for (int i = 0; i < 3; ++i) {
    if (!mesh.spec.arc_present(i)) continue;
    const auto& chain = mesh.chain[i];
    if (chain.size() < 2) {
      res.flags.push_back("chain_short");
      continue;
    }
    const auto& node = chain[chain.size() - 2];
    if (node.ring == 0) res.flags.push_back("chain_node_at_pole");
    double jump = sigma_fe[node.dof_east] - sigma_fe[node.dof_west];
    res.alpha[i] = jump / (2.0 * radial_f(node.r_to_tip));
  }
  return res;
}

}  // namespace slitsphere::singular
