#pragma once

// Grid sweeps over (delta1, delta2) with delta2 = delta3: full pipeline per
// grid point, deterministic CSV output with incremental checkpointing, the
// lambda = 3/4 level curve, the coefficient-ratio verdict, mesh-refinement
// studies, and the general scan without the mirror symmetry.

#include <atomic>
#include <chrono>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "slitsphere/extraction.hpp"

namespace slitsphere::sweep {

using geometry::CutSpec;
using meshing::SlitMesh;

struct RunOptions {
  int n = 40;
  geometry::RhoPolicy rho_policy = geometry::RhoPolicy::automatic;
  bool with_enrichment = true;
  bool with_ef = true;
  int eig_k = 2;
  double eig_tol = 1e-8;
  int eig_maxit = 200;
  double eig_shift = 0.1;
  uint64_t seed = 12345;
  bool timing = true;
};

struct SweepRecord {
  int n = 0;
  double h = 0;
  double delta1 = 0, delta2 = 0, delta3 = 0;
  double lambda1A = nan(""), lambda2A = nan("");
  double alpha1 = nan(""), alpha2 = nan(""), alpha3 = nan("");
  double alpha1_ef = nan(""), alpha2_ef = nan("");
  double ratio_moussaoui = nan(""), ratio_ef = nan("");
  double eig_residual = nan("");
  std::string flags;
  double wall_ms = 0;

  static double nan(const char*) { return std::numeric_limits<double>::quiet_NaN(); }
};

inline const char* csv_header() {
  return "n,h,delta1,delta2,delta3,lambda1A,lambda2A,alpha1,alpha2,alpha3,"
         "alpha1_ef,alpha2_ef,ratio_moussaoui,ratio_ef,eig_residual,flags,wall_ms";
}

namespace detail {
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}
inline void add_flag(std::string& flags, const std::string& f) {
  if (!flags.empty()) flags += ';';
  flags += f;
}
}  // namespace detail

inline std::string to_csv(const SweepRecord& r) {
  using detail::fmt;
  std::ostringstream os;
  os << r.n << ',' << fmt(r.h) << ',' << fmt(r.delta1) << ',' << fmt(r.delta2) << ','
     << fmt(r.delta3) << ',' << fmt(r.lambda1A) << ',' << fmt(r.lambda2A) << ','
     << fmt(r.alpha1) << ',' << fmt(r.alpha2) << ',' << fmt(r.alpha3) << ','
     << fmt(r.alpha1_ef) << ',' << fmt(r.alpha2_ef) << ',' << fmt(r.ratio_moussaoui) << ','
     << fmt(r.ratio_ef) << ',' << fmt(r.eig_residual) << ',' << r.flags << ','
     << fmt(r.wall_ms);
  return os.str();
}

inline std::vector<SweepRecord> read_csv(std::istream& in) {
  std::vector<SweepRecord> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      if (line.rfind("n,", 0) == 0) continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    if (cells.size() < 17) continue;
    SweepRecord r;
    auto d = [&](int i) { return std::strtod(cells[i].c_str(), nullptr); };
    r.n = std::atoi(cells[0].c_str());
    r.h = d(1);
    r.delta1 = d(2);
    r.delta2 = d(3);
    r.delta3 = d(4);
    r.lambda1A = d(5);
    r.lambda2A = d(6);
    r.alpha1 = d(7);
    r.alpha2 = d(8);
    r.alpha3 = d(9);
    r.alpha1_ef = d(10);
    r.alpha2_ef = d(11);
    r.ratio_moussaoui = d(12);
    r.ratio_ef = d(13);
    r.eig_residual = d(14);
    r.flags = cells[15];
    r.wall_ms = d(16);
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single run: mesh -> assemble -> constrain -> eigensolve -> both extractions

struct RunResult {
  SweepRecord record;
  // kept for validation work; empty unless keep_vectors
  Eigen::VectorXd sigma_full;   // enriched, M-normalized
  Eigen::VectorXd sigma_ef;     // FE-only, M-normalized
  double lambda_ef = SweepRecord::nan("");
  singular::ExtractionResult moussaoui, trace;
};

inline RunResult run_single(double d1, double d2, double d3, const RunOptions& opt,
                            bool keep_vectors = false) {
  auto t0 = std::chrono::steady_clock::now();
  RunResult out;
  SweepRecord& rec = out.record;
  rec.n = opt.n;
  rec.delta1 = d1;
  rec.delta2 = d2;
  rec.delta3 = d3;

  std::string stage = "cut_spec";
  try {
    CutSpec spec = geometry::make_cut_spec(d1, d2, d3, opt.rho_policy);
    stage = "mesh";
    SlitMesh mesh = meshing::build_symmetric_mesh(opt.n, spec);
    rec.h = mesh.h_max;
    stage = "assemble";
    fem::FeBlocks fe = fem::assemble_fe_blocks(mesh);
    fem::EnrichedSystem sys;
    bool enriched = opt.with_enrichment && !singular::tips_from_spec(spec).empty();
    if (enriched) {
      sys = fem::assemble_enriched(mesh, fe);
      for (const auto& w : sys.warnings) detail::add_flag(rec.flags, w.substr(0, w.find(' ')));
    } else {
      sys.n_fe = mesh.n_dofs;
      sys.K = fe.K;
      sys.M = fe.M;
    }

    stage = "constrain";
    std::vector<singular::SingularTip> tip_list;
    for (const auto& b : sys.tips) tip_list.push_back(b.tip);
    auto cs = fem::build_antisymmetry_constraint(mesh, (int)tip_list.size(), &tip_list);
    auto pencil = fem::apply_constraints(sys.K, sys.M, cs);

    stage = "eigensolve";
    spectral::SolverOptions eopt;
    eopt.k = opt.eig_k;
    eopt.tol = opt.eig_tol;
    eopt.max_iterations = opt.eig_maxit;
    eopt.shift = opt.eig_shift;
    eopt.seed = opt.seed;
    auto pairs = spectral::smallest_eigenpairs(pencil, eopt);
    rec.lambda1A = pairs[0].lambda;
    if (pairs.size() > 1) rec.lambda2A = pairs[1].lambda;
    rec.eig_residual = pairs[0].residual;
    if (!pairs[0].converged) detail::add_flag(rec.flags, "eig_notconv");

    Eigen::VectorXd sigma = cs.C * pairs[0].y;

    if (enriched) {
      stage = "moussaoui";
      singular::NeumannSolver nsolver(sys);
      auto correctors = singular::solve_dual_correctors(sys, nsolver);
      out.moussaoui = singular::extract_moussaoui(sigma, rec.lambda1A, correctors, sys);
      rec.alpha1 = out.moussaoui.alpha[0];
      rec.alpha2 = out.moussaoui.alpha[1];
      rec.alpha3 = out.moussaoui.alpha[2];
      for (const auto& f : out.moussaoui.flags) detail::add_flag(rec.flags, f);
      if (std::abs(rec.alpha1) > 1e-12)
        rec.ratio_moussaoui = std::abs(rec.alpha2) / std::abs(rec.alpha1);
      else
        detail::add_flag(rec.flags, "alpha1_small");
    }

    if (opt.with_ef) {
      stage = "trace_jump";
      auto cs_ef = fem::build_antisymmetry_constraint(mesh, 0, nullptr);
      auto pencil_ef = fem::apply_constraints(fe.K, fe.M, cs_ef);
      spectral::SolverOptions eopt_ef = eopt;
      eopt_ef.k = 1;
      auto pairs_ef = spectral::smallest_eigenpairs(pencil_ef, eopt_ef);
      out.lambda_ef = pairs_ef[0].lambda;
      Eigen::VectorXd sigma_ef = cs_ef.C * pairs_ef[0].y;
      out.trace = singular::extract_trace_jump(sigma_ef, mesh);
      rec.alpha1_ef = out.trace.alpha[0];
      rec.alpha2_ef = out.trace.alpha[1];
      for (const auto& f : out.trace.flags) detail::add_flag(rec.flags, f);
      if (std::abs(rec.alpha1_ef) > 1e-12)
        rec.ratio_ef = std::abs(rec.alpha2_ef) / std::abs(rec.alpha1_ef);
      if (keep_vectors) out.sigma_ef = std::move(sigma_ef);
    }
    if (keep_vectors) out.sigma_full = std::move(sigma);
  } catch (const std::exception& e) {
    detail::add_flag(rec.flags, "error_" + stage);
    (void)e;
  }
  auto t1 = std::chrono::steady_clock::now();
  rec.wall_ms = opt.timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Sweep over a grid, bounded parallel map, deterministic output order,
// incremental checkpointing.

struct GridPoint {
  double delta1, delta2;
};

inline std::vector<GridPoint> default_grid(int n, double lo = 0.14, double hi = 3.0) {
  std::vector<GridPoint> g;
  auto adm = meshing::admissible_deltas(n);
  std::vector<double> vals;
  for (double v : adm)
    if (v > lo && v < hi) vals.push_back(v);
  for (double d2 : vals)
    for (double d1 : vals) g.push_back({d1, d2});
  return g;
}

inline std::vector<SweepRecord> run_sweep(const std::vector<GridPoint>& grid,
                                          const RunOptions& base_options, int workers,
                                          const std::string& checkpoint_path = "",
                                          std::function<void(size_t, size_t)> progress = {}) {
  std::vector<SweepRecord> records(grid.size());
  std::vector<char> have(grid.size(), 0);

  if (!checkpoint_path.empty()) {
    std::ifstream in(checkpoint_path);
    if (in) {
      for (const auto& r : read_csv(in)) {
        for (size_t i = 0; i < grid.size(); ++i) {
          if (r.n == base_options.n && r.delta1 == grid[i].delta1 && r.delta2 == grid[i].delta2) {
            records[i] = r;
            have[i] = 1;
          }
        }
      }
    }
  }

  std::atomic<size_t> next{0};
  std::atomic<size_t> completed{0};
  std::mutex io_mutex;
  size_t flushed = 0;
  std::ofstream ckpt;
  if (!checkpoint_path.empty()) {
    ckpt.open(checkpoint_path, std::ios::trunc);  // rewritten in grid order
    ckpt << csv_header() << '\n';
  }
  auto flush_ready = [&]() {
    if (!ckpt.is_open()) return;
    while (flushed < grid.size() && have[flushed]) {
      ckpt << to_csv(records[flushed]) << '\n';
      ++flushed;
    }
    ckpt.flush();
  };

  auto work = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= grid.size()) return;
      if (!have[i]) {
        RunOptions opt = base_options;
        opt.seed = base_options.seed ^ (0x9e3779b97f4a7c15ULL * (i + 1));
        auto res = run_single(grid[i].delta1, grid[i].delta2, grid[i].delta2, opt);
        std::lock_guard<std::mutex> lock(io_mutex);
        records[i] = res.record;
        have[i] = 1;
        flush_ready();
      } else {
        std::lock_guard<std::mutex> lock(io_mutex);
        flush_ready();
      }
      size_t done = ++completed;
      if (progress) progress(done, grid.size());
    }
  };

  workers = std::max(1, workers);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  {
    std::lock_guard<std::mutex> lock(io_mutex);
    flush_ready();
  }
  return records;
}

// ---------------------------------------------------------------------------
// The lambda = 3/4 level curve and the ratio verdict

struct CurvePoint {
  double delta2 = 0;
  double delta1_cross = 0;
  double delta1_lo = 0, delta1_hi = 0;  // bracketing grid values
  double ratio_moussaoui = SweepRecord::nan("");
  double ratio_ef = SweepRecord::nan("");
};

inline std::vector<CurvePoint> find_curve(const std::vector<SweepRecord>& records,
                                          double level = 0.75) {
  std::map<double, std::vector<const SweepRecord*>> rows;
  for (const auto& r : records)
    if (std::isfinite(r.lambda1A)) rows[r.delta2].push_back(&r);
  std::vector<CurvePoint> curve;
  for (auto& [d2, row] : rows) {
    std::sort(row.begin(), row.end(),
              [](const SweepRecord* a, const SweepRecord* b) { return a->delta1 < b->delta1; });
    for (size_t i = 0; i + 1 < row.size(); ++i) {
      double fa = row[i]->lambda1A - level, fb = row[i + 1]->lambda1A - level;
      if (fa == 0) fa = 1e-300;  // exact hits count as crossings on the left node
      if (fa * fb < 0) {
        double t = fa / (fa - fb);
        CurvePoint cp;
        cp.delta2 = d2;
        cp.delta1_lo = row[i]->delta1;
        cp.delta1_hi = row[i + 1]->delta1;
        cp.delta1_cross = cp.delta1_lo + t * (cp.delta1_hi - cp.delta1_lo);
        auto lerp = [&](double a, double b) {
          if (!std::isfinite(a) || !std::isfinite(b)) return SweepRecord::nan("");
          return a + t * (b - a);
        };
        cp.ratio_moussaoui = lerp(row[i]->ratio_moussaoui, row[i + 1]->ratio_moussaoui);
        cp.ratio_ef = lerp(row[i]->ratio_ef, row[i + 1]->ratio_ef);
        curve.push_back(cp);
      }
    }
  }
  return curve;
}

struct Verdict {
  int curve_points = 0;
  double max_ratio_moussaoui = SweepRecord::nan("");
  double argmax_delta2 = SweepRecord::nan("");
  double min_ratio_moussaoui = SweepRecord::nan("");
  double max_ratio_ef = SweepRecord::nan("");
  double max_method_gap = SweepRecord::nan("");  // max |ratio_m - ratio_ef| on the curve
  double margin = 0.1;
  std::string verdict;
};

inline Verdict hypothesis_report(const std::vector<CurvePoint>& curve, double margin = 0.1) {
  Verdict v;
  v.margin = margin;
  v.curve_points = (int)curve.size();
  if (curve.empty()) {
    v.verdict = "no crossing: lambda_1A never equals 3/4 on the grid";
    return v;
  }
  for (const auto& cp : curve) {
    if (std::isfinite(cp.ratio_moussaoui)) {
      if (!std::isfinite(v.max_ratio_moussaoui) || cp.ratio_moussaoui > v.max_ratio_moussaoui) {
        v.max_ratio_moussaoui = cp.ratio_moussaoui;
        v.argmax_delta2 = cp.delta2;
      }
      if (!std::isfinite(v.min_ratio_moussaoui) || cp.ratio_moussaoui < v.min_ratio_moussaoui)
        v.min_ratio_moussaoui = cp.ratio_moussaoui;
    }
    if (std::isfinite(cp.ratio_ef) &&
        (!std::isfinite(v.max_ratio_ef) || cp.ratio_ef > v.max_ratio_ef))
      v.max_ratio_ef = cp.ratio_ef;
    if (std::isfinite(cp.ratio_ef) && std::isfinite(cp.ratio_moussaoui)) {
      double gap = std::abs(cp.ratio_ef - cp.ratio_moussaoui);
      if (!std::isfinite(v.max_method_gap) || gap > v.max_method_gap) v.max_method_gap = gap;
    }
  }
  if (std::isfinite(v.max_ratio_moussaoui) && v.max_ratio_moussaoui < 1.0 - margin)
    v.verdict = "conditions lambda=3/4 and |alpha1|=|alpha2| are jointly unsatisfied";
  else
    v.verdict = "inconclusive: ratio reaches within margin of 1 on the curve";
  return v;
}

// ---------------------------------------------------------------------------
// Mesh-refinement study at fixed delta

struct ConvergenceRow {
  int n;
  double h;
  double lambda, alpha1, alpha2;
  double lambda_ef;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;  // n_list
  ConvergenceRow reference;
  double slope_lambda = 0, slope_alpha1 = 0, slope_alpha2 = 0;
  double slope_h1_ef = 0;  // FE-only eigenvector H1 error via the eigenvalue identity
};

namespace detail {
inline double fit_slope(const std::vector<double>& h, const std::vector<double>& e) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t i = 0; i < h.size(); ++i) {
    if (!(e[i] > 0)) continue;
    double x = std::log(h[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return 0;
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}
}  // namespace detail

inline ConvergenceStudy convergence_study(double d1, double d2, double d3,
                                          const std::vector<int>& n_list, int n_ref,
                                          const RunOptions& base) {
  ConvergenceStudy st;
  auto run = [&](int n) {
    RunOptions opt = base;
    opt.n = n;
    auto res = run_single(d1, d2, d3, opt);
    ConvergenceRow row;
    row.n = n;
    row.h = kPi / n;
    row.lambda = res.record.lambda1A;
    row.alpha1 = std::abs(res.record.alpha1);
    row.alpha2 = std::abs(res.record.alpha2);
    row.lambda_ef = res.lambda_ef;
    return row;
  };
  for (int n : n_list) st.rows.push_back(run(n));
  st.reference = run(n_ref);

  std::vector<double> hs, el, ea1, ea2, eh1;
  for (const auto& r : st.rows) {
    hs.push_back(r.h);
    el.push_back(std::abs(r.lambda - st.reference.lambda));
    ea1.push_back(std::abs(r.alpha1 - st.reference.alpha1));
    ea2.push_back(std::abs(r.alpha2 - st.reference.alpha2));
    // |Sigma_h - Sigma|_{H1}^2 ~= lambda_h - lambda for M-normalized
    // eigenvectors; the FE-only error is dominated by the sqrt(h) singular
    // mismatch, the enriched reference stands in for lambda.
    eh1.push_back(std::sqrt(std::max(r.lambda_ef - st.reference.lambda, 0.0)));
  }
  st.slope_lambda = detail::fit_slope(hs, el);
  st.slope_alpha1 = detail::fit_slope(hs, ea1);
  st.slope_alpha2 = detail::fit_slope(hs, ea2);
  st.slope_h1_ef = detail::fit_slope(hs, eh1);
  return st;
}

// Aitken extrapolation of a sequence with geometric step refinement.
inline double aitken_extrapolate(const std::vector<double>& seq) {
  if (seq.size() < 3) return seq.empty() ? 0.0 : seq.back();
  double a = seq[seq.size() - 3], b = seq[seq.size() - 2], c = seq.back();
  double den = a - 2 * b + c;
  if (std::abs(den) < 1e-14) return c;
  return c - (c - b) * (c - b) / den;
}

// ---------------------------------------------------------------------------
// General scan: no mirror symmetry, zero-mean constraint only. Finds
// eigenvalues near 3/4 and tests |alpha1| = |alpha2| = |alpha3|.

struct GeneralCandidate {
  double delta1, delta2, delta3;
  double lambda;
  std::array<double, 3> alpha;
  double balance;  // max pairwise ||a_i|-|a_j|| / max |a_i|
  bool balanced;
};

struct GeneralScanResult {
  int triples_scanned = 0;
  int candidates = 0;
  std::vector<GeneralCandidate> hits;  // eigenvalues near the level
  int balanced_count = 0;
};

inline GeneralScanResult run_general_check(const std::vector<std::array<double, 3>>& triples,
                                           const RunOptions& base, double level = 0.75,
                                           double level_tol = 1e-2, double balance_tol = 0.1,
                                           int eig_count = 10, int workers = 1) {
  GeneralScanResult out;
  out.triples_scanned = (int)triples.size();
  std::mutex mtx;
  std::atomic<size_t> next{0};
  auto work = [&]() {
    for (;;) {
      size_t idx = next.fetch_add(1);
      if (idx >= triples.size()) return;
      const auto& d = triples[idx];
      try {
        CutSpec spec = geometry::make_cut_spec(d[0], d[1], d[2], base.rho_policy);
        SlitMesh mesh = meshing::build_symmetric_mesh(base.n, spec);
        fem::FeBlocks fe = fem::assemble_fe_blocks(mesh);
        fem::EnrichedSystem sys = fem::assemble_enriched(mesh, fe);
        auto cs = fem::build_zero_mean_constraint(sys);
        auto pencil = fem::apply_constraints(sys.K, sys.M, cs);
        spectral::SolverOptions eopt;
        eopt.k = std::min(eig_count, pencil.K.n);
        eopt.tol = base.eig_tol;
        eopt.max_iterations = base.eig_maxit;
        eopt.shift = base.eig_shift;
        eopt.seed = base.seed ^ (0x9e3779b97f4a7c15ULL * (idx + 1));
        auto pairs = spectral::smallest_eigenpairs(pencil, eopt);

        std::unique_ptr<singular::NeumannSolver> nsolver;
        std::vector<singular::DualCorrector> correctors;
        for (const auto& p : pairs) {
          if (std::abs(p.lambda - level) > level_tol) continue;
          if (!nsolver) {
            nsolver = std::make_unique<singular::NeumannSolver>(sys);
            correctors = singular::solve_dual_correctors(sys, *nsolver);
          }
          auto ext = singular::extract_moussaoui(p.y, p.lambda, correctors, sys);
          GeneralCandidate cand;
          cand.delta1 = d[0];
          cand.delta2 = d[1];
          cand.delta3 = d[2];
          cand.lambda = p.lambda;
          cand.alpha = ext.alpha;
          double amax = 0;
          for (double a : ext.alpha) amax = std::max(amax, std::abs(a));
          double gap = 0;
          for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
              gap = std::max(gap, std::abs(std::abs(ext.alpha[i]) - std::abs(ext.alpha[j])));
          cand.balance = amax > 0 ? gap / amax : std::numeric_limits<double>::infinity();
          cand.balanced = amax > 1e-3 && cand.balance < balance_tol;
          std::lock_guard<std::mutex> lock(mtx);
          out.hits.push_back(cand);
          ++out.candidates;
          if (cand.balanced) ++out.balanced_count;
        }
      } catch (const std::exception&) {
        // skipped triples are counted but yield no candidates
      }
    }
  };
  workers = std::max(1, workers);
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  std::sort(out.hits.begin(), out.hits.end(), [](const GeneralCandidate& a, const GeneralCandidate& b) {
    return std::tie(a.delta1, a.delta2, a.delta3, a.lambda) <
           std::tie(b.delta1, b.delta2, b.delta3, b.lambda);
  });
  return out;
}

}  // namespace slitsphere::sweep
