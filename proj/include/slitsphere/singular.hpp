#pragma once

// Primal singular functions s_i = f(r) cos(theta/2) psi(r/rho) with
// f(r) = sqrt(2 tan(r/2)), their duals with radial profile 1/f, closed-form
// Laplacians on the cutoff annulus, and the 1D radial integrals used for the
// enrichment matrix entries. f cos(theta/2) and cos(theta/2)/f are exactly
// harmonic for the Laplace-Beltrami operator on the slit disk, so the
// Laplacians are supported where the cutoff varies.

#include "slitsphere/geometry.hpp"

namespace slitsphere::singular {

using geometry::CutoffProfile;
using geometry::CutSide;
using geometry::CutSpec;
using geometry::TipFrame;

inline double radial_f(double r) { return std::sqrt(2.0 * std::tan(0.5 * r)); }

inline double radial_f_prime(double r) {
  double t = std::tan(0.5 * r);
  return (1.0 + t * t) / (2.0 * radial_f(r));
}

// One enriched crack tip. alpha_slot: 0..2 = arcs, 3 = north pole (only when
// the pole is a crack endpoint).
struct SingularTip {
  TipFrame frame;
  double rho;
  int alpha_slot;
};

inline std::vector<SingularTip> tips_from_spec(const CutSpec& spec) {
  std::vector<SingularTip> tips;
  for (int i = 0; i < 3; ++i)
    if (spec.arc_present(i) && spec.rho[i] > 0)
      tips.push_back({spec.frame[i], spec.rho[i], i});
  if (spec.pole_is_tip && spec.pole_rho > 0)
    tips.push_back({spec.pole_frame, spec.pole_rho, 3});
  return tips;
}

// ---------------------------------------------------------------------------
// Point evaluation

inline double eval_s(const SingularTip& tip, const Vec3& x,
                     std::optional<CutSide> side = std::nullopt) {
  auto [r, theta] = geometry::tip_polar(tip.frame, x, side);
  if (r >= tip.rho) return 0.0;
  CutoffProfile psi;
  return radial_f(r) * std::cos(0.5 * theta) * psi(r / tip.rho).v;
}

inline double eval_dual(const SingularTip& tip, const Vec3& x,
                        std::optional<CutSide> side = std::nullopt) {
  auto [r, theta] = geometry::tip_polar(tip.frame, x, side);
  if (r >= tip.rho) return 0.0;
  CutoffProfile psi;
  return std::cos(0.5 * theta) * psi(r / tip.rho).v / radial_f(r);
}

// gradient in the tip-polar orthonormal frame: (d/dr, (1/sin r) d/dtheta)
inline std::array<double, 2> grad_s_polar(const SingularTip& tip, double r, double theta) {
  CutoffProfile psi;
  auto p = psi(r / tip.rho);
  double f = radial_f(r), fp = radial_f_prime(r);
  double A = f * p.v;
  double Ap = fp * p.v + f * p.d1 / tip.rho;
  return {Ap * std::cos(0.5 * theta), -0.5 * A * std::sin(0.5 * theta) / std::sin(r)};
}

inline Vec3 grad_s(const SingularTip& tip, const Vec3& x) {
  auto [r, theta] = geometry::tip_polar(tip.frame, x);
  if (r >= tip.rho) return {0, 0, 0};
  auto g = grad_s_polar(tip, r, theta);
  Vec3 dir = std::cos(theta) * tip.frame.e_cut + std::sin(theta) * tip.frame.e_perp;
  Vec3 e_r = std::cos(r) * dir - std::sin(r) * tip.frame.tip;
  Vec3 e_t = -std::sin(theta) * tip.frame.e_cut + std::cos(theta) * tip.frame.e_perp;
  return g[0] * e_r + g[1] * e_t;
}

// Laplace-Beltrami of s: the harmonic part cancels, leaving cutoff terms.
// Delta s = cos(theta/2) [ (2/f) psi'/rho + f psi''/rho^2 ]
inline double laplacian_s(const SingularTip& tip, const Vec3& x,
                          std::optional<CutSide> side = std::nullopt) {
  auto [r, theta] = geometry::tip_polar(tip.frame, x, side);
  if (r >= tip.rho) return 0.0;
  CutoffProfile psi;
  auto p = psi(r / tip.rho);
  if (p.d1 == 0 && p.d2 == 0) return 0.0;
  double f = radial_f(r);
  return std::cos(0.5 * theta) * ((2.0 / f) * p.d1 / tip.rho + f * p.d2 / (tip.rho * tip.rho));
}

// Delta S (dual) = cos(theta/2) [ (-t/f) psi'/rho + (1/f) psi''/rho^2 ],
// t = tan(r/2)
inline double laplacian_dual(const SingularTip& tip, const Vec3& x,
                             std::optional<CutSide> side = std::nullopt) {
  auto [r, theta] = geometry::tip_polar(tip.frame, x, side);
  if (r >= tip.rho) return 0.0;
  CutoffProfile psi;
  auto p = psi(r / tip.rho);
  if (p.d1 == 0 && p.d2 == 0) return 0.0;
  double f = radial_f(r), t = std::tan(0.5 * r);
  return std::cos(0.5 * theta) * ((-t / f) * p.d1 / tip.rho + (1.0 / f) * p.d2 / (tip.rho * tip.rho));
}

// ---------------------------------------------------------------------------
// 1D radial integrals (theta integrated in closed form). All integrands are
// smooth; composite Gauss-Legendre is effectively exact.

// int |grad s|^2 = pi * [ tan(rho/4) + int_{rho/2}^{rho} (A'^2 sin r + A^2/(4 sin r)) ]
// (the inner part, where psi == 1, integrates in closed form)
inline double stiffness_diag(const SingularTip& tip) {
  CutoffProfile psi;
  double rho = tip.rho;
  auto band = [&](double r) {
    auto p = psi(r / rho);
    double f = radial_f(r), fp = radial_f_prime(r);
    double A = f * p.v;
    double Ap = fp * p.v + f * p.d1 / rho;
    return Ap * Ap * std::sin(r) + A * A / (4.0 * std::sin(r));
  };
  return kPi * (std::tan(rho / 4.0) + integrate_1d(band, rho / 2, rho, 16));
}

// int s^2 = pi * int_0^rho f^2 psi^2 sin r
inline double mass_diag(const SingularTip& tip) {
  CutoffProfile psi;
  double rho = tip.rho;
  auto fn = [&](double r) {
    double p = psi(r / rho).v;
    double f2 = 2.0 * std::tan(0.5 * r);
    return f2 * p * p * std::sin(r);
  };
  return kPi * integrate_1d(fn, 0, rho, 16);
}

// int S_i s_i = pi * int_0^rho psi^2 sin r
inline double dual_primal_pairing(const SingularTip& tip) {
  CutoffProfile psi;
  double rho = tip.rho;
  auto fn = [&](double r) {
    double p = psi(r / rho).v;
    return p * p * std::sin(r);
  };
  return kPi * integrate_1d(fn, 0, rho, 16);
}

// int (Delta S_i) s_i = pi * int_{rho/2}^{rho} radDeltaS * f psi sin r
inline double dual_load_on_primal(const SingularTip& tip) {
  CutoffProfile psi;
  double rho = tip.rho;
  auto fn = [&](double r) {
    auto p = psi(r / rho);
    double f = radial_f(r), t = std::tan(0.5 * r);
    double radDS = (-t / f) * p.d1 / rho + (1.0 / f) * p.d2 / (rho * rho);
    return radDS * f * p.v * std::sin(r);
  };
  return kPi * integrate_1d(fn, rho / 2, rho, 16);
}

}  // namespace slitsphere::singular
