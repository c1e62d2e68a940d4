#pragma once

#include <vector>

#include "sps/energy.hpp"

namespace sps {

// The fiber through u is t -> u^t with u^t(x) = t^{3/2} u(tx).  On components
// it is exact algebra:
//   F(u^t) = t^2/2 A + t/4 B + t^e/p C,        e = 3(p-2)/2
//   Q(u^t) = t^2 A + t/4 B + (3(p-2)/2p) t^e C = t * y(t)
//   y(t)   = t A + B/4 + (3(p-2)/2p) t^{e-1} C
// with a unique positive root t* of y: the maximizer of F along the fiber.

struct FiberPoint {
  double F;
  double Q;
};

// Closed-form evaluation on components; no field resampling.
FiberPoint fiber_energy(double A, double B, double C, double p, double t);

// Unique maximizer t*(u) of F(u^t): root of y(t), bracketing + safeguarded
// Newton started at the balance scale t_scale = (2pA / (3(p-2)|C|))^{2/(3p-10)}.
// Requires A > 0 and C < 0 (otherwise no finite maximizer exists).
double t_star(double A, double B, double C, double p);

struct FiberScan {
  std::vector<double> t_values;
  std::vector<double> F_values;
  std::vector<double> Q_values;
  double t_star = 0.0;
  double A = 0.0, B = 0.0, C = 0.0, p = 4.0;
};

// Log-spaced scan of the fiber over [t_lo, t_hi] (count points) plus t*.
FiberScan fiber_scan(double A, double B, double C, double p, double t_lo, double t_hi,
                     int count);

// u^{t*(u)}: the projection onto V(c) = { Q = 0 } along the fiber.  One
// polish pass absorbs resampling error so |Q(result)| <= 1e-8 * scale.
RadialField project_to_V(const RadialField& u, const Couplings& cpl);

enum class Classification { GLOBAL_CERTIFIED, BLOWUP_CANDIDATE, UNCLASSIFIED };

// Strict-inequality classification of an initial datum against the
// mountain-pass level gamma_c of its mass:
//   Q > 0 and F < gamma_c   -> global existence certified
//   Q < 0 and F < gamma_c   -> blow-up candidate
// Margins below eps_cls = 1e-10 (absolute) stay UNCLASSIFIED: both theorems
// need strict inequalities.
Classification classify_initial_datum(const EnergyReport& datum, double gamma_c);

const char* to_string(Classification c);

inline constexpr double kClassifyMargin = 1e-10;

} // namespace sps
