#include "sps/fibering.hpp"

#include <algorithm>
#include <cmath>

#include "sps/errors.hpp"

namespace sps {

FiberPoint fiber_energy(double A, double B, double C, double p, double t) {
  if (!(t > 0.0)) throw InvalidArgument("fiber_energy: need t > 0");
  const double e = 1.5 * (p - 2.0);
  const double te = std::pow(t, e);
  FiberPoint out;
  out.F = 0.5 * t * t * A + 0.25 * t * B + te / p * C;
  out.Q = t * t * A + 0.25 * t * B + 3.0 * (p - 2.0) / (2.0 * p) * te * C;
  return out;
}

namespace {

// y(t) = t A + B/4 + coef * t^{e-1} C and its derivative
struct YFun {
  double A, B, C, coef, em1;
  double operator()(double t) const { return t * A + 0.25 * B + coef * std::pow(t, em1) * C; }
  double deriv(double t) const { return A + coef * em1 * std::pow(t, em1 - 1.0) * C; }
};

} // namespace

double t_star(double A, double B, double C, double p) {
  if (!(C < 0.0)) throw InvalidArgument("t_star: no finite maximizer for C >= 0");
  if (!(A > 0.0)) throw InvalidArgument("t_star: need A > 0");
  if (!(p > 10.0 / 3.0 && p < 6.0)) throw InvalidArgument("t_star: need p in (10/3, 6)");

  const double e = 1.5 * (p - 2.0);
  const double coef = 3.0 * (p - 2.0) / (2.0 * p);
  const YFun y{A, B, C, coef, e - 1.0};
  const double scale = A + B + std::abs(C);
  // |y| floors out near eps * t * A for extreme maximizers, so the
  // residual target carries the max(1, t) factor of y's own magnitude
  auto tol = [scale](double t) { return 0.25e-12 * scale * std::max(1.0, t); };

  // B = 0: y(t) = t(A + coef t^{e-2} C), closed-form positive root
  if (B == 0.0) {
    double t = std::pow(A / (coef * std::abs(C)), 1.0 / (e - 2.0));
    // one Newton polish for the |y| contract
    for (int k = 0; k < 3 && std::abs(y(t)) > tol(t); ++k) t -= y(t) / y.deriv(t);
    return t;
  }

  // p = 4: y is a quadratic in t; use the closed form as the seed
  double t0;
  if (p == 4.0) {
    // (3/4) C t^2 + A t + B/4 = 0, C < 0: unique positive root
    t0 = (A + std::sqrt(A * A + 0.75 * std::abs(C) * B)) / (1.5 * std::abs(C));
  } else {
    t0 = std::pow(2.0 * p * A / (3.0 * (p - 2.0) * std::abs(C)), 2.0 / (3.0 * p - 10.0));
  }

  // bracket the sign change around t0: y > 0 left of the root, < 0 right
  double lo = t0, hi = t0;
  if (y(t0) > 0.0) {
    do {
      hi *= 2.0;
      if (hi > 1e200) throw NumericalFailure("t_star: bracketing ran away");
    } while (y(hi) > 0.0);
    lo = hi / 2.0;
  } else {
    do {
      lo *= 0.5;
      if (lo < 1e-200) throw NumericalFailure("t_star: bracketing ran away");
    } while (y(lo) < 0.0);
    hi = lo * 2.0;
  }

  // safeguarded Newton (bisection fallback); quadratic convergence to
  // machine-level |y|
  double t = 0.5 * (lo + hi);
  for (int k = 0; k < 200; ++k) {
    double yt = y(t);
    if (std::abs(yt) <= tol(t)) return t;
    if (yt > 0.0)
      lo = t;
    else
      hi = t;
    double dy = y.deriv(t);
    double tn = t - yt / dy;
    if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
    if (tn == t) break;
    t = tn;
  }
  if (std::abs(y(t)) > 4.0 * tol(t))
    throw NumericalFailure("t_star: root polish failed to meet tolerance");
  return t;
}

FiberScan fiber_scan(double A, double B, double C, double p, double t_lo, double t_hi,
                     int count) {
  if (!(t_lo > 0.0 && t_hi > t_lo)) throw InvalidArgument("fiber_scan: bad t range");
  if (count < 2) throw InvalidArgument("fiber_scan: need at least 2 points");
  FiberScan scan;
  scan.A = A;
  scan.B = B;
  scan.C = C;
  scan.p = p;
  scan.t_star = t_star(A, B, C, p);
  scan.t_values.reserve(static_cast<std::size_t>(count));
  const double lr = std::log(t_lo), dr = (std::log(t_hi) - lr) / (count - 1);
  for (int i = 0; i < count; ++i) {
    double t = std::exp(lr + dr * i);
    auto pt = fiber_energy(A, B, C, p, t);
    scan.t_values.push_back(t);
    scan.F_values.push_back(pt.F);
    scan.Q_values.push_back(pt.Q);
  }
  return scan;
}

RadialField project_to_V(const RadialField& u, const Couplings& cpl) {
  cpl.validate();
  EnergyReport er = energy_report(u, cpl);
  if (!(er.C < 0.0)) throw InvalidArgument("project_to_V: need C(u) < 0");
  double t = t_star(er.A, er.B, er.C, cpl.p);
  if (std::abs(t - 1.0) < 1e-13) return u;
  RadialField v = scale_field(u, t);
  // resampling shifts the components slightly; one polish pass restores
  // |Q| <= 1e-8 * scale
  for (int pass = 0; pass < 2; ++pass) {
    EnergyReport ev = energy_report(v, cpl);
    if (std::abs(ev.Q) <= 1e-9 * component_scale(ev)) break;
    double t2 = t_star(ev.A, ev.B, ev.C, cpl.p);
    if (std::abs(t2 - 1.0) < 1e-13) break;
    v = scale_field(v, t2);
  }
  return v;
}

Classification classify_initial_datum(const EnergyReport& datum, double gamma_c) {
  const double eps = kClassifyMargin;
  if (datum.F < gamma_c - eps) {
    if (datum.Q > eps) return Classification::GLOBAL_CERTIFIED;
    if (datum.Q < -eps) return Classification::BLOWUP_CANDIDATE;
  }
  return Classification::UNCLASSIFIED;
}

const char* to_string(Classification c) {
  switch (c) {
  case Classification::GLOBAL_CERTIFIED: return "GLOBAL_CERTIFIED";
  case Classification::BLOWUP_CANDIDATE: return "BLOWUP_CANDIDATE";
  case Classification::UNCLASSIFIED: return "UNCLASSIFIED";
  }
  return "UNCLASSIFIED";
}

} // namespace sps
