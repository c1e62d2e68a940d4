#pragma once

#include <functional>

#include "sps/box_field.hpp"

namespace sps {

enum class Termination { COMPLETED, BLOWUP_DETECTED, UNDER_RESOLVED };
const char* to_string(Termination t);

struct BlowupThresholds {
  double A_ratio_max = 1e3;       // kinetic growth factor that flags blow-up
  double spectral_tail_max = 1e-6; // aliasing guard: high-k mass fraction
};

struct SimConfig {
  int n = 64;
  double L = 24.0;
  double dt = 1e-3;
  double t_end = 10.0;
  Couplings couplings;
  int cadence = 10; // steps between diagnostic samples; must divide the count
  BlowupThresholds thresholds;

  int steps() const;
  void validate() const;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> mass_values;
  std::vector<double> F_values;
  std::vector<double> A_values;
  std::vector<double> Q_values;
  std::vector<double> virial_values;
  std::vector<double> tail_values;
  Termination termination = Termination::COMPLETED;
  double end_time = 0.0; // detector firing time, or t_end
};

// One Strang step: half kinetic, exact nonlinear-phase substep, half kinetic.
// The potential substep multiplies by exp(-i dt (alpha W_u - beta |u|^{p-2})),
// exact because |u| is invariant along it.  Unitary in mass up to roundoff.
// Throws NumericalFailure on non-finite values.
void strang_step(BoxField& u, double dt, const Couplings& cpl, BoxTransforms& tf);

// Pure threshold logic of the blow-up detector: resolution guard first
// (tail fraction above threshold means the growth may be aliasing, not
// physics), then the kinetic-ratio test.
Termination detect_blowup(double A_now, double A_initial, double tail_fraction,
                          const BlowupThresholds& thr);

// Steps until t_end or a detector firing; diagnostics at the configured
// cadence.  Detector outcomes are data, not errors.  `on_sample`, when set,
// sees the state at every diagnostic sample (snapshot hooks).
TrajectoryRecord evolve(BoxField u0, const SimConfig& cfg, BoxTransforms& tf,
                        const std::function<void(double, const BoxField&)>& on_sample = {});
TrajectoryRecord evolve(BoxField u0, const SimConfig& cfg);

// max over interior samples of |second difference of V(t) - 8 Q(t)| divided
// by 8 max_t (A + |A - Q|) (a positive scale that works for stationary
// orbits where Q ~ 0).  Requires at least 3 uniformly spaced samples.
double virial_consistency(const TrajectoryRecord& traj);

} // namespace sps
