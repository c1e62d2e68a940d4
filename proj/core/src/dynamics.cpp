#include "sps/dynamics.hpp"

#include <cmath>

#include "sps/detail/numeric.hpp"
#include "sps/errors.hpp"

namespace sps {

const char* to_string(Termination t) {
  switch (t) {
  case Termination::COMPLETED: return "COMPLETED";
  case Termination::BLOWUP_DETECTED: return "BLOWUP_DETECTED";
  case Termination::UNDER_RESOLVED: return "UNDER_RESOLVED";
  }
  return "COMPLETED";
}

int SimConfig::steps() const {
  double s = t_end / dt;
  int si = static_cast<int>(std::lround(s));
  if (std::abs(s - si) > 1e-9 * std::max(1.0, s))
    throw InvalidArgument("SimConfig: t_end must be an integer number of steps");
  return si;
}

void SimConfig::validate() const {
  couplings.validate();
  if (!(dt > 0.0)) throw InvalidArgument("SimConfig: dt must be positive");
  if (!(t_end > 0.0)) throw InvalidArgument("SimConfig: t_end must be positive");
  if (cadence < 1) throw InvalidArgument("SimConfig: cadence must be >= 1");
  int s = steps();
  if (s % cadence != 0)
    throw InvalidArgument("SimConfig: cadence must divide the step count");
}

void strang_step(BoxField& u, double dt, const Couplings& cpl, BoxTransforms& tf) {
  tf.apply_kinetic_phase(u, 0.5 * dt);
  if (cpl.hartree_on() || cpl.power_on()) {
    BoxTransforms::Hartree hp;
    if (cpl.hartree_on()) hp = tf.hartree_potential(u);
    const double pm2 = cpl.p - 2.0;
    const bool quartic = cpl.p == 4.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
      double phase = 0.0;
      if (cpl.hartree_on()) phase += hp.W[i];
      if (cpl.power_on()) {
        double a2 = std::norm(u.values[i]);
        phase -= quartic ? a2 : std::pow(a2, 0.5 * pm2);
      }
      u.values[i] *= std::polar(1.0, -dt * phase);
    }
  }
  tf.apply_kinetic_phase(u, 0.5 * dt);
  for (const auto& v : u.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalFailure("strang_step: non-finite field value");
}

Termination detect_blowup(double A_now, double A_initial, double tail_fraction,
                          const BlowupThresholds& thr) {
  if (tail_fraction > thr.spectral_tail_max) return Termination::UNDER_RESOLVED;
  if (A_initial > 0.0 && A_now / A_initial > thr.A_ratio_max)
    return Termination::BLOWUP_DETECTED;
  return Termination::COMPLETED; // i.e. nothing detected
}

namespace {

void sample(TrajectoryRecord& rec, double t, const BoxField& u, const Couplings& cpl,
            BoxTransforms& tf) {
  EnergyReport er = energy_report(u, cpl, tf);
  rec.times.push_back(t);
  rec.mass_values.push_back(er.D);
  rec.F_values.push_back(er.F);
  rec.A_values.push_back(er.A);
  rec.Q_values.push_back(er.Q);
  rec.virial_values.push_back(virial_moment(u));
  rec.tail_values.push_back(tf.tail_fraction(u));
}

} // namespace

TrajectoryRecord evolve(BoxField u0, const SimConfig& cfg, BoxTransforms& tf,
                        const std::function<void(double, const BoxField&)>& on_sample) {
  cfg.validate();
  if (u0.n != cfg.n || u0.L != cfg.L)
    throw InvalidArgument("evolve: datum does not match the configured box");
  u0.p = cfg.couplings.p;

  TrajectoryRecord rec;
  sample(rec, 0.0, u0, cfg.couplings, tf);
  if (on_sample) on_sample(0.0, u0);
  const double A0 = rec.A_values.front();

  const int steps = cfg.steps();
  rec.termination = Termination::COMPLETED;
  rec.end_time = cfg.t_end;
  for (int k = 1; k <= steps; ++k) {
    strang_step(u0, cfg.dt, cfg.couplings, tf);
    if (k % cfg.cadence != 0) continue;
    double t = k * cfg.dt;
    sample(rec, t, u0, cfg.couplings, tf);
    if (on_sample) on_sample(t, u0);
    Termination what =
        detect_blowup(rec.A_values.back(), A0, rec.tail_values.back(), cfg.thresholds);
    if (what != Termination::COMPLETED) {
      rec.termination = what;
      rec.end_time = t;
      break;
    }
  }
  return rec;
}

TrajectoryRecord evolve(BoxField u0, const SimConfig& cfg) {
  BoxTransforms tf(cfg.n, cfg.L);
  return evolve(std::move(u0), cfg, tf);
}

double virial_consistency(const TrajectoryRecord& traj) {
  const std::size_t m = traj.times.size();
  if (m < 3) throw InvalidArgument("virial_consistency: need at least 3 samples");
  const double dt = traj.times[1] - traj.times[0];
  for (std::size_t k = 2; k < m; ++k)
    if (std::abs((traj.times[k] - traj.times[k - 1]) - dt) > 1e-9 * dt)
      throw InvalidArgument("virial_consistency: samples not uniformly spaced");

  double scale = 0.0;
  for (std::size_t k = 0; k < m; ++k)
    scale = std::max(scale, traj.A_values[k] + std::abs(traj.A_values[k] - traj.Q_values[k]));
  scale *= 8.0;
  if (scale == 0.0) return 0.0;

  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < m; ++k) {
    double d2v = (traj.virial_values[k + 1] - 2.0 * traj.virial_values[k] +
                  traj.virial_values[k - 1]) /
                 (dt * dt);
    worst = std::max(worst, std::abs(d2v - 8.0 * traj.Q_values[k]));
  }
  return worst / scale;
}

} // namespace sps
