#pragma once

#include <optional>

#include "sps/radial_field.hpp"

namespace sps {

// alpha gates the Hartree term, beta the power nonlinearity:
//   alpha=1, beta=1  Schroedinger-Poisson-Slater
//   alpha=0, beta=1  classical NLS baseline
//   alpha=0, beta=0  free Schroedinger
struct Couplings {
  double alpha = 1.0;
  double beta = 1.0;
  double p = 4.0;

  void validate() const;
  bool hartree_on() const { return alpha != 0.0; }
  bool power_on() const { return beta != 0.0; }
};

// The seven numbers everything else is assembled from:
//   A = |grad u|_2^2, B = Coulomb double integral, C = -|u|_p^p, D = |u|_2^2,
//   F = A/2 + alpha*B/4 + beta*C/p
//   Q = A + alpha*B/4 + beta*(3(p-2)/2p)*C
//   lambda_hat = (A + alpha*B + beta*C)/D   (empty when D = 0)
// B and C are stored as the raw functional values when their coupling is on,
// and as 0 when switched off.
struct EnergyReport {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
  double F = 0.0;
  double Q = 0.0;
  std::optional<double> lambda_hat;
};

// assemble F, Q, lambda_hat from raw components (pure algebra);
// pass B = 0 / C = 0 when the corresponding coupling is off
EnergyReport assemble_report(double A, double B, double C, double D, const Couplings& cpl);

EnergyReport energy_report(const RadialField& u, const Couplings& cpl);

// strict-equality scale used by |Q|-type contracts
inline double component_scale(const EnergyReport& er) {
  return er.A + er.B + std::abs(er.C);
}

} // namespace sps
