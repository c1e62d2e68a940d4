#include "sps/energy.hpp"

#include <cmath>

#include "sps/errors.hpp"
#include "sps/hartree.hpp"

namespace sps {

void Couplings::validate() const {
  if (alpha != 0.0 && alpha != 1.0) throw InvalidArgument("Couplings: alpha must be 0 or 1");
  if (beta != 0.0 && beta != 1.0) throw InvalidArgument("Couplings: beta must be 0 or 1");
  if (beta != 0.0 && !(p > 10.0 / 3.0 && p < 6.0))
    throw InvalidArgument("Couplings: p must lie in (10/3, 6)");
}

EnergyReport assemble_report(double A, double B, double C, double D, const Couplings& cpl) {
  EnergyReport er;
  er.A = A;
  er.B = cpl.alpha * B;
  er.C = cpl.beta * C;
  er.D = D;
  er.F = A / 2.0 + er.B / 4.0 + (cpl.power_on() ? er.C / cpl.p : 0.0);
  er.Q = A + er.B / 4.0 +
         (cpl.power_on() ? 3.0 * (cpl.p - 2.0) / (2.0 * cpl.p) * er.C : 0.0);
  if (D > 0.0) er.lambda_hat = (A + er.B + er.C) / D;
  return er;
}

EnergyReport energy_report(const RadialField& u, const Couplings& cpl) {
  cpl.validate();
  double A = kinetic(u);
  double B = cpl.hartree_on() ? hartree_energy(u) : 0.0;
  double C = cpl.power_on() ? power_term(u, cpl.p) : 0.0;
  double D = mass(u);
  return assemble_report(A, B, C, D, cpl);
}

} // namespace sps
