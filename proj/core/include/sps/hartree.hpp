#pragma once

#include "sps/radial_field.hpp"

namespace sps {

// W = |x|^{-1} * |u|^2 sampled on the source grid; W >= 0, and r W(r) grows
// monotonically to D(u) at the domain edge.
struct HartreePotential {
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> values;
};

// Newton's theorem evaluation,
//   W(r) = 4*pi * [ (1/r) int_0^r |u|^2 s^2 ds + int_r^{r_max} |u|^2 s ds ],
// via two cumulative corrected-trapezoid sums (O(n), 4th order).
HartreePotential radial_hartree(const RadialField& u);

// Same evaluation from density samples rho = |u|^2.
std::vector<double> radial_hartree_from_density(const RadialGrid& grid,
                                                std::span<const double> rho);

// B(u) = int W_u |u|^2 = the Coulomb double integral
double hartree_energy(const RadialField& u, const HartreePotential& w);
double hartree_energy(const RadialField& u); // convenience: computes W first

// W(0+) by even-in-r Richardson extrapolation from the first two nodes
double origin_value(const HartreePotential& w);

} // namespace sps
