#include "sps/hartree.hpp"

#include <cmath>

#include "sps/detail/numeric.hpp"
#include "sps/errors.hpp"

namespace sps {

namespace {
constexpr double kFourPi = 4.0 * M_PI;

// cumulative integral of samples g_j at nodes (j+1)h starting from 0, per
// segment corrected trapezoid:
//   int_{a}^{a+h} g = h(g_a + g_b)/2 - h^2 (g'_b - g'_a)/12 + O(h^5 g'''')
// with g' from the 4th-order differences; the first segment [0, h] uses
// g(0) = g0_left, g'(0) = gp0_left (known analytically for the integrands
// here: both vanish).
std::vector<double> cumulative_from_zero(const RadialGrid& grid, const std::vector<double>& g) {
  const int n = grid.n;
  const double h = grid.h;
  std::vector<double> gp(static_cast<std::size_t>(n));
  radial_deriv1(grid, g, gp);
  std::vector<double> out(static_cast<std::size_t>(n));
  detail::KahanSum acc;
  acc.add(0.5 * h * g[0] - h * h / 12.0 * gp[0]); // g(0)=0, g'(0)=0
  out[0] = acc.value();
  for (int j = 1; j < n; ++j) {
    auto i = static_cast<std::size_t>(j);
    acc.add(0.5 * h * (g[i - 1] + g[i]) - h * h / 12.0 * (gp[i] - gp[i - 1]));
    out[i] = acc.value();
  }
  return out;
}

// cumulative integral from node j to r_max (tail sums), same rule
std::vector<double> cumulative_to_edge(const RadialGrid& grid, const std::vector<double>& g) {
  const int n = grid.n;
  const double h = grid.h;
  std::vector<double> gp(static_cast<std::size_t>(n));
  radial_deriv1(grid, g, gp);
  std::vector<double> out(static_cast<std::size_t>(n));
  detail::KahanSum acc;
  out[static_cast<std::size_t>(n - 1)] = 0.0;
  for (int j = n - 2; j >= 0; --j) {
    auto i = static_cast<std::size_t>(j);
    acc.add(0.5 * h * (g[i] + g[i + 1]) - h * h / 12.0 * (gp[i + 1] - gp[i]));
    out[i] = acc.value();
  }
  return out;
}

} // namespace

std::vector<double> radial_hartree_from_density(const RadialGrid& g,
                                                std::span<const double> rho) {
  const int n = g.n;
  std::vector<double> f2(static_cast<std::size_t>(n)); // rho r^2
  std::vector<double> f1(static_cast<std::size_t>(n)); // rho r
  for (int j = 0; j < n; ++j) {
    auto i = static_cast<std::size_t>(j);
    f2[i] = rho[i] * g.nodes[i] * g.nodes[i];
    f1[i] = rho[i] * g.nodes[i];
  }
  auto interior = cumulative_from_zero(g, f2); // int_0^r rho s^2 ds
  auto exterior = cumulative_to_edge(g, f1);   // int_r^{rmax} rho s ds

  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    auto i = static_cast<std::size_t>(j);
    w[i] = kFourPi * (interior[i] / g.nodes[i] + exterior[i]);
  }
  return w;
}

HartreePotential radial_hartree(const RadialField& u) {
  const auto& g = *u.grid;
  std::vector<double> rho(static_cast<std::size_t>(g.n));
  for (int j = 0; j < g.n; ++j) {
    auto i = static_cast<std::size_t>(j);
    rho[i] = std::norm(u.values[i]);
  }
  return HartreePotential{u.grid, radial_hartree_from_density(g, rho)};
}

double hartree_energy(const RadialField& u, const HartreePotential& w) {
  if (!u.grid->same_as(*w.grid))
    throw InvalidArgument("hartree_energy: potential computed on a different grid");
  const auto& g = *u.grid;
  detail::KahanSum s;
  for (int j = 0; j < g.n; ++j) {
    auto i = static_cast<std::size_t>(j);
    s.add(g.weights[i] * w.values[i] * std::norm(u.values[i]));
  }
  return kFourPi * s.value();
}

double hartree_energy(const RadialField& u) { return hartree_energy(u, radial_hartree(u)); }

double origin_value(const HartreePotential& w) {
  // W is even in r for radial densities: W(r) = W0 + a r^2 + O(r^4);
  // nodes at h and 2h give W0 = (4 W(h) - W(2h)) / 3 + O(h^4).
  return (4.0 * w.values[0] - w.values[1]) / 3.0;
}

} // namespace sps
