#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace sps {

// Uniform radial grid on (0, r_max]: nodes r_j = (j+1)h, h = r_max/n.
//
// `weights` integrate f(r) r^2 dr over (0, r_max] (no 4*pi): trapezoid in r
// with the r^2 Jacobian folded in, plus a Gregory-type correction at the
// r_max end so that integrating f = 1 reproduces r_max^3/3 exactly.  The
// implicit node at r = 0 carries the factor r^2 = 0, so the left end needs
// no correction and smooth decaying integrands keep plain-trapezoid
// (superalgebraic) accuracy.
struct RadialGrid {
  int n = 0;
  double r_max = 0.0;
  double h = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;

  static std::shared_ptr<const RadialGrid> make(int n, double r_max);

  // sum_j weights_j f_j, compensated
  double integrate(std::span<const double> f) const;

  bool same_as(const RadialGrid& other) const {
    return n == other.n && r_max == other.r_max;
  }
};

// 4th-order first and second derivatives of grid samples (one-sided stencils
// at the first/last two nodes).  Inputs and outputs have grid.n entries.
void radial_deriv1(const RadialGrid& grid, std::span<const double> f, std::span<double> df);
void radial_deriv1(const RadialGrid& grid, std::span<const std::complex<double>> f,
                   std::span<std::complex<double>> df);
void radial_deriv2(const RadialGrid& grid, std::span<const double> f, std::span<double> d2f);

// Radial Laplacian f'' + (2/r) f' of real samples.
void radial_laplacian(const RadialGrid& grid, std::span<const double> f, std::span<double> lap);

// w = (-Laplacian + shift)^{-1} g with Dirichlet conditions w(0) finite,
// w(r_max) = 0, via the substitution v = r w and a second-order tridiagonal
// solve.  This is the smoothing operator behind the H^{-1}-type residual
// norm and the Sobolev-gradient preconditioner.
void radial_helmholtz_solve(const RadialGrid& grid, std::span<const double> g,
                            std::span<double> w, double shift = 1.0);

} // namespace sps
