#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "sps/radial_grid.hpp"

namespace sps {

// Samples of a radially symmetric function on a RadialGrid.  `p` rides along
// as the power-nonlinearity exponent used when energies are evaluated.
struct RadialField {
  std::shared_ptr<const RadialGrid> grid;
  std::vector<std::complex<double>> values;
  double p = 4.0;

  int n() const { return grid->n; }
  bool is_real() const;
  std::vector<double> real_values() const;
};

RadialField make_field(std::shared_ptr<const RadialGrid> grid,
                       std::vector<std::complex<double>> values, double p = 4.0);
RadialField make_real_field(std::shared_ptr<const RadialGrid> grid,
                            const std::vector<double>& values, double p = 4.0);

// D(u) = 4*pi * int |u|^2 r^2 dr
double mass(const RadialField& u);

// A(u) = 4*pi * int |u'|^2 r^2 dr, derivative by 4th-order differences
double kinetic(const RadialField& u);

// C(u) = -4*pi * int |u|^p r^2 dr  (<= 0); requires p in (2, 6]
double power_term(const RadialField& u, double p);
double power_term(const RadialField& u); // uses u.p

// u^t(x) = t^{3/2} u(t x), resampled onto the same grid by cubic
// interpolation.  Mass-preserving up to resampling error; throws
// SupportOverflow if more than 1e-10 of the relative mass lies past the part
// of the domain the rescaled field can see (t < 1 pushes the tail beyond
// r_max/  ... precisely: u is only used on [0, t*r_max] when t < 1).
RadialField scale_field(const RadialField& u, double t);

enum class ProfileClass { gaussian_mixture, bump, noisy_decay };

// Deterministic-in-seed generator of smooth, exponentially localized test
// fields with D(u) > 0.  Profiles are kept inside r_max/4 so the fiber range
// t in [1/4, 4] stays representable.
RadialField random_field(std::shared_ptr<const RadialGrid> grid, std::uint64_t seed,
                         ProfileClass profile, double p = 4.0);

// Unit-mass Gaussian pi^{-3/4} exp(-r^2/2) scaled by `amplitude`.
RadialField gaussian_field(std::shared_ptr<const RadialGrid> grid, double amplitude = 1.0,
                           double width = 1.0, double p = 4.0);

} // namespace sps
