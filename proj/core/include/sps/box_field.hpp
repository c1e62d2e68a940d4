#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "sps/energy.hpp"
#include "sps/radial_field.hpp"

namespace sps {

// Complex samples on an n^3 periodic box of side L, box-centered coordinates
// x_i = -L/2 + i h, h = L/n.  Row-major flattening with x slowest:
// index = (ix*n + iy)*n + iz.
struct BoxField {
  int n = 0;
  double L = 0.0;
  double p = 4.0;
  std::vector<std::complex<double>> values;

  double h() const { return L / n; }
  double coord(int i) const { return -0.5 * L + i * h(); }
  std::size_t idx(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * static_cast<std::size_t>(n) +
            static_cast<std::size_t>(iy)) *
               static_cast<std::size_t>(n) +
           static_cast<std::size_t>(iz);
  }
};

BoxField make_box_field(int n, double L, double p = 4.0);

// Samples a radial profile at |x| on the box lattice (cubic interpolation).
BoxField to_box(const RadialField& u, int n, double L);

// Owns the FFTW plans and work buffers for one box size: the n^3 complex
// transforms and the (2n)^3 zero-padded real transform pair behind the
// free-space Coulomb convolution.  One simulation (thread) per instance.
class BoxTransforms {
public:
  BoxTransforms(int n, double L);
  ~BoxTransforms();
  BoxTransforms(const BoxTransforms&) = delete;
  BoxTransforms& operator=(const BoxTransforms&) = delete;

  int n() const { return n_; }
  double L() const { return L_; }

  // u <- exp(-i |k|^2 s) u in Fourier space (the kinetic half step uses s = dt/2)
  void apply_kinetic_phase(BoxField& u, double s);

  double kinetic_energy(const BoxField& u);

  // mass fraction carried by modes beyond two thirds of the Nyquist
  // wavenumber in any axis (the aliasing guard of the blow-up detector)
  double tail_fraction(const BoxField& u);

  // W = |x|^{-1} * |u|^2 by the truncated-kernel spectral convolution:
  // zero-pad |u|^2 to (2n)^3 and apply K_T(x) = 1/|x| (|x| <= T), T = L,
  // whose transform is K_T^(k) = 4 pi (1 - cos(T|k|))/|k|^2, K_T^(0) = 2 pi T^2.
  // With the source mass concentrated in the central half-box this is the
  // free-space potential (all relevant pair distances stay below T, where the
  // tiled kernel is exact); the returned fraction reports the |u|^2 mass
  // outside the central half-box (a warning past 1e-8, the precondition).
  struct Hartree {
    std::vector<double> W;
    double boundary_tail_fraction = 0.0;
    bool boundary_leak = false;
  };
  Hartree hartree_potential(const BoxField& u);

  // u^t by trigonometric resampling about the box center; throws
  // SupportOverflow when the rescaled field's mass deviates (support pushed
  // past the box or wrapped around).
  BoxField spectral_rescale(const BoxField& u, double t);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int n_;
  double L_;
};

double mass(const BoxField& u);
double power_term(const BoxField& u, double p);
double power_term(const BoxField& u);
double kinetic(const BoxField& u, BoxTransforms& tf);

// V = int |x|^2 |u|^2 in box-centered coordinates (translation-sensitive:
// center the datum).
double virial_moment(const BoxField& u);

double hartree_energy(const BoxField& u, const std::vector<double>& W);

EnergyReport energy_report(const BoxField& u, const Couplings& cpl, BoxTransforms& tf);

BoxField scale_field(const BoxField& u, double t, BoxTransforms& tf);

} // namespace sps
