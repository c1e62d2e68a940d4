#include "sps/box_field.hpp"

#include <fftw3.h>

#include <cmath>

#include "sps/detail/numeric.hpp"
#include "sps/errors.hpp"

namespace sps {

namespace {
constexpr double kBoxMassDriftTol = 1e-10;

int check_pow2(int n) {
  if (n < 8 || (n & (n - 1)) != 0)
    throw InvalidArgument("BoxField: n per axis must be a power of two >= 8");
  return n;
}
} // namespace

BoxField make_box_field(int n, double L, double p) {
  check_pow2(n);
  if (!(L > 0.0)) throw InvalidArgument("BoxField: L must be positive");
  BoxField u;
  u.n = n;
  u.L = L;
  u.p = p;
  u.values.assign(static_cast<std::size_t>(n) * n * n, {0.0, 0.0});
  return u;
}

BoxField to_box(const RadialField& src, int n, double L) {
  BoxField out = make_box_field(n, L, src.p);
  const double h = out.h();
  std::span<const std::complex<double>> vals(src.values);
  const double gh = src.grid->h;
  for (int ix = 0; ix < n; ++ix) {
    double x = -0.5 * L + ix * h;
    for (int iy = 0; iy < n; ++iy) {
      double y = -0.5 * L + iy * h;
      for (int iz = 0; iz < n; ++iz) {
        double z = -0.5 * L + iz * h;
        double r = std::sqrt(x * x + y * y + z * z);
        out.values[out.idx(ix, iy, iz)] = detail::interp_radial(gh, vals, r);
      }
    }
  }
  return out;
}

double mass(const BoxField& u) {
  detail::KahanSum s;
  for (const auto& v : u.values) s.add(std::norm(v));
  double h = u.h();
  return s.value() * h * h * h;
}

double power_term(const BoxField& u, double p) {
  if (!(p > 2.0 && p <= 6.0)) throw InvalidArgument("power_term: need p in (2, 6]");
  detail::KahanSum s;
  if (p == 4.0) {
    for (const auto& v : u.values) {
      double a2 = std::norm(v);
      s.add(a2 * a2);
    }
  } else {
    const double half_p = 0.5 * p;
    for (const auto& v : u.values) s.add(std::pow(std::norm(v), half_p));
  }
  double h = u.h();
  return -s.value() * h * h * h;
}

double power_term(const BoxField& u) { return power_term(u, u.p); }

double virial_moment(const BoxField& u) {
  const int n = u.n;
  detail::KahanSum s;
  for (int ix = 0; ix < n; ++ix) {
    double x = u.coord(ix);
    for (int iy = 0; iy < n; ++iy) {
      double y = u.coord(iy);
      double xy2 = x * x + y * y;
      for (int iz = 0; iz < n; ++iz) {
        double z = u.coord(iz);
        s.add((xy2 + z * z) * std::norm(u.values[u.idx(ix, iy, iz)]));
      }
    }
  }
  double h = u.h();
  return s.value() * h * h * h;
}

double hartree_energy(const BoxField& u, const std::vector<double>& W) {
  if (W.size() != u.values.size())
    throw InvalidArgument("hartree_energy: potential size mismatch");
  detail::KahanSum s;
  for (std::size_t i = 0; i < W.size(); ++i) s.add(W[i] * std::norm(u.values[i]));
  double h = u.h();
  return s.value() * h * h * h;
}

// ---------------------------------------------------------------------------

struct BoxTransforms::Impl {
  int n;
  double L;
  int m;       // padded size 2n
  double T;    // kernel truncation radius
  fftw_complex* buf = nullptr;
  double* pad_real = nullptr;
  fftw_complex* pad_spec = nullptr;
  fftw_plan fwd = nullptr, bwd = nullptr;
  fftw_plan r2c = nullptr, c2r = nullptr;
  std::vector<double> k2_axis;  // |k|^2 contribution per axis index, n entries
  std::vector<double> kern;     // K_T^ / m^3 on the padded r2c grid
  std::vector<int> freq;        // symmetric frequency index per axis entry

  // Kernel truncation radius T = L: the periodized truncated kernel then
  // tiles the (2L)^3 cell without image overlap, so the convolution is the
  // exact minimum-image Coulomb sum; all pairs the half-box precondition
  // allows satisfy |x-y| <= L, where minimum image and free space agree.
  // (T = sqrt(3) L would let the kernel's periodic images reach back into
  // the cell and corrupt the potential near the box corners by O(D/L).)
  Impl(int n_in, double L_in) : n(n_in), L(L_in), m(2 * n_in), T(L_in) {
    std::size_t nn = static_cast<std::size_t>(n) * n * n;
    std::size_t mr = static_cast<std::size_t>(m) * m * m;
    std::size_t ms = static_cast<std::size_t>(m) * m * (m / 2 + 1);
    buf = fftw_alloc_complex(nn);
    pad_real = fftw_alloc_real(mr);
    pad_spec = fftw_alloc_complex(ms);
    if (!buf || !pad_real || !pad_spec) throw NumericalFailure("BoxTransforms: allocation failed");

    // FFTW_ESTIMATE keeps plan selection deterministic run to run, which the
    // bit-for-bit reproducibility contract wants.
    fwd = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    r2c = fftw_plan_dft_r2c_3d(m, m, m, pad_real, pad_spec, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r_3d(m, m, m, pad_spec, pad_real, FFTW_ESTIMATE);

    freq.resize(static_cast<std::size_t>(n));
    k2_axis.resize(static_cast<std::size_t>(n));
    const double dk = 2.0 * M_PI / L;
    for (int i = 0; i < n; ++i) {
      int f = i <= n / 2 ? i : i - n;
      freq[static_cast<std::size_t>(i)] = f;
      k2_axis[static_cast<std::size_t>(i)] = dk * f * (dk * f);
    }

    // truncated Coulomb kernel on the padded grid, inverse-transform
    // normalization folded in; 1-cos written as 2 sin^2 to dodge cancellation
    kern.resize(ms);
    const double dkp = 2.0 * M_PI / (2.0 * L);
    const double invm3 = 1.0 / static_cast<double>(mr);
    auto kfreq = [&](int i) { return i <= m / 2 ? i : i - m; };
    std::size_t at = 0;
    for (int ix = 0; ix < m; ++ix) {
      double kx = dkp * kfreq(ix);
      for (int iy = 0; iy < m; ++iy) {
        double ky = dkp * kfreq(iy);
        for (int iz = 0; iz <= m / 2; ++iz, ++at) {
          double kz = dkp * iz;
          double k2 = kx * kx + ky * ky + kz * kz;
          if (k2 == 0.0) {
            kern[at] = 2.0 * M_PI * T * T * invm3;
          } else {
            double sk = std::sin(0.5 * T * std::sqrt(k2));
            kern[at] = 8.0 * M_PI * sk * sk / k2 * invm3;
          }
        }
      }
    }
  }

  ~Impl() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
    fftw_free(buf);
    fftw_free(pad_real);
    fftw_free(pad_spec);
  }

  void load(const BoxField& u) {
    auto* b = reinterpret_cast<std::complex<double>*>(buf);
    std::copy(u.values.begin(), u.values.end(), b);
  }
};

BoxTransforms::BoxTransforms(int n, double L) : n_(check_pow2(n)), L_(L) {
  if (!(L > 0.0)) throw InvalidArgument("BoxTransforms: L must be positive");
  impl_ = std::make_unique<Impl>(n, L);
}

BoxTransforms::~BoxTransforms() = default;

void BoxTransforms::apply_kinetic_phase(BoxField& u, double s) {
  auto& im = *impl_;
  const int n = im.n;
  im.load(u);
  fftw_execute(im.fwd);
  auto* b = reinterpret_cast<std::complex<double>*>(im.buf);
  const double invn3 = 1.0 / (static_cast<double>(n) * n * n);
  std::size_t at = 0;
  for (int ix = 0; ix < n; ++ix) {
    double kx2 = im.k2_axis[static_cast<std::size_t>(ix)];
    for (int iy = 0; iy < n; ++iy) {
      double kxy2 = kx2 + im.k2_axis[static_cast<std::size_t>(iy)];
      for (int iz = 0; iz < n; ++iz, ++at) {
        double k2 = kxy2 + im.k2_axis[static_cast<std::size_t>(iz)];
        b[at] *= std::polar(invn3, -k2 * s);
      }
    }
  }
  fftw_execute(im.bwd);
  std::copy(b, b + u.values.size(), u.values.begin());
}

double BoxTransforms::kinetic_energy(const BoxField& u) {
  auto& im = *impl_;
  const int n = im.n;
  im.load(u);
  fftw_execute(im.fwd);
  auto* b = reinterpret_cast<std::complex<double>*>(im.buf);
  detail::KahanSum s;
  std::size_t at = 0;
  for (int ix = 0; ix < n; ++ix) {
    double kx2 = im.k2_axis[static_cast<std::size_t>(ix)];
    for (int iy = 0; iy < n; ++iy) {
      double kxy2 = kx2 + im.k2_axis[static_cast<std::size_t>(iy)];
      for (int iz = 0; iz < n; ++iz, ++at)
        s.add((kxy2 + im.k2_axis[static_cast<std::size_t>(iz)]) * std::norm(b[at]));
    }
  }
  double h = u.h();
  double n3 = static_cast<double>(n) * n * n;
  return s.value() * h * h * h / n3;
}

double BoxTransforms::tail_fraction(const BoxField& u) {
  auto& im = *impl_;
  const int n = im.n;
  im.load(u);
  fftw_execute(im.fwd);
  auto* b = reinterpret_cast<std::complex<double>*>(im.buf);
  const int cut = n / 3; // |freq| >= n/3: beyond two thirds of Nyquist (n/2)
  detail::KahanSum total, tail;
  std::size_t at = 0;
  for (int ix = 0; ix < n; ++ix) {
    int fx = std::abs(im.freq[static_cast<std::size_t>(ix)]);
    for (int iy = 0; iy < n; ++iy) {
      int fy = std::abs(im.freq[static_cast<std::size_t>(iy)]);
      int fxy = std::max(fx, fy);
      for (int iz = 0; iz < n; ++iz, ++at) {
        double a = std::norm(b[at]);
        total.add(a);
        if (std::max(fxy, std::abs(im.freq[static_cast<std::size_t>(iz)])) >= cut)
          tail.add(a);
      }
    }
  }
  double tot = total.value();
  return tot > 0.0 ? tail.value() / tot : 0.0;
}

BoxTransforms::Hartree BoxTransforms::hartree_potential(const BoxField& u) {
  auto& im = *impl_;
  const int n = im.n;
  const int m = im.m;
  Hartree out;

  // density into the centered block of the zero-padded cube
  std::size_t mr = static_cast<std::size_t>(m) * m * m;
  std::fill(im.pad_real, im.pad_real + mr, 0.0);
  detail::KahanSum leak, total;
  const int q = n / 4;
  for (int ix = 0; ix < n; ++ix) {
    bool ex = ix < q || ix >= n - q;
    for (int iy = 0; iy < n; ++iy) {
      bool exy = ex || iy < q || iy >= n - q;
      for (int iz = 0; iz < n; ++iz) {
        double rho = std::norm(u.values[u.idx(ix, iy, iz)]);
        total.add(rho);
        if (exy || iz < q || iz >= n - q) leak.add(rho);
        std::size_t pat = (static_cast<std::size_t>(ix + n / 2) * m +
                           static_cast<std::size_t>(iy + n / 2)) *
                              m +
                          static_cast<std::size_t>(iz + n / 2);
        im.pad_real[pat] = rho;
      }
    }
  }
  if (total.value() > 0.0) out.boundary_tail_fraction = leak.value() / total.value();
  out.boundary_leak = out.boundary_tail_fraction > 1e-8;

  fftw_execute(im.r2c);
  std::size_t ms = static_cast<std::size_t>(m) * m * (m / 2 + 1);
  auto* spec = reinterpret_cast<std::complex<double>*>(im.pad_spec);
  for (std::size_t i = 0; i < ms; ++i) spec[i] *= im.kern[i];
  fftw_execute(im.c2r);

  // h^3 Riemann factor x 1/V_pad Fourier-series factor = 1/m^3, already
  // folded into the stored kernel
  out.W.resize(u.values.size());
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        std::size_t pat = (static_cast<std::size_t>(ix + n / 2) * m +
                           static_cast<std::size_t>(iy + n / 2)) *
                              m +
                          static_cast<std::size_t>(iz + n / 2);
        out.W[u.idx(ix, iy, iz)] = im.pad_real[pat];
      }
  return out;
}

BoxField BoxTransforms::spectral_rescale(const BoxField& u, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("spectral_rescale: need t > 0");
  if (t == 1.0) return u;
  auto& im = *impl_;
  const int n = im.n;
  const std::size_t N = u.values.size();
  const double mass_in = mass(u);

  im.load(u);
  fftw_execute(im.fwd);
  auto* b = reinterpret_cast<std::complex<double>*>(im.buf);
  const double invn3 = 1.0 / (static_cast<double>(n) * n * n);

  // per-axis evaluation matrix E[j][q] = exp(i k_q (t x_j + L/2)) / n^'...
  // normalization folded once into the spectrum
  const double dk = 2.0 * M_PI / im.L;
  std::vector<std::complex<double>> E(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    double xj = -0.5 * im.L + j * (im.L / n);
    double arg0 = t * xj + 0.5 * im.L;
    for (int q = 0; q < n; ++q) {
      double k = dk * im.freq[static_cast<std::size_t>(q)];
      E[static_cast<std::size_t>(j) * n + q] = std::polar(1.0, k * arg0);
    }
  }

  std::vector<std::complex<double>> a(b, b + N), tmp(N);
  for (auto& v : a) v *= invn3;
  // successive contraction over the z, y, x spectral indices
  auto contract = [&](const std::vector<std::complex<double>>& in,
                      std::vector<std::complex<double>>& outv, int axis) {
    // layout is (x,y,z) row-major; contract the given axis against E
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy)
        for (int j = 0; j < n; ++j) {
          std::complex<double> acc{0.0, 0.0};
          const std::complex<double>* row = &E[static_cast<std::size_t>(j) * n];
          if (axis == 2) {
            const std::complex<double>* src =
                &in[(static_cast<std::size_t>(ix) * n + iy) * n];
            for (int q = 0; q < n; ++q) acc += src[q] * row[q];
            outv[(static_cast<std::size_t>(ix) * n + iy) * n + j] = acc;
          } else if (axis == 1) {
            for (int q = 0; q < n; ++q)
              acc += in[(static_cast<std::size_t>(ix) * n + q) * n + iy] * row[q];
            outv[(static_cast<std::size_t>(ix) * n + j) * n + iy] = acc;
          } else {
            for (int q = 0; q < n; ++q)
              acc += in[(static_cast<std::size_t>(q) * n + ix) * n + iy] * row[q];
            outv[(static_cast<std::size_t>(j) * n + ix) * n + iy] = acc;
          }
        }
  };
  contract(a, tmp, 2);
  contract(tmp, a, 1);
  contract(a, tmp, 0);

  BoxField out = u;
  const double amp = t * std::sqrt(t);
  for (std::size_t i = 0; i < N; ++i) out.values[i] = amp * tmp[i];

  double mass_out = mass(out);
  if (mass_in > 0.0 && std::abs(mass_out - mass_in) > kBoxMassDriftTol * mass_in)
    throw SupportOverflow("spectral_rescale: rescaled support leaves the box "
                          "(relative mass deviation above 1e-10)");
  return out;
}

double kinetic(const BoxField& u, BoxTransforms& tf) { return tf.kinetic_energy(u); }

EnergyReport energy_report(const BoxField& u, const Couplings& cpl, BoxTransforms& tf) {
  cpl.validate();
  double A = tf.kinetic_energy(u);
  double B = 0.0;
  if (cpl.hartree_on()) {
    auto hp = tf.hartree_potential(u);
    B = hartree_energy(u, hp.W);
  }
  double C = cpl.power_on() ? power_term(u, cpl.p) : 0.0;
  double D = mass(u);
  return assemble_report(A, B, C, D, cpl);
}

BoxField scale_field(const BoxField& u, double t, BoxTransforms& tf) {
  return tf.spectral_rescale(u, t);
}

} // namespace sps
