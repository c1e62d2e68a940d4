#include "sps/radial_field.hpp"

#include <cmath>

#include "sps/detail/numeric.hpp"
#include "sps/errors.hpp"

namespace sps {

namespace {
constexpr double kFourPi = 4.0 * M_PI;
constexpr double kScaleMassLossTol = 1e-10;

void check_finite(const RadialField& u, const char* where) {
  for (const auto& v : u.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NumericalFailure(std::string("non-finite field value in ") + where);
}
} // namespace

bool RadialField::is_real() const {
  for (const auto& v : values)
    if (v.imag() != 0.0) return false;
  return true;
}

std::vector<double> RadialField::real_values() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i].real();
  return out;
}

RadialField make_field(std::shared_ptr<const RadialGrid> grid,
                       std::vector<std::complex<double>> values, double p) {
  if (!grid) throw InvalidArgument("make_field: null grid");
  if (static_cast<int>(values.size()) != grid->n)
    throw InvalidArgument("make_field: value count != grid size");
  RadialField u{std::move(grid), std::move(values), p};
  check_finite(u, "make_field");
  return u;
}

RadialField make_real_field(std::shared_ptr<const RadialGrid> grid,
                            const std::vector<double>& values, double p) {
  std::vector<std::complex<double>> v(values.begin(), values.end());
  return make_field(std::move(grid), std::move(v), p);
}

double mass(const RadialField& u) {
  const auto& g = *u.grid;
  detail::KahanSum s;
  for (int j = 0; j < g.n; ++j) {
    auto i = static_cast<std::size_t>(j);
    s.add(g.weights[i] * std::norm(u.values[i]));
  }
  return kFourPi * s.value();
}

double kinetic(const RadialField& u) {
  const auto& g = *u.grid;
  std::vector<std::complex<double>> du(static_cast<std::size_t>(g.n));
  radial_deriv1(g, u.values, du);
  detail::KahanSum s;
  for (int j = 0; j < g.n; ++j) {
    auto i = static_cast<std::size_t>(j);
    s.add(g.weights[i] * std::norm(du[i]));
  }
  return kFourPi * s.value();
}

double power_term(const RadialField& u, double p) {
  if (!(p > 2.0 && p <= 6.0)) throw InvalidArgument("power_term: need p in (2, 6]");
  const auto& g = *u.grid;
  detail::KahanSum s;
  if (p == 4.0) {
    for (int j = 0; j < g.n; ++j) {
      auto i = static_cast<std::size_t>(j);
      double a2 = std::norm(u.values[i]);
      s.add(g.weights[i] * a2 * a2);
    }
  } else {
    const double half_p = 0.5 * p;
    for (int j = 0; j < g.n; ++j) {
      auto i = static_cast<std::size_t>(j);
      s.add(g.weights[i] * std::pow(std::norm(u.values[i]), half_p));
    }
  }
  return -kFourPi * s.value();
}

double power_term(const RadialField& u) { return power_term(u, u.p); }

RadialField scale_field(const RadialField& u, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("scale_field: need t > 0");
  if (t == 1.0) return u;
  const auto& g = *u.grid;

  // For t < 1 only u on [0, t*r_max] is seen by the resampled field; the
  // mass beyond that radius is lost past the domain edge.
  if (t < 1.0) {
    const double r_cut = t * g.r_max;
    detail::KahanSum lost, total;
    for (int j = 0; j < g.n; ++j) {
      auto i = static_cast<std::size_t>(j);
      double m = g.weights[i] * std::norm(u.values[i]);
      total.add(m);
      if (g.nodes[i] > r_cut) lost.add(m);
    }
    if (total.value() > 0.0 && lost.value() > kScaleMassLossTol * total.value())
      throw SupportOverflow("scale_field: rescaled field loses more than 1e-10 "
                            "relative mass past the domain edge");
  }

  const double amp = t * std::sqrt(t);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(g.n));
  std::span<const std::complex<double>> vals(u.values);
  for (int j = 0; j < g.n; ++j)
    out[static_cast<std::size_t>(j)] = amp * detail::interp_radial(g.h, vals, t * g.nodes[static_cast<std::size_t>(j)]);
  return RadialField{u.grid, std::move(out), u.p};
}

RadialField gaussian_field(std::shared_ptr<const RadialGrid> grid, double amplitude,
                           double width, double p) {
  const double norm = std::pow(M_PI, -0.75) / std::pow(width, 1.5);
  std::vector<std::complex<double>> v(static_cast<std::size_t>(grid->n));
  for (int j = 0; j < grid->n; ++j) {
    double r = grid->nodes[static_cast<std::size_t>(j)] / width;
    v[static_cast<std::size_t>(j)] = amplitude * norm * std::exp(-0.5 * r * r);
  }
  return make_field(std::move(grid), std::move(v), p);
}

RadialField random_field(std::shared_ptr<const RadialGrid> grid, std::uint64_t seed,
                         ProfileClass profile, double p) {
  detail::SplitMix64 rng(detail::hash_combine(seed, static_cast<std::uint64_t>(profile) + 1));
  const auto& g = *grid;
  const double reach = g.r_max / 4.0; // keep t in [1/4, 4] representable
  std::vector<double> v(static_cast<std::size_t>(g.n), 0.0);

  switch (profile) {
  case ProfileClass::gaussian_mixture: {
    int k = rng.uniform_int(2, 4);
    for (int c = 0; c < k; ++c) {
      double a = rng.uniform(0.2, 1.5);
      if (rng.uniform() < 0.3) a = -a;
      double s = rng.uniform(reach / 16.0, reach / 6.0);
      for (int j = 0; j < g.n; ++j) {
        double r = g.nodes[static_cast<std::size_t>(j)] / s;
        v[static_cast<std::size_t>(j)] += a * std::exp(-0.5 * r * r);
      }
    }
    break;
  }
  case ProfileClass::bump: {
    // annular C-infinity bumps, kept off the origin so the radial profile
    // stays a smooth function of |x|
    int k = rng.uniform_int(1, 2);
    for (int c = 0; c < k; ++c) {
      double w = rng.uniform(reach / 5.0, reach / 3.0);
      double r0 = rng.uniform(w * 1.05, 0.95 * reach - w);
      double a = rng.uniform(0.3, 1.2);
      for (int j = 0; j < g.n; ++j) {
        double xi = (g.nodes[static_cast<std::size_t>(j)] - r0) / w;
        if (std::abs(xi) < 1.0)
          v[static_cast<std::size_t>(j)] += a * std::exp(1.0 - 1.0 / (1.0 - xi * xi));
      }
    }
    break;
  }
  case ProfileClass::noisy_decay: {
    double s = rng.uniform(reach / 24.0, reach / 16.0);
    double b = rng.uniform(0.6 * s, 1.2 * s);
    double a = rng.uniform(0.4, 1.4);
    double e1 = rng.uniform(0.05, 0.2), w1 = rng.uniform(0.5, 1.5) / s;
    double e2 = rng.uniform(0.02, 0.1), w2 = rng.uniform(1.5, 3.0) / s;
    for (int j = 0; j < g.n; ++j) {
      double r = g.nodes[static_cast<std::size_t>(j)];
      double env = std::exp(-std::sqrt(r * r + b * b) / s);
      v[static_cast<std::size_t>(j)] =
          a * env * (1.0 + e1 * std::cos(w1 * r) + e2 * std::cos(w2 * r));
    }
    break;
  }
  }

  // overall amplitude spread (log-uniform) so energy signs vary across seeds
  double amp = std::exp(rng.uniform(std::log(0.25), std::log(16.0)));
  std::vector<std::complex<double>> cv(v.size());
  // occasional global phase: energies must not care
  double theta = (rng.uniform() < 0.25) ? rng.uniform(0.0, 2.0 * M_PI) : 0.0;
  std::complex<double> phase = std::polar(1.0, theta);
  for (std::size_t i = 0; i < v.size(); ++i) cv[i] = amp * v[i] * phase;
  return make_field(std::move(grid), std::move(cv), p);
}

} // namespace sps
