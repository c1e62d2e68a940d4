#include "sps/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sps/detail/numeric.hpp"
#include "sps/dynamics.hpp"
#include "sps/fibering.hpp"
#include "sps/ground_state.hpp"
#include "sps/hartree.hpp"

namespace sps {

namespace {

struct Battery {
  std::vector<CheckResult> results;
  void record(const std::string& name, bool pass, const std::string& detail) {
    results.push_back({name, pass, detail});
  }
  template <typename F>
  void run(const std::string& name, F&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      record(name, false, std::string("exception: ") + e.what());
    }
  }
};

std::string num(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

ProfileClass profile_of(int i) {
  switch (i % 3) {
  case 0: return ProfileClass::gaussian_mixture;
  case 1: return ProfileClass::bump;
  default: return ProfileClass::noisy_decay;
  }
}

} // namespace

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.pass; });
}

std::vector<CheckResult> run_selfcheck(std::uint64_t seed) {
  Battery bat;
  auto grid = RadialGrid::make(4096, 16.0);

  bat.run("quadrature-r2-exact", [&] {
    std::vector<double> one(static_cast<std::size_t>(grid->n), 1.0);
    double got = grid->integrate(one);
    double want = grid->r_max * grid->r_max * grid->r_max / 3.0;
    double rel = std::abs(got - want) / want;
    bat.record("quadrature-r2-exact", rel <= 1e-12, "rel err " + num(rel));
  });

  bat.run("energy-identity", [&] {
    // F - 2/(3(p-2)) Q == (3p-10)/(6(p-2)) A + (3p-8)/(12(p-2)) B, and
    // F < 0 => Q < 0, across profiles and p
    const double ps[] = {3.5, 4.0, 5.0};
    double worst = 0.0;
    int neg_F = 0;
    bool sign_ok = true;
    for (int i = 0; i < 120; ++i) {
      auto u = random_field(grid, seed + static_cast<std::uint64_t>(i), profile_of(i));
      for (double p : ps) {
        Couplings cpl{1.0, 1.0, p};
        EnergyReport er = energy_report(u, cpl);
        double lhs = er.F - 2.0 / (3.0 * (p - 2.0)) * er.Q;
        double rhs = (3.0 * p - 10.0) / (6.0 * (p - 2.0)) * er.A +
                     (3.0 * p - 8.0) / (12.0 * (p - 2.0)) * er.B;
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
        if (er.F < 0.0) {
          ++neg_F;
          if (!(er.Q < 0.0)) sign_ok = false;
        }
      }
    }
    bat.record("energy-identity", worst <= 1e-12, "worst rel " + num(worst));
    bat.record("Fneg-implies-Qneg", sign_ok && neg_F > 0,
               "F<0 cases: " + std::to_string(neg_F));
  });

  bat.run("scaling-laws", [&] {
    // A(u^t) = t^2 A, B(u^t) = t B, C(u^t) = t^{3(p-2)/2} C, D(u^t) = D
    // to 1e-6 relative for t in [1/4, 4].  t = 4 compresses every feature
    // fourfold before the difference stencils see it, so this grid is kept
    // fine enough that the 4th-order budget still clears 1e-6.
    auto fine = RadialGrid::make(16384, 16.0);
    double worst = 0.0;
    const double ts[] = {0.25, 0.5, 2.0, 4.0};
    for (int i = 0; i < 12; ++i) {
      auto u = random_field(fine, seed + 100 + static_cast<std::uint64_t>(i), profile_of(i));
      Couplings cpl{1.0, 1.0, 4.0};
      EnergyReport e0 = energy_report(u, cpl);
      for (double t : ts) {
        auto v = scale_field(u, t);
        EnergyReport e1 = energy_report(v, cpl);
        double e = 1.5 * (cpl.p - 2.0);
        worst = std::max({worst, std::abs(e1.A / (t * t * e0.A) - 1.0),
                          std::abs(e1.B / (t * e0.B) - 1.0),
                          std::abs(e1.C / (std::pow(t, e) * e0.C) - 1.0),
                          std::abs(e1.D / e0.D - 1.0)});
      }
    }
    bat.record("scaling-laws", worst <= 1e-6, "worst rel " + num(worst));
  });

  bat.run("gn-hls-sanity", [&] {
    // calibrate K, K' on a dense family, then assert no violation on fresh
    // fields (the paper never fixes the constants)
    const double p = 4.0;
    double K = 0.0, Kp = 0.0;
    for (int i = 0; i < 150; ++i) {
      auto u = random_field(grid, seed + 1000 + static_cast<std::uint64_t>(i), profile_of(i));
      double A = kinetic(u), D = mass(u), B = hartree_energy(u);
      double C = power_term(u, p);
      K = std::max(K, -C / (std::pow(A, 0.75 * (p - 2.0)) * std::pow(D, 0.25 * (6.0 - p))));
      Kp = std::max(Kp, B / (std::sqrt(A) * std::pow(D, 1.5)));
    }
    K *= 1.05;
    Kp *= 1.05;
    bool ok = true;
    for (int i = 0; i < 80; ++i) {
      auto u = random_field(grid, seed + 5000 + static_cast<std::uint64_t>(i), profile_of(i + 1));
      double A = kinetic(u), D = mass(u), B = hartree_energy(u);
      double C = power_term(u, p);
      if (-C > K * std::pow(A, 0.75 * (p - 2.0)) * std::pow(D, 0.25 * (6.0 - p))) ok = false;
      if (B > Kp * std::sqrt(A) * std::pow(D, 1.5)) ok = false;
    }
    bat.record("gn-hls-sanity", ok, "K=" + num(K) + " K'=" + num(Kp));
  });

  bat.run("hartree-radial", [&] {
    auto g = gaussian_field(grid);
    auto W = radial_hartree(g);
    double D = mass(g);
    double werr = 0.0, newton = 0.0;
    bool nonneg = true, monotone = true;
    double prev_rw = 0.0;
    for (int j = 0; j < grid->n; ++j) {
      auto i = static_cast<std::size_t>(j);
      double r = grid->nodes[i];
      werr = std::max(werr, std::abs(W.values[i] - std::erf(r) / r));
      newton = std::max(newton, W.values[i] - D / r);
      if (W.values[i] < 0.0) nonneg = false;
      double rw = r * W.values[i];
      if (rw < prev_rw - 1e-12 * D) monotone = false;
      prev_rw = rw;
    }
    double edge = std::abs(W.values.back() * grid->r_max / D - 1.0);
    bat.record("hartree-gaussian-oracle", werr <= 1e-6, "max |W - erf(r)/r| " + num(werr));
    bat.record("hartree-newton-bound", newton <= 1e-10 * D && nonneg && monotone,
               "max W - D/r " + num(newton));
    bat.record("hartree-edge-charge", edge <= 1e-10, "rel " + num(edge));
    double w0 = origin_value(W);
    bat.record("hartree-origin", std::abs(w0 - 2.0 / std::sqrt(M_PI)) <= 1e-6,
               "W(0+) err " + num(std::abs(w0 - 2.0 / std::sqrt(M_PI))));
  });

  bat.run("fibering", [&] {
    // unique sign change of y, maximality at t*, d/dt F = Q/t
    bool ok = true;
    double worst_root = 0.0, worst_dual = 0.0;
    for (int i = 0; i < 40; ++i) {
      auto u = random_field(grid, seed + 2000 + static_cast<std::uint64_t>(i), profile_of(i));
      Couplings cpl{1.0, 1.0, i % 2 ? 4.0 : 3.6};
      EnergyReport er = energy_report(u, cpl);
      double ts = t_star(er.A, er.B, er.C, cpl.p);
      double scale = component_scale(er) * std::max(1.0, ts);
      // root residual through the derivative relation Q(u^t) = t y(t)
      auto at = fiber_energy(er.A, er.B, er.C, cpl.p, ts);
      worst_root = std::max(worst_root, std::abs(at.Q / ts) / scale);
      double Fstar = at.F;
      for (double f : {0.25, 0.5, 2.0, 4.0}) {
        auto pt = fiber_energy(er.A, er.B, er.C, cpl.p, f * ts);
        if (!(pt.F < Fstar)) ok = false;
        if (f < 1.0 && !(pt.Q > 0.0)) ok = false;
        if (f > 1.0 && !(pt.Q < 0.0)) ok = false;
      }
      // centered difference of F in log t vs Q at moderate t
      double t = 0.7 * ts, dl = 1e-5;
      auto hi = fiber_energy(er.A, er.B, er.C, cpl.p, t * std::exp(dl));
      auto lo = fiber_energy(er.A, er.B, er.C, cpl.p, t * std::exp(-dl));
      double dF = (hi.F - lo.F) / (2.0 * dl);
      auto mid = fiber_energy(er.A, er.B, er.C, cpl.p, t);
      worst_dual = std::max(worst_dual, std::abs(dF - mid.Q) / std::abs(mid.Q));
    }
    bat.record("fibering-root", worst_root <= 1e-12, "worst |y(t*)|/scale " + num(worst_root));
    bat.record("fibering-structure", ok, "sign pattern and maximality");
    bat.record("fibering-derivative", worst_dual <= 1e-6, "worst rel " + num(worst_dual));
  });

  bat.run("generator-determinism", [&] {
    auto a = random_field(grid, seed + 7, ProfileClass::gaussian_mixture);
    auto b = random_field(grid, seed + 7, ProfileClass::gaussian_mixture);
    bool same = a.values == b.values && mass(a) > 0.0;
    bat.record("generator-determinism", same, "bitwise equality and D > 0");
  });

  bat.run("box-linear-exact", [&] {
    // plane wave: A = |k|^2 D exactly; free propagator phase exact
    int n = 32;
    double L = 8.0;
    BoxField u = make_box_field(n, L);
    double k = 2.0 * M_PI / L * 3.0;
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy)
        for (int iz = 0; iz < n; ++iz)
          u.values[u.idx(ix, iy, iz)] = std::polar(1.0, k * u.coord(ix));
    BoxTransforms tf(n, L);
    double A = tf.kinetic_energy(u), D = mass(u);
    double kin_err = std::abs(A - k * k * D) / (k * k * D);
    BoxField v = u;
    double dt = 1e-2;
    Couplings free_cpl{0.0, 0.0, 4.0};
    strang_step(v, dt, free_cpl, tf);
    double perr = 0.0;
    for (std::size_t i = 0; i < v.values.size(); ++i)
      perr = std::max(perr,
                      std::abs(v.values[i] - u.values[i] * std::polar(1.0, -k * k * dt)));
    bat.record("box-planewave-kinetic", kin_err <= 1e-13, "rel " + num(kin_err));
    bat.record("box-planewave-phase", perr <= 1e-13, "max abs " + num(perr));
  });

  bat.run("box-hartree-cross", [&] {
    // B from the box path vs the radial path for the same Gaussian
    int n = 64;
    double L = 24.0;
    auto g = gaussian_field(grid);
    double Br = hartree_energy(g);
    BoxField u = to_box(g, n, L);
    BoxTransforms tf(n, L);
    auto hp = tf.hartree_potential(u);
    double Bb = hartree_energy(u, hp.W);
    double rel = std::abs(Bb - Br) / Br;
    bool wpos = std::all_of(hp.W.begin(), hp.W.end(), [](double w) { return w >= 0.0; });
    bat.record("box-hartree-cross", rel <= 1e-5 && !hp.boundary_leak && wpos,
               "rel " + num(rel));
  });

  return bat.results;
}

} // namespace sps
