// sps: command-line laboratory for mass-constrained standing waves of the
// Schroedinger-Poisson-Slater equation and their dynamics.
//
// Subcommands: ground-state, gamma-curve, evolve, instability-suite,
// decay-fit, fiber-scan, check.  All tabular output is CSV with a one-line
// header; floats carry 17 significant digits.  Every run directory gets a
// config.echo that reproduces the run via `sps --config <echo> <subcommand>`.
//
// Exit codes: 0 success, 1 invalid input, 2 completed with non-convergence.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sps/dynamics.hpp"
#include "sps/errors.hpp"
#include "sps/ground_state.hpp"
#include "sps/selfcheck.hpp"
#include "sps/snapshot.hpp"

namespace fs = std::filesystem;
using namespace sps;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNotConverged = 2;

struct GridArgs {
  int n = 4096;
  double r_max = 40.0; // documented default for c in [0.1, 5], p = 4
};

struct SolverArgs {
  double tol = 1e-8;
  int max_iter = 20000;
};

struct BoxArgs {
  int n = 64;
  double L = 24.0;
  double dt = 1e-3;
  double t_end = 10.0;
  int cadence = 10;
  double a_ratio_max = 1e3;
  double tail_max = 1e-6;
};

struct PhysArgs {
  double p = 4.0;
  double alpha = 1.0;
  double beta = 1.0;
  Couplings couplings() const { return Couplings{alpha, beta, p}; }
};

void add_grid(CLI::App* cmd, GridArgs& g) {
  cmd->add_option("--grid-n", g.n, "radial grid points")->capture_default_str();
  cmd->add_option("--grid-rmax", g.r_max, "radial domain radius")->capture_default_str();
}
void add_solver(CLI::App* cmd, SolverArgs& s) {
  cmd->add_option("--tol", s.tol, "EL residual norm target")->capture_default_str();
  cmd->add_option("--max-iter", s.max_iter, "iteration cap")->capture_default_str();
}
void add_phys(CLI::App* cmd, PhysArgs& ph) {
  cmd->add_option("--p", ph.p, "power exponent, (10/3, 6)")->capture_default_str();
  cmd->add_option("--alpha", ph.alpha, "Hartree coupling, 0 or 1")->capture_default_str();
  cmd->add_option("--beta", ph.beta, "power coupling, 0 or 1")->capture_default_str();
}
void add_box(CLI::App* cmd, BoxArgs& b) {
  cmd->add_option("--box-n", b.n, "box lattice points per axis (power of 2)")
      ->capture_default_str();
  cmd->add_option("--box-length", b.L, "box side length")->capture_default_str();
  cmd->add_option("--dt", b.dt, "time step")->capture_default_str();
  cmd->add_option("--t-end", b.t_end, "final time")->capture_default_str();
  cmd->add_option("--cadence", b.cadence, "steps between diagnostics")->capture_default_str();
  cmd->add_option("--a-ratio-max", b.a_ratio_max, "blow-up kinetic ratio threshold")
      ->capture_default_str();
  cmd->add_option("--tail-max", b.tail_max, "spectral tail resolution guard")
      ->capture_default_str();
}

fs::path prepare_out(const std::string& out, const CLI::App& app) {
  fs::path dir(out);
  fs::create_directories(dir);
  std::ofstream echo(dir / "config.echo");
  echo << app.config_to_str(true, true);
  return dir;
}

SolverOptions solver_options(const SolverArgs& s) {
  SolverOptions o;
  o.tol = s.tol;
  o.max_iter = s.max_iter;
  return o;
}

void write_report(std::ostream& os, const GroundState& gs) {
  const EnergyReport& er = gs.report;
  auto pc = pohozaev_check(gs);
  os << "converged=" << (gs.converged ? 1 : 0) << "\n"
     << "iterations=" << gs.iterations << "\n"
     << "residual=" << format_g17(gs.residual) << "\n"
     << "c=" << format_g17(gs.c) << "\n"
     << "lambda=" << format_g17(gs.lambda_c) << "\n"
     << "gamma=" << format_g17(gs.gamma_c) << "\n"
     << "A=" << format_g17(er.A) << "\nB=" << format_g17(er.B) << "\nC=" << format_g17(er.C)
     << "\nD=" << format_g17(er.D) << "\nF=" << format_g17(er.F) << "\nQ=" << format_g17(er.Q)
     << "\n"
     << "pohozaev_q_residual=" << format_g17(pc.q_residual) << "\n"
     << "pohozaev_multiplier_residual=" << format_g17(pc.multiplier_residual) << "\n";
}

GroundState solve_for(const PhysArgs& ph, double c, const GridArgs& grid,
                      const SolverArgs& sol, const std::string& init_path) {
  auto g = RadialGrid::make(grid.n, grid.r_max);
  if (!init_path.empty()) {
    Snapshot snap = load_snapshot(init_path);
    if (!snap.is_radial()) throw InvalidArgument("ground-state init must be radial");
    return solve_ground_state(ph.p, c, ph.couplings(), snap.radial(), solver_options(sol));
  }
  return solve_ground_state(ph.p, c, ph.couplings(), g, solver_options(sol));
}

// gamma(c) for classification purposes; stalls are tolerated (estimate with flag)
GroundState gamma_reference(const PhysArgs& ph, double c, const SolverArgs& sol) {
  double kappa = 18.897 / c;
  auto grid = RadialGrid::make(8192, std::clamp(34.0 / kappa, 0.2, 60.0));
  SolverOptions o = solver_options(sol);
  o.max_iter = std::max(o.max_iter, 40000);
  return solve_ground_state(ph.p, c, ph.couplings(), grid, o);
}

int cmd_ground_state(const CLI::App& app, const std::string& out, const PhysArgs& ph, double c,
                     const GridArgs& grid, const SolverArgs& sol, const std::string& init) {
  fs::path dir = prepare_out(out, app);
  GroundState gs = solve_for(ph, c, grid, sol, init);
  save_ground_state(dir / "ground_state.snapshot", gs);
  std::ofstream rep(dir / "report.txt");
  write_report(rep, gs);
  write_report(std::cout, gs);
  return gs.converged ? kExitOk : kExitNotConverged;
}

int cmd_gamma_curve(const CLI::App& app, const std::string& out, const PhysArgs& ph,
                    double c_min, double c_max, int count, bool log_spaced, bool parallel,
                    bool fixed_grid, const GridArgs& grid, const SolverArgs& sol) {
  if (!(c_min > 0.0) || !(c_max >= c_min) || count < 1)
    throw InvalidArgument("gamma-curve: need 0 < c-min <= c-max and c-count >= 1");
  fs::path dir = prepare_out(out, app);

  std::vector<double> cs;
  for (int i = 0; i < count; ++i) {
    double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    cs.push_back(log_spaced ? c_min * std::pow(c_max / c_min, f)
                            : c_min + (c_max - c_min) * f);
  }
  SweepOptions so;
  so.solver = solver_options(sol);
  so.parallel = parallel;
  so.auto_grid = !fixed_grid;
  so.n = grid.n;
  so.r_max = grid.r_max;
  GammaCurve curve = gamma_curve(ph.p, ph.couplings(), cs, so);
  write_csv(dir / "gamma_curve.csv", curve);

  // summary block: monotonicity violations, small-c growth, plateau
  int violations = 0;
  double worst = 0.0;
  for (std::size_t i = 1; i < curve.gamma_values.size(); ++i) {
    double up = curve.gamma_values[i] - curve.gamma_values[i - 1];
    if (up > 1e-6) {
      ++violations;
      worst = std::max(worst, up);
    }
  }
  std::ofstream sum(dir / "summary.txt");
  auto put = [&](const std::string& line) {
    sum << line << "\n";
    std::cout << line << "\n";
  };
  put("entries=" + std::to_string(curve.c_values.size()));
  put("monotonicity_violations=" + std::to_string(violations));
  put("worst_violation=" + format_g17(worst));
  if (curve.c_values.size() >= 2) {
    put("smallc_gamma_increases=" +
        std::to_string(curve.gamma_values[0] > curve.gamma_values[1] ? 1 : 0));
    put("smallc_A_increases=" + std::to_string(curve.A[0] > curve.A[1] ? 1 : 0));
  }
  if (curve.plateau_estimate)
    put("plateau_estimate=" + format_g17(*curve.plateau_estimate));
  bool all_conv = true;
  for (char f : curve.converged) all_conv = all_conv && f;
  put("all_converged=" + std::to_string(all_conv ? 1 : 0));
  return all_conv ? kExitOk : kExitNotConverged;
}

struct Recipe {
  std::string kind = "gaussian"; // gaussian | plane-wave | ground-state-rescaled
  double lambda = 0.9;
  double amplitude = 1.0;
  double width = 1.5;
  int mode = 1; // plane-wave lattice mode index
};

BoxField make_datum(const Recipe& rc, const std::string& initial, const PhysArgs& ph,
                    double c, const GridArgs& grid, const SolverArgs& sol, const BoxArgs& box,
                    GroundState* gs_out) {
  if (!initial.empty()) {
    Snapshot snap = load_snapshot(initial);
    if (snap.is_radial()) return to_box(snap.radial(), box.n, box.L);
    const BoxField& b = snap.box();
    if (b.n != box.n || b.L != box.L)
      throw InvalidArgument("evolve: snapshot box does not match --box-n/--box-length");
    return b;
  }
  if (rc.kind == "gaussian") {
    auto g = RadialGrid::make(4096, box.L);
    return to_box(gaussian_field(g, rc.amplitude, rc.width, ph.p), box.n, box.L);
  }
  if (rc.kind == "plane-wave") {
    BoxField u = make_box_field(box.n, box.L, ph.p);
    double k = 2.0 * M_PI / box.L * rc.mode;
    for (int ix = 0; ix < box.n; ++ix)
      for (int iy = 0; iy < box.n; ++iy)
        for (int iz = 0; iz < box.n; ++iz)
          u.values[u.idx(ix, iy, iz)] = rc.amplitude * std::polar(1.0, k * u.coord(ix));
    return u;
  }
  if (rc.kind == "ground-state-rescaled") {
    GroundState gs = solve_for(ph, c, grid, sol, "");
    RadialField v = rc.lambda == 1.0 ? gs.field : scale_field(gs.field, rc.lambda);
    if (gs_out) *gs_out = std::move(gs);
    return to_box(v, box.n, box.L);
  }
  throw InvalidArgument("evolve: unknown recipe " + rc.kind);
}

int cmd_evolve(const CLI::App& app, const std::string& out, const PhysArgs& ph, double c,
               const Recipe& rc, const std::string& initial, const GridArgs& grid,
               const SolverArgs& sol, const BoxArgs& box, int snapshot_stride) {
  fs::path dir = prepare_out(out, app);
  GroundState gs;
  gs.converged = false;
  BoxField u0 = make_datum(rc, initial, ph, c, grid, sol, box, &gs);

  SimConfig cfg;
  cfg.n = box.n;
  cfg.L = box.L;
  cfg.dt = box.dt;
  cfg.t_end = box.t_end;
  cfg.cadence = box.cadence;
  cfg.couplings = ph.couplings();
  cfg.thresholds = BlowupThresholds{box.a_ratio_max, box.tail_max};
  cfg.validate();

  BoxTransforms tf(box.n, box.L);

  // classification against gamma(mass of the datum)
  EnergyReport er = energy_report(u0, cfg.couplings, tf);
  GroundState ref = gs.converged && std::abs(gs.c - er.D) < 1e-6 * er.D
                        ? gs
                        : gamma_reference(ph, er.D, sol);
  Classification cls = classify_initial_datum(er, ref.gamma_c);

  int saved = 0;
  auto hook = [&](double t, const BoxField& u) {
    if (snapshot_stride <= 0) return;
    if (saved % snapshot_stride == 0) {
      char name[64];
      std::snprintf(name, sizeof(name), "state_t%012.6f.snapshot", t);
      save_snapshot(dir / name, u);
    }
    ++saved;
  };
  TrajectoryRecord tr = evolve(std::move(u0), cfg, tf, hook);
  write_csv(dir / "trajectory.csv", tr);

  std::ofstream rep(dir / "outcome.txt");
  auto put = [&](const std::string& line) {
    rep << line << "\n";
    std::cout << line << "\n";
  };
  put(std::string("termination=") + to_string(tr.termination));
  put("end_time=" + format_g17(tr.end_time));
  put(std::string("classification=") + to_string(cls));
  put("datum_mass=" + format_g17(er.D));
  put("datum_F=" + format_g17(er.F));
  put("datum_Q=" + format_g17(er.Q));
  put("gamma_reference=" + format_g17(ref.gamma_c));
  put("gamma_reference_converged=" + std::to_string(ref.converged ? 1 : 0));
  return kExitOk;
}

int cmd_instability_suite(const CLI::App& app, const std::string& out, const PhysArgs& ph,
                          double c, std::vector<double> lambdas, const GridArgs& grid,
                          const SolverArgs& sol, const BoxArgs& box) {
  fs::path dir = prepare_out(out, app);
  if (lambdas.empty()) lambdas = {0.8, 0.9, 0.95, 1.0, 1.05, 1.1, 1.2};

  GroundState gs = solve_for(ph, c, grid, sol, "");
  save_ground_state(dir / "ground_state.snapshot", gs);
  const EnergyReport& er = gs.report;

  std::ofstream csv(dir / "suite.csv");
  csv << "lambda,F,Q,classification,termination,detection_time\n";
  bool sign_ok = true;
  BoxTransforms tf(box.n, box.L);
  for (double lam : lambdas) {
    auto fp = fiber_energy(er.A, er.B, er.C, ph.p, lam);
    EnergyReport lam_report = gs.report;
    lam_report.F = fp.F;
    lam_report.Q = fp.Q;
    Classification cls = classify_initial_datum(lam_report, gs.gamma_c);
    if (lam < 1.0 && !(fp.Q > 0.0)) sign_ok = false;
    if (lam > 1.0 && !(fp.Q < 0.0)) sign_ok = false;
    if (lam != 1.0 && !(fp.F < gs.gamma_c)) sign_ok = false;

    RadialField v = lam == 1.0 ? gs.field : scale_field(gs.field, lam);
    SimConfig cfg;
    cfg.n = box.n;
    cfg.L = box.L;
    cfg.dt = box.dt;
    cfg.t_end = box.t_end;
    cfg.cadence = box.cadence;
    cfg.couplings = ph.couplings();
    cfg.thresholds = BlowupThresholds{box.a_ratio_max, box.tail_max};
    TrajectoryRecord tr = evolve(to_box(v, box.n, box.L), cfg, tf);

    csv << format_g17(lam) << "," << format_g17(fp.F) << "," << format_g17(fp.Q) << ","
        << to_string(cls) << "," << to_string(tr.termination) << ","
        << format_g17(tr.end_time) << "\n";
    std::cout << "lambda=" << lam << " F=" << fp.F << " Q=" << fp.Q << " " << to_string(cls)
              << " -> " << to_string(tr.termination) << " at t=" << tr.end_time << "\n";
  }
  std::ofstream sum(dir / "summary.txt");
  sum << "fiber_sign_structure_ok=" << (sign_ok ? 1 : 0) << "\n"
      << "ground_state_converged=" << (gs.converged ? 1 : 0) << "\n";
  std::cout << "fiber_sign_structure_ok=" << (sign_ok ? 1 : 0) << "\n";
  return gs.converged ? kExitOk : kExitNotConverged;
}

int cmd_decay_fit(const CLI::App& app, const std::string& out, const PhysArgs& ph, double c,
                  const std::string& state, double r1, double r2, const GridArgs& grid,
                  const SolverArgs& sol) {
  fs::path dir = prepare_out(out, app);
  GroundState gs = state.empty() ? solve_for(ph, c, grid, sol, "")
                                 : load_ground_state(state);
  DecayFit fit = decay_fit(gs, r1, r2);
  double kappa_ref = gs.lambda_c < 0.0 ? std::sqrt(-gs.lambda_c) : 0.0;
  std::ofstream rep(dir / "decay_fit.txt");
  auto put = [&](const std::string& line) {
    rep << line << "\n";
    std::cout << line << "\n";
  };
  put("kappa=" + format_g17(fit.kappa));
  put("prefactor=" + format_g17(fit.prefactor));
  put("fit_r2=" + format_g17(fit.r2));
  put("n_points=" + std::to_string(fit.n_points));
  put("sqrt_minus_lambda=" + format_g17(kappa_ref));
  if (kappa_ref > 0.0) put("kappa_rel_dev=" + format_g17(fit.kappa / kappa_ref - 1.0));
  return kExitOk;
}

int cmd_fiber_scan(const CLI::App& app, const std::string& out, const PhysArgs& ph,
                   const std::string& state, std::uint64_t seed, double t_lo, double t_hi,
                   int count, const GridArgs& grid) {
  fs::path dir = prepare_out(out, app);
  RadialField u = [&] {
    if (!state.empty()) {
      Snapshot snap = load_snapshot(state);
      if (!snap.is_radial()) throw InvalidArgument("fiber-scan: state must be radial");
      return snap.radial();
    }
    auto g = RadialGrid::make(grid.n, grid.r_max);
    return random_field(g, seed, ProfileClass::gaussian_mixture, ph.p);
  }();
  EnergyReport er = energy_report(u, ph.couplings());
  FiberScan scan = fiber_scan(er.A, er.B, er.C, ph.p, t_lo, t_hi, count);
  write_csv(dir / "fiber.csv", scan);
  std::cout << "A=" << format_g17(er.A) << " B=" << format_g17(er.B)
            << " C=" << format_g17(er.C) << "\n"
            << "t_star=" << format_g17(scan.t_star) << "\n";
  std::ofstream sum(dir / "t_star.txt");
  sum << "t_star=" << format_g17(scan.t_star) << "\n";
  return kExitOk;
}

int cmd_check(std::uint64_t seed) {
  auto results = run_selfcheck(seed);
  for (const auto& r : results)
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
  return all_passed(results) ? kExitOk : kExitInvalid;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schroedinger-Poisson-Slater standing-wave laboratory"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value configuration file");

  std::string out = "sps-out";
  std::uint64_t seed = 20260801;
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "seed for generated test fields")->capture_default_str();

  PhysArgs ph;
  GridArgs grid;
  SolverArgs sol;
  BoxArgs box;
  double c = 0.5;
  std::string init_path, initial, state;
  Recipe rc;
  int snapshot_stride = 0;
  double c_min = 0.2, c_max = 2.0;
  int c_count = 10;
  bool log_spaced = false, parallel = false, fixed_grid = false;
  std::vector<double> lambdas;
  double r1 = 0.0, r2 = 0.0;
  double t_lo = 0.1, t_hi = 10.0;
  int scan_count = 64;

  auto* gscmd = app.add_subcommand("ground-state", "solve the mass-c minimizer on V(c)");
  add_phys(gscmd, ph);
  gscmd->add_option("--c", c, "target mass")->capture_default_str();
  add_grid(gscmd, grid);
  add_solver(gscmd, sol);
  gscmd->add_option("--init", init_path, "radial snapshot initial guess");

  auto* gccmd = app.add_subcommand("gamma-curve", "trace c -> gamma(c)");
  add_phys(gccmd, ph);
  gccmd->add_option("--c-min", c_min)->capture_default_str();
  gccmd->add_option("--c-max", c_max)->capture_default_str();
  gccmd->add_option("--c-count", c_count)->capture_default_str();
  gccmd->add_flag("--log-spaced", log_spaced, "log-spaced masses");
  gccmd->add_flag("--parallel", parallel, "independent cold-started solves");
  gccmd->add_flag("--fixed-grid", fixed_grid, "use --grid-n/--grid-rmax for every mass");
  add_grid(gccmd, grid);
  add_solver(gccmd, sol);

  auto* evcmd = app.add_subcommand("evolve", "split-step propagation of an initial datum");
  add_phys(evcmd, ph);
  evcmd->add_option("--c", c, "mass for ground-state-rescaled recipe")->capture_default_str();
  evcmd->add_option("--recipe", rc.kind,
                    "gaussian | plane-wave | ground-state-rescaled (ignored with --initial)")
      ->capture_default_str();
  evcmd->add_option("--lambda", rc.lambda, "fiber rescaling of the ground state")
      ->capture_default_str();
  evcmd->add_option("--amplitude", rc.amplitude)->capture_default_str();
  evcmd->add_option("--width", rc.width)->capture_default_str();
  evcmd->add_option("--mode", rc.mode, "plane-wave lattice mode")->capture_default_str();
  evcmd->add_option("--initial", initial, "field snapshot to evolve");
  evcmd->add_option("--snapshot-stride", snapshot_stride,
                    "save every k-th diagnostic sample (0 = never)")
      ->capture_default_str();
  add_grid(evcmd, grid);
  add_solver(evcmd, sol);
  add_box(evcmd, box);

  auto* incmd = app.add_subcommand("instability-suite",
                                   "fiber rescalings of a ground state: classification "
                                   "and dynamical outcome per lambda");
  add_phys(incmd, ph);
  incmd->add_option("--c", c, "ground state mass")->capture_default_str();
  incmd->add_option("--lambdas", lambdas, "rescaling factors (default 0.8...1.2)");
  add_grid(incmd, grid);
  add_solver(incmd, sol);
  add_box(incmd, box);

  auto* dfcmd = app.add_subcommand("decay-fit", "exponential tail fit of a ground state");
  add_phys(dfcmd, ph);
  dfcmd->add_option("--c", c)->capture_default_str();
  dfcmd->add_option("--state", state, "ground state snapshot (else solve)");
  dfcmd->add_option("--r1", r1, "window start")->required();
  dfcmd->add_option("--r2", r2, "window end")->required();
  add_grid(dfcmd, grid);
  add_solver(dfcmd, sol);

  auto* fscmd = app.add_subcommand("fiber-scan", "t -> (F, Q) along the fiber of a field");
  add_phys(fscmd, ph);
  fscmd->add_option("--state", state, "radial snapshot (else a seeded random field)");
  fscmd->add_option("--t-lo", t_lo)->capture_default_str();
  fscmd->add_option("--t-hi", t_hi)->capture_default_str();
  fscmd->add_option("--count", scan_count)->capture_default_str();
  add_grid(fscmd, grid);

  auto* ckcmd = app.add_subcommand("check", "run the invariant battery");
  (void)ckcmd;

  CLI11_PARSE(app, argc, argv);

  try {
    if (gscmd->parsed())
      return cmd_ground_state(app, out, ph, c, grid, sol, init_path);
    if (gccmd->parsed())
      return cmd_gamma_curve(app, out, ph, c_min, c_max, c_count, log_spaced, parallel,
                             fixed_grid, grid, sol);
    if (evcmd->parsed())
      return cmd_evolve(app, out, ph, c, rc, initial, grid, sol, box, snapshot_stride);
    if (incmd->parsed())
      return cmd_instability_suite(app, out, ph, c, lambdas, grid, sol, box);
    if (dfcmd->parsed())
      return cmd_decay_fit(app, out, ph, c, state, r1, r2, grid, sol);
    if (fscmd->parsed())
      return cmd_fiber_scan(app, out, ph, state, seed, t_lo, t_hi, scan_count, grid);
    if (ckcmd->parsed()) return cmd_check(seed);
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
