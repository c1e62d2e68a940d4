#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sps/energy.hpp"
#include "sps/fibering.hpp"
#include "sps/hartree.hpp"

namespace sps {

struct SolverOptions {
  double tol = 1e-8;       // residual-norm stopping threshold
  int max_iter = 20000;
  double tau0 = 0.5;       // initial Sobolev-gradient step
  double init_width = 0.0; // Gaussian init width; 0 = auto from mass
  int verbose = 0;
};

// A converged (or honestly non-converged) mass-c minimizer of F on V(c).
struct GroundState {
  Couplings couplings;
  double c = 0.0;
  RadialField field;     // real, positive profile
  double lambda_c = 0.0; // multiplier estimate (A + alpha B + beta C)/D
  double gamma_c = 0.0;  // F at the returned field, same quadrature
  double residual = 0.0; // preconditioned EL residual norm at return
  int iterations = 0;
  bool converged = false;
  EnergyReport report;
};

// Stationarity residual of eq. -Delta u - lambda u + alpha W_u u - beta |u|^{p-2} u
// evaluated on the grid, plus its norm after the smoothing preconditioner
// (-Delta + 1)^{-1}: an H^{-1}-type norm (this is the solver's convergence
// metric and the `residual` field above).
struct ElResidual {
  std::vector<double> field;
  double norm = 0.0;
};
ElResidual el_residual(const RadialField& u, double lambda, const Couplings& cpl);

// (A + alpha B + beta C)/D; throws InvalidArgument when D = 0.
double lambda_estimate(const RadialField& u, const Couplings& cpl);

// Projected Sobolev-gradient descent:
//   lambda_hat -> preconditioned tangent step -> mass renormalization ->
//   projection onto V(c), iterated until the residual norm meets opts.tol.
// Non-convergence (expected at large mass, where the level is conjectured
// not to be attained) is reported through converged=false, not an error.
GroundState solve_ground_state(double p, double c, const Couplings& cpl,
                               const RadialField& init, const SolverOptions& opts = {});
GroundState solve_ground_state(double p, double c, const Couplings& cpl,
                               std::shared_ptr<const RadialGrid> grid,
                               const SolverOptions& opts = {});

// Pohozaev cross-checks on a solution:
//   q_residual          = |Q| / (A + B + |C|)
//   multiplier_residual = |(p-6)/(3p-6) A + (5p-12)/(3p-6) B/2 - lambda D|
//                         / (A + B + |lambda| D)
// Zero fields return zeros with degenerate = true.
struct PohozaevCheck {
  double q_residual = 0.0;
  double multiplier_residual = 0.0;
  bool degenerate = false;
};
PohozaevCheck pohozaev_check(const GroundState& gs);

struct GammaCurve {
  std::vector<double> c_values;
  std::vector<double> gamma_values;
  std::vector<double> lambda_values;
  std::vector<double> residuals;
  std::vector<double> A, B, Cmag, D;
  std::vector<int> iterations;
  std::vector<char> converged;
  std::optional<double> plateau_estimate; // mean gamma over the top converged masses
};

struct SweepOptions {
  SolverOptions solver;
  bool warm_start = true; // continuation: previous profile rescaled to the new mass
  bool parallel = false;  // cold-started independent solves (ignores warm_start)
  // grid policy: auto_grid adapts r_max to the expected decay rate per mass;
  // otherwise the fixed (n, r_max) below is used for every entry
  bool auto_grid = true;
  int n = 4096;
  double r_max = 40.0;
};

// Trace c -> gamma(c).  Entries that stall are recorded with converged=false;
// the sweep never aborts on them.
GammaCurve gamma_curve(double p, const Couplings& cpl, std::span<const double> c_values,
                       const SweepOptions& opts = {});

// Peak of the B = 0 fiber in closed form:
//   max_t F(u^t) = ctilde(p) (A/2)^{3(p-2)/(3(p-2)-4)} (|C|/p)^{-4/(3(p-2)-4)}
//   ctilde(p) = (4/(3(p-2)))^{4/(3(p-2)-4)} * (3(p-2)-4)/(3(p-2))
// Must match the numerically maximized fiber to 1e-12 relative.
double nls_peak_energy(double A, double C, double p);

// Least-squares fit of log(r u(r)) ~ a - kappa r over window [r1, r2],
// restricted to nodes with |u| in (1e-12, 1e-3) * max|u|.
struct DecayFit {
  double kappa = 0.0;
  double prefactor = 0.0;
  double r2 = 0.0; // coefficient of determination
  int n_points = 0;
};
DecayFit decay_fit(const RadialField& u, double r1, double r2);
DecayFit decay_fit(const GroundState& gs, double r1, double r2);

} // namespace sps
