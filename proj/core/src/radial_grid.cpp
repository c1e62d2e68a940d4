#include "sps/radial_grid.hpp"

#include <cmath>

#include "sps/detail/numeric.hpp"
#include "sps/errors.hpp"

namespace sps {

std::shared_ptr<const RadialGrid> RadialGrid::make(int n, double r_max) {
  if (n < 16) throw InvalidArgument("RadialGrid: need n >= 16");
  if (!(r_max > 0.0) || !std::isfinite(r_max))
    throw InvalidArgument("RadialGrid: r_max must be positive");

  auto g = std::make_shared<RadialGrid>();
  g->n = n;
  g->r_max = r_max;
  g->h = r_max / n;
  g->nodes.resize(static_cast<std::size_t>(n));
  g->weights.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    double r = (j + 1) * g->h;
    g->nodes[static_cast<std::size_t>(j)] = r;
    g->weights[static_cast<std::size_t>(j)] = g->h * r * r;
  }
  g->nodes.back() = r_max; // exact, not n*h rounding
  // Gregory end weights 3/8, 7/6, 23/24 at r_max: cancels the trapezoid
  // boundary error exactly for the quadratic r^2 (the invariant integral).
  g->weights[static_cast<std::size_t>(n - 1)] *= 3.0 / 8.0;
  g->weights[static_cast<std::size_t>(n - 2)] *= 7.0 / 6.0;
  g->weights[static_cast<std::size_t>(n - 3)] *= 23.0 / 24.0;
  return g;
}

double RadialGrid::integrate(std::span<const double> f) const {
  detail::KahanSum s;
  for (int j = 0; j < n; ++j)
    s.add(weights[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(j)]);
  return s.value();
}

namespace {

// 4th-order stencils on a uniform grid; one-sided rows at the boundary.
template <typename T>
void deriv1_impl(int n, double h, std::span<const T> f, std::span<T> df) {
  const double c = 1.0 / (12.0 * h);
  df[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
  df[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
  for (int j = 2; j < n - 2; ++j) {
    auto i = static_cast<std::size_t>(j);
    df[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
  }
  auto N = static_cast<std::size_t>(n);
  df[N - 2] = -c * (-3.0 * f[N - 1] - 10.0 * f[N - 2] + 18.0 * f[N - 3] - 6.0 * f[N - 4] + f[N - 5]);
  df[N - 1] = -c * (-25.0 * f[N - 1] + 48.0 * f[N - 2] - 36.0 * f[N - 3] + 16.0 * f[N - 4] - 3.0 * f[N - 5]);
}

} // namespace

void radial_deriv1(const RadialGrid& grid, std::span<const double> f, std::span<double> df) {
  deriv1_impl<double>(grid.n, grid.h, f, df);
}
void radial_deriv1(const RadialGrid& grid, std::span<const std::complex<double>> f,
                   std::span<std::complex<double>> df) {
  deriv1_impl<std::complex<double>>(grid.n, grid.h, f, df);
}

void radial_deriv2(const RadialGrid& grid, std::span<const double> f, std::span<double> d2f) {
  const int n = grid.n;
  const double c = 1.0 / (12.0 * grid.h * grid.h);
  d2f[0] = c * (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5]);
  d2f[1] = c * (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]);
  for (int j = 2; j < n - 2; ++j) {
    auto i = static_cast<std::size_t>(j);
    d2f[i] = c * (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]);
  }
  auto N = static_cast<std::size_t>(n);
  d2f[N - 2] = c * (10.0 * f[N - 1] - 15.0 * f[N - 2] - 4.0 * f[N - 3] + 14.0 * f[N - 4] - 6.0 * f[N - 5] + f[N - 6]);
  d2f[N - 1] = c * (45.0 * f[N - 1] - 154.0 * f[N - 2] + 214.0 * f[N - 3] - 156.0 * f[N - 4] + 61.0 * f[N - 5] - 10.0 * f[N - 6]);
}

void radial_laplacian(const RadialGrid& grid, std::span<const double> f, std::span<double> lap) {
  const int n = grid.n;
  std::vector<double> d1(static_cast<std::size_t>(n));
  radial_deriv1(grid, f, d1);
  radial_deriv2(grid, f, lap);
  for (int j = 0; j < n; ++j) {
    auto i = static_cast<std::size_t>(j);
    lap[i] += 2.0 / grid.nodes[i] * d1[i];
  }
}

void radial_helmholtz_solve(const RadialGrid& grid, std::span<const double> g,
                            std::span<double> w, double shift) {
  // (-d^2/dr^2 + shift) v = r g on (0, r_max), v(0) = v(r_max) = 0; w = v/r.
  // Unknowns are v at nodes 0..n-2; the r_max node is pinned to zero.
  const int n = grid.n;
  const int m = n - 1;
  const double h2 = grid.h * grid.h;
  const double diag = 2.0 / h2 + shift;
  const double off = -1.0 / h2;
  std::vector<double> cp(static_cast<std::size_t>(m));
  std::vector<double> dp(static_cast<std::size_t>(m));
  cp[0] = off / diag;
  dp[0] = grid.nodes[0] * g[0] / diag;
  for (int j = 1; j < m; ++j) {
    auto i = static_cast<std::size_t>(j);
    double piv = diag - off * cp[i - 1];
    cp[i] = off / piv;
    dp[i] = (grid.nodes[i] * g[i] - off * dp[i - 1]) / piv;
  }
  auto M = static_cast<std::size_t>(m);
  w[M - 1] = dp[M - 1];
  for (int j = m - 2; j >= 0; --j) {
    auto i = static_cast<std::size_t>(j);
    w[i] = dp[i] - cp[i] * w[i + 1];
  }
  w[static_cast<std::size_t>(n - 1)] = 0.0;
  for (int j = 0; j < m; ++j) {
    auto i = static_cast<std::size_t>(j);
    w[i] /= grid.nodes[i];
  }
}

} // namespace sps
