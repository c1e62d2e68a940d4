#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace sps::detail {

// Compensated (Kahan-Neumaier) summation. The quadrature and box sums run
// over up to ~10^7 terms; plain accumulation would cost ~1e-14 relative
// accuracy which several contracts here cannot afford.
class KahanSum {
public:
  void add(double x) {
    double t = s_ + x;
    if (std::abs(s_) >= std::abs(x))
      c_ += (s_ - t) + x;
    else
      c_ += (x - t) + s_;
    s_ = t;
  }
  double value() const { return s_ + c_; }

private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// splitmix64: tiny deterministic PRNG. Same stream on every platform, which
// is all the reproducibility contract needs.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0,1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) { // inclusive bounds
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

private:
  std::uint64_t state_;
};

// Cubic (4-point Lagrange) interpolation of radial samples f_j at
// r_j = (j+1)h, j = 0..n-1, evaluated at x >= 0.
//
// Left of the first nodes the even extension f(-r) = f(r) supplies mirror
// nodes at -h, -2h, ... (radial profiles of smooth 3D fields are even in r;
// r = 0 itself is not a sample and the stencils below never need it).
// Beyond r_max = n*h the field is taken to be zero.
template <typename T>
T interp_radial(double h, std::span<const T> f, double x) {
  const int n = static_cast<int>(f.size());
  if (x >= n * h) return T{};

  std::array<double, 4> pos;
  std::array<T, 4> val;
  auto at = [&](int j) -> T { return j < n ? f[static_cast<std::size_t>(j)] : T{}; };

  if (x < h) {
    pos = {-2 * h, -h, h, 2 * h};
    val = {at(1), at(0), at(0), at(1)};
  } else if (x < 2 * h) {
    pos = {-h, h, 2 * h, 3 * h};
    val = {at(0), at(0), at(1), at(2)};
  } else {
    // x in [(j0+1)h, (j0+2)h): surround with nodes j0-1 .. j0+2
    int j0 = static_cast<int>(std::floor(x / h)) - 1;
    if (j0 > n - 3) j0 = n - 3; // keep positions distinct at the right edge
    for (int m = 0; m < 4; ++m) {
      pos[static_cast<std::size_t>(m)] = (j0 + m) * h;
      val[static_cast<std::size_t>(m)] = at(j0 - 1 + m);
    }
  }

  T acc{};
  for (int m = 0; m < 4; ++m) {
    double w = 1.0;
    for (int k = 0; k < 4; ++k) {
      if (k == m) continue;
      w *= (x - pos[static_cast<std::size_t>(k)]) /
           (pos[static_cast<std::size_t>(m)] - pos[static_cast<std::size_t>(k)]);
    }
    acc += w * val[static_cast<std::size_t>(m)];
  }
  return acc;
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}

} // namespace sps::detail
