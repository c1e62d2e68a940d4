#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sps {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// The invariant battery behind `sps check`: quadrature exactness, the
// energy-report identity, scaling laws, Gagliardo-Nirenberg / HLS sanity with
// constants calibrated on a dense field family, Hartree oracles and Newton
// bounds, fibering sign structure, generator determinism, and the exact
// linear cases of the box propagator.  Deterministic in `seed`.
std::vector<CheckResult> run_selfcheck(std::uint64_t seed = 20260801);

bool all_passed(const std::vector<CheckResult>& results);

} // namespace sps
