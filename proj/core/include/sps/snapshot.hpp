#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "sps/box_field.hpp"
#include "sps/dynamics.hpp"
#include "sps/ground_state.hpp"

namespace sps {

// Plain-text field snapshot:
//   # kind=radial|box
//   # n=...
//   # rmax=... | # L=...
//   # p=...
//   (any further "# key=value" metadata lines)
// then one sample per line, 17 significant digits:
//   radial:  r value_re value_im
//   box:     value_re value_im     (row-major, x slowest)
using MetadataMap = std::map<std::string, std::string, std::less<>>;

void save_snapshot(const std::filesystem::path& path, const RadialField& u,
                   const MetadataMap& extra = {});
void save_snapshot(const std::filesystem::path& path, const BoxField& u,
                   const MetadataMap& extra = {});

struct Snapshot {
  std::variant<RadialField, BoxField> field;
  MetadataMap metadata;

  bool is_radial() const { return std::holds_alternative<RadialField>(field); }
  const RadialField& radial() const { return std::get<RadialField>(field); }
  const BoxField& box() const { return std::get<BoxField>(field); }
};

Snapshot load_snapshot(const std::filesystem::path& path);

// GroundState persists as a radial snapshot plus a metadata header block.
void save_ground_state(const std::filesystem::path& path, const GroundState& gs);
GroundState load_ground_state(const std::filesystem::path& path);

// CSV writers (one-line header, 17 significant digits everywhere)
void write_csv(const std::filesystem::path& path, const GammaCurve& curve);
void write_csv(const std::filesystem::path& path, const TrajectoryRecord& traj);
void write_csv(const std::filesystem::path& path, const FiberScan& scan);

// 17-significant-digit float formatting used by every text artifact
std::string format_g17(double x);

} // namespace sps
