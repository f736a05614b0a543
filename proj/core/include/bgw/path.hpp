#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace bgw {

/// Trajectory recorded on a time grid. Chain paths hold Z/N; SDE paths hold
/// the state itself. A path that exploded stops at the last record before
/// the explosion.
struct Path {
  std::uint64_t path_id = 0;
  std::vector<double> times;
  std::vector<std::array<double, 2>> states;
  std::optional<double> exploded_at;
  std::optional<double> absorbed_at;
};

}  // namespace bgw
