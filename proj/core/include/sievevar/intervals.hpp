#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sievevar {

struct IntervalEntry {
  std::size_t horizon = 0;
  std::size_t row = 0;
  std::size_t col = 0;
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  [[nodiscard]] double length() const noexcept { return upper - lower; }
  [[nodiscard]] bool contains(double value) const noexcept {
    return lower <= value && value <= upper;
  }
};

/// Per-horizon, per-response confidence intervals. Entries are ordered by
/// horizon, then row, then column.
struct IntervalSet {
  std::string method;
  double level = 0.0;
  std::size_t sample_size = 0;
  std::vector<IntervalEntry> entries;
  /// Set when a negative variance estimate was clamped to zero.
  bool clamped = false;
};

}  // namespace sievevar
