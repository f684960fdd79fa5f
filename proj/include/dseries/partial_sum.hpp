#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace dseries {

enum class SeriesStatus {
  kConverged,
  kTruncated,
  kDivergentOscillating,
  kDivergentGrowing,
};

std::string_view to_string(SeriesStatus status);
SeriesStatus series_status_from_string(std::string_view text);

inline bool is_divergent(SeriesStatus s) {
  return s == SeriesStatus::kDivergentOscillating || s == SeriesStatus::kDivergentGrowing;
}

/// Accumulated value of a truncated series. `tail_bound` is empty when no
/// certificate could be produced; kConverged always carries one.
struct PartialSum {
  double value = 0.0;
  std::uint64_t terms_used = 0;
  std::optional<double> tail_bound;
  SeriesStatus status = SeriesStatus::kTruncated;
  /// Magnitude of the last term added (heuristic tail indicator).
  double last_term = 0.0;
  /// For Euler products: the prime whose factor diverged, if any.
  std::optional<std::uint64_t> offending_prime;
};

}  // namespace dseries
