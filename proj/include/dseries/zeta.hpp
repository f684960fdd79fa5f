#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace dseries::zeta {

/// Sentinel for an infinite product length.
inline constexpr std::optional<std::uint32_t> kInfinite = std::nullopt;

struct ZetaValue {
  double value;
  /// Absolute error bound (first omitted Euler-Maclaurin term plus rounding).
  double error_bound;
};

/// Riemann zeta for real s > 1 + 1e-6 by Euler-Maclaurin summation.
ZetaValue riemann_zeta_certified(double s);
double riemann_zeta(double s);

/// zeta(a; gamma)_n = prod_{k<n} zeta((a+k) gamma); n = nullopt means infinity.
struct ZetaShiftSpec {
  double a = 1.0;
  double gamma = 1.0;
  std::optional<std::uint32_t> n = 0;
};

struct ProductValue {
  double value;
  /// Relative error bound: truncation remainder plus accumulated zeta errors.
  double rel_error_bound;
  std::uint32_t factors_used;
};

ProductValue zeta_shifted_certified(const ZetaShiftSpec& spec);
double zeta_shifted(const ZetaShiftSpec& spec);

ProductValue zeta_shifted_multi_certified(std::span<const ZetaShiftSpec> specs);
double zeta_shifted_multi(std::span<const ZetaShiftSpec> specs);

}  // namespace dseries::zeta
