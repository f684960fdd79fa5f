#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dseries/partial_sum.hpp"

namespace dseries::q {

struct CertifiedValue {
  double value;
  /// Bound on |value / exact - 1| from truncating an infinite product.
  double rel_error_bound;
};

/// (a; q)_n, n = nullopt meaning n = infinity (requires |q| < 1).
CertifiedValue q_pochhammer_certified(double a, double q, std::optional<std::uint32_t> n);
double q_pochhammer(double a, double q, std::optional<std::uint32_t> n);

/// (a_1, ..., a_r; q)_n.
CertifiedValue q_pochhammer_multi_certified(std::span<const double> as, double q,
                                            std::optional<std::uint32_t> n);
double q_pochhammer_multi(std::span<const double> as, double q,
                          std::optional<std::uint32_t> n);

/// _{r}phi_{r-1}(numerators; denominators; q, z). The implicit (q;q)_k
/// sits in every term's denominator.
struct PhiSeriesSpec {
  std::vector<double> numerators;
  std::vector<double> denominators;
  double q = 0.0;
  double z = 0.0;
  std::uint32_t max_terms = 10'000;
  double tolerance = 1e-17;
  /// Accumulate |term| instead of term (used for absolute-series bounds).
  bool absolute = false;
};

/// Partial sum with a ratio-test tail certificate once the term ratio is
/// provably below one; divergence is reported through the status.
PartialSum phi_partial_sum(const PhiSeriesSpec& spec);

/// Right side of the q-Kummer (Bailey-Daum) sum
/// (-q;q)_inf (aq, aq^2/b^2; q^2)_inf / (aq/b, -q/b; q)_inf.
CertifiedValue q_kummer_rhs_certified(double a, double b, double q);
double q_kummer_rhs(double a, double b, double q);

/// Left side of the q-Kummer sum as a phi series spec.
PhiSeriesSpec q_kummer_lhs_spec(double a, double b, double q);

}  // namespace dseries::q
