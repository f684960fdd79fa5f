#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dseries/arith.hpp"
#include "dseries/partial_sum.hpp"

namespace dseries::theta {

/// Parameters of a Theta-series
///   sum_k [s_g(a..;k) s_2g(c..;k) s_g(d..;k)] / [s_g(b..;k) s_2g(d..;k) s_g(c..;k)]
///         * (lambda(k) if negative_z) / k^z
/// where s_g(..;k) are products of D-shifted factorials. The c/d lists carry
/// the parameters that were negative in the originating q-series.
struct ThetaSpec {
  std::vector<std::uint32_t> a_list;
  std::vector<std::uint32_t> b_list;
  std::vector<std::uint32_t> c_list;
  std::vector<std::uint32_t> d_list;
  double gamma = 1.0;
  double z = 2.0;
  bool negative_z = false;
  /// Restrict the sum to S_m (integers whose primes all divide m).
  std::optional<std::uint64_t> restriction_m;

  /// Throws InvalidInput unless |b| = |a| - 1, |c| = |d| and all shifts >= 1.
  void validate() const;
};

/// Parses the CLI encoding "a_list;b_list;c_list;d_list;flags", lists
/// comma-separated, flags from {neg, m=<int>}. gamma and z are not part of it.
ThetaSpec parse_theta_spec(std::string_view text);
std::string format_theta_spec(const ThetaSpec& spec);

double theta_coefficient(const ThetaSpec& spec, const arith::Factorization& k);
double theta_coefficient(const ThetaSpec& spec, std::uint64_t k, const arith::PrimeTable& table);

/// Constant C with sum_{k<=x} |coefficient(k)| <= C x for all x >= 1,
/// or nullopt if the spec's scales admit no such bound by this method.
std::optional<double> coefficient_mean_bound(const ThetaSpec& spec);

/// Certified bound on sum_{k>K} |coefficient(k)| k^{-z}; nullopt when
/// z <= 1 or no mean bound exists.
std::optional<double> tail_bound(const ThetaSpec& spec, std::uint64_t max_k);

/// Partial sum over k <= max_k (k in S_m when restricted), ascending k.
PartialSum theta_sum(const ThetaSpec& spec, std::uint64_t max_k, double tolerance,
                     const arith::PrimeTable& table);

/// Product over primes p <= prime_bound (or p | m when restricted) of the
/// per-prime basic hypergeometric series with arguments p^{-a g}, -p^{-c g}
/// and series variable +-p^{-z}.
PartialSum theta_euler_product(const ThetaSpec& spec, std::uint64_t prime_bound, double tolerance,
                               const arith::PrimeTable& table);

/// Per-prime factor of theta_euler_product at prime p.
PartialSum theta_prime_factor(const ThetaSpec& spec, std::uint64_t p);

}  // namespace dseries::theta
