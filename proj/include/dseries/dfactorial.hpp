#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dseries/arith.hpp"

namespace dseries::dfact {

/// D-shifted factorial sigma_{-gamma}(a; k). a >= 1, gamma > 0, k >= 1.
///
/// Evaluated prime by prime: for k = prod p^e and x = p^{-gamma},
///   sigma_{-gamma}(a; p^e) = prod_{j=0}^{a-2} (1 - x^{e+j+1}) / (1 - x^{j+1}),
/// which is the telescoped Euler-factor form of the ratio
///   sigma(k) sigma(k rad) ... sigma(k rad^{a-2}) / sigma(1) sigma(rad) ... sigma(rad^{a-2}).
double d_shifted_factorial(std::uint32_t a, double gamma, const arith::Factorization& k);
double d_shifted_factorial(std::uint32_t a, double gamma, std::uint64_t k,
                           const arith::PrimeTable& table);

/// Single prime-power factor sigma_{-gamma}(a; p^e).
double d_shifted_prime_power(std::uint32_t a, double gamma, std::uint64_t p, std::uint32_t e);

/// Product sigma_{-gamma}(a_1; k) ... sigma_{-gamma}(a_r; k).
double d_shifted_multi(std::span<const std::uint32_t> shifts, double gamma,
                       const arith::Factorization& k);
double d_shifted_multi(std::span<const std::uint32_t> shifts, double gamma, std::uint64_t k,
                       const arith::PrimeTable& table);

// Alternative routes to the same quantity, kept separate for cross-checks.

/// Ratio of literal divisor sums sigma_{-gamma}(k rad^j) / sigma_{-gamma}(rad^j), j < a-1.
double d_shifted_divisor_ratio(std::uint32_t a, double gamma, const arith::Factorization& k);

enum class ScalingExponent {
  /// k^{(a-1) gamma}: consistent with the a-1 factor ratio.
  kCorrected,
  /// k^{a gamma} as printed in the original statement.
  kPrinted,
};

/// Ratio of literal sigma_{+gamma} divisor sums divided by a power of k.
double d_shifted_positive_ratio(std::uint32_t a, double gamma, const arith::Factorization& k,
                                ScalingExponent exponent = ScalingExponent::kCorrected);

/// sigma_{+gamma}(a; k) from its Euler factors, divided by a power of k.
double d_shifted_scaled(std::uint32_t a, double gamma, const arith::Factorization& k,
                        ScalingExponent exponent = ScalingExponent::kCorrected);

enum class ConvolutionSign {
  /// k^{+gamma} sum_{k = k_1 ... k_a} prod k_i^{-i gamma}
  kCorrected,
  /// k^{-gamma} prefactor as printed.
  kPrinted,
};

/// Maximum number of ordered factorizations d_convolution will enumerate.
inline constexpr std::uint64_t kConvolutionBudget = 2'000'000;

/// Number of ordered factorizations of k into a factors.
std::uint64_t ordered_factorization_count(std::uint32_t a, const arith::Factorization& k);

/// Brute-force Dirichlet-convolution form by recursive divisor splitting.
/// Throws ResourceError when the enumeration exceeds kConvolutionBudget.
double d_convolution(std::uint32_t a, double gamma, const arith::Factorization& k,
                     ConvolutionSign sign = ConvolutionSign::kCorrected);
double d_convolution(std::uint32_t a, double gamma, std::uint64_t k,
                     const arith::PrimeTable& table,
                     ConvolutionSign sign = ConvolutionSign::kCorrected);

enum class ClosedForm { kPrime, kSquarefree, kPrimeSquare, kSquarefreeSquare };

/// The two printed case branches of the prime-square closed forms.
enum class ClosedFormBranch {
  /// (1 - p^{-(a+1)g}) / (1 - p^{-g}), printed under the label "k = 2".
  kFirst,
  /// (1 - p^{-(a+1)g}) / (1 - p^{-2g}), printed under the label "k != 2".
  kSecond,
};

/// True when k has the structure the selected closed form requires.
bool closed_form_admissible(ClosedForm which, const arith::Factorization& k);

/// Evaluates the printed closed form verbatim. No claim of agreement with
/// d_shifted_factorial is made. Throws DomainError on a shape mismatch.
double d_closed_form(std::uint32_t a, double gamma, const arith::Factorization& k,
                     ClosedForm which, ClosedFormBranch branch = ClosedFormBranch::kFirst);

struct JordanShiftSpec {
  std::uint64_t m = 1;
  std::vector<std::uint32_t> shifts;
  double gamma = 1.0;
  /// nullopt = infinite length.
  std::optional<std::uint32_t> n = 0;
};

/// J(m | a_1..a_r; gamma)_n = prod_i prod_{p|m} (p^{-a_i gamma}; p^{-gamma})_n.
double jordan_shifted(const JordanShiftSpec& spec, const arith::PrimeTable& table);

/// Same product through normalised Jordan totients
/// prod_i prod_{j<n} J_{(a_i+j)gamma}(m) / m^{(a_i+j)gamma}. Finite n only.
double jordan_shifted_totient_form(const JordanShiftSpec& spec, const arith::PrimeTable& table);

/// J(m | num; gamma)_n / J(m | den; gamma)_n.
double jordan_ratio(std::uint64_t m, std::span<const std::uint32_t> numerator,
                    std::span<const std::uint32_t> denominator, double gamma,
                    std::optional<std::uint32_t> n, const arith::PrimeTable& table);

/// Telescoped divisor-sum form of jordan_ratio:
/// prod_i prod_{j<n} sigma_{-g}(R^{a_i-1+j}) / sigma_{-g}(R^{b_i-1+j}), R = rad(m).
/// Requires equally many numerator and denominator shifts and finite n.
double jordan_ratio_sigma_form(std::uint64_t m, std::span<const std::uint32_t> numerator,
                               std::span<const std::uint32_t> denominator, double gamma,
                               std::uint32_t n, const arith::PrimeTable& table);

}  // namespace dseries::dfact
