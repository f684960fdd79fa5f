#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dseries/arith.hpp"
#include "dseries/theta.hpp"

namespace dseries::verify {

enum class Status {
  kPass,
  kFail,
  kDivergentLhs,
  kDiscrepancyDocumented,
  /// The per-prime q-identity failed, so the D-identity was not attempted.
  kQIdentityFailed,
};

std::string_view to_string(Status status);
Status status_from_string(std::string_view text);

using InputValue = std::variant<std::int64_t, double, std::string>;

struct Input {
  std::string name;
  InputValue value;
  friend bool operator==(const Input&, const Input&) = default;
};

struct VerificationReport {
  std::string id;
  std::vector<Input> inputs;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  Status status = Status::kFail;
  std::optional<std::uint64_t> terms_used;
  std::optional<double> tail_bound;
  std::optional<double> runtime_ms;

  /// Looks up an input by name; nullptr when absent.
  const InputValue* input(std::string_view name) const;
  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

/// Per-ID base tolerances; IDs not present use each check's default.
using Tolerances = std::map<std::string, double, std::less<>>;

// Sum of sigma_{-g}(n;k)/k^beta over k <= max_k against prod_{j<n} zeta(beta + j g).
VerificationReport verify_d_binomial(std::uint32_t n, double beta, double gamma,
                                     std::uint64_t max_k, const arith::PrimeTable& table,
                                     double tolerance = 1e-10);

// Liouville-signed sum over S_m against prod_{j<n} 1/sigma_{-(beta+j g)}(rad m).
VerificationReport verify_d_binomial_restricted(std::uint64_t m, std::uint32_t n, double beta,
                                                double gamma, const arith::PrimeTable& table,
                                                double tolerance = 1e-10);

/// True when c g, (c-a-b) g, (c-a) g and (c-b) g all exceed 1 (and c > a + b).
bool d_gauss_admissible(std::uint32_t a, std::uint32_t b, std::uint32_t c, double gamma);

/// Throws InvalidInput unless d_gauss_admissible.
VerificationReport verify_d_gauss(std::uint32_t a, std::uint32_t b, std::uint32_t c, double gamma,
                                  std::uint64_t max_k, const arith::PrimeTable& table,
                                  double tolerance = 1e-12);

/// Prime, squarefree, prime-square and squarefree-square closed forms against
/// the literal divisor-sum definition; one aggregated report per form, a, gamma
/// (and branch for the square forms).
std::vector<VerificationReport> verify_closed_forms(std::uint64_t max_k,
                                                    const std::vector<std::uint32_t>& a_grid,
                                                    const std::vector<double>& gamma_grid,
                                                    const arith::PrimeTable& table,
                                                    const Tolerances& tolerances = {});

/// Convolution form (both prefactor signs) against the Euler-factor form.
std::vector<VerificationReport> verify_convolution(std::uint64_t max_k,
                                                   const std::vector<std::uint32_t>& a_grid,
                                                   const std::vector<double>& gamma_grid,
                                                   const arith::PrimeTable& table,
                                                   const Tolerances& tolerances = {});

/// Euler-factor, positive-exponent ratio (both scalings) and scaled Euler-factor
/// forms against the literal divisor-sum definition.
std::vector<VerificationReport> verify_factorial_forms(std::uint64_t max_k,
                                                       const std::vector<std::uint32_t>& a_grid,
                                                       const std::vector<double>& gamma_grid,
                                                       const arith::PrimeTable& table,
                                                       const Tolerances& tolerances = {});

/// One Pochhammer product group (sign * p^{-(shift*scale*g + z_weight*z)}; p^{-scale*g})_length
/// of a generic q-identity right side after the prime substitution. The sign of
/// groups carrying z flips when the series variable is negated.
struct ProductGroup {
  int sign = 1;
  double shift = 0.0;
  int z_weight = 0;
  int scale = 1;
  std::optional<std::uint32_t> length;
};

/// A q-identity phi(params; q, z) = prod(numerator groups) / prod(denominator groups)
/// whose left side maps to the Theta-series described by `lhs`.
struct QIdentitySpec {
  std::string name;
  theta::ThetaSpec lhs;
  std::vector<ProductGroup> numerator;
  std::vector<ProductGroup> denominator;
};

QIdentitySpec q_binomial_identity(std::uint32_t n, double beta, double gamma, bool negative_z);
QIdentitySpec q_gauss_identity(std::uint32_t a, std::uint32_t b, std::uint32_t c, double gamma);
QIdentitySpec q_kummer_identity(std::uint32_t a, std::uint32_t b, double gamma);

struct TransformOptions {
  /// nullopt: product over all primes; otherwise over p | m.
  std::optional<std::uint64_t> restriction_m;
  std::uint64_t max_k = 1'000'000;
  /// Largest prime at which the q-identity is checked in all-primes mode.
  std::uint64_t check_prime_bound = 100;
  double q_tolerance = 1e-12;
  double tolerance = 1e-10;
  std::string id = "T3.1";
};

/// Checks the per-prime q-identity, then the derived D-identity.
VerificationReport verify_transform(const QIdentitySpec& spec, const TransformOptions& options,
                                    const arith::PrimeTable& table);

/// The three product forms of the restricted D-Kummer identity, reported
/// pairwise; the direct S_m series is attempted and its status recorded.
/// Throws InvalidInput unless a is even and positive, b >= 1, 1+a-b >= 1.
VerificationReport verify_d_kummer_restricted(std::uint64_t m, std::uint32_t a, std::uint32_t b,
                                              double gamma, std::uint64_t series_max_k,
                                              const arith::PrimeTable& table,
                                              double tolerance = 1e-9);

/// The printed product forms of the same identity against the q-Kummer product.
VerificationReport verify_d_kummer_printed(std::uint64_t m, std::uint32_t a, std::uint32_t b,
                                           double gamma, const arith::PrimeTable& table,
                                           double tolerance = 1e-9);

/// sigma(a,b;k)/sigma(1+a-b;k) for squarefree k via the prime product; the
/// coefficient route is evaluated too and must agree to 1e-12.
double kummer_coefficient(std::uint32_t a, std::uint32_t b, double gamma, std::uint64_t k,
                          const arith::PrimeTable& table);

/// Coefficient route against the prime product over squarefree k <= max_k.
VerificationReport verify_kummer_coefficients(std::uint32_t a, std::uint32_t b, double gamma,
                                              std::uint64_t max_k, const arith::PrimeTable& table,
                                              double tolerance = 1e-12);

/// Coefficient against the constant 1 (the (2,1) and (6,1) cases).
VerificationReport verify_kummer_unit(std::string id, std::uint32_t a, std::uint32_t b,
                                      double gamma, std::uint64_t max_k,
                                      const arith::PrimeTable& table, double tolerance = 1e-14);

/// Classifies the unrestricted Liouville-signed Kummer series.
VerificationReport verify_kummer_divergence(std::uint32_t a, std::uint32_t b, double gamma,
                                            std::uint64_t max_k, const arith::PrimeTable& table);

enum class AverageSign { kPositive, kNegative };

/// Sum_{k<=x} sigma_{+-g}(k) against its leading term. Passes when the
/// relative deviation is within tolerance and shrinks from x/10 to x at least
/// at the rate the error term predicts (less 0.25 decades of slack).
VerificationReport average_order_check(double gamma, std::uint64_t x, AverageSign sign,
                                       double tolerance = 1e-3);

// q-series identities checked directly, aggregated per q.
std::vector<VerificationReport> verify_q_binomial(double tolerance = 1e-9);
std::vector<VerificationReport> verify_q_gauss(double tolerance = 1e-9);
std::vector<VerificationReport> verify_q_kummer(double tolerance = 1e-8);

/// Suite configuration. Empty grids select each check's own defaults.
struct RunConfig {
  std::uint64_t sieve_bound = arith::PrimeTable::kDefaultBound;
  std::uint64_t max_k = 1'000'000;
  std::uint64_t gauss_max_k = 4'000'000;
  std::uint64_t divergence_max_k = 100'000;
  std::uint64_t prime_bound = 100'000;
  std::uint64_t transform_check_bound = 100;
  std::uint64_t forms_max_k = 2000;
  std::uint64_t convolution_max_k = 500;
  std::uint64_t closed_form_max_k = 210;
  std::uint64_t coefficient_max_k = 210;
  Tolerances tolerances;
  std::vector<std::string> ids;
  std::vector<std::string> expected;
  bool record_timing = false;

  std::vector<std::uint32_t> n_grid;
  std::vector<double> beta_grid;
  std::vector<double> gamma_grid;
  std::vector<std::uint64_t> m_grid;
  std::vector<std::uint32_t> a_grid;
  std::vector<std::uint32_t> b_grid;
  std::vector<std::uint32_t> c_grid;
  std::vector<std::uint64_t> x_grid;

  /// Throws InvalidInput on non-positive bounds or unknown identity IDs.
  void validate() const;
};

/// Every identity ID the suite knows, in execution order.
const std::vector<std::string>& known_ids();

/// IDs whose non-pass statuses are expected by default.
const std::vector<std::string>& default_expected();

/// Runs the selected checks in a fixed order.
std::vector<VerificationReport> run_suite(const RunConfig& config, const arith::PrimeTable& table);

/// Reports that are fail / q-identity-failed, or a documented discrepancy or
/// divergent left side on an ID not listed as expected.
std::size_t unexpected_failures(const std::vector<VerificationReport>& reports,
                                const std::vector<std::string>& expected);

}  // namespace dseries::verify
