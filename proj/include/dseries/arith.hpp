#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dseries::arith {

struct PrimePower {
  std::uint64_t prime;
  std::uint32_t exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime decomposition of a positive integer, ascending by prime.
/// The integer 1 has the empty factorization.
class Factorization {
 public:
  Factorization() = default;
  /// Validates ordering and exponents; throws InvalidInput otherwise.
  explicit Factorization(std::vector<PrimePower> factors);

  std::span<const PrimePower> factors() const { return factors_; }
  std::size_t size() const { return factors_.size(); }
  bool empty() const { return factors_.empty(); }
  auto begin() const { return factors_.begin(); }
  auto end() const { return factors_.end(); }

  /// Product of prime^exponent. Throws DomainError on 64-bit overflow.
  std::uint64_t value() const;
  /// Omega(n): sum of the exponents.
  std::uint32_t total_exponent() const;
  bool is_squarefree() const;

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  std::vector<PrimePower> factors_;
};

/// Smallest-prime-factor sieve up to a fixed bound. Immutable after
/// construction, so one instance can be shared freely across threads.
class PrimeTable {
 public:
  static constexpr std::uint64_t kDefaultBound = 10'000'000;

  explicit PrimeTable(std::uint64_t bound = kDefaultBound);

  std::uint64_t bound() const { return bound_; }
  std::span<const std::uint64_t> primes() const { return primes_; }
  bool is_prime(std::uint64_t n) const;

  /// n >= 1. Uses the sieve for n <= bound, trial division beyond it.
  Factorization factorize(std::uint64_t n) const;

  /// Primes p <= limit (limit must not exceed the sieve bound).
  std::span<const std::uint64_t> primes_up_to(std::uint64_t limit) const;

 private:
  std::uint64_t bound_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint64_t> primes_;
};

/// Plain trial division, independent of any table.
Factorization factorize_trial(std::uint64_t n);

/// sigma_{-gamma}(k) = sum_{d|k} d^{-gamma}, via the Euler factors
/// (1 - p^{-(e+1)gamma}) / (1 - p^{-gamma}). gamma > 0.
double sigma_neg(double gamma, const Factorization& k);
double sigma_neg(double gamma, std::uint64_t k, const PrimeTable& table);

/// sigma_gamma(k) = sum_{d|k} d^gamma.
double sigma_pos(double gamma, const Factorization& k);
double sigma_pos(double gamma, std::uint64_t k, const PrimeTable& table);

/// Literal divisor sum sum_{d|n} d^{exponent} by enumerating divisors.
double divisor_power_sum(const Factorization& n, double exponent);

int liouville(const Factorization& k);
int liouville(std::uint64_t k, const PrimeTable& table);

std::uint64_t radical(const Factorization& k);
std::uint64_t radical(std::uint64_t k, const PrimeTable& table);

/// J_gamma(m) = m^gamma prod_{p|m} (1 - p^{-gamma}), gamma >= 0.
double jordan_totient(double gamma, const Factorization& m);
double jordan_totient(double gamma, std::uint64_t m, const PrimeTable& table);

/// All x <= bound whose primes divide m, ascending; always contains 1.
std::vector<std::uint64_t> enumerate_sm(std::uint64_t m, std::uint64_t bound,
                                        const PrimeTable& table);

/// Same enumeration but keeps each element's factorization.
struct SmoothElement {
  std::uint64_t value;
  Factorization factors;
};
std::vector<SmoothElement> enumerate_sm_factored(
    std::span<const std::uint64_t> support, std::uint64_t bound);

/// p^e for a prime power, throwing DomainError on overflow.
std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exponent);

}  // namespace dseries::arith
