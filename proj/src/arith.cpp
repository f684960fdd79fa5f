#include "dseries/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dseries/compensated.hpp"
#include "dseries/errors.hpp"

namespace dseries::arith {

namespace {

void require_positive(std::uint64_t n, const char* what) {
  if (n == 0) throw InvalidInput(std::string(what) + ": argument must be >= 1");
}

void require_positive_gamma(double gamma, const char* what) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidInput(std::string(what) + ": gamma must be a finite real > 0");
  }
}

// 1 - p^{-s}, accurate when p^{-s} is close to 1.
double one_minus_pow_neg(double log_p, double s) { return -std::expm1(-s * log_p); }

}  // namespace

Factorization::Factorization(std::vector<PrimePower> factors) : factors_(std::move(factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].prime < 2 || factors_[i].exponent == 0) {
      throw InvalidInput("Factorization: primes must be >= 2 with exponent >= 1");
    }
    if (i > 0 && factors_[i - 1].prime >= factors_[i].prime) {
      throw InvalidInput("Factorization: primes must be strictly increasing");
    }
  }
}

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exponent) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < exponent; ++i) {
    if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base) {
      throw DomainError("integer power overflows 64 bits");
    }
    r *= base;
  }
  return r;
}

std::uint64_t Factorization::value() const {
  std::uint64_t r = 1;
  for (const auto& f : factors_) {
    const std::uint64_t pe = checked_pow(f.prime, f.exponent);
    if (r > std::numeric_limits<std::uint64_t>::max() / pe) {
      throw DomainError("factorization value overflows 64 bits");
    }
    r *= pe;
  }
  return r;
}

std::uint32_t Factorization::total_exponent() const {
  std::uint32_t s = 0;
  for (const auto& f : factors_) s += f.exponent;
  return s;
}

bool Factorization::is_squarefree() const {
  return std::all_of(factors_.begin(), factors_.end(),
                     [](const PrimePower& f) { return f.exponent == 1; });
}

PrimeTable::PrimeTable(std::uint64_t bound) : bound_(std::max<std::uint64_t>(bound, 2)) {
  if (bound_ > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidInput("PrimeTable: sieve bound must fit in 32 bits");
  }
  spf_.assign(bound_ + 1, 0);
  for (std::uint64_t i = 2; i <= bound_; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(i);
    }
    for (const std::uint64_t p : primes_) {
      const std::uint64_t m = p * i;
      if (p > spf_[i] || m > bound_) break;
      spf_[m] = static_cast<std::uint32_t>(p);
    }
  }
}

bool PrimeTable::is_prime(std::uint64_t n) const {
  if (n < 2) return false;
  if (n <= bound_) return spf_[n] == n;
  const Factorization f = factorize(n);
  return f.size() == 1 && f.factors()[0].exponent == 1;
}

std::span<const std::uint64_t> PrimeTable::primes_up_to(std::uint64_t limit) const {
  if (limit > bound_) throw InvalidInput("primes_up_to: limit exceeds sieve bound");
  const auto it = std::upper_bound(primes_.begin(), primes_.end(), limit);
  return {primes_.data(), static_cast<std::size_t>(it - primes_.begin())};
}

Factorization PrimeTable::factorize(std::uint64_t n) const {
  require_positive(n, "factorize");
  std::vector<PrimePower> out;
  if (n <= bound_) {
    while (n > 1) {
      const std::uint64_t p = spf_[n];
      std::uint32_t e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.push_back({p, e});
    }
    return Factorization(std::move(out));
  }
  for (const std::uint64_t p : primes_) {
    if (p * p > n) break;
    if (n % p != 0) continue;
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  if (n > 1) {
    // Cofactor may still be composite when n exceeds bound^2.
    std::uint64_t d = primes_.empty() ? 2 : primes_.back() + 2;
    if (d % 2 == 0) ++d;
    for (; d <= n / d; d += 2) {
      if (n % d != 0) continue;
      std::uint32_t e = 0;
      while (n % d == 0) {
        n /= d;
        ++e;
      }
      out.push_back({d, e});
    }
    if (n > 1) out.push_back({n, 1});
  }
  return Factorization(std::move(out));
}

Factorization factorize_trial(std::uint64_t n) {
  require_positive(n, "factorize");
  std::vector<PrimePower> out;
  for (std::uint64_t d = 2; d <= n / d; d += (d == 2 ? 1 : 2)) {
    if (n % d != 0) continue;
    std::uint32_t e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.push_back({d, e});
  }
  if (n > 1) out.push_back({n, 1});
  return Factorization(std::move(out));
}

double sigma_neg(double gamma, const Factorization& k) {
  require_positive_gamma(gamma, "sigma_neg");
  double r = 1.0;
  for (const auto& f : k) {
    const double lp = std::log(static_cast<double>(f.prime));
    r *= one_minus_pow_neg(lp, (f.exponent + 1.0) * gamma) / one_minus_pow_neg(lp, gamma);
  }
  return r;
}

double sigma_neg(double gamma, std::uint64_t k, const PrimeTable& table) {
  return sigma_neg(gamma, table.factorize(k));
}

double sigma_pos(double gamma, const Factorization& k) {
  require_positive_gamma(gamma, "sigma_pos");
  double r = 1.0;
  for (const auto& f : k) {
    // Direct sum of p^{j gamma}; exact for integer gamma while it fits.
    CompensatedSum s;
    for (std::uint32_t j = 0; j <= f.exponent; ++j) {
      s += std::pow(static_cast<double>(f.prime), j * gamma);
    }
    r *= s.value();
  }
  return r;
}

double sigma_pos(double gamma, std::uint64_t k, const PrimeTable& table) {
  return sigma_pos(gamma, table.factorize(k));
}

double divisor_power_sum(const Factorization& n, double exponent) {
  // Divisors as a flat list of d^exponent values, built prime by prime.
  std::vector<double> powers{1.0};
  for (const auto& f : n) {
    const std::size_t base = powers.size();
    const double pp = std::pow(static_cast<double>(f.prime), exponent);
    double mult = 1.0;
    for (std::uint32_t e = 1; e <= f.exponent; ++e) {
      mult *= pp;
      for (std::size_t i = 0; i < base; ++i) powers.push_back(powers[i] * mult);
    }
  }
  std::sort(powers.begin(), powers.end());
  CompensatedSum s;
  for (const double v : powers) s += v;
  return s.value();
}

int liouville(const Factorization& k) { return (k.total_exponent() % 2 == 0) ? 1 : -1; }

int liouville(std::uint64_t k, const PrimeTable& table) { return liouville(table.factorize(k)); }

std::uint64_t radical(const Factorization& k) {
  std::uint64_t r = 1;
  for (const auto& f : k) r *= f.prime;
  return r;
}

std::uint64_t radical(std::uint64_t k, const PrimeTable& table) {
  return radical(table.factorize(k));
}

double jordan_totient(double gamma, const Factorization& m) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw InvalidInput("jordan_totient: gamma must be a finite real >= 0");
  }
  double r = 1.0;
  for (const auto& f : m) {
    const double lp = std::log(static_cast<double>(f.prime));
    r *= std::exp(f.exponent * gamma * lp) * one_minus_pow_neg(lp, gamma);
  }
  return r;
}

double jordan_totient(double gamma, std::uint64_t m, const PrimeTable& table) {
  return jordan_totient(gamma, table.factorize(m));
}

std::vector<SmoothElement> enumerate_sm_factored(std::span<const std::uint64_t> support,
                                                 std::uint64_t bound) {
  std::vector<SmoothElement> out;
  if (bound == 0) return out;
  std::vector<PrimePower> current;
  // Depth-first over the support primes, extending exponents while <= bound.
  auto recurse = [&](auto&& self, std::size_t idx, std::uint64_t value) -> void {
    if (idx == support.size()) {
      out.push_back({value, Factorization(current)});
      return;
    }
    self(self, idx + 1, value);
    const std::uint64_t p = support[idx];
    std::uint64_t v = value;
    std::uint32_t e = 0;
    while (v <= bound / p) {
      v *= p;
      ++e;
      current.push_back({p, e});
      self(self, idx + 1, v);
      current.pop_back();
    }
  };
  recurse(recurse, 0, 1);
  std::sort(out.begin(), out.end(),
            [](const SmoothElement& a, const SmoothElement& b) { return a.value < b.value; });
  return out;
}

std::vector<std::uint64_t> enumerate_sm(std::uint64_t m, std::uint64_t bound,
                                        const PrimeTable& table) {
  require_positive(m, "enumerate_sm");
  std::vector<std::uint64_t> support;
  for (const auto& f : table.factorize(m)) support.push_back(f.prime);
  std::vector<std::uint64_t> out;
  for (auto& el : enumerate_sm_factored(support, bound)) out.push_back(el.value);
  return out;
}

}  // namespace dseries::arith
