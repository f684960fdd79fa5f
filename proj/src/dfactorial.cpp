#include "dseries/dfactorial.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dseries/compensated.hpp"
#include "dseries/errors.hpp"
#include "dseries/qseries.hpp"

namespace dseries::dfact {

using arith::Factorization;
using arith::PrimePower;

namespace {

void validate(std::uint32_t a, double gamma) {
  if (a == 0) throw InvalidInput("D-shifted factorial: shift a must be >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidInput("D-shifted factorial: gamma must be a finite real > 0");
  }
}

// 1 - p^{-s}
double one_minus(double log_p, double s) { return -std::expm1(-s * log_p); }

// p^{s} - 1
double pow_minus_one(double log_p, double s) { return std::expm1(s * log_p); }

Factorization with_uniform_exponent(const Factorization& support, std::uint32_t exponent) {
  if (exponent == 0) return {};
  std::vector<PrimePower> out;
  for (const auto& f : support) out.push_back({f.prime, exponent});
  return Factorization(std::move(out));
}

Factorization shifted_exponents(const Factorization& k, std::uint32_t shift) {
  std::vector<PrimePower> out;
  for (const auto& f : k) out.push_back({f.prime, f.exponent + shift});
  return Factorization(std::move(out));
}

double log_value(const Factorization& k) {
  double s = 0.0;
  for (const auto& f : k) s += f.exponent * std::log(static_cast<double>(f.prime));
  return s;
}

}  // namespace

double d_shifted_prime_power(std::uint32_t a, double gamma, std::uint64_t p, std::uint32_t e) {
  validate(a, gamma);
  const double lp = std::log(static_cast<double>(p));
  double r = 1.0;
  for (std::uint32_t j = 0; j + 2 <= a; ++j) {
    r *= one_minus(lp, (e + j + 1.0) * gamma) / one_minus(lp, (j + 1.0) * gamma);
  }
  return r;
}

double d_shifted_factorial(std::uint32_t a, double gamma, const Factorization& k) {
  validate(a, gamma);
  if (a == 1) return 1.0;
  double r = 1.0;
  for (const auto& f : k) r *= d_shifted_prime_power(a, gamma, f.prime, f.exponent);
  return r;
}

double d_shifted_factorial(std::uint32_t a, double gamma, std::uint64_t k,
                           const arith::PrimeTable& table) {
  validate(a, gamma);
  return d_shifted_factorial(a, gamma, table.factorize(k));
}

double d_shifted_multi(std::span<const std::uint32_t> shifts, double gamma,
                       const Factorization& k) {
  double r = 1.0;
  for (const std::uint32_t a : shifts) r *= d_shifted_factorial(a, gamma, k);
  return r;
}

double d_shifted_multi(std::span<const std::uint32_t> shifts, double gamma, std::uint64_t k,
                       const arith::PrimeTable& table) {
  return d_shifted_multi(shifts, gamma, table.factorize(k));
}

double d_shifted_divisor_ratio(std::uint32_t a, double gamma, const Factorization& k) {
  validate(a, gamma);
  double r = 1.0;
  for (std::uint32_t j = 0; j + 2 <= a; ++j) {
    r *= arith::divisor_power_sum(shifted_exponents(k, j), -gamma) /
         arith::divisor_power_sum(with_uniform_exponent(k, j), -gamma);
  }
  return r;
}

double d_shifted_positive_ratio(std::uint32_t a, double gamma, const Factorization& k,
                                ScalingExponent exponent) {
  validate(a, gamma);
  double r = 1.0;
  for (std::uint32_t j = 0; j + 2 <= a; ++j) {
    r *= arith::divisor_power_sum(shifted_exponents(k, j), gamma) /
         arith::divisor_power_sum(with_uniform_exponent(k, j), gamma);
  }
  const double power = exponent == ScalingExponent::kCorrected ? a - 1.0 : a;
  return r * std::exp(-power * gamma * log_value(k));
}

double d_shifted_scaled(std::uint32_t a, double gamma, const Factorization& k,
                        ScalingExponent exponent) {
  validate(a, gamma);
  double r = 1.0;
  for (const auto& f : k) {
    const double lp = std::log(static_cast<double>(f.prime));
    for (std::uint32_t j = 0; j + 2 <= a; ++j) {
      r *= pow_minus_one(lp, (f.exponent + j + 1.0) * gamma) / pow_minus_one(lp, (j + 1.0) * gamma);
    }
  }
  const double power = exponent == ScalingExponent::kCorrected ? a - 1.0 : a;
  return r * std::exp(-power * gamma * log_value(k));
}

std::uint64_t ordered_factorization_count(std::uint32_t a, const Factorization& k) {
  if (a == 0) throw InvalidInput("ordered_factorization_count: a must be >= 1");
  constexpr std::uint64_t kCap = std::numeric_limits<std::uint64_t>::max() / 4;
  std::uint64_t total = 1;
  for (const auto& f : k) {
    // C(e + a - 1, a - 1), computed incrementally and saturated.
    std::uint64_t c = 1;
    for (std::uint32_t i = 1; i <= f.exponent; ++i) {
      const double next = static_cast<double>(c) * (a - 1 + i) / i;
      if (next > static_cast<double>(kCap)) return kCap;
      c = c * (a - 1 + i) / i;
    }
    if (static_cast<double>(total) * c > static_cast<double>(kCap)) return kCap;
    total *= c;
  }
  return total;
}

double d_convolution(std::uint32_t a, double gamma, const Factorization& k, ConvolutionSign sign) {
  validate(a, gamma);
  if (ordered_factorization_count(a, k) > kConvolutionBudget) {
    throw ResourceError("d_convolution: ordered factorizations of k into " + std::to_string(a) +
                        " parts exceed the enumeration budget");
  }
  const auto np = k.size();
  std::vector<double> log_p(np);
  std::vector<std::uint32_t> remaining(np);
  for (std::size_t i = 0; i < np; ++i) {
    log_p[i] = std::log(static_cast<double>(k.factors()[i].prime));
    remaining[i] = k.factors()[i].exponent;
  }

  CompensatedSum total;
  // level = index of the factor k_level being chosen (1-based); accum = log of
  // prod_{i<level} k_i^{-i gamma}.
  auto split = [&](auto&& self, std::uint32_t level, double accum) -> void {
    if (level == a) {
      double log_rest = 0.0;
      for (std::size_t i = 0; i < np; ++i) log_rest += remaining[i] * log_p[i];
      total += std::exp(accum - a * gamma * log_rest);
      return;
    }
    // Enumerate divisors d of the remaining cofactor as exponent vectors.
    std::vector<std::uint32_t> divisor(np, 0);
    auto pick = [&](auto&& pick_self, std::size_t idx, double log_d) -> void {
      if (idx == np) {
        for (std::size_t i = 0; i < np; ++i) remaining[i] -= divisor[i];
        self(self, level + 1, accum - level * gamma * log_d);
        for (std::size_t i = 0; i < np; ++i) remaining[i] += divisor[i];
        return;
      }
      for (std::uint32_t e = 0; e <= remaining[idx]; ++e) {
        divisor[idx] = e;
        pick_self(pick_self, idx + 1, log_d + e * log_p[idx]);
      }
      divisor[idx] = 0;
    };
    pick(pick, 0, 0.0);
  };
  split(split, 1, 0.0);

  const double prefactor_sign = sign == ConvolutionSign::kCorrected ? 1.0 : -1.0;
  return std::exp(prefactor_sign * gamma * log_value(k)) * total.value();
}

double d_convolution(std::uint32_t a, double gamma, std::uint64_t k,
                     const arith::PrimeTable& table, ConvolutionSign sign) {
  validate(a, gamma);
  return d_convolution(a, gamma, table.factorize(k), sign);
}

bool closed_form_admissible(ClosedForm which, const Factorization& k) {
  if (k.empty()) return false;
  switch (which) {
    case ClosedForm::kPrime:
      return k.size() == 1 && k.factors()[0].exponent == 1;
    case ClosedForm::kSquarefree:
      return k.is_squarefree();
    case ClosedForm::kPrimeSquare:
      return k.size() == 1 && k.factors()[0].exponent == 2;
    case ClosedForm::kSquarefreeSquare:
      for (const auto& f : k) {
        if (f.exponent != 2) return false;
      }
      return true;
  }
  return false;
}

double d_closed_form(std::uint32_t a, double gamma, const Factorization& k, ClosedForm which,
                     ClosedFormBranch branch) {
  validate(a, gamma);
  if (!closed_form_admissible(which, k)) {
    throw DomainError("d_closed_form: k does not have the shape the selected form requires");
  }
  double r = 1.0;
  for (const auto& f : k) {
    const double lp = std::log(static_cast<double>(f.prime));
    switch (which) {
      case ClosedForm::kPrime:
      case ClosedForm::kSquarefree:
        r *= one_minus(lp, a * gamma) / one_minus(lp, gamma);
        break;
      case ClosedForm::kPrimeSquare:
      case ClosedForm::kSquarefreeSquare:
        r *= one_minus(lp, (a + 1.0) * gamma) /
             one_minus(lp, branch == ClosedFormBranch::kFirst ? gamma : 2.0 * gamma);
        break;
    }
  }
  return r;
}

double jordan_shifted(const JordanShiftSpec& spec, const arith::PrimeTable& table) {
  if (spec.m == 0) throw InvalidInput("jordan_shifted: m must be >= 1");
  if (!(spec.gamma > 0.0)) throw InvalidInput("jordan_shifted: gamma must be > 0");
  for (const auto a : spec.shifts) {
    if (a == 0) throw InvalidInput("jordan_shifted: shifts must be >= 1");
  }
  double r = 1.0;
  for (const auto& f : table.factorize(spec.m)) {
    const double x = std::pow(static_cast<double>(f.prime), -spec.gamma);
    for (const auto a : spec.shifts) {
      r *= q::q_pochhammer(std::pow(x, static_cast<double>(a)), x, spec.n);
    }
  }
  return r;
}

double jordan_shifted_totient_form(const JordanShiftSpec& spec, const arith::PrimeTable& table) {
  if (!spec.n.has_value()) throw InvalidInput("jordan_shifted_totient_form: n must be finite");
  const Factorization m = table.factorize(spec.m);
  const double log_m = log_value(m);
  double r = 1.0;
  for (const auto a : spec.shifts) {
    for (std::uint32_t j = 0; j < *spec.n; ++j) {
      const double s = (a + j) * spec.gamma;
      r *= arith::jordan_totient(s, m) * std::exp(-s * log_m);
    }
  }
  return r;
}

double jordan_ratio(std::uint64_t m, std::span<const std::uint32_t> numerator,
                    std::span<const std::uint32_t> denominator, double gamma,
                    std::optional<std::uint32_t> n, const arith::PrimeTable& table) {
  JordanShiftSpec num{m, {numerator.begin(), numerator.end()}, gamma, n};
  JordanShiftSpec den{m, {denominator.begin(), denominator.end()}, gamma, n};
  return jordan_shifted(num, table) / jordan_shifted(den, table);
}

double jordan_ratio_sigma_form(std::uint64_t m, std::span<const std::uint32_t> numerator,
                               std::span<const std::uint32_t> denominator, double gamma,
                               std::uint32_t n, const arith::PrimeTable& table) {
  if (numerator.size() != denominator.size()) {
    throw InvalidInput("jordan_ratio_sigma_form: shift lists must have equal length");
  }
  const Factorization support = table.factorize(m);
  double r = 1.0;
  for (std::size_t i = 0; i < numerator.size(); ++i) {
    if (numerator[i] == 0 || denominator[i] == 0) {
      throw InvalidInput("jordan_ratio_sigma_form: shifts must be >= 1");
    }
    for (std::uint32_t j = 0; j < n; ++j) {
      r *= arith::divisor_power_sum(with_uniform_exponent(support, numerator[i] - 1 + j), -gamma) /
           arith::divisor_power_sum(with_uniform_exponent(support, denominator[i] - 1 + j), -gamma);
    }
  }
  return r;
}

}  // namespace dseries::dfact
