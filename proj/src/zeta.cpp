#include "dseries/zeta.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "dseries/compensated.hpp"
#include "dseries/errors.hpp"

namespace dseries::zeta {

namespace {

constexpr double kPoleGuard = 1e-6;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kZeta2 = 1.6449340668482264365;
constexpr std::uint32_t kMaxFactors = 1'000'000;

// B_{2j} / (2j)! for j = 1..7; the last entry only feeds the error bound.
constexpr std::array<double, 7> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
};

void check_factor_argument(double s) {
  if (!(s > 1.0 + kPoleGuard)) {
    throw DomainError("zeta argument " + std::to_string(s) + " is not > 1 (pole proximity)");
  }
}

}  // namespace

ZetaValue riemann_zeta_certified(double s) {
  if (std::isnan(s)) throw InvalidInput("riemann_zeta: NaN argument");
  check_factor_argument(s);
  if (std::isinf(s)) return {1.0, 0.0};

  const double cutoff = std::max(20.0, std::ceil(10.0 / (s - 1.0)));
  const auto n_cut = static_cast<std::uint64_t>(cutoff);

  CompensatedSum sum;
  for (std::uint64_t n = n_cut - 1; n >= 1; --n) {
    sum += std::pow(static_cast<double>(n), -s);
  }
  const double nd = static_cast<double>(n_cut);
  const double n_pow = std::pow(nd, -s);
  sum += nd * n_pow / (s - 1.0);
  sum += 0.5 * n_pow;

  // Correction j uses the rising factorial s (s+1) ... (s+2j-2) and N^{-s-2j+1}.
  double rising = s;
  double n_term = n_pow / nd;
  double omitted = 0.0;
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    const double term = kBernoulliOverFactorial[j] * rising * n_term;
    if (j + 1 == kBernoulliOverFactorial.size()) {
      omitted = std::fabs(term);
    } else {
      sum += term;
    }
    rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
    n_term /= nd * nd;
  }
  const double value = sum.value();
  return {value, omitted + 8.0 * kEps * value};
}

double riemann_zeta(double s) { return riemann_zeta_certified(s).value; }

ProductValue zeta_shifted_certified(const ZetaShiftSpec& spec) {
  if (!(spec.gamma > 0.0) || !std::isfinite(spec.gamma)) {
    throw InvalidInput("zeta_shifted: gamma must be a finite real > 0");
  }
  if (!(spec.a > 0.0) || !std::isfinite(spec.a)) {
    throw InvalidInput("zeta_shifted: base shift a must be a finite real > 0");
  }
  ProductValue out{1.0, 0.0, 0};
  if (spec.n.has_value()) {
    for (std::uint32_t k = 0; k < *spec.n; ++k) {
      const double s = (spec.a + k) * spec.gamma;
      check_factor_argument(s);
      const ZetaValue z = riemann_zeta_certified(s);
      out.value *= z.value;
      out.rel_error_bound += z.error_bound / z.value + kEps;
      ++out.factors_used;
    }
    return out;
  }

  check_factor_argument(spec.a * spec.gamma);
  const double geometric = 1.0 - std::exp2(-spec.gamma);
  for (std::uint32_t k = 0;; ++k) {
    const double s = (spec.a + k) * spec.gamma;
    // zeta(s) - 1 <= 2^{-s} zeta(2) holds for s >= 3.
    if (s >= 3.0) {
      const double remainder = std::exp2(-s) * kZeta2 / geometric;
      if (remainder < 1e-17) {
        out.rel_error_bound += std::expm1(remainder);
        return out;
      }
    }
    if (k >= kMaxFactors) throw ResourceError("zeta_shifted: infinite product did not settle");
    const ZetaValue z = riemann_zeta_certified(s);
    out.value *= z.value;
    out.rel_error_bound += z.error_bound / z.value + kEps;
    ++out.factors_used;
  }
}

double zeta_shifted(const ZetaShiftSpec& spec) { return zeta_shifted_certified(spec).value; }

ProductValue zeta_shifted_multi_certified(std::span<const ZetaShiftSpec> specs) {
  ProductValue out{1.0, 0.0, 0};
  for (const auto& spec : specs) {
    const ProductValue p = zeta_shifted_certified(spec);
    out.value *= p.value;
    out.rel_error_bound += p.rel_error_bound;
    out.factors_used += p.factors_used;
  }
  return out;
}

double zeta_shifted_multi(std::span<const ZetaShiftSpec> specs) {
  return zeta_shifted_multi_certified(specs).value;
}

}  // namespace dseries::zeta
