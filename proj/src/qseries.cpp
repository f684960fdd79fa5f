#include "dseries/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dseries/compensated.hpp"
#include "dseries/errors.hpp"

namespace dseries {

std::string_view to_string(SeriesStatus status) {
  switch (status) {
    case SeriesStatus::kConverged:
      return "converged";
    case SeriesStatus::kTruncated:
      return "truncated";
    case SeriesStatus::kDivergentOscillating:
      return "divergent-oscillating";
    case SeriesStatus::kDivergentGrowing:
      return "divergent-growing";
  }
  return "truncated";
}

SeriesStatus series_status_from_string(std::string_view text) {
  for (auto s : {SeriesStatus::kConverged, SeriesStatus::kTruncated,
                 SeriesStatus::kDivergentOscillating, SeriesStatus::kDivergentGrowing}) {
    if (to_string(s) == text) return s;
  }
  throw InvalidInput("unknown series status '" + std::string(text) + "'");
}

}  // namespace dseries

namespace dseries::q {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFactorCutoff = 1e-17;
constexpr std::uint32_t kMaxInfiniteFactors = 10'000'000;
constexpr std::uint32_t kDivergenceStart = 16;
constexpr std::uint32_t kDivergenceRun = 8;

void require_q(double q) {
  if (!(std::fabs(q) < 1.0)) throw DomainError("q-series: |q| must be < 1");
}

}  // namespace

CertifiedValue q_pochhammer_certified(double a, double q, std::optional<std::uint32_t> n) {
  if (n.has_value()) {
    double r = 1.0;
    double aq = a;
    for (std::uint32_t j = 0; j < *n; ++j) {
      r *= 1.0 - aq;
      aq *= q;
    }
    return {r, 2.0 * kEps * *n};
  }
  require_q(q);
  double r = 1.0;
  double aq = a;
  std::uint32_t j = 0;
  while (std::fabs(aq) >= kFactorCutoff) {
    if (++j > kMaxInfiniteFactors) throw ResourceError("q_pochhammer: too many factors");
    r *= 1.0 - aq;
    aq *= q;
  }
  // sum_{i>=j} |a q^i| bounds |log| of the dropped tail.
  const double tail = std::fabs(aq) / ((1.0 - std::fabs(q)) * (1.0 - std::fabs(aq)));
  return {r, std::expm1(tail) + 2.0 * kEps * j};
}

double q_pochhammer(double a, double q, std::optional<std::uint32_t> n) {
  return q_pochhammer_certified(a, q, n).value;
}

CertifiedValue q_pochhammer_multi_certified(std::span<const double> as, double q,
                                            std::optional<std::uint32_t> n) {
  CertifiedValue out{1.0, 0.0};
  for (const double a : as) {
    const CertifiedValue v = q_pochhammer_certified(a, q, n);
    out.value *= v.value;
    out.rel_error_bound += v.rel_error_bound;
  }
  return out;
}

double q_pochhammer_multi(std::span<const double> as, double q, std::optional<std::uint32_t> n) {
  return q_pochhammer_multi_certified(as, q, n).value;
}

PartialSum phi_partial_sum(const PhiSeriesSpec& spec) {
  require_q(spec.q);
  if (spec.numerators.empty() || spec.denominators.size() + 1 != spec.numerators.size()) {
    throw InvalidInput("phi_partial_sum: need r numerators and r-1 denominators");
  }
  if (spec.max_terms == 0) throw InvalidInput("phi_partial_sum: max_terms must be >= 1");

  const double aq = std::fabs(spec.q);
  double max_num = 0.0;
  for (const double a : spec.numerators) max_num = std::max(max_num, std::fabs(a));
  double max_den = 0.0;
  for (const double b : spec.denominators) max_den = std::max(max_den, std::fabs(b));
  const auto r_num = static_cast<double>(spec.numerators.size());
  const auto r_den = static_cast<double>(spec.denominators.size());

  PartialSum out;
  CompensatedSum acc;
  double term = 1.0;
  double qk = 1.0;  // q^k
  std::uint32_t nondecreasing_run = 0;
  std::uint32_t sign_changes = 0;
  double prev_abs = 0.0;
  double prev_term = 0.0;

  for (std::uint32_t k = 0; k < spec.max_terms; ++k) {
    if (!std::isfinite(term)) {
      out.status = sign_changes > 0 ? SeriesStatus::kDivergentOscillating
                                    : SeriesStatus::kDivergentGrowing;
      out.tail_bound.reset();
      break;
    }
    acc += spec.absolute ? std::fabs(term) : term;
    out.terms_used = k + 1;
    out.last_term = std::fabs(term);

    if (k > 0) {
      if ((term < 0.0) != (prev_term < 0.0) && term != 0.0 && prev_term != 0.0) ++sign_changes;
      nondecreasing_run = (std::fabs(term) >= prev_abs && term != 0.0) ? nondecreasing_run + 1 : 0;
    }
    prev_abs = std::fabs(term);
    prev_term = term;

    // Every later ratio |t_{j+1}/t_j|, j >= k, is below this bound.
    double ratio_bound = std::numeric_limits<double>::infinity();
    const double qk_abs = std::fabs(qk);
    if (max_den * qk_abs < 1.0 && aq * qk_abs < 1.0) {
      ratio_bound = std::fabs(spec.z) * std::pow(1.0 + max_num * qk_abs, r_num) /
                    ((1.0 - aq * qk_abs) * std::pow(1.0 - max_den * qk_abs, r_den));
    }
    if (term == 0.0) {
      out.tail_bound = 0.0;
      out.status = SeriesStatus::kConverged;
      break;
    }
    if (ratio_bound < 1.0) {
      const double tail = std::fabs(term) * ratio_bound / (1.0 - ratio_bound);
      out.tail_bound = tail;
      if (tail <= spec.tolerance * std::max(std::fabs(acc.value()), 1e-300)) {
        out.status = SeriesStatus::kConverged;
        break;
      }
    } else {
      out.tail_bound.reset();
      if (k >= kDivergenceStart && nondecreasing_run >= kDivergenceRun) {
        out.status = sign_changes * 4 >= k ? SeriesStatus::kDivergentOscillating
                                           : SeriesStatus::kDivergentGrowing;
        break;
      }
    }

    // Advance to t_{k+1}.
    double ratio = spec.z / (1.0 - qk * spec.q);
    for (const double a : spec.numerators) ratio *= 1.0 - a * qk;
    for (const double b : spec.denominators) {
      const double f = 1.0 - b * qk;
      if (f == 0.0) {
        throw DomainError("phi_partial_sum: denominator factor vanishes at k = " +
                          std::to_string(k));
      }
      ratio /= f;
    }
    term *= ratio;
    qk *= spec.q;
  }
  out.value = acc.value();
  return out;
}

CertifiedValue q_kummer_rhs_certified(double a, double b, double q) {
  if (b == 0.0) throw DomainError("q_kummer_rhs: b must be nonzero");
  require_q(q);
  const double q2 = q * q;
  const CertifiedValue n1 = q_pochhammer_certified(-q, q, std::nullopt);
  const CertifiedValue n2 = q_pochhammer_certified(a * q, q2, std::nullopt);
  const CertifiedValue n3 = q_pochhammer_certified(a * q2 / (b * b), q2, std::nullopt);
  const CertifiedValue d1 = q_pochhammer_certified(a * q / b, q, std::nullopt);
  const CertifiedValue d2 = q_pochhammer_certified(-q / b, q, std::nullopt);
  if (d1.value == 0.0 || d2.value == 0.0) {
    throw DomainError("q_kummer_rhs: denominator product vanishes");
  }
  return {n1.value * n2.value * n3.value / (d1.value * d2.value),
          n1.rel_error_bound + n2.rel_error_bound + n3.rel_error_bound + d1.rel_error_bound +
              d2.rel_error_bound};
}

double q_kummer_rhs(double a, double b, double q) { return q_kummer_rhs_certified(a, b, q).value; }

PhiSeriesSpec q_kummer_lhs_spec(double a, double b, double q) {
  if (b == 0.0) throw DomainError("q_kummer: b must be nonzero");
  PhiSeriesSpec spec;
  spec.numerators = {a, b};
  spec.denominators = {a * q / b};
  spec.q = q;
  spec.z = -q / b;
  return spec;
}

}  // namespace dseries::q
