#include "dseries/theta.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "dseries/compensated.hpp"
#include "dseries/dfactorial.hpp"
#include "dseries/errors.hpp"
#include "dseries/qseries.hpp"
#include "dseries/zeta.hpp"

namespace dseries::theta {

using arith::Factorization;

namespace {

constexpr double kBlockDecayRatio = 0.9;
constexpr int kBlockRatiosChecked = 3;
constexpr double kRoundingSlack = 1e-15;

std::vector<std::uint32_t> parse_list(std::string_view field) {
  std::vector<std::uint32_t> out;
  while (!field.empty()) {
    const auto comma = field.find(',');
    std::string_view item = field.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    std::uint32_t v = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw InvalidInput("theta spec: bad list entry '" + std::string(item) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    field.remove_prefix(comma + 1);
  }
  return out;
}

std::string join(const std::vector<std::uint32_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

struct ScaledFactor {
  std::uint32_t shift;
  double scale;
};

// Factors whose product dominates |coefficient|: denominators are all >= 1.
std::vector<ScaledFactor> numerator_factors(const ThetaSpec& spec) {
  std::vector<ScaledFactor> out;
  for (auto a : spec.a_list) {
    if (a >= 2) out.push_back({a, spec.gamma});
  }
  for (auto c : spec.c_list) {
    if (c >= 2) out.push_back({c, 2.0 * spec.gamma});
  }
  for (auto d : spec.d_list) {
    if (d >= 2) out.push_back({d, spec.gamma});
  }
  return out;
}

std::uint32_t factor_count(const ThetaSpec& spec) {
  std::uint32_t n = 0;
  for (const auto* list : {&spec.a_list, &spec.b_list, &spec.c_list, &spec.d_list}) {
    for (auto v : *list) n += (v >= 2) ? 1 : 0;
  }
  // c and d each appear at two scales.
  for (const auto* list : {&spec.c_list, &spec.d_list}) {
    for (auto v : *list) n += (v >= 2) ? 1 : 0;
  }
  return n;
}

std::vector<std::uint64_t> support_of(std::uint64_t m, const arith::PrimeTable& table) {
  std::vector<std::uint64_t> out;
  for (const auto& f : table.factorize(m)) out.push_back(f.prime);
  return out;
}

// Certified sum over e >= 0 of |coefficient(p^e)| p^{-e z}, z > 0.
double absolute_prime_series(const ThetaSpec& spec, std::uint64_t p) {
  const std::uint32_t factors = factor_count(spec);
  const double x = std::pow(static_cast<double>(p), -spec.gamma);
  const double pz = std::pow(static_cast<double>(p), -spec.z);
  CompensatedSum sum;
  for (std::uint32_t e = 0; e < 100'000; ++e) {
    const Factorization pe = e == 0 ? Factorization{} : Factorization({{p, e}});
    const double term = std::fabs(theta_coefficient(spec, pe)) * std::pow(pz, e);
    sum += term;
    // Each D-factorial ratio between consecutive exponents lies in
    // [1 - x^{e+1}, 1 / (1 - x^{e+1})].
    const double ratio = pz / std::pow(1.0 - std::pow(x, e + 1.0), factors);
    if (ratio < 1.0) {
      const double tail = term * ratio / (1.0 - ratio);
      if (tail <= 1e-17 * sum.value()) return sum.value() + tail;
    }
  }
  throw ResourceError("theta: absolute per-prime series did not settle");
}

struct Diagnostics {
  std::vector<double> block_max;  // complete dyadic blocks only
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;
  bool all_nonnegative = true;

  bool nondecaying() const {
    if (block_max.size() < kBlockRatiosChecked + 1) return false;
    for (std::size_t i = block_max.size() - kBlockRatiosChecked; i < block_max.size(); ++i) {
      if (!(block_max[i] >= kBlockDecayRatio * block_max[i - 1])) return false;
    }
    return true;
  }
  bool mixed_signs() const {
    const std::uint64_t lo = std::min(positive, negative);
    return lo >= std::max<std::uint64_t>(1, (positive + negative) / 20);
  }
};

}  // namespace

void ThetaSpec::validate() const {
  if (a_list.empty()) throw InvalidInput("theta spec: a_list must be non-empty");
  if (b_list.size() + 1 != a_list.size()) {
    throw InvalidInput("theta spec: need |b_list| = |a_list| - 1");
  }
  if (c_list.size() != d_list.size()) {
    throw InvalidInput("theta spec: need |c_list| = |d_list|");
  }
  for (const auto* list : {&a_list, &b_list, &c_list, &d_list}) {
    for (auto v : *list) {
      if (v == 0) throw InvalidInput("theta spec: shifts must be positive integers");
    }
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidInput("theta spec: gamma must be > 0");
  if (!std::isfinite(z)) throw InvalidInput("theta spec: z must be finite");
  if (restriction_m && *restriction_m == 0) throw InvalidInput("theta spec: m must be >= 1");
}

ThetaSpec parse_theta_spec(std::string_view text) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto semi = text.find(';');
    fields.push_back(text.substr(0, semi));
    if (semi == std::string_view::npos) break;
    text.remove_prefix(semi + 1);
  }
  if (fields.size() != 4 && fields.size() != 5) {
    throw InvalidInput("theta spec: expected 'a_list;b_list;c_list;d_list;flags'");
  }
  ThetaSpec spec;
  spec.a_list = parse_list(fields[0]);
  spec.b_list = parse_list(fields[1]);
  spec.c_list = parse_list(fields[2]);
  spec.d_list = parse_list(fields[3]);
  if (fields.size() == 5) {
    std::string_view flags = fields[4];
    while (!flags.empty()) {
      const auto comma = flags.find(',');
      const std::string_view flag = flags.substr(0, comma);
      if (flag == "neg") {
        spec.negative_z = true;
      } else if (flag.starts_with("m=")) {
        std::uint64_t m = 0;
        const auto body = flag.substr(2);
        const auto res = std::from_chars(body.data(), body.data() + body.size(), m);
        if (res.ec != std::errc() || res.ptr != body.data() + body.size() || m == 0) {
          throw InvalidInput("theta spec: bad restriction flag '" + std::string(flag) + "'");
        }
        spec.restriction_m = m;
      } else if (!flag.empty()) {
        throw InvalidInput("theta spec: unknown flag '" + std::string(flag) + "'");
      }
      if (comma == std::string_view::npos) break;
      flags.remove_prefix(comma + 1);
    }
  }
  return spec;
}

std::string format_theta_spec(const ThetaSpec& spec) {
  std::string flags;
  if (spec.negative_z) flags = "neg";
  if (spec.restriction_m) {
    if (!flags.empty()) flags += ',';
    flags += "m=" + std::to_string(*spec.restriction_m);
  }
  return join(spec.a_list) + ';' + join(spec.b_list) + ';' + join(spec.c_list) + ';' +
         join(spec.d_list) + ';' + flags;
}

double theta_coefficient(const ThetaSpec& spec, const Factorization& k) {
  const double g = spec.gamma;
  const double numerator = dfact::d_shifted_multi(spec.a_list, g, k) *
                           dfact::d_shifted_multi(spec.c_list, 2.0 * g, k) *
                           dfact::d_shifted_multi(spec.d_list, g, k);
  const double denominator = dfact::d_shifted_multi(spec.b_list, g, k) *
                             dfact::d_shifted_multi(spec.d_list, 2.0 * g, k) *
                             dfact::d_shifted_multi(spec.c_list, g, k);
  const double value = numerator / denominator;
  return spec.negative_z ? arith::liouville(k) * value : value;
}

double theta_coefficient(const ThetaSpec& spec, std::uint64_t k, const arith::PrimeTable& table) {
  return theta_coefficient(spec, table.factorize(k));
}

std::optional<double> coefficient_mean_bound(const ThetaSpec& spec) {
  const auto factors = numerator_factors(spec);
  if (factors.empty()) return 1.0;
  // Each factor is 1 * h_i with sum_d h_i(d) d^{-s} = prod_{j<A_i} zeta(s + j g_i).
  // Summing the product over k <= x gives <= x prod_i H_i(w_i) whenever
  // sum w_i = 1 (lcm of the d_i dominates prod d_i^{w_i}) and w_i + g_i > 1.
  double deficit = 0.0;
  for (const auto& f : factors) deficit += std::max(0.0, 1.0 - f.scale);
  if (deficit >= 1.0) return std::nullopt;
  const double slack = (1.0 - deficit) / static_cast<double>(factors.size());
  double bound = 1.0;
  for (const auto& f : factors) {
    const double w = std::max(0.0, 1.0 - f.scale) + slack;
    for (std::uint32_t j = 1; j < f.shift; ++j) {
      const zeta::ZetaValue zv = zeta::riemann_zeta_certified(w + j * f.scale);
      bound *= zv.value + zv.error_bound;
    }
  }
  return bound;
}

std::optional<double> tail_bound(const ThetaSpec& spec, std::uint64_t max_k) {
  if (!(spec.z > 1.0) || max_k == 0) return std::nullopt;
  const auto c = coefficient_mean_bound(spec);
  if (!c) return std::nullopt;
  const double k = static_cast<double>(max_k);
  const double integral = std::pow(k, 1.0 - spec.z) / (spec.z - 1.0);
  // Coefficients bounded by 1 compare directly with the integral; otherwise
  // partial summation against the mean bound costs a factor z.
  if (numerator_factors(spec).empty()) return integral;
  return spec.z * *c * integral;
}

PartialSum theta_sum(const ThetaSpec& spec, std::uint64_t max_k, double tolerance,
                     const arith::PrimeTable& table) {
  spec.validate();
  if (max_k == 0) throw InvalidInput("theta_sum: max_k must be >= 1");

  std::vector<arith::SmoothElement> smooth;
  std::vector<std::uint64_t> support;
  if (spec.restriction_m) {
    support = support_of(*spec.restriction_m, table);
    smooth = arith::enumerate_sm_factored(support, max_k);
  }
  const std::uint64_t count = spec.restriction_m ? smooth.size() : max_k;

  PartialSum out;
  CompensatedSum acc;
  CompensatedSum abs_acc;
  Diagnostics diag;
  int current_block = -1;
  double current_max = 0.0;

  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t k = 0;
    double coef = 0.0;
    if (spec.restriction_m) {
      k = smooth[idx].value;
      coef = theta_coefficient(spec, smooth[idx].factors);
    } else {
      k = idx + 1;
      coef = theta_coefficient(spec, table.factorize(k));
    }
    const double term = coef * std::exp(-spec.z * std::log(static_cast<double>(k)));
    acc += term;
    abs_acc += std::fabs(term);
    out.last_term = std::fabs(term);

    const int block = std::bit_width(k) - 1;
    if (block != current_block) {
      if (current_block >= 0) diag.block_max.push_back(current_max);
      current_block = block;
      current_max = 0.0;
    }
    current_max = std::max(current_max, std::fabs(term));
    if (term < 0.0) diag.all_nonnegative = false;
    if (2 * idx >= count) {
      if (term > 0.0) ++diag.positive;
      if (term < 0.0) ++diag.negative;
    }
  }
  // Keep the final block only when it is complete.
  if (current_block >= 0 && ((std::uint64_t{2} << current_block) - 1) <= max_k) {
    diag.block_max.push_back(current_max);
  }

  out.value = acc.value();
  out.terms_used = count;

  if (diag.nondecaying()) {
    out.status = diag.mixed_signs() ? SeriesStatus::kDivergentOscillating
                                    : SeriesStatus::kDivergentGrowing;
    return out;
  }

  if (spec.restriction_m) {
    if (spec.z > 0.0) {
      double total = 1.0;
      for (const auto p : support) total *= absolute_prime_series(spec, p);
      out.tail_bound = std::max(0.0, total - abs_acc.value()) + kRoundingSlack * total;
    }
  } else {
    out.tail_bound = tail_bound(spec, max_k);
  }

  if (out.tail_bound) {
    out.status = *out.tail_bound <= tolerance * std::max(1.0, std::fabs(out.value))
                     ? SeriesStatus::kConverged
                     : SeriesStatus::kTruncated;
  } else if (diag.all_nonnegative && spec.z <= 1.0) {
    out.status = SeriesStatus::kDivergentGrowing;
  } else {
    out.status = SeriesStatus::kTruncated;
  }
  return out;
}

PartialSum theta_prime_factor(const ThetaSpec& spec, std::uint64_t p) {
  const double x = std::pow(static_cast<double>(p), -spec.gamma);
  q::PhiSeriesSpec phi;
  for (auto a : spec.a_list) phi.numerators.push_back(std::pow(x, static_cast<double>(a)));
  for (auto c : spec.c_list) phi.numerators.push_back(-std::pow(x, static_cast<double>(c)));
  for (auto b : spec.b_list) phi.denominators.push_back(std::pow(x, static_cast<double>(b)));
  for (auto d : spec.d_list) phi.denominators.push_back(-std::pow(x, static_cast<double>(d)));
  phi.q = x;
  const double pz = std::pow(static_cast<double>(p), -spec.z);
  phi.z = spec.negative_z ? -pz : pz;
  phi.max_terms = 100'000;
  phi.tolerance = 1e-17;
  return q::phi_partial_sum(phi);
}

PartialSum theta_euler_product(const ThetaSpec& spec, std::uint64_t prime_bound, double tolerance,
                               const arith::PrimeTable& table) {
  spec.validate();
  std::vector<std::uint64_t> primes;
  if (spec.restriction_m) {
    primes = support_of(*spec.restriction_m, table);
  } else {
    const auto span = table.primes_up_to(prime_bound);
    primes.assign(span.begin(), span.end());
  }

  PartialSum out;
  double value = 1.0;
  double rel_error = 0.0;
  for (const auto p : primes) {
    const PartialSum factor = theta_prime_factor(spec, p);
    ++out.terms_used;
    if (is_divergent(factor.status) || !factor.tail_bound) {
      out.status = is_divergent(factor.status) ? factor.status : SeriesStatus::kTruncated;
      out.offending_prime = p;
      out.value = value * factor.value;
      out.tail_bound.reset();
      return out;
    }
    value *= factor.value;
    rel_error += (*factor.tail_bound + 4.0 * std::numeric_limits<double>::epsilon() *
                                           std::fabs(factor.value)) /
                 std::fabs(factor.value);
  }
  out.value = value;

  if (!spec.restriction_m) {
    // Primes beyond the bound: sum_{p > P} |factor - 1| <= sum_{k > P} |term_k|.
    const auto tail = tail_bound(spec, prime_bound);
    if (!tail) {
      out.status = SeriesStatus::kTruncated;
      return out;
    }
    rel_error += std::expm1(*tail);
  }
  out.tail_bound = std::fabs(value) * rel_error;
  out.status = *out.tail_bound <= tolerance * std::max(1.0, std::fabs(value))
                   ? SeriesStatus::kConverged
                   : SeriesStatus::kTruncated;
  return out;
}

}  // namespace dseries::theta
