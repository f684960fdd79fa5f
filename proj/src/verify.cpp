#include "dseries/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>

#include "dseries/compensated.hpp"
#include "dseries/dfactorial.hpp"
#include "dseries/errors.hpp"
#include "dseries/qseries.hpp"
#include "dseries/zeta.hpp"

namespace dseries::verify {

using arith::Factorization;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFactorCutoff = 1e-17;

double tolerance_for(const Tolerances& tolerances, std::string_view id, double fallback) {
  const auto it = tolerances.find(id);
  return it == tolerances.end() ? fallback : it->second;
}

std::int64_t as_int(std::uint64_t v) { return static_cast<std::int64_t>(v); }

double relative(double abs_error, double reference) {
  if (abs_error == 0.0) return 0.0;
  if (reference == 0.0 || std::isnan(abs_error)) return std::isnan(abs_error) ? kNaN : kInf;
  return abs_error / std::fabs(reference);
}

/// Fills the value fields and sets pass when abs_error <= tolerance.
void settle(VerificationReport& r, double lhs, double rhs, double tolerance,
            Status on_failure = Status::kFail) {
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_error = std::fabs(lhs - rhs);
  r.rel_error = relative(r.abs_error, rhs);
  r.tolerance = tolerance;
  r.status = r.abs_error <= tolerance ? Status::kPass : on_failure;
}

/// Tracks the worst case of a grid of comparisons under a relative
/// tolerance scaled by max(1, |rhs|).
class WorstCase {
 public:
  explicit WorstCase(double tolerance) : tolerance_(tolerance) {}

  void add(std::vector<Input> witness, double lhs, double rhs) {
    ++count_;
    const double err = std::fabs(lhs - rhs);
    const double score = std::isnan(err) ? kInf : err / std::max(1.0, std::fabs(rhs));
    if (count_ == 1 || score > score_) {
      score_ = score;
      lhs_ = lhs;
      rhs_ = rhs;
      witness_ = std::move(witness);
    }
  }

  std::uint64_t count() const { return count_; }

  VerificationReport report(std::string id, std::vector<Input> inputs,
                            Status on_failure = Status::kFail) const {
    VerificationReport r;
    r.id = std::move(id);
    r.inputs = std::move(inputs);
    for (auto& w : witness_) r.inputs.push_back(w);
    settle(r, lhs_, rhs_, tolerance_ * std::max(1.0, std::fabs(rhs_)), on_failure);
    r.terms_used = count_;
    return r;
  }

 private:
  double tolerance_;
  std::uint64_t count_ = 0;
  double score_ = 0.0;
  double lhs_ = 0.0;
  double rhs_ = 0.0;
  std::vector<Input> witness_;
};

// ---------------------------------------------------------------------------
// Product groups of generic q-identities.

int effective_sign(const ProductGroup& g, bool negative_z) {
  return (negative_z && g.z_weight != 0) ? -g.sign : g.sign;
}

double group_exponent(const ProductGroup& g, double gamma, double z) {
  return g.shift * g.scale * gamma + g.z_weight * z;
}

q::CertifiedValue group_at_prime(const ProductGroup& g, std::uint64_t p, double gamma, double z,
                                 bool negative_z) {
  const double pd = static_cast<double>(p);
  const double base = effective_sign(g, negative_z) * std::pow(pd, -group_exponent(g, gamma, z));
  return q::q_pochhammer_certified(base, std::pow(pd, -g.scale * gamma), g.length);
}

q::CertifiedValue groups_at_prime(const QIdentitySpec& spec, std::uint64_t p) {
  const auto& s = spec.lhs;
  q::CertifiedValue out{1.0, 0.0};
  for (const auto& g : spec.numerator) {
    const auto v = group_at_prime(g, p, s.gamma, s.z, s.negative_z);
    out.value *= v.value;
    out.rel_error_bound += v.rel_error_bound;
  }
  for (const auto& g : spec.denominator) {
    const auto v = group_at_prime(g, p, s.gamma, s.z, s.negative_z);
    if (v.value == 0.0) throw DomainError("q-identity: denominator product vanishes");
    out.value /= v.value;
    out.rel_error_bound += v.rel_error_bound;
  }
  return out;
}

// prod_p (sign p^{-t}; p^{-s g})_n over all primes as zeta products:
// prod_p (1 - p^{-u}) = 1/zeta(u), prod_p (1 + p^{-u}) = zeta(u)/zeta(2u).
zeta::ProductValue group_all_primes(const ProductGroup& g, double gamma, double z,
                                    bool negative_z) {
  const double t = group_exponent(g, gamma, z);
  if (!(t > 1.0)) {
    throw DomainError("q-identity: product over all primes needs every exponent > 1");
  }
  const double step = g.scale * gamma;
  const auto z1 = zeta::zeta_shifted_certified({t / step, step, g.length});
  if (effective_sign(g, negative_z) > 0) {
    return {1.0 / z1.value, z1.rel_error_bound, z1.factors_used};
  }
  const auto z2 = zeta::zeta_shifted_certified({t / step, 2.0 * step, g.length});
  return {z1.value / z2.value, z1.rel_error_bound + z2.rel_error_bound, z1.factors_used};
}

std::vector<std::uint64_t> prime_support(std::uint64_t m, const arith::PrimeTable& table) {
  std::vector<std::uint64_t> out;
  for (const auto& f : table.factorize(m)) out.push_back(f.prime);
  return out;
}

// ---------------------------------------------------------------------------
// Kummer product forms at a single prime, x = p^{-g}.

struct FormValue {
  double value;
  double rel_error;
};

// (y; x)_inf / (y^2; x^2)_inf = 1 / (-y; x)_inf, y = x^{1-b}, evaluated factor
// by factor with the vanishing pair replaced by its limit 1/2.
FormValue regularised_pair(double x, std::int64_t first_exponent) {
  double r = 1.0;
  std::int64_t e = first_exponent;
  std::uint32_t factors = 0;
  while (true) {
    const double u = std::pow(x, static_cast<double>(e));
    if (u < kFactorCutoff) {
      const double tail = u / ((1.0 - x) * (1.0 - u));
      return {r, std::expm1(tail) + 2.0 * kEps * factors};
    }
    r *= (e == 0) ? 0.5 : (1.0 - u) / (1.0 - u * u);
    ++e;
    ++factors;
  }
}

FormValue pochhammer_ratio_form(double x, std::uint32_t a, std::uint32_t b, bool printed) {
  const double y = x * x;
  const double half_shift_a = printed ? 1.0 + a : (1.0 + a) / 2.0;
  double rel = 0.0;
  double value = 1.0;
  auto mul = [&](double base, double q, bool numerator) {
    const auto v = q::q_pochhammer_certified(base, q, std::nullopt);
    value = numerator ? value * v.value : value / v.value;
    rel += v.rel_error_bound;
  };
  // Numerator J(.|1, (1+a)/2, 1+a/2-b; 2g), denominator J(.|1, 1+a-b; g).
  if (!printed) mul(y, y, true);
  mul(std::pow(y, half_shift_a), y, true);
  mul(std::pow(y, 1.0 + a / 2.0 - b), y, true);
  mul(x, x, false);
  mul(std::pow(x, 1.0 + a - b), x, false);
  const FormValue pair = regularised_pair(x, 1 - static_cast<std::int64_t>(b));
  return {value * pair.value, rel + pair.rel_error};
}

// sigma_{-s}(p^e) = (1 - p^{-s(e+1)}) / (1 - p^{-s}) for real e, via its base x_s = p^{-s}.
double sigma_prime_power(double xs, double e) { return (1.0 - std::pow(xs, e + 1.0)) / (1.0 - xs); }

// prod_j of sigma ratios whose per-scale factor counts match, so the product
// converges; the 0/0 pair at j = b-1 is taken as its limit (1+x)/2.
FormValue sigma_product_form(double x, std::uint32_t a, std::uint32_t b) {
  const double y = x * x;
  const double bb = b;
  struct Factor {
    bool numerator;
    bool double_scale;
    double shift;
  };
  const Factor factors[] = {
      {true, false, -bb},
      {false, false, 0.0},
      {true, true, 0.0},
      {true, true, (a - 1.0) / 2.0},
      {true, true, a / 2.0 - bb},
      {false, true, -bb},
      {false, true, (a - bb - 1.0) / 2.0},
      {false, true, (a - bb) / 2.0},
  };
  double value = 1.0;
  for (std::uint32_t j = 0; j < 100'000; ++j) {
    if (j + 1 == b) {
      value *= (1.0 + x) / 2.0;
      for (const auto& f : factors) {
        if (f.shift == -bb) continue;
        const double s = sigma_prime_power(f.double_scale ? y : x, j + f.shift);
        value = f.numerator ? value * s : value / s;
      }
    } else {
      for (const auto& f : factors) {
        const double s = sigma_prime_power(f.double_scale ? y : x, j + f.shift);
        value = f.numerator ? value * s : value / s;
      }
    }
    // Remaining factors (1 - base^{i + shift + 1}), i > j, each move the
    // product by at most u/(1-u), summing geometrically.
    double remainder = 0.0;
    bool all_small = true;
    for (const auto& f : factors) {
      const double base = f.double_scale ? y : x;
      const double exponent = j + 1.0 + f.shift + 1.0;
      if (exponent <= 0.0) {
        all_small = false;
        break;
      }
      const double u = std::pow(base, exponent);
      remainder += u / ((1.0 - u) * (1.0 - base));
    }
    if (all_small && remainder < kFactorCutoff) {
      return {value, std::expm1(remainder) + 16.0 * kEps * (j + 1)};
    }
  }
  throw ResourceError("sigma product form did not settle");
}

double printed_sigma_line(double x, std::uint32_t a, std::uint32_t b, std::uint32_t terms) {
  const double y = x * x;
  double value = 1.0;
  for (std::uint32_t j = 0; j < terms; ++j) {
    value *= sigma_prime_power(x, static_cast<double>(j) - b) *
             sigma_prime_power(y, static_cast<double>(j) + a) *
             sigma_prime_power(y, j + a / 2.0 - b) /
             (sigma_prime_power(x, j) * sigma_prime_power(x, static_cast<double>(j) + a - b) *
              sigma_prime_power(y, static_cast<double>(j) + b));
  }
  return value;
}

void check_kummer_params(std::uint64_t m, std::uint32_t a, std::uint32_t b, double gamma) {
  if (m == 0) throw InvalidInput("D-Kummer: m must be >= 1");
  if (a == 0 || a % 2 != 0) throw InvalidInput("D-Kummer: a must be a positive even integer");
  if (b == 0) throw InvalidInput("D-Kummer: b must be a positive integer");
  if (b > a) throw InvalidInput("D-Kummer: need 1 + a - b >= 1");
  if (!(gamma > 0.0)) throw InvalidInput("D-Kummer: gamma must be > 0");
}

theta::ThetaSpec kummer_series_spec(std::uint32_t a, std::uint32_t b, double gamma) {
  theta::ThetaSpec s;
  s.a_list = {a, b};
  s.b_list = {1 + a - b};
  s.gamma = gamma;
  s.negative_z = true;
  s.z = (1.0 - b) * gamma;
  return s;
}

double kummer_prime_product(std::uint32_t a, std::uint32_t b, double gamma,
                            const Factorization& k) {
  double r = 1.0;
  for (const auto& f : k) {
    const double x = std::pow(static_cast<double>(f.prime), -gamma);
    r *= (1.0 - std::pow(x, a)) * (1.0 - std::pow(x, b)) /
         ((1.0 - x) * (1.0 - std::pow(x, 1.0 + a - b)));
  }
  return r;
}

// Sum_{k<=x} sigma_{e}(k) = sum_{d<=x} d^e floor(x/d): each divisor d is
// sieved into its floor(x/d) multiples at once.
double divisor_power_total(std::uint64_t x, double exponent) {
  CompensatedSum s;
  for (std::uint64_t d = 1; d <= x; ++d) {
    s += std::pow(static_cast<double>(d), exponent) * static_cast<double>(x / d);
  }
  return s.value();
}

}  // namespace

std::string_view to_string(Status status) {
  switch (status) {
    case Status::kPass:
      return "pass";
    case Status::kFail:
      return "fail";
    case Status::kDivergentLhs:
      return "divergent-lhs";
    case Status::kDiscrepancyDocumented:
      return "discrepancy-documented";
    case Status::kQIdentityFailed:
      return "q-identity-failed";
  }
  return "fail";
}

Status status_from_string(std::string_view text) {
  for (auto s : {Status::kPass, Status::kFail, Status::kDivergentLhs,
                 Status::kDiscrepancyDocumented, Status::kQIdentityFailed}) {
    if (to_string(s) == text) return s;
  }
  throw InvalidInput("unknown report status '" + std::string(text) + "'");
}

const InputValue* VerificationReport::input(std::string_view name) const {
  for (const auto& in : inputs) {
    if (in.name == name) return &in.value;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------

VerificationReport verify_d_binomial(std::uint32_t n, double beta, double gamma,
                                     std::uint64_t max_k, const arith::PrimeTable& table,
                                     double tolerance) {
  if (n == 0) throw InvalidInput("D-binomial: n must be >= 1");
  if (!(gamma > 0.0)) throw InvalidInput("D-binomial: gamma must be > 0");
  VerificationReport r;
  r.id = "E1.16";
  r.inputs = {{"n", std::int64_t{n}}, {"beta", beta}, {"gamma", gamma}, {"max_k", as_int(max_k)}};

  theta::ThetaSpec s;
  s.a_list = {n};
  s.gamma = gamma;
  s.z = beta;
  const PartialSum lhs = theta::theta_sum(s, max_k, tolerance, table);
  r.terms_used = lhs.terms_used;
  r.tail_bound = lhs.tail_bound;
  r.inputs.push_back({"series_status", std::string(to_string(lhs.status))});
  if (!(beta > 1.0) || is_divergent(lhs.status) || !lhs.tail_bound) {
    r.lhs = lhs.value;
    r.rhs = r.abs_error = r.rel_error = kNaN;
    r.status = Status::kDivergentLhs;
    return r;
  }
  const auto rhs = zeta::zeta_shifted_certified({beta / gamma, gamma, n});
  settle(r, lhs.value, rhs.value,
         *lhs.tail_bound + rhs.rel_error_bound * std::fabs(rhs.value) + tolerance);
  return r;
}

VerificationReport verify_d_binomial_restricted(std::uint64_t m, std::uint32_t n, double beta,
                                                double gamma, const arith::PrimeTable& table,
                                                double tolerance) {
  if (m == 0 || n == 0) throw InvalidInput("restricted D-binomial: m and n must be >= 1");
  if (!(beta > 0.0) || !(gamma > 0.0)) {
    throw InvalidInput("restricted D-binomial: beta and gamma must be > 0");
  }
  VerificationReport r;
  r.id = "E1.17";
  r.inputs = {{"m", as_int(m)}, {"n", std::int64_t{n}}, {"beta", beta}, {"gamma", gamma}};

  theta::ThetaSpec s;
  s.a_list = {n};
  s.gamma = gamma;
  s.z = beta;
  s.negative_z = true;
  s.restriction_m = m;
  const PartialSum lhs = theta::theta_euler_product(s, 0, tolerance, table);
  r.terms_used = lhs.terms_used;
  r.tail_bound = lhs.tail_bound;
  if (is_divergent(lhs.status) || !lhs.tail_bound) {
    r.lhs = lhs.value;
    r.rhs = r.abs_error = r.rel_error = kNaN;
    r.status = Status::kDivergentLhs;
    if (lhs.offending_prime) r.inputs.push_back({"offending_prime", as_int(*lhs.offending_prime)});
    return r;
  }
  const auto rad = table.factorize(arith::radical(m, table));
  double rhs = 1.0;
  for (std::uint32_t j = 0; j < n; ++j) rhs /= arith::sigma_neg(beta + j * gamma, rad);
  settle(r, lhs.value, rhs, *lhs.tail_bound + tolerance);
  return r;
}

bool d_gauss_admissible(std::uint32_t a, std::uint32_t b, std::uint32_t c, double gamma) {
  if (a == 0 || b == 0 || c == 0 || !(gamma > 0.0)) return false;
  if (c <= a + b) return false;
  const double cd = c;
  return cd * gamma > 1.0 && (cd - a - b) * gamma > 1.0 && (cd - a) * gamma > 1.0 &&
         (cd - b) * gamma > 1.0;
}

VerificationReport verify_d_gauss(std::uint32_t a, std::uint32_t b, std::uint32_t c, double gamma,
                                  std::uint64_t max_k, const arith::PrimeTable& table,
                                  double tolerance) {
  if (!d_gauss_admissible(a, b, c, gamma)) {
    throw InvalidInput("D-Gauss: need c g, (c-a-b) g, (c-a) g, (c-b) g all > 1");
  }
  VerificationReport r;
  r.id = "E1.14";
  r.inputs = {{"a", std::int64_t{a}},
              {"b", std::int64_t{b}},
              {"c", std::int64_t{c}},
              {"gamma", gamma},
              {"max_k", as_int(max_k)}};
  theta::ThetaSpec s;
  s.a_list = {a, b};
  s.b_list = {c};
  s.gamma = gamma;
  s.z = (static_cast<double>(c) - a - b) * gamma;
  r.inputs.push_back({"z", s.z});
  const PartialSum lhs = theta::theta_sum(s, max_k, tolerance, table);
  r.terms_used = lhs.terms_used;
  r.tail_bound = lhs.tail_bound;
  if (is_divergent(lhs.status) || !lhs.tail_bound) {
    r.lhs = lhs.value;
    r.rhs = r.abs_error = r.rel_error = kNaN;
    r.status = Status::kDivergentLhs;
    return r;
  }
  const double cd = c;
  const zeta::ZetaShiftSpec num[] = {{cd, gamma, zeta::kInfinite},
                                     {cd - a - b, gamma, zeta::kInfinite}};
  const zeta::ZetaShiftSpec den[] = {{cd - a, gamma, zeta::kInfinite},
                                     {cd - b, gamma, zeta::kInfinite}};
  const auto zn = zeta::zeta_shifted_multi_certified(num);
  const auto zd = zeta::zeta_shifted_multi_certified(den);
  const double rhs = zn.value / zd.value;
  const double rhs_err = (zn.rel_error_bound + zd.rel_error_bound) * std::fabs(rhs);
  settle(r, lhs.value, rhs, *lhs.tail_bound + rhs_err + tolerance);
  return r;
}

std::vector<VerificationReport> verify_closed_forms(std::uint64_t max_k,
                                                    const std::vector<std::uint32_t>& a_grid,
                                                    const std::vector<double>& gamma_grid,
                                                    const arith::PrimeTable& table,
                                                    const Tolerances& tolerances) {
  using dfact::ClosedForm;
  using dfact::ClosedFormBranch;
  struct Variant {
    const char* id;
    ClosedForm form;
    std::optional<ClosedFormBranch> branch;
    Status on_failure;
  };
  const Variant variants[] = {
      {"E1.23", ClosedForm::kPrime, std::nullopt, Status::kFail},
      {"E1.24", ClosedForm::kSquarefree, std::nullopt, Status::kFail},
      {"E1.25", ClosedForm::kPrimeSquare, ClosedFormBranch::kFirst, Status::kDiscrepancyDocumented},
      {"E1.25", ClosedForm::kPrimeSquare, ClosedFormBranch::kSecond, Status::kDiscrepancyDocumented},
      {"E1.26", ClosedForm::kSquarefreeSquare, ClosedFormBranch::kFirst,
       Status::kDiscrepancyDocumented},
      {"E1.26", ClosedForm::kSquarefreeSquare, ClosedFormBranch::kSecond,
       Status::kDiscrepancyDocumented},
  };
  std::vector<VerificationReport> out;
  for (const auto& v : variants) {
    const double tol = tolerance_for(tolerances, v.id, 1e-12);
    for (const auto a : a_grid) {
      for (const double g : gamma_grid) {
        WorstCase worst(tol);
        for (std::uint64_t k = 2; k <= max_k; ++k) {
          const auto f = table.factorize(k);
          if (!dfact::closed_form_admissible(v.form, f)) continue;
          const double closed = dfact::d_closed_form(a, g, f, v.form,
                                                     v.branch.value_or(ClosedFormBranch::kFirst));
          worst.add({{"witness_k", as_int(k)}}, closed, dfact::d_shifted_divisor_ratio(a, g, f));
        }
        if (worst.count() == 0) continue;
        std::vector<Input> inputs{{"a", std::int64_t{a}}, {"gamma", g}, {"max_k", as_int(max_k)}};
        if (v.branch) {
          inputs.push_back(
              {"branch", std::string(*v.branch == ClosedFormBranch::kFirst ? "first" : "second")});
        }
        out.push_back(worst.report(v.id, std::move(inputs), v.on_failure));
      }
    }
  }
  return out;
}

std::vector<VerificationReport> verify_convolution(std::uint64_t max_k,
                                                   const std::vector<std::uint32_t>& a_grid,
                                                   const std::vector<double>& gamma_grid,
                                                   const arith::PrimeTable& table,
                                                   const Tolerances& tolerances) {
  std::vector<VerificationReport> out;
  for (const auto sign : {dfact::ConvolutionSign::kCorrected, dfact::ConvolutionSign::kPrinted}) {
    const bool printed = sign == dfact::ConvolutionSign::kPrinted;
    const char* id = printed ? "E1.28-printed" : "E1.28";
    const double tol = tolerance_for(tolerances, id, 1e-11);
    for (const auto a : a_grid) {
      for (const double g : gamma_grid) {
        WorstCase worst(tol);
        for (std::uint64_t k = 1; k <= max_k; ++k) {
          const auto f = table.factorize(k);
          worst.add({{"witness_k", as_int(k)}}, dfact::d_convolution(a, g, f, sign),
                    dfact::d_shifted_factorial(a, g, f));
        }
        out.push_back(worst.report(
            id, {{"a", std::int64_t{a}}, {"gamma", g}, {"max_k", as_int(max_k)}},
            printed ? Status::kDiscrepancyDocumented : Status::kFail));
      }
    }
  }
  return out;
}

std::vector<VerificationReport> verify_factorial_forms(std::uint64_t max_k,
                                                       const std::vector<std::uint32_t>& a_grid,
                                                       const std::vector<double>& gamma_grid,
                                                       const arith::PrimeTable& table,
                                                       const Tolerances& tolerances) {
  using dfact::ScalingExponent;
  struct Form {
    const char* id;
    Status on_failure;
  };
  const Form forms[] = {{"E1.6", Status::kFail},
                        {"E1.10", Status::kFail},
                        {"E1.10-printed", Status::kDiscrepancyDocumented},
                        {"E1.11", Status::kFail},
                        {"E1.11-printed", Status::kDiscrepancyDocumented}};
  std::vector<VerificationReport> out;
  for (const auto a : a_grid) {
    for (const double g : gamma_grid) {
      std::vector<WorstCase> worst;
      for (const auto& f : forms) worst.emplace_back(tolerance_for(tolerances, f.id, 1e-11));
      for (std::uint64_t k = 1; k <= max_k; ++k) {
        const auto f = table.factorize(k);
        const double oracle = dfact::d_shifted_divisor_ratio(a, g, f);
        const std::vector<Input> w{{"witness_k", as_int(k)}};
        worst[0].add(w, dfact::d_shifted_factorial(a, g, f), oracle);
        worst[1].add(w, dfact::d_shifted_positive_ratio(a, g, f, ScalingExponent::kCorrected),
                     oracle);
        worst[2].add(w, dfact::d_shifted_positive_ratio(a, g, f, ScalingExponent::kPrinted),
                     oracle);
        worst[3].add(w, dfact::d_shifted_scaled(a, g, f, ScalingExponent::kCorrected), oracle);
        worst[4].add(w, dfact::d_shifted_scaled(a, g, f, ScalingExponent::kPrinted), oracle);
      }
      for (std::size_t i = 0; i < worst.size(); ++i) {
        out.push_back(worst[i].report(
            forms[i].id, {{"a", std::int64_t{a}}, {"gamma", g}, {"max_k", as_int(max_k)}},
            forms[i].on_failure));
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [&](const auto& x, const auto& y) {
    auto rank = [&](const std::string& id) {
      for (std::size_t i = 0; i < std::size(forms); ++i) {
        if (id == forms[i].id) return i;
      }
      return std::size(forms);
    };
    return rank(x.id) < rank(y.id);
  });
  return out;
}

// ---------------------------------------------------------------------------

QIdentitySpec q_binomial_identity(std::uint32_t n, double beta, double gamma, bool negative_z) {
  QIdentitySpec s;
  s.name = "q-binomial";
  s.lhs.a_list = {n};
  s.lhs.gamma = gamma;
  s.lhs.z = beta;
  s.lhs.negative_z = negative_z;
  // (a z; q)_inf / (z; q)_inf with a -> p^{-n g}, z -> +-p^{-beta}.
  s.numerator = {{1, static_cast<double>(n), 1, 1, std::nullopt}};
  s.denominator = {{1, 0.0, 1, 1, std::nullopt}};
  return s;
}

QIdentitySpec q_gauss_identity(std::uint32_t a, std::uint32_t b, std::uint32_t c, double gamma) {
  QIdentitySpec s;
  s.name = "q-gauss";
  s.lhs.a_list = {a, b};
  s.lhs.b_list = {c};
  s.lhs.gamma = gamma;
  s.lhs.z = (static_cast<double>(c) - a - b) * gamma;
  const double cd = c;
  // (c/a, c/b; q)_inf / (c, c/(ab); q)_inf
  s.numerator = {{1, cd - a, 0, 1, std::nullopt}, {1, cd - b, 0, 1, std::nullopt}};
  s.denominator = {{1, cd, 0, 1, std::nullopt}, {1, cd - a - b, 0, 1, std::nullopt}};
  return s;
}

QIdentitySpec q_kummer_identity(std::uint32_t a, std::uint32_t b, double gamma) {
  QIdentitySpec s;
  s.name = "q-kummer";
  s.lhs.a_list = {a, b};
  s.lhs.b_list = {1 + a - b};
  s.lhs.gamma = gamma;
  s.lhs.negative_z = true;
  s.lhs.z = (1.0 - b) * gamma;
  const double ad = a;
  const double bd = b;
  // (-q; q)_inf (aq, aq^2/b^2; q^2)_inf / (aq/b, -q/b; q)_inf
  s.numerator = {{-1, 1.0, 0, 1, std::nullopt},
                 {1, (ad + 1.0) / 2.0, 0, 2, std::nullopt},
                 {1, (ad + 2.0 - 2.0 * bd) / 2.0, 0, 2, std::nullopt}};
  s.denominator = {{1, 1.0 + ad - bd, 0, 1, std::nullopt}, {-1, 1.0 - bd, 0, 1, std::nullopt}};
  return s;
}

VerificationReport verify_transform(const QIdentitySpec& spec, const TransformOptions& options,
                                    const arith::PrimeTable& table) {
  theta::ThetaSpec lhs_spec = spec.lhs;
  lhs_spec.restriction_m = options.restriction_m;
  lhs_spec.validate();

  VerificationReport r;
  r.id = options.id;
  r.inputs = {{"identity", spec.name},
              {"mode", std::string(options.restriction_m ? "restricted" : "all-primes")},
              {"spec", theta::format_theta_spec(lhs_spec)},
              {"gamma", lhs_spec.gamma},
              {"z", lhs_spec.z}};
  if (options.restriction_m) r.inputs.push_back({"m", as_int(*options.restriction_m)});

  std::vector<std::uint64_t> primes;
  if (options.restriction_m) {
    primes = prime_support(*options.restriction_m, table);
  } else {
    const auto span = table.primes_up_to(options.check_prime_bound);
    primes.assign(span.begin(), span.end());
  }

  double restricted_rhs = 1.0;
  double restricted_rel = 0.0;
  for (const auto p : primes) {
    const PartialSum factor = theta::theta_prime_factor(lhs_spec, p);
    if (is_divergent(factor.status) || !factor.tail_bound) {
      r.lhs = factor.value;
      r.rhs = r.abs_error = r.rel_error = kNaN;
      r.status = Status::kDivergentLhs;
      r.terms_used = factor.terms_used;
      r.inputs.push_back({"offending_prime", as_int(p)});
      r.inputs.push_back({"series_status", std::string(to_string(factor.status))});
      return r;
    }
    const q::CertifiedValue rhs_p = groups_at_prime(spec, p);
    const double err = std::fabs(factor.value - rhs_p.value);
    const double tol_p = options.q_tolerance * std::max(1.0, std::fabs(rhs_p.value)) +
                         *factor.tail_bound + rhs_p.rel_error_bound * std::fabs(rhs_p.value);
    if (!(err <= tol_p)) {
      settle(r, factor.value, rhs_p.value, tol_p, Status::kQIdentityFailed);
      r.status = Status::kQIdentityFailed;
      r.inputs.push_back({"offending_prime", as_int(p)});
      return r;
    }
    restricted_rhs *= rhs_p.value;
    restricted_rel += rhs_p.rel_error_bound;
  }
  r.inputs.push_back({"primes_checked", as_int(primes.size())});

  const PartialSum lhs = theta::theta_sum(lhs_spec, options.max_k, options.tolerance, table);
  r.terms_used = lhs.terms_used;
  r.tail_bound = lhs.tail_bound;
  r.inputs.push_back({"series_status", std::string(to_string(lhs.status))});
  if (is_divergent(lhs.status) || !lhs.tail_bound) {
    r.lhs = lhs.value;
    r.rhs = r.abs_error = r.rel_error = kNaN;
    r.status = Status::kDivergentLhs;
    return r;
  }

  double rhs = restricted_rhs;
  double rhs_rel = restricted_rel;
  if (!options.restriction_m) {
    rhs = 1.0;
    rhs_rel = 0.0;
    for (const auto& g : spec.numerator) {
      const auto v = group_all_primes(g, lhs_spec.gamma, lhs_spec.z, lhs_spec.negative_z);
      rhs *= v.value;
      rhs_rel += v.rel_error_bound;
    }
    for (const auto& g : spec.denominator) {
      const auto v = group_all_primes(g, lhs_spec.gamma, lhs_spec.z, lhs_spec.negative_z);
      rhs /= v.value;
      rhs_rel += v.rel_error_bound;
    }
  }
  settle(r, lhs.value, rhs, *lhs.tail_bound + rhs_rel * std::fabs(rhs) + options.tolerance);
  return r;
}

// ---------------------------------------------------------------------------

VerificationReport verify_d_kummer_restricted(std::uint64_t m, std::uint32_t a, std::uint32_t b,
                                              double gamma, std::uint64_t series_max_k,
                                              const arith::PrimeTable& table, double tolerance) {
  check_kummer_params(m, a, b, gamma);
  double j_ratio = 1.0;
  double sigma_product = 1.0;
  double q_kummer = 1.0;
  double rel = 0.0;
  for (const auto p : prime_support(m, table)) {
    const double x = std::pow(static_cast<double>(p), -gamma);
    const FormValue f1 = pochhammer_ratio_form(x, a, b, false);
    const FormValue f2 = sigma_product_form(x, a, b);
    const q::CertifiedValue f3 = q::q_kummer_rhs_certified(std::pow(x, a), std::pow(x, b), x);
    j_ratio *= f1.value;
    sigma_product *= f2.value;
    q_kummer *= f3.value;
    rel += f1.rel_error + f2.rel_error + f3.rel_error_bound;
  }

  VerificationReport r;
  r.id = "E4.10";
  r.inputs = {{"m", as_int(m)},
              {"a", std::int64_t{a}},
              {"b", std::int64_t{b}},
              {"gamma", gamma},
              {"form_j_ratio", j_ratio},
              {"form_sigma_product", sigma_product},
              {"form_q_kummer", q_kummer}};

  theta::ThetaSpec series = kummer_series_spec(a, b, gamma);
  series.restriction_m = m;
  const PartialSum direct = theta::theta_sum(series, series_max_k, tolerance, table);
  r.inputs.push_back({"series_status", std::string(to_string(direct.status))});
  r.inputs.push_back({"series_value", direct.value});
  r.inputs.push_back({"series_terms", as_int(direct.terms_used)});

  settle(r, j_ratio, q_kummer,
         tolerance * std::max(1.0, std::fabs(q_kummer)) + rel * std::fabs(q_kummer));
  const double pairwise = std::max({std::fabs(j_ratio - sigma_product),
                                    std::fabs(j_ratio - q_kummer),
                                    std::fabs(sigma_product - q_kummer)});
  r.abs_error = pairwise;
  r.rel_error = relative(pairwise, q_kummer);
  r.status = pairwise <= r.tolerance ? Status::kPass : Status::kFail;
  return r;
}

VerificationReport verify_d_kummer_printed(std::uint64_t m, std::uint32_t a, std::uint32_t b,
                                           double gamma, const arith::PrimeTable& table,
                                           double tolerance) {
  check_kummer_params(m, a, b, gamma);
  constexpr std::uint32_t kPrintedTerms = 64;
  double line1 = 1.0;
  double line2 = 1.0;
  double q_kummer = 1.0;
  double rel = 0.0;
  for (const auto p : prime_support(m, table)) {
    const double x = std::pow(static_cast<double>(p), -gamma);
    const FormValue f1 = pochhammer_ratio_form(x, a, b, true);
    const q::CertifiedValue f3 = q::q_kummer_rhs_certified(std::pow(x, a), std::pow(x, b), x);
    line1 *= f1.value;
    line2 *= printed_sigma_line(x, a, b, kPrintedTerms);
    q_kummer *= f3.value;
    rel += f1.rel_error + f3.rel_error_bound;
  }
  VerificationReport r;
  r.id = "E4.10-printed";
  r.inputs = {{"m", as_int(m)},
              {"a", std::int64_t{a}},
              {"b", std::int64_t{b}},
              {"gamma", gamma},
              {"printed_j_ratio", line1},
              {"printed_sigma_product_64_terms", line2},
              {"form_q_kummer", q_kummer}};
  settle(r, line1, q_kummer,
         tolerance * std::max(1.0, std::fabs(q_kummer)) + rel * std::fabs(q_kummer),
         Status::kDiscrepancyDocumented);
  return r;
}

double kummer_coefficient(std::uint32_t a, std::uint32_t b, double gamma, std::uint64_t k,
                          const arith::PrimeTable& table) {
  if (a == 0 || b == 0 || b > a) throw InvalidInput("kummer_coefficient: need a, b >= 1, 1+a-b >= 1");
  const auto f = table.factorize(k);
  if (!f.is_squarefree()) throw DomainError("kummer_coefficient: k must be squarefree");
  const double product = kummer_prime_product(a, b, gamma, f);
  theta::ThetaSpec s;
  s.a_list = {a, b};
  s.b_list = {1 + a - b};
  s.gamma = gamma;
  const double coefficient = theta::theta_coefficient(s, f);
  if (!(std::fabs(coefficient - product) <= 1e-12 * std::max(1.0, std::fabs(product)))) {
    throw Error("kummer_coefficient: coefficient and prime product disagree");
  }
  return product;
}

VerificationReport verify_kummer_coefficients(std::uint32_t a, std::uint32_t b, double gamma,
                                              std::uint64_t max_k, const arith::PrimeTable& table,
                                              double tolerance) {
  if (a == 0 || b == 0 || b > a) throw InvalidInput("Kummer coefficients: need 1+a-b >= 1");
  theta::ThetaSpec s;
  s.a_list = {a, b};
  s.b_list = {1 + a - b};
  s.gamma = gamma;
  WorstCase worst(tolerance);
  for (std::uint64_t k = 1; k <= max_k; ++k) {
    const auto f = table.factorize(k);
    if (!f.is_squarefree()) continue;
    worst.add({{"witness_k", as_int(k)}}, theta::theta_coefficient(s, f),
              kummer_prime_product(a, b, gamma, f));
  }
  return worst.report("E4.11", {{"a", std::int64_t{a}},
                                {"b", std::int64_t{b}},
                                {"gamma", gamma},
                                {"max_k", as_int(max_k)}});
}

VerificationReport verify_kummer_unit(std::string id, std::uint32_t a, std::uint32_t b,
                                      double gamma, std::uint64_t max_k,
                                      const arith::PrimeTable& table, double tolerance) {
  if (a == 0 || b == 0 || b > a) throw InvalidInput("Kummer coefficients: need 1+a-b >= 1");
  theta::ThetaSpec s;
  s.a_list = {a, b};
  s.b_list = {1 + a - b};
  s.gamma = gamma;
  WorstCase worst(tolerance);
  for (std::uint64_t k = 1; k <= max_k; ++k) {
    const auto f = table.factorize(k);
    if (!f.is_squarefree()) continue;
    worst.add({{"witness_k", as_int(k)}, {"route", std::string("coefficient")}},
              theta::theta_coefficient(s, f), 1.0);
    worst.add({{"witness_k", as_int(k)}, {"route", std::string("prime-product")}},
              kummer_prime_product(a, b, gamma, f), 1.0);
  }
  return worst.report(std::move(id), {{"a", std::int64_t{a}},
                                      {"b", std::int64_t{b}},
                                      {"gamma", gamma},
                                      {"max_k", as_int(max_k)}});
}

VerificationReport verify_kummer_divergence(std::uint32_t a, std::uint32_t b, double gamma,
                                            std::uint64_t max_k, const arith::PrimeTable& table) {
  if (a == 0 || b == 0 || b > a) throw InvalidInput("Kummer series: need 1+a-b >= 1");
  const theta::ThetaSpec s = kummer_series_spec(a, b, gamma);
  const PartialSum sum = theta::theta_sum(s, max_k, 1e-8, table);
  VerificationReport r;
  r.id = "E4.5";
  r.inputs = {{"a", std::int64_t{a}},
              {"b", std::int64_t{b}},
              {"gamma", gamma},
              {"z", s.z},
              {"max_k", as_int(max_k)},
              {"series_status", std::string(to_string(sum.status))},
              {"last_term", sum.last_term}};
  r.lhs = sum.value;
  r.rhs = r.abs_error = r.rel_error = kNaN;
  r.terms_used = sum.terms_used;
  r.tail_bound = sum.tail_bound;
  r.status = sum.status == SeriesStatus::kDivergentOscillating ? Status::kDivergentLhs
                                                               : Status::kFail;
  return r;
}

VerificationReport average_order_check(double gamma, std::uint64_t x, AverageSign sign,
                                       double tolerance) {
  if (!(gamma > 0.0)) throw InvalidInput("average order: gamma must be > 0");
  if (x < 1000) throw InvalidInput("average order: x must be >= 1000");
  const bool positive = sign == AverageSign::kPositive;
  auto leading = [&](double xv) {
    if (!positive) return zeta::riemann_zeta(gamma + 1.0) * xv;
    if (gamma == 1.0) return 0.5 * zeta::riemann_zeta(2.0) * xv * xv;
    return zeta::riemann_zeta(gamma + 1.0) * std::pow(xv, gamma + 1.0) / (gamma + 1.0);
  };
  const double exponent = positive ? gamma : -gamma;
  const double total = divisor_power_total(x, exponent);
  const double lead = leading(static_cast<double>(x));
  const std::uint64_t x_prev = x / 10;
  const double dev = std::fabs(total / lead - 1.0);
  const double dev_prev =
      std::fabs(divisor_power_total(x_prev, exponent) / leading(static_cast<double>(x_prev)) - 1.0);
  const double decay = std::log10(dev_prev / dev);
  // Leading exponent minus error exponent, min(gamma, 1) in every case.
  const double expected_decay = std::min(gamma, 1.0);

  VerificationReport r;
  r.id = positive ? "E4.7" : "E4.8";
  r.inputs = {{"gamma", gamma},
              {"x", as_int(x)},
              {"sign", std::string(positive ? "positive" : "negative")},
              {"ratio", total / lead},
              {"deviation", dev},
              {"deviation_x_over_10", dev_prev},
              {"decay_per_decade", decay},
              {"expected_decay_per_decade", expected_decay}};
  settle(r, total, lead, tolerance * lead);
  r.terms_used = x;
  if (r.status == Status::kPass && !(dev < dev_prev && decay >= expected_decay - 0.25)) {
    r.status = Status::kFail;
  }
  return r;
}

// ---------------------------------------------------------------------------

std::vector<VerificationReport> verify_q_binomial(double tolerance) {
  std::vector<VerificationReport> out;
  const double grid[] = {0.1, 0.3, 0.5, 0.7};
  for (const double qq : grid) {
    WorstCase worst(tolerance);
    std::uint64_t terms = 0;
    for (const double a : grid) {
      for (const double z : grid) {
        const PartialSum lhs = q::phi_partial_sum({{a}, {}, qq, z});
        const auto num = q::q_pochhammer_certified(a * z, qq, std::nullopt);
        const auto den = q::q_pochhammer_certified(z, qq, std::nullopt);
        terms += lhs.terms_used;
        worst.add({{"witness_a", a}, {"witness_z", z}},
                  lhs.tail_bound ? lhs.value : kNaN, num.value / den.value);
      }
    }
    auto r = worst.report("QBIN", {{"q", qq}});
    r.terms_used = terms;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<VerificationReport> verify_q_gauss(double tolerance) {
  std::vector<VerificationReport> out;
  for (const double qq : {0.2, 0.5}) {
    WorstCase worst(tolerance);
    std::uint64_t terms = 0;
    for (const double a : {0.6, 0.75, 0.9}) {
      for (const double b : {0.6, 0.75, 0.9}) {
        for (const double c : {0.1, 0.2, 0.3}) {
          const PartialSum lhs = q::phi_partial_sum({{a, b}, {c}, qq, c / (a * b)});
          const double rhs = q::q_pochhammer(c / a, qq, std::nullopt) *
                             q::q_pochhammer(c / b, qq, std::nullopt) /
                             (q::q_pochhammer(c, qq, std::nullopt) *
                              q::q_pochhammer(c / (a * b), qq, std::nullopt));
          terms += lhs.terms_used;
          worst.add({{"witness_a", a}, {"witness_b", b}, {"witness_c", c}},
                    lhs.tail_bound ? lhs.value : kNaN, rhs);
        }
      }
    }
    auto r = worst.report("E1.13", {{"q", qq}});
    r.terms_used = terms;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<VerificationReport> verify_q_kummer(double tolerance) {
  std::vector<VerificationReport> out;
  for (const double qq : {0.2, 0.3}) {
    WorstCase worst(tolerance);
    std::uint64_t terms = 0;
    for (const double a : {0.0, 0.25, 0.5}) {
      for (const double b : {0.8, 0.9}) {
        const PartialSum lhs = q::phi_partial_sum(q::q_kummer_lhs_spec(a, b, qq));
        terms += lhs.terms_used;
        worst.add({{"witness_a", a}, {"witness_b", b}}, lhs.tail_bound ? lhs.value : kNaN,
                  q::q_kummer_rhs(a, b, qq));
      }
    }
    auto r = worst.report("E4.2", {{"q", qq}});
    r.terms_used = terms;
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& known_ids() {
  static const std::vector<std::string> ids = {
      "E1.6",  "E1.10", "E1.10-printed", "E1.11", "E1.11-printed", "E1.13", "E1.14",
      "E1.16", "E1.17", "E1.23",         "E1.24", "E1.25",         "E1.26", "E1.28",
      "E1.28-printed",  "T3.1",          "E4.2",  "E4.3",          "E4.4",  "E4.5",
      "E4.7",  "E4.8",  "E4.10",         "E4.10-printed",          "E4.11", "E4.12",
      "E4.15", "QBIN"};
  return ids;
}

const std::vector<std::string>& default_expected() {
  static const std::vector<std::string> ids = {"E1.10-printed", "E1.11-printed", "E1.25",
                                               "E1.26",         "E1.28-printed", "E4.3",
                                               "E4.4",          "E4.5",          "E4.10-printed"};
  return ids;
}

void RunConfig::validate() const {
  for (const auto v : {sieve_bound, max_k, gauss_max_k, divergence_max_k, prime_bound,
                       transform_check_bound, forms_max_k, convolution_max_k, closed_form_max_k,
                       coefficient_max_k}) {
    if (v == 0) throw InvalidInput("run config: all bounds must be positive");
  }
  if (prime_bound > sieve_bound || transform_check_bound > sieve_bound) {
    throw InvalidInput("run config: prime bounds must not exceed the sieve bound");
  }
  const auto& known = known_ids();
  for (const auto* list : {&ids, &expected}) {
    for (const auto& id : *list) {
      if (std::find(known.begin(), known.end(), id) == known.end()) {
        throw InvalidInput("unknown identity id '" + id + "'");
      }
    }
  }
  for (const auto& [id, tol] : tolerances) {
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      throw InvalidInput("unknown identity id '" + id + "' in tolerances");
    }
    if (!(tol > 0.0)) throw InvalidInput("run config: tolerances must be positive");
  }
  for (const double g : gamma_grid) {
    if (!(g > 0.0)) throw InvalidInput("run config: gamma values must be > 0");
  }
}

namespace {

template <typename T>
std::vector<T> or_default(const std::vector<T>& grid, std::vector<T> fallback) {
  return grid.empty() ? fallback : grid;
}

class SuiteRunner {
 public:
  SuiteRunner(const RunConfig& config, const arith::PrimeTable& table)
      : config_(config), table_(table) {}

  bool selected(std::string_view id) const {
    return config_.ids.empty() ||
           std::find(config_.ids.begin(), config_.ids.end(), id) != config_.ids.end();
  }

  double tol(std::string_view id, double fallback) const {
    return tolerance_for(config_.tolerances, id, fallback);
  }

  /// Runs one check; library errors become a fail report carrying the message.
  template <typename F>
  void run(std::string_view id, std::vector<Input> context, F&& check) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<VerificationReport> produced;
    try {
      if constexpr (std::is_same_v<std::invoke_result_t<F>, VerificationReport>) {
        produced.push_back(check());
      } else {
        produced = check();
      }
    } catch (const InvalidInput&) {
      throw;
    } catch (const Error& e) {
      VerificationReport r;
      r.id = std::string(id);
      r.inputs = std::move(context);
      r.inputs.push_back({"error", std::string(e.what())});
      r.lhs = r.rhs = r.abs_error = r.rel_error = kNaN;
      r.status = Status::kFail;
      produced.push_back(std::move(r));
    }
    const double elapsed =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    for (auto& r : produced) {
      if (!selected(r.id)) continue;
      if (config_.record_timing) r.runtime_ms = elapsed;
      reports_.push_back(std::move(r));
    }
  }

  std::vector<VerificationReport> execute() {
    const auto& c = config_;
    const auto gammas = [&](std::vector<double> d) { return or_default(c.gamma_grid, d); };

    if (selected("E1.6") || selected("E1.10") || selected("E1.10-printed") ||
        selected("E1.11") || selected("E1.11-printed")) {
      run("E1.6", {}, [&] {
        return verify_factorial_forms(c.forms_max_k, or_default(c.a_grid, {1, 2, 3, 4, 5}),
                                      gammas({0.5, 1.0, 2.0}), table_, c.tolerances);
      });
    }
    if (selected("E1.13")) run("E1.13", {}, [&] { return verify_q_gauss(tol("E1.13", 1e-9)); });
    if (selected("E1.14")) run_gauss();
    if (selected("E1.16")) {
      for (const auto n : or_default(c.n_grid, {1, 2, 3, 4})) {
        for (const double beta : or_default(c.beta_grid, {2.0})) {
          for (const double g : gammas({1.0})) {
            run("E1.16", {{"n", std::int64_t{n}}, {"beta", beta}, {"gamma", g}}, [&] {
              return verify_d_binomial(n, beta, g, c.max_k, table_, tol("E1.16", 1e-10));
            });
          }
        }
      }
    }
    if (selected("E1.17")) {
      for (const auto m : or_default(c.m_grid, {2, 3, 6, 12, 30})) {
        for (const auto n : or_default(c.n_grid, {1, 2, 3})) {
          for (const double beta : or_default(c.beta_grid, {2.0})) {
            for (const double g : gammas({1.0})) {
              run("E1.17", {{"m", as_int(m)}, {"n", std::int64_t{n}}}, [&] {
                return verify_d_binomial_restricted(m, n, beta, g, table_, tol("E1.17", 1e-10));
              });
            }
          }
        }
      }
    }
    if (selected("E1.23") || selected("E1.24") || selected("E1.25") || selected("E1.26")) {
      run("E1.23", {}, [&] {
        return verify_closed_forms(c.closed_form_max_k, or_default(c.a_grid, {1, 2, 3, 4, 5, 6}),
                                   gammas({0.5, 1.0, 2.0}), table_, c.tolerances);
      });
    }
    if (selected("E1.28") || selected("E1.28-printed")) {
      run("E1.28", {}, [&] {
        return verify_convolution(c.convolution_max_k, or_default(c.a_grid, {1, 2, 3, 4}),
                                  gammas({0.5, 1.0, 2.0}), table_, c.tolerances);
      });
    }
    if (selected("T3.1")) run_transforms();
    if (selected("E4.2")) run("E4.2", {}, [&] { return verify_q_kummer(tol("E4.2", 1e-8)); });
    if (selected("E4.3")) {
      for (const auto a : or_default(c.a_grid, {2, 4, 6})) {
        for (const auto b : or_default(c.b_grid, {1, 2})) {
          if (b > a) continue;
          for (const double g : gammas({1.0})) {
            run("E4.3", {{"a", std::int64_t{a}}, {"b", std::int64_t{b}}}, [&] {
              TransformOptions o;
              o.id = "E4.3";
              o.max_k = c.max_k;
              o.check_prime_bound = c.transform_check_bound;
              o.tolerance = tol("E4.3", 1e-10);
              return verify_transform(q_kummer_identity(a, b, g), o, table_);
            });
          }
        }
      }
    }
    if (selected("E4.4")) {
      for (const auto m : or_default(c.m_grid, {2, 6, 12})) {
        for (const auto a : or_default(c.a_grid, {4})) {
          for (const auto b : or_default(c.b_grid, {1, 2})) {
            if (b > a) continue;
            for (const double g : gammas({1.0})) {
              run("E4.4", {{"m", as_int(m)}, {"a", std::int64_t{a}}, {"b", std::int64_t{b}}}, [&] {
                TransformOptions o;
                o.id = "E4.4";
                o.restriction_m = m;
                o.max_k = c.max_k;
                o.tolerance = tol("E4.4", 1e-10);
                return verify_transform(q_kummer_identity(a, b, g), o, table_);
              });
            }
          }
        }
      }
    }
    if (selected("E4.5")) {
      for (const auto a : or_default(c.a_grid, {2, 4, 6})) {
        for (const auto b : or_default(c.b_grid, {1, 2})) {
          if (b > a) continue;
          for (const double g : gammas({0.5, 1.0})) {
            run("E4.5", {{"a", std::int64_t{a}}, {"b", std::int64_t{b}}, {"gamma", g}}, [&] {
              return verify_kummer_divergence(a, b, g, c.divergence_max_k, table_);
            });
          }
        }
      }
    }
    const auto xs = or_default(c.x_grid, {10'000, 100'000, 1'000'000});
    if (selected("E4.7")) {
      for (const double g : gammas({1.0})) {
        for (const auto x : xs) {
          run("E4.7", {{"gamma", g}, {"x", as_int(x)}}, [&] {
            return average_order_check(g, x, AverageSign::kPositive, tol("E4.7", 1e-3));
          });
        }
      }
    }
    if (selected("E4.8")) {
      for (const double g : gammas({1.0, 2.0})) {
        for (const auto x : xs) {
          run("E4.8", {{"gamma", g}, {"x", as_int(x)}}, [&] {
            return average_order_check(g, x, AverageSign::kNegative, tol("E4.8", 1e-3));
          });
        }
      }
    }
    if (selected("E4.10") || selected("E4.10-printed")) {
      for (const auto m : or_default(c.m_grid, {2, 6, 12})) {
        for (const auto a : or_default(c.a_grid, {2, 4, 6})) {
          for (const auto b : or_default(c.b_grid, {1, 2})) {
            if (a % 2 != 0 || b > a) continue;
            for (const double g : gammas({1.0})) {
              const std::vector<Input> ctx{
                  {"m", as_int(m)}, {"a", std::int64_t{a}}, {"b", std::int64_t{b}}};
              run("E4.10", ctx, [&] {
                return verify_d_kummer_restricted(m, a, b, g, c.max_k, table_,
                                                  tol("E4.10", 1e-9));
              });
              run("E4.10-printed", ctx, [&] {
                return verify_d_kummer_printed(m, a, b, g, table_, tol("E4.10-printed", 1e-9));
              });
            }
          }
        }
      }
    }
    if (selected("E4.11")) {
      std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
      if (!c.a_grid.empty() && !c.b_grid.empty()) {
        for (const auto a : c.a_grid) {
          for (const auto b : c.b_grid) {
            if (b <= a) pairs.emplace_back(a, b);
          }
        }
      } else {
        pairs = {{2, 1}, {4, 2}, {4, 3}, {6, 1}, {6, 2}};
      }
      for (const auto& [a, b] : pairs) {
        for (const double g : gammas({1.0})) {
          run("E4.11", {{"a", std::int64_t{a}}, {"b", std::int64_t{b}}}, [&] {
            return verify_kummer_coefficients(a, b, g, c.coefficient_max_k, table_,
                                              tol("E4.11", 1e-12));
          });
        }
      }
    }
    for (const auto& [id, a] : {std::pair{"E4.12", 2u}, std::pair{"E4.15", 6u}}) {
      if (!selected(id)) continue;
      for (const double g : gammas({0.5, 1.0, 2.0})) {
        run(id, {{"gamma", g}}, [&] {
          return verify_kummer_unit(id, a, 1, g, c.coefficient_max_k, table_, tol(id, 1e-14));
        });
      }
    }
    if (selected("QBIN")) run("QBIN", {}, [&] { return verify_q_binomial(tol("QBIN", 1e-9)); });
    return std::move(reports_);
  }

 private:
  void run_gauss() {
    const auto& c = config_;
    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, double>> tuples;
    if (!c.a_grid.empty() && !c.b_grid.empty() && !c.c_grid.empty()) {
      for (const auto a : c.a_grid) {
        for (const auto b : c.b_grid) {
          for (const auto cc : c.c_grid) {
            for (const double g : or_default(c.gamma_grid, {1.0})) {
              if (d_gauss_admissible(a, b, cc, g)) tuples.emplace_back(a, b, cc, g);
            }
          }
        }
      }
    } else {
      tuples = {{1, 1, 3, 2.0}, {1, 1, 4, 1.0}, {1, 2, 6, 1.0},
                {2, 2, 7, 1.0}, {1, 3, 7, 1.0}, {2, 1, 5, 1.5}};
    }
    for (const auto& [a, b, cc, g] : tuples) {
      run("E1.14",
          {{"a", std::int64_t{a}}, {"b", std::int64_t{b}}, {"c", std::int64_t{cc}}, {"gamma", g}},
          [&] { return verify_d_gauss(a, b, cc, g, c.gauss_max_k, table_, tol("E1.14", 1e-12)); });
    }
  }

  void run_transforms() {
    const auto& c = config_;
    const double t = tol("T3.1", 1e-10);
    constexpr std::uint64_t kSmoothBound = 1'000'000'000'000'000'000ULL;
    for (const auto n : or_default(c.n_grid, {2})) {
      for (const double beta : or_default(c.beta_grid, {2.0})) {
        for (const double g : or_default(c.gamma_grid, {1.0})) {
          for (const auto m : or_default(c.m_grid, {2, 6})) {
            run("T3.1", {{"identity", std::string("q-binomial")}, {"m", as_int(m)}}, [&] {
              TransformOptions o;
              o.restriction_m = m;
              o.max_k = kSmoothBound;
              o.tolerance = t;
              return verify_transform(q_binomial_identity(n, beta, g, true), o, table_);
            });
          }
          run("T3.1", {{"identity", std::string("q-binomial")}}, [&] {
            TransformOptions o;
            o.max_k = c.max_k;
            o.check_prime_bound = c.transform_check_bound;
            o.tolerance = t;
            return verify_transform(q_binomial_identity(n, beta, g, false), o, table_);
          });
        }
      }
    }
    run("T3.1", {{"identity", std::string("q-gauss")}}, [&] {
      TransformOptions o;
      o.max_k = c.max_k;
      o.check_prime_bound = c.transform_check_bound;
      o.tolerance = t;
      return verify_transform(q_gauss_identity(1, 2, 6, 1.0), o, table_);
    });
  }

  const RunConfig& config_;
  const arith::PrimeTable& table_;
  std::vector<VerificationReport> reports_;
};

}  // namespace

std::vector<VerificationReport> run_suite(const RunConfig& config, const arith::PrimeTable& table) {
  config.validate();
  if (table.bound() < config.prime_bound) {
    throw InvalidInput("run_suite: prime table smaller than the configured prime bound");
  }
  return SuiteRunner(config, table).execute();
}

std::size_t unexpected_failures(const std::vector<VerificationReport>& reports,
                                const std::vector<std::string>& expected) {
  std::size_t count = 0;
  for (const auto& r : reports) {
    switch (r.status) {
      case Status::kPass:
        break;
      case Status::kFail:
      case Status::kQIdentityFailed:
        ++count;
        break;
      case Status::kDivergentLhs:
      case Status::kDiscrepancyDocumented:
        if (std::find(expected.begin(), expected.end(), r.id) == expected.end()) ++count;
        break;
    }
  }
  return count;
}

}  // namespace dseries::verify
