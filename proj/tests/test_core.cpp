#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <tuple>
#include <vector>

#include "dseries/arith.hpp"
#include "dseries/dfactorial.hpp"
#include "dseries/errors.hpp"
#include "dseries/qseries.hpp"
#include "dseries/theta.hpp"
#include "dseries/zeta.hpp"

using namespace dseries;

namespace {

const arith::PrimeTable& table() {
  static const arith::PrimeTable t(2'000'000);
  return t;
}

// Independent oracles: plain loops over integers, no library helpers.
double brute_divisor_sum(std::uint64_t n, double exponent) {
  double s = 0.0;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    s += std::pow(static_cast<double>(d), exponent);
    if (d * d != n) s += std::pow(static_cast<double>(n / d), exponent);
  }
  return s;
}

std::uint64_t brute_radical(std::uint64_t n) {
  std::uint64_t r = 1;
  for (std::uint64_t p = 2; p <= n; ++p) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= p; ++d) {
      if (p % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime && n % p == 0) r *= p;
  }
  return r;
}

// sigma_{-g}(k) sigma_{-g}(k r) ... sigma_{-g}(k r^{a-2}) / (same with k -> 1), r = rad(k).
double brute_d_factorial(std::uint32_t a, double g, std::uint64_t k) {
  const std::uint64_t r = brute_radical(k);
  double num = 1.0;
  double den = 1.0;
  std::uint64_t rj = 1;
  for (std::uint32_t j = 0; j + 2 <= a; ++j) {
    num *= brute_divisor_sum(k * rj, -g);
    den *= brute_divisor_sum(rj, -g);
    rj *= r;
  }
  return num / den;
}

double brute_pochhammer(double a, double q, int n) {
  double r = 1.0;
  for (int j = 0; j < n; ++j) r *= 1.0 - a * std::pow(q, j);
  return r;
}

constexpr double kZeta3 = 1.2020569031595942854;

}  // namespace

TEST_SUITE("arith") {
  TEST_CASE("factorization agrees with trial division") {
    for (std::uint64_t n = 1; n <= 5000; ++n) {
      CHECK(table().factorize(n) == arith::factorize_trial(n));
    }
    CHECK(table().factorize(1).empty());
    const auto big = table().factorize(9'999'991ULL * 3);
    CHECK(big.value() == 9'999'991ULL * 3);
  }

  TEST_CASE("sigma matches literal divisor sums") {
    for (std::uint64_t k = 1; k <= 600; ++k) {
      for (double g : {0.5, 1.0, 2.0}) {
        CHECK(arith::sigma_neg(g, k, table()) == doctest::Approx(brute_divisor_sum(k, -g)).epsilon(1e-13));
        CHECK(arith::sigma_pos(g, k, table()) == doctest::Approx(brute_divisor_sum(k, g)).epsilon(1e-13));
      }
    }
    CHECK(arith::sigma_neg(1.0, 6, table()) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(arith::sigma_neg(0.0, 6, table()), InvalidInput);
  }

  TEST_CASE("liouville is completely multiplicative and radical divides") {
    for (std::uint64_t m = 1; m <= 60; ++m) {
      for (std::uint64_t n = 1; n <= 60; ++n) {
        CHECK(arith::liouville(m * n, table()) ==
              arith::liouville(m, table()) * arith::liouville(n, table()));
      }
      CHECK(arith::radical(m, table()) == brute_radical(m));
    }
    CHECK(arith::liouville(12, table()) == -1);
  }

  TEST_CASE("jordan totient generalises phi") {
    for (std::uint64_t m = 1; m <= 300; ++m) {
      std::uint64_t phi = 0;
      for (std::uint64_t j = 1; j <= m; ++j) phi += std::gcd(j, m) == 1 ? 1 : 0;
      CHECK(arith::jordan_totient(1.0, m, table()) == doctest::Approx(static_cast<double>(phi)).epsilon(1e-12));
    }
    CHECK(arith::jordan_totient(0.0, 12, table()) == 0.0);
    CHECK(arith::jordan_totient(0.0, 1, table()) == 1.0);
  }

  TEST_CASE("smooth enumeration matches filtering") {
    for (std::uint64_t m : {1ULL, 2ULL, 6ULL, 12ULL, 30ULL, 49ULL}) {
      std::vector<std::uint64_t> expected;
      const std::uint64_t r = brute_radical(m);
      for (std::uint64_t x = 1; x <= 5000; ++x) {
        if (r % brute_radical(x) == 0) expected.push_back(x);
      }
      CHECK(arith::enumerate_sm(m, 5000, table()) == expected);
    }
  }
}

TEST_SUITE("zeta") {
  TEST_CASE("known values") {
    const double pi = std::numbers::pi;
    CHECK(zeta::riemann_zeta(2.0) == doctest::Approx(pi * pi / 6).epsilon(1e-15));
    CHECK(zeta::riemann_zeta(4.0) == doctest::Approx(std::pow(pi, 4) / 90).epsilon(1e-15));
    CHECK(zeta::riemann_zeta(3.0) == doctest::Approx(kZeta3).epsilon(1e-15));
    CHECK(zeta::riemann_zeta(1.5) == doctest::Approx(2.6123753486854883).epsilon(1e-14));
    const auto v = zeta::riemann_zeta_certified(2.0);
    CHECK(std::fabs(v.value - pi * pi / 6) <= v.error_bound);
    CHECK_THROWS_AS(zeta::riemann_zeta(1.0), DomainError);
  }

  TEST_CASE("shifted products") {
    const double pi = std::numbers::pi;
    zeta::ZetaShiftSpec s{2.0, 1.0, 2};
    CHECK(zeta::zeta_shifted(s) == doctest::Approx(pi * pi / 6 * kZeta3).epsilon(1e-14));
    s.n = 0;
    CHECK(zeta::zeta_shifted(s) == 1.0);
    // prod_{k>=1} zeta(2k) against a long finite truncation.
    zeta::ZetaShiftSpec inf{1.0, 2.0, zeta::kInfinite};
    zeta::ZetaShiftSpec fin{1.0, 2.0, 40};
    CHECK(zeta::zeta_shifted(inf) == doctest::Approx(zeta::zeta_shifted(fin)).epsilon(1e-14));
  }
}

TEST_SUITE("q-engine") {
  TEST_CASE("pochhammer examples") {
    CHECK(q::q_pochhammer(0.3, 0.5, 0) == 1.0);
    CHECK(q::q_pochhammer(0.5, 0.5, 3) == doctest::Approx(0.328125).epsilon(1e-16));
    CHECK(q::q_pochhammer(0.5, 0.5, std::nullopt) ==
          doctest::Approx(brute_pochhammer(0.5, 0.5, 60)).epsilon(1e-15));
    const std::vector<double> as{0.5, 0.25};
    CHECK(q::q_pochhammer_multi(as, 0.5, 2) == doctest::Approx(0.5 * 0.75 * 0.75 * 0.875).epsilon(1e-16));
    CHECK(q::q_pochhammer_multi(std::span<const double>{}, 0.5, 2) == 1.0);
    CHECK_THROWS_AS(q::q_pochhammer(0.5, 1.0, std::nullopt), DomainError);
  }

  TEST_CASE("q-binomial theorem") {
    for (double a : {0.1, 0.3, 0.5, 0.7}) {
      for (double z : {0.1, 0.3, 0.5, 0.7}) {
        for (double qq : {0.1, 0.3, 0.5, 0.7}) {
          q::PhiSeriesSpec s{{a}, {}, qq, z};
          const auto lhs = q::phi_partial_sum(s);
          const double rhs = brute_pochhammer(a * z, qq, 400) / brute_pochhammer(z, qq, 400);
          CHECK(lhs.status == SeriesStatus::kConverged);
          CHECK(lhs.value == doctest::Approx(rhs).epsilon(1e-12));
        }
      }
    }
    q::PhiSeriesSpec zero{{0.3}, {}, 0.4, 0.0};
    CHECK(q::phi_partial_sum(zero).value == 1.0);
  }

  TEST_CASE("q-Gauss sum") {
    const double a = 0.3, b = 0.5, c = 0.7, qq = 0.4;
    // Example from the q-engine catalogue has c/(ab) > 1; use a convergent point instead.
    const double c2 = 0.1;
    q::PhiSeriesSpec s{{a, b}, {c2}, qq, c2 / (a * b)};
    const auto lhs = q::phi_partial_sum(s);
    const double rhs = brute_pochhammer(c2 / a, qq, 400) * brute_pochhammer(c2 / b, qq, 400) /
                       (brute_pochhammer(c2, qq, 400) * brute_pochhammer(c2 / (a * b), qq, 400));
    CHECK(lhs.value == doctest::Approx(rhs).epsilon(1e-12));
    q::PhiSeriesSpec bad{{a, b}, {c}, qq, c / (a * b)};
    CHECK(is_divergent(q::phi_partial_sum(bad).status));
  }

  TEST_CASE("q-Kummer sum") {
    for (auto [a, b, qq] : {std::tuple{0.5, 0.9, 0.3}, std::tuple{0.25, 0.8, 0.2}}) {
      const auto lhs = q::phi_partial_sum(q::q_kummer_lhs_spec(a, b, qq));
      CHECK(lhs.value == doctest::Approx(q::q_kummer_rhs(a, b, qq)).epsilon(1e-12));
    }
    const double qq = 0.3, b = 0.9;
    CHECK(q::q_kummer_rhs(0.0, b, qq) ==
          doctest::Approx(brute_pochhammer(-qq, qq, 400) / brute_pochhammer(-qq / b, qq, 400)).epsilon(1e-14));
    CHECK_THROWS_AS(q::q_kummer_rhs(0.5, 0.0, 0.3), DomainError);
  }

  TEST_CASE("divergent phi is flagged, not thrown") {
    q::PhiSeriesSpec s{{0.5}, {}, 0.5, -1.5};
    const auto r = q::phi_partial_sum(s);
    CHECK(r.status == SeriesStatus::kDivergentOscillating);
    CHECK_FALSE(r.tail_bound.has_value());
  }
}

TEST_SUITE("d-factorial") {
  TEST_CASE("matches literal divisor-sum definition") {
    for (std::uint64_t k = 1; k <= 300; ++k) {
      for (std::uint32_t a = 1; a <= 5; ++a) {
        for (double g : {0.5, 1.0, 2.0}) {
          CHECK(dfact::d_shifted_factorial(a, g, k, table()) ==
                doctest::Approx(brute_d_factorial(a, g, k)).epsilon(1e-12));
        }
      }
    }
    CHECK(dfact::d_shifted_factorial(3, 1.0, 4, table()) == doctest::Approx(2.1875).epsilon(1e-15));
    CHECK(dfact::d_shifted_factorial(1, 1.0, 360, table()) == 1.0);
  }

  TEST_CASE("a=2 is sigma") {
    for (std::uint64_t k = 1; k <= 1000; ++k) {
      CHECK(dfact::d_shifted_factorial(2, 1.0, k, table()) ==
            doctest::Approx(arith::sigma_neg(1.0, k, table())).epsilon(1e-14));
    }
  }

  TEST_CASE("convolution form with corrected prefactor") {
    const auto k4 = table().factorize(4);
    CHECK(dfact::d_convolution(3, 1.0, k4) == doctest::Approx(2.1875).epsilon(1e-14));
    const auto k6 = table().factorize(6);
    CHECK(dfact::d_convolution(1, 1.0, k6) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dfact::d_convolution(1, 1.0, k6, dfact::ConvolutionSign::kPrinted) ==
          doctest::Approx(1.0 / 36.0).epsilon(1e-15));
    const auto k = table().factorize(720720);
    CHECK_THROWS_AS(dfact::d_convolution(12, 1.0, k), ResourceError);
  }

  TEST_CASE("convolution form on composites with several primes") {
    for (std::uint32_t a = 1; a <= 4; ++a) {
      for (const double g : {0.5, 1.0}) {
        for (std::uint64_t k : {30ULL, 60ULL, 210ULL, 420ULL, 495ULL, 480ULL}) {
          CAPTURE(a);
          CAPTURE(k);
          CHECK(dfact::d_convolution(a, g, k, table()) ==
                doctest::Approx(brute_d_factorial(a, g, k)).epsilon(1e-11));
        }
      }
    }
  }

  TEST_CASE("closed forms") {
    const auto k5 = table().factorize(5);
    CHECK(dfact::d_closed_form(3, 1.0, k5, dfact::ClosedForm::kPrime) ==
          doctest::Approx(1.24).epsilon(1e-15));
    const auto k9 = table().factorize(9);
    const double exact = brute_d_factorial(3, 1.0, 9);
    CHECK(dfact::d_closed_form(3, 1.0, k9, dfact::ClosedForm::kPrimeSquare,
                               dfact::ClosedFormBranch::kSecond) != doctest::Approx(exact));
    CHECK_THROWS_AS(dfact::d_closed_form(3, 1.0, k9, dfact::ClosedForm::kPrime), DomainError);
  }

  TEST_CASE("jordan products") {
    dfact::JordanShiftSpec s{12, {1, 2}, 1.0, 3};
    CHECK(dfact::jordan_shifted(s, table()) ==
          doctest::Approx(dfact::jordan_shifted_totient_form(s, table())).epsilon(1e-14));
    double expected = 1.0;
    for (double p : {2.0, 3.0}) {
      expected *= brute_pochhammer(1.0 / p, 1.0 / p, 3) * brute_pochhammer(1.0 / (p * p), 1.0 / p, 3);
    }
    CHECK(dfact::jordan_shifted(s, table()) == doctest::Approx(expected).epsilon(1e-14));
    const std::vector<std::uint32_t> num{3}, den{2};
    CHECK(dfact::jordan_ratio(30, num, den, 1.0, 4, table()) ==
          doctest::Approx(dfact::jordan_ratio_sigma_form(30, num, den, 1.0, 4, table())).epsilon(1e-13));
  }
}

TEST_SUITE("theta") {
  TEST_CASE("spec encoding round trip") {
    const auto s = theta::parse_theta_spec("2,3;4;1;5;neg,m=6");
    CHECK(s.a_list == std::vector<std::uint32_t>{2, 3});
    CHECK(s.b_list == std::vector<std::uint32_t>{4});
    CHECK(s.negative_z);
    CHECK(s.restriction_m == 6);
    CHECK(theta::format_theta_spec(s) == "2,3;4;1;5;neg,m=6");
    CHECK_THROWS_AS(theta::parse_theta_spec("2;;"), InvalidInput);
    CHECK_THROWS_AS(theta::parse_theta_spec("2;x;;;"), InvalidInput);
    CHECK_THROWS_AS(theta::parse_theta_spec("2;;1;;").validate(), InvalidInput);
  }

  TEST_CASE("coefficient pairing of negative-tagged lists") {
    theta::ThetaSpec s;
    s.a_list = {1};
    s.c_list = {3};
    s.d_list = {2};
    s.gamma = 1.0;
    const auto k = table().factorize(12);
    const double expected = brute_d_factorial(3, 2.0, 12) * brute_d_factorial(2, 1.0, 12) /
                            (brute_d_factorial(2, 2.0, 12) * brute_d_factorial(3, 1.0, 12));
    CHECK(theta::theta_coefficient(s, k) == doctest::Approx(expected).epsilon(1e-13));
    s.negative_z = true;
    CHECK(theta::theta_coefficient(s, k) == doctest::Approx(-expected).epsilon(1e-13));
  }

  TEST_CASE("Kummer coefficient at a prime") {
    theta::ThetaSpec s;
    s.a_list = {4, 2};
    s.b_list = {3};
    CHECK(theta::theta_coefficient(s, 2, table()) ==
          doctest::Approx((15.0 / 16) * 0.75 / (0.5 * 0.875)).epsilon(1e-15));
  }

  TEST_CASE("binomial series sums to zeta product") {
    const auto s = theta::parse_theta_spec("2;;;;");
    const auto r = theta::theta_sum(s, 100'000, 1e-3, table());
    const double exact = std::numbers::pi * std::numbers::pi / 6 * kZeta3;
    REQUIRE(r.tail_bound.has_value());
    CHECK(std::fabs(r.value - exact) <= *r.tail_bound);
    CHECK(r.status == SeriesStatus::kConverged);
    const auto bigger = theta::tail_bound(s, 200'000);
    CHECK(*bigger < *r.tail_bound);
  }

  TEST_CASE("collapsed coefficients give zeta") {
    theta::ThetaSpec s;
    s.a_list = {1, 3};
    s.b_list = {3};
    const auto r = theta::theta_sum(s, 10'000, 1e-3, table());
    CHECK(std::fabs(r.value - std::numbers::pi * std::numbers::pi / 6) <= *r.tail_bound);
  }

  TEST_CASE("restricted sum equals finite Euler product") {
    for (std::uint64_t m : {2ULL, 3ULL, 6ULL, 12ULL, 30ULL}) {
      theta::ThetaSpec s = theta::parse_theta_spec("3,2;2;;;m=" + std::to_string(m));
      s.z = 1.0;
      const auto sum = theta::theta_sum(s, 1'000'000'000'000'000'000ULL, 1e-10, table());
      const auto prod = theta::theta_euler_product(s, 0, 1e-10, table());
      REQUIRE(sum.tail_bound.has_value());
      CHECK(std::fabs(sum.value - prod.value) <= *sum.tail_bound + 1e-10);
      CHECK(sum.value == doctest::Approx(prod.value).epsilon(1e-10));
    }
  }

  TEST_CASE("liouville sign alternates on prime powers") {
    theta::ThetaSpec s = theta::parse_theta_spec("2;;;;neg");
    for (std::uint32_t j = 0; j <= 50; ++j) {
      arith::Factorization k = j == 0 ? arith::Factorization{} : arith::Factorization({{3, j}});
      const double c = theta::theta_coefficient(s, k);
      CHECK((c > 0) == (j % 2 == 0));
    }
  }

  TEST_CASE("euler product approaches the sum") {
    const auto s = theta::parse_theta_spec("2;;;;");
    const auto prod = theta::theta_euler_product(s, 100'000, 1e-3, table());
    const double exact = std::numbers::pi * std::numbers::pi / 6 * kZeta3;
    REQUIRE(prod.tail_bound.has_value());
    CHECK(std::fabs(prod.value - exact) <= *prod.tail_bound);
    theta::ThetaSpec plain;
    plain.a_list = {1};
    const auto zeta2 = theta::theta_euler_product(plain, 100'000, 1e-3, table());
    CHECK(std::fabs(zeta2.value - std::numbers::pi * std::numbers::pi / 6) <= *zeta2.tail_bound);
  }

  TEST_CASE("kummer series shape diverges with oscillation") {
    for (std::uint32_t a : {2u, 4u, 6u}) {
      for (std::uint32_t b : {1u, 2u}) {
        theta::ThetaSpec s;
        s.a_list = {a, b};
        s.b_list = {1 + a - b};
        s.negative_z = true;
        s.z = (1.0 - b);
        const auto r = theta::theta_sum(s, 100'000, 1e-8, table());
        CHECK(r.status == SeriesStatus::kDivergentOscillating);
      }
    }
  }

  TEST_CASE("divergent euler factor reports the prime") {
    theta::ThetaSpec s = theta::parse_theta_spec("2;;;;");
    s.z = -0.5;
    const auto r = theta::theta_euler_product(s, 100, 1e-8, table());
    CHECK(is_divergent(r.status));
    CHECK(r.offending_prime == 2);
  }
}
