// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "dseries/arith.hpp"
#include "dseries/errors.hpp"
#include "dseries/report_io.hpp"
#include "dseries/verify.hpp"

namespace {

using dseries::verify::RunConfig;
using dseries::verify::Status;
using dseries::verify::VerificationReport;
using Reports = std::vector<VerificationReport>;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

const dseries::arith::PrimeTable& table() {
  static const dseries::arith::PrimeTable t;
  return t;
}

struct Timed {
  Reports reports;
  double seconds;
};

Timed run(RunConfig config) {
  const auto start = std::chrono::steady_clock::now();
  auto reports = dseries::verify::run_suite(config, table());
  const double s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(reports), s};
}

Timed run_ids(std::vector<std::string> ids) {
  RunConfig c;
  c.ids = std::move(ids);
  return run(c);
}

Reports with_id(const Reports& all, std::string_view id) {
  Reports out;
  std::copy_if(all.begin(), all.end(), std::back_inserter(out),
               [&](const VerificationReport& r) { return r.id == id; });
  return out;
}

double number(const VerificationReport& r, std::string_view name) {
  const auto* v = r.input(name);
  if (v == nullptr) return std::nan("");
  if (const auto* d = std::get_if<double>(v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(v)) return static_cast<double>(*i);
  return std::nan("");
}

std::string text(const VerificationReport& r, std::string_view name) {
  const auto* v = r.input(name);
  if (v == nullptr) return {};
  if (const auto* s = std::get_if<std::string>(v)) return *s;
  return {};
}

/// Measured error within target, relative to max(1, |rhs|).
bool agrees(const VerificationReport& r, double target) {
  return r.abs_error <= target * std::max(1.0, std::fabs(r.rhs));
}

std::string describe(const VerificationReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s %s abs_error=%.3g tolerance=%.3g", r.id.c_str(),
                std::string(dseries::verify::to_string(r.status)).c_str(), r.abs_error,
                r.tolerance);
  return buf;
}

void require_all_pass(Outcome& o, const Reports& rs, std::string_view id) {
  o.require(!rs.empty(), std::string(id) + " produced no reports");
  for (const auto& r : rs) o.require(r.status == Status::kPass, describe(r));
}

Outcome binomial_series() {
  Outcome o;
  const auto t = run_ids({"E1.16"});
  o.require(t.reports.size() == 4, "expected 4 reports for n = 1..4");
  require_all_pass(o, t.reports, "E1.16");
  for (const auto& r : t.reports) {
    o.require(r.terms_used == 1'000'000u, "partial sums must run to k = 10^6");
    o.require(r.tail_bound.has_value() && *r.tail_bound <= 5e-4, "tail bound above 5e-4");
    o.require(r.tail_bound && r.abs_error <= *r.tail_bound, describe(r) + " outside tail bound");
  }
  o.require(t.seconds <= 30.0, "runtime above 30 s");
  char buf[64];
  std::snprintf(buf, sizeof buf, "4 sums within tail bounds, %.1f s", t.seconds);
  if (o.ok) o.detail = buf;
  return o;
}

Outcome restricted_binomial() {
  Outcome o;
  const auto t = run_ids({"E1.17"});
  o.require(t.reports.size() == 15, "expected 15 reports for m x n");
  require_all_pass(o, t.reports, "E1.17");
  for (const auto& r : t.reports) o.require(agrees(r, 1e-10), describe(r) + " error above 1e-10");
  if (o.ok) o.detail = "15 finite Euler products agree to 1e-10";
  return o;
}

Outcome factorial_forms() {
  Outcome o;
  const auto t = run_ids({"E1.6", "E1.10", "E1.11", "E1.28", "E1.28-printed"});
  for (const auto* id : {"E1.6", "E1.10", "E1.11", "E1.28"}) {
    const auto rs = with_id(t.reports, id);
    require_all_pass(o, rs, id);
    for (const auto& r : rs) {
      o.require(agrees(r, 1e-11), describe(r) + " error above 1e-11");
      const bool conv = std::string_view(id) == "E1.28";
      o.require(r.terms_used == (conv ? 500u : 2000u), describe(r) + " wrong k range");
      o.require(number(r, "a") <= (conv ? 4 : 5), "a outside range");
    }
  }
  o.require(with_id(t.reports, "E1.6").size() == 15, "expected 15 definition reports");
  bool witnessed = false;
  for (const auto& r : with_id(t.reports, "E1.28-printed")) {
    witnessed |= number(r, "a") == 1 && r.status == Status::kDiscrepancyDocumented &&
                 r.input("witness_k") != nullptr;
  }
  o.require(witnessed, "printed-sign convolution not shown to fail at a = 1");
  if (o.ok) o.detail = "all forms agree; printed-sign convolution fails at a = 1 with witness";
  return o;
}

Outcome closed_forms() {
  Outcome o;
  const auto t = run_ids({"E1.23", "E1.24", "E1.25", "E1.26"});
  for (const auto* id : {"E1.23", "E1.24"}) {
    const auto rs = with_id(t.reports, id);
    require_all_pass(o, rs, id);
    for (const auto& r : rs) o.require(agrees(r, 1e-12), describe(r) + " error above 1e-12");
  }
  for (const auto* id : {"E1.25", "E1.26"}) {
    bool flagged = false;
    for (const auto& r : with_id(t.reports, id)) {
      o.require(r.status == Status::kPass || r.status == Status::kDiscrepancyDocumented,
                describe(r));
      flagged |= r.status == Status::kDiscrepancyDocumented && r.input("witness_k") != nullptr;
    }
    o.require(flagged, std::string(id) + " discrepancy not documented with a witness");
  }
  const auto& expected = dseries::verify::default_expected();
  o.require(dseries::verify::unexpected_failures(t.reports, expected) == 0,
            "flagged discrepancies counted as failures");
  o.require(dseries::verify::unexpected_failures(t.reports, {}) > 0,
            "discrepancies pass even when not expected");
  if (o.ok) o.detail = "square-free forms agree; square forms flagged with witnesses";
  return o;
}

Outcome gauss() {
  Outcome o;
  const auto t = run_ids({"E1.14"});
  o.require(t.reports.size() >= 5, "fewer than 5 parameter tuples");
  require_all_pass(o, t.reports, "E1.14");
  for (const auto& r : t.reports) {
    o.require(r.tolerance <= 1e-6, describe(r) + " certified tolerance above 1e-6");
    o.require(dseries::verify::d_gauss_admissible(
                  static_cast<std::uint32_t>(number(r, "a")),
                  static_cast<std::uint32_t>(number(r, "b")),
                  static_cast<std::uint32_t>(number(r, "c")), number(r, "gamma")),
              "tuple outside the convergence conditions");
  }
  if (o.ok) o.detail = std::to_string(t.reports.size()) + " tuples within tolerance <= 1e-6";
  return o;
}

Outcome q_identities() {
  Outcome o;
  const auto t = run_ids({"QBIN", "E1.13", "E4.2"});
  for (const auto* id : {"QBIN", "E1.13", "E4.2"}) {
    const auto rs = with_id(t.reports, id);
    require_all_pass(o, rs, id);
    for (const auto& r : rs) o.require(agrees(r, 1e-8), describe(r) + " error above 1e-8");
  }
  if (o.ok) o.detail = std::to_string(t.reports.size()) + " q grids verified to 1e-8";
  return o;
}

Outcome kummer_products() {
  Outcome o;
  const auto t = run_ids({"E4.10", "E4.12", "E4.15"});
  const auto forms = with_id(t.reports, "E4.10");
  o.require(forms.size() == 18, "expected 18 (m, a, b) reports");
  require_all_pass(o, forms, "E4.10");
  for (const auto& r : forms) {
    const double forms[] = {number(r, "form_j_ratio"), number(r, "form_sigma_product"),
                            number(r, "form_q_kummer")};
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        o.require(std::fabs(forms[i] - forms[j]) <= 1e-9, describe(r) + " forms differ");
      }
    }
  }
  for (const auto* id : {"E4.12", "E4.15"}) {
    const auto rs = with_id(t.reports, id);
    require_all_pass(o, rs, id);
    for (const auto& r : rs) {
      o.require(r.rhs == 1.0 && r.abs_error <= 1e-14, describe(r) + " deviates from 1");
      o.require(number(r, "max_k") == 210, "coefficient range is not k <= 210");
    }
  }
  if (o.ok) o.detail = "three product forms agree; unit coefficients within 1e-14";
  return o;
}

Outcome divergence() {
  Outcome o;
  const auto t = run_ids({"E4.5"});
  o.require(t.reports.size() == 12, "expected 12 grid points");
  for (const auto& r : t.reports) {
    o.require(r.status == Status::kDivergentLhs &&
                  text(r, "series_status") == "divergent-oscillating",
              describe(r) + " not classified divergent-oscillating");
  }
  if (o.ok) o.detail = "12 grid points divergent-oscillating";
  return o;
}

Outcome average_orders() {
  Outcome o;
  RunConfig c;
  c.ids = {"E4.7", "E4.8"};
  c.gamma_grid = {1.0};
  const auto t = run(c);
  const auto positive = with_id(t.reports, "E4.7");
  const auto negative = with_id(t.reports, "E4.8");
  o.require(positive.size() == 3 && negative.size() == 3, "expected x in {10^4, 10^5, 10^6}");
  require_all_pass(o, t.reports, "E4.7/E4.8");
  const auto in_band = [](double ratio) { return ratio >= 0.999 && ratio <= 1.001; };
  double neg_ratio = 0, pos_ratio = 0;
  for (const auto& r : negative) {
    if (number(r, "x") == 1e6) neg_ratio = number(r, "ratio");
  }
  for (const auto& r : positive) {
    if (number(r, "x") == 1e5) pos_ratio = number(r, "ratio");
  }
  o.require(in_band(neg_ratio), "sigma_{-1} ratio at 10^6 outside [0.999, 1.001]");
  o.require(in_band(pos_ratio), "sigma_1 ratio at 10^5 outside [0.999, 1.001]");
  for (const auto* rs : {&positive, &negative}) {
    for (std::size_t i = 1; i < rs->size(); ++i) {
      o.require(number((*rs)[i], "deviation") < number((*rs)[i - 1], "deviation"),
                (*rs)[i].id + " deviation does not shrink");
    }
  }
  o.require(t.seconds <= 60.0, "runtime above 60 s");
  char buf[128];
  std::snprintf(buf, sizeof buf, "ratios %.6f (x=10^6) and %.6f (x=10^5), %.1f s", neg_ratio,
                pos_ratio, t.seconds);
  if (o.ok) o.detail = buf;
  return o;
}

Outcome determinism() {
  Outcome o;
  const auto render = [] {
    const auto t = run(RunConfig{});
    const auto& expected = dseries::verify::default_expected();
    return std::pair{dseries::io::render_json(t.reports,
                                              dseries::io::summarize(t.reports, expected)),
                     dseries::verify::unexpected_failures(t.reports, expected)};
  };
  const auto [first, first_unexpected] = render();
  const auto [second, second_unexpected] = render();
  o.require(first == second, "full-suite JSON differs between runs");
  o.require(first_unexpected == 0, std::to_string(first_unexpected) +
                                       " unexpected failures in the full suite");
  if (o.ok) o.detail = std::to_string(first.size()) + " identical bytes, no unexpected failures";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"D-binomial partial sums within certified tail", binomial_series},
      {"restricted D-binomial finite Euler products", restricted_binomial},
      {"D-shifted factorial forms agree", factorial_forms},
      {"closed forms and documented discrepancies", closed_forms},
      {"D-Gauss sums match zeta products", gauss},
      {"q-binomial, q-Gauss and q-Kummer identities", q_identities},
      {"D-Kummer product forms and unit coefficients", kummer_products},
      {"unrestricted Kummer series diverges with oscillation", divergence},
      {"divisor-sum average orders", average_orders},
      {"full suite is deterministic", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s criterion %zu: %s (%s)\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
