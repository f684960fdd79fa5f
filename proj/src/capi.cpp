#include "dseries/dseries.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "dseries/arith.hpp"
#include "dseries/dfactorial.hpp"
#include "dseries/errors.hpp"
#include "dseries/report_io.hpp"
#include "dseries/theta.hpp"
#include "dseries/verify.hpp"
#include "dseries/zeta.hpp"

struct ds_context {
  dseries::arith::PrimeTable table;
};

struct ds_report_set {
  std::vector<dseries::verify::VerificationReport> reports;
  std::vector<std::string> expected;
};

namespace {

thread_local std::string last_error;

ds_status fail(ds_status status, const char* message) {
  last_error = message;
  return status;
}

// Runs body, mapping library exceptions onto status codes.
template <typename F>
ds_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return DS_OK;
  } catch (const dseries::InvalidInput& e) {
    return fail(DS_INVALID_INPUT, e.what());
  } catch (const dseries::DomainError& e) {
    return fail(DS_DOMAIN_ERROR, e.what());
  } catch (const dseries::ResourceError& e) {
    return fail(DS_RESOURCE_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DS_RESOURCE_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(DS_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(DS_INTERNAL_ERROR, "unknown error");
  }
}

std::optional<std::uint32_t> length_of(std::int64_t n) {
  if (n < 0) return std::nullopt;
  if (n > static_cast<std::int64_t>(UINT32_MAX)) {
    throw dseries::InvalidInput("product length too large");
  }
  return static_cast<std::uint32_t>(n);
}

dseries::io::Format to_format(ds_format f) {
  switch (f) {
    case DS_FORMAT_JSON:
      return dseries::io::Format::kJson;
    case DS_FORMAT_CSV:
      return dseries::io::Format::kCsv;
    case DS_FORMAT_TEXT:
      return dseries::io::Format::kText;
  }
  throw dseries::InvalidInput("unknown output format");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void fill(const dseries::PartialSum& s, ds_partial_sum* out) {
  out->value = s.value;
  out->terms_used = s.terms_used;
  out->has_tail_bound = s.tail_bound.has_value() ? 1 : 0;
  out->tail_bound = s.tail_bound.value_or(0.0);
  out->status = static_cast<ds_series_status>(s.status);
  out->offending_prime = s.offending_prime.value_or(0);
}

template <typename... P>
bool any_null(const P*... p) {
  return ((p == nullptr) || ...);
}

}  // namespace

extern "C" {

const char* ds_last_error(void) { return last_error.c_str(); }

const char* ds_status_name(ds_status status) {
  switch (status) {
    case DS_OK:
      return "ok";
    case DS_INVALID_INPUT:
      return "invalid-input";
    case DS_DOMAIN_ERROR:
      return "domain-error";
    case DS_RESOURCE_ERROR:
      return "resource-error";
    case DS_INTERNAL_ERROR:
      return "internal-error";
  }
  return "unknown";
}

const char* ds_series_status_name(ds_series_status status) {
  switch (status) {
    case DS_SERIES_CONVERGED:
    case DS_SERIES_TRUNCATED:
    case DS_SERIES_DIVERGENT_OSCILLATING:
    case DS_SERIES_DIVERGENT_GROWING:
      return dseries::to_string(static_cast<dseries::SeriesStatus>(status)).data();
  }
  return "unknown";
}

ds_status ds_context_create(uint64_t sieve_bound, ds_context** out) {
  if (!out) return fail(DS_INVALID_INPUT, "null output pointer");
  *out = nullptr;
  return guarded([&] {
    const auto bound = sieve_bound == 0 ? dseries::arith::PrimeTable::kDefaultBound : sieve_bound;
    *out = new ds_context{dseries::arith::PrimeTable(bound)};
  });
}

void ds_context_destroy(ds_context* ctx) { delete ctx; }

uint64_t ds_context_sieve_bound(const ds_context* ctx) { return ctx ? ctx->table.bound() : 0; }

ds_status ds_sigma(const ds_context* ctx, double gamma, uint64_t k, int positive, double* out) {
  if (any_null(ctx, out)) return fail(DS_INVALID_INPUT, "null argument");
  return guarded([&] {
    if (k == 0) throw dseries::InvalidInput("sigma: k must be >= 1");
    *out = positive ? dseries::arith::sigma_pos(gamma, k, ctx->table)
                    : dseries::arith::sigma_neg(gamma, k, ctx->table);
  });
}

ds_status ds_d_factorial(const ds_context* ctx, uint32_t a, double gamma, uint64_t k,
                         double* out) {
  if (any_null(ctx, out)) return fail(DS_INVALID_INPUT, "null argument");
  return guarded([&] { *out = dseries::dfact::d_shifted_factorial(a, gamma, k, ctx->table); });
}

ds_status ds_zeta(double s, double* out) {
  if (!out) return fail(DS_INVALID_INPUT, "null argument");
  return guarded([&] { *out = dseries::zeta::riemann_zeta(s); });
}

ds_status ds_zeta_shifted(double a, double gamma, int64_t n, double* out) {
  if (!out) return fail(DS_INVALID_INPUT, "null argument");
  return guarded([&] { *out = dseries::zeta::zeta_shifted({a, gamma, length_of(n)}); });
}

ds_status ds_jordan_shifted(const ds_context* ctx, uint64_t m, const uint32_t* shifts,
                            size_t shift_count, double gamma, int64_t n, double* out) {
  if (any_null(ctx, out) || (shift_count > 0 && !shifts)) {
    return fail(DS_INVALID_INPUT, "null argument");
  }
  return guarded([&] {
    dseries::dfact::JordanShiftSpec spec;
    spec.m = m;
    spec.shifts.assign(shifts, shifts + shift_count);
    spec.gamma = gamma;
    spec.n = length_of(n);
    *out = dseries::dfact::jordan_shifted(spec, ctx->table);
  });
}

ds_status ds_theta_sum(const ds_context* ctx, const char* spec, double gamma, double z,
                       uint64_t max_k, double tolerance, ds_partial_sum* out) {
  if (any_null(ctx, out) || !spec) return fail(DS_INVALID_INPUT, "null argument");
  return guarded([&] {
    auto s = dseries::theta::parse_theta_spec(spec);
    s.gamma = gamma;
    s.z = z;
    fill(dseries::theta::theta_sum(s, max_k, tolerance, ctx->table), out);
  });
}

ds_status ds_theta_euler_product(const ds_context* ctx, const char* spec, double gamma, double z,
                                 uint64_t prime_bound, double tolerance, ds_partial_sum* out) {
  if (any_null(ctx, out) || !spec) return fail(DS_INVALID_INPUT, "null argument");
  return guarded([&] {
    auto s = dseries::theta::parse_theta_spec(spec);
    s.gamma = gamma;
    s.z = z;
    fill(dseries::theta::theta_euler_product(s, prime_bound, tolerance, ctx->table), out);
  });
}

ds_status ds_verify_run(const ds_context* ctx, const char* config_json, ds_report_set** out) {
  if (!out) return fail(DS_INVALID_INPUT, "null output pointer");
  *out = nullptr;
  if (!ctx || !config_json) return fail(DS_INVALID_INPUT, "null argument");
  return guarded([&] {
    const auto config = dseries::io::run_config_from_json(config_json);
    auto set = std::make_unique<ds_report_set>();
    set->reports = dseries::verify::run_suite(config, ctx->table);
    set->expected = config.expected;
    *out = set.release();
  });
}

void ds_report_set_destroy(ds_report_set* set) { delete set; }

size_t ds_report_set_size(const ds_report_set* set) { return set ? set->reports.size() : 0; }

size_t ds_report_set_unexpected_failures(const ds_report_set* set) {
  return set ? dseries::verify::unexpected_failures(set->reports, set->expected) : 0;
}

ds_status ds_report_set_render(const ds_report_set* set, ds_format format, char** out) {
  if (!out) return fail(DS_INVALID_INPUT, "null output pointer");
  *out = nullptr;
  if (!set) return fail(DS_INVALID_INPUT, "null argument");
  return guarded([&] {
    const auto summary = dseries::io::summarize(set->reports, set->expected);
    *out = copy_string(dseries::io::render(to_format(format), set->reports, summary));
  });
}

ds_status ds_kummer_table(const ds_context* ctx, const uint32_t* a, const uint32_t* b,
                          size_t pair_count, const uint64_t* ks, size_t k_count, double gamma,
                          ds_format format, char** out) {
  if (!out) return fail(DS_INVALID_INPUT, "null output pointer");
  *out = nullptr;
  if (!ctx || (pair_count > 0 && (!a || !b)) || (k_count > 0 && !ks)) {
    return fail(DS_INVALID_INPUT, "null argument");
  }
  return guarded([&] {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (size_t i = 0; i < pair_count; ++i) pairs.emplace_back(a[i], b[i]);
    const std::vector<std::uint64_t> kv(ks, ks + k_count);
    *out = copy_string(
        dseries::io::render_kummer_table(pairs, kv, gamma, to_format(format), ctx->table));
  });
}

void ds_string_free(char* s) { std::free(s); }

}  // extern "C"
