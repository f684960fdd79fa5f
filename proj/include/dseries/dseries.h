#ifndef DSERIES_DSERIES_H
#define DSERIES_DSERIES_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DSERIES_BUILDING)
#define DS_API __declspec(dllexport)
#else
#define DS_API __declspec(dllimport)
#endif
#else
#define DS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ds_status {
  DS_OK = 0,
  /* Malformed or out-of-range arguments, unknown identity IDs, bad config. */
  DS_INVALID_INPUT = 1,
  /* Well-formed arguments outside the mathematical domain. */
  DS_DOMAIN_ERROR = 2,
  /* An enumeration or iteration budget was exceeded. */
  DS_RESOURCE_ERROR = 3,
  DS_INTERNAL_ERROR = 4
} ds_status;

typedef enum ds_format { DS_FORMAT_JSON = 0, DS_FORMAT_CSV = 1, DS_FORMAT_TEXT = 2 } ds_format;

typedef enum ds_series_status {
  DS_SERIES_CONVERGED = 0,
  DS_SERIES_TRUNCATED = 1,
  DS_SERIES_DIVERGENT_OSCILLATING = 2,
  DS_SERIES_DIVERGENT_GROWING = 3
} ds_series_status;

typedef struct ds_partial_sum {
  double value;
  uint64_t terms_used;
  /* Nonzero when tail_bound holds a certified bound. */
  int has_tail_bound;
  double tail_bound;
  ds_series_status status;
  /* Nonzero prime for Euler products whose factor at that prime diverged. */
  uint64_t offending_prime;
} ds_partial_sum;

/* Owns the prime sieve; safe to share across threads once created. */
typedef struct ds_context ds_context;
typedef struct ds_report_set ds_report_set;

/* Message for the last non-OK status on the calling thread; never NULL. */
DS_API const char* ds_last_error(void);
DS_API const char* ds_status_name(ds_status status);
DS_API const char* ds_series_status_name(ds_series_status status);

/* sieve_bound 0 selects the default of 10^7. */
DS_API ds_status ds_context_create(uint64_t sieve_bound, ds_context** out);
DS_API void ds_context_destroy(ds_context* ctx);
DS_API uint64_t ds_context_sieve_bound(const ds_context* ctx);

/* sigma_{-gamma}(k) when positive == 0, sigma_{+gamma}(k) otherwise. */
DS_API ds_status ds_sigma(const ds_context* ctx, double gamma, uint64_t k, int positive,
                          double* out);
DS_API ds_status ds_d_factorial(const ds_context* ctx, uint32_t a, double gamma, uint64_t k,
                                double* out);
DS_API ds_status ds_zeta(double s, double* out);
/* prod_{j<n} zeta((a+j) gamma); n < 0 means an infinite product. */
DS_API ds_status ds_zeta_shifted(double a, double gamma, int64_t n, double* out);
/* prod over shifts of prod_{p|m} (p^{-a gamma}; p^{-gamma})_n; n < 0 means infinite. */
DS_API ds_status ds_jordan_shifted(const ds_context* ctx, uint64_t m, const uint32_t* shifts,
                                   size_t shift_count, double gamma, int64_t n, double* out);

/* spec uses the "a_list;b_list;c_list;d_list;flags" encoding. */
DS_API ds_status ds_theta_sum(const ds_context* ctx, const char* spec, double gamma, double z,
                              uint64_t max_k, double tolerance, ds_partial_sum* out);
DS_API ds_status ds_theta_euler_product(const ds_context* ctx, const char* spec, double gamma,
                                        double z, uint64_t prime_bound, double tolerance,
                                        ds_partial_sum* out);

/* Runs the verification suite described by a JSON config ("{}" for defaults)
   against the context's sieve; a sieve_bound key in the config is ignored. */
DS_API ds_status ds_verify_run(const ds_context* ctx, const char* config_json,
                               ds_report_set** out);
DS_API void ds_report_set_destroy(ds_report_set* set);
DS_API size_t ds_report_set_size(const ds_report_set* set);
/* Reports that fail, or are non-pass on an identity outside the expected list. */
DS_API size_t ds_report_set_unexpected_failures(const ds_report_set* set);
/* *out receives a NUL-terminated string to release with ds_string_free. */
DS_API ds_status ds_report_set_render(const ds_report_set* set, ds_format format, char** out);

/* Kummer coefficient rows for each (a[i], b[i]) and each k; CSV or text only. */
DS_API ds_status ds_kummer_table(const ds_context* ctx, const uint32_t* a, const uint32_t* b,
                                 size_t pair_count, const uint64_t* ks, size_t k_count,
                                 double gamma, ds_format format, char** out);

DS_API void ds_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
