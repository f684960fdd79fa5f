#include <math.h>
#include <stdio.h>
#include <string.h>

#include "dseries/dseries.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expectation failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static int close_to(double a, double b, double rel) { return fabs(a - b) <= rel * fabs(b); }

int main(void) {
  ds_context* ctx = NULL;
  EXPECT(ds_context_create(100000, &ctx) == DS_OK);
  EXPECT(ctx != NULL);
  EXPECT(ds_context_sieve_bound(ctx) == 100000);

  double v = 0.0;
  EXPECT(ds_sigma(ctx, 1.0, 6, 0, &v) == DS_OK && v == 2.0);
  EXPECT(ds_sigma(ctx, 1.0, 6, 1, &v) == DS_OK && close_to(v, 12.0, 1e-14));
  EXPECT(ds_d_factorial(ctx, 3, 1.0, 4, &v) == DS_OK && close_to(v, 2.1875, 1e-15));
  EXPECT(ds_zeta(2.0, &v) == DS_OK && close_to(v, 1.6449340668482264, 1e-14));
  EXPECT(ds_zeta_shifted(2.0, 1.0, 2, &v) == DS_OK &&
         close_to(v, 1.6449340668482264 * 1.2020569031595943, 1e-14));

  const uint32_t shifts[] = {1};
  EXPECT(ds_jordan_shifted(ctx, 2, shifts, 1, 1.0, 1, &v) == DS_OK && close_to(v, 0.5, 1e-15));

  /* Error paths keep a message and leave no partial result. */
  EXPECT(ds_sigma(ctx, 1.0, 0, 0, &v) == DS_INVALID_INPUT);
  EXPECT(strlen(ds_last_error()) > 0);
  EXPECT(ds_d_factorial(ctx, 0, 1.0, 4, &v) == DS_INVALID_INPUT);
  EXPECT(ds_sigma(NULL, 1.0, 6, 0, &v) == DS_INVALID_INPUT);
  EXPECT(strcmp(ds_status_name(DS_DOMAIN_ERROR), "domain-error") == 0);

  ds_partial_sum sum;
  EXPECT(ds_theta_sum(ctx, "2;;;;", 1.0, 2.0, 100000, 1e-10, &sum) == DS_OK);
  EXPECT(sum.has_tail_bound);
  EXPECT(fabs(sum.value - 1.6449340668482264 * 1.2020569031595943) <= sum.tail_bound + 1e-12);
  EXPECT(ds_theta_sum(ctx, "bad spec", 1.0, 2.0, 10, 1e-10, &sum) == DS_INVALID_INPUT);
  EXPECT(ds_theta_euler_product(ctx, "1;;;;neg,m=2", 1.0, 2.0, 0, 1e-12, &sum) == DS_OK);
  EXPECT(close_to(sum.value, 0.8, 1e-14));
  EXPECT(strcmp(ds_series_status_name(DS_SERIES_DIVERGENT_OSCILLATING), "divergent-oscillating") == 0);

  ds_report_set* set = NULL;
  EXPECT(ds_verify_run(ctx, "{\"ids\":[\"E1.17\"],\"m\":[2,6],\"n\":[1]}", &set) == DS_OK);
  EXPECT(ds_report_set_size(set) == 2);
  EXPECT(ds_report_set_unexpected_failures(set) == 0);
  char* text = NULL;
  EXPECT(ds_report_set_render(set, DS_FORMAT_JSON, &text) == DS_OK);
  EXPECT(text != NULL && strstr(text, "\"status\":\"pass\"") != NULL);
  ds_string_free(text);
  EXPECT(ds_report_set_render(set, DS_FORMAT_CSV, &text) == DS_OK);
  EXPECT(text != NULL && strncmp(text, "id,status,", 10) == 0);
  ds_string_free(text);
  ds_report_set_destroy(set);

  set = NULL;
  EXPECT(ds_verify_run(ctx, "{\"ids\":[\"E9.9\"]}", &set) == DS_INVALID_INPUT);
  EXPECT(set == NULL);
  EXPECT(strstr(ds_last_error(), "E9.9") != NULL);
  EXPECT(ds_verify_run(ctx, "{not json", &set) == DS_INVALID_INPUT);

  /* Documented discrepancies count only when not expected. */
  EXPECT(ds_verify_run(ctx, "{\"ids\":[\"E1.25\"],\"a\":[3],\"gamma\":[1]}", &set) == DS_OK);
  EXPECT(ds_report_set_unexpected_failures(set) == 0);
  ds_report_set_destroy(set);
  EXPECT(ds_verify_run(ctx, "{\"ids\":[\"E1.25\"],\"a\":[3],\"gamma\":[1],\"expected\":[]}", &set) ==
         DS_OK);
  EXPECT(ds_report_set_unexpected_failures(set) == 2);
  ds_report_set_destroy(set);

  const uint32_t as[] = {2, 4};
  const uint32_t bs[] = {1, 2};
  const uint64_t ks[] = {2};
  EXPECT(ds_kummer_table(ctx, as, bs, 2, ks, 1, 1.0, DS_FORMAT_CSV, &text) == DS_OK);
  EXPECT(text != NULL && strstr(text, "2,1,1,2,1\n") != NULL);
  ds_string_free(text);
  EXPECT(ds_kummer_table(ctx, NULL, NULL, 0, ks, 1, 1.0, DS_FORMAT_CSV, &text) == DS_OK);
  EXPECT(text != NULL && strcmp(text, "a,b,gamma,k,coefficient\n") == 0);
  ds_string_free(text);
  EXPECT(ds_kummer_table(ctx, as, bs, 2, ks, 1, 1.0, DS_FORMAT_JSON, &text) == DS_INVALID_INPUT);

  ds_context_destroy(ctx);
  if (failures) {
    fprintf(stderr, "%d expectation(s) failed\n", failures);
    return 1;
  }
  printf("c api: all expectations met\n");
  return 0;
}
