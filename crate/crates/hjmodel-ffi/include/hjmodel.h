/* C interface of the hjmodel library.
 *
 * Conventions:
 *   - Functions return HJ_OK (0) on success, a nonzero status otherwise;
 *     hj_last_error_message() describes the most recent failure on the
 *     calling thread.
 *   - Strings returned through out-parameters are owned by the caller and
 *     must be released with hj_string_free().
 *   - HjSeries handles are created by hj_series_parse_csv() and released
 *     with hj_series_free().
 */

#ifndef HJMODEL_H
#define HJMODEL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

enum HjStatus {
  HJ_OK = 0,
  HJ_INVALID_ARGUMENT = 1,
  HJ_VALIDATION = 2,
  HJ_DEGENERATE = 3,
  HJ_NUMERIC = 4,
};

/* Opaque handle around a validated output/price time series. */
typedef struct HjSeries HjSeries;

/* Library version; static storage, do not free. */
const char *hj_version(void);

/* Message of the last error on this thread; static storage, do not free. */
const char *hj_last_error_message(void);

/* Parse a CSV document with header `t,y,p0,p1,p2` into a series handle.
 * On success *out owns the handle. */
int hj_series_parse_csv(const char *csv, HjSeries **out);

/* Release a series handle (null is a no-op). */
void hj_series_free(HjSeries *series);

/* Number of observations; 0 for a null handle. */
size_t hj_series_len(const HjSeries *series);

/* Decide moment-problem solvability at the given rho. On success *out_json
 * holds a JSON report (witness capacity distribution or separating
 * certificate); release it with hj_string_free. */
int hj_check_moment(const HjSeries *series, double rho, char **out_json);

/* Estimate the elasticity interval structure of the series. On success
 * *out_json holds the JSON report; release it with hj_string_free. */
int hj_estimate_elasticity(const HjSeries *series, char **out_json);

/* Release a string returned by this library (null is a no-op). */
void hj_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* HJMODEL_H */
