#include <math.h>
#include <stdio.h>
#include <string.h>

#include "biquad.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  const double b[4] = {2.0, 1.0, 1.0, 2.0};
  const double c[4] = {3.0, 1.0, 1.0, 3.0};
  BqTensor *t = NULL;
  CHECK(bq_kron_build(b, 2, c, 2, &t) == BQ_STATUS_OK);

  size_t m = 0, n = 0;
  CHECK(bq_tensor_dims(t, &m, &n) == BQ_STATUS_OK);
  CHECK(m == 2 && n == 2);

  BqCollatzConfig cfg = bq_collatz_default_config();
  BqCollatzSummary sum;
  const double x0[2] = {0.6, 0.8};
  const double y0[2] = {0.8, 0.6};
  double x[2], y[2];
  CHECK(bq_collatz_run(t, x0, 2, y0, 2, &cfg, &sum, x, y) == BQ_STATUS_OK);
  CHECK(fabs(sum.lambda_est - 12.0) < 1e-6);

  BqEigenList *list = NULL;
  CHECK(bq_enumerate_2x2(t, 360, 1e-10, &list) == BQ_STATUS_OK);
  CHECK(bq_eigen_list_len(list) == 4);
  double lambda;
  BqEigenClass cls;
  CHECK(bq_eigen_list_get(list, 0, &lambda, x, 2, y, 2, &cls) == BQ_STATUS_OK);
  CHECK(fabs(lambda - 12.0) < 1e-9);
  CHECK(cls == BQ_EIGEN_CLASS_MPLUSPLUS);
  bq_eigen_list_free(list);

  CHECK(bq_tensor_entry(t, 5, 0, 0, 0, &lambda) == BQ_STATUS_DIMENSION_MISMATCH);
  CHECK(bq_last_error_message() != NULL && strlen(bq_last_error_message()) > 0);

  BqTensor *bad = NULL;
  CHECK(bq_tensor_from_json("{\"m\":", &bad) == BQ_STATUS_PARSE);
  CHECK(bad == NULL);

  bq_tensor_free(t);
  printf("ok\n");
  return 0;
}
