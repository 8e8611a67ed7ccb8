#include <math.h>
#include <stdio.h>
#include "apo.h"

static double quad(const double *x, size_t dim, void *user) {
    double s = 0.0;
    (void)user;
    for (size_t i = 0; i < dim; i++) s += (x[i] - 2.0) * (x[i] - 2.0);
    return s;
}

int main(void) {
    ApoResultHandle *h = NULL;
    if (apo_optimize_benchmark("sphere", 4, 20, 1, 0.1, 2000, 1, &h) != APO_STATUS_OK) return 1;
    if (!(apo_result_best_fitness(h) < 1.0)) return 2;
    double x[4];
    if (apo_result_best_position(h, x, 4) != APO_STATUS_OK) return 3;
    ApoTraceEntry e;
    if (apo_result_trace_entry(h, 0, &e) != APO_STATUS_OK || e.iter != 0 || e.fes != 20) return 4;
    apo_result_free(h);

    double lo[2] = {-5.0, -5.0}, hi[2] = {5.0, 5.0};
    if (apo_optimize_callback(quad, NULL, lo, hi, 2, 20, 1, 0.1, 3000, 2, &h) != APO_STATUS_OK) return 5;
    if (!(apo_result_best_fitness(h) < 1e-6)) return 6;
    apo_result_free(h);

    if (apo_optimize_benchmark("bogus", 4, 20, 1, 0.1, 2000, 1, &h) != APO_STATUS_CONFIG) return 7;
    if (apo_last_error_message() == NULL) return 8;
    printf("ok\n");
    return 0;
}
