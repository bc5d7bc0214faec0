#include <stdio.h>
#include "factor_avoid.h"

int main(void) {
    FaProblem *p = NULL;
    if (fa_problem_from_json("{\"alphabet\": [\"a\", \"b\"], \"forbidden\": [\"aa\"], \"max_len\": 10}", &p) != FA_STATUS_OK) {
        fprintf(stderr, "%s\n", fa_last_error());
        return 1;
    }
    uint64_t counts[11];
    if (fa_count_avoiding(p, counts, 11) == FA_STATUS_OK) {
        for (int n = 0; n <= 10; n++) printf("%d %llu\n", n, (unsigned long long)counts[n]);
    }
    char *poly = NULL;
    if (fa_cluster_polynomial(p, "aaaa", &poly) == FA_STATUS_OK) {
        printf("P(aaaa) = %s\n", poly);
        fa_string_free(poly);
    }
    fa_problem_free(p);

    int64_t ivs[] = {1, 2, 2, 3, 3, 4, 4, 5};
    int64_t mu = 0;
    if (fa_mobius(ivs, 4, &mu) == FA_STATUS_OK) printf("mu = %lld\n", (long long)mu);
    return 0;
}
