#include <math.h>
#include <stdio.h>
#include "bicneuron.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "line %d: %s\n", __LINE__, #cond); return 1; } } while (0)

int main(int argc, char **argv) {
    CHECK(argc == 2);
    BnDataset *ds = NULL;
    CHECK(bn_dataset_load_csv(argv[1], NULL, "id", &ds) == BN_STATUS_OK);
    CHECK(bn_dataset_n_rows(ds) == 100);

    BnConfig cfg = bn_config_default();
    cfg.t_d = 0.5;
    cfg.tau = 0.5;
    BnModel *model = NULL;
    CHECK(bn_model_fit(ds, &cfg, &model) == BN_STATUS_OK);
    size_t n = bn_model_columns(model, NULL, 0);
    CHECK(n >= 2);
    CHECK(bn_model_training_auc(model) > 0.5);

    BnDataset *missing = NULL;
    CHECK(bn_dataset_load_csv("no/such/file.csv", NULL, NULL, &missing) == BN_STATUS_IO);
    char *msg = bn_last_error_message();
    CHECK(msg != NULL);
    bn_string_free(msg);

    double a[5] = {1, 2, 3, 4, 5}, b[5] = {0, 0, 0, 0, 0}, p = 0;
    CHECK(bn_wilcoxon_exact(a, b, 5, &p) == BN_STATUS_OK);
    CHECK(fabs(p - 0.0625) < 1e-15);

    bn_model_free(model);
    bn_dataset_free(ds);
    printf("ok %zu\n", n);
    return 0;
}
