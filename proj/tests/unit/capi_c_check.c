/* Compile-and-call check that the public header is usable from plain C. */
#include <stdio.h>
#include <string.h>

#include "crossflow/capi.h"

int main(void) {
    if (strlen(cf_version()) == 0) return 1;
    if (cf_preset_count() < 1) return 1;
    if (cf_preset_name(0) == NULL) return 1;
    if (cf_preset_name(cf_preset_count()) != NULL) return 1;

    cf_scenario* sc = NULL;
    if (cf_scenario_from_preset("ex2d_periodic", &sc) != CF_OK) return 1;
    if (strcmp(cf_scenario_name(sc), "ex2d_periodic") != 0) return 1;

    size_t needed = 0;
    if (cf_scenario_serialize(sc, NULL, 0, &needed) != CF_OK || needed == 0) return 1;
    char buf[64];
    if (cf_scenario_serialize(sc, buf, sizeof buf, NULL) != CF_OK) return 1;
    if (strncmp(buf, "name = ex2d_periodic", 20) != 0) return 1;
    cf_scenario_free(sc);

    if (cf_scenario_from_preset("no_such_preset", &sc) != CF_ERR_CONFIG) return 1;
    if (strlen(cf_last_error()) == 0) return 1;
    if (cf_run(NULL, NULL, NULL) != CF_ERR_ARGUMENT) return 1;

    printf("capi c check ok\n");
    return 0;
}
