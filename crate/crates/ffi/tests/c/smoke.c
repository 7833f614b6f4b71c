#include <stdio.h>
#include <string.h>
#include "depthsep.h"

int main(void) {
    DsNetwork *sq = NULL;
    if (ds_square_net(3, &sq) != DsStatus_Ok) return 1;
    DsStats st;
    if (ds_network_stats(sq, &st) != DsStatus_Ok || st.params != 53) return 2;
    double x = 0.5, y = 0.0;
    if (ds_network_realize(sq, &x, 1, &y, 1) != DsStatus_Ok || y != 0.25) return 3;

    char *json = NULL;
    if (ds_network_to_json(sq, &json) != DsStatus_Ok) return 4;
    DsNetwork *back = NULL;
    if (ds_network_from_json(json, &back) != DsStatus_Ok) return 5;
    ds_string_free(json);

    DsNetwork *bad = NULL;
    if (ds_square_net(0, &bad) == DsStatus_Ok || strlen(ds_last_error()) == 0) return 6;

    printf("%.17g\n", y);
    ds_network_free(back);
    ds_network_free(sq);
    return 0;
}
