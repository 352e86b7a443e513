#include <stdio.h>
#include "fintop.h"

int main(void) {
    FintopSpace *c = NULL;
    if (fintop_space_circle(3, &c) != FINTOP_STATUS_OK) {
        return 1;
    }
    size_t lower = 0;
    ptrdiff_t upper = -1;
    if (fintop_tc_exact(c, 4, &lower, &upper) != FINTOP_STATUS_OK) {
        fprintf(stderr, "%s\n", fintop_last_error());
        return 1;
    }
    printf("tc %zu %td\n", lower, upper);
    if (fintop_space_circle(1, &c) != FINTOP_STATUS_INVALID_PARAMETER) {
        return 1;
    }
    fintop_space_free(c);
    return 0;
}
