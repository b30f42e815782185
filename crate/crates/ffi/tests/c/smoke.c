#include <stdio.h>
#include <string.h>
#include "npspec.h"

static const char *QUEENS =
    "DATABASE n = 5;\n"
    "SPECIFICATION Permutation({1..n}, q).\n"
    "fail <-- q(X,C), q(Y,D), X < Y, Y - X == D - C.\n"
    "fail <-- q(X,C), q(Y,D), X < Y, Y - X == C - D.\n";

int main(void) {
    NpspecProgram *p = NULL;
    if (npspec_program_parse(QUEENS, &p) != NPSPEC_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", npspec_last_error_message());
        return 1;
    }
    uint64_t count = 0;
    if (npspec_program_solve(p, NPSPEC_MODE_COUNT, 1000, &count, NULL) != NPSPEC_STATUS_OK || count != 10) {
        fprintf(stderr, "solve: %llu\n", (unsigned long long)count);
        return 2;
    }
    char *asp = NULL;
    if (npspec_program_translate(p, NPSPEC_DIALECT_GRINGO, NPSPEC_GUESS_CHOICE, NPSPEC_PERM_CHECK_AGGREGATE, &asp) != NPSPEC_STATUS_OK
        || strstr(asp, "#const n=5.") == NULL) {
        return 3;
    }
    npspec_string_free(asp);
    if (npspec_program_translate(p, 7, 0, 0, &asp) != NPSPEC_STATUS_INVALID_ARGUMENT || asp != NULL) {
        return 4;
    }
    npspec_program_free(p);
    if (npspec_program_parse("DATABASE n = ;", &p) != NPSPEC_STATUS_INPUT_ERROR || p != NULL) {
        return 5;
    }
    printf("ok %s\n", npspec_version());
    return 0;
}
