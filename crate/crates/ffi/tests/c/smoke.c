#include <stdio.h>
#include <string.h>

#include "bbranching.h"

int main(void) {
    const char *doc = "{\"n\": 2, \"arcs\": [[0, 1], [1, 0]], \"b\": [1, 1], \"w\": [3, 2]}";
    BbInstance *inst = NULL;
    if (bb_instance_parse(doc, &inst) != BB_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", bb_last_error());
        return 1;
    }
    BbOutput *out = NULL;
    BbStatus st = bb_run(inst, "max-weight", NULL, false, &out);
    if (st != BB_STATUS_OK) {
        fprintf(stderr, "run: %s\n", bb_last_error());
        return 1;
    }
    int ok = strstr(bb_output_json(out), "\"weight\": \"3\"") != NULL;
    bb_output_free(out);
    st = bb_run(inst, "no-such-op", NULL, false, &out);
    ok = ok && st == BB_STATUS_UNKNOWN_OPERATION && out == NULL;
    bb_instance_free(inst);
    puts(ok ? "ok" : "mismatch");
    return ok ? 0 : 1;
}
