#include <stdio.h>
#include "simgcf.h"
int main(void) {
  uint32_t us[] = {0, 1, 1, 2}, is[] = {0, 0, 1, 1};
  SimgcfGraph *g = NULL;
  if (simgcf_graph_from_edges(3, 2, us, is, 4, &g) != SIMGCF_STATUS_OK) return 1;
  double base[] = {1, 0.5, 0.25, 0.125};
  SimgcfFilterParams p = {SIMGCF_BASIS_MONOMIAL, 3, 1, 1, SIMGCF_QUADRANT_I, base, false, 1, -3, 0, false, 256};
  SimgcfFilter *f = NULL;
  if (simgcf_filter_fit(&p, &f) != SIMGCF_STATUS_OK) { puts(simgcf_last_error()); return 1; }
  double c[8]; size_t n = 0;
  simgcf_filter_coefficients(f, c, 8, &n);
  printf("simgcf %s: %zu nodes, %zu coefficients, c0=%.3f\n", simgcf_version(), simgcf_graph_node_count(g), n, c[0]);
  simgcf_filter_free(f); simgcf_graph_free(g);
  return 0;
}
