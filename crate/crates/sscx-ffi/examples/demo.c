/* Minimal C consumer for the sscx C ABI.
 *
 * Build (from the repository root, after `cargo build -p sscx-ffi`):
 *
 *   cc crates/sscx-ffi/examples/demo.c \
 *      -Icrates/sscx-ffi/include \
 *      -Ltarget/debug -lsscx_ffi -lm -o demo
 *   LD_LIBRARY_PATH=target/debug ./demo
 */
#include <stdio.h>

#include "sscx.h"

static int fail(const char *what, SscxStatus status) {
  fprintf(stderr, "%s failed: %s (%s)\n", what, sscx_status_name(status),
          sscx_last_error_message());
  return 1;
}

int main(void) {
  printf("sscx %s\n", sscx_version());

  SscxBrandt *b4 = NULL;
  SscxStatus status = sscx_brandt_new(4, &b4);
  if (status != SSCX_STATUS_OK) return fail("sscx_brandt_new", status);
  printf("B(%zu) has %zu elements\n", sscx_brandt_degree(b4), sscx_brandt_order(b4));

  /* The square pattern on the path 1-2-3-4: ids of
   * (1,2),(2,1),(2,3),(3,2),(3,4),(4,3),(1,4),(4,2),(3,1). */
  const size_t square[] = {2, 5, 7, 10, 12, 15, 4, 14, 9};
  bool face = false;
  status = sscx_is_face(b4, square, 9, &face);
  if (status != SSCX_STATUS_OK) return fail("sscx_is_face", status);
  printf("square pattern is a face: %s\n", face ? "yes" : "no");

  char *witness = NULL;
  status = sscx_peel_json(b4, square, 9, &witness);
  if (status != SSCX_STATUS_OK) return fail("sscx_peel_json", status);
  printf("peel witness: %s\n", witness);
  sscx_string_free(witness);

  uint64_t facets = 0;
  status = sscx_facet_count(b4, &facets);
  if (status != SSCX_STATUS_OK) return fail("sscx_facet_count", status);
  printf("H(B(4)) has %llu facets\n", (unsigned long long)facets);

  char *count = NULL;
  status = sscx_transitive_count(4, &count);
  if (status != SSCX_STATUS_OK) return fail("sscx_transitive_count", status);
  printf("T(4) = %s transitive relations\n", count);
  sscx_string_free(count);

  sscx_brandt_free(b4);
  return 0;
}
