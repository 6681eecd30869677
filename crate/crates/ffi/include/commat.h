#ifndef COMMAT_H
#define COMMAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes.
 */
typedef enum CommatStatus {
  COMMAT_STATUS_OK = 0,
  COMMAT_STATUS_NULL_POINTER = 1,
  COMMAT_STATUS_INVALID_UTF8 = 2,
  COMMAT_STATUS_PARSE_ERROR = 3,
  COMMAT_STATUS_LINT_ERROR = 4,
  COMMAT_STATUS_NON_COMMUTING = 5,
  COMMAT_STATUS_INVALID_ARGUMENT = 6,
  COMMAT_STATUS_INTERNAL = 7,
} CommatStatus;

/*
 Opaque parsed diagram.
 */
typedef struct CommatDiagram CommatDiagram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Last error message on this thread, or null. Owned by the caller; free it
 with [`commat_string_free`].
 */
char *commat_last_error(void);

/*
 Library version as a static string; do not free.
 */
const char *commat_version(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void commat_string_free(char *s);

/*
 Parses `.cdg` text. `field` may be null to keep the field named in the text.

 # Safety
 `text` and `field` must be NUL-terminated strings or null; `out` must be writable.
 */
enum CommatStatus commat_diagram_parse(const char *text,
                                       const char *field,
                                       struct CommatDiagram **out);

/*
 # Safety
 `d` must come from [`commat_diagram_parse`] and not have been freed. Null is ignored.
 */
void commat_diagram_free(struct CommatDiagram *d);

/*
 Number of vertices, generators and edges.

 # Safety
 `d` must be a live handle; the outputs must be writable.
 */
enum CommatStatus commat_diagram_size(const struct CommatDiagram *d,
                                      size_t *vertices,
                                      size_t *generators,
                                      size_t *edges);

/*
 Number of parallelogram violations; zero exactly when the diagram commutes.

 # Safety
 `d` must be a live handle; `count` must be writable.
 */
enum CommatStatus commat_diagram_lint(const struct CommatDiagram *d, size_t *count);

/*
 `dim M` and `dim A` of the realized diagram.

 # Safety
 `d` must be a live handle; the outputs must be writable.
 */
enum CommatStatus commat_diagram_dims(const struct CommatDiagram *d, size_t *dim_m, size_t *dim_a);

/*
 Full analysis report as JSON.

 # Safety
 `d` must be a live handle; `out` must be writable.
 */
enum CommatStatus commat_diagram_report_json(const struct CommatDiagram *d, char **out);

/*
 The diagram in `.cdg` syntax.

 # Safety
 `d` must be a live handle; `out` must be writable.
 */
enum CommatStatus commat_diagram_to_cdg(const struct CommatDiagram *d, char **out);

/*
 Analysis report of a named family as JSON. Unused parameters are ignored;
 pass 0 for them. `n` points to `n_len` values (may be null when 0).

 # Safety
 `name` must be a string; `field` a string or null; `n` valid for `n_len` reads.
 */
enum CommatStatus commat_family_report_json(const char *name,
                                            size_t m,
                                            size_t e0,
                                            size_t e1,
                                            const size_t *n,
                                            size_t n_len,
                                            const char *field,
                                            char **out);

/*
 Length comparison for a module over a PID with one endomorphism, as JSON.
 `factors` is comma separated; `endo` is a matrix literal, or null for a
 random endomorphism drawn from `seed`.

 # Safety
 `ring` and `factors` must be strings; `endo` a string or null; `out` writable.
 */
enum CommatStatus commat_rt_json(const char *ring,
                                 const char *factors,
                                 const char *endo,
                                 uint64_t seed,
                                 char **out);

/*
 Diagram search report as JSON. A `budget` of 0 keeps the default.

 # Safety
 `field` must be a string or null; `out` must be writable.
 */
enum CommatStatus commat_search_json(size_t generators,
                                     size_t max_vertices,
                                     uint64_t budget,
                                     size_t workers,
                                     const char *field,
                                     char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COMMAT_H */
