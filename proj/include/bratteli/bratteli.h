#ifndef BRATTELI_H
#define BRATTELI_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(BRATTELI_BUILD)
#    define BD_API __declspec(dllexport)
#  else
#    define BD_API __declspec(dllimport)
#  endif
#else
#  define BD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every call returns BD_OK or the code of the failing condition; the message
 * of the last failure on the calling thread is available from bd_last_error().
 * Strings returned through char** are owned by the caller and released with
 * bd_string_free(). Handles are immutable once created. */
typedef enum bd_status {
  BD_OK = 0,
  BD_SHAPE_MISMATCH,
  BD_ZERO_ROW_OR_COLUMN,
  BD_EMPTY_ROOT_LEVEL,
  BD_DEPTH_EXCEEDED,
  BD_INVALID_CUTS,
  BD_INDEX_OUT_OF_RANGE,
  BD_NO_PAIRABLE_EDGES,
  BD_BUNDLES_TOO_SMALL,
  BD_CONSISTENCY_VIOLATION,
  BD_NOT_NORMALIZED,
  BD_NOT_PRIMITIVE,
  BD_NOT_SYMMETRIC,
  BD_TOLERANCE_AMBIGUOUS,
  BD_UNREACHABLE_TARGET,
  BD_ARGUMENT_OUT_OF_RANGE,
  BD_WRONG_DIAGRAM,
  BD_PATH_SPACE_TOO_LARGE,
  BD_OVERFLOW,
  BD_PARSE_ERROR,
  BD_INVALID_ARGUMENT,
  BD_INTERNAL
} bd_status;

typedef struct bd_diagram bd_diagram;
typedef struct bd_clopen bd_clopen;
typedef struct bd_measure bd_measure;
typedef struct bd_element bd_element;
typedef struct bd_character bd_character;
typedef struct bd_rperm bd_rperm;

BD_API const char* bd_last_error(void);
/* "ShapeMismatch", ..., "Internal". */
BD_API const char* bd_status_name(bd_status status);
BD_API void bd_string_free(char* s);

/* Exact value text ("p/q" or "[lo,hi]") rendered as a decimal with an error bound. */
BD_API bd_status bd_value_decimal(const char* value, int digits, char** out);

/* Diagrams. JSON: {"levels", "incidence", "tail"}. */
BD_API bd_status bd_diagram_from_json(const char* json, bd_diagram** out);
BD_API void bd_diagram_free(bd_diagram* d);
BD_API bd_status bd_diagram_to_json(const bd_diagram* d, char** out);
BD_API bd_status bd_diagram_summary(const bd_diagram* d, size_t depth, char** out);
/* {"level": n, "counts": [h_v, ...]} with counts as decimal strings when large. */
BD_API bd_status bd_diagram_path_counts(const bd_diagram* d, size_t level, char** out);
BD_API bd_status bd_diagram_telescope(const bd_diagram* d, const size_t* cuts, size_t ncuts, bd_diagram** out);
BD_API bd_status bd_diagram_simple(const bd_diagram* d, size_t bound, char** out);
BD_API bd_status bd_diagram_even_telescoping(const bd_diagram* d, size_t bound, char** out);
BD_API bd_status bd_diagram_dot(const bd_diagram* d, size_t depth, int collapse_multiedges, char** out);

/* Clopen sets. JSON: {"level": n, "sets": {"v": [indices]}}. */
BD_API bd_status bd_clopen_from_json(const bd_diagram* d, const char* json, bd_clopen** out);
BD_API void bd_clopen_free(bd_clopen* a);
BD_API bd_status bd_clopen_to_json(const bd_clopen* a, char** out);

/* Measures. JSON: {"weights": {"n": {"v": "p/q"}}, "tail": ...}. */
BD_API bd_status bd_measure_from_json(const bd_diagram* d, const char* json, bd_measure** out);
BD_API bd_status bd_measure_builtin(const bd_diagram* d, bd_measure** out);
BD_API void bd_measure_free(bd_measure* mu);
BD_API bd_status bd_measure_to_json(const bd_measure* mu, size_t depth, char** out);
BD_API bd_status bd_measure_of(const bd_measure* mu, const bd_clopen* a, char** value);

/* Elements of the full group at a level. JSON: {"level": n, "perms": {"v": [images]}}. */
BD_API bd_status bd_element_from_json(const bd_diagram* d, const char* json, bd_element** out);
BD_API void bd_element_free(bd_element* g);
BD_API bd_status bd_element_to_json(const bd_element* g, char** out);
BD_API size_t bd_element_level(const bd_element* g);
/* g h: h acts first. */
BD_API bd_status bd_element_compose(const bd_diagram* d, const bd_element* g, const bd_element* h, bd_element** out);
BD_API bd_status bd_element_inverse(const bd_diagram* d, const bd_element* g, bd_element** out);
BD_API bd_status bd_element_fix(const bd_diagram* d, const bd_element* g, bd_clopen** out);
BD_API bd_status bd_element_support(const bd_diagram* d, const bd_element* g, bd_clopen** out);
BD_API bd_status bd_element_cycles(const bd_element* g, char** out);
/* Conjugacy inside G_level; level must be at least the levels of g and h. */
BD_API bd_status bd_element_conjugate(const bd_diagram* d, const bd_element* g, const bd_element* h, size_t level,
                                      char** out);
BD_API bd_status bd_make_hn(const bd_diagram* d, const bd_clopen* a, size_t n, char** out);
BD_API bd_status bd_claim1(size_t p, char** out);
/* eps as "p/q". The report carries the family and its verification against
 * the given measures. */
BD_API bd_status bd_si_family(const bd_diagram* d, const bd_element* s, size_t r, const char* eps,
                              const bd_measure* const* measures, size_t nmeasures, char** out);
BD_API bd_status bd_element_metric(const bd_diagram* d, const bd_element* g, const bd_element* h,
                                   const bd_measure* const* measures, size_t nmeasures, char** value);

/* Characters. JSON: {"terms": [{"measure": "builtin" | {...}, "alpha": k | "inf"}]}. */
BD_API bd_status bd_character_from_json(const bd_diagram* d, const char* json, bd_character** out);
BD_API void bd_character_free(bd_character* chi);
BD_API bd_status bd_character_eval(const bd_diagram* d, const bd_character* chi, const bd_element* g, char** value);
BD_API bd_status bd_character_trace(const bd_diagram* d, const bd_character* chi, const bd_clopen* a, char** value);
BD_API bd_status bd_character_gram(const bd_diagram* d, const bd_character* chi, const bd_element* const* elements,
                                   size_t nelements, char** out);
BD_API bd_status bd_character_central(const bd_diagram* d, const bd_character* chi, const bd_element* const* elements,
                                      size_t nelements, char** out);
/* Matrix JSON in, {"psd": bool, "exact": bool, "witness": [...], ...} out. A
 * matrix that is not PSD is a verdict, not an error. */
BD_API bd_status bd_psd_check(const char* matrix_json, double tolerance, char** out);
/* targets: JSON array of "p/q"; tolerance as "p/q". */
BD_API bd_status bd_character_mult(const bd_diagram* d, const bd_character* chi, const bd_element* g, const char* targets,
                                   size_t n_from, size_t n_to, const char* tolerance, char** out);
BD_API bd_status bd_character_proj_limit(const bd_diagram* d, const bd_character* chi, const bd_clopen* a, size_t n_from,
                                         size_t n_to, char** out);

/* Rational permutations of [0,1). JSON: {"n": n, "perm": [...]}. */
BD_API bd_status bd_rperm_from_json(const char* json, bd_rperm** out);
BD_API void bd_rperm_free(bd_rperm* r);
BD_API bd_status bd_rperm_to_json(const bd_rperm* r, char** out);
BD_API bd_status bd_rperm_refine(const bd_rperm* r, size_t m, bd_rperm** out);
BD_API bd_status bd_rperm_compose(const bd_rperm* g, const bd_rperm* h, bd_rperm** out);
BD_API bd_status bd_rperm_apply(const bd_rperm* r, const char* x, char** value);
BD_API bd_status bd_rperm_fix(const bd_rperm* r, char** value);
/* alpha: "k" or "inf". */
BD_API bd_status bd_rperm_char(const bd_rperm* r, const char* alpha, char** value);
/* Between B_R elements and rational permutations. */
BD_API bd_status bd_rperm_from_element(const bd_diagram* d, const bd_element* g, bd_rperm** out);
BD_API bd_status bd_rperm_to_element(const bd_diagram* d, const bd_rperm* r, bd_element** out);

#ifdef __cplusplus
}
#endif

#endif
