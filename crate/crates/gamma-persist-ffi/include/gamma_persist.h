#ifndef GAMMA_PERSIST_H
#define GAMMA_PERSIST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GpStatus {
  GP_STATUS_OK = 0,
  // A required pointer was null.
  GP_STATUS_NULL = 1,
  // A string argument was not valid UTF-8.
  GP_STATUS_UTF8 = 2,
  // Malformed JSON, numbers or shapes.
  GP_STATUS_PARSE = 3,
  // Well-formed input outside the domain of the operation.
  GP_STATUS_DOMAIN = 4,
  // An internal panic was caught at the boundary.
  GP_STATUS_PANIC = 5,
} GpStatus;

typedef struct GpBarcode GpBarcode;

typedef struct GpCone GpCone;

typedef struct GpPolyhedron GpPolyhedron;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Owned by the library.
const char *gp_last_error(void);

// # Safety
// `s` must come from this library or be null.
void gp_string_free(char *s);

// # Safety
// `json` must be a nul-terminated string; `out` a valid out-pointer.
enum GpStatus gp_barcode_from_json(const char *json, struct GpBarcode **out);

// # Safety
// `b` must be a live handle; `out` a valid out-pointer.
enum GpStatus gp_barcode_to_json(const struct GpBarcode *b, char **out);

// Total number of bars, counted with multiplicity.
//
// # Safety
// `b` must be a live handle; `out` a valid out-pointer.
enum GpStatus gp_barcode_len(const struct GpBarcode *b, size_t *out);

// # Safety
// `b` must come from this library or be null.
void gp_barcode_free(struct GpBarcode *b);

// # Safety
// `f`, `g` must be live handles; `out` a valid out-pointer.
enum GpStatus gp_convolve(const struct GpBarcode *f,
                          const struct GpBarcode *g,
                          struct GpBarcode **out);

// `shifted = true` selects `RHom(·, k[1])`, otherwise `RHom(·, k)`.
//
// # Safety
// `f` must be a live handle; `out` a valid out-pointer.
enum GpStatus gp_dualize(const struct GpBarcode *f, bool shifted, struct GpBarcode **out);

// # Safety
// `f` must be a live handle; `out` a valid out-pointer.
enum GpStatus gp_gammafy(const struct GpBarcode *f, struct GpBarcode **out);

// Distance bounds as a JSON document `{"lower","upper","exact"}`.
//
// # Safety
// `f`, `g` must be live handles; `out` a valid out-pointer.
enum GpStatus gp_distance(const struct GpBarcode *f, const struct GpBarcode *g, char **out);

// Writes 1 when `f` and `g` are `a`-isomorphic, 0 when not, -1 when undecided.
//
// # Safety
// `f`, `g` must be live handles; `a` a nul-terminated rational; `out` valid.
enum GpStatus gp_is_a_isomorphic(const struct GpBarcode *f,
                                 const struct GpBarcode *g,
                                 const char *a,
                                 int32_t *out);

// # Safety
// `json` must be a nul-terminated string; `out` a valid out-pointer.
enum GpStatus gp_polyhedron_from_json(const char *json, struct GpPolyhedron **out);

// # Safety
// `p` must be a live handle; `out` a valid out-pointer.
enum GpStatus gp_polyhedron_to_json(const struct GpPolyhedron *p, char **out);

// # Safety
// `p` must be a live handle; `out` a valid out-pointer.
enum GpStatus gp_polyhedron_is_empty(const struct GpPolyhedron *p, bool *out);

// Membership of the point whose coordinates are the `n` rational strings `coords`.
//
// # Safety
// `p` must be a live handle; `coords` must point to `n` nul-terminated strings.
enum GpStatus gp_polyhedron_contains(const struct GpPolyhedron *p,
                                     const char *const *coords,
                                     size_t n,
                                     bool *out);

// # Safety
// `p` must come from this library or be null.
void gp_polyhedron_free(struct GpPolyhedron *p);

// # Safety
// `json` must be a nul-terminated string; `out` a valid out-pointer.
enum GpStatus gp_cone_from_json(const char *json, struct GpCone **out);

// # Safety
// `c` must be a live handle; `out` a valid out-pointer.
enum GpStatus gp_cone_polar(const struct GpCone *c, struct GpCone **out);

// # Safety
// `c` must be a live handle; `out` a valid out-pointer.
enum GpStatus gp_cone_to_json(const struct GpCone *c, char **out);

// # Safety
// `c` must come from this library or be null.
void gp_cone_free(struct GpCone *c);

// # Safety
// `p`, `c` must be live handles; `out` a valid out-pointer.
enum GpStatus gp_gamma_locally_closed(const struct GpPolyhedron *p,
                                      const struct GpCone *c,
                                      bool *out);

// The γ-locally closed set `(Ω+γ) ∩ cl(Ω+γᵃ)` of an open γ-flat `Ω`.
//
// # Safety
// `omega`, `c` must be live handles; `out` a valid out-pointer.
enum GpStatus gp_omega_to_z(const struct GpPolyhedron *omega,
                            const struct GpCone *c,
                            struct GpPolyhedron **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GAMMA_PERSIST_H */
