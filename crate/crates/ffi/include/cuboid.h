#ifndef CUBOID_H
#define CUBOID_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CuboidStatus {
  CUBOID_STATUS_OK = 0,
  CUBOID_STATUS_NULL_POINTER = 1,
  CUBOID_STATUS_INVALID_UTF8 = 2,
  CUBOID_STATUS_PARSE_ERROR = 3,
  CUBOID_STATUS_DOMAIN_ERROR = 4,
  CUBOID_STATUS_BUDGET_EXHAUSTED = 5,
  CUBOID_STATUS_OUT_OF_RANGE = 6,
  CUBOID_STATUS_PANIC = 7,
} CuboidStatus;

// Which of the three reflections [`cuboid_point_reflect`] applies.
typedef enum CuboidReflection {
  CUBOID_REFLECTION_FIRST = 1,
  CUBOID_REFLECTION_SECOND = 2,
  CUBOID_REFLECTION_THIRD = 3,
} CuboidReflection;

// A nearly-perfect cuboid together with its `a`-`b` diagonal square.
typedef struct CuboidNpc CuboidNpc;

// A point on a congruent number curve, or its point at infinity.
typedef struct CuboidPoint CuboidPoint;

// Congruent number and solution pairs recovered from a cuboid.
typedef struct CuboidRecovered CuboidRecovered;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next failing call on the same thread; do not free.
const char *cuboid_last_error(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void cuboid_string_free(char *s);

// Validated affine point on `y^2 = x^3 - n^2 x`.
//
// # Safety
// String arguments must be null or nul-terminated; `out` must be writable.
enum CuboidStatus cuboid_point_new(const char *n,
                                   const char *x,
                                   const char *y,
                                   struct CuboidPoint **out);

// # Safety
// `p` must be null or a live handle from this library.
void cuboid_point_free(struct CuboidPoint *p);

// # Safety
// Handles must be live; `out` must be writable.
enum CuboidStatus cuboid_point_add(const struct CuboidPoint *a,
                                   const struct CuboidPoint *b,
                                   struct CuboidPoint **out);

// # Safety
// `p` must be live; `out` must be writable.
enum CuboidStatus cuboid_point_double(const struct CuboidPoint *p, struct CuboidPoint **out);

// # Safety
// `p` must be live; `out` must be writable.
enum CuboidStatus cuboid_point_mul(const struct CuboidPoint *p,
                                   int64_t k,
                                   struct CuboidPoint **out);

// # Safety
// `p` must be live; `out` must be writable.
enum CuboidStatus cuboid_point_reflect(const struct CuboidPoint *p,
                                       enum CuboidReflection which,
                                       struct CuboidPoint **out);

// False when `p` is null.
//
// # Safety
// `p` must be null or live.
bool cuboid_point_is_infinity(const struct CuboidPoint *p);

// `{"N": .., "x": "p/q", "y": "p/q"}` or `{"N": .., "infinity": true}`.
//
// # Safety
// `p` must be live; `out` must be writable.
enum CuboidStatus cuboid_point_to_json(const struct CuboidPoint *p, char **out);

// Cuboid from the pair with x-coordinates `x`, `z` on curve `n`.
//
// `param` is one of `first`, `first_reflected`, `second`,
// `second_reflected`, `invariant`.
//
// # Safety
// String arguments must be null or nul-terminated; `out` must be writable.
enum CuboidStatus cuboid_npc_generate(const char *n,
                                      const char *x,
                                      const char *z,
                                      const char *param,
                                      struct CuboidNpc **out);

// Cuboid from a JSON record with fields `a`, `b`, `c`, `d_ac`, `d_bc`, `d_s`.
//
// # Safety
// `record` must be null or nul-terminated; `out` must be writable.
enum CuboidStatus cuboid_npc_from_json(const char *record, struct CuboidNpc **out);

// # Safety
// `c` must be null or a live handle from this library.
void cuboid_npc_free(struct CuboidNpc *c);

// Writes whether all relations hold and whether the box is perfect.
//
// # Safety
// `c` must be live; `valid` and `pc` must be writable.
enum CuboidStatus cuboid_npc_verify(const struct CuboidNpc *c, bool *valid, bool *pc);

// # Safety
// `c` must be live; `out` must be writable.
enum CuboidStatus cuboid_npc_to_json(const struct CuboidNpc *c, char **out);

// Recovers `N` and the solution pairs; `family` is `invariant`, `first` or `second`.
//
// # Safety
// `c` must be live, `family` null or nul-terminated, `out` writable.
enum CuboidStatus cuboid_invert(const struct CuboidNpc *c,
                                const char *family,
                                struct CuboidRecovered **out);

// # Safety
// `r` must be null or a live handle from this library.
void cuboid_recovered_free(struct CuboidRecovered *r);

// # Safety
// `r` must be live; `out` must be writable.
enum CuboidStatus cuboid_recovered_n(const struct CuboidRecovered *r, char **out);

// Number of recovered pairs; 0 when `r` is null.
//
// # Safety
// `r` must be null or live.
size_t cuboid_recovered_pair_count(const struct CuboidRecovered *r);

// X and Z of pair `index` (I, II, III, IV in that order).
//
// # Safety
// `r` must be live; `x` and `z` must be writable.
enum CuboidStatus cuboid_recovered_pair(const struct CuboidRecovered *r,
                                        size_t index,
                                        char **x,
                                        char **z);

// # Safety
// `r` must be live; `out` must be writable.
enum CuboidStatus cuboid_recovered_to_json(const struct CuboidRecovered *r, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUBOID_H */
