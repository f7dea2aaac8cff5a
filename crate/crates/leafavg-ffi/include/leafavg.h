#ifndef LEAFAVG_H
#define LEAFAVG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LfStatus {
    LF_STATUS_OK = 0,
    LF_STATUS_NULL_POINTER = 1,
    LF_STATUS_INVALID = 2,
    LF_STATUS_RESOURCE_CAP = 3,
    LF_STATUS_DOMAIN = 4,
    LF_STATUS_PANIC = 5,
} LfStatus;

/**
 * Opaque circle action with its base point and orbit tolerance.
 */
typedef struct LfAction LfAction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Rotation by `alpha` on the circle, base point `y`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum LfStatus lf_action_new_rotation(double alpha, double y, struct LfAction **out);

/**
 * Default ping-pong action on `generators` (1 to 3) maps, based at the
 * midpoint of its interval `J`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum LfStatus lf_action_new_pingpong_default(uintptr_t generators, struct LfAction **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `a` must come from an `lf_action_new_*` call and not be freed twice.
 */
void lf_action_free(struct LfAction *a);

/**
 * Number of reduced non-empty words of length at most `n` in `k` free
 * generators.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum LfStatus lf_ball_count(uintptr_t k, uintptr_t n, uint64_t *out);

/**
 * `|G_n(y)|`, the number of distinct orbit points reached by words of
 * length at most `n`.
 *
 * # Safety
 * `a` must be a live handle and `out` valid for writes.
 */
enum LfStatus lf_orbit_ball_size(const struct LfAction *a, uintptr_t n, uintptr_t *out);

/**
 * `|G_n(y) \ G_{n-1}(y)| / |G_n(y)|` at radius `n >= 1`.
 *
 * # Safety
 * `a` must be a live handle and `out` valid for writes.
 */
enum LfStatus lf_lambda(const struct LfAction *a, uintptr_t n, double *out);

/**
 * Oscillation certificate for the preset thin plug up to `big_n`, as a
 * JSON string owned by the caller.
 *
 * # Safety
 * `a` must be a live handle and `out` valid for writes.
 */
enum LfStatus lf_certificate_json(const struct LfAction *a, uintptr_t big_n, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void lf_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call on the same thread.
 */
const char *lf_last_error(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* LEAFAVG_H */
