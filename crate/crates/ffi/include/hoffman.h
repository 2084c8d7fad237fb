/* Generated by cbindgen. Do not edit. */

#ifndef HOFFMAN_H
#define HOFFMAN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Values 2 to 4 match the command line exit codes.
 */
typedef enum HofStatus {
  HOF_STATUS_OK = 0,
  /**
   * A required pointer was null or a handle was misused.
   */
  HOF_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Malformed input: JSON, rationals, dimensions.
   */
  HOF_STATUS_INPUT_ERROR = 2,
  /**
   * The parameter or point lies outside the domain of the computation.
   */
  HOF_STATUS_DOMAIN_ERROR = 3,
  /**
   * An enumeration cap was exceeded.
   */
  HOF_STATUS_CAP_EXCEEDED = 4,
  /**
   * A Rust panic was caught at the boundary.
   */
  HOF_STATUS_PANIC = 5,
} HofStatus;

/**
 * Opaque problem instance.
 */
typedef struct HofInstance HofInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an instance from JSON text. `lenient` ignores unknown fields.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum HofStatus hof_instance_from_json(const char *json, bool lenient, struct HofInstance **out);

/**
 * Looks up a bundled instance: instanceA, instanceB, instanceC or zeroRows.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a writable pointer.
 */
enum HofStatus hof_instance_bundled(const char *name, struct HofInstance **out);

/**
 * Sets the constraint enumeration cap (the analogue of `HOFFMAN_ENUM_CAP`).
 *
 * # Safety
 * `inst` must be a live handle or null.
 */
enum HofStatus hof_instance_set_enum_cap(struct HofInstance *inst, size_t cap);

/**
 * Releases an instance. Null is ignored.
 *
 * # Safety
 * `inst` must come from this library and must not be used afterwards.
 */
void hof_instance_free(struct HofInstance *inst);

/**
 * Hex SHA-256 digest of the canonical instance JSON.
 *
 * # Safety
 * `inst` must be a live handle and `out` a writable pointer.
 */
enum HofStatus hof_instance_digest(const struct HofInstance *inst, char **out);

/**
 * Minimal KKT subsets; pass `b = NULL` for the whole family.
 *
 * # Safety
 * `inst` must be a live handle, `b` null or a NUL-terminated string, `out` writable.
 */
enum HofStatus hof_kkt(const struct HofInstance *inst, const char *b, char **out);

/**
 * Hoffman constant with its witness.
 *
 * # Safety
 * `inst` must be a live handle and `out` writable.
 */
enum HofStatus hof_hoffman(const struct HofInstance *inst, char **out);

/**
 * Calmness modulus at `(b, x)`.
 *
 * # Safety
 * `inst` must be a live handle, `b` and `x` NUL-terminated strings, `out` writable.
 */
enum HofStatus hof_calmness(const struct HofInstance *inst,
                            const char *b,
                            const char *x,
                            char **out);

/**
 * Lipschitz upper semicontinuity modulus at `b`.
 *
 * # Safety
 * `inst` must be a live handle, `b` a NUL-terminated string, `out` writable.
 */
enum HofStatus hof_lipschitz_usc(const struct HofInstance *inst, const char *b, char **out);

/**
 * Break steps and pieces of the segment from `from` to `to`.
 *
 * # Safety
 * `inst` must be a live handle, `from` and `to` NUL-terminated strings, `out` writable.
 */
enum HofStatus hof_breaks(const struct HofInstance *inst,
                          const char *from,
                          const char *to,
                          char **out);

/**
 * Hoffman constant under joint perturbations of `(c, b)`.
 *
 * # Safety
 * `inst` must be a live handle and `out` writable.
 */
enum HofStatus hof_canonical(const struct HofInstance *inst, char **out);

/**
 * Sampling validation with the default radius and grid.
 *
 * # Safety
 * `inst` must be a live handle and `out` writable.
 */
enum HofStatus hof_validate(const struct HofInstance *inst,
                            uint64_t seed,
                            size_t samples,
                            char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void hof_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *hof_last_error(void);

/**
 * Library version as a static string.
 */
const char *hof_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOFFMAN_H */
