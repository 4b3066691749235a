#ifndef BIAMALG_H
#define BIAMALG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BiamalgStatus {
  BIAMALG_STATUS_OK = 0,
  BIAMALG_STATUS_NULL_ARGUMENT = 1,
  BIAMALG_STATUS_INVALID_UTF8 = 2,
  BIAMALG_STATUS_PARSE = 3,
  // invalid datum, unknown name or ill-typed binding
  BIAMALG_STATUS_INVALID = 4,
  BIAMALG_STATUS_CAP_EXCEEDED = 5,
  // a theorem's two sides disagree
  BIAMALG_STATUS_DISAGREEMENT = 6,
  BIAMALG_STATUS_PANIC = 7,
} BiamalgStatus;

// A loaded script.
typedef struct BiamalgEnv BiamalgEnv;

// Both sides of one theorem evaluation.
typedef struct BiamalgVerdict {
  bool lhs;
  bool rhs;
  bool agree;
} BiamalgVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The library version as a static NUL-terminated string.
const char *biamalg_version(void);

// The message of the last failure on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *biamalg_last_error_message(void);

// Length in bytes of the last error message, without the terminator.
size_t biamalg_last_error_length(void);

// Parse and evaluate a script. A zero cap keeps the script's own option,
// or the library default when the script sets none.
//
// # Safety
// `source` must be a NUL-terminated string and `out` a writable pointer.
enum BiamalgStatus biamalg_env_load(const char *source,
                                    size_t max_ring_size,
                                    size_t max_ideal_enum,
                                    struct BiamalgEnv **out);

// Release an environment. NULL is ignored.
//
// # Safety
// `env` must come from [`biamalg_env_load`] and not be freed twice.
void biamalg_env_free(struct BiamalgEnv *env);

// Number of elements of a ring bound in the script.
//
// # Safety
// Pointers must be valid; `name` NUL-terminated.
enum BiamalgStatus biamalg_ring_size(const struct BiamalgEnv *env,
                                     const char *name,
                                     size_t *out_size);

// Decide a property (`chained`, `arithmetical`, `reduced`, `wdim-le-1`,
// `von-neumann-regular`, `coherent`, `semihereditary`) of a bound ring.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum BiamalgStatus biamalg_check_property(const struct BiamalgEnv *env,
                                          const char *property,
                                          const char *ring,
                                          bool *out_holds);

// Evaluate both sides of a theorem on a datum bound in the script. A
// disagreement still fills `out` and returns `Disagreement`.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum BiamalgStatus biamalg_verify(const struct BiamalgEnv *env,
                                  const char *theorem,
                                  const char *datum,
                                  struct BiamalgVerdict *out);

// Like [`biamalg_verify`] but hands back the verdict as a record line.
// The string is released with [`biamalg_string_free`].
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum BiamalgStatus biamalg_verify_record(const struct BiamalgEnv *env,
                                         const char *theorem,
                                         const char *datum,
                                         char **out_line);

// Release a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void biamalg_string_free(char *s);

// Check a theorem on `count` generated instances. Stops at the first
// disagreement and returns `Disagreement`. Zero caps mean the defaults.
//
// # Safety
// `theorem` must be NUL-terminated; the out pointers writable.
enum BiamalgStatus biamalg_fuzz(const char *theorem,
                                uint64_t seed,
                                size_t count,
                                size_t max_ring_size,
                                size_t max_ideal_enum,
                                size_t *out_examined,
                                size_t *out_agreeing);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIAMALG_H */
