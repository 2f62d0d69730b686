/* C interface for the rlsmt string-constraint solver. */

#ifndef RLSMT_H
#define RLSMT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Call succeeded.
 */
#define RLSMT_OK 0

/**
 * A required pointer argument was NULL.
 */
#define RLSMT_ERR_NULL_ARGUMENT -1

/**
 * Input text was not valid UTF-8.
 */
#define RLSMT_ERR_UTF8 -2

/**
 * The problem text did not parse; see `error_out` for the reason.
 */
#define RLSMT_ERR_PARSE -3

/**
 * Solving failed outright (as opposed to returning "unknown").
 */
#define RLSMT_ERR_SOLVE -4

/**
 * An index or option value was out of range.
 */
#define RLSMT_ERR_RANGE -5

/**
 * An internal invariant failed; the library state is still sound.
 */
#define RLSMT_ERR_PANIC -6

/**
 * The formula has a satisfying assignment; witness accessors apply.
 */
#define RLSMT_STATUS_SAT 1

/**
 * The formula was proved unsatisfiable.
 */
#define RLSMT_STATUS_UNSAT 0

/**
 * Limits ran out first; `rlsmt_result_reason` says which.
 */
#define RLSMT_STATUS_UNKNOWN 2

/**
 * Bounded and inductive engines in parallel; first answer wins.
 */
#define RLSMT_ENGINE_PORTFOLIO 0

/**
 * Bounded search only: finds assignments, never proves absence.
 */
#define RLSMT_ENGINE_BMC 1

/**
 * Inductive strengthening; requires `RLSMT_MODE_REVERSED`.
 */
#define RLSMT_ENGINE_IC3 2

/**
 * Explicit-state enumeration; requires `RLSMT_MODE_REVERSED`.
 */
#define RLSMT_ENGINE_EXPLICIT 3

/**
 * Deterministic encoding over the reversed automata (the default).
 */
#define RLSMT_MODE_REVERSED 0

/**
 * Nondeterministic forward encoding; bounded engines only.
 */
#define RLSMT_MODE_FORWARD 1

/**
 * A parsed conjunction/disjunction of regex membership constraints.
 */
typedef struct RlsmtProblem RlsmtProblem;

/**
 * The outcome of one `rlsmt_solve` call.
 */
typedef struct RlsmtResult RlsmtResult;

/**
 * Tuning knobs for `rlsmt_solve`.  Start from
 * `rlsmt_options_default` and override fields as needed; a zero
 * `timeout_ms` means no timeout.
 */
typedef struct RlsmtOptions {
  int32_t engine;
  int32_t mode;
  /**
   * Longest run the bounded engine will look for.
   */
  size_t max_bound;
  /**
   * Frame cap for the inductive engine.
   */
  size_t max_frames;
  /**
   * State cap for explicit enumeration.
   */
  size_t state_limit;
  uint64_t timeout_ms;
} RlsmtOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version of the underlying solver library, as a static string.
 */
const char *rlsmt_version(void);

/**
 * The default solver configuration: portfolio engine, reversed
 * encoding, generous limits, no timeout.
 */
struct RlsmtOptions rlsmt_options_default(void);

/**
 * Parse problem text (`var` declarations followed by an `assert`
 * formula) into a handle, stored to `*out` on success.  The caller
 * owns the handle and must release it with `rlsmt_problem_free`.
 *
 * # Safety
 *
 * `text` must be a NUL-terminated string; `out` must be valid to
 * write through.
 */
int32_t rlsmt_parse(const char *text, struct RlsmtProblem **out, char **error_out);

/**
 * Release a problem handle.  NULL is a no-op.
 *
 * # Safety
 *
 * `problem` must have come from `rlsmt_parse` and not been freed.
 */
void rlsmt_problem_free(struct RlsmtProblem *problem);

/**
 * Decide the problem.  `options` may be NULL for the defaults.  On
 * success `*out` receives a result handle owned by the caller (free
 * with `rlsmt_result_free`); note that an "unknown" verdict is a
 * success here — only infrastructure failures return an error code.
 *
 * # Safety
 *
 * `problem` must be a live handle from `rlsmt_parse`; `out` must be
 * valid to write through.
 */
int32_t rlsmt_solve(const struct RlsmtProblem *problem,
                    const struct RlsmtOptions *options,
                    struct RlsmtResult **out,
                    char **error_out);

/**
 * Release a result handle.  NULL is a no-op.
 *
 * # Safety
 *
 * `result` must have come from `rlsmt_solve` and not been freed.
 */
void rlsmt_result_free(struct RlsmtResult *result);

/**
 * One of the `RLSMT_STATUS_*` constants, or
 * `RLSMT_ERR_NULL_ARGUMENT` for a NULL handle.
 *
 * # Safety
 *
 * `result` must be NULL or a live handle.
 */
int32_t rlsmt_result_status(const struct RlsmtResult *result);

/**
 * Name of the engine that produced the answer (borrowed).
 *
 * # Safety
 *
 * `result` must be NULL or a live handle.
 */
const char *rlsmt_result_engine(const struct RlsmtResult *result);

/**
 * Bound reached, frames built, or states visited, per engine.
 *
 * # Safety
 *
 * `result` must be NULL or a live handle.
 */
size_t rlsmt_result_depth(const struct RlsmtResult *result);

/**
 * Wall-clock solving time in milliseconds.
 *
 * # Safety
 *
 * `result` must be NULL or a live handle.
 */
uint64_t rlsmt_result_time_ms(const struct RlsmtResult *result);

/**
 * Why the verdict is "unknown" (borrowed); NULL for other verdicts.
 *
 * # Safety
 *
 * `result` must be NULL or a live handle.
 */
const char *rlsmt_result_reason(const struct RlsmtResult *result);

/**
 * Number of variables in the witness: the declared variable count
 * for sat results, zero otherwise.
 *
 * # Safety
 *
 * `result` must be NULL or a live handle.
 */
size_t rlsmt_result_num_vars(const struct RlsmtResult *result);

/**
 * Name of witness variable `index` (borrowed), in declaration
 * order; NULL when out of range.
 *
 * # Safety
 *
 * `result` must be NULL or a live handle.
 */
const char *rlsmt_result_var_name(const struct RlsmtResult *result, size_t index);

/**
 * The byte string assigned to witness variable `index`.  `*bytes_out`
 * borrows from the result handle and is not NUL-terminated — the
 * value may legitimately contain any byte; `*len_out` receives its
 * length.  A zero-length value yields a non-NULL pointer.
 *
 * # Safety
 *
 * `result` must be NULL or a live handle; `bytes_out` and `len_out`
 * must be valid to write through.
 */
int32_t rlsmt_result_value(const struct RlsmtResult *result,
                           size_t index,
                           const uint8_t **bytes_out,
                           size_t *len_out);

/**
 * Compile the problem to a sequential circuit and store its ASCII
 * AIGER text to `*out` as a string the caller must release with
 * `rlsmt_string_free`.  The single output is the "formula holds
 * here" flag checked by the engines.
 *
 * # Safety
 *
 * `problem` must be a live handle; `out` must be valid to write
 * through.
 */
int32_t rlsmt_problem_to_aiger(const struct RlsmtProblem *problem, char **out, char **error_out);

/**
 * Release a string produced by this library (error messages, AIGER
 * text).  NULL is a no-op.
 *
 * # Safety
 *
 * `s` must have come from this library and not been freed.
 */
void rlsmt_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RLSMT_H */
