#ifndef HORNPHASE_H
#define HORNPHASE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum HpStatus {
  HP_STATUS_OK = 0,
  HP_STATUS_NULL_POINTER = 1,
  HP_STATUS_INVALID_ARGUMENT = 2,
  HP_STATUS_DOMAIN = 3,
  HP_STATUS_CAPACITY = 4,
  HP_STATUS_PARSE = 5,
  HP_STATUS_UNDECIDED = 6,
  HP_STATUS_INTERNAL = 7,
  HP_STATUS_PANIC = 8,
} HpStatus;

/**
 * Opaque Horn formula.
 */
typedef struct HpFormula HpFormula;

/**
 * Outcome of positive unit resolution.
 */
typedef struct HpPurResult {
  /**
   * 1 if satisfiable, 0 otherwise.
   */
  int32_t satisfiable;
  /**
   * Variables set to true.
   */
  uint64_t iterations;
  /**
   * Iterations plus the final check.
   */
  uint64_t stages;
} HpPurResult;

/**
 * Monte Carlo estimate of a chain's probability of emptying.
 */
typedef struct HpHitEstimate {
  double probability;
  double half_width_95;
  uint64_t trials;
  uint64_t undecided;
} HpHitEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last error on this thread; empty after a success. The
 * pointer stays valid until the next call on the same thread.
 */
const char *hp_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hp_version(void);

/**
 * Samples `m` clauses uniformly from all Horn clauses of length at most
 * `k` over `n` variables, using the stream seeded by `seed`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum HpStatus hp_formula_sample(uint32_t n,
                                uint32_t k,
                                uint64_t m,
                                uint64_t seed,
                                struct HpFormula **out);

/**
 * Like `hp_formula_sample`, with `m = round(chat * H_k(n) / n)`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum HpStatus hp_formula_sample_rescaled(uint32_t n,
                                         uint32_t k,
                                         double chat,
                                         uint64_t seed,
                                         struct HpFormula **out);

/**
 * Parses the text format written by `hp_formula_to_text`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum HpStatus hp_formula_parse(const char *text, struct HpFormula **out);

/**
 * Serializes a formula; release the string with `hp_string_free`.
 *
 * # Safety
 * `formula` must be a live handle; `out` must be writable.
 */
enum HpStatus hp_formula_to_text(const struct HpFormula *formula, char **out);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void hp_string_free(char *s);

/**
 * Releases a formula. Null is ignored.
 *
 * # Safety
 * `formula` must come from this library and not have been freed.
 */
void hp_formula_free(struct HpFormula *formula);

/**
 * Number of variables, clause-length bound and clause count.
 *
 * # Safety
 * `formula` must be a live handle; the out-pointers must be writable.
 */
enum HpStatus hp_formula_shape(const struct HpFormula *formula,
                               uint32_t *n,
                               uint32_t *k,
                               uint64_t *m);

/**
 * Decides satisfiability by positive unit resolution.
 *
 * # Safety
 * `formula` must be a live handle; `out` must be writable.
 */
enum HpStatus hp_pur(const struct HpFormula *formula, struct HpPurResult *out);

/**
 * Writes PUR's satisfying assignment (one byte per variable, 0 or 1) into
 * `buf`, which must hold `n` bytes. Fails with `Domain` if the formula is
 * unsatisfiable.
 *
 * # Safety
 * `formula` must be a live handle; `buf` must point to `len` writable bytes.
 */
enum HpStatus hp_pur_witness(const struct HpFormula *formula, uint8_t *buf, size_t len);

/**
 * Exhaustive satisfiability check (at most 24 variables).
 *
 * # Safety
 * `formula` must be a live handle; `out` must be writable.
 */
enum HpStatus hp_brute_force_sat(const struct HpFormula *formula, int32_t *out);

/**
 * Limit satisfaction probability for `k = 2` at raw density `c`.
 *
 * # Safety
 * `out` must be writable.
 */
enum HpStatus hp_p2(double c, double *out);

/**
 * Limit satisfaction probability of the uniform case: one minus the
 * mean-field product truncated at tolerance `tol`.
 *
 * # Safety
 * `out` must be writable.
 */
enum HpStatus hp_p_inf(double c, double tol, double *out);

/**
 * The mean-field product `prod_{j>=0} (1 - exp(-c 2^j))`.
 *
 * # Safety
 * `out` must be writable.
 */
enum HpStatus hp_mean_field_product(double c, double tol, double *out);

/**
 * Probability that the constant-rate queue started at 1 ever empties.
 *
 * # Safety
 * `out` must be writable.
 */
enum HpStatus hp_queue_hit_prob(double lambda, double *out);

/**
 * Limit mean PUR stage count for `k = 2`; `*is_infinite` is set to 1 at
 * the critical point, where `*out` is `+inf`.
 *
 * # Safety
 * `out` and `is_infinite` must be writable.
 */
enum HpStatus hp_q_runtime(double c, double *out, int32_t *is_infinite);

/**
 * Rescaled density `m n / H_k(n)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum HpStatus hp_rescale(uint32_t n, uint32_t k, uint64_t m, double *out);

/**
 * Clause count `round(chat * H_k(n) / n)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum HpStatus hp_m_from_chat(uint32_t n, uint32_t k, double chat, uint64_t *out);

/**
 * Number of Horn clauses of length at most `k` over `n` variables, if it
 * fits in 64 bits.
 *
 * # Safety
 * `out` must be writable.
 */
enum HpStatus hp_clause_count(uint64_t n, uint64_t k, uint64_t *out);

/**
 * Monte Carlo estimate of the probability that the `k`-chain at rescaled
 * density `chat` ever empties. Zero `horizon` or `escape_threshold` select
 * the defaults.
 *
 * # Safety
 * `out` must be writable.
 */
enum HpStatus hp_estimate_pk(uint32_t k,
                             double chat,
                             uint64_t trials,
                             uint64_t horizon,
                             uint64_t escape_threshold,
                             uint64_t seed,
                             struct HpHitEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HORNPHASE_H */
