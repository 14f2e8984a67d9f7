#ifndef PHIP_GROVER_H
#define PHIP_GROVER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PgMode {
  PG_MODE_CIRCUIT = 0,
  PG_MODE_PULSE = 1,
} PgMode;

typedef enum PgStatus {
  PG_STATUS_OK = 0,
  PG_STATUS_NULL_POINTER = 1,
  PG_STATUS_INVALID_ARGUMENT = 2,
  PG_STATUS_PARSE_ERROR = 3,
  PG_STATUS_CONFIG_ERROR = 4,
  PG_STATUS_BUFFER_TOO_SMALL = 5,
  PG_STATUS_VERIFICATION_FAILED = 6,
  PG_STATUS_PANIC = 7,
} PgStatus;

/**
 * Opaque pulse-sequence handle.
 */
typedef struct PgSequence PgSequence;

/**
 * Opaque spin-system handle.
 */
typedef struct PgSystem PgSystem;

typedef struct PgLine {
  /**
   * 1 or 2.
   */
  uint8_t qubit;
  /**
   * Basis value of the other spin.
   */
  uint8_t partner;
  double frequency_hz;
  double amplitude;
} PgLine;

typedef struct PgRunResult {
  /**
   * Populations of |00>, |01>, |10>, |11> before readout.
   */
  double populations[4];
  struct PgLine lines[4];
  /**
   * Read-out input `2p + q`, or -1 when a multiplet vanishes.
   */
  int32_t outcome;
  double confidence[2];
  double total_delay_s;
  double attenuation;
} PgRunResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` and returns its
 * length including the NUL (0 when there is none).
 *
 * # Safety
 * `buf` must be null or valid for `cap` bytes.
 */
size_t pg_last_error(char *buf, size_t cap);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pg_version(void);

/**
 * The measured dihydride system. Free with [`pg_system_free`].
 */
struct PgSystem *pg_system_default(void);

/**
 * Builds a system from flat `key = value` config text.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PgStatus pg_system_from_config(const char *text, struct PgSystem **out);

/**
 * # Safety
 * `sys` must be null or a handle from this library that has not been freed.
 */
void pg_system_free(struct PgSystem *sys);

/**
 * Parses sequence text. On a parse error the message names the token.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PgStatus pg_sequence_parse(const char *text, struct PgSequence **out);

/**
 * Looks up a library sequence. `f` is the satisfying input `0..=3` for
 * `grover` and must be negative for every other name.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PgStatus pg_sequence_library(const char *name, int32_t f, struct PgSequence **out);

/**
 * # Safety
 * `seq` must be a valid handle.
 */
size_t pg_sequence_len(const struct PgSequence *seq);

/**
 * Canonical text of the sequence.
 *
 * # Safety
 * `seq` must be a valid handle, `buf` null or valid for `cap` bytes, and
 * `needed` null or valid.
 */
enum PgStatus pg_sequence_serialize(const struct PgSequence *seq,
                                    char *buf,
                                    size_t cap,
                                    size_t *needed);

/**
 * Total delay time of `seq` in seconds for `sys`, or NaN for a null handle.
 *
 * # Safety
 * Both handles must be valid.
 */
double pg_sequence_duration(const struct PgSequence *seq, const struct PgSystem *sys);

/**
 * # Safety
 * `seq` must be null or a handle from this library that has not been freed.
 */
void pg_sequence_free(struct PgSequence *seq);

/**
 * Runs Grover's search for satisfying input `f` (`2p + q`) from a Werner
 * state of purity `epsilon`.
 *
 * # Safety
 * `sys` must be a valid handle and `out` a valid pointer.
 */
enum PgStatus pg_run_grover(const struct PgSystem *sys,
                            uint8_t f,
                            double epsilon,
                            enum PgMode mode,
                            bool relaxation,
                            struct PgRunResult *out);

/**
 * Runs the phase-reference experiment.
 *
 * # Safety
 * `sys` must be a valid handle and `out` a valid pointer.
 */
enum PgStatus pg_run_reference(const struct PgSystem *sys,
                               double epsilon,
                               bool relaxation,
                               struct PgRunResult *out);

/**
 * Runs the five pulse-versus-gate checks (`P_prep`, `P_00` .. `P_11`) and
 * writes their fidelities into `fidelities[0..5]`. Returns
 * `PG_STATUS_VERIFICATION_FAILED` if any is below `1 - 1e-6`.
 *
 * # Safety
 * `sys` must be a valid handle and `fidelities` valid for five doubles.
 */
enum PgStatus pg_verify(const struct PgSystem *sys, bool flip_h, double *fidelities);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHIP_GROVER_H */
