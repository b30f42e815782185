#ifndef NPSPEC_H
#define NPSPEC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdint.h>
#include <stddef.h>

#define NPSPEC_DIALECT_DLV 0

#define NPSPEC_DIALECT_GRINGO 1

#define NPSPEC_GUESS_DISJUNCTIVE 0

#define NPSPEC_GUESS_CHOICE 1

#define NPSPEC_PERM_CHECK_CONSTRAINTS 0

#define NPSPEC_PERM_CHECK_AGGREGATE 1

#define NPSPEC_MODE_FIRST 0

#define NPSPEC_MODE_ALL 1

#define NPSPEC_MODE_COUNT 2

/**
 * Result of every fallible call. Values 0 to 4 match the command-line
 * exit codes.
 */
typedef enum NpspecStatus {
  NPSPEC_STATUS_OK = 0,
  /**
   * Syntax error or unreadable input.
   */
  NPSPEC_STATUS_INPUT_ERROR = 1,
  /**
   * Analysis or translation error.
   */
  NPSPEC_STATUS_SEMANTIC_ERROR = 2,
  /**
   * A cross-check found a disagreement.
   */
  NPSPEC_STATUS_CHECK_FAILED = 3,
  /**
   * An enumeration ceiling was hit.
   */
  NPSPEC_STATUS_CEILING = 4,
  NPSPEC_STATUS_NULL_ARGUMENT = 5,
  NPSPEC_STATUS_INVALID_ARGUMENT = 6,
  NPSPEC_STATUS_PANIC = 7,
} NpspecStatus;

/**
 * An analyzed spec.
 */
typedef struct NpspecProgram NpspecProgram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and analyzes a NUL-terminated UTF-8 spec. On success `*out`
 * receives a handle to release with `npspec_program_free`.
 */
enum NpspecStatus npspec_program_parse(const char *source, struct NpspecProgram **out);

/**
 * Releases a handle. Null is ignored.
 */
void npspec_program_free(struct NpspecProgram *program);

/**
 * Translates to ASP text in the given dialect.
 */
enum NpspecStatus npspec_program_translate(const struct NpspecProgram *program,
                                           uint32_t dialect,
                                           uint32_t guess,
                                           uint32_t perm_check,
                                           char **out);

/**
 * Solves with the reference semantics. `*count` receives the number of
 * answers found. When `answers` is not null it receives the answers as
 * sorted fact lines, each answer preceded by a `% answer N` line.
 */
enum NpspecStatus npspec_program_solve(const struct NpspecProgram *program,
                                       uint32_t mode,
                                       uint64_t guess_limit,
                                       uint64_t *count,
                                       char **answers);

/**
 * Cross-checks every valid option combination. Returns `Ok`,
 * `CheckFailed` or `Ceiling`; the per-combination report goes to
 * `*report` when it is not null.
 */
enum NpspecStatus npspec_program_check(const struct NpspecProgram *program,
                                       uint64_t guess_limit,
                                       size_t atom_limit,
                                       char **report);

/**
 * Releases a string returned by this library. Null is ignored.
 */
void npspec_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *npspec_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *npspec_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NPSPEC_H */
