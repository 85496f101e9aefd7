/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef NETRANSLIT_H
#define NETRANSLIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum NtStatus {
  NT_STATUS_OK = 0,
  NT_STATUS_NULL_POINTER = 1,
  NT_STATUS_INVALID_UTF8 = 2,
  NT_STATUS_IO = 3,
  NT_STATUS_FORMAT = 4,
  NT_STATUS_VERSION = 5,
  NT_STATUS_NOT_FOUND = 6,
  NT_STATUS_PARSE = 7,
  NT_STATUS_UNTRANSLITERABLE = 8,
  NT_STATUS_INVALID_ARGUMENT = 9,
  NT_STATUS_INTERNAL = 10,
  NT_STATUS_PANIC = 11,
} NtStatus;

// A translation knowledge base.
typedef struct NtKb NtKb;

// A trained transliteration model.
typedef struct NtModel NtModel;

// Rules, model, and knowledge base bundled for whole documents.
typedef struct NtPipeline NtPipeline;

// Syllabification rules.
typedef struct NtRules NtRules;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next netranslit call on the same thread.
const char *nt_last_error_message(void);

// Library version as a static string.
const char *nt_version(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void nt_string_free(char *s);

// Default syllabification rules. Never null.
struct NtRules *nt_rules_default(void);

// # Safety
// `path` must be a NUL-terminated string and `out` valid for a write.
enum NtStatus nt_rules_load(const char *path, struct NtRules **out);

// # Safety
// `rules` must be null or a handle from `nt_rules_default`/`nt_rules_load`.
void nt_rules_free(struct NtRules *rules);

// Writes the syllables of `word` separated by single spaces.
//
// # Safety
// Pointers must be valid; `out` receives a string for `nt_string_free`.
enum NtStatus nt_syllabify(const struct NtRules *rules, const char *word, char **out);

// # Safety
// `path` must be a NUL-terminated string and `out` valid for a write.
enum NtStatus nt_model_load(const char *path, struct NtModel **out);

// # Safety
// `model` must be null or a handle from `nt_model_load`.
void nt_model_free(struct NtModel *model);

// P(target | source) from the model's counts; 0 for unseen pairs.
//
// # Safety
// Pointers must be valid.
enum NtStatus nt_model_prob(const struct NtModel *model,
                            const char *source,
                            const char *target,
                            double *out);

// Syllabifies and decodes one word. `out_score` may be null.
//
// # Safety
// Pointers must be valid; `out` receives a string for `nt_string_free`.
enum NtStatus nt_model_transliterate(const struct NtModel *model,
                                     const struct NtRules *rules,
                                     const char *word,
                                     char **out,
                                     double *out_score);

// # Safety
// `path` must be a NUL-terminated string and `out` valid for a write.
enum NtStatus nt_kb_load(const char *path, struct NtKb **out);

// # Safety
// `kb` must be null or a handle from `nt_kb_load`.
void nt_kb_free(struct NtKb *kb);

// Number of entries in the knowledge base, or 0 for a null handle.
//
// # Safety
// `kb` must be null or a live handle.
size_t nt_kb_len(const struct NtKb *kb);

// Looks up a phrase; returns `NotFound` on a miss.
//
// # Safety
// Pointers must be valid; `out` receives a string for `nt_string_free`.
enum NtStatus nt_kb_translate(const struct NtKb *kb, const char *text, char **out);

// Loads a pipeline from files. `rules_path` may be null for the defaults.
//
// # Safety
// Path arguments must be null or NUL-terminated strings; `out` valid.
enum NtStatus nt_pipeline_open(const char *model_path,
                               const char *kb_path,
                               const char *rules_path,
                               struct NtPipeline **out);

// # Safety
// `pipeline` must be null or a handle from `nt_pipeline_open`.
void nt_pipeline_free(struct NtPipeline *pipeline);

// Replaces every tagged entity in a slash-tagged document.
//
// # Safety
// Pointers must be valid; `out` receives a string for `nt_string_free`.
enum NtStatus nt_pipeline_run(const struct NtPipeline *pipeline, const char *document, char **out);

// Percentage of correct items.
//
// # Safety
// `out` must be valid for a write.
enum NtStatus nt_accuracy(uint64_t correct, uint64_t total, double *out);

// Harmonic mean of two percentages; 0 when both are 0.
double nt_f_measure(double precision_pct, double recall_pct);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NETRANSLIT_H */
