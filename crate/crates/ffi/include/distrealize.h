#ifndef DISTREALIZE_H
#define DISTREALIZE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DrStatus {
  DR_STATUS_OK = 0,
  DR_STATUS_NULL_POINTER = 1,
  DR_STATUS_INVALID_ARGUMENT = 2,
  DR_STATUS_PARSE = 3,
  DR_STATUS_UNSUPPORTED = 4,
  DR_STATUS_SIZE_LIMIT = 5,
  DR_STATUS_INTERNAL = 6,
} DrStatus;

typedef enum DrStrategy {
  DR_STRATEGY_TOPOLOGY = 0,
  DR_STRATEGY_RAW = 1,
} DrStrategy;

typedef enum DrVariant {
  DR_VARIANT_GRAPH_CLOSED = 0,
  DR_VARIANT_TREE_GENERAL_OPEN = 1,
  DR_VARIANT_TREE_GENERAL_CLOSED = 2,
  DR_VARIANT_TREE_POSITIVE_OPEN = 3,
  DR_VARIANT_STAR_OPEN = 4,
} DrVariant;

typedef struct DrDecision DrDecision;

// Interval bounds under construction; validated by `dr_decide`.
typedef struct DrFamily DrFamily;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// A family on `n` labels with no bounds set yet.
//
// # Safety
// `out` must be valid for writes.
enum DrStatus dr_family_new(size_t n, enum DrVariant variant, struct DrFamily **out_family);

// Sets the bounds of pair `{i, j}` (1-based labels, either order).
//
// # Safety
// `family` must come from this library; `lo` and `hi` must be
// NUL-terminated strings.
enum DrStatus dr_family_set_bounds(struct DrFamily *family,
                                   size_t i,
                                   size_t j,
                                   const char *lo,
                                   const char *hi);

// Parses an instance document.
//
// # Safety
// `json` must be a NUL-terminated string; `out_family` valid for writes.
enum DrStatus dr_family_from_json(const char *json, struct DrFamily **out_family);

// # Safety
// `family` must come from this library or be null.
void dr_family_free(struct DrFamily *family);

// Decides the family. Graph families use the shortest-path test, star
// families the star decider, and tree families search over `strategy`.
//
// # Safety
// `family` must come from this library; `out_decision` valid for writes.
enum DrStatus dr_decide(const struct DrFamily *family,
                        enum DrStrategy strategy,
                        bool emit_certificates,
                        struct DrDecision **out_decision);

// # Safety
// `decision` must come from this library; `out_feasible` valid for writes.
enum DrStatus dr_decision_is_feasible(const struct DrDecision *decision, bool *out_feasible);

// The result document as JSON; release it with `dr_string_free`.
//
// # Safety
// `decision` must come from this library; `out_json` valid for writes.
enum DrStatus dr_decision_to_json(const struct DrDecision *decision, char **out_json);

// # Safety
// `decision` must come from this library or be null.
void dr_decision_free(struct DrDecision *decision);

// Checks a witness (or a result document carrying one) against an
// instance. `out_report_json` may be null; otherwise it receives the
// report, to be released with `dr_string_free`.
//
// # Safety
// Both inputs must be NUL-terminated strings; `out_passed` valid for
// writes.
enum DrStatus dr_verify_json(const char *instance_json,
                             const char *witness_json,
                             bool *out_passed,
                             char **out_report_json);

// # Safety
// `s` must come from this library or be null.
void dr_string_free(char *s);

// The message of the last failed call on this thread, or `""`. The
// pointer stays valid until another call fails on this thread.
const char *dr_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DISTREALIZE_H */
