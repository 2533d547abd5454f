#ifndef FINCHAR_H
#define FINCHAR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum FcStatus {
  FcStatus_Ok = 0,
  FcStatus_NullPointer = 1,
  FcStatus_InvalidArgument = 2,
  FcStatus_CapExceeded = 3,
  FcStatus_Utf8Error = 4,
  FcStatus_InternalPanic = 5,
} FcStatus;

/**
 * Colour frequencies α (opaque).
 */
typedef struct FcAlpha FcAlpha;

/**
 * Finitely supported permutation (opaque).
 */
typedef struct FcPerm FcPerm;

/**
 * Subgroup A of the sign group (opaque).
 */
typedef struct FcSubspace FcSubspace;

/**
 * Thoma parameter (β; γ) (opaque).
 */
typedef struct FcTheta FcTheta;

/**
 * A seeded Monte Carlo estimate; mirrors the library's report.
 */
typedef struct FcEstimate {
  double estimate;
  double std_error;
  uint64_t trials;
  uint64_t prefix_length;
  uint64_t seed;
} FcEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy of the current thread's last error message (empty if none).
 * Release with fc_string_free.
 */
char *fc_last_error_message(void);

/**
 * Release a string returned by this library. NULL is a no-op.
 */
void fc_string_free(char *text);

/**
 * Parse colour frequencies from comma-separated rationals, e.g. "1/2,1/3".
 */
enum FcStatus fc_alpha_parse(const char *spec, struct FcAlpha **out);

void fc_alpha_free(struct FcAlpha *alpha);

/**
 * Number of colours m; a subspace paired with this alpha needs rank m.
 */
enum FcStatus fc_alpha_size(const struct FcAlpha *alpha, uint64_t *out);

/**
 * Parse a subgroup from comma-separated basis bitstrings (e.g. "110,011"),
 * or the keywords "full" and "trivial".
 */
enum FcStatus fc_subspace_parse(uint64_t rank, const char *rows, struct FcSubspace **out);

void fc_subspace_free(struct FcSubspace *subspace);

/**
 * Parse a permutation from cycle notation, e.g. "(0 1)(2 3)"; "()" is the
 * identity.
 */
enum FcStatus fc_perm_parse(const char *cycles, struct FcPerm **out);

void fc_perm_free(struct FcPerm *perm);

/**
 * Parse a Thoma parameter from two comma-separated rational lists; either
 * list may be empty ("").
 */
enum FcStatus fc_theta_parse(const char *beta, const char *gamma, struct FcTheta **out);

void fc_theta_free(struct FcTheta *theta);

/**
 * χ_(β;γ)(g) as an exact rational string.
 */
enum FcStatus fc_thoma_character(const struct FcTheta *theta, const struct FcPerm *g, char **out);

/**
 * χ_{ν^A_α}(g) by the exact colour-assignment sum, as a rational string.
 */
enum FcStatus fc_chi_nu_exact(const struct FcAlpha *alpha,
                              const struct FcSubspace *subgroup,
                              const struct FcPerm *g,
                              char **out);

/**
 * The same value by averaging twisted characters over the dual code.
 */
enum FcStatus fc_chi_nu_dual_average(const struct FcAlpha *alpha,
                                     const struct FcSubspace *subgroup,
                                     const struct FcPerm *g,
                                     char **out);

/**
 * Cross-check the two exact routes; writes whether they agree.
 */
enum FcStatus fc_duality_check(const struct FcAlpha *alpha,
                               const struct FcSubspace *subgroup,
                               const struct FcPerm *g,
                               bool *out_equal);

/**
 * Membership Monte Carlo estimate of χ_{ν^A_α}(g); deterministic in the
 * seed and independent of the worker count.
 */
enum FcStatus fc_monte_carlo_chi_nu(const struct FcAlpha *alpha,
                                    const struct FcSubspace *subgroup,
                                    const struct FcPerm *g,
                                    uint64_t prefix_length,
                                    uint64_t trials,
                                    uint64_t seed,
                                    struct FcEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FINCHAR_H */
