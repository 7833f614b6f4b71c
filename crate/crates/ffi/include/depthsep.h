#ifndef DEPTHSEP_H
#define DEPTHSEP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum DsStatus {
  DsStatus_Ok = 0,
  DsStatus_NullPointer = 1,
  DsStatus_Shape = 2,
  DsStatus_Parse = 3,
  DsStatus_Parameter = 4,
  DsStatus_Domain = 5,
  DsStatus_Quadrature = 6,
  DsStatus_Numeric = 7,
  DsStatus_InvalidUtf8 = 8,
  DsStatus_Panic = 9,
} DsStatus;

/**
 * Opaque network handle.
 */
typedef struct DsNetwork DsNetwork;

/**
 * Architecture summary.
 */
typedef struct DsStats {
  uintptr_t depth;
  uintptr_t hidden_layers;
  uintptr_t inputs;
  uintptr_t outputs;
  uintptr_t params;
  double inf_norm;
} DsStats;

/**
 * L² error estimate; `std_error` is negative and `samples` zero for the
 * deterministic method.
 */
typedef struct DsErrorEstimate {
  double value;
  double std_error;
  uint64_t samples;
} DsErrorEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *ds_last_error(void);

enum DsStatus ds_square_net(uint32_t m, struct DsNetwork **out);

enum DsStatus ds_scaled_square_net(uint32_t m, double r, struct DsNetwork **out);

enum DsStatus ds_hinge_square_net(double a, uint32_t m, double r, struct DsNetwork **out);

enum DsStatus ds_target_net(uintptr_t d, uint32_t m, double r, struct DsNetwork **out);

enum DsStatus ds_target_net_for_eps(uintptr_t d, double eps, struct DsNetwork **out);

/**
 * Parses a NUL-terminated JSON network.
 */
enum DsStatus ds_network_from_json(const char *json, struct DsNetwork **out);

/**
 * Serializes `net`; free the string with [`ds_string_free`].
 */
enum DsStatus ds_network_to_json(const struct DsNetwork *net, char **out);

/**
 * Evaluates `net` at `x` (length `x_len`) into `y` (length `y_len`). The
 * lengths must match the network's input and output widths.
 */
enum DsStatus ds_network_realize(const struct DsNetwork *net,
                                 const double *x,
                                 uintptr_t x_len,
                                 double *y,
                                 uintptr_t y_len);

enum DsStatus ds_network_stats(const struct DsNetwork *net, struct DsStats *out);

/**
 * Writes up to `cap` layer widths into `dims`; `len` receives the total
 * count (depth + 1) even when `cap` is too small.
 */
enum DsStatus ds_network_dims(const struct DsNetwork *net,
                              uintptr_t *dims,
                              uintptr_t cap,
                              uintptr_t *len);

/**
 * `f ∘ g`.
 */
enum DsStatus ds_network_compose(const struct DsNetwork *f,
                                 const struct DsNetwork *g,
                                 struct DsNetwork **out);

/**
 * Parallelization of `count` networks with equal depth.
 */
enum DsStatus ds_network_parallelize(const struct DsNetwork *const *nets,
                                     uintptr_t count,
                                     struct DsNetwork **out);

/**
 * Monte-Carlo L² error of `net` against the normalized target in dimension `d`.
 */
enum DsStatus ds_l2_error_mc(const struct DsNetwork *net,
                             uintptr_t d,
                             uint64_t samples,
                             uint64_t seed,
                             struct DsErrorEstimate *out);

/**
 * Deterministic L² error of `target_net(d, m, r)`.
 */
enum DsStatus ds_target_error_separable(uintptr_t d,
                                        uint32_t m,
                                        double r,
                                        struct DsErrorEstimate *out);

/**
 * Releases a handle; null is ignored.
 */
void ds_network_free(struct DsNetwork *net);

/**
 * Releases a string returned by this library; null is ignored.
 */
void ds_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DEPTHSEP_H */
