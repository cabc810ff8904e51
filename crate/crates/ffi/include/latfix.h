#ifndef LATFIX_H
#define LATFIX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result codes. The numeric values of 0 to 4 match the command-line exit
 * codes.
 */
typedef enum LatfixStatus {
  LATFIX_STATUS_OK = 0,
  LATFIX_STATUS_PROPERTY_FALSE = 1,
  LATFIX_STATUS_INVALID_INPUT = 2,
  LATFIX_STATUS_CAP_EXCEEDED = 3,
  LATFIX_STATUS_INTERNAL = 4,
  LATFIX_STATUS_NULL_POINTER = 5,
  LATFIX_STATUS_PANIC = 6,
} LatfixStatus;

/**
 * Opaque finite lattice.
 */
typedef struct LatfixLattice LatfixLattice;

/**
 * Opaque self-map of a lattice.
 */
typedef struct LatfixMap LatfixMap;

/**
 * Opaque automata network.
 */
typedef struct LatfixNetwork LatfixNetwork;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string.
 */
const char *latfix_version(void);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *latfix_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` is null or was returned by this library and not yet freed.
 */
void latfix_string_free(char *s);

/**
 * Builds a lattice from a JSON descriptor.
 *
 * # Safety
 * `json` is a nul-terminated string; `out` is writable.
 */
enum LatfixStatus latfix_lattice_from_json(const char *json, struct LatfixLattice **out);

/**
 * # Safety
 * `l` is a lattice handle.
 */
enum LatfixStatus latfix_lattice_size(const struct LatfixLattice *l, uintptr_t *out);

/**
 * `a ∨ b` and `a ∧ b`.
 *
 * # Safety
 * `l` is a lattice handle; outputs are writable.
 */
enum LatfixStatus latfix_lattice_join_meet(const struct LatfixLattice *l,
                                           uintptr_t a,
                                           uintptr_t b,
                                           uintptr_t *join,
                                           uintptr_t *meet);

/**
 * # Safety
 * `l` is null or a lattice handle not yet freed.
 */
void latfix_lattice_free(struct LatfixLattice *l);

/**
 * Reads a map document or a network document.
 *
 * # Safety
 * `json` is a nul-terminated string; `out` is writable.
 */
enum LatfixStatus latfix_map_from_json(const char *json, struct LatfixMap **out);

/**
 * Map on `l` from a table of `len` element ids.
 *
 * # Safety
 * `l` is a lattice handle; `table` points to `len` readable values.
 */
enum LatfixStatus latfix_map_new(const struct LatfixLattice *l,
                                 const uintptr_t *table,
                                 uintptr_t len,
                                 struct LatfixMap **out);

/**
 * # Safety
 * `m` is a map handle; `out` is writable.
 */
enum LatfixStatus latfix_map_apply(const struct LatfixMap *m, uintptr_t x, uintptr_t *out);

/**
 * Whether the map preserves all joins.
 *
 * # Safety
 * `m` is a map handle; `out` is writable.
 */
enum LatfixStatus latfix_map_is_graph(const struct LatfixMap *m, bool *out);

/**
 * # Safety
 * `m` is a map handle; `out` is writable.
 */
enum LatfixStatus latfix_map_fixed_point_count(const struct LatfixMap *m, uintptr_t *out);

/**
 * Dependency verdict of `phi` on `rho`; `kind` is a [`LatfixDepKind`] value.
 *
 * # Safety
 * `phi`, `rho` are map handles; `out` is writable.
 */
enum LatfixStatus latfix_depends(uint32_t kind,
                                 const struct LatfixMap *phi,
                                 const struct LatfixMap *rho,
                                 bool *out);

/**
 * Pre-meet certificate for a co-graph `phi` against `phi⁺` with the
 * canonical witness sequence, as a JSON string.
 *
 * # Safety
 * `phi` is a map handle; `out` is writable.
 */
enum LatfixStatus latfix_robert_certify_json(const struct LatfixMap *phi, char **out);

/**
 * # Safety
 * `m` is null or a map handle not yet freed.
 */
void latfix_map_free(struct LatfixMap *m);

/**
 * # Safety
 * `json` is a nul-terminated string; `out` is writable.
 */
enum LatfixStatus latfix_network_from_json(const char *json, struct LatfixNetwork **out);

/**
 * Interaction graph as a digraph JSON document.
 *
 * # Safety
 * `net` is a network handle; `out` is writable.
 */
enum LatfixStatus latfix_network_interaction_graph_json(const struct LatfixNetwork *net,
                                                        char **out);

/**
 * Nilpotence index from the acyclic-interaction certificate.
 *
 * # Safety
 * `net` is a network handle; outputs are writable.
 */
enum LatfixStatus latfix_network_robert(const struct LatfixNetwork *net,
                                        uintptr_t *k,
                                        uintptr_t *fixed_point);

/**
 * # Safety
 * `net` is null or a network handle not yet freed.
 */
void latfix_network_free(struct LatfixNetwork *net);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LATFIX_H */
