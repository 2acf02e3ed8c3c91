/* horolab — hyperbolic random-walk laboratory, C interface.
 *
 * A lab handle wraps one validated experiment configuration. Commands run
 * against the handle and write CSV/JSON outputs into a directory; re-running
 * with the same configuration and seed reproduces the outputs byte for byte.
 */
#ifndef HOROLAB_H
#define HOROLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct hl_lab hl_lab;

typedef enum hl_status {
  HL_OK = 0,            /* command ran, all configured checks passed */
  HL_VIOLATION = 1,     /* command ran, a certified invariant check failed */
  HL_CONFIG_ERROR = 2,  /* bad configuration, arguments, or I/O */
  HL_BAD_ARGUMENT = 3   /* null handle/pointer misuse */
} hl_status;

const char* hl_version(void);

/* Loads and validates a configuration file (or an in-memory JSON text).
 * Returns NULL on failure; when err is non-NULL a diagnostic is copied into
 * it, truncated to err_len bytes. */
hl_lab* hl_lab_open(const char* config_path, char* err, size_t err_len);
hl_lab* hl_lab_open_text(const char* config_text, char* err, size_t err_len);

void hl_lab_close(hl_lab* lab);

/* Overrides applied to subsequent runs on this handle. */
void hl_lab_set_seed(hl_lab* lab, uint64_t seed);
void hl_lab_set_workers(hl_lab* lab, unsigned workers);
void hl_lab_set_enumeration_cap(hl_lab* lab, uint64_t cap);

/* FNV-1a hash of the raw configuration text (also embedded in outputs). */
uint64_t hl_lab_config_hash(const hl_lab* lab);

/* Runs one command: validate-space, drift, hmet, stationary, contraction,
 * furstenberg, continuity, ldt, or all. Outputs land under out_dir. */
hl_status hl_lab_run(hl_lab* lab, const char* command, const char* out_dir);

/* Message describing the most recent failure on this handle. */
const char* hl_lab_error(const hl_lab* lab);

#ifdef __cplusplus
}
#endif

#endif /* HOROLAB_H */
