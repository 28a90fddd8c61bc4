#ifndef SOLSEM_H
#define SOLSEM_H

/* C interface to the interpreter, symbolic engine and oracle. Every call
 * returns a status code; on failure ss_last_error() describes the problem.
 * Strings returned through out-parameters are owned by the caller and must
 * be released with ss_free_string. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SS_API __declspec(dllexport)
#else
#define SS_API __attribute__((visibility("default")))
#endif

enum {
  SS_OK = 0,
  /* verify: a counterexample was found or the budget ran out;
   * oracle: at least one divergence. */
  SS_NOT_VERIFIED = 1,
  /* Bad arguments, parse, binding or type errors. */
  SS_USAGE = 2,
  /* Execution failure or unexpected internal error. */
  SS_INTERNAL = 3
};

typedef struct ss_session ss_session;

SS_API ss_session* ss_session_new(void);
SS_API void ss_session_free(ss_session* s);

/* Message of the last failing call on this thread ("" if none). */
SS_API const char* ss_last_error(void);
SS_API void ss_free_string(char* str);

SS_API int ss_set_gas(ss_session* s, uint64_t gas);
SS_API int ss_set_k(ss_session* s, uint64_t k);
/* Rebinds an already loaded source for the new size. */
SS_API int ss_set_memory_size(ss_session* s, size_t blocks);
SS_API int ss_set_entry(ss_session* s, const char* function);
/* One field of the transaction context: "number", "timestamp" (`now`),
 * "sender", "value" (`msg.value`) or "gas_price". */
SS_API int ss_set_block_field(ss_session* s, const char* field, int64_t value);
/* "static", "concolic" or "selective". */
SS_API int ss_set_mode(ss_session* s, const char* mode);
/* NAME=VALUE: an entry parameter becomes a call argument, any other name a
 * pre-state assignment. */
SS_API int ss_add_arg(ss_session* s, const char* assignment);
/* NAME:kind[:lo..hi] with kind bool, int or uint. */
SS_API int ss_add_symbolic(ss_session* s, const char* spec);

SS_API int ss_load_source(ss_session* s, const char* text);
/* Applies a verification spec (entry, pre, symbolic, assume, post, mode, ...). */
SS_API int ss_load_spec(ss_session* s, const char* text);

/* Typechecks the loaded program; out_report (optional) receives a summary. */
SS_API int ss_typecheck(ss_session* s, char** out_report);
/* Typed statement list of the declarations as JSON. */
SS_API int ss_emit_ast(ss_session* s, char** out_json);

/* Concrete run of the entry function. out_dump receives the final memory
 * dump, out_json (optional) {status, threw, dispatched, gas_left, diagnostic}.
 * SS_INTERNAL when the run fails. */
SS_API int ss_run(ss_session* s, char** out_dump, char** out_json);

/* Single stepping: ss_step_begin prepares the machine, each ss_step executes
 * one statement and reports the statement and the memory dump. *finished is
 * set once the machine has stopped. */
SS_API int ss_step_begin(ss_session* s, char** out_dump);
SS_API int ss_step(ss_session* s, char** out_text, int* finished);

/* Checks the loaded postcondition on every path. out_text and out_json
 * (each optional) receive the verdict. */
SS_API int ss_verify(ss_session* s, char** out_text, char** out_json);

/* Differential check of `count` random core programs from `seed`. */
SS_API int ss_oracle(uint64_t seed, size_t count, char** out_text, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
