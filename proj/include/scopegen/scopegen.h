#ifndef SCOPEGEN_SCOPEGEN_H
#define SCOPEGEN_SCOPEGEN_H

/*
 * C interface of the scopegen library.
 *
 * A workspace holds one grammar, the symbol-table model derived from it and
 * a global scope that lazily loads model files from a model path. Handles
 * are not thread-safe; use one workspace per thread.
 *
 * Strings returned through `char**` out-parameters are owned by the caller
 * and must be released with sg_string_free(). Strings returned directly as
 * `const char*` are owned by the workspace and stay valid until the next
 * call on it.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(SCOPEGEN_BUILDING_LIBRARY)
#    define SG_API __declspec(dllexport)
#  else
#    define SG_API __declspec(dllimport)
#  endif
#else
#  define SG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status values double as command-line exit codes. */
typedef enum sg_status {
    SG_OK = 0,
    SG_DIAGNOSTICS = 1,   /* errors were reported */
    SG_USAGE_ERROR = 2,   /* bad arguments, unreadable files */
    SG_NOT_FOUND = 3,     /* resolution found nothing */
    SG_AMBIGUOUS = 4      /* resolution found several symbols */
} sg_status;

typedef struct sg_workspace sg_workspace;

SG_API const char* sg_version(void);

SG_API sg_workspace* sg_workspace_new(void);
SG_API void sg_workspace_free(sg_workspace* ws);

/* Both reset every loaded artifact. */
SG_API sg_status sg_workspace_set_model_path(sg_workspace* ws, const char* const* dirs, size_t count);
SG_API sg_status sg_workspace_set_extension(sg_workspace* ws, const char* extension);

/* Parses, validates and derives the grammar in `path`. */
SG_API sg_status sg_workspace_load_grammar(sg_workspace* ws, const char* path);

/* Derived symbol-table model as JSON. */
SG_API sg_status sg_workspace_derive(sg_workspace* ws, char** model_json);

/* Builds and checks `files`; `report` receives one line per diagnostic and a summary. */
SG_API sg_status sg_workspace_check(sg_workspace* ws, const char* const* files, size_t count,
                                    char** report);

/*
 * Resolves `name` of `kind` starting in the scope selected by `scope_path`
 * within `file`. `line` receives `FOUND ...`, `NONE` or `AMBIGUOUS <n>`.
 */
SG_API sg_status sg_workspace_resolve(sg_workspace* ws, const char* file, const char* scope_path,
                                      const char* name, const char* kind, char** line);

/* Scope tree of `file` as JSON, references resolved. */
SG_API sg_status sg_workspace_dump(sg_workspace* ws, const char* file, char** json);

SG_API sg_status sg_workspace_invalidate(sg_workspace* ws, const char* qualified_name);

/* How often the repository read `path` (model-path files only). */
SG_API size_t sg_workspace_read_count(const sg_workspace* ws, const char* path);

/* Diagnostics of the last call, one per line; never NULL. */
SG_API const char* sg_workspace_diagnostics(const sg_workspace* ws);

SG_API void sg_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SCOPEGEN_SCOPEGEN_H */
