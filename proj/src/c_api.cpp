#include "scopegen/scopegen.h"

#include "scopegen/workspace.hpp"

#include <cstdlib>
#include <cstring>
#include <exception>

struct sg_workspace {
    scopegen::Workspace workspace;
    std::string diagnostics;
};

namespace {

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void remember(sg_workspace* ws, const scopegen::Diagnostics& diags) {
    ws->diagnostics.clear();
    for (const auto& d : diags) ws->diagnostics += scopegen::format_diagnostic(d) + "\n";
}

template <typename Fn>
sg_status guarded(sg_workspace* ws, Fn&& fn) {
    if (!ws) return SG_USAGE_ERROR;
    try {
        return fn();
    } catch (const std::exception& e) {
        ws->diagnostics = std::string("internal error: ") + e.what() + "\n";
        return SG_USAGE_ERROR;
    }
}

} // namespace

extern "C" {

const char* sg_version(void) { return "1.0.0"; }

sg_workspace* sg_workspace_new(void) {
    try {
        return new sg_workspace{};
    } catch (...) {
        return nullptr;
    }
}

void sg_workspace_free(sg_workspace* ws) { delete ws; }

sg_status sg_workspace_set_model_path(sg_workspace* ws, const char* const* dirs, size_t count) {
    return guarded(ws, [&] {
        auto options = ws->workspace.options();
        options.model_path.clear();
        for (size_t i = 0; i < count; ++i) {
            if (!dirs[i]) return SG_USAGE_ERROR;
            options.model_path.emplace_back(dirs[i]);
        }
        ws->workspace.set_options(std::move(options));
        return SG_OK;
    });
}

sg_status sg_workspace_set_extension(sg_workspace* ws, const char* extension) {
    return guarded(ws, [&] {
        if (!extension || !*extension) return SG_USAGE_ERROR;
        auto options = ws->workspace.options();
        options.extension = extension;
        ws->workspace.set_options(std::move(options));
        return SG_OK;
    });
}

sg_status sg_workspace_load_grammar(sg_workspace* ws, const char* path) {
    return guarded(ws, [&] {
        if (!path) return SG_USAGE_ERROR;
        bool io_error = false;
        auto diags = ws->workspace.load_grammar_file(path, &io_error);
        remember(ws, diags);
        if (io_error) return SG_USAGE_ERROR;
        return ws->workspace.ready() ? SG_OK : SG_DIAGNOSTICS;
    });
}

sg_status sg_workspace_derive(sg_workspace* ws, char** model_json) {
    return guarded(ws, [&] {
        if (!model_json) return SG_USAGE_ERROR;
        *model_json = nullptr;
        if (!ws->workspace.ready()) return SG_USAGE_ERROR;
        ws->diagnostics.clear();
        *model_json = duplicate(scopegen::write_model(ws->workspace.model()));
        return SG_OK;
    });
}

sg_status sg_workspace_check(sg_workspace* ws, const char* const* files, size_t count, char** report) {
    return guarded(ws, [&] {
        if (!report || (count > 0 && !files)) return SG_USAGE_ERROR;
        *report = nullptr;
        if (!ws->workspace.ready()) return SG_USAGE_ERROR;
        std::vector<std::filesystem::path> paths;
        for (size_t i = 0; i < count; ++i) {
            if (!files[i]) return SG_USAGE_ERROR;
            paths.emplace_back(files[i]);
        }
        bool io_error = false;
        auto result = ws->workspace.check(paths, &io_error);
        remember(ws, result.diagnostics);
        *report = duplicate(result.text());
        if (io_error) return SG_USAGE_ERROR;
        return result.errors() == 0 ? SG_OK : SG_DIAGNOSTICS;
    });
}

sg_status sg_workspace_resolve(sg_workspace* ws, const char* file, const char* scope_path,
                               const char* name, const char* kind, char** line) {
    return guarded(ws, [&] {
        if (!file || !name || !kind || !line) return SG_USAGE_ERROR;
        *line = nullptr;
        if (!ws->workspace.ready()) return SG_USAGE_ERROR;
        auto result = ws->workspace.resolve(file, scope_path ? scope_path : "", name, kind);
        remember(ws, result.diagnostics);
        switch (result.status) {
        case scopegen::ResolveStatus::Found:
            *line = duplicate(result.line);
            return SG_OK;
        case scopegen::ResolveStatus::None:
            *line = duplicate(result.line);
            return SG_NOT_FOUND;
        case scopegen::ResolveStatus::Ambiguous:
            *line = duplicate(result.line);
            return SG_AMBIGUOUS;
        case scopegen::ResolveStatus::BadScopePath:
            return SG_USAGE_ERROR;
        case scopegen::ResolveStatus::Failed:
            break;
        }
        return result.io_error ? SG_USAGE_ERROR : SG_DIAGNOSTICS;
    });
}

sg_status sg_workspace_dump(sg_workspace* ws, const char* file, char** json) {
    return guarded(ws, [&] {
        if (!file || !json) return SG_USAGE_ERROR;
        *json = nullptr;
        if (!ws->workspace.ready()) return SG_USAGE_ERROR;
        scopegen::Diagnostics diags;
        bool io_error = false;
        std::string out = ws->workspace.dump(file, diags, &io_error);
        remember(ws, diags);
        if (io_error) return SG_USAGE_ERROR;
        if (out.empty()) return SG_DIAGNOSTICS;
        *json = duplicate(out);
        return SG_OK;
    });
}

sg_status sg_workspace_invalidate(sg_workspace* ws, const char* qualified_name) {
    return guarded(ws, [&] {
        if (!qualified_name) return SG_USAGE_ERROR;
        ws->workspace.invalidate(qualified_name);
        return SG_OK;
    });
}

size_t sg_workspace_read_count(const sg_workspace* ws, const char* path) {
    if (!ws || !path) return 0;
    return const_cast<sg_workspace*>(ws)->workspace.global().repository().read_count(path);
}

const char* sg_workspace_diagnostics(const sg_workspace* ws) {
    return ws ? ws->diagnostics.c_str() : "";
}

void sg_string_free(char* s) { std::free(s); }

} // extern "C"
