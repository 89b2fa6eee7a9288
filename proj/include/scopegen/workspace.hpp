#pragma once

// One grammar, its derived symbol-table model, and a global scope over a
// model path. Backs the C API and thereby the command-line tool.

#include "scopegen/derivation.hpp"
#include "scopegen/grammar.hpp"
#include "scopegen/instancing.hpp"
#include "scopegen/runtime.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace scopegen {

struct WorkspaceOptions {
    std::vector<std::filesystem::path> model_path;
    std::string extension = "jm";
};

struct DiagnosticReport {
    Diagnostics diagnostics; // sorted by (file, line, column, code)

    std::size_t errors() const;
    std::size_t warnings() const;
    // One formatted line per diagnostic plus a summary line.
    std::string text() const;
};

enum class ResolveStatus { Found, None, Ambiguous, BadScopePath, Failed };

struct ResolveResult {
    ResolveStatus status = ResolveStatus::Failed;
    // `FOUND <qualified> <kind> <file:line>`, `NONE` or `AMBIGUOUS <n>`.
    std::string line;
    ResolutionOutcome outcome;
    Diagnostics diagnostics;
    bool io_error = false;
};

class Workspace {
public:
    explicit Workspace(WorkspaceOptions options = {});
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    // Resets the global scope; loaded artifacts are dropped.
    void set_options(WorkspaceOptions options);
    const WorkspaceOptions& options() const { return options_; }

    // Parses, validates and derives. The grammar name is the file stem.
    // Sets `io_error` when the file cannot be read.
    Diagnostics load_grammar_file(const std::filesystem::path& path, bool* io_error = nullptr);
    Diagnostics load_grammar(std::string_view source, std::string name, std::string file = {});

    bool ready() const { return model_.has_value(); }
    const Grammar& grammar() const { return *grammar_; }
    const SymbolTableModel& model() const { return *model_; }
    GlobalScope& global() { return *global_; }

    struct FileResult {
        ArtifactScope* artifact = nullptr;
        Diagnostics diagnostics;
        bool io_error = false;
    };

    // Parses and builds `file` and registers it under its package-qualified
    // file stem, replacing an earlier registration.
    FileResult add_model_file(const std::filesystem::path& file);

    // Builds every file, then checks each built artifact. `io_error` is set
    // when an input file could not be read.
    DiagnosticReport check(const std::vector<std::filesystem::path>& files, bool* io_error = nullptr);

    // `scope_path` is `/`-separated: a name selects the scope spanned by that
    // symbol, an integer the i-th (0-based) scope not spanned by a symbol.
    ResolveResult resolve(const std::filesystem::path& file, std::string_view scope_path,
                          std::string_view name, std::string_view kind);

    // JSON scope-tree dump of `file` with all references resolved first.
    // Empty on failure; diagnostics explain why.
    std::string dump(const std::filesystem::path& file, Diagnostics& diagnostics,
                     bool* io_error = nullptr);

    void invalidate(std::string_view qualified_name) { scopegen::invalidate(*global_, qualified_name); }

private:
    void reset_global();
    LoadedArtifact build_artifact(const std::string& content, const std::string& path) const;

    WorkspaceOptions options_;
    std::optional<Grammar> grammar_;
    std::optional<SymbolTableModel> model_;
    std::unique_ptr<GlobalScope> global_;
};

// Scope-tree dump of an artifact as compact JSON with sorted keys.
std::string dump_scope_tree(const ArtifactScope& artifact);

} // namespace scopegen
