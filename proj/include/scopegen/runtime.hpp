#pragma once

// Generic symbol-table runtime: scope trees of kind-tagged symbols, lazily
// resolved symbol references, and a global scope that loads further
// artifacts from a model path on demand.
//
// A GlobalScope and everything reachable from it is a single-writer unit;
// resolution may load artifacts and therefore mutates the tree.

#include "scopegen/derivation.hpp"
#include "scopegen/diagnostic.hpp"

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scopegen {

struct AstNode;
class Scope;
class ArtifactScope;
class GlobalScope;
class Symbol;

struct SymbolKind {
    std::string name;

    friend bool operator==(const SymbolKind&, const SymbolKind&) = default;
    friend auto operator<=>(const SymbolKind&, const SymbolKind&) = default;
};

enum class ScopeClassification { Ordinary, Artifact, Global };

struct ResolutionOutcome {
    enum class Kind { Found, None, Ambiguous };

    Kind kind = Kind::None;
    // One symbol for Found, at least two for Ambiguous.
    std::vector<Symbol*> symbols;

    static ResolutionOutcome none() { return {}; }
    static ResolutionOutcome found(Symbol* s) { return {Kind::Found, {s}}; }
    static ResolutionOutcome ambiguous(std::vector<Symbol*> all) {
        return {Kind::Ambiguous, std::move(all)};
    }

    bool is_found() const { return kind == Kind::Found; }
    bool is_none() const { return kind == Kind::None; }
    bool is_ambiguous() const { return kind == Kind::Ambiguous; }
    Symbol* symbol() const { return is_found() ? symbols.front() : nullptr; }

    friend bool operator==(const ResolutionOutcome&, const ResolutionOutcome&) = default;
};

enum class ReferenceState { Unresolved, Resolved, Failed };

const char* to_string(ReferenceState s);

class SymbolReference {
public:
    SymbolReference(std::string name, SymbolKind target_kind, Scope& context,
                    SourceLocation location = {});

    const std::string& name() const { return name_; }
    const SymbolKind& target_kind() const { return target_kind_; }
    Scope& context() const { return *context_; }
    SourceLocation location() const { return location_; }
    ReferenceState state() const { return state_; }
    // The resolved definition, if any.
    Symbol* target() const { return state_ == ReferenceState::Resolved ? outcome_.symbol() : nullptr; }
    const ResolutionOutcome& last_outcome() const { return outcome_; }
    // Symbol holding this reference; null for references owned by a scope.
    Symbol* owner() const { return owner_; }

    // Reference-specific attributes (e.g. type arguments).
    std::map<std::string, std::string>& payload() { return payload_; }
    const std::map<std::string, std::string>& payload() const { return payload_; }

private:
    friend class Symbol;
    friend class Scope;
    friend ResolutionOutcome resolve_reference(SymbolReference&);
    friend void invalidate(GlobalScope&, std::string_view);

    void reset() {
        state_ = ReferenceState::Unresolved;
        outcome_ = {};
    }

    std::string name_;
    SymbolKind target_kind_;
    Scope* context_;
    SourceLocation location_;
    ReferenceState state_ = ReferenceState::Unresolved;
    ResolutionOutcome outcome_;
    Symbol* owner_ = nullptr;
    std::map<std::string, std::string> payload_;
};

class Symbol {
public:
    Symbol(std::string name, SymbolKind kind, SourceLocation location = {});
    Symbol(const Symbol&) = delete;
    Symbol& operator=(const Symbol&) = delete;

    const std::string& name() const { return name_; }
    const SymbolKind& kind() const { return kind_; }
    SourceLocation location() const { return location_; }

    Scope* defining_scope() const { return defining_scope_; }
    Scope* spanned_scope() const { return spanned_scope_; }
    const AstNode* ast_node() const { return ast_node_; }
    void set_ast_node(const AstNode* node) { ast_node_ = node; }

    using ReferenceList = std::vector<std::unique_ptr<SymbolReference>>;
    // role -> references, in creation order per role
    const std::map<std::string, ReferenceList>& references() const { return references_; }
    SymbolReference& add_reference(const std::string& role, std::string name, SymbolKind kind,
                                   Scope& context, SourceLocation location = {});

private:
    friend class Scope;
    friend std::optional<Diagnostic> define(Scope&, std::shared_ptr<Symbol>);
    friend void span(Symbol&, Scope&);

    std::string name_;
    SymbolKind kind_;
    SourceLocation location_;
    Scope* defining_scope_ = nullptr;
    Scope* spanned_scope_ = nullptr;
    const AstNode* ast_node_ = nullptr;
    std::map<std::string, ReferenceList> references_;
};

class Scope {
public:
    Scope(Discipline discipline, std::string class_name,
          ScopeClassification classification = ScopeClassification::Ordinary);
    virtual ~Scope();
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

    Discipline discipline() const { return discipline_; }
    ScopeClassification classification() const { return classification_; }
    // Language-level class, e.g. `JMethodScope`.
    const std::string& class_name() const { return class_name_; }

    Scope* enclosing() const { return enclosing_; }
    const std::vector<std::unique_ptr<Scope>>& sub_scopes() const { return sub_scopes_; }
    Scope& add_sub_scope(std::unique_ptr<Scope> child);
    std::unique_ptr<Scope> remove_sub_scope(const Scope& child);

    Symbol* spanning_symbol() const { return spanning_symbol_; }
    const AstNode* ast_node() const { return ast_node_; }
    void set_ast_node(const AstNode* node) { ast_node_ = node; }

    // All local definitions in definition order.
    const std::vector<std::shared_ptr<Symbol>>& symbols() const { return symbols_; }
    std::vector<Symbol*> local(std::string_view name) const;
    std::vector<Symbol*> local(std::string_view name, const SymbolKind& kind) const;

    // References whose occurrence has no enclosing symbol.
    const std::vector<std::unique_ptr<SymbolReference>>& references() const { return references_; }
    SymbolReference& add_reference(std::string name, SymbolKind kind, SourceLocation location = {});

    ArtifactScope* artifact();
    GlobalScope* global();

private:
    friend std::optional<Diagnostic> define(Scope&, std::shared_ptr<Symbol>);
    friend void span(Symbol&, Scope&);

    Discipline discipline_;
    std::string class_name_;
    ScopeClassification classification_;
    Scope* enclosing_ = nullptr;
    Symbol* spanning_symbol_ = nullptr;
    const AstNode* ast_node_ = nullptr;
    // Declared before sub_scopes_: spanned sub-scopes are destroyed while
    // their spanning symbols are still alive.
    std::vector<std::shared_ptr<Symbol>> symbols_;
    std::map<std::string, std::vector<Symbol*>, std::less<>> by_name_;
    std::vector<std::unique_ptr<SymbolReference>> references_;
    std::vector<std::unique_ptr<Scope>> sub_scopes_;
};

class ArtifactScope : public Scope {
public:
    ArtifactScope(std::string class_name, std::string package_name = {},
                  std::vector<std::string> imports = {});

    const std::string& package_name() const { return package_name_; }
    const std::vector<std::string>& imports() const { return imports_; }
    // Parallel to imports(); empty when the artifact was not built from text.
    const std::vector<SourceLocation>& import_locations() const { return import_locations_; }
    void set_import_locations(std::vector<SourceLocation> locs) { import_locations_ = std::move(locs); }

    // File the artifact was built from, as used in diagnostics.
    const std::string& source_name() const { return source_name_; }
    void set_source_name(std::string name) { source_name_ = std::move(name); }
    // Name under which the artifact is registered in its global scope.
    const std::string& qualified_name() const { return qualified_name_; }

    // Keeps the parse tree alive for as long as the scope tree links into it.
    void retain_ast(std::shared_ptr<const AstNode> root) { ast_ = std::move(root); }
    const AstNode* ast() const { return ast_.get(); }

private:
    friend class GlobalScope;

    std::string package_name_;
    std::vector<std::string> imports_;
    std::vector<SourceLocation> import_locations_;
    std::string source_name_;
    std::string qualified_name_;
    std::shared_ptr<const AstNode> ast_;
};

struct LoadedArtifact {
    std::unique_ptr<ArtifactScope> artifact;
    Diagnostics diagnostics;
};

// Maps qualified names `a.b.C` to files `<root>/a/b/C.<ext>` and counts
// file reads.
class ModelRepository {
public:
    // Builds an artifact from file content; `path` is for diagnostics.
    using Loader = std::function<LoadedArtifact(const std::string& content, const std::string& path)>;

    ModelRepository() = default;
    ModelRepository(std::vector<std::filesystem::path> roots, std::string extension, Loader loader);

    const std::vector<std::filesystem::path>& roots() const { return roots_; }
    const std::string& extension() const { return extension_; }

    std::optional<std::filesystem::path> locate(std::string_view qualified_name) const;
    std::optional<std::string> read(const std::filesystem::path& path);
    LoadedArtifact load(const std::string& content, const std::string& path) const;

    std::size_t read_count(const std::filesystem::path& path) const;
    std::size_t total_reads() const { return total_reads_; }

private:
    std::vector<std::filesystem::path> roots_;
    std::string extension_ = "jm";
    Loader loader_;
    std::map<std::string, std::size_t> reads_;
    std::size_t total_reads_ = 0;
};

struct LoadOutcome {
    ArtifactScope* artifact = nullptr;
    Diagnostics diagnostics;
};

class GlobalScope : public Scope {
public:
    explicit GlobalScope(ModelRepository repository = {});

    ModelRepository& repository() { return repository_; }
    const ModelRepository& repository() const { return repository_; }

    ArtifactScope* find_artifact(std::string_view qualified_name) const;
    // Registers `artifact` under `qualified_name`, invalidating any previous
    // artifact of that name.
    ArtifactScope& add_artifact(std::string qualified_name, std::unique_ptr<ArtifactScope> artifact);
    const std::map<std::string, ArtifactScope*, std::less<>>& artifacts() const { return artifacts_; }

    // Diagnostics raised while lazily loading artifacts.
    const Diagnostics& diagnostics() const { return diagnostics_; }
    void report(Diagnostic d) { diagnostics_.push_back(std::move(d)); }

private:
    friend LoadOutcome load_artifact(GlobalScope&, std::string_view);
    friend void invalidate(GlobalScope&, std::string_view);

    ModelRepository repository_;
    std::map<std::string, ArtifactScope*, std::less<>> artifacts_;
    std::map<std::string, Diagnostics, std::less<>> failed_loads_;
    Diagnostics diagnostics_;
};

// ---------------------------------------------------------------------------

// Adds `symbol` to `scope`. Fails if the symbol is already defined in any scope.
std::optional<Diagnostic> define(Scope& scope, std::shared_ptr<Symbol> symbol);

// Links a scope-spanning symbol and its scope both ways.
void span(Symbol& symbol, Scope& scope);

ResolutionOutcome resolve(Scope& start, std::string_view name, const SymbolKind& kind);
ResolutionOutcome resolve_in_artifact(ArtifactScope& artifact, std::string_view name,
                                      const SymbolKind& kind);
ResolutionOutcome resolve_qualified(GlobalScope& global, std::string_view qualified_name,
                                    const SymbolKind& kind);
ResolutionOutcome resolve_reference(SymbolReference& reference);

LoadOutcome load_artifact(GlobalScope& global, std::string_view qualified_name);
// Drops the cached artifact (or cached load failure) and resets every
// reference that was resolved into it or had failed.
void invalidate(GlobalScope& global, std::string_view qualified_name);

// W1 illegal shadowing, W2 duplicate definition, W3 unresolved reference,
// W4 shadowed import. Resolves all references in the artifact.
Diagnostics check_well_formedness(ArtifactScope& artifact);

// Package, enclosing spanning symbols and the symbol's own name, dot-joined.
std::string qualified_name(const Symbol& symbol);

// Visits every scope of the tree rooted at `root`, pre-order.
void for_each_scope(Scope& root, const std::function<void(Scope&)>& fn);
// Visits every reference held by symbols or scopes of the tree.
void for_each_reference(Scope& root, const std::function<void(SymbolReference&)>& fn);

} // namespace scopegen
