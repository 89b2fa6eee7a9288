#pragma once

// Parsing model files against a grammar and instantiating the derived
// symbol-table model over the resulting tree.

#include "scopegen/derivation.hpp"
#include "scopegen/grammar.hpp"
#include "scopegen/runtime.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace scopegen {

enum class TokenClass { Name, Keyword, Punct, String };

struct Token {
    TokenClass cls = TokenClass::Name;
    std::string text;
    SourceLocation location;

    friend bool operator==(const Token& a, const Token& b) {
        return a.cls == b.cls && a.text == b.text;
    }
};

struct TokenizeResult {
    std::vector<Token> tokens;
    Diagnostics diagnostics;

    bool ok() const { return diagnostics.empty(); }
};

// Identifier-shaped terminals of `g` become keywords. Other terminals plus
// the framework punctuation `.`, `;` and `*` are matched longest-first.
TokenizeResult tokenize(std::string_view text, const Grammar& g);

enum class LeafKind { Terminal, Name, Reference };

// A terminal, a `Name`, or a reference-annotated `Name` (possibly dotted,
// hence several tokens).
struct AstLeaf {
    LeafKind kind = LeafKind::Terminal;
    std::vector<Token> tokens;
    std::optional<std::string> label;
    // Referenced production, for LeafKind::Reference.
    std::string ref_target;

    std::string text() const;
    SourceLocation location() const { return tokens.front().location; }

    friend bool operator==(const AstLeaf&, const AstLeaf&) = default;
};

struct AstNode;

struct AstChild {
    // The nonterminal's label, else the child production name.
    std::string role;
    std::unique_ptr<AstNode> node;
};

struct AstNode {
    std::string production;
    std::vector<std::variant<AstLeaf, AstChild>> elements;

    // Links into the symbol table, set by build_table.
    Symbol* symbol = nullptr;
    Scope* scope = nullptr;

    std::vector<const AstChild*> children() const;
    std::vector<const AstLeaf*> leaves() const;
    // Every token under this node in source order.
    std::vector<Token> all_tokens() const;
};

// Same productions, roles and tokens; links are ignored.
bool same_structure(const AstNode& a, const AstNode& b);

struct ModelParseResult {
    std::unique_ptr<AstNode> ast;
    Diagnostics diagnostics;

    bool ok() const { return ast != nullptr; }
};

// Backtracking interpretation of `g` from its start production. Must consume
// every token.
ModelParseResult parse_model(const Grammar& g, std::span<const Token> tokens);

struct ArtifactHeader {
    std::string package_name;
    std::vector<std::string> imports;
    std::vector<SourceLocation> import_locations;
};

struct ArtifactParseResult {
    ArtifactHeader header;
    std::unique_ptr<AstNode> ast;
    Diagnostics diagnostics;

    bool ok() const { return ast != nullptr && !has_errors(diagnostics); }
};

// `("package" QUAL ";")? ("import" QUAL ";")*` followed by a model.
ArtifactParseResult parse_artifact(std::string_view text, const Grammar& g);

struct BuildOptions {
    // Called for every reference created, with the scope stack at that point
    // (outermost first).
    std::function<void(const SymbolReference&, std::span<Scope* const>)> on_reference;
};

struct BuildResult {
    std::unique_ptr<ArtifactScope> artifact;
    Diagnostics diagnostics;
};

// Builds a detached artifact scope over `ast`; the artifact keeps the tree
// alive. Register it with GlobalScope::add_artifact to make it resolvable
// from other artifacts.
BuildResult build_table(const SymbolTableModel& model, const ArtifactHeader& header,
                        std::shared_ptr<AstNode> ast, const BuildOptions& options = {});

inline Symbol* symbol_of(const AstNode& node) { return node.symbol; }
inline Scope* scope_of(const AstNode& node) { return node.scope; }
inline const AstNode* node_of(const Symbol& symbol) { return symbol.ast_node(); }
inline const AstNode* node_of(const Scope& scope) { return scope.ast_node(); }

} // namespace scopegen
