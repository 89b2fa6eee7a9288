#pragma once

// Language-level symbol-table model derived from an annotated grammar by
// naming convention: `P@!` yields `PSymbol`/`PSymbolKind`, productions that
// contain symbols yield `PScope`, and every language gets one artifact scope.

#include "scopegen/grammar.hpp"

#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace scopegen {

enum class Discipline { Shadowing, Visibility };

const char* to_string(Discipline d);

struct ReferenceRoleModel {
    std::string role;
    std::string target_symbol_class;
    bool many = false;

    friend bool operator==(const ReferenceRoleModel&, const ReferenceRoleModel&) = default;
};

struct SymbolClassModel {
    std::string name;
    std::string kind_name;
    std::string production;
    std::vector<ReferenceRoleModel> reference_roles;
    std::optional<std::string> spanned_scope;

    friend bool operator==(const SymbolClassModel&, const SymbolClassModel&) = default;
};

struct ScopeClassModel {
    std::string name;
    Discipline discipline = Discipline::Visibility;
    std::optional<std::string> spanning_symbol;
    std::string production;
    std::set<std::string> containable_symbol_classes;
    std::set<std::string> containable_scope_classes;

    friend bool operator==(const ScopeClassModel&, const ScopeClassModel&) = default;
};

struct ArtifactScopeModel {
    std::string name;
    std::set<std::string> containable_symbol_classes;
    std::set<std::string> containable_scope_classes;

    friend bool operator==(const ArtifactScopeModel&, const ArtifactScopeModel&) = default;
};

struct SymbolTableModel {
    std::string language_name;
    // Both sorted by name.
    std::vector<SymbolClassModel> symbol_classes;
    std::vector<ScopeClassModel> scope_classes;
    ArtifactScopeModel artifact_scope;

    const SymbolClassModel* symbol_class(std::string_view name) const;
    const ScopeClassModel* scope_class(std::string_view name) const;
    const SymbolClassModel* symbol_class_for(std::string_view production) const;
    // Scope class not spanned by a symbol, associated with `production`.
    const ScopeClassModel* scope_class_for(std::string_view production) const;

    friend bool operator==(const SymbolTableModel&, const SymbolTableModel&) = default;
};

struct ContainedElements {
    std::set<std::string> symbol_classes;
    std::set<std::string> scope_classes;

    bool empty() const { return symbol_classes.empty() && scope_classes.empty(); }
    friend bool operator==(const ContainedElements&, const ContainedElements&) = default;
};

// Which productions carry a symbol class and/or a scope class. Intermediate
// state of the derivation, exposed so the containment walks can be tested
// on their own.
struct ClassAssignment {
    std::set<std::string> symbol_productions;
    std::set<std::string> scope_productions;

    bool has_symbol(const std::string& p) const { return symbol_productions.count(p) != 0; }
    bool has_scope(const std::string& p) const { return scope_productions.count(p) != 0; }
};

struct DerivationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Symbol-annotated productions plus the scope-carrying productions found by
// fixed-point iteration. Throws DerivationError when it does not stabilise.
ClassAssignment assign_classes(const Grammar& g);

ContainedElements contained_elements(const Grammar& g, const Production& p,
                                     const ClassAssignment& assignment);
ContainedElements artifact_contents(const Grammar& g, const ClassAssignment& assignment);

// Throws DerivationError if `g` has validation errors.
SymbolTableModel derive(const Grammar& g);

std::string symbol_class_name(std::string_view production);
std::string kind_name(std::string_view production);
std::string scope_class_name(std::string_view production);

// --- JSON serialization -----------------------------------------------------

enum class ModelErrorCode { Malformed, SchemaViolation, DanglingReference };

struct ModelFormatError : std::runtime_error {
    ModelErrorCode code;
    ModelFormatError(ModelErrorCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

// Compact JSON with sorted keys and name-sorted arrays, one trailing newline.
std::string write_model(const SymbolTableModel& m);
void write_model(const SymbolTableModel& m, std::ostream& sink);
SymbolTableModel read_model(std::string_view source);

} // namespace scopegen
