#pragma once

#include <string>
#include <vector>

namespace scopegen {

struct SourceLocation {
    int line = 1;
    int column = 1;

    friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

enum class Severity { Error, Warning };

// Stable diagnostic codes. V* come from grammar validation, W* from
// symbol-table well-formedness checks, E* from everything else.
namespace codes {
inline constexpr const char* GrammarSyntax = "E1";
inline constexpr const char* IllegalCharacter = "E2";
inline constexpr const char* ModelSyntax = "E3";
inline constexpr const char* HeaderSyntax = "E4";
inline constexpr const char* FileNotFound = "E5";
inline constexpr const char* LoadFailure = "E6";
inline constexpr const char* ModelMismatch = "E7";
inline constexpr const char* Io = "E8";

inline constexpr const char* UndefinedNonterminal = "V1";
inline constexpr const char* SymbolWithoutName = "V2";
inline constexpr const char* BadReferenceTarget = "V3";
inline constexpr const char* ReferenceOnNonName = "V4";
inline constexpr const char* DuplicateProduction = "V5";
inline constexpr const char* NameRedefined = "V6";
inline constexpr const char* AmbiguousSymbolName = "V7";
inline constexpr const char* ConflictingRole = "V8";

inline constexpr const char* IllegalShadowing = "W1";
inline constexpr const char* DuplicateDefinition = "W2";
inline constexpr const char* UnresolvedReference = "W3";
inline constexpr const char* ShadowedImport = "W4";
} // namespace codes

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    std::string file;
    SourceLocation location;

    bool is_error() const { return severity == Severity::Error; }
};

using Diagnostics = std::vector<Diagnostic>;

Diagnostic make_error(std::string code, std::string message, SourceLocation loc = {},
                      std::string file = {});
Diagnostic make_warning(std::string code, std::string message, SourceLocation loc = {},
                        std::string file = {});

bool has_errors(const Diagnostics& diags);

// Orders by (file, line, column, code); stable for equal keys.
void sort_diagnostics(Diagnostics& diags);

// `file:line:col: severity: code: message`
std::string format_diagnostic(const Diagnostic& d);

} // namespace scopegen
