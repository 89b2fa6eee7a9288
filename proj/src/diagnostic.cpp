#include "scopegen/diagnostic.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace scopegen {

Diagnostic make_error(std::string code, std::string message, SourceLocation loc,
                      std::string file) {
    return Diagnostic{Severity::Error, std::move(code), std::move(message), std::move(file), loc};
}

Diagnostic make_warning(std::string code, std::string message, SourceLocation loc,
                        std::string file) {
    return Diagnostic{Severity::Warning, std::move(code), std::move(message), std::move(file),
                      loc};
}

bool has_errors(const Diagnostics& diags) {
    return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.is_error(); });
}

void sort_diagnostics(Diagnostics& diags) {
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.file, a.location.line, a.location.column, a.code) <
               std::tie(b.file, b.location.line, b.location.column, b.code);
    });
}

std::string format_diagnostic(const Diagnostic& d) {
    std::ostringstream out;
    out << (d.file.empty() ? "<input>" : d.file) << ':' << d.location.line << ':'
        << d.location.column << ": " << (d.is_error() ? "error" : "warning") << ": " << d.code
        << ": " << d.message;
    return out.str();
}

} // namespace scopegen
