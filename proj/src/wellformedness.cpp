#include "scopegen/runtime.hpp"

#include <set>

namespace scopegen {

namespace {

std::string describe(const std::string& name, const SymbolKind& kind) {
    return kind.name + " '" + name + "'";
}

} // namespace

Diagnostics check_well_formedness(ArtifactScope& artifact) {
    Diagnostics out;
    const std::string& file = artifact.source_name();

    for_each_scope(artifact, [&](Scope& scope) {
        std::set<std::pair<std::string, SymbolKind>> seen;
        for (const auto& sym : scope.symbols()) {
            if (!seen.emplace(sym->name(), sym->kind()).second) {
                out.push_back(make_error(codes::DuplicateDefinition,
                                         "duplicate definition of " +
                                             describe(sym->name(), sym->kind()) + " in " +
                                             scope.class_name(),
                                         sym->location(), file));
            }
        }

        if (scope.discipline() != Discipline::Visibility) return;
        // A visibility scope may not redeclare what is visible up to and
        // including the nearest enclosing shadowing scope.
        for (const auto& sym : scope.symbols()) {
            for (Scope* outer = scope.enclosing(); outer; outer = outer->enclosing()) {
                auto clash = outer->local(sym->name(), sym->kind());
                if (!clash.empty()) {
                    out.push_back(make_error(
                        codes::IllegalShadowing,
                        describe(sym->name(), sym->kind()) + " in " + scope.class_name() +
                            " illegally shadows the definition in " + outer->class_name() +
                            " at line " + std::to_string(clash.front()->location().line),
                        sym->location(), file));
                    break;
                }
                if (outer->discipline() == Discipline::Shadowing) break;
            }
        }
    });

    for_each_reference(artifact, [&](SymbolReference& ref) {
        auto outcome = resolve_reference(ref);
        if (outcome.is_found()) return;
        std::string msg = outcome.is_ambiguous()
                              ? "ambiguous reference to " + describe(ref.name(), ref.target_kind()) +
                                    " (" + std::to_string(outcome.symbols.size()) + " candidates)"
                              : "unresolved reference to " + describe(ref.name(), ref.target_kind());
        out.push_back(make_error(codes::UnresolvedReference, std::move(msg), ref.location(), file));
    });

    const auto& imports = artifact.imports();
    const auto& locs = artifact.import_locations();
    auto last_segment = [](const std::string& q) {
        auto dot = q.rfind('.');
        return dot == std::string::npos ? q : q.substr(dot + 1);
    };
    for (std::size_t i = 0; i < imports.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (last_segment(imports[j]) != last_segment(imports[i])) continue;
            out.push_back(make_warning(codes::ShadowedImport,
                                       "import '" + imports[i] + "' is shadowed by earlier import '" +
                                           imports[j] + "'",
                                       i < locs.size() ? locs[i] : SourceLocation{}, file));
            break;
        }
    }
    return out;
}

} // namespace scopegen
