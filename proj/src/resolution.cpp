#include "scopegen/runtime.hpp"

namespace scopegen {

namespace {

std::pair<std::string_view, std::string_view> split_last(std::string_view qualified) {
    auto dot = qualified.rfind('.');
    if (dot == std::string_view::npos) return {{}, qualified};
    return {qualified.substr(0, dot), qualified.substr(dot + 1)};
}

ResolutionOutcome outcome_of(std::vector<Symbol*> matches) {
    if (matches.empty()) return ResolutionOutcome::none();
    if (matches.size() == 1) return ResolutionOutcome::found(matches.front());
    return ResolutionOutcome::ambiguous(std::move(matches));
}

ArtifactScope* artifact_of(const Symbol& s) {
    return s.defining_scope() ? s.defining_scope()->artifact() : nullptr;
}

} // namespace

ResolutionOutcome resolve(Scope& start, std::string_view name, const SymbolKind& kind) {
    if (name.find('.') != std::string_view::npos) {
        GlobalScope* global = start.global();
        if (!global) return ResolutionOutcome::none();
        return resolve_qualified(*global, name, kind);
    }
    // Innermost match wins whatever the disciplines; disciplines only decide
    // legality, which check_well_formedness reports.
    for (Scope* scope = &start; scope; scope = scope->enclosing()) {
        if (scope->classification() == ScopeClassification::Artifact) {
            auto outcome = resolve_in_artifact(*static_cast<ArtifactScope*>(scope), name, kind);
            if (!outcome.is_none()) return outcome;
            continue;
        }
        auto outcome = outcome_of(scope->local(name, kind));
        if (!outcome.is_none()) return outcome;
    }
    return ResolutionOutcome::none();
}

ResolutionOutcome resolve_in_artifact(ArtifactScope& artifact, std::string_view name,
                                      const SymbolKind& kind) {
    auto local = outcome_of(artifact.local(name, kind));
    if (!local.is_none()) return local;

    GlobalScope* global = artifact.global();
    if (!global) return ResolutionOutcome::none();

    for (const auto& imported : artifact.imports()) {
        if (split_last(imported).second != name) continue;
        auto outcome = resolve_qualified(*global, imported, kind);
        if (!outcome.is_none()) return outcome;
    }

    const std::string same_package = artifact.package_name().empty()
                                         ? std::string(name)
                                         : artifact.package_name() + "." + std::string(name);
    return resolve_qualified(*global, same_package, kind);
}

ResolutionOutcome resolve_qualified(GlobalScope& global, std::string_view qualified_name,
                                    const SymbolKind& kind) {
    if (qualified_name.empty()) return ResolutionOutcome::none();
    auto [package, simple] = split_last(qualified_name);

    std::vector<Symbol*> matches;
    ArtifactScope* direct = load_artifact(global, qualified_name).artifact;
    if (direct) matches = direct->local(simple, kind);
    if (!matches.empty()) return outcome_of(std::move(matches));

    // Further top-level symbols of files that are already loaded.
    for (const auto& [name, artifact] : global.artifacts()) {
        if (artifact == direct || artifact->package_name() != package) continue;
        for (Symbol* s : artifact->local(simple, kind)) matches.push_back(s);
    }
    return outcome_of(std::move(matches));
}

ResolutionOutcome resolve_reference(SymbolReference& ref) {
    if (ref.state_ != ReferenceState::Unresolved) return ref.outcome_;
    ref.outcome_ = resolve(*ref.context_, ref.name_, ref.target_kind_);
    ref.state_ = ref.outcome_.is_found() ? ReferenceState::Resolved : ReferenceState::Failed;
    return ref.outcome_;
}

LoadOutcome load_artifact(GlobalScope& global, std::string_view qualified_name) {
    if (ArtifactScope* cached = global.find_artifact(qualified_name)) return {cached, {}};
    if (auto failed = global.failed_loads_.find(qualified_name); failed != global.failed_loads_.end()) {
        return {nullptr, failed->second};
    }

    const std::string qname(qualified_name);
    auto fail = [&](Diagnostics diags, bool report) -> LoadOutcome {
        if (report) {
            for (const auto& d : diags) global.report(d);
        }
        global.failed_loads_.emplace(qname, diags);
        return {nullptr, std::move(diags)};
    };

    auto& repo = global.repository();
    auto path = repo.locate(qname);
    if (!path) {
        return fail({make_error(codes::FileNotFound,
                                "no model file for '" + qname + "' on the model path")},
                    false);
    }
    auto content = repo.read(*path);
    if (!content) {
        return fail({make_error(codes::Io, "cannot read '" + path->string() + "'", {},
                                path->string())},
                    true);
    }
    LoadedArtifact loaded = repo.load(*content, path->string());
    if (!loaded.artifact || has_errors(loaded.diagnostics)) {
        Diagnostics diags{make_error(codes::LoadFailure, "failed to load '" + qname + "'", {},
                                     path->string())};
        diags.insert(diags.end(), loaded.diagnostics.begin(), loaded.diagnostics.end());
        return fail(std::move(diags), true);
    }
    if (loaded.artifact->source_name().empty()) loaded.artifact->set_source_name(path->string());
    ArtifactScope& added = global.add_artifact(qname, std::move(loaded.artifact));
    return {&added, std::move(loaded.diagnostics)};
}

void invalidate(GlobalScope& global, std::string_view qualified_name) {
    global.failed_loads_.erase(std::string(qualified_name));
    ArtifactScope* dropped = global.find_artifact(qualified_name);
    if (dropped) global.artifacts_.erase(global.artifacts_.find(qualified_name));

    for (const auto& [name, artifact] : global.artifacts_) {
        for_each_reference(*artifact, [&](SymbolReference& ref) {
            if (ref.state_ == ReferenceState::Failed) {
                ref.reset();
            } else if (ref.state_ == ReferenceState::Resolved && dropped &&
                       artifact_of(*ref.outcome_.symbol()) == dropped) {
                ref.reset();
            }
        });
    }
    if (dropped) global.remove_sub_scope(*dropped);
}

} // namespace scopegen
