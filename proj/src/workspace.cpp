#include "scopegen/workspace.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace scopegen {

using nlohmann::json;

namespace {

std::optional<std::string> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void stamp_file(Diagnostics& diags, const std::string& file) {
    for (auto& d : diags) {
        if (d.file.empty()) d.file = file;
    }
}

bool all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

json dump_scope(const Scope& scope) {
    json j;
    j["scope"] = scope.class_name();
    j["discipline"] = to_string(scope.discipline());
    if (scope.spanning_symbol()) j["spannedBy"] = scope.spanning_symbol()->name();
    json symbols = json::array();
    for (const auto& sym : scope.symbols()) {
        json refs = json::array();
        for (const auto& [role, list] : sym->references()) {
            for (const auto& ref : list) {
                refs.push_back({{"role", role}, {"name", ref->name()}, {"state", to_string(ref->state())}});
            }
        }
        symbols.push_back({{"name", sym->name()}, {"kind", sym->kind().name}, {"references", refs}});
    }
    j["symbols"] = std::move(symbols);
    if (!scope.references().empty()) {
        json refs = json::array();
        for (const auto& ref : scope.references()) {
            refs.push_back({{"name", ref->name()},
                            {"kind", ref->target_kind().name},
                            {"state", to_string(ref->state())}});
        }
        j["references"] = std::move(refs);
    }
    json children = json::array();
    for (const auto& child : scope.sub_scopes()) children.push_back(dump_scope(*child));
    j["children"] = std::move(children);
    return j;
}

} // namespace

std::size_t DiagnosticReport::errors() const {
    return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                  [](const Diagnostic& d) { return d.is_error(); }));
}

std::size_t DiagnosticReport::warnings() const { return diagnostics.size() - errors(); }

std::string DiagnosticReport::text() const {
    std::string out;
    for (const auto& d : diagnostics) out += format_diagnostic(d) + "\n";
    out += std::to_string(errors()) + " error(s), " + std::to_string(warnings()) + " warning(s)\n";
    return out;
}

std::string dump_scope_tree(const ArtifactScope& artifact) { return dump_scope(artifact).dump() + "\n"; }

Workspace::Workspace(WorkspaceOptions options) : options_(std::move(options)) { reset_global(); }

void Workspace::set_options(WorkspaceOptions options) {
    options_ = std::move(options);
    reset_global();
}

void Workspace::reset_global() {
    ModelRepository repo(options_.model_path, options_.extension,
                         [this](const std::string& content, const std::string& path) {
                             return build_artifact(content, path);
                         });
    global_ = std::make_unique<GlobalScope>(std::move(repo));
}

Diagnostics Workspace::load_grammar_file(const std::filesystem::path& path, bool* io_error) {
    auto source = read_file(path);
    if (!source) {
        if (io_error) *io_error = true;
        return {make_error(codes::Io, "cannot read grammar file", {}, path.string())};
    }
    if (io_error) *io_error = false;
    return load_grammar(*source, path.stem().string(), path.string());
}

Diagnostics Workspace::load_grammar(std::string_view source, std::string name, std::string file) {
    grammar_.reset();
    model_.reset();
    reset_global();

    auto parsed = parse_grammar(source, std::move(name));
    Diagnostics diags = std::move(parsed.diagnostics);
    if (parsed.ok()) {
        auto validation = validate_grammar(*parsed.grammar);
        diags.insert(diags.end(), validation.begin(), validation.end());
    }
    stamp_file(diags, file);
    if (!parsed.ok() || has_errors(diags)) return diags;

    try {
        model_ = derive(*parsed.grammar);
    } catch (const DerivationError& e) {
        diags.push_back(make_error(codes::GrammarSyntax, e.what(), {}, file));
        return diags;
    }
    grammar_ = std::move(parsed.grammar);
    return diags;
}

LoadedArtifact Workspace::build_artifact(const std::string& content, const std::string& path) const {
    LoadedArtifact out;
    auto parsed = parse_artifact(content, *grammar_);
    if (!parsed.ok()) {
        out.diagnostics = std::move(parsed.diagnostics);
        stamp_file(out.diagnostics, path);
        return out;
    }
    auto built = build_table(*model_, parsed.header, std::shared_ptr<AstNode>(std::move(parsed.ast)));
    built.artifact->set_source_name(path);
    out.artifact = std::move(built.artifact);
    out.diagnostics = std::move(built.diagnostics);
    stamp_file(out.diagnostics, path);
    return out;
}

Workspace::FileResult Workspace::add_model_file(const std::filesystem::path& file) {
    FileResult result;
    const std::string name = file.string();
    if (!ready()) {
        result.diagnostics.push_back(make_error(codes::Io, "no grammar loaded", {}, name));
        return result;
    }
    auto content = read_file(file);
    if (!content) {
        result.io_error = true;
        result.diagnostics.push_back(make_error(codes::Io, "cannot read model file", {}, name));
        return result;
    }
    LoadedArtifact loaded = build_artifact(*content, name);
    result.diagnostics = std::move(loaded.diagnostics);
    if (!loaded.artifact || has_errors(result.diagnostics)) return result;

    std::string qname = file.stem().string();
    if (!loaded.artifact->package_name().empty()) qname = loaded.artifact->package_name() + "." + qname;
    result.artifact = &global_->add_artifact(std::move(qname), std::move(loaded.artifact));
    return result;
}

DiagnosticReport Workspace::check(const std::vector<std::filesystem::path>& files, bool* io_error) {
    DiagnosticReport report;
    if (io_error) *io_error = false;
    const std::size_t lazy_before = global_->diagnostics().size();

    std::vector<std::string> built;
    for (const auto& file : files) {
        auto result = add_model_file(file);
        if (result.io_error && io_error) *io_error = true;
        report.diagnostics.insert(report.diagnostics.end(), result.diagnostics.begin(),
                                  result.diagnostics.end());
        if (result.artifact) built.push_back(result.artifact->qualified_name());
    }
    // Looked up by name: checking one artifact may load and replace others.
    for (const auto& qname : built) {
        if (ArtifactScope* artifact = global_->find_artifact(qname)) {
            auto diags = check_well_formedness(*artifact);
            report.diagnostics.insert(report.diagnostics.end(), diags.begin(), diags.end());
        }
    }
    const auto& lazy = global_->diagnostics();
    report.diagnostics.insert(report.diagnostics.end(),
                              lazy.begin() + static_cast<std::ptrdiff_t>(lazy_before), lazy.end());
    sort_diagnostics(report.diagnostics);
    return report;
}

ResolveResult Workspace::resolve(const std::filesystem::path& file, std::string_view scope_path,
                                 std::string_view name, std::string_view kind) {
    ResolveResult result;
    auto added = add_model_file(file);
    result.diagnostics = std::move(added.diagnostics);
    result.io_error = added.io_error;
    if (!added.artifact) {
        result.status = ResolveStatus::Failed;
        return result;
    }

    Scope* scope = added.artifact;
    std::size_t start = 0;
    while (start <= scope_path.size()) {
        auto slash = scope_path.find('/', start);
        auto segment = scope_path.substr(start, slash == std::string_view::npos ? slash : slash - start);
        start = slash == std::string_view::npos ? scope_path.size() + 1 : slash + 1;
        if (segment.empty()) continue;

        Scope* next = nullptr;
        std::string problem;
        if (all_digits(segment)) {
            std::size_t index = std::stoul(std::string(segment));
            std::size_t seen = 0;
            for (const auto& sub : scope->sub_scopes()) {
                if (sub->spanning_symbol()) continue;
                if (seen++ == index) {
                    next = sub.get();
                    break;
                }
            }
            if (!next) problem = "no unnamed sub-scope #" + std::string(segment);
        } else {
            std::vector<Scope*> spanned;
            for (Symbol* s : scope->local(segment)) {
                if (s->spanned_scope()) spanned.push_back(s->spanned_scope());
            }
            if (spanned.size() == 1) {
                next = spanned.front();
            } else {
                problem = spanned.empty() ? "no scope spanned by '" + std::string(segment) + "'"
                                          : "several scopes spanned by '" + std::string(segment) + "'";
            }
        }
        if (!next) {
            result.status = ResolveStatus::BadScopePath;
            result.diagnostics.push_back(
                make_error(codes::Io, "bad scope path '" + std::string(scope_path) + "': " + problem,
                           {}, file.string()));
            return result;
        }
        scope = next;
    }

    result.outcome = scopegen::resolve(*scope, name, SymbolKind{std::string(kind)});
    switch (result.outcome.kind) {
    case ResolutionOutcome::Kind::Found: {
        const Symbol& s = *result.outcome.symbol();
        const ArtifactScope* where = s.defining_scope() ? s.defining_scope()->artifact() : nullptr;
        result.status = ResolveStatus::Found;
        result.line = "FOUND " + qualified_name(s) + " " + s.kind().name + " " +
                      (where ? where->source_name() : std::string("<unknown>")) + ":" +
                      std::to_string(s.location().line);
        break;
    }
    case ResolutionOutcome::Kind::None:
        result.status = ResolveStatus::None;
        result.line = "NONE";
        break;
    case ResolutionOutcome::Kind::Ambiguous:
        result.status = ResolveStatus::Ambiguous;
        result.line = "AMBIGUOUS " + std::to_string(result.outcome.symbols.size());
        break;
    }
    return result;
}

std::string Workspace::dump(const std::filesystem::path& file, Diagnostics& diagnostics, bool* io_error) {
    auto added = add_model_file(file);
    if (io_error) *io_error = added.io_error;
    diagnostics = std::move(added.diagnostics);
    if (!added.artifact) return {};
    const std::string qname = added.artifact->qualified_name();
    for_each_reference(*added.artifact, [](SymbolReference& ref) { resolve_reference(ref); });
    ArtifactScope* artifact = global_->find_artifact(qname);
    return artifact ? dump_scope_tree(*artifact) : std::string{};
}

} // namespace scopegen
