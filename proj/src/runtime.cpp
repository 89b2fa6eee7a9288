#include "scopegen/runtime.hpp"

#include <algorithm>

namespace scopegen {

const char* to_string(ReferenceState s) {
    switch (s) {
    case ReferenceState::Unresolved:
        return "unresolved";
    case ReferenceState::Resolved:
        return "resolved";
    case ReferenceState::Failed:
        return "failed";
    }
    return "unresolved";
}

SymbolReference::SymbolReference(std::string name, SymbolKind target_kind, Scope& context,
                                 SourceLocation location)
    : name_(std::move(name)),
      target_kind_(std::move(target_kind)),
      context_(&context),
      location_(location) {}

Symbol::Symbol(std::string name, SymbolKind kind, SourceLocation location)
    : name_(std::move(name)), kind_(std::move(kind)), location_(location) {}

SymbolReference& Symbol::add_reference(const std::string& role, std::string name, SymbolKind kind,
                                       Scope& context, SourceLocation location) {
    auto ref = std::make_unique<SymbolReference>(std::move(name), std::move(kind), context, location);
    ref->owner_ = this;
    auto& list = references_[role];
    list.push_back(std::move(ref));
    return *list.back();
}

Scope::Scope(Discipline discipline, std::string class_name, ScopeClassification classification)
    : discipline_(discipline), class_name_(std::move(class_name)), classification_(classification) {}

Scope::~Scope() {
    for (auto& s : symbols_) {
        if (s->defining_scope_ == this) s->defining_scope_ = nullptr;
    }
    if (spanning_symbol_ && spanning_symbol_->spanned_scope_ == this) {
        spanning_symbol_->spanned_scope_ = nullptr;
    }
}

Scope& Scope::add_sub_scope(std::unique_ptr<Scope> child) {
    child->enclosing_ = this;
    sub_scopes_.push_back(std::move(child));
    return *sub_scopes_.back();
}

std::unique_ptr<Scope> Scope::remove_sub_scope(const Scope& child) {
    auto it = std::find_if(sub_scopes_.begin(), sub_scopes_.end(),
                           [&](const auto& p) { return p.get() == &child; });
    if (it == sub_scopes_.end()) return nullptr;
    auto owned = std::move(*it);
    sub_scopes_.erase(it);
    owned->enclosing_ = nullptr;
    return owned;
}

std::vector<Symbol*> Scope::local(std::string_view name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return {};
    return it->second;
}

std::vector<Symbol*> Scope::local(std::string_view name, const SymbolKind& kind) const {
    std::vector<Symbol*> out;
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return out;
    for (Symbol* s : it->second) {
        if (s->kind() == kind) out.push_back(s);
    }
    return out;
}

SymbolReference& Scope::add_reference(std::string name, SymbolKind kind, SourceLocation location) {
    references_.push_back(
        std::make_unique<SymbolReference>(std::move(name), std::move(kind), *this, location));
    return *references_.back();
}

ArtifactScope* Scope::artifact() {
    for (Scope* s = this; s; s = s->enclosing_) {
        if (s->classification_ == ScopeClassification::Artifact) return static_cast<ArtifactScope*>(s);
    }
    return nullptr;
}

GlobalScope* Scope::global() {
    Scope* s = this;
    while (s->enclosing_) s = s->enclosing_;
    return s->classification_ == ScopeClassification::Global ? static_cast<GlobalScope*>(s) : nullptr;
}

ArtifactScope::ArtifactScope(std::string class_name, std::string package_name,
                             std::vector<std::string> imports)
    : Scope(Discipline::Shadowing, std::move(class_name), ScopeClassification::Artifact),
      package_name_(std::move(package_name)),
      imports_(std::move(imports)) {}

GlobalScope::GlobalScope(ModelRepository repository)
    : Scope(Discipline::Shadowing, "GlobalScope", ScopeClassification::Global),
      repository_(std::move(repository)) {}

ArtifactScope* GlobalScope::find_artifact(std::string_view qualified_name) const {
    auto it = artifacts_.find(qualified_name);
    return it == artifacts_.end() ? nullptr : it->second;
}

ArtifactScope& GlobalScope::add_artifact(std::string qualified_name,
                                         std::unique_ptr<ArtifactScope> artifact) {
    if (artifacts_.count(qualified_name) || failed_loads_.count(qualified_name)) {
        invalidate(*this, qualified_name);
    }
    artifact->qualified_name_ = qualified_name;
    auto& added = static_cast<ArtifactScope&>(add_sub_scope(std::move(artifact)));
    artifacts_.emplace(std::move(qualified_name), &added);
    return added;
}

std::optional<Diagnostic> define(Scope& scope, std::shared_ptr<Symbol> symbol) {
    if (symbol->defining_scope_) {
        return make_error(codes::DuplicateDefinition,
                          "symbol '" + symbol->name() + "' is already defined in another scope",
                          symbol->location());
    }
    symbol->defining_scope_ = &scope;
    scope.by_name_[symbol->name()].push_back(symbol.get());
    scope.symbols_.push_back(std::move(symbol));
    return std::nullopt;
}

void span(Symbol& symbol, Scope& scope) {
    symbol.spanned_scope_ = &scope;
    scope.spanning_symbol_ = &symbol;
}

std::string qualified_name(const Symbol& symbol) {
    std::vector<std::string> parts{symbol.name()};
    for (Scope* s = symbol.defining_scope(); s; s = s->enclosing()) {
        if (s->classification() == ScopeClassification::Artifact) {
            const auto& pkg = static_cast<ArtifactScope*>(s)->package_name();
            if (!pkg.empty()) parts.push_back(pkg);
            break;
        }
        if (s->spanning_symbol()) parts.push_back(s->spanning_symbol()->name());
    }
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        if (!out.empty()) out += '.';
        out += *it;
    }
    return out;
}

void for_each_scope(Scope& root, const std::function<void(Scope&)>& fn) {
    fn(root);
    for (const auto& child : root.sub_scopes()) for_each_scope(*child, fn);
}

void for_each_reference(Scope& root, const std::function<void(SymbolReference&)>& fn) {
    for_each_scope(root, [&](Scope& scope) {
        for (const auto& ref : scope.references()) fn(*ref);
        for (const auto& sym : scope.symbols()) {
            for (const auto& [role, refs] : sym->references()) {
                for (const auto& ref : refs) fn(*ref);
            }
        }
    });
}

} // namespace scopegen
