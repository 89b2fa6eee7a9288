#include "scopegen/instancing.hpp"

namespace scopegen {

namespace {

class TableBuilder {
public:
    TableBuilder(const SymbolTableModel& model, const BuildOptions& options)
        : model_(model), options_(options) {}

    BuildResult run(const ArtifactHeader& header, std::shared_ptr<AstNode> ast) {
        auto artifact = std::make_unique<ArtifactScope>(model_.artifact_scope.name,
                                                        header.package_name, header.imports);
        artifact->set_import_locations(header.import_locations);
        stack_.push_back(artifact.get());
        if (ast) visit(*ast, true);
        artifact->retain_ast(std::move(ast));
        return {std::move(artifact), std::move(diagnostics_)};
    }

private:
    static const AstLeaf* naming_leaf(const AstNode& node) {
        const AstLeaf* first = nullptr;
        for (const AstLeaf* leaf : node.leaves()) {
            if (leaf->kind != LeafKind::Name) continue;
            if (leaf->label == std::optional<std::string>("name")) return leaf;
            if (!first) first = leaf;
        }
        return first;
    }

    void mismatch(const std::string& msg, SourceLocation loc) {
        diagnostics_.push_back(make_error(codes::ModelMismatch, msg, loc));
    }

    SourceLocation location_of(const AstNode& node) const {
        auto toks = node.all_tokens();
        return toks.empty() ? SourceLocation{} : toks.front().location;
    }

    Symbol* define_symbol(AstNode& node, const SymbolClassModel& cls) {
        const AstLeaf* leaf = naming_leaf(node);
        if (!leaf) {
            mismatch("no name for " + cls.name + " in " + node.production, location_of(node));
            return nullptr;
        }
        auto sym = std::make_shared<Symbol>(leaf->text(), SymbolKind{cls.kind_name}, leaf->location());
        Symbol* raw = sym.get();
        define(*stack_.back(), std::move(sym));
        raw->set_ast_node(&node);
        node.symbol = raw;
        return raw;
    }

    void create_references(const AstNode& node, Symbol* own) {
        Symbol* owner = own ? own : (owners_.empty() ? nullptr : owners_.back());
        for (const AstLeaf* leaf : node.leaves()) {
            if (leaf->kind != LeafKind::Reference) continue;
            const SymbolClassModel* target = model_.symbol_class_for(leaf->ref_target);
            if (!target) {
                mismatch("no symbol class for referenced production '" + leaf->ref_target + "'",
                         leaf->location());
                continue;
            }
            NonterminalRef as_written{leaf->label, std::string(kNameNonterminal), leaf->ref_target};
            Scope& context = *stack_.back();
            SymbolKind kind{target->kind_name};
            SymbolReference& ref =
                owner ? owner->add_reference(reference_role(as_written), leaf->text(), kind, context,
                                             leaf->location())
                      : context.add_reference(leaf->text(), kind, leaf->location());
            if (options_.on_reference) options_.on_reference(ref, stack_);
        }
    }

    Scope* open_scope(AstNode& node, Symbol* own, const SymbolClassModel* cls) {
        const ScopeClassModel* scope_cls = nullptr;
        if (cls && cls->spanned_scope) {
            scope_cls = model_.scope_class(*cls->spanned_scope);
            if (!scope_cls) {
                mismatch("undefined scope class '" + *cls->spanned_scope + "'", location_of(node));
                return nullptr;
            }
        } else {
            scope_cls = model_.scope_class_for(node.production);
        }
        if (!scope_cls) return nullptr;
        Scope& scope = stack_.back()->add_sub_scope(
            std::make_unique<Scope>(scope_cls->discipline, scope_cls->name));
        if (own && cls && cls->spanned_scope) span(*own, scope);
        scope.set_ast_node(&node);
        node.scope = &scope;
        stack_.push_back(&scope);
        return &scope;
    }

    void visit(AstNode& node, bool root = false) {
        const SymbolClassModel* cls = model_.symbol_class_for(node.production);
        Symbol* own = cls ? define_symbol(node, *cls) : nullptr;
        // A node's own references are evaluated where the node occurs, not
        // inside the scope the node opens.
        create_references(node, own);
        // The artifact scope stands in for the scope of a root without symbol.
        Scope* opened = root && !own ? nullptr : open_scope(node, own, own ? cls : nullptr);
        if (own) owners_.push_back(own);

        for (auto& el : node.elements) {
            if (auto* child = std::get_if<AstChild>(&el)) visit(*child->node, false);
        }

        if (own) owners_.pop_back();
        if (opened) stack_.pop_back();
    }

    const SymbolTableModel& model_;
    const BuildOptions& options_;
    std::vector<Scope*> stack_;
    std::vector<Symbol*> owners_;
    Diagnostics diagnostics_;
};

} // namespace

BuildResult build_table(const SymbolTableModel& model, const ArtifactHeader& header,
                        std::shared_ptr<AstNode> ast, const BuildOptions& options) {
    return TableBuilder(model, options).run(header, std::move(ast));
}

} // namespace scopegen
