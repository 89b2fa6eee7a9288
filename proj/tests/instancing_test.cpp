#include "scopegen/instancing.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace scopegen;

namespace {

const Grammar& fixture() {
    static const Grammar g = support::fixture_grammar();
    return g;
}

std::vector<Token> lex(std::string_view text) {
    auto r = tokenize(text, fixture());
    EXPECT_TRUE(r.ok());
    return r.tokens;
}

ModelParseResult parse(std::string_view text) {
    auto toks = lex(text);
    return parse_model(fixture(), toks);
}

} // namespace

// --- tokenizer -------------------------------------------------------------------

TEST(Tokenize, ClassBody) {
    auto toks = lex("class C { }");
    std::vector<Token> expected{{TokenClass::Keyword, "class", {}},
                                {TokenClass::Name, "C", {}},
                                {TokenClass::Punct, "{", {}},
                                {TokenClass::Punct, "}", {}}};
    EXPECT_EQ(toks, expected);
    EXPECT_EQ(toks[1].location, (SourceLocation{1, 7}));
}

TEST(Tokenize, EmptyInput) { EXPECT_TRUE(lex("").empty()); }

TEST(Tokenize, IllegalCharacter) {
    auto r = tokenize("class$", fixture());
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].code, codes::IllegalCharacter);
    EXPECT_EQ(r.diagnostics[0].location, (SourceLocation{1, 6}));
}

TEST(Tokenize, CommentsLinesAndFrameworkPunctuation) {
    auto toks = lex("// header\npackage a.b;\nclass C { q.S f ; } // tail");
    ASSERT_EQ(toks.size(), 14u);
    EXPECT_EQ(toks[0].cls, TokenClass::Name); // not a grammar keyword
    EXPECT_EQ(toks[0].location, (SourceLocation{2, 1}));
    EXPECT_EQ(toks[2].cls, TokenClass::Punct);
    EXPECT_EQ(toks[2].text, ".");
    EXPECT_EQ(toks[5].cls, TokenClass::Keyword);
}

TEST(Tokenize, LongestPunctuationWins) {
    auto g = *parse_grammar(R"(A = "-" | "->" Name | "-" "-" ;)", "T").grammar;
    auto r = tokenize("-> x --", g);
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r.tokens.size(), 4u);
    EXPECT_EQ(r.tokens[0].text, "->");
    EXPECT_EQ(r.tokens[2].text, "-");
}

TEST(Tokenize, IdentifierPrefixOfKeywordIsName) {
    auto toks = lex("classy methods");
    EXPECT_EQ(toks[0].cls, TokenClass::Name);
    EXPECT_EQ(toks[1].cls, TokenClass::Name);
}

// --- parser ----------------------------------------------------------------------

TEST(ParseModel, ClassWithField) {
    auto r = parse("class C { A f ; }");
    ASSERT_TRUE(r.ok());
    const AstNode& cls = *r.ast;
    EXPECT_EQ(cls.production, "JClass");
    auto leaves = cls.leaves();
    ASSERT_EQ(leaves.size(), 4u);
    EXPECT_EQ(leaves[1]->kind, LeafKind::Name);
    EXPECT_EQ(leaves[1]->text(), "C");
    auto kids = cls.children();
    ASSERT_EQ(kids.size(), 1u);
    EXPECT_EQ(kids[0]->role, "JField");
    const AstNode& field = *kids[0]->node;
    EXPECT_EQ(field.production, "JField");
    ASSERT_EQ(field.leaves().size(), 3u);
    EXPECT_EQ(field.leaves()[0]->kind, LeafKind::Reference);
    EXPECT_EQ(field.leaves()[0]->label, std::optional<std::string>("type"));
    EXPECT_EQ(field.leaves()[0]->ref_target, "JClass");
    EXPECT_EQ(field.leaves()[0]->text(), "A");
    EXPECT_EQ(field.leaves()[1]->text(), "f");
}

TEST(ParseModel, KeywordIsNotAName) {
    auto r = parse("class class { }");
    EXPECT_FALSE(r.ok());
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].code, codes::ModelSyntax);
    EXPECT_EQ(r.diagnostics[0].location, (SourceLocation{1, 7}));
}

TEST(ParseModel, EmptyInputFailsAtStart) {
    auto r = parse_model(fixture(), std::span<const Token>{});
    EXPECT_FALSE(r.ok());
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_NE(r.diagnostics[0].message.find("'class'"), std::string::npos);
}

TEST(ParseModel, TrailingInputIsAnError) {
    auto r = parse("class C { } }");
    EXPECT_FALSE(r.ok());
    EXPECT_EQ(r.diagnostics[0].location, (SourceLocation{1, 13}));
}

TEST(ParseModel, BacktracksIntoStar) {
    // The star must give back its last iteration for the tail to match.
    auto g = *parse_grammar(R"(A = B* "x" "y" ; B = "x" ;)", "T").grammar;
    auto t = tokenize("x x x y", g);
    auto r = parse_model(g, t.tokens);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.ast->children().size(), 2u);
}

TEST(ParseModel, BacktracksAcrossAlternatives) {
    auto g = *parse_grammar(R"(A = B "z" ; B = "x" | "x" "y" ;)", "T").grammar;
    auto t = tokenize("x y z", g);
    auto r = parse_model(g, t.tokens);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.ast->children()[0]->node->leaves().size(), 2u);
}

TEST(ParseModel, LeftRecursionTerminates) {
    auto g = *parse_grammar(R"(E = E "+" T | T ; T = Name ;)", "T").grammar;
    auto t = tokenize("a + b", g);
    auto r = parse_model(g, t.tokens);
    EXPECT_FALSE(r.ok()); // left-recursive alternatives are not used, but parsing stops
    auto single = tokenize("a", g);
    EXPECT_TRUE(parse_model(g, single.tokens).ok());
}

TEST(ParseModel, LabelsBecomeRoles) {
    auto g = *parse_grammar(R"(A = left:B right:B ; B = Name ;)", "T").grammar;
    auto t = tokenize("p q", g);
    auto r = parse_model(g, t.tokens);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.ast->children()[0]->role, "left");
    EXPECT_EQ(r.ast->children()[1]->role, "right");
}

TEST(ParseModel, LongInput) {
    std::string text = "class C {";
    for (int i = 0; i < 1500; ++i) text += " T f" + std::to_string(i) + " ;";
    text += " }";
    auto r = parse(text);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.ast->children().size(), 1500u);
}

// --- header ----------------------------------------------------------------------

TEST(ParseArtifact, HeaderAndDottedReference) {
    auto r = parse_artifact("package p; import q.S; class C { q.S x ; }", fixture());
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.header.package_name, "p");
    EXPECT_EQ(r.header.imports, std::vector<std::string>{"q.S"});
    const AstNode& field = *r.ast->children().at(0)->node;
    EXPECT_EQ(field.leaves()[0]->text(), "q.S");
    EXPECT_EQ(field.leaves()[0]->tokens.size(), 3u);
}

TEST(ParseArtifact, NoHeader) {
    auto r = parse_artifact("class C { }", fixture());
    ASSERT_TRUE(r.ok());
    EXPECT_TRUE(r.header.package_name.empty());
    EXPECT_TRUE(r.header.imports.empty());
}

TEST(ParseArtifact, HeaderErrors) {
    for (const char* bad : {"import ;", "import q; class C { }", "import q.*; class C { }",
                            "package p class C { }", "package ; class C { }", "import q. ; class C { }"}) {
        auto r = parse_artifact(bad, fixture());
        EXPECT_FALSE(r.ok()) << bad;
        ASSERT_EQ(r.diagnostics.size(), 1u) << bad;
        EXPECT_EQ(r.diagnostics[0].code, codes::HeaderSyntax) << bad;
    }
}

// --- build -----------------------------------------------------------------------

TEST(BuildTable, ClassWithField) {
    auto b = support::build_fixture_artifact("class C { A f ; }");
    ASSERT_TRUE(b.artifact);
    EXPECT_TRUE(b.diagnostics.empty());
    ArtifactScope& a = *b.artifact;
    EXPECT_EQ(a.class_name(), "JArtifactScope");
    ASSERT_EQ(a.symbols().size(), 1u);
    Symbol& c = *a.symbols()[0];
    EXPECT_EQ(c.name(), "C");
    EXPECT_EQ(c.kind().name, "JClassSymbolKind");
    ASSERT_NE(c.spanned_scope(), nullptr);
    Scope& cls = *c.spanned_scope();
    EXPECT_EQ(cls.class_name(), "JClassScope");
    EXPECT_EQ(cls.discipline(), Discipline::Shadowing);
    ASSERT_EQ(cls.symbols().size(), 1u);
    Symbol& f = *cls.symbols()[0];
    EXPECT_EQ(f.name(), "f");
    EXPECT_EQ(f.kind().name, "JFieldSymbolKind");
    ASSERT_EQ(f.references().count("type"), 1u);
    const auto& ref = *f.references().at("type").at(0);
    EXPECT_EQ(ref.name(), "A");
    EXPECT_EQ(ref.target_kind().name, "JClassSymbolKind");
    EXPECT_EQ(ref.state(), ReferenceState::Unresolved);
    EXPECT_EQ(&ref.context(), &cls);
    EXPECT_EQ(ref.owner(), &f);
}

TEST(BuildTable, EmptyClass) {
    auto b = support::build_fixture_artifact("class C { }");
    ASSERT_TRUE(b.artifact);
    Scope* cls = b.artifact->symbols().at(0)->spanned_scope();
    ASSERT_NE(cls, nullptr);
    EXPECT_TRUE(cls->symbols().empty());
    EXPECT_TRUE(cls->sub_scopes().empty());
}

TEST(BuildTable, WhileScopeInsideMethod) {
    auto b = support::build_fixture_artifact("class C { method m { while { A v ; } } }");
    ASSERT_TRUE(b.artifact);
    Scope& cls = *b.artifact->symbols().at(0)->spanned_scope();
    Symbol& m = *cls.symbols().at(0);
    Scope& method = *m.spanned_scope();
    EXPECT_EQ(method.class_name(), "JMethodScope");
    ASSERT_EQ(method.sub_scopes().size(), 1u);
    Scope& loop = *method.sub_scopes()[0];
    EXPECT_EQ(loop.class_name(), "JWhileScope");
    EXPECT_EQ(loop.discipline(), Discipline::Visibility);
    EXPECT_EQ(loop.spanning_symbol(), nullptr);
    ASSERT_EQ(loop.symbols().size(), 1u);
    EXPECT_EQ(loop.symbols()[0]->name(), "v");
    EXPECT_EQ(&loop.symbols()[0]->references().at("type")[0]->context(), &loop);
}

TEST(BuildTable, PackageAndImportsCarried) {
    auto b = support::build_fixture_artifact("package a.b; import c.D; class C { }");
    ASSERT_TRUE(b.artifact);
    EXPECT_EQ(b.artifact->package_name(), "a.b");
    EXPECT_EQ(b.artifact->imports(), std::vector<std::string>{"c.D"});
    EXPECT_EQ(qualified_name(*b.artifact->symbols()[0]), "a.b.C");
}

TEST(BuildTable, LabeledNameTakesPrecedence) {
    auto g = *parse_grammar(R"(D@! = "def" Name "as" name:Name ";" ;)", "T").grammar;
    auto m = derive(g);
    auto parsed = parse_artifact("def x as y ;", g);
    ASSERT_TRUE(parsed.ok());
    auto built = build_table(m, parsed.header, std::shared_ptr<AstNode>(std::move(parsed.ast)));
    EXPECT_EQ(built.artifact->symbols().at(0)->name(), "y");
}

TEST(BuildTable, ReferencesWithoutEnclosingSymbolBelongToScope) {
    auto g = *parse_grammar(R"(M = (D | U)* ; D@! = "def" Name ; U = "use" Name@D ;)", "T").grammar;
    auto m = derive(g);
    auto parsed = parse_artifact("def a use a", g);
    ASSERT_TRUE(parsed.ok());
    auto built = build_table(m, parsed.header, std::shared_ptr<AstNode>(std::move(parsed.ast)));
    ASSERT_TRUE(built.diagnostics.empty());
    // The artifact scope stands in for the root M node.
    Scope& top = *built.artifact;
    EXPECT_TRUE(top.sub_scopes().empty());
    ASSERT_EQ(top.references().size(), 1u);
    EXPECT_EQ(top.references()[0]->owner(), nullptr);
    EXPECT_EQ(resolve_reference(*top.references()[0]).symbol(), top.symbols().at(0).get());
}

TEST(Links, SymbolAndNodeAreInverse) {
    auto b = support::build_fixture_artifact("class C { A f ; }");
    const AstNode& cls_node = *b.ast;
    Symbol* c = symbol_of(cls_node);
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(node_of(*c), &cls_node);
    EXPECT_EQ(scope_of(cls_node), c->spanned_scope());
    EXPECT_EQ(node_of(*c->spanned_scope()), &cls_node);
    EXPECT_EQ(b.artifact->ast(), &cls_node);
}

TEST(Links, TerminalOnlyNodeHasNoSymbol) {
    auto b = support::build_fixture_artifact("class C { method m { while { } } }");
    const AstNode& method = *b.ast->children().at(0)->node;
    const AstNode& loop = *method.children().at(0)->node;
    EXPECT_EQ(symbol_of(loop), nullptr);
    EXPECT_NE(scope_of(loop), nullptr);
    auto g = *parse_grammar(R"(M = K* ; K = "k" ;)", "T").grammar;
    auto parsed = parse_artifact("k", g);
    auto built = build_table(derive(g), parsed.header, std::shared_ptr<AstNode>(std::move(parsed.ast)));
    const AstNode& k = *built.artifact->ast()->children().at(0)->node;
    EXPECT_EQ(symbol_of(k), nullptr);
    EXPECT_EQ(scope_of(k), nullptr);
}

TEST(BuildTable, ModelMismatchReported) {
    // A model that lacks the symbol class for a referenced production.
    auto m = support::fixture_model();
    auto parsed = parse_artifact("class C { A f ; }", support::fixture_grammar());
    m.symbol_classes.erase(m.symbol_classes.begin()); // drop JClassSymbol
    auto built = build_table(m, parsed.header, std::shared_ptr<AstNode>(std::move(parsed.ast)));
    ASSERT_FALSE(built.diagnostics.empty());
    EXPECT_EQ(built.diagnostics[0].code, codes::ModelMismatch);
}

// --- properties over the model corpus --------------------------------------------

namespace {

std::vector<std::string> corpus() {
    std::vector<std::string> out;
    for (const auto& entry : std::filesystem::directory_iterator(support::fixture("corpus"))) {
        out.push_back(support::read_text(entry.path()));
    }
    return out;
}

void compare_structure(const AstNode& node, const Scope& scope, std::size_t& scopes_seen) {
    // Scope-bearing descendants of `node`, in order, must be exactly the
    // sub-scopes of `scope`.
    std::vector<const AstNode*> bearing;
    std::function<void(const AstNode&)> collect = [&](const AstNode& n) {
        for (const auto* c : n.children()) {
            if (scope_of(*c->node)) {
                bearing.push_back(c->node.get());
            } else {
                collect(*c->node);
            }
        }
    };
    collect(node);
    ASSERT_EQ(bearing.size(), scope.sub_scopes().size());
    for (std::size_t i = 0; i < bearing.size(); ++i) {
        ASSERT_EQ(scope_of(*bearing[i]), scope.sub_scopes()[i].get());
        ++scopes_seen;
        compare_structure(*bearing[i], *scope.sub_scopes()[i], scopes_seen);
    }
}

std::size_t count_reference_leaves(const AstNode& n) {
    std::size_t count = 0;
    for (const auto* l : n.leaves()) count += l->kind == LeafKind::Reference;
    for (const auto* c : n.children()) count += count_reference_leaves(*c->node);
    return count;
}

} // namespace

TEST(InstancingProperty, CorpusHasTwentyFiles) { EXPECT_EQ(corpus().size(), 20u); }

TEST(InstancingProperty, ParseIsDeterministic) {
    for (const auto& text : corpus()) {
        auto a = parse_artifact(text, fixture());
        auto b = parse_artifact(text, fixture());
        ASSERT_TRUE(a.ok()) << text;
        EXPECT_TRUE(same_structure(*a.ast, *b.ast));
    }
}

TEST(InstancingProperty, FullConsumption) {
    for (const auto& text : corpus()) {
        auto r = parse_artifact(text, fixture());
        ASSERT_TRUE(r.ok());
        auto toks = lex(text);
        EXPECT_EQ(support::artifact_tokens(r.header, *r.ast).size(), toks.size());
        // Dropping the final token always breaks the parse.
        std::vector<Token> cut(toks.begin(), toks.end() - 1);
        auto header_end = toks.size() - r.ast->all_tokens().size();
        EXPECT_FALSE(parse_model(fixture(), std::span<const Token>(cut).subspan(header_end)).ok());
    }
}

TEST(InstancingProperty, PrintParseRoundTrip) {
    for (const auto& text : corpus()) {
        auto first = parse_artifact(text, fixture());
        ASSERT_TRUE(first.ok()) << text;
        const std::string printed = support::print_artifact(first.header, *first.ast);
        auto second = parse_artifact(printed, fixture());
        ASSERT_TRUE(second.ok()) << printed;
        EXPECT_EQ(support::artifact_tokens(first.header, *first.ast),
                  support::artifact_tokens(second.header, *second.ast));
        EXPECT_EQ(lex(text), lex(printed));
        EXPECT_TRUE(same_structure(*first.ast, *second.ast));
    }
}

TEST(InstancingProperty, BuildPreservesStructure) {
    for (const auto& text : corpus()) {
        auto b = support::build_fixture_artifact(text);
        ASSERT_TRUE(b.artifact) << text;
        std::size_t seen = 0;
        // The root node either opens a scope itself or passes through.
        if (scope_of(*b.ast)) {
            ASSERT_EQ(b.artifact->sub_scopes().size(), 1u);
            compare_structure(*b.ast, *b.artifact->sub_scopes()[0], seen);
        } else {
            compare_structure(*b.ast, *b.artifact, seen);
        }
        std::size_t total = 0;
        for_each_scope(*b.artifact, [&](Scope&) { ++total; });
        EXPECT_EQ(seen + 1 + (scope_of(*b.ast) ? 1 : 0), total);
        EXPECT_TRUE(support::tree_consistent(*b.artifact));
    }
}

TEST(InstancingProperty, SymbolsLinkedAndContextOnStack) {
    for (const auto& text : corpus()) {
        std::size_t checked = 0;
        BuildOptions opts;
        opts.on_reference = [&](const SymbolReference& ref, std::span<Scope* const> stack) {
            ++checked;
            EXPECT_FALSE(stack.empty());
            EXPECT_NE(std::find(stack.begin(), stack.end(), &ref.context()), stack.end());
        };
        auto b = support::build_fixture_artifact(text, opts);
        ASSERT_TRUE(b.artifact);
        std::size_t refs = 0;
        for_each_scope(*b.artifact, [&](Scope& s) {
            for (const auto& sym : s.symbols()) {
                ASSERT_NE(node_of(*sym), nullptr);
                EXPECT_EQ(symbol_of(*node_of(*sym)), sym.get());
            }
        });
        for_each_reference(*b.artifact, [&](SymbolReference&) { ++refs; });
        EXPECT_EQ(refs, checked);
        EXPECT_EQ(refs, count_reference_leaves(*b.ast));
    }
}
