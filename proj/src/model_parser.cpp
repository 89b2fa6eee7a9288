#include "scopegen/instancing.hpp"

#include <set>

namespace scopegen {

std::string AstLeaf::text() const {
    std::string out;
    for (const auto& t : tokens) out += t.text;
    return out;
}

std::vector<const AstChild*> AstNode::children() const {
    std::vector<const AstChild*> out;
    for (const auto& e : elements) {
        if (const auto* c = std::get_if<AstChild>(&e)) out.push_back(c);
    }
    return out;
}

std::vector<const AstLeaf*> AstNode::leaves() const {
    std::vector<const AstLeaf*> out;
    for (const auto& e : elements) {
        if (const auto* l = std::get_if<AstLeaf>(&e)) out.push_back(l);
    }
    return out;
}

std::vector<Token> AstNode::all_tokens() const {
    std::vector<Token> out;
    for (const auto& e : elements) {
        if (const auto* l = std::get_if<AstLeaf>(&e)) {
            out.insert(out.end(), l->tokens.begin(), l->tokens.end());
        } else {
            auto sub = std::get<AstChild>(e).node->all_tokens();
            out.insert(out.end(), sub.begin(), sub.end());
        }
    }
    return out;
}

bool same_structure(const AstNode& a, const AstNode& b) {
    if (a.production != b.production || a.elements.size() != b.elements.size()) return false;
    for (std::size_t i = 0; i < a.elements.size(); ++i) {
        const auto& x = a.elements[i];
        const auto& y = b.elements[i];
        if (x.index() != y.index()) return false;
        if (const auto* lx = std::get_if<AstLeaf>(&x)) {
            if (!(*lx == std::get<AstLeaf>(y))) return false;
        } else {
            const auto& cx = std::get<AstChild>(x);
            const auto& cy = std::get<AstChild>(y);
            if (cx.role != cy.role || !same_structure(*cx.node, *cy.node)) return false;
        }
    }
    return true;
}

namespace {

struct Enter {
    std::string production;
    std::string role;
};
struct Exit {};
using Event = std::variant<Enter, Exit, AstLeaf>;

struct ParseAborted {};

// Interprets grammar elements in continuation-passing style so that `*`,
// `?` and alternatives can all be revisited when a later element fails.
// Matched structure is recorded in a linear event log that is truncated on
// backtracking and turned into a tree once the whole input is consumed.
class Interpreter {
public:
    using Cont = std::function<bool(std::size_t)>;

    Interpreter(const Grammar& g, std::span<const Token> tokens) : g_(g), toks_(tokens) {}

    ModelParseResult run() {
        ModelParseResult result;
        const Production& start = g_.productions.front();
        bool ok = false;
        try {
            ok = match_production(start, "", 0, [&](std::size_t p) {
                if (p == toks_.size()) return true;
                expect(p, "end of input");
                return false;
            });
        } catch (const ParseAborted&) {
            result.diagnostics.push_back(make_error(
                codes::ModelSyntax, "input too ambiguous: backtracking budget exhausted",
                location_at(furthest_)));
            return result;
        }
        if (!ok) {
            result.diagnostics.push_back(syntax_error());
            return result;
        }
        result.ast = build_tree();
        return result;
    }

private:
    static constexpr std::size_t kStepBudget = 20'000'000;

    void tick() {
        if (++steps_ > kStepBudget) throw ParseAborted{};
    }

    SourceLocation location_at(std::size_t pos) const {
        if (pos < toks_.size()) return toks_[pos].location;
        if (toks_.empty()) return {};
        SourceLocation end = toks_.back().location;
        end.column += static_cast<int>(toks_.back().text.size());
        return end;
    }

    void expect(std::size_t pos, std::string what) {
        if (pos > furthest_) {
            furthest_ = pos;
            expected_.clear();
        }
        if (pos == furthest_) expected_.insert(std::move(what));
    }

    Diagnostic syntax_error() const {
        std::string msg = "expected ";
        bool first = true;
        for (const auto& e : expected_) {
            msg += (first ? "" : ", ") + e;
            first = false;
        }
        msg += furthest_ < toks_.size() ? ", found '" + toks_[furthest_].text + "'"
                                        : ", found end of input";
        return make_error(codes::ModelSyntax, msg, location_at(furthest_));
    }

    bool push_leaf(AstLeaf leaf, std::size_t next, const Cont& k) {
        log_.push_back(std::move(leaf));
        if (k(next)) return true;
        log_.pop_back();
        return false;
    }

    bool match_production(const Production& p, std::string role, std::size_t pos, const Cont& k) {
        // Left recursion would otherwise never terminate.
        auto key = std::make_pair(&p, pos);
        if (active_.count(key)) return false;
        active_.insert(key);
        log_.push_back(Enter{p.name, std::move(role)});
        bool ok = match_alternatives(p.alternatives, pos, [&](std::size_t next) {
            active_.erase(key);
            log_.push_back(Exit{});
            if (k(next)) return true;
            log_.pop_back();
            active_.insert(key);
            return false;
        });
        if (!ok) {
            log_.pop_back();
            active_.erase(key);
        }
        return ok;
    }

    bool match_alternatives(const std::vector<Sequence>& alts, std::size_t pos, const Cont& k) {
        for (const auto& alt : alts) {
            const std::size_t mark = log_.size();
            if (match_sequence(alt, 0, pos, k)) return true;
            log_.resize(mark);
        }
        return false;
    }

    bool match_sequence(const Sequence& seq, std::size_t index, std::size_t pos, const Cont& k) {
        tick();
        if (index == seq.size()) return k(pos);
        return match_element(seq[index], pos,
                             [&](std::size_t next) { return match_sequence(seq, index + 1, next, k); });
    }

    bool match_element(const GrammarElement& el, std::size_t pos, const Cont& k) {
        switch (el.cardinality) {
        case Cardinality::Once:
            return match_once(el, pos, k);
        case Cardinality::Optional: {
            const std::size_t mark = log_.size();
            if (match_once(el, pos, k)) return true;
            log_.resize(mark);
            return k(pos);
        }
        case Cardinality::Star:
            return match_star(el, pos, k);
        }
        return false;
    }

    bool match_star(const GrammarElement& el, std::size_t pos, const Cont& k) {
        const std::size_t mark = log_.size();
        bool ok = match_once(el, pos, [&](std::size_t next) {
            // An iteration must consume input.
            return next != pos && match_star(el, next, k);
        });
        if (ok) return true;
        log_.resize(mark);
        return k(pos);
    }

    bool match_once(const GrammarElement& el, std::size_t pos, const Cont& k) {
        tick();
        if (const auto* t = el.terminal()) {
            if (pos < toks_.size() && toks_[pos].text == t->literal &&
                (toks_[pos].cls == TokenClass::Keyword || toks_[pos].cls == TokenClass::Punct)) {
                return push_leaf({LeafKind::Terminal, {toks_[pos]}, std::nullopt, {}}, pos + 1, k);
            }
            expect(pos, "'" + t->literal + "'");
            return false;
        }
        if (const auto* g = el.group()) return match_alternatives(g->alternatives, pos, k);

        const NonterminalRef& nt = *el.nonterminal();
        if (nt.is_name()) {
            if (pos >= toks_.size() || toks_[pos].cls != TokenClass::Name) {
                expect(pos, "name");
                return false;
            }
            AstLeaf leaf{LeafKind::Name, {toks_[pos]}, nt.label, {}};
            std::size_t next = pos + 1;
            if (nt.is_reference()) {
                leaf.kind = LeafKind::Reference;
                leaf.ref_target = *nt.ref_annotation;
                // References accept qualified names.
                while (next + 1 < toks_.size() && toks_[next].cls == TokenClass::Punct &&
                       toks_[next].text == "." && toks_[next + 1].cls == TokenClass::Name) {
                    leaf.tokens.push_back(toks_[next]);
                    leaf.tokens.push_back(toks_[next + 1]);
                    next += 2;
                }
            }
            return push_leaf(std::move(leaf), next, k);
        }
        const Production* p = g_.find(nt.target);
        if (!p) return false;
        return match_production(*p, nt.label.value_or(nt.target), pos, k);
    }

    std::unique_ptr<AstNode> build_tree() {
        std::vector<std::unique_ptr<AstNode>> stack;
        std::vector<std::string> roles;
        std::unique_ptr<AstNode> root;
        for (auto& ev : log_) {
            if (auto* enter = std::get_if<Enter>(&ev)) {
                auto node = std::make_unique<AstNode>();
                node->production = enter->production;
                stack.push_back(std::move(node));
                roles.push_back(enter->role);
            } else if (std::holds_alternative<Exit>(ev)) {
                auto done = std::move(stack.back());
                stack.pop_back();
                std::string role = std::move(roles.back());
                roles.pop_back();
                if (stack.empty()) {
                    root = std::move(done);
                } else {
                    stack.back()->elements.emplace_back(AstChild{std::move(role), std::move(done)});
                }
            } else {
                stack.back()->elements.emplace_back(std::move(std::get<AstLeaf>(ev)));
            }
        }
        return root;
    }

    const Grammar& g_;
    std::span<const Token> toks_;
    std::vector<Event> log_;
    std::set<std::pair<const Production*, std::size_t>> active_;
    std::size_t furthest_ = 0;
    std::set<std::string> expected_;
    std::size_t steps_ = 0;
};

struct HeaderError {
    Diagnostic diagnostic;
};

class HeaderParser {
public:
    explicit HeaderParser(std::span<const Token> toks) : toks_(toks) {}

    std::size_t run(ArtifactHeader& header) {
        if (at_word("package")) {
            ++pos_;
            header.package_name = qualified("package name");
            expect_semicolon();
        }
        while (at_word("import")) {
            ++pos_;
            SourceLocation loc = location();
            std::string imported = qualified("imported name");
            if (imported.find('.') == std::string::npos) {
                throw HeaderError{make_error(codes::HeaderSyntax,
                                             "import '" + imported + "' needs a package and a name",
                                             loc)};
            }
            header.imports.push_back(std::move(imported));
            header.import_locations.push_back(loc);
            expect_semicolon();
        }
        return pos_;
    }

private:
    bool at_word(std::string_view w) const {
        return pos_ < toks_.size() && toks_[pos_].text == w && toks_[pos_].cls != TokenClass::String;
    }
    bool at_punct(std::string_view p) const {
        return pos_ < toks_.size() && toks_[pos_].cls == TokenClass::Punct && toks_[pos_].text == p;
    }
    SourceLocation location() const {
        if (pos_ < toks_.size()) return toks_[pos_].location;
        return toks_.empty() ? SourceLocation{} : toks_.back().location;
    }
    [[noreturn]] void fail(const std::string& expected) const {
        std::string found = pos_ < toks_.size() ? "'" + toks_[pos_].text + "'" : "end of input";
        throw HeaderError{
            make_error(codes::HeaderSyntax, "expected " + expected + ", found " + found, location())};
    }

    std::string qualified(const char* what) {
        if (pos_ >= toks_.size() || toks_[pos_].cls != TokenClass::Name) fail(what);
        std::string out = toks_[pos_++].text;
        while (at_punct(".")) {
            ++pos_;
            if (at_punct("*")) {
                throw HeaderError{make_error(codes::HeaderSyntax,
                                             "wildcard imports are not supported", location())};
            }
            if (pos_ >= toks_.size() || toks_[pos_].cls != TokenClass::Name) fail("name after '.'");
            out += "." + toks_[pos_++].text;
        }
        return out;
    }

    void expect_semicolon() {
        if (!at_punct(";")) fail("';'");
        ++pos_;
    }

    std::span<const Token> toks_;
    std::size_t pos_ = 0;
};

} // namespace

ModelParseResult parse_model(const Grammar& g, std::span<const Token> tokens) {
    if (g.productions.empty()) {
        return {nullptr, {make_error(codes::ModelSyntax, "grammar has no productions")}};
    }
    return Interpreter(g, tokens).run();
}

ArtifactParseResult parse_artifact(std::string_view text, const Grammar& g) {
    ArtifactParseResult result;
    auto lexed = tokenize(text, g);
    if (!lexed.ok()) {
        result.diagnostics = std::move(lexed.diagnostics);
        return result;
    }
    std::span<const Token> toks(lexed.tokens);
    std::size_t body_start = 0;
    try {
        body_start = HeaderParser(toks).run(result.header);
    } catch (const HeaderError& e) {
        result.diagnostics.push_back(e.diagnostic);
        return result;
    }
    auto parsed = parse_model(g, toks.subspan(body_start));
    result.ast = std::move(parsed.ast);
    result.diagnostics = std::move(parsed.diagnostics);
    return result;
}

} // namespace scopegen
