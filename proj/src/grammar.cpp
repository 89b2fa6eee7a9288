#include "scopegen/grammar.hpp"

#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

namespace scopegen {

const Production* Grammar::find(std::string_view production) const {
    for (const auto& p : productions) {
        if (p.name == production) return &p;
    }
    return nullptr;
}

namespace {

enum class TokKind { Ident, String, Punct, End };

struct GrammarToken {
    TokKind kind = TokKind::End;
    std::string text;
    SourceLocation loc;
};

struct SyntaxError : std::runtime_error {
    SourceLocation loc;
    SyntaxError(std::string msg, SourceLocation l) : std::runtime_error(std::move(msg)), loc(l) {}
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class GrammarLexer {
public:
    explicit GrammarLexer(std::string_view src) : src_(src) {}

    std::vector<GrammarToken> run() {
        std::vector<GrammarToken> out;
        for (;;) {
            skip_trivia();
            SourceLocation loc{line_, col_};
            if (pos_ >= src_.size()) {
                out.push_back({TokKind::End, {}, loc});
                return out;
            }
            char c = src_[pos_];
            if (is_ident_start(c)) {
                std::size_t start = pos_;
                while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
                out.push_back({TokKind::Ident, std::string(src_.substr(start, pos_ - start)), loc});
            } else if (c == '"') {
                out.push_back({TokKind::String, read_string(loc), loc});
            } else if (c == '@' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '!') {
                advance();
                advance();
                out.push_back({TokKind::Punct, "@!", loc});
            } else if (std::string_view("=;|()*?:@").find(c) != std::string_view::npos) {
                advance();
                out.push_back({TokKind::Punct, std::string(1, c), loc});
            } else {
                throw SyntaxError(std::string("illegal character '") + c + "'", loc);
            }
        }
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                return;
            }
        }
    }

    std::string read_string(SourceLocation start) {
        advance(); // opening quote
        std::string value;
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
            if (src_[pos_] == '\\') {
                advance();
                if (pos_ >= src_.size() || (src_[pos_] != '"' && src_[pos_] != '\\')) {
                    throw SyntaxError("invalid escape in string literal", {line_, col_});
                }
            }
            value += src_[pos_];
            advance();
        }
        if (pos_ >= src_.size() || src_[pos_] != '"') {
            throw SyntaxError("unterminated string literal", start);
        }
        advance();
        if (value.empty()) throw SyntaxError("empty terminal literal", start);
        return value;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class GrammarParser {
public:
    explicit GrammarParser(std::vector<GrammarToken> toks) : toks_(std::move(toks)) {}

    std::vector<Production> run() {
        std::vector<Production> prods;
        while (peek().kind != TokKind::End) prods.push_back(production());
        if (prods.empty()) throw SyntaxError("no productions", peek().loc);
        return prods;
    }

private:
    const GrammarToken& peek() const { return toks_[pos_]; }
    bool at_punct(std::string_view p) const {
        return peek().kind == TokKind::Punct && peek().text == p;
    }
    const GrammarToken& next() { return toks_[pos_++]; }

    [[noreturn]] void fail(const std::string& expected) const {
        const auto& t = peek();
        std::string found = t.kind == TokKind::End ? "end of input" : "'" + t.text + "'";
        throw SyntaxError("expected " + expected + ", found " + found, t.loc);
    }

    void expect(std::string_view p) {
        if (!at_punct(p)) fail("'" + std::string(p) + "'");
        ++pos_;
    }

    std::string ident(const char* what) {
        if (peek().kind != TokKind::Ident) fail(what);
        return next().text;
    }

    Production production() {
        Production p;
        p.location = peek().loc;
        p.name = ident("production name");
        if (at_punct("@!")) {
            ++pos_;
            p.symbol_annotated = true;
        }
        expect("=");
        p.alternatives = alternatives();
        expect(";");
        return p;
    }

    std::vector<Sequence> alternatives() {
        std::vector<Sequence> alts;
        alts.push_back(sequence());
        while (at_punct("|")) {
            ++pos_;
            alts.push_back(sequence());
        }
        return alts;
    }

    Sequence sequence() {
        Sequence seq;
        for (;;) {
            const auto& t = peek();
            if (t.kind == TokKind::End || at_punct("|") || at_punct(";") || at_punct(")")) break;
            seq.push_back(element());
        }
        return seq;
    }

    GrammarElement element() {
        GrammarElement el;
        el.location = peek().loc;
        const auto& t = peek();
        if (t.kind == TokKind::String) {
            el.node = Terminal{next().text};
        } else if (t.kind == TokKind::Ident) {
            NonterminalRef ref;
            std::string first = next().text;
            if (at_punct(":")) {
                ++pos_;
                ref.label = std::move(first);
                ref.target = ident("nonterminal after label");
            } else {
                ref.target = std::move(first);
            }
            if (at_punct("@")) {
                ++pos_;
                ref.ref_annotation = ident("production name after '@'");
            }
            el.node = std::move(ref);
        } else if (at_punct("(")) {
            ++pos_;
            Group g{alternatives()};
            expect(")");
            el.node = std::move(g);
        } else {
            fail("terminal, nonterminal or '('");
        }
        if (at_punct("*")) {
            ++pos_;
            el.cardinality = Cardinality::Star;
        } else if (at_punct("?")) {
            ++pos_;
            el.cardinality = Cardinality::Optional;
        }
        return el;
    }

    std::vector<GrammarToken> toks_;
    std::size_t pos_ = 0;
};

// Maximum number of symbol-naming `Name` candidates a single match of the
// sequence can produce. Groups contribute their worst alternative.
int naming_candidates(const Sequence& seq, bool labeled_only);

int naming_candidates(const std::vector<Sequence>& alts, bool labeled_only) {
    int best = 0;
    for (const auto& alt : alts) best = std::max(best, naming_candidates(alt, labeled_only));
    return best;
}

int naming_candidates(const Sequence& seq, bool labeled_only) {
    int total = 0;
    for (const auto& el : seq) {
        if (const auto* nt = el.nonterminal()) {
            if (nt->is_name() && !nt->is_reference() &&
                (!labeled_only || nt->label == std::optional<std::string>("name"))) {
                ++total;
            }
        } else if (const auto* g = el.group()) {
            total += naming_candidates(g->alternatives, labeled_only);
        }
    }
    return total;
}

bool has_labeled_name(const std::vector<Sequence>& alts) {
    bool found = false;
    for_each_nonterminal(alts, [&](const NonterminalRef& nt, const GrammarElement&, bool) {
        if (nt.is_name() && !nt.is_reference() && nt.label == std::optional<std::string>("name")) {
            found = true;
        }
    });
    return found;
}

} // namespace

std::string reference_role(const NonterminalRef& ref) {
    if (ref.label) return *ref.label;
    std::string role = ref.ref_annotation.value_or(ref.target);
    for (auto& c : role) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return role;
}

GrammarParseResult parse_grammar(std::string_view source, std::string name) {
    GrammarParseResult result;
    try {
        auto toks = GrammarLexer(source).run();
        Grammar g;
        g.name = std::move(name);
        g.productions = GrammarParser(std::move(toks)).run();
        result.grammar = std::move(g);
    } catch (const SyntaxError& e) {
        result.diagnostics.push_back(make_error(codes::GrammarSyntax, e.what(), e.loc));
    }
    return result;
}

Diagnostics validate_grammar(const Grammar& g) {
    Diagnostics out;
    std::set<std::string> seen;
    for (const auto& p : g.productions) {
        if (p.name == kNameNonterminal) {
            out.push_back(make_error(codes::NameRedefined,
                                     "builtin nonterminal 'Name' cannot be redefined", p.location));
        }
        if (!seen.insert(p.name).second) {
            out.push_back(make_error(codes::DuplicateProduction,
                                     "duplicate production '" + p.name + "'", p.location));
        }
    }

    for (const auto& p : g.productions) {
        bool has_plain_name = false;
        std::map<std::string, std::string> roles;
        for_each_nonterminal(p.alternatives, [&](const NonterminalRef& nt,
                                                 const GrammarElement& el, bool) {
            if (!nt.is_name() && !g.find(nt.target)) {
                out.push_back(make_error(codes::UndefinedNonterminal,
                                         "undefined nonterminal '" + nt.target + "'", el.location));
            }
            if (nt.is_name() && !nt.is_reference()) has_plain_name = true;
            if (!nt.ref_annotation) return;
            if (!nt.is_name()) {
                out.push_back(make_error(codes::ReferenceOnNonName,
                                         "reference annotation '@" + *nt.ref_annotation +
                                             "' is only allowed on 'Name'",
                                         el.location));
            }
            const Production* target = g.find(*nt.ref_annotation);
            if (!target || !target->symbol_annotated) {
                out.push_back(make_error(codes::BadReferenceTarget,
                                         "reference annotation '@" + *nt.ref_annotation +
                                             "' does not name a production annotated with '@!'",
                                         el.location));
            }
            if (p.symbol_annotated && nt.is_name()) {
                std::string role = reference_role(nt);
                auto [it, inserted] = roles.emplace(role, *nt.ref_annotation);
                if (!inserted && it->second != *nt.ref_annotation) {
                    out.push_back(make_error(codes::ConflictingRole,
                                             "reference role '" + role +
                                                 "' targets both '" + it->second + "' and '" +
                                                 *nt.ref_annotation + "'",
                                             el.location));
                }
            }
        });

        if (!p.symbol_annotated) continue;
        if (!has_plain_name) {
            out.push_back(make_error(codes::SymbolWithoutName,
                                     "production '" + p.name +
                                         "' is annotated with '@!' but contains no 'Name'",
                                     p.location));
            continue;
        }
        const bool labeled = has_labeled_name(p.alternatives);
        if (naming_candidates(p.alternatives, labeled) > 1) {
            out.push_back(make_error(codes::AmbiguousSymbolName,
                                     "production '" + p.name +
                                         "' has several 'Name' occurrences that could name its "
                                         "symbol; label one of them 'name:'",
                                     p.location));
        }
    }
    return out;
}

} // namespace scopegen
