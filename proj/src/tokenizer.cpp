#include "scopegen/instancing.hpp"

#include <cctype>
#include <set>

namespace scopegen {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool identifier_shaped(std::string_view s) {
    if (s.empty() || !ident_start(s.front())) return false;
    for (char c : s) {
        if (!ident_char(c)) return false;
    }
    return true;
}

void collect_terminals(const std::vector<Sequence>& alts, std::set<std::string>& keywords,
                       std::set<std::string>& punct) {
    for (const auto& alt : alts) {
        for (const auto& el : alt) {
            if (const auto* t = el.terminal()) {
                (identifier_shaped(t->literal) ? keywords : punct).insert(t->literal);
            } else if (const auto* g = el.group()) {
                collect_terminals(g->alternatives, keywords, punct);
            }
        }
    }
}

} // namespace

TokenizeResult tokenize(std::string_view text, const Grammar& g) {
    std::set<std::string> keywords;
    std::set<std::string> punct{".", ";", "*"};
    for (const auto& p : g.productions) collect_terminals(p.alternatives, keywords, punct);

    TokenizeResult out;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t i = 0; i < n; ++i, ++pos) {
            if (text[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };

    while (pos < text.size()) {
        char c = text[pos];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '/') {
            while (pos < text.size() && text[pos] != '\n') advance(1);
            continue;
        }
        SourceLocation loc{line, col};

        if (c == '"') {
            std::size_t end = pos + 1;
            while (end < text.size() && text[end] != '"' && text[end] != '\n') {
                end += text[end] == '\\' && end + 1 < text.size() ? 2 : 1;
            }
            if (end >= text.size() || text[end] != '"') {
                out.diagnostics.push_back(
                    make_error(codes::IllegalCharacter, "unterminated string", loc));
                return out;
            }
            out.tokens.push_back({TokenClass::String, std::string(text.substr(pos, end + 1 - pos)), loc});
            advance(end + 1 - pos);
            continue;
        }

        std::size_t ident_len = 0;
        if (ident_start(c)) {
            while (pos + ident_len < text.size() && ident_char(text[pos + ident_len])) ++ident_len;
        }
        std::size_t punct_len = 0;
        for (const auto& p : punct) {
            if (p.size() > punct_len && text.substr(pos, p.size()) == p) punct_len = p.size();
        }
        if (ident_len == 0 && punct_len == 0) {
            out.diagnostics.push_back(make_error(codes::IllegalCharacter,
                                                 std::string("illegal character '") + c + "'", loc));
            return out;
        }
        if (ident_len >= punct_len) {
            std::string word(text.substr(pos, ident_len));
            TokenClass cls = keywords.count(word) ? TokenClass::Keyword : TokenClass::Name;
            out.tokens.push_back({cls, std::move(word), loc});
            advance(ident_len);
        } else {
            out.tokens.push_back({TokenClass::Punct, std::string(text.substr(pos, punct_len)), loc});
            advance(punct_len);
        }
    }
    return out;
}

} // namespace scopegen
