#pragma once

// Annotated EBNF-like grammar format (`.mcg` files).
//
//   JClass@! = "class" Name "{" ( JField | JMethod )* "}" ;
//   JField@! = type:Name@JClass Name ";" ;
//
// `@!` marks a production that defines a symbol; `@Prod` on a `Name`
// nonterminal marks a reference to the symbol defined by `Prod`.

#include "scopegen/diagnostic.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace scopegen {

// Builtin nonterminal matching one identifier token.
inline constexpr std::string_view kNameNonterminal = "Name";

enum class Cardinality { Once, Optional, Star };

struct Terminal {
    std::string literal;

    friend bool operator==(const Terminal&, const Terminal&) = default;
};

struct NonterminalRef {
    std::optional<std::string> label;
    std::string target;
    std::optional<std::string> ref_annotation;

    bool is_name() const { return target == kNameNonterminal; }
    bool is_reference() const { return ref_annotation.has_value(); }

    friend bool operator==(const NonterminalRef&, const NonterminalRef&) = default;
};

struct GrammarElement;
using Sequence = std::vector<GrammarElement>;

struct Group {
    std::vector<Sequence> alternatives;

    friend bool operator==(const Group&, const Group&);
};

struct GrammarElement {
    std::variant<Terminal, NonterminalRef, Group> node;
    Cardinality cardinality = Cardinality::Once;
    // Not part of structural equality.
    SourceLocation location;

    const Terminal* terminal() const { return std::get_if<Terminal>(&node); }
    const NonterminalRef* nonterminal() const { return std::get_if<NonterminalRef>(&node); }
    const Group* group() const { return std::get_if<Group>(&node); }

    friend bool operator==(const GrammarElement& a, const GrammarElement& b) {
        return a.cardinality == b.cardinality && a.node == b.node;
    }
};

inline bool operator==(const Group& a, const Group& b) { return a.alternatives == b.alternatives; }

struct Production {
    std::string name;
    bool symbol_annotated = false;
    // Top-level alternatives; a production without `|` has exactly one.
    std::vector<Sequence> alternatives;
    SourceLocation location;

    friend bool operator==(const Production& a, const Production& b) {
        return a.name == b.name && a.symbol_annotated == b.symbol_annotated &&
               a.alternatives == b.alternatives;
    }
};

struct Grammar {
    std::string name;
    std::vector<Production> productions;

    const std::string& start_production() const { return productions.front().name; }
    const Production* find(std::string_view production) const;

    friend bool operator==(const Grammar&, const Grammar&) = default;
};

struct GrammarParseResult {
    std::optional<Grammar> grammar;
    Diagnostics diagnostics;

    bool ok() const { return grammar.has_value(); }
};

// `name` becomes the grammar (language) name; the CLI passes the file stem.
GrammarParseResult parse_grammar(std::string_view source, std::string name = "Language");

Diagnostics validate_grammar(const Grammar& grammar);

// Role under which a reference-annotated `Name` is attached to its symbol:
// the label if present, else the referenced production name lowercased.
std::string reference_role(const NonterminalRef& ref);

// Visits every nonterminal in a production body in source order, descending
// into groups. `starred` is true when the element or any enclosing group
// carries `*`.
template <typename Fn>
void for_each_nonterminal(const std::vector<Sequence>& alternatives, Fn&& fn, bool starred = false);

template <typename Fn>
void for_each_nonterminal(const Sequence& seq, Fn&& fn, bool starred) {
    for (const auto& el : seq) {
        const bool here = starred || el.cardinality == Cardinality::Star;
        if (const auto* nt = el.nonterminal()) {
            fn(*nt, el, here);
        } else if (const auto* group = el.group()) {
            for_each_nonterminal(group->alternatives, fn, here);
        }
    }
}

template <typename Fn>
void for_each_nonterminal(const std::vector<Sequence>& alternatives, Fn&& fn, bool starred) {
    for (const auto& alt : alternatives) {
        for_each_nonterminal(alt, fn, starred);
    }
}

} // namespace scopegen
