#include "scopegen/derivation.hpp"

#include <algorithm>
#include <deque>

namespace scopegen {

const char* to_string(Discipline d) {
    return d == Discipline::Shadowing ? "shadowing" : "visibility";
}

std::string symbol_class_name(std::string_view production) {
    return std::string(production) + "Symbol";
}
std::string kind_name(std::string_view production) {
    return std::string(production) + "SymbolKind";
}
std::string scope_class_name(std::string_view production) {
    return std::string(production) + "Scope";
}

const SymbolClassModel* SymbolTableModel::symbol_class(std::string_view name) const {
    for (const auto& s : symbol_classes) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

const ScopeClassModel* SymbolTableModel::scope_class(std::string_view name) const {
    for (const auto& s : scope_classes) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

const SymbolClassModel* SymbolTableModel::symbol_class_for(std::string_view production) const {
    for (const auto& s : symbol_classes) {
        if (s.production == production) return &s;
    }
    return nullptr;
}

const ScopeClassModel* SymbolTableModel::scope_class_for(std::string_view production) const {
    for (const auto& s : scope_classes) {
        if (s.production == production && !s.spanning_symbol) return &s;
    }
    return nullptr;
}

namespace {

void collect_contained(const Grammar& g, const std::vector<Sequence>& body,
                       const ClassAssignment& assignment, std::set<std::string>& visited,
                       ContainedElements& out) {
    for_each_nonterminal(body, [&](const NonterminalRef& nt, const GrammarElement&, bool) {
        if (nt.is_name()) return;
        const bool symbol = assignment.has_symbol(nt.target);
        const bool scope = assignment.has_scope(nt.target);
        if (symbol) out.symbol_classes.insert(symbol_class_name(nt.target));
        if (scope) out.scope_classes.insert(scope_class_name(nt.target));
        if (symbol || scope || !visited.insert(nt.target).second) return;
        if (const Production* next = g.find(nt.target)) {
            collect_contained(g, next->alternatives, assignment, visited, out);
        }
    });
}

bool has_plain_name(const Production& p) {
    bool found = false;
    for_each_nonterminal(p.alternatives, [&](const NonterminalRef& nt, const GrammarElement&, bool) {
        if (nt.is_name() && !nt.is_reference()) found = true;
    });
    return found;
}

} // namespace

ContainedElements contained_elements(const Grammar& g, const Production& p,
                                     const ClassAssignment& assignment) {
    ContainedElements out;
    std::set<std::string> visited{p.name};
    collect_contained(g, p.alternatives, assignment, visited, out);
    return out;
}

ContainedElements artifact_contents(const Grammar& g, const ClassAssignment& assignment) {
    ContainedElements out;
    if (g.productions.empty()) return out;
    const Production& start = g.productions.front();
    std::deque<const Production*> queue;
    std::set<std::string> visited;
    auto expand = [&](const Production& p) {
        for_each_nonterminal(p.alternatives, [&](const NonterminalRef& nt, const GrammarElement&, bool) {
            if (nt.is_name() || !visited.insert(nt.target).second) return;
            if (const Production* next = g.find(nt.target)) queue.push_back(next);
        });
    };
    if (assignment.has_symbol(start.name)) {
        queue.push_back(&start);
    } else {
        // A scope of an unannotated start production coincides with the
        // artifact scope, so the artifact holds what that scope would hold.
        expand(start);
    }
    while (!queue.empty()) {
        const Production* p = queue.front();
        queue.pop_front();
        const bool symbol = assignment.has_symbol(p->name);
        const bool scope = assignment.has_scope(p->name);
        if (symbol) out.symbol_classes.insert(symbol_class_name(p->name));
        if (scope) out.scope_classes.insert(scope_class_name(p->name));
        if (!symbol && !scope) expand(*p);
    }
    return out;
}

ClassAssignment assign_classes(const Grammar& g) {
    ClassAssignment a;
    for (const auto& p : g.productions) {
        if (p.symbol_annotated) a.symbol_productions.insert(p.name);
    }
    // Whether P has a scope depends on whether the productions it reaches
    // have scopes (the walk stops there), so iterate until nothing changes.
    const std::size_t max_rounds = 4 * g.productions.size() + 8;
    for (std::size_t round = 0; round < max_rounds; ++round) {
        bool changed = false;
        for (const auto& p : g.productions) {
            const bool wants = !contained_elements(g, p, a).symbol_classes.empty();
            const bool has = a.has_scope(p.name);
            if (wants && !has) {
                a.scope_productions.insert(p.name);
                changed = true;
            } else if (!wants && has) {
                a.scope_productions.erase(p.name);
                changed = true;
            }
        }
        if (!changed) return a;
    }
    throw DerivationError("scope derivation for grammar '" + g.name + "' does not stabilise");
}

SymbolTableModel derive(const Grammar& g) {
    if (g.productions.empty()) throw DerivationError("grammar has no productions");
    for (const auto& d : validate_grammar(g)) {
        if (d.is_error()) {
            throw DerivationError("grammar '" + g.name + "' is not valid: " + d.code + " " +
                                  d.message);
        }
    }

    const ClassAssignment assignment = assign_classes(g);
    SymbolTableModel m;
    m.language_name = g.name;

    for (const auto& p : g.productions) {
        if (!p.symbol_annotated) continue;
        SymbolClassModel sym;
        sym.name = symbol_class_name(p.name);
        sym.kind_name = kind_name(p.name);
        sym.production = p.name;
        for_each_nonterminal(p.alternatives, [&](const NonterminalRef& nt, const GrammarElement&,
                                                 bool starred) {
            if (!nt.is_name() || !nt.ref_annotation) return;
            std::string role = reference_role(nt);
            auto it = std::find_if(sym.reference_roles.begin(), sym.reference_roles.end(),
                                   [&](const ReferenceRoleModel& r) { return r.role == role; });
            if (it != sym.reference_roles.end()) {
                // A second occurrence of the same role makes it a list.
                it->many = true;
                return;
            }
            sym.reference_roles.push_back(
                {std::move(role), symbol_class_name(*nt.ref_annotation), starred});
        });
        std::sort(sym.reference_roles.begin(), sym.reference_roles.end(),
                  [](const auto& a, const auto& b) { return a.role < b.role; });
        if (assignment.has_scope(p.name)) sym.spanned_scope = scope_class_name(p.name);
        m.symbol_classes.push_back(std::move(sym));
    }

    for (const auto& p : g.productions) {
        if (!assignment.has_scope(p.name)) continue;
        ScopeClassModel scope;
        scope.name = scope_class_name(p.name);
        scope.production = p.name;
        if (p.symbol_annotated) {
            scope.spanning_symbol = symbol_class_name(p.name);
            scope.discipline = Discipline::Shadowing;
        } else {
            scope.discipline = has_plain_name(p) ? Discipline::Shadowing : Discipline::Visibility;
        }
        auto contained = contained_elements(g, p, assignment);
        scope.containable_symbol_classes = std::move(contained.symbol_classes);
        scope.containable_scope_classes = std::move(contained.scope_classes);
        m.scope_classes.push_back(std::move(scope));
    }

    auto by_name = [](const auto& a, const auto& b) { return a.name < b.name; };
    std::sort(m.symbol_classes.begin(), m.symbol_classes.end(), by_name);
    std::sort(m.scope_classes.begin(), m.scope_classes.end(), by_name);

    m.artifact_scope.name = g.name + "ArtifactScope";
    auto contents = artifact_contents(g, assignment);
    m.artifact_scope.containable_symbol_classes = std::move(contents.symbol_classes);
    m.artifact_scope.containable_scope_classes = std::move(contents.scope_classes);
    return m;
}

} // namespace scopegen
