#include "scopegen/derivation.hpp"

#include <json.hpp>

#include <algorithm>
#include <ostream>

namespace scopegen {

using nlohmann::json;

namespace {

json to_array(const std::set<std::string>& names) {
    json arr = json::array();
    for (const auto& n : names) arr.push_back(n);
    return arr;
}

[[noreturn]] void schema_error(const std::string& msg) {
    throw ModelFormatError(ModelErrorCode::SchemaViolation, msg);
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(where + ": missing required key '" + key + "'");
    return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_string()) schema_error(where + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key,
                                           const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    if (!it->is_string()) schema_error(where + ": '" + key + "' must be a string");
    return it->get<std::string>();
}

std::set<std::string> require_names(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_array()) schema_error(where + ": '" + key + "' must be an array");
    std::set<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) schema_error(where + ": '" + key + "' must contain strings");
        out.insert(e.get<std::string>());
    }
    return out;
}

const json& require_array(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_array()) schema_error(where + ": '" + key + "' must be an array");
    return v;
}

void require_object(const json& v, const std::string& where) {
    if (!v.is_object()) schema_error(where + " must be an object");
}

} // namespace

std::string write_model(const SymbolTableModel& m) {
    json doc;
    doc["language"] = m.language_name;

    auto symbols = m.symbol_classes;
    std::sort(symbols.begin(), symbols.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
    json syms = json::array();
    for (const auto& s : symbols) {
        json j;
        j["name"] = s.name;
        j["kind"] = s.kind_name;
        j["production"] = s.production;
        auto roles = s.reference_roles;
        std::sort(roles.begin(), roles.end(),
                  [](const auto& a, const auto& b) { return a.role < b.role; });
        json refs = json::array();
        for (const auto& r : roles) {
            refs.push_back({{"role", r.role}, {"target", r.target_symbol_class}, {"many", r.many}});
        }
        j["references"] = std::move(refs);
        if (s.spanned_scope) j["spans"] = *s.spanned_scope;
        syms.push_back(std::move(j));
    }
    doc["symbols"] = std::move(syms);

    auto scopes = m.scope_classes;
    std::sort(scopes.begin(), scopes.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
    json scs = json::array();
    for (const auto& s : scopes) {
        json j;
        j["name"] = s.name;
        j["discipline"] = to_string(s.discipline);
        if (s.spanning_symbol) j["spannedBy"] = *s.spanning_symbol;
        j["production"] = s.production;
        j["symbols"] = to_array(s.containable_symbol_classes);
        j["subscopes"] = to_array(s.containable_scope_classes);
        scs.push_back(std::move(j));
    }
    doc["scopes"] = std::move(scs);

    doc["artifactScope"] = {{"name", m.artifact_scope.name},
                            {"symbols", to_array(m.artifact_scope.containable_symbol_classes)},
                            {"subscopes", to_array(m.artifact_scope.containable_scope_classes)}};
    return doc.dump() + "\n";
}

void write_model(const SymbolTableModel& m, std::ostream& sink) { sink << write_model(m); }

SymbolTableModel read_model(std::string_view source) {
    json doc;
    try {
        doc = json::parse(source.begin(), source.end());
    } catch (const json::parse_error& e) {
        throw ModelFormatError(ModelErrorCode::Malformed, e.what());
    }
    require_object(doc, "model document");

    SymbolTableModel m;
    m.language_name = require_string(doc, "language", "model");

    for (const auto& js : require_array(doc, "symbols", "model")) {
        require_object(js, "symbol");
        SymbolClassModel s;
        s.name = require_string(js, "name", "symbol");
        const std::string where = "symbol '" + s.name + "'";
        s.kind_name = require_string(js, "kind", where);
        s.production = require_string(js, "production", where);
        s.spanned_scope = optional_string(js, "spans", where);
        for (const auto& jr : require_array(js, "references", where)) {
            require_object(jr, where + " reference");
            ReferenceRoleModel r;
            r.role = require_string(jr, "role", where);
            r.target_symbol_class = require_string(jr, "target", where);
            const json& many = require(jr, "many", where);
            if (!many.is_boolean()) schema_error(where + ": 'many' must be a boolean");
            r.many = many.get<bool>();
            s.reference_roles.push_back(std::move(r));
        }
        std::sort(s.reference_roles.begin(), s.reference_roles.end(),
                  [](const auto& a, const auto& b) { return a.role < b.role; });
        m.symbol_classes.push_back(std::move(s));
    }

    for (const auto& js : require_array(doc, "scopes", "model")) {
        require_object(js, "scope");
        ScopeClassModel s;
        s.name = require_string(js, "name", "scope");
        const std::string where = "scope '" + s.name + "'";
        const std::string discipline = require_string(js, "discipline", where);
        if (discipline == "shadowing") {
            s.discipline = Discipline::Shadowing;
        } else if (discipline == "visibility") {
            s.discipline = Discipline::Visibility;
        } else {
            schema_error(where + ": unknown discipline '" + discipline + "'");
        }
        s.spanning_symbol = optional_string(js, "spannedBy", where);
        s.production = require_string(js, "production", where);
        s.containable_symbol_classes = require_names(js, "symbols", where);
        s.containable_scope_classes = require_names(js, "subscopes", where);
        m.scope_classes.push_back(std::move(s));
    }

    const json& ja = require(doc, "artifactScope", "model");
    require_object(ja, "artifactScope");
    m.artifact_scope.name = require_string(ja, "name", "artifactScope");
    m.artifact_scope.containable_symbol_classes = require_names(ja, "symbols", "artifactScope");
    m.artifact_scope.containable_scope_classes = require_names(ja, "subscopes", "artifactScope");

    auto by_name = [](const auto& a, const auto& b) { return a.name < b.name; };
    std::sort(m.symbol_classes.begin(), m.symbol_classes.end(), by_name);
    std::sort(m.scope_classes.begin(), m.scope_classes.end(), by_name);
    for (std::size_t i = 1; i < m.symbol_classes.size(); ++i) {
        if (m.symbol_classes[i].name == m.symbol_classes[i - 1].name) {
            schema_error("duplicate symbol class '" + m.symbol_classes[i].name + "'");
        }
    }
    for (std::size_t i = 1; i < m.scope_classes.size(); ++i) {
        if (m.scope_classes[i].name == m.scope_classes[i - 1].name) {
            schema_error("duplicate scope class '" + m.scope_classes[i].name + "'");
        }
    }

    auto dangling = [](const std::string& where, const std::string& name) {
        throw ModelFormatError(ModelErrorCode::DanglingReference,
                               where + " refers to undefined class '" + name + "'");
    };
    auto check_symbols = [&](const std::set<std::string>& names, const std::string& where) {
        for (const auto& n : names) {
            if (!m.symbol_class(n)) dangling(where, n);
        }
    };
    auto check_scopes = [&](const std::set<std::string>& names, const std::string& where) {
        for (const auto& n : names) {
            if (!m.scope_class(n)) dangling(where, n);
        }
    };

    for (const auto& s : m.symbol_classes) {
        const std::string where = "symbol '" + s.name + "'";
        for (const auto& r : s.reference_roles) {
            if (!m.symbol_class(r.target_symbol_class)) dangling(where, r.target_symbol_class);
        }
        if (s.spanned_scope) {
            const auto* scope = m.scope_class(*s.spanned_scope);
            if (!scope) dangling(where, *s.spanned_scope);
            if (scope->spanning_symbol != s.name) {
                schema_error(where + " spans '" + scope->name + "' which is not spanned by it");
            }
        }
    }
    for (const auto& s : m.scope_classes) {
        const std::string where = "scope '" + s.name + "'";
        if (s.spanning_symbol) {
            const auto* sym = m.symbol_class(*s.spanning_symbol);
            if (!sym) dangling(where, *s.spanning_symbol);
            if (sym->spanned_scope != s.name) {
                schema_error(where + " is spanned by '" + sym->name + "' which does not span it");
            }
        }
        check_symbols(s.containable_symbol_classes, where);
        check_scopes(s.containable_scope_classes, where);
    }
    check_symbols(m.artifact_scope.containable_symbol_classes, "artifactScope");
    check_scopes(m.artifact_scope.containable_scope_classes, "artifactScope");
    return m;
}

} // namespace scopegen
