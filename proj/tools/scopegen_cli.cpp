// Command-line front end over the scopegen C API.

#include "scopegen/scopegen.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace {

struct WorkspaceDeleter {
    void operator()(sg_workspace* ws) const { sg_workspace_free(ws); }
};
using WorkspacePtr = std::unique_ptr<sg_workspace, WorkspaceDeleter>;

struct OwnedString {
    char* s = nullptr;
    ~OwnedString() { sg_string_free(s); }
};

void print_diagnostics(const sg_workspace* ws) { std::cerr << sg_workspace_diagnostics(ws); }

// Loads the grammar and applies model-path options. Returns SG_OK or the
// status to exit with.
sg_status open(sg_workspace* ws, const std::string& grammar, const std::vector<std::string>& model_path,
               const std::string& ext) {
    std::vector<const char*> dirs;
    for (const auto& d : model_path) dirs.push_back(d.c_str());
    sg_status st = sg_workspace_set_model_path(ws, dirs.data(), dirs.size());
    if (st == SG_OK) st = sg_workspace_set_extension(ws, ext.c_str());
    if (st != SG_OK) {
        std::cerr << "invalid model path or extension\n";
        return st;
    }
    st = sg_workspace_load_grammar(ws, grammar.c_str());
    print_diagnostics(ws);
    return st;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Derive symbol-table infrastructure from annotated grammars and check models against it"};
    app.require_subcommand(1);
    app.set_version_flag("--version", sg_version());

    std::string grammar;
    std::string out_file;
    std::vector<std::string> files;
    std::vector<std::string> model_path;
    std::string ext = "jm";
    std::string scope_path;
    std::string name;
    std::string kind;

    auto add_model_options = [&](CLI::App* cmd) {
        cmd->add_option("--modelpath", model_path, "Model directories")->delimiter(',');
        cmd->add_option("--ext", ext, "Model file extension")->capture_default_str();
    };

    auto* derive = app.add_subcommand("derive", "Derive the symbol-table model of a grammar");
    derive->add_option("grammar", grammar, "Grammar file")->required();
    derive->add_option("-o", out_file, "Output file (default: stdout)");

    auto* check = app.add_subcommand("check", "Build and check model files");
    check->add_option("grammar", grammar, "Grammar file")->required();
    check->add_option("files", files, "Model files")->required();
    add_model_options(check);

    auto* resolve = app.add_subcommand("resolve", "Resolve a name from a scope of a model file");
    resolve->add_option("grammar", grammar, "Grammar file")->required();
    resolve->add_option("file", files, "Model file")->required()->expected(1);
    resolve->add_option("--scope", scope_path, "Start scope, '/'-separated");
    resolve->add_option("--name", name, "Name to resolve")->required();
    resolve->add_option("--kind", kind, "Symbol kind")->required();
    add_model_options(resolve);

    auto* dump = app.add_subcommand("dump", "Print the scope tree of a model file");
    dump->add_option("grammar", grammar, "Grammar file")->required();
    dump->add_option("file", files, "Model file")->required()->expected(1);
    add_model_options(dump);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return SG_USAGE_ERROR;
    }

    WorkspacePtr ws(sg_workspace_new());
    if (!ws) {
        std::cerr << "out of memory\n";
        return SG_USAGE_ERROR;
    }
    if (sg_status st = open(ws.get(), grammar, model_path, ext); st != SG_OK) return st;

    if (*derive) {
        OwnedString json;
        sg_status st = sg_workspace_derive(ws.get(), &json.s);
        if (st != SG_OK) return st;
        if (out_file.empty()) {
            std::cout << json.s;
            return SG_OK;
        }
        std::ofstream out(out_file, std::ios::binary);
        out << json.s;
        if (!out) {
            std::cerr << "cannot write " << out_file << "\n";
            return SG_USAGE_ERROR;
        }
        return SG_OK;
    }

    if (*check) {
        std::vector<const char*> paths;
        for (const auto& f : files) paths.push_back(f.c_str());
        OwnedString report;
        sg_status st = sg_workspace_check(ws.get(), paths.data(), paths.size(), &report.s);
        if (report.s) std::cerr << report.s;
        return st;
    }

    if (*resolve) {
        OwnedString line;
        sg_status st = sg_workspace_resolve(ws.get(), files.front().c_str(), scope_path.c_str(),
                                            name.c_str(), kind.c_str(), &line.s);
        print_diagnostics(ws.get());
        if (line.s) std::cout << line.s << "\n";
        return st;
    }

    OwnedString json;
    sg_status st = sg_workspace_dump(ws.get(), files.front().c_str(), &json.s);
    print_diagnostics(ws.get());
    if (json.s) std::cout << json.s;
    return st;
}
