#include "scopegen/scopegen.h"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <string>

namespace fs = std::filesystem;
using scopegen::support::fixture;

namespace {

struct Workspace {
    sg_workspace* ws = sg_workspace_new();
    ~Workspace() { sg_workspace_free(ws); }
};

struct Owned {
    char* s = nullptr;
    ~Owned() { sg_string_free(s); }
    std::string str() const { return s ? s : ""; }
};

} // namespace

TEST(CApi, VersionAndNullHandles) {
    EXPECT_STRNE(sg_version(), "");
    EXPECT_EQ(sg_workspace_load_grammar(nullptr, "x"), SG_USAGE_ERROR);
    EXPECT_STREQ(sg_workspace_diagnostics(nullptr), "");
    EXPECT_EQ(sg_workspace_read_count(nullptr, "x"), 0u);
    sg_workspace_free(nullptr);
    sg_string_free(nullptr);
}

TEST(CApi, NothingWorksWithoutGrammar) {
    Workspace w;
    Owned out;
    EXPECT_EQ(sg_workspace_derive(w.ws, &out.s), SG_USAGE_ERROR);
    EXPECT_EQ(out.s, nullptr);
    const char* files[] = {"a.jm"};
    EXPECT_EQ(sg_workspace_check(w.ws, files, 1, &out.s), SG_USAGE_ERROR);
}

TEST(CApi, DeriveFixture) {
    Workspace w;
    ASSERT_EQ(sg_workspace_load_grammar(w.ws, fixture("J.mcg").c_str()), SG_OK);
    Owned json;
    ASSERT_EQ(sg_workspace_derive(w.ws, &json.s), SG_OK);
    EXPECT_EQ(json.str(), scopegen::support::read_text(fixture("J.model.json")));
}

TEST(CApi, GrammarErrors) {
    Workspace w;
    EXPECT_EQ(sg_workspace_load_grammar(w.ws, fixture("bad_v2.mcg").c_str()), SG_DIAGNOSTICS);
    EXPECT_NE(std::string(sg_workspace_diagnostics(w.ws)).find("V2"), std::string::npos);
    EXPECT_EQ(sg_workspace_load_grammar(w.ws, fixture("missing.mcg").c_str()), SG_USAGE_ERROR);
    EXPECT_EQ(sg_workspace_load_grammar(w.ws, nullptr), SG_USAGE_ERROR);
}

TEST(CApi, CheckResolveInvalidate) {
    Workspace w;
    const std::string root = fixture("crossref").string();
    const char* dirs[] = {root.c_str()};
    ASSERT_EQ(sg_workspace_set_model_path(w.ws, dirs, 1), SG_OK);
    ASSERT_EQ(sg_workspace_load_grammar(w.ws, fixture("J.mcg").c_str()), SG_OK);

    const std::string c = fixture("crossref/p/C.jm").string();
    const std::string s = fixture("crossref/q/S.jm").string();
    const char* files[] = {c.c_str()};
    Owned report;
    EXPECT_EQ(sg_workspace_check(w.ws, files, 1, &report.s), SG_OK);
    EXPECT_EQ(report.str(), "0 error(s), 0 warning(s)\n");
    EXPECT_EQ(sg_workspace_read_count(w.ws, s.c_str()), 1u);

    Owned line;
    EXPECT_EQ(sg_workspace_resolve(w.ws, c.c_str(), "C", "S", "JClassSymbolKind", &line.s), SG_OK);
    EXPECT_EQ(line.str(), "FOUND q.S JClassSymbolKind " + s + ":1");
    EXPECT_EQ(sg_workspace_read_count(w.ws, s.c_str()), 1u);

    EXPECT_EQ(sg_workspace_invalidate(w.ws, "q.S"), SG_OK);
    Owned again;
    EXPECT_EQ(sg_workspace_check(w.ws, files, 1, &again.s), SG_OK);
    EXPECT_EQ(sg_workspace_read_count(w.ws, s.c_str()), 2u);
}

TEST(CApi, ResolveStatuses) {
    Workspace w;
    ASSERT_EQ(sg_workspace_load_grammar(w.ws, fixture("J.mcg").c_str()), SG_OK);
    const std::string dup = fixture("cli/duplicate.jm").string();
    Owned none, amb, bad;
    EXPECT_EQ(sg_workspace_resolve(w.ws, dup.c_str(), "C", "zz", "JFieldSymbolKind", &none.s), SG_NOT_FOUND);
    EXPECT_EQ(none.str(), "NONE");
    EXPECT_EQ(sg_workspace_resolve(w.ws, dup.c_str(), "C", "v", "JFieldSymbolKind", &amb.s), SG_AMBIGUOUS);
    EXPECT_EQ(amb.str(), "AMBIGUOUS 2");
    EXPECT_EQ(sg_workspace_resolve(w.ws, dup.c_str(), "X", "v", "JFieldSymbolKind", &bad.s), SG_USAGE_ERROR);
    EXPECT_EQ(bad.s, nullptr);
    EXPECT_NE(std::string(sg_workspace_diagnostics(w.ws)).find("bad scope path"), std::string::npos);
}

TEST(CApi, DumpAndExtension) {
    Workspace w;
    fs::path dir = scopegen::support::scratch_dir("capi");
    scopegen::support::write_text(dir / "A.x", "class A { }");
    scopegen::support::write_text(dir / "C.x", "class C { A a ; }");
    const std::string root = dir.string();
    const char* dirs[] = {root.c_str()};
    ASSERT_EQ(sg_workspace_set_model_path(w.ws, dirs, 1), SG_OK);
    ASSERT_EQ(sg_workspace_set_extension(w.ws, "x"), SG_OK);
    EXPECT_EQ(sg_workspace_set_extension(w.ws, ""), SG_USAGE_ERROR);
    ASSERT_EQ(sg_workspace_load_grammar(w.ws, fixture("J.mcg").c_str()), SG_OK);
    Owned json;
    ASSERT_EQ(sg_workspace_dump(w.ws, (dir / "C.x").c_str(), &json.s), SG_OK);
    EXPECT_NE(json.str().find("\"state\":\"resolved\""), std::string::npos);

    scopegen::support::write_text(dir / "broken.x", "class {");
    Owned none;
    EXPECT_EQ(sg_workspace_dump(w.ws, (dir / "broken.x").c_str(), &none.s), SG_DIAGNOSTICS);
    EXPECT_EQ(none.s, nullptr);
    EXPECT_EQ(sg_workspace_dump(w.ws, (dir / "absent.x").c_str(), &none.s), SG_USAGE_ERROR);
    fs::remove_all(dir);
}
