#include "doctest.h"

#include "fermat/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace fermat::cli;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
    json report() const { return json::parse(out); }
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("points") {
    auto r = invoke({"points", "--degree", "3", "--kind", "sextactic"});
    CHECK(r.code == kExitOk);
    json j = r.report();
    CHECK(j["schema"] == 1);
    CHECK(j["status"] == "ok");
    CHECK(j["payload"]["points"].size() == 27);
    CHECK(j["payload"]["points"][0]["label"] == "s_z[j=0,k=1]");
    CHECK_FALSE(j.contains("seed"));
    auto all = invoke({"points", "-d", "4"}).report();
    CHECK(all["payload"]["points"].size() == 12 + 48);
}

TEST_CASE("freeness and census") {
    json m = invoke({"freeness", "--arrangement", "M", "--degree", "4"}).report();
    CHECK(m["status"] == "ok");
    CHECK(m["payload"]["free"] == false);
    CHECK(m["payload"]["discriminant_sign"] == "negative");
    json g = invoke({"freeness", "--arrangement", "BzMxNy", "--degree", "4"}).report();
    CHECK(g["payload"]["free"] == true);
    CHECK(g["payload"]["exponents"] == json::array({5, 6}));
    json f = invoke({"freeness", "--arrangement", "BzMxNy", "--degree", "3", "--with-fermat"}).report();
    CHECK(f["payload"]["exponents"] == json::array({4, 7}));
    CHECK(f["payload"]["tau"] == 12 * 9 - 18 + 3);

    json c = invoke({"census", "--arrangement", "B", "--degree", "5"}).report();
    CHECK(c["payload"]["histogram"] == json{{"3", 25}, {"5", 3}});
    CHECK(c["payload"]["points_on_fermat"] == 0);
    CHECK(c["payload"]["tau"] == 7 * 25 - 30 + 3);
}

TEST_CASE("verify") {
    json r = invoke({"verify", "--theorem", "main", "--degree", "5"}).report();
    CHECK(r["status"] == "ok");
    CHECK(r["payload"]["line_reports"].size() == 45);
    json one = invoke({"verify", "--theorem", "main", "--degree", "3", "--line-index", "0"}).report();
    CHECK(one["payload"]["line_reports"].size() == 1);
    CHECK(one["payload"]["line_reports"][0]["conics"]["count"] == 1);
    json inv = invoke({"verify", "--theorem", "invariant-intersection", "--degree", "3", "--osc-degree", "2"}).report();
    CHECK(inv["status"] == "ok");
    CHECK(inv["payload"]["automorphisms_with_fixed_line"] == 15);
    json syz = invoke({"verify", "--theorem", "syzygy", "--degree", "3"}).report();
    CHECK(syz["status"] == "ok");
    CHECK(syz["payload"]["verbatim"].size() == 4);
    json pen = invoke({"verify", "--theorem", "pencil", "--degree", "4"}).report();
    CHECK(pen["status"] == "ok");
    CHECK(pen["payload"]["pencils"].size() == 4 * 6);
}

TEST_CASE("other commands") {
    json h = invoke({"hessian2", "-d", "3"}).report();
    CHECK(h["payload"]["sign"] == -1);
    CHECK(h["status"] == "ok");
    json t = invoke({"tangents", "-d", "4", "--kind", "inflection"}).report();
    CHECK(t["payload"]["tangents"].size() == 12);
    CHECK(t["payload"]["tangents"][0]["contact"] == 4);
    json c = invoke({"conic", "-d", "3", "--kind", "all", "--seed", "9"}).report();
    CHECK(c["status"] == "ok");
    CHECK(c["seed"] == 9);
    CHECK(c["payload"]["random_points"].size() == 20);
    json col = invoke({"collinear", "-d", "3", "--jobs", "2"}).report();
    CHECK(col["payload"]["line_count"] == 81);
    CHECK(col["payload"]["mixed"] == 54);
    auto table = invoke({"census", "--arrangement", "triangle", "-d", "3", "--format", "table"});
    CHECK(table.code == kExitOk);
    CHECK(table.out.find("status   ok") != std::string::npos);
}

TEST_CASE("all") {
    auto r = invoke({"all", "--d-min", "3", "--d-max", "3"});
    CHECK(r.code == kExitOk);
    json j = r.report();
    CHECK(j["status"] == "ok");
    bool has_collinear = false;
    for (const auto& rep : j["payload"]["degrees"][0]["reports"])
        if (rep["command"] == "collinear") has_collinear = rep["line_count"] == 81;
    CHECK(has_collinear);
}

TEST_CASE("reports are byte-stable and can go to a file") {
    auto a = invoke({"conic", "-d", "4", "--kind", "random", "--seed", "5"});
    auto b = invoke({"conic", "-d", "4", "--kind", "random", "--seed", "5"});
    CHECK(a.out == b.out);
    std::string path = "test_cli_out.json";
    auto w = invoke({"census", "--arrangement", "M", "-d", "3", "--out", path});
    CHECK(w.code == kExitOk);
    CHECK(w.out.empty());
    std::ifstream f(path);
    json j = json::parse(f);
    CHECK(j["payload"]["histogram"] == json{{"2", 27}, {"3", 3}});
    std::remove(path.c_str());
}

TEST_CASE("exit codes") {
    CHECK(invoke({}).code == kExitUsage);
    CHECK(invoke({"frobnicate"}).code == kExitUsage);
    CHECK(invoke({"points", "--degree", "2"}).code == kExitUsage);
    CHECK(invoke({"census", "--arrangement", "Q", "-d", "3"}).code == kExitUsage);
    CHECK(invoke({"collinear", "-d", "9"}).code == kExitUsage);
    CHECK(invoke({"verify", "--theorem", "nope", "-d", "3"}).code == kExitUsage);
    CHECK(invoke({"points", "--format", "xml"}).code == kExitUsage);
    CHECK(invoke({"points", "--help"}).code == kExitOk);

    Report r;
    r.command = "x";
    CHECK(r.to_json()["status"] == "ok");
    r.fail("check", 1, 2);
    CHECK(r.to_json()["status"] == "failed");
    CHECK(r.to_json()["failures"][0]["actual"] == 2);
}
