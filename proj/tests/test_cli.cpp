#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lorcal/scenario.hpp"

using namespace lorcal;
namespace fs = std::filesystem;

namespace {

Scenario fromText(const std::string& text) {
    std::istringstream in(text);
    return Scenario::parse(in);
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("lorcal_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST(ScenarioFile, ParsesKeysCommentsAndBlanks) {
    const auto sc = fromText("# audit\n\nmodel.kind = cylinder\n  task=audit  \nseed = 0x10\n");
    EXPECT_EQ(sc.str("model.kind"), "cylinder");
    EXPECT_EQ(sc.str("task"), "audit");
    EXPECT_EQ(sc.seed(), 16u);
}

TEST(ScenarioFile, RejectsUnknownDuplicateAndMalformed) {
    EXPECT_THROW(fromText("model.kin = minkowski\n"), ParseError);
    EXPECT_THROW(fromText("task = audit\ntask = tau\n"), ParseError);
    EXPECT_THROW(fromText("task audit\n"), ParseError);
    const auto sc = fromText("task.p = 1\ntask.values = 1,,2\n");
    EXPECT_THROW(sc.point("task.p"), ParseError);
    EXPECT_THROW(sc.list("task.values"), ParseError);
}

TEST(RunScenario, MinkowskiAuditPasses) {
    auto sc = fromText("model.kind = minkowski\ntask = audit\ntask.samples = 10000\nseed = 4\n");
    const auto out = executeScenario(sc);
    EXPECT_TRUE(out.pass);
    EXPECT_NE(out.report.find("violations: 0\n"), std::string::npos);
    EXPECT_EQ(out.summary["violations"], 0);
}

TEST(RunScenario, WindingTable) {
    const auto out = executeScenario(fromText("model.kind = cylinder\ntask = winding\ntask.p = 0,0\ntask.q = 10,0\n"));
    const auto& rows = out.summary["geodesics"];
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_NEAR(rows[0]["length"].get<double>(), 10.0, 1e-12);
    EXPECT_NEAR(rows[1]["length"].get<double>(), std::sqrt(100 - 4 * std::numbers::pi * std::numbers::pi), 1e-12);
    EXPECT_NEAR(rows[2]["length"].get<double>(), std::sqrt(100 - 4 * std::numbers::pi * std::numbers::pi), 1e-12);
    EXPECT_EQ(out.files.at("winding.txt").substr(0, 17), "# winding length\n");
}

TEST(RunScenario, EqualizeWorkedExample) {
    const auto out = executeScenario(fromText("task = equalize\ntask.values = 0, 0.5, 2.9, 3\n"));
    const auto v = out.summary["values"].get<std::vector<double>>();
    ASSERT_EQ(v.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(v[i], static_cast<double>(i), 1e-9);
}

TEST(RunScenario, GeodesicTask) {
    const auto out = executeScenario(
        fromText("task = geodesic\ntask.alpha0 = 0,0\ntask.alpha1 = 4,0\ntask.p = 0,0\ntask.q = 4,0.4\ntask.N = 4\n"));
    EXPECT_TRUE(out.pass);
    EXPECT_EQ(out.summary["cover"]["n"], 4);
    EXPECT_LT(out.summary["sup_distance_to_analytic"].get<double>(), 1e-6);
    const std::string table = out.files.at("geodesic.txt");
    EXPECT_NE(table.find("#converged true"), std::string::npos);
}

TEST(RunScenario, DagTasks) {
    const fs::path dir = scratch("dag");
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "g.txt");
        f << "#lorcal-dag v1\n0 1 1\n1 2 1\n0 2 1.5\n";
    }
    Scenario sc;
    sc.set("model.kind", "dag");
    sc.set("model.file", (dir / "g.txt").string());
    sc.set("task", "geodesic");
    sc.set("task.p", "0");
    sc.set("task.q", "2");
    const auto geo = executeScenario(sc);
    EXPECT_EQ(geo.summary["length"], 2.0);
    EXPECT_EQ(geo.summary["path"], nlohmann::json::array({0, 1, 2}));
    sc.set("task", "audit");
    EXPECT_TRUE(executeScenario(sc).pass);
    sc.set("task", "tau");
    EXPECT_NE(executeScenario(sc).files.at("tau.txt").find("0 2 2\n"), std::string::npos);
}

TEST(RunScenario, ConcavityPlotTable) {
    const auto out = executeScenario(
        fromText("task = concavity\ntask.a0 = 0,0\ntask.a1 = 1,0\ntask.b0 = 2,0\ntask.b1 = 3,1\n"));
    EXPECT_TRUE(out.pass);
    std::istringstream table(out.files.at("plot.txt"));
    std::string line;
    std::getline(table, line);
    EXPECT_EQ(line, "# t value bound slack");
    int rows = 0;
    while (std::getline(table, line)) {
        std::istringstream fields(line);
        double t, v, b, s;
        fields >> t >> v >> b >> s;
        EXPECT_GE(s, -1e-9);
        ++rows;
    }
    EXPECT_EQ(rows, 129);
}

TEST(RunScenario, GlobalConcavityAmbiguityFailsCheck) {
    const auto sc = fromText("model.kind = cylinder\ntask = global-concavity\ntask.x = 0,0\ntask.y0 = 1,0\ntask.y1 = 9,0\n");
    EXPECT_THROW(executeScenario(sc), AmbiguityError);
    std::ostringstream log;
    auto withOut = sc;
    withOut.set("out.dir", scratch("ambiguous").string());
    EXPECT_EQ(runScenario(withOut, log), kExitCheckFailed);
}

TEST(RunScenario, ProbeSprinkleStraighten) {
    const auto probe = executeScenario(
        fromText("task = probe-continuity\ntask.p = 0,0\ntask.q = 4,0\ntask.perturbations = 0.1,0.01,0.001,0.0001\n"));
    EXPECT_TRUE(probe.pass);
    EXPECT_EQ(probe.summary["rows"].size(), 4u);

    const auto spr = executeScenario(fromText("model.tmin = 0\nmodel.tmax = 1\nmodel.xmin = -0.5\nmodel.xmax = 0.5\n"
                                              "task = sprinkle\ntask.density = 50,200\ntask.p = 0,0\ntask.q = 1,0\n"));
    EXPECT_TRUE(spr.pass);
    EXPECT_TRUE(spr.files.count("events_1.txt"));
    EXPECT_TRUE(spr.files.count("dag_0.txt"));

    const auto st = executeScenario(
        fromText("model.kind = cylinder\ntask = straighten\ntask.p = 0,0\ntask.q = 10,0\ntask.winding = 1\n"));
    for (const auto& len : st.summary["lengths"]) EXPECT_NEAR(len.get<double>(), std::sqrt(100 - 4 * std::numbers::pi * std::numbers::pi), 1e-12);
}

TEST(RunScenario, ExitCodes) {
    std::ostringstream log;
    const fs::path dir = scratch("codes");
    Scenario ok = fromText("task = equalize\ntask.values = 0,1,3\n");
    ok.set("out.dir", dir.string());
    EXPECT_EQ(runScenario(ok, log), kExitOk);
    EXPECT_TRUE(fs::exists(dir / "summary.json"));
    EXPECT_TRUE(fs::exists(dir / "report.txt"));

    Scenario bad = fromText("task = equalize\ntask.values = 0,x,3\n");
    EXPECT_EQ(runScenario(bad, log), kExitParse);
    Scenario unknownTask = fromText("task = fly\n");
    EXPECT_EQ(runScenario(unknownTask, log), kExitParse);
    EXPECT_EQ(runScenario((dir / "missing.txt").string(), log), kExitIo);

    // a regular file where the output directory should be
    std::ofstream(dir / "blocker") << "x";
    Scenario io = ok;
    io.set("out.dir", (dir / "blocker" / "sub").string());
    EXPECT_EQ(runScenario(io, log), kExitIo);

    Scenario failing = fromText("task = equalize\ntask.values = 3,1\n");
    failing.set("out.dir", dir.string());
    EXPECT_EQ(runScenario(failing, log), kExitCheckFailed);
}

TEST(RunScenario, EnvironmentOverridesOutputDir) {
    const fs::path a = scratch("env_a"), b = scratch("env_b");
    Scenario sc = fromText("task = equalize\ntask.values = 0,1,3\n");
    sc.set("out.dir", a.string());
    ::setenv("LORCAL_OUT", b.string().c_str(), 1);
    std::ostringstream log;
    const int rc = runScenario(sc, log);
    ::unsetenv("LORCAL_OUT");
    EXPECT_EQ(rc, kExitOk);
    EXPECT_TRUE(fs::exists(b / "summary.json"));
    EXPECT_FALSE(fs::exists(a));
}

TEST(RunScenario, RepeatRunsAreByteIdentical) {
    const std::string text =
        "model.kind = cylinder\ntask = audit\ntask.samples = 3000\nseed = 12345\n";
    std::ostringstream log;
    Scenario one = fromText(text), two = fromText(text);
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    one.set("out.dir", a.string());
    two.set("out.dir", b.string());
    ASSERT_EQ(runScenario(one, log), kExitOk);
    ASSERT_EQ(runScenario(two, log), kExitOk);
    EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
    EXPECT_EQ(slurp(a / "report.txt"), slurp(b / "report.txt"));
}

TEST(PlotData, EmptyReportsGiveHeaderOnly) {
    std::ostringstream a, b;
    emitPlotData(a, ConcavityReport{});
    emitPlotData(b, ContinuityReport{});
    EXPECT_EQ(a.str(), "# t value bound slack\n");
    EXPECT_EQ(b.str(), "# perturbation supdist\n");
}
