#pragma once

// Scenario files and the task runner behind the `lorcal` command.
//
// A scenario is a flat key=value text file; '#' starts a comment line.
// See kScenarioKeys for the accepted keys. Outputs land in out.dir (or
// $LORCAL_OUT): report.txt, summary.json and task-specific tables.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lorcal/any_model.hpp"
#include "lorcal/causal_dag.hpp"
#include "lorcal/concavity.hpp"
#include "lorcal/cylinder.hpp"
#include "lorcal/format.hpp"
#include "lorcal/geodesic.hpp"
#include "lorcal/io.hpp"
#include "lorcal/minkowski.hpp"
#include "lorcal/sprinkle.hpp"
#include "lorcal/tau_engine.hpp"

namespace lorcal {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitParse = 2, kExitIo = 3 };

struct ScenarioKey {
    const char* name;
    const char* help;
};

inline constexpr ScenarioKey kScenarioKeys[] = {
    {"model.kind", "minkowski | cylinder | dag"},
    {"model.C", "cylinder circumference (default 2*pi)"},
    {"model.tmin", "lower time bound (default -100)"},
    {"model.tmax", "upper time bound (default 100)"},
    {"model.xmin", "lower space bound, minkowski (default -100)"},
    {"model.xmax", "upper space bound, minkowski (default 100)"},
    {"model.file", "#lorcal-dag file for model.kind=dag"},
    {"task", "audit | tau | geodesic | winding | concavity | global-concavity | equalize | sprinkle | straighten | "
             "probe-continuity"},
    {"task.samples", "audit sample count (default 10000)"},
    {"task.p", "start event 't,x' (node id for dag)"},
    {"task.q", "end event 't,x' (node id for dag)"},
    {"task.alpha0", "reference geodesic start (default task.p)"},
    {"task.alpha1", "reference geodesic end (default task.q)"},
    {"task.N", "number of cover diamonds"},
    {"task.eps", "requested cover spacing"},
    {"task.winding", "cylinder winding class"},
    {"task.segments", "samples per analytic geodesic (default 16)"},
    {"task.maxiter", "tuple ascent sweep limit (default 100000)"},
    {"task.values", "comma-separated increasing reals"},
    {"task.density", "comma-separated nondecreasing densities"},
    {"task.grid", "concavity grid size (default 129)"},
    {"task.a0", "first maximizer start"},
    {"task.a1", "first maximizer end"},
    {"task.b0", "second maximizer start"},
    {"task.b1", "second maximizer end"},
    {"task.x", "common start event"},
    {"task.y0", "first end event"},
    {"task.y1", "second end event"},
    {"task.perturbations", "comma-separated perturbation sizes"},
    {"task.members", "homotopy family size (default 5)"},
    {"task.amplitude", "zig-zag amplitude of the family (default 0.1)"},
    {"tol", "tolerance (task default when absent)"},
    {"seed", "64-bit seed (default 1)"},
    {"out.dir", "output directory (default .; LORCAL_OUT overrides)"},
};

inline bool isScenarioKey(const std::string& k) {
    for (const auto& key : kScenarioKeys)
        if (k == key.name) return true;
    return false;
}

class Scenario {
public:
    Scenario() = default;
    explicit Scenario(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {
        for (const auto& [k, v] : kv_)
            if (!isScenarioKey(k)) throw ParseError("unknown scenario key '" + k + "'");
    }

    static Scenario parse(std::istream& in) {
        std::map<std::string, std::string> kv;
        std::string line;
        std::size_t lineNo = 0;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string{};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        while (std::getline(in, line)) {
            ++lineNo;
            line = trim(line);
            if (line.empty() || line.front() == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineNo) + ": expected key=value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (!isScenarioKey(key)) {
                throw ParseError("line " + std::to_string(lineNo) + ": unknown key '" + key + "'");
            }
            if (!kv.emplace(key, value).second) {
                throw ParseError("line " + std::to_string(lineNo) + ": duplicate key '" + key + "'");
            }
        }
        return Scenario(std::move(kv));
    }

    static Scenario load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open scenario file '" + path + "'");
        return parse(in);
    }

    void set(const std::string& key, std::string value) {
        if (!isScenarioKey(key)) throw ParseError("unknown scenario key '" + key + "'");
        kv_[key] = std::move(value);
    }

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    const std::map<std::string, std::string>& values() const noexcept { return kv_; }

    std::string str(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw ParseError("missing key '" + key + "'");
        return it->second;
    }
    std::string str(const std::string& key, const std::string& fallback) const {
        return has(key) ? str(key) : fallback;
    }
    double real(const std::string& key) const { return parseDouble(str(key)); }
    double real(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }
    std::size_t count(const std::string& key, std::size_t fallback) const {
        return has(key) ? parseIndex(str(key)) : fallback;
    }
    long integer(const std::string& key) const {
        const std::string s = str(key);
        const bool neg = !s.empty() && s.front() == '-';
        const std::size_t mag = parseIndex(neg ? s.substr(1) : s);
        return neg ? -static_cast<long>(mag) : static_cast<long>(mag);
    }
    std::uint64_t seed() const {
        if (!has("seed")) return 1;
        const std::string s = str("seed");
        try {
            std::size_t used = 0;
            const auto v = std::stoull(s, &used, 0);
            if (used != s.size()) throw ParseError("bad seed '" + s + "'");
            return v;
        } catch (const std::logic_error&) {
            throw ParseError("bad seed '" + s + "'");
        }
    }
    Point point(const std::string& key) const {
        const auto parts = list(key);
        if (parts.size() != 2) throw ParseError("key '" + key + "' needs 't,x'");
        return {parts[0], parts[1]};
    }
    std::vector<double> list(const std::string& key) const {
        std::vector<double> out;
        std::stringstream ss(str(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto b = item.find_first_not_of(" \t");
            const auto e = item.find_last_not_of(" \t");
            if (b == std::string::npos) throw ParseError("empty item in '" + key + "'");
            out.push_back(parseDouble(item.substr(b, e - b + 1)));
        }
        if (out.empty()) throw ParseError("key '" + key + "' is empty");
        return out;
    }

private:
    std::map<std::string, std::string> kv_;
};

// ---------------------------------------------------------------------------
// Plot tables

inline void emitPlotData(std::ostream& out, const ConcavityReport& r) {
    out << "# t value bound slack\n";
    for (const auto& s : r.samples) {
        out << formatDouble(s.t) << ' ' << formatDouble(s.value) << ' ' << formatDouble(s.bound) << ' '
            << formatDouble(s.slack) << '\n';
    }
}

inline void emitPlotData(std::ostream& out, const ContinuityReport& r) {
    out << "# perturbation supdist\n";
    for (const auto& row : r.rows) out << formatDouble(row.perturbation) << ' ' << formatDouble(row.supDistance) << '\n';
}

// ---------------------------------------------------------------------------
// Running

/// Everything a scenario produces; file contents are keyed by file name.
struct ScenarioOutcome {
    bool pass{true};
    std::string report;
    nlohmann::json summary = nlohmann::json::object();
    std::map<std::string, std::string> files;
};

namespace detail {

inline nlohmann::json jsonNumber(double v) {
    if (std::isfinite(v)) return v;
    return formatDouble(v);
}

inline nlohmann::json jsonPoint(const Point& p) { return nlohmann::json::array({jsonNumber(p.t), jsonNumber(p.x)}); }

inline AnyModel buildModel(const Scenario& sc) {
    const std::string kind = sc.str("model.kind", "minkowski");
    if (kind == "minkowski") {
        return buildMinkowski({sc.real("model.tmin", -100), sc.real("model.tmax", 100), sc.real("model.xmin", -100),
                               sc.real("model.xmax", 100)});
    }
    if (kind == "cylinder") {
        return buildCylinder(sc.real("model.C", 2 * std::numbers::pi), sc.real("model.tmin", -100),
                             sc.real("model.tmax", 100));
    }
    if (kind == "dag") {
        const std::string path = sc.str("model.file");
        std::ifstream in(path);
        if (!in) throw IoError("cannot open DAG file '" + path + "'");
        const Digraph g = readDag(in);
        return CausalDag(g.size(), g.edges());
    }
    throw ParseError("unknown model.kind '" + kind + "'");
}

template <class F>
auto withFlat(const AnyModel& model, F&& f) {
    if (const auto* m = std::get_if<MinkowskiStrip>(&model.variant())) return f(*m);
    if (const auto* c = std::get_if<Cylinder>(&model.variant())) return f(*c);
    throw ParseError("task needs a continuum model (minkowski or cylinder)");
}

inline std::string printed(const std::function<void(std::ostream&)>& w) {
    std::ostringstream os;
    w(os);
    return os.str();
}

// --- tasks -----------------------------------------------------------------

inline void runAudit(const Scenario& sc, const AnyModel& model, ScenarioOutcome& out) {
    const std::uint64_t samples = sc.count("task.samples", 10000);
    const double tol = sc.real("tol", kTauTol);
    AuditReport r;
    if (const auto* dag = std::get_if<CausalDag>(&model.variant())) {
        r = auditAxioms(*dag, samples, sc.seed(), "dag", tol);
    } else {
        r = withFlat(model, [&](const auto& m) { return auditAxioms(m, samples, sc.seed(), model.kind(), tol); });
    }
    out.report = r.toText();
    out.pass = r.ok();
    out.summary["violations"] = r.violations();
    out.summary["pairs_checked"] = r.pairsChecked;
    out.summary["triples_checked"] = r.triplesChecked;
    out.summary["counts"] = {{"reverse_triangle", r.reverseTriangle}, {"positivity", r.positivity},
                             {"chrono_in_causal", r.chronoInCausal}, {"push_up", r.pushUp},
                             {"reflexivity", r.reflexivity},         {"transitivity", r.transitivity}};
}

inline void runTau(const Scenario& sc, const AnyModel& model, ScenarioOutcome& out) {
    std::ostringstream rep;
    if (const auto* dag = std::get_if<CausalDag>(&model.variant())) {
        const TauTable t = longestPathTau(*dag);
        out.files["tau.txt"] = printed([&](std::ostream& os) { writeTauTable(os, t); });
        rep << "nodes: " << dag->size() << '\n';
        out.summary["nodes"] = dag->size();
        if (sc.has("task.p") && sc.has("task.q")) {
            const NodeId p{sc.count("task.p", 0)}, q{sc.count("task.q", 0)};
            const double v = dag->tau(p, q);
            rep << "tau: " << formatDouble(v) << '\n';
            out.summary["tau"] = v;
        }
    } else {
        const Event p = sc.point("task.p"), q = sc.point("task.q");
        const double v = model.tau(p, q);
        rep << "tau: " << formatDouble(v) << '\n'
            << "causal: " << (model.causal(p, q) ? "true" : "false") << '\n'
            << "chrono: " << (model.chrono(p, q) ? "true" : "false") << '\n';
        out.summary["tau"] = jsonNumber(v);
        out.summary["causal"] = model.causal(p, q);
        out.summary["chrono"] = model.chrono(p, q);
    }
    out.report = rep.str();
}

inline void runGeodesic(const Scenario& sc, const AnyModel& model, ScenarioOutcome& out) {
    if (const auto* dag = std::get_if<CausalDag>(&model.variant())) {
        const NodeId p{sc.count("task.p", 0)}, q{sc.count("task.q", 0)};
        const auto path = dagMaximizer(*dag, p, q);
        out.files["geodesic.txt"] = printed([&](std::ostream& os) { writeGeodesic(os, *dag, path); });
        std::ostringstream rep;
        rep << "length: " << formatDouble(dag->tau(p, q)) << "\npath:";
        nlohmann::json nodes = nlohmann::json::array();
        for (const NodeId v : path.points()) {
            rep << ' ' << v.id;
            nodes.push_back(v.id);
        }
        rep << '\n';
        out.report = rep.str();
        out.summary["length"] = dag->tau(p, q);
        out.summary["path"] = nodes;
        return;
    }
    withFlat(model, [&](const auto& m) {
        const Point p = sc.point("task.p"), q = sc.point("task.q");
        const Point a0 = sc.has("task.alpha0") ? sc.point("task.alpha0") : p;
        const Point a1 = sc.has("task.alpha1") ? sc.point("task.alpha1") : q;
        std::optional<long> winding;
        if (sc.has("task.winding")) winding = sc.integer("task.winding");
        const int segments = static_cast<int>(sc.count("task.segments", 16));
        const auto alpha = analyticGeodesic(m, a0, a1, winding, segments);
        CoverOptions co;
        if (sc.has("task.eps")) co.epsRequest = sc.real("task.eps");
        if (sc.has("task.N")) {
            const std::size_t n = sc.count("task.N", 2);
            if (n < 2) throw ParseError("task.N must be at least 2");
            co.epsRequest = tauLength(m, alpha) / static_cast<double>(n);
        }
        const DiamondCover cover = buildDiamondCover(m, alpha, co);
        AscentOptions ao;
        ao.tol = sc.real("tol", ao.tol);
        ao.maxIter = sc.count("task.maxiter", ao.maxIter);
        const Point qLift = m.liftNear(q, cover.anchors.back());
        const auto res = tupleAscent(m, cover, p, qLift, ao);
        const auto incl = verifyInclusionClaim(m, cover, res);
        const auto exact = analyticGeodesic(m, p, qLift, std::nullopt, segments);
        const double sup = supDistance(m, res.curve, exact);
        const double exactLen = detail::liftTau(p, qLift);

        out.files["geodesic.txt"] = printed([&](std::ostream& os) { writeGeodesic(os, res); });
        std::ostringstream rep;
        rep << "length: " << formatDouble(res.length) << '\n'
            << "analytic_length: " << formatDouble(exactLen) << '\n'
            << "converged: " << (res.converged ? "true" : "false") << '\n'
            << "iterations: " << res.iterations << '\n'
            << "max_residual: " << formatDouble(res.maxResidual) << '\n'
            << "spacing_residual: " << formatDouble(res.spacingResidual) << '\n'
            << "sup_distance_to_analytic: " << formatDouble(sup) << '\n'
            << "cover_n: " << cover.n << '\n'
            << "cover_eps: " << formatDouble(cover.eps) << '\n'
            << "inclusion: " << (incl.ok ? "true" : "false") << '\n';
        out.report = rep.str();
        out.pass = res.converged && incl.ok;
        out.summary["length"] = res.length;
        out.summary["analytic_length"] = exactLen;
        out.summary["converged"] = res.converged;
        out.summary["iterations"] = res.iterations;
        out.summary["max_residual"] = res.maxResidual;
        out.summary["spacing_residual"] = res.spacingResidual;
        out.summary["sup_distance_to_analytic"] = sup;
        out.summary["cover"] = {{"n", cover.n}, {"eps", cover.eps}, {"delta", jsonNumber(cover.delta)}};
        out.summary["inclusion"] = incl.ok;
        nlohmann::json tuple = nlohmann::json::array();
        for (const Point& a : res.tuple) tuple.push_back(jsonPoint(a));
        out.summary["tuple"] = tuple;
    });
}

inline void runWinding(const Scenario& sc, const AnyModel& model, ScenarioOutcome& out) {
    const auto* cyl = std::get_if<Cylinder>(&model.variant());
    if (!cyl) throw ParseError("task=winding needs model.kind=cylinder");
    const Point p = sc.point("task.p"), q = sc.point("task.q");
    const auto list = enumerateWindingGeodesics(*cyl, p, q, static_cast<int>(sc.count("task.segments", 16)));
    std::ostringstream table, rep;
    table << "# winding length\n";
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& w : list) {
        table << w.winding << ' ' << formatDouble(w.length) << '\n';
        rows.push_back({{"winding", w.winding}, {"length", w.length}});
    }
    out.files["winding.txt"] = table.str();
    rep << "geodesics: " << list.size() << '\n' << table.str();
    out.report = rep.str();
    out.summary["geodesics"] = rows;
    out.summary["count"] = list.size();
}

inline void concavityOutcome(const ConcavityReport& r, ScenarioOutcome& out) {
    out.report = r.toText();
    out.pass = r.pass;
    out.files["plot.txt"] = printed([&](std::ostream& os) { emitPlotData(os, r); });
    out.summary["check"] = r.check;
    out.summary["pass"] = r.pass;
    out.summary["min_slack"] = jsonNumber(r.minSlack);
    out.summary["argmin_t"] = r.argminT;
    out.summary["grid"] = r.samples.size();
    for (const auto& [k, v] : r.extras) out.summary[k] = jsonNumber(v);
}

inline void runConcavity(const Scenario& sc, const AnyModel& model, ScenarioOutcome& out) {
    withFlat(model, [&](const auto& m) {
        const Point a0 = sc.point("task.a0");
        const Point a1 = m.liftNear(sc.point("task.a1"), a0);
        const Point b0 = m.liftNear(sc.point("task.b0"), a0);
        const Point b1 = m.liftNear(sc.point("task.b1"), b0);
        const int segments = static_cast<int>(sc.count("task.segments", 16));
        const auto pair = makeMaximizerPair(m, detail::straightCurve(a0, a1, segments),
                                            detail::straightCurve(b0, b1, segments));
        concavityOutcome(checkConcavity(m, pair, sc.count("task.grid", kDefaultConcavityGrid), sc.real("tol", kTauTol)),
                         out);
    });
}

inline void runGlobalConcavity(const Scenario& sc, const AnyModel& model, ScenarioOutcome& out) {
    withFlat(model, [&](const auto& m) {
        concavityOutcome(checkGlobalConcavity(m, sc.point("task.x"), sc.point("task.y0"), sc.point("task.y1"),
                                              sc.count("task.grid", kDefaultConcavityGrid), sc.real("tol", kTauTol)),
                         out);
    });
}

inline void runEqualize(const Scenario& sc, ScenarioOutcome& out) {
    const auto result = equalizeSpacing(sc.list("task.values"), sc.real("tol", 1e-10));
    std::ostringstream line;
    nlohmann::json values = nlohmann::json::array();
    for (std::size_t i = 0; i < result.size(); ++i) {
        line << (i ? " " : "") << formatDouble(result[i]);
        values.push_back(result[i]);
    }
    line << '\n';
    out.files["equalize.txt"] = line.str();
    out.report = "values: " + line.str();
    out.summary["values"] = values;
}

inline void runSprinkle(const Scenario& sc, const AnyModel& model, ScenarioOutcome& out) {
    withFlat(model, [&](const auto& m) {
        const auto densities = sc.list("task.density");
        std::vector<Point> anchors;
        if (sc.has("task.p") && sc.has("task.q")) anchors = {sc.point("task.p"), sc.point("task.q")};
        const auto dags = sprinkleNested(m, densities, sc.seed(), anchors);
        std::ostringstream rep;
        nlohmann::json layers = nlohmann::json::array();
        bool monotone = true, bounded = true;
        double previous = 0.0;
        const double ambient = anchors.empty() ? 0.0 : m.tau(anchors[0], anchors[1]);
        for (std::size_t k = 0; k < dags.size(); ++k) {
            const CausalDag& g = dags[k];
            const std::string suffix = "_" + std::to_string(k) + ".txt";
            out.files["events" + suffix] = printed([&](std::ostream& os) { writeEvents(os, *g.coords()); });
            out.files["dag" + suffix] = printed([&](std::ostream& os) { writeDag(os, g.graph()); });
            nlohmann::json layer = {{"density", densities[k]}, {"nodes", g.size()}, {"edges", g.graph().edges().size()}};
            rep << "density " << formatDouble(densities[k]) << ": nodes " << g.size();
            if (!anchors.empty()) {
                const double t = g.tau({0}, {1});
                layer["tau_tips"] = t;
                rep << " tau_tips " << formatDouble(t);
                if (t < previous) monotone = false;
                if (t > ambient + kTauTol) bounded = false;
                previous = t;
            }
            rep << '\n';
            layers.push_back(layer);
        }
        if (!anchors.empty()) {
            rep << "ambient_tau: " << formatDouble(ambient) << '\n'
                << "monotone: " << (monotone ? "true" : "false") << '\n'
                << "bounded: " << (bounded ? "true" : "false") << '\n';
            out.summary["ambient_tau"] = ambient;
            out.summary["monotone"] = monotone;
            out.summary["bounded"] = bounded;
        }
        out.summary["layers"] = layers;
        out.report = rep.str();
        out.pass = monotone && bounded;
    });
}

inline void runStraighten(const Scenario& sc, const AnyModel& model, ScenarioOutcome& out) {
    withFlat(model, [&](const auto& m) {
        const Point p = sc.point("task.p");
        std::optional<long> winding;
        if (sc.has("task.winding")) winding = sc.integer("task.winding");
        const Point q = geodesicTarget(m, p, sc.point("task.q"), winding);
        const std::size_t members = sc.count("task.members", 5);
        const double amplitude = sc.real("task.amplitude", 0.1);
        const std::size_t segments = 8;
        if (members < 1) throw ParseError("task.members must be positive");
        std::vector<CausalCurve<Point>> family;
        for (std::size_t k = 0; k < members; ++k) {
            const double amp = members == 1 ? amplitude : amplitude * static_cast<double>(k) / static_cast<double>(members - 1);
            std::vector<double> params;
            std::vector<Point> pts;
            for (std::size_t j = 0; j <= segments; ++j) {
                const double s = static_cast<double>(j) / static_cast<double>(segments);
                params.push_back(s);
                Point pt{p.t + s * (q.t - p.t), p.x + s * (q.x - p.x)};
                if (j == segments) pt = q;
                if (j > 0 && j < segments) pt.x += (j % 2 ? amp : -amp);
                pts.push_back(pt);
            }
            family.emplace_back(std::move(params), std::move(pts));
        }
        const auto straight = straightenHomotopy(m, family);
        std::vector<EventRow> rows;
        nlohmann::json lengths = nlohmann::json::array();
        for (std::size_t k = 0; k < straight.size(); ++k) {
            for (const Point& pt : straight[k].points()) rows.push_back({pt, k});
            lengths.push_back(tauLength(m, straight[k]));
        }
        out.files["straightened.txt"] = printed([&](std::ostream& os) { writeEvents(os, rows); });
        std::ostringstream rep;
        rep << "members: " << straight.size() << '\n'
            << "geodesic_length: " << formatDouble(detail::liftTau(p, q)) << '\n';
        out.report = rep.str();
        out.summary["members"] = straight.size();
        out.summary["lengths"] = lengths;
        out.summary["geodesic_length"] = detail::liftTau(p, q);
    });
}

inline void runProbe(const Scenario& sc, const AnyModel& model, ScenarioOutcome& out) {
    withFlat(model, [&](const auto& m) {
        const Point x = sc.point("task.p"), y = sc.point("task.q");
        std::vector<std::pair<Point, Point>> perturbed;
        for (double s : sc.list("task.perturbations")) {
            perturbed.push_back({Point{x.t, x.x + s}, Point{y.t, y.x - s}});
        }
        ProbeOptions po;
        if (sc.has("task.eps")) po.epsRequest = sc.real("task.eps");
        if (sc.has("tol")) po.ascent.tol = sc.real("tol");
        const auto r = geodesicMapProbe(m, x, y, perturbed, po);
        out.files["plot.txt"] = printed([&](std::ostream& os) { emitPlotData(os, r); });
        std::ostringstream rep;
        rep << "base_length: " << formatDouble(r.baseLength) << '\n'
            << "monotone: " << (r.monotone ? "true" : "false") << '\n'
            << "max_ratio: " << formatDouble(r.maxRatio) << '\n';
        nlohmann::json rows = nlohmann::json::array();
        bool converged = true;
        for (const auto& row : r.rows) {
            rows.push_back({{"perturbation", row.perturbation}, {"supdist", row.supDistance}});
            converged = converged && row.converged;
        }
        out.report = rep.str();
        out.pass = r.monotone && r.maxRatio <= 2.0 && converged;
        out.summary["rows"] = rows;
        out.summary["monotone"] = r.monotone;
        out.summary["max_ratio"] = r.maxRatio;
    });
}

}  // namespace detail

/// Runs the scenario in memory. Model and task errors propagate.
inline ScenarioOutcome executeScenario(const Scenario& sc) {
    const std::string task = sc.str("task");
    ScenarioOutcome out;
    out.summary["task"] = task;
    if (task == "equalize") {
        detail::runEqualize(sc, out);
    } else {
        const AnyModel model = detail::buildModel(sc);
        out.summary["model"] = model.kind();
        if (task == "audit") detail::runAudit(sc, model, out);
        else if (task == "tau") detail::runTau(sc, model, out);
        else if (task == "geodesic") detail::runGeodesic(sc, model, out);
        else if (task == "winding") detail::runWinding(sc, model, out);
        else if (task == "concavity") detail::runConcavity(sc, model, out);
        else if (task == "global-concavity") detail::runGlobalConcavity(sc, model, out);
        else if (task == "sprinkle") detail::runSprinkle(sc, model, out);
        else if (task == "straighten") detail::runStraighten(sc, model, out);
        else if (task == "probe-continuity") detail::runProbe(sc, model, out);
        else throw ParseError("unknown task '" + task + "'");
    }
    out.summary["pass"] = out.pass;
    return out;
}

inline std::filesystem::path outputDir(const Scenario& sc) {
    if (const char* env = std::getenv("LORCAL_OUT"); env && *env) return env;
    return sc.str("out.dir", ".");
}

inline void writeOutcome(const std::filesystem::path& dir, const ScenarioOutcome& out) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    auto put = [&](const std::string& name, const std::string& body) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f || !(f << body) || !f.flush()) throw IoError("cannot write '" + (dir / name).string() + "'");
    };
    put("report.txt", out.report);
    put("summary.json", out.summary.dump(2) + "\n");
    for (const auto& [name, body] : out.files) put(name, body);
}

/// Executes and writes a scenario, mapping failures to exit codes:
/// 0 all checks pass, 1 a check or model precondition fails, 2 malformed
/// scenario, 3 I/O trouble.
inline int runScenario(const Scenario& sc, std::ostream& log) {
    try {
        const ScenarioOutcome out = executeScenario(sc);
        writeOutcome(outputDir(sc), out);
        log << out.report;
        return out.pass ? kExitOk : kExitCheckFailed;
    } catch (const ParseError& e) {
        log << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const IoError& e) {
        log << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        log << "check failed: " << e.what() << '\n';
        return kExitCheckFailed;
    }
}

inline int runScenario(const std::string& path, std::ostream& log) {
    try {
        return runScenario(Scenario::load(path), log);
    } catch (const ParseError& e) {
        log << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const IoError& e) {
        log << "i/o error: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace lorcal
