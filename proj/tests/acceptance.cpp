// Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "lorcal/lorcal.hpp"
#include "oracles.hpp"

using namespace lorcal;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass{true};
    std::ostringstream note;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) note << "first failure: " << what << "; ";
        pass = pass && ok;
    }
};

constexpr double kTwoPi = 2 * std::numbers::pi;

MinkowskiStrip plane() { return buildMinkowski({-100, 100, -100, 100}); }

CausalCurve<Point> segment(Point a, Point b, int pieces = 16) {
    std::vector<double> params;
    std::vector<Point> pts;
    for (int k = 0; k <= pieces; ++k) {
        const double s = static_cast<double>(k) / pieces;
        params.push_back(s);
        pts.push_back(k == pieces ? b : Point{a.t + s * (b.t - a.t), a.x + s * (b.x - a.x)});
    }
    return {params, pts};
}

double supToLine(const CausalCurve<Point>& c, Point a, Point b) {
    double sup = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double s = (c.params()[k] - c.front()) / (c.back() - c.front());
        sup = std::max(sup, std::hypot(c.points()[k].t - (a.t + s * (b.t - a.t)),
                                       c.points()[k].x - (a.x + s * (b.x - a.x))));
    }
    return sup;
}

// 1 ---------------------------------------------------------------------------
void axiomSuite(Verdict& v) {
    const auto mink = auditAxioms(buildMinkowski({-10, 10, -10, 10}), 10000, 1, "minkowski", 1e-9);
    const auto cyl = auditAxioms(buildCylinder(kTwoPi, -10, 10), 10000, 2, "cylinder", 1e-9);
    v.require(mink.ok() && mink.triplesChecked == 10000, "minkowski audit");
    v.require(cyl.ok() && cyl.triplesChecked == 10000, "cylinder audit");
    std::mt19937_64 gen(101);
    std::uniform_int_distribution<std::size_t> size(2, 200);
    std::uint64_t triples = 0;
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t n = size(gen);
        const auto g = buildCausalDag(n, oracle::randomDag(gen, n, 4.0 / static_cast<double>(n)));
        const auto r = auditAxioms(g, 1, 0, "dag", 0.0);
        triples += r.triplesChecked;
        v.require(r.ok(), "dag instance " + std::to_string(inst) + "\n" + r.toText());
    }
    v.note << "minkowski/cylinder violations " << mink.violations() << '/' << cyl.violations()
           << ", 100 DAGs, " << triples << " related triples exact";
}

// 2 ---------------------------------------------------------------------------
void maxPlusOracle(Verdict& v) {
    std::mt19937_64 gen(202);
    std::uniform_real_distribution<double> weight(0.0, 3.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::size_t pairs = 0;
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t n = 1 + static_cast<std::size_t>(inst) % 10;
        std::vector<std::size_t> label(n);
        for (std::size_t i = 0; i < n; ++i) label[i] = i;
        std::shuffle(label.begin(), label.end(), gen);
        std::vector<Edge> edges;
        const double density = 0.2 + 0.6 * coin(gen);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (coin(gen) < density) edges.push_back({label[i], label[j], weight(gen)});
        const auto t = longestPathTau(Digraph(n, edges));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double brute = i == j ? 0.0 : oracle::longestPathBrute(n, edges, i, j);
                v.require(t.at(i, j) == (std::isinf(brute) ? 0.0 : brute), "instance " + std::to_string(inst));
                ++pairs;
            }
    }
    v.note << "100 DAGs, " << pairs << " pairs, exact";
}

// 3 ---------------------------------------------------------------------------
void equalization(Verdict& v) {
    std::mt19937_64 gen(303);
    std::uniform_int_distribution<int> size(2, 51);
    std::uniform_real_distribution<double> gap(0.001, 5);
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
        std::vector<double> a{gap(gen) - 2};
        const int n = size(gen);
        for (int i = 1; i < n; ++i) a.push_back(a.back() + gap(gen));
        const auto out = equalizeSpacing(a, 1e-10);
        const auto want = oracle::equalizedLimit(a);
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(out[i] - want[i]));
    }
    v.require(worst < 1e-8, "random inputs");
    const auto ex = equalizeSpacing({0, 0.5, 2.9, 3});
    double exErr = 0;
    for (std::size_t i = 0; i < 4; ++i) exErr = std::max(exErr, std::abs(ex[i] - static_cast<double>(i)));
    v.require(exErr < 1e-8, "worked example");
    v.note << "max error " << formatDouble(worst) << ", (0,0.5,2.9,3) error " << formatDouble(exErr);
}

// 4 ---------------------------------------------------------------------------
void solver(Verdict& v) {
    const auto m = plane();
    const auto alpha = analyticGeodesic(m, {0, 0}, {4, 0});
    const auto cover = buildDiamondCover(m, alpha, {1.0});
    v.require(cover.n == 4, "N = 4");
    const auto res = tupleAscent(m, cover, {0, 0}, {4, 0.4});
    const double sup = supDistance(m, res.curve, analyticGeodesic(m, {0, 0}, {4, 0.4}).rescaled(0, cover.length));
    v.require(res.converged, "converged");
    v.require(sup < 1e-5, "sup-distance");
    bool monotone = true;
    for (std::size_t k = 1; k < res.scoreHistory.size(); ++k) monotone = monotone && res.scoreHistory[k] >= res.scoreHistory[k - 1];
    v.require(monotone, "score monotone");
    v.require(res.spacingResidual < 1e-5, "spacing");
    const auto incl = verifyInclusionClaim(m, cover, res);
    v.require(incl.ok && incl.gridPoints == 256, "inclusion claim");

    Rng rng(404);
    double worstGap = kInfinity;
    for (int k = 0; k < 50; ++k) {
        const Point p = sampleInDiamond(m, {cover.padBefore(), cover.anchors.front()}, rng);
        const Point q = sampleInDiamond(m, {cover.anchors.back(), cover.padAfter()}, rng);
        const auto r = tupleAscent(m, cover, p, q);
        const double bound = tauLength(m, alpha) + m.tau(p, alpha.first()) + m.tau(alpha.last(), q);
        worstGap = std::min(worstGap, r.length - bound);
    }
    v.require(worstGap >= -1e-6, "length inequality");
    v.note << "sup " << formatDouble(sup) << ", spacing " << formatDouble(res.spacingResidual) << ", sweeps "
           << res.iterations << ", inclusion " << incl.gridPoints << " pts, min length gap " << formatDouble(worstGap);
}

// 5 ---------------------------------------------------------------------------
void concavity(Verdict& v) {
    const auto m = plane();
    const auto c = buildCylinder(kTwoPi, -100, 100);
    std::mt19937_64 gen(505);
    std::uniform_real_distribution<double> u(0, 1);
    auto step = [&](Point from, double scale) {
        const double dt = scale * (0.05 + u(gen));
        return Point{from.t + dt, from.x + dt * 0.95 * (2 * u(gen) - 1)};
    };
    double localMin = kInfinity;
    int pairsPerModel = 0;
    while (pairsPerModel < 1000) {
        const Point a0{10 * u(gen), 10 * u(gen)};
        const Point a1 = step(a0, 1.0);
        const Point b0 = step(a0, 0.8);
        const Point b1 = step(a1, 0.8);
        if (!m.chrono(b0, b1)) continue;
        const auto alpha = segment(a0, a1), beta = segment(b0, b1);
        localMin = std::min(localMin, checkConcavity(m, makeMaximizerPair(m, alpha, beta)).minSlack);
        localMin = std::min(localMin, checkConcavity(c, makeMaximizerPair(c, alpha, beta)).minSlack);
        ++pairsPerModel;
    }
    v.require(localMin >= -1e-9, "local concavity");

    double globalMin = kInfinity;
    for (int k = 0; k < 1000; ++k) {
        const Point x{u(gen), u(gen)};
        const double d0 = 0.1 + 3 * u(gen), d1 = 0.1 + 3 * u(gen);
        const Point y0{x.t + d0, x.x + d0 * 0.95 * (2 * u(gen) - 1)};
        const Point y1{y0.t + d1, y0.x + d1 * 0.95 * (2 * u(gen) - 1)};
        const auto r = checkGlobalConcavity(m, x, y0, y1);
        v.require(r.pass, "global concavity");
        globalMin = std::min({globalMin, r.minSlack, r.extras.at("two_sided_min_slack")});
    }

    int partD = 0;
    double partDMin = kInfinity;
    while (partD < 100) {
        const Point a0{u(gen), u(gen)};
        const Point a1{a0.t + 2 + u(gen), a0.x + (2 * u(gen) - 1)};
        const Point p{a0.t + 0.5 * u(gen), a0.x + 0.2 * (2 * u(gen) - 1)};
        const Point q{a1.t + 0.2 + u(gen), a1.x + 0.2 * (2 * u(gen) - 1)};
        if (!m.chrono(a0, p) || !m.chrono(a1, q) || !m.chrono(p, q)) continue;
        const auto r = checkPartD(m, analyticGeodesic(m, a0, a1), analyticGeodesic(m, p, q));
        v.require(r.pass, "part (d)");
        partDMin = std::min(partDMin, r.minSlack);
        ++partD;
    }
    v.note << "local min slack " << formatDouble(localMin) << " (2x1000 pairs), global min slack "
           << formatDouble(globalMin) << " (1000), part (d) min midpoint slack " << formatDouble(partDMin) << " (100)";
}

// 6 ---------------------------------------------------------------------------
void dichotomy(Verdict& v) {
    const auto m = plane();
    Rng rng(606);
    const std::pair<Point, Point> pairs[] = {{{0, 0}, {4, 0.4}}, {{0.2, -0.1}, {3.9, 0.3}}, {{-0.1, 0.1}, {4.2, -0.2}}};
    double worst = 0;
    const auto cover = buildDiamondCover(m, analyticGeodesic(m, {0, 0}, {4, 0}), {1.0});
    for (const auto& [p, q] : pairs) {
        std::optional<CausalCurve<Point>> first;
        for (int run = 0; run < 20; ++run) {
            std::vector<Point> init{p};
            for (std::size_t i = 1; i < cover.n; ++i) init.push_back(sampleInDiamond(m, cover.diamond(i), rng));
            init.push_back(q);
            AscentOptions opt;
            opt.initial = init;
            const auto res = tupleAscent(m, cover, p, q, opt);
            v.require(res.converged, "ascent converged");
            if (!first) first = res.curve;
            worst = std::max({worst, supDistance(m, res.curve, *first), supToLine(res.curve, p, q)});
        }
    }
    v.require(worst < 1e-5, "uniqueness");
    const auto c = buildCylinder(kTwoPi, -100, 100);
    const auto list = enumerateWindingGeodesics(c, {0, 0}, {10, 0});
    v.require(list.size() >= 2, "winding enumeration");
    bool ambiguous = false;
    try {
        checkGlobalConcavity(c, {0, 0}, {1, 0}, {10, 0});
    } catch (const AmbiguityError&) {
        ambiguous = true;
    }
    v.require(ambiguous, "ambiguity error");
    v.note << "3 pairs x 20 inits, max sup " << formatDouble(worst) << "; cylinder dt=10>C: " << list.size()
           << " geodesics, ambiguity " << (ambiguous ? "raised" : "missing");
}

// 7 ---------------------------------------------------------------------------
void continuity(Verdict& v) {
    std::vector<std::pair<Point, Point>> perturbed;
    for (int k = 1; k <= 4; ++k) {
        const double s = std::pow(10.0, -k);
        perturbed.push_back({{0, s}, {4, -s}});
    }
    const auto rep = geodesicMapProbe(plane(), {0, 0}, {4, 0}, perturbed);
    bool bounded = true, decreasing = true;
    for (std::size_t k = 0; k < rep.rows.size(); ++k) {
        bounded = bounded && rep.rows[k].supDistance <= 2 * rep.rows[k].perturbation;
        if (k > 0) decreasing = decreasing && rep.rows[k].supDistance < rep.rows[k - 1].supDistance;
    }
    v.require(rep.rows.size() == 4 && bounded, "bounded by 2x perturbation");
    v.require(decreasing && rep.monotone, "monotone decrease");
    v.note << "max supdist/perturbation " << formatDouble(rep.maxRatio);
}

// 8 ---------------------------------------------------------------------------
void triangles(Verdict& v) {
    std::mt19937_64 gen(808);
    std::uniform_real_distribution<double> u(0.01, 10);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
        const double a = u(gen), c = u(gen), b = a + c + (k % 10 ? u(gen) : 0.0);
        const auto tri = realizeComparisonTriangle(a, b, c);
        worst = std::max({worst, std::abs(oracle::minkowski(tri.x.t, tri.x.x, tri.y.t, tri.y.x) - a),
                          std::abs(oracle::minkowski(tri.x.t, tri.x.x, tri.z.t, tri.z.x) - b),
                          std::abs(oracle::minkowski(tri.y.t, tri.y.x, tri.z.t, tri.z.x) - c)});
    }
    v.require(worst <= 1e-9, "round trip");
    int rejected = 0;
    for (int k = 0; k < 1000; ++k) {
        const double a = u(gen), c = u(gen);
        const double b = (a + c) * (0.999 * u(gen) / 10);
        try {
            realizeComparisonTriangle(a, b, c);
        } catch (const RealizabilityError&) {
            ++rejected;
        }
    }
    v.require(rejected == 1000, "rejections");
    v.note << "max side error " << formatDouble(worst) << ", rejected " << rejected << "/1000";
}

// 9 ---------------------------------------------------------------------------
void sprinkling(Verdict& v) {
    // the diamond between (0,0) and (1,0) sits inside this strip; points
    // outside it never lie on a chain between the tips
    const auto region = buildMinkowski({0, 1, -0.5, 0.5});
    const Point lo{0, 0}, hi{1, 0};
    const double ambient = region.tau(lo, hi);
    std::ostringstream taus;
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const auto layers = sprinkleNested(region, {50, 200, 800}, seed, {lo, hi});
        double previous = 0;
        taus << (seed > 1 ? "; " : "");
        for (const auto& g : layers) {
            const double t = g.tau({0}, {1});
            v.require(t >= previous, "monotone in density");
            v.require(t <= ambient, "bounded by continuum");
            previous = t;
            taus << formatDouble(t) << (&g == &layers.back() ? "" : ",");
        }
    }
    v.note << "tip tau per seed (rho=50,200,800): " << taus.str();
}

// 10 --------------------------------------------------------------------------
void determinism(Verdict& v) {
    const char* scenarios[] = {
        "model.kind = cylinder\ntask = audit\ntask.samples = 2000\nseed = 99\n",
        "model.tmin = 0\nmodel.tmax = 1\nmodel.xmin = -0.5\nmodel.xmax = 0.5\ntask = sprinkle\n"
        "task.density = 50,200\ntask.p = 0,0\ntask.q = 1,0\nseed = 7\n",
        "task = geodesic\ntask.alpha0 = 0,0\ntask.alpha1 = 4,0\ntask.p = 0,0\ntask.q = 4,0.4\ntask.N = 4\n",
        "task = probe-continuity\ntask.p = 0,0\ntask.q = 4,0\ntask.perturbations = 0.1,0.01\n",
    };
    const fs::path root = fs::temp_directory_path() / "lorcal_acceptance_determinism";
    std::size_t compared = 0;
    int idx = 0;
    for (const char* text : scenarios) {
        std::string runs[2];
        for (int r = 0; r < 2; ++r) {
            std::istringstream in(text);
            Scenario sc = Scenario::parse(in);
            const fs::path dir = root / (std::to_string(idx) + "_" + std::to_string(r));
            fs::remove_all(dir);
            sc.set("out.dir", dir.string());
            std::ostringstream log;
            runScenario(sc, log);
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) {
                std::ifstream in2(f, std::ios::binary);
                std::ostringstream body;
                body << in2.rdbuf();
                runs[r] += f.filename().string() + "\n" + body.str();
            }
        }
        v.require(!runs[0].empty() && runs[0] == runs[1], "scenario " + std::to_string(idx));
        compared += runs[0].size();
        ++idx;
    }
    fs::remove_all(root);
    v.note << idx << " scenarios, " << compared << " bytes identical";
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<void(Verdict&)>> criteria[] = {
        {"1 axiom suite", axiomSuite},
        {"2 max-plus oracle equivalence", maxPlusOracle},
        {"3 spacing equalization limit", equalization},
        {"4 tuple ascent solver", solver},
        {"5 concavity suites", concavity},
        {"6 uniqueness vs winding dichotomy", dichotomy},
        {"7 continuity of the geodesic map", continuity},
        {"8 comparison triangles", triangles},
        {"9 sprinkled tau convergence", sprinkling},
        {"10 determinism", determinism},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Verdict v;
        try {
            run(v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.note << "exception: " << e.what();
        }
        failures += !v.pass;
        std::printf("%s criterion %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.note.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
