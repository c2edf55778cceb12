// lorcal: run scenario files or single tasks from flags.
//
//   lorcal run scenario.txt
//   lorcal audit --model cylinder --samples 10000 --seed 7
//   lorcal equalize --values 0,0.5,2.9,3
//
// Every scenario key is also a flag (--model.kind, --task.p, ...); the
// subcommand supplies `task`.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lorcal/scenario.hpp"

namespace {

// short spellings accepted next to the dotted scenario keys; task.* keys
// also answer to their bare name (--grid, -p)
const std::map<std::string, std::vector<std::string>> kAliases = {
    {"model.kind", {"--model"}},
    {"model.C", {"--C", "--circumference"}},
    {"model.file", {"--dag"}},
    {"out.dir", {"--out", "-o"}},
};

std::string flagSpec(const std::string& name) {
    std::string flags = "--" + name;
    if (name.rfind("task.", 0) == 0) {
        const std::string bare = name.substr(5);
        flags += (bare.size() == 1 ? ",-" : ",--") + bare;
    }
    if (auto it = kAliases.find(name); it != kAliases.end()) {
        for (const auto& alias : it->second) flags += "," + alias;
    }
    return flags;
}

const char* const kTasks[] = {"audit",   "tau",    "geodesic",   "winding",         "concavity", "global-concavity",
                              "equalize", "sprinkle", "straighten", "probe-continuity"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time separation, geodesics and concavity checks on Lorentzian model spaces"};
    app.require_subcommand(1);

    std::string scenarioFile;
    auto* run = app.add_subcommand("run", "run a scenario file");
    run->add_option("scenario", scenarioFile, "key=value scenario file")->required();

    std::map<std::string, std::map<std::string, std::string>> flagValues;
    std::vector<std::pair<std::string, CLI::App*>> tasks;
    for (const char* task : kTasks) {
        auto* sub = app.add_subcommand(task, std::string("run the ") + task + " task");
        auto& values = flagValues[task];
        for (const auto& key : lorcal::kScenarioKeys) {
            const std::string name = key.name;
            if (name == "task") continue;
            sub->add_option(flagSpec(name), values[name], key.help);
        }
        tasks.emplace_back(task, sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : lorcal::kExitParse;
    }

    if (run->parsed()) return lorcal::runScenario(scenarioFile, std::cout);

    for (const auto& [task, sub] : tasks) {
        if (!sub->parsed()) continue;
        try {
            lorcal::Scenario sc;
            sc.set("task", task);
            for (const auto& [name, value] : flagValues[task]) {
                if (sub->count("--" + name) > 0) sc.set(name, value);
            }
            return lorcal::runScenario(sc, std::cout);
        } catch (const lorcal::ParseError& e) {
            std::cout << "parse error: " << e.what() << '\n';
            return lorcal::kExitParse;
        }
    }
    return lorcal::kExitParse;
}
