#pragma once

// Plain-text exchange formats.
//
//   #lorcal-events v1     one event per line: "t x [id]"
//   #lorcal-dag v1        one edge per line:  "i j w"
//   #lorcal-tau v1        one entry per line: "i j tau" (zero entries omitted)
//
// DAG and tau files carry an optional "#nodes <n>" line so isolated nodes
// survive a round trip. Numbers use the shortest representation that
// parses back to the same double.

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lorcal/causal_dag.hpp"
#include "lorcal/format.hpp"
#include "lorcal/tau_engine.hpp"

namespace lorcal {

inline constexpr const char* kEventsHeader = "#lorcal-events v1";
inline constexpr const char* kDagHeader = "#lorcal-dag v1";
inline constexpr const char* kTauHeader = "#lorcal-tau v1";

struct EventRow {
    Point point;
    std::optional<std::size_t> id;

    friend bool operator==(const EventRow&, const EventRow&) = default;
};

namespace detail {

inline std::vector<std::string> splitFields(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string f;
    while (is >> f) out.push_back(f);
    return out;
}

inline void expectHeader(std::istream& in, const char* header) {
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line != header) {
            throw ParseError(std::string("expected header '") + header + "', got '" + line + "'");
        }
        return;
    }
    throw ParseError(std::string("missing header '") + header + "'");
}

/// Reads data lines, handing "#nodes" values to `onNodes` and ignoring
/// other comment lines.
template <class OnRow, class OnNodes>
void readBody(std::istream& in, OnRow&& onRow, OnNodes&& onNodes) {
    std::string line;
    std::size_t lineNo = 1;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            auto f = splitFields(line);
            if (f.size() == 2 && f[0] == "#nodes") onNodes(parseIndex(f[1]));
            continue;
        }
        try {
            onRow(splitFields(line));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(lineNo) + ": " + e.what());
        }
    }
}

}  // namespace detail

inline void writeEvents(std::ostream& out, const std::vector<EventRow>& rows) {
    out << kEventsHeader << '\n';
    for (const EventRow& r : rows) {
        out << formatDouble(r.point.t) << ' ' << formatDouble(r.point.x);
        if (r.id) out << ' ' << *r.id;
        out << '\n';
    }
}

inline void writeEvents(std::ostream& out, const std::vector<Point>& pts) {
    std::vector<EventRow> rows;
    rows.reserve(pts.size());
    for (const Point& p : pts) rows.push_back({p, std::nullopt});
    writeEvents(out, rows);
}

inline std::vector<EventRow> readEvents(std::istream& in) {
    detail::expectHeader(in, kEventsHeader);
    std::vector<EventRow> rows;
    detail::readBody(
        in,
        [&](const std::vector<std::string>& f) {
            if (f.size() != 2 && f.size() != 3) throw ParseError("event line needs 't x [id]'");
            EventRow r{{parseDouble(f[0]), parseDouble(f[1])}, std::nullopt};
            if (f.size() == 3) r.id = parseIndex(f[2]);
            rows.push_back(r);
        },
        [](std::size_t) {});
    return rows;
}

inline void writeDag(std::ostream& out, const Digraph& g) {
    out << kDagHeader << '\n' << "#nodes " << g.size() << '\n';
    for (const Edge& e : g.edges()) out << e.from << ' ' << e.to << ' ' << formatDouble(e.weight) << '\n';
}

/// Reads a DAG table; node count is "#nodes" if present, else max id + 1.
inline Digraph readDag(std::istream& in) {
    detail::expectHeader(in, kDagHeader);
    std::vector<Edge> edges;
    std::optional<std::size_t> declared;
    std::size_t n = 0;
    detail::readBody(
        in,
        [&](const std::vector<std::string>& f) {
            if (f.size() != 3) throw ParseError("dag line needs 'i j w'");
            Edge e{parseIndex(f[0]), parseIndex(f[1]), parseDouble(f[2])};
            n = std::max({n, e.from + 1, e.to + 1});
            edges.push_back(e);
        },
        [&](std::size_t k) { declared = k; });
    if (declared) {
        if (*declared < n) throw ParseError("#nodes smaller than the largest node id");
        n = *declared;
    }
    return Digraph(n, std::move(edges));
}

inline void writeTauTable(std::ostream& out, const TauTable& t) {
    out << kTauHeader << '\n' << "#nodes " << t.size() << '\n';
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j)
            if (t.at(i, j) != 0.0) out << i << ' ' << j << ' ' << formatDouble(t.at(i, j)) << '\n';
}

inline TauTable readTauTable(std::istream& in) {
    detail::expectHeader(in, kTauHeader);
    struct Entry {
        std::size_t i, j;
        double v;
    };
    std::vector<Entry> entries;
    std::optional<std::size_t> declared;
    std::size_t n = 0;
    detail::readBody(
        in,
        [&](const std::vector<std::string>& f) {
            if (f.size() != 3) throw ParseError("tau line needs 'i j tau'");
            Entry e{parseIndex(f[0]), parseIndex(f[1]), parseDouble(f[2])};
            if (!(e.v >= 0)) throw ParseError("negative time separation");
            n = std::max({n, e.i + 1, e.j + 1});
            entries.push_back(e);
        },
        [&](std::size_t k) { declared = k; });
    if (declared) {
        if (*declared < n) throw ParseError("#nodes smaller than the largest node id");
        n = *declared;
    }
    TauTable t(n);
    for (const Entry& e : entries) t.set(e.i, e.j, e.v);
    return t;
}

}  // namespace lorcal
