#include "ness/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ness {

using nlohmann::json;

namespace {

int state_index(const json& v, int n) {
    if (!v.is_number_integer())
        throw ParseError("state index must be an integer, got " + v.dump());
    const int i = v.get<int>();
    if (i < 1 || i > n)
        throw ParseError("state index " + std::to_string(i) + " outside 1.." +
                         std::to_string(n));
    return i - 1;
}

}  // namespace

MarkovProcess parse_model(const json& j) {
    if (!j.is_object()) throw ParseError("model must be a JSON object");
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw ParseError("model needs an integer field \"n\"");
    const int n = j["n"].get<int>();
    if (n < 1) throw ParseError("\"n\" must be positive");

    TimeKind kind = TimeKind::continuous;
    if (j.contains("time")) {
        const auto t = j["time"].get<std::string>();
        if (t == "continuous")
            kind = TimeKind::continuous;
        else if (t == "discrete")
            kind = TimeKind::discrete;
        else
            throw ParseError("\"time\" must be \"continuous\" or \"discrete\", got \"" + t + "\"");
    }

    MarkovProcess p(n, kind);
    if (!j.contains("edges") || !j["edges"].is_array())
        throw ParseError("model needs an \"edges\" array");
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 3)
            throw ParseError("each edge must be [i, j, rate], got " + e.dump());
        const int i = state_index(e[0], n), jj = state_index(e[1], n);
        if (!e[2].is_number()) throw ParseError("edge rate must be a number in " + e.dump());
        p.set_rate(i, jj, e[2].get<double>());
    }
    if (j.contains("loops")) {
        if (kind != TimeKind::discrete)
            throw ParseError("\"loops\" are only meaningful for discrete-time models");
        for (const auto& l : j["loops"]) {
            if (!l.is_array() || l.size() != 2)
                throw ParseError("each loop must be [i, p], got " + l.dump());
            p.set_loop(state_index(l[0], n), l[1].get<double>());
        }
    }
    return p;
}

MarkovProcess read_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError("model file " + path + ": " + e.what());
    }
    return parse_model(j);
}

json model_to_json(const MarkovProcess& p) {
    json j;
    j["time"] = p.time_kind() == TimeKind::continuous ? "continuous" : "discrete";
    j["n"] = p.n_states();
    json edges = json::array();
    for (int i = 0; i < p.n_states(); ++i)
        for (int k = 0; k < p.n_states(); ++k)
            if (i != k && p.rate(i, k) > 0.0) edges.push_back({i + 1, k + 1, p.rate(i, k)});
    j["edges"] = std::move(edges);
    if (p.time_kind() == TimeKind::discrete) {
        json loops = json::array();
        for (int i = 0; i < p.n_states(); ++i)
            if (p.loop(i) > 0.0) loops.push_back({i + 1, p.loop(i)});
        j["loops"] = std::move(loops);
    }
    return j;
}

json flux_to_json(const FluxField& f) {
    json j;
    j["n"] = f.n;
    json edges = json::array();
    for (int i = 0; i < f.n; ++i)
        for (int k = 0; k < f.n; ++k)
            if (i != k && f(i, k) > 0.0) edges.push_back({i + 1, k + 1, f(i, k)});
    j["edges"] = std::move(edges);
    if (!f.loops.empty()) {
        json loops = json::array();
        for (int i = 0; i < f.n; ++i)
            if (f.loops[i] > 0.0) loops.push_back({i + 1, f.loops[i]});
        j["loops"] = std::move(loops);
    }
    return j;
}

FluxField flux_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n"))
        throw ParseError("flux field needs an integer field \"n\"");
    const int n = j["n"].get<int>();
    FluxField f = FluxField::zeros(n, j.contains("loops"));
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 3)
            throw ParseError("each flux entry must be [i, j, phi], got " + e.dump());
        f.at(state_index(e[0], n), state_index(e[1], n)) = e[2].get<double>();
    }
    if (j.contains("loops"))
        for (const auto& l : j["loops"]) f.loops[state_index(l[0], n)] = l[1].get<double>();
    return f;
}

json cycle_to_json(const Cycle& c) {
    json arr = json::array();
    for (int v : c.vertices()) arr.push_back(v + 1);
    return arr;
}

Cycle cycle_from_json(const json& j) {
    if (!j.is_array() || j.size() < 2)
        throw ParseError("a cycle must be an array of at least two 1-based states");
    std::vector<int> v;
    for (const auto& x : j) {
        if (!x.is_number_integer() || x.get<int>() < 1)
            throw ParseError("cycle vertices must be 1-based integers, got " + j.dump());
        v.push_back(x.get<int>() - 1);
    }
    return Cycle(std::move(v));
}

json catalog_to_json(const CycleCatalog& catalog) {
    json arr = json::array();
    for (const Cycle& c : catalog.cycles) arr.push_back(cycle_to_json(c));
    return arr;
}

json decomposition_to_json(const CycleDecomposition& d) {
    json j;
    json cycles = json::array();
    for (std::size_t k = 0; k < d.catalog.size(); ++k)
        cycles.push_back({{"cycle", cycle_to_json(d.catalog.cycles[k])},
                          {"weight", d.weights[k]}});
    j["cycles"] = std::move(cycles);
    j["ordering"] = d.ordering;
    j["support"] = d.support();
    return j;
}

json cycle_graph_to_json(const CycleGraph& g, const CycleDecomposition& d,
                         const CyclePotential& pot) {
    json j;
    json nodes = json::array();
    for (int a = 0; a < g.size(); ++a)
        nodes.push_back({{"cycle", cycle_to_json(d.catalog.cycles[g.node_cycle[a]])},
                         {"m", g.m[a]},
                         {"tau", g.tau[a]},
                         {"H", pot.h[a]}});
    j["nodes"] = std::move(nodes);
    json edges = json::array();
    for (int a = 0; a < g.size(); ++a)
        for (int c = a + 1; c < g.size(); ++c)
            if (g.has_edge(a, c))
                edges.push_back({{"a", a},
                                 {"b", c},
                                 {"b_ab", g.b_at(a, c)},
                                 {"b_ba", g.b_at(c, a)},
                                 {"psi", g.psi_at(a, c)}});
    j["edges"] = std::move(edges);
    j["Z"] = pot.z;
    return j;
}

std::string format_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string thermo_csv(const ThermoEdgeQuantities& t, const MarkovProcess& p) {
    std::ostringstream out;
    out << "edge,I,A,U,E,R\n";
    const auto cell = [&](const std::optional<double>& v) {
        return v ? format_num(*v) : std::string("NA");
    };
    for (int i = 0; i < t.n; ++i) {
        for (int j = 0; j < t.n; ++j) {
            if (i == j || !(p.rate(i, j) > 0.0)) continue;
            out << (i + 1) << "->" << (j + 1) << ',' << format_num(t.current_at(i, j)) << ','
                << cell(t.affinity_at(i, j)) << ',' << cell(t.voltage_at(i, j)) << ','
                << cell(t.emf_at(i, j)) << ',' << cell(t.resistance_at(i, j)) << '\n';
        }
    }
    return out.str();
}

std::string trajectory_csv(const Trajectory& t) {
    std::ostringstream out;
    out << "time,from,to\n";
    for (const Event& e : t.events)
        out << format_num(e.time) << ',' << (e.from + 1) << ',' << (e.to + 1) << '\n';
    return out.str();
}

std::string sweep_csv(std::span<const TasepSweepRow> rows) {
    std::ostringstream out;
    out << "x,m_alpha,m_beta,m_gamma,m_delta,"
           "raw_alpha,raw_beta,raw_gamma,raw_delta,support_tag\n";
    for (const auto& r : rows) {
        out << format_num(r.x);
        for (double v : r.scaled) out << ',' << format_num(v);
        for (double v : r.raw) out << ',' << format_num(v);
        out << ',' << r.support << '\n';
    }
    return out.str();
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char c;
    while (in.get(c)) {
        h ^= std::uint64_t(static_cast<unsigned char>(c));
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace ness
