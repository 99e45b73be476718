// Command-line front end: steady states, cycle decompositions, the dual
// cycle graph, thermodynamic reports, kinetic Monte Carlo runs and the
// TASEP parameter sweep, all file based and reproducible.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ness/cycle_graph.hpp"
#include "ness/cycles.hpp"
#include "ness/decompose.hpp"
#include "ness/markov.hpp"
#include "ness/model_io.hpp"
#include "ness/observables.hpp"
#include "ness/simulate.hpp"
#include "ness/tasep.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

constexpr const char* kVersion = "ness 0.1.0";

using ness::format_num;

struct GlobalOptions {
    int threads = 0;
};

void apply_threads(const GlobalOptions& g) {
    int t = g.threads;
    if (t == 0) {
        if (const char* env = std::getenv("NESS_THREADS")) t = std::atoi(env);
    }
#ifdef _OPENMP
    if (t > 0) omp_set_num_threads(t);
#else
    (void)t;
#endif
}

void print_header(const std::string& command_echo, const std::string& input,
                  std::optional<std::uint64_t> seed = std::nullopt) {
    std::cout << "# " << kVersion << "\n";
    std::cout << "# command: " << command_echo << "\n";
    if (!input.empty())
        std::cout << "# input: " << input << " fnv1a=" << ness::file_digest(input) << "\n";
    if (seed) std::cout << "# seed: " << *seed << "\n";
}

ness::MarkovProcess load_valid_model(const std::string& path) {
    ness::MarkovProcess p = ness::read_model(path);
    const auto violations = ness::validate_process(p);
    if (!violations.empty()) {
        std::string msg = "invalid model " + path + ":";
        for (const auto& v : violations) msg += "\n  " + v;
        throw ness::ValidationError(msg);
    }
    return p;
}

void write_or_print(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        std::ofstream out(out_path);
        if (!out) throw ness::Error("cannot write " + out_path);
        out << content;
    }
}

int cmd_steady(const GlobalOptions&, const std::string& model_path,
               const std::string& json_out) {
    const auto p = load_valid_model(model_path);
    print_header("steady " + model_path, model_path);

    const auto p_star = ness::stationary_distribution(p);
    const auto fluxes = ness::steady_fluxes(p);
    const auto db = ness::is_detailed_balanced(p);

    std::cout << "states: " << p.n_states() << " ("
              << (p.time_kind() == ness::TimeKind::continuous ? "continuous" : "discrete")
              << " time)\n";
    std::cout << "p*:\n";
    for (int i = 0; i < p.n_states(); ++i)
        std::cout << "  " << (i + 1) << "  " << format_num(p_star[i]) << "\n";
    std::cout << "steady fluxes:\n";
    for (int i = 0; i < fluxes.n; ++i)
        for (int j = 0; j < fluxes.n; ++j)
            if (i != j && fluxes(i, j) > 0.0)
                std::cout << "  " << (i + 1) << "->" << (j + 1) << "  "
                          << format_num(fluxes(i, j)) << "\n";
    if (!fluxes.loops.empty()) {
        std::cout << "loop fluxes:\n";
        for (int i = 0; i < fluxes.n; ++i)
            if (fluxes.loops[i] > 0.0)
                std::cout << "  " << (i + 1) << "  " << format_num(fluxes.loops[i]) << "\n";
    }
    std::cout << "detailed_balance: " << (db.balanced ? "yes" : "no")
              << " (max |I| = " << format_num(db.max_current) << ")\n";
    std::cout << "dynamically_reversible: "
              << (ness::is_dynamically_reversible(p) ? "yes" : "no") << "\n";

    if (!json_out.empty()) {
        nlohmann::json j;
        j["meta"] = {{"tool", kVersion}, {"input", ness::file_digest(model_path)}};
        j["p_star"] = p_star;
        j["fluxes"] = ness::flux_to_json(fluxes);
        write_or_print(json_out, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_decompose(const GlobalOptions& g, const std::string& model_path,
                  const std::string& ordering, bool split_two_cycles,
                  long long samples, std::uint64_t sample_seed,
                  const std::string& out_path) {
    const auto p = load_valid_model(model_path);
    print_header("decompose " + model_path + " --ordering " + ordering, model_path,
                 samples > 0 ? std::optional<std::uint64_t>(sample_seed) : std::nullopt);

    const auto fluxes = ness::steady_fluxes(p);
    const auto catalog = ness::enumerate_cycles(ness::Digraph::support_of(p));
    std::cout << "cycles: " << catalog.size() << "\n";

    const auto print_decomposition = [&](const ness::CycleDecomposition& d) {
        std::cout << "  cycle              weight\n";
        for (std::size_t k = 0; k < d.catalog.size(); ++k)
            std::cout << "  " << d.catalog.cycles[k].render() << "    "
                      << format_num(d.weights[k]) << "\n";
        std::cout << "  support: " << d.support() << "\n";
    };

    nlohmann::json out_json;
    out_json["meta"] = {{"tool", kVersion},
                        {"input", ness::file_digest(model_path)},
                        {"ordering", ordering}};
    out_json["catalog"] = ness::catalog_to_json(catalog);

    if (split_two_cycles) {
        const auto split = ness::db_current_split(fluxes, catalog);
        std::cout << "detailed-balance part (2-cycles):\n";
        print_decomposition(split.two_cycle_part);
        std::cout << "current part:\n";
        print_decomposition(split.current_part);
        out_json["two_cycle_part"] = ness::decomposition_to_json(split.two_cycle_part);
        out_json["current_part"] = ness::decomposition_to_json(split.current_part);
    } else if (samples > 0) {
        apply_threads(g);
        const auto res = ness::sample_decompositions(fluxes, catalog, samples, sample_seed);
        std::cout << res.distinct.size() << " distinct decompositions (lower bound from "
                  << res.orderings_tried << " sampled orderings)\n";
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t i = 0; i < res.distinct.size(); ++i) {
            std::cout << "decomposition " << (i + 1) << ":\n";
            print_decomposition(res.distinct[i]);
            arr.push_back(ness::decomposition_to_json(res.distinct[i]));
        }
        out_json["decompositions"] = std::move(arr);
        out_json["meta"]["sampled"] = samples;
        out_json["meta"]["seed"] = sample_seed;
    } else if (ordering == "all") {
        apply_threads(g);
        const auto res = ness::enumerate_decompositions(fluxes, catalog);
        std::cout << res.distinct.size() << " distinct decompositions ("
                  << (res.exhaustive ? "exhaustive over " : "lower bound from ")
                  << res.orderings_tried << " orderings)\n";
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t i = 0; i < res.distinct.size(); ++i) {
            std::cout << "decomposition " << (i + 1) << ":\n";
            print_decomposition(res.distinct[i]);
            arr.push_back(ness::decomposition_to_json(res.distinct[i]));
        }
        out_json["decompositions"] = std::move(arr);
    } else if (ordering == "default") {
        const auto d = ness::decompose(fluxes, catalog);
        print_decomposition(d);
        out_json["decomposition"] = ness::decomposition_to_json(d);
    } else {
        // anything else names a file holding a JSON array of cycles in the
        // desired order
        std::ifstream in(ordering);
        if (!in) throw ness::ParseError("cannot open ordering file " + ordering);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::parse_error& e) {
            throw ness::ParseError("ordering file " + ordering + ": " + e.what());
        }
        if (!j.is_array())
            throw ness::ParseError("ordering file must hold a JSON array of cycles");
        std::vector<int> ord;
        for (const auto& cj : j) {
            const auto idx = catalog.index_of(ness::cycle_from_json(cj));
            if (!idx)
                throw ness::ValidationError("ordering entry " + cj.dump() +
                                            " is not a cycle of this model");
            ord.push_back(int(*idx));
        }
        const auto d = ness::decompose(fluxes, catalog, ord);
        print_decomposition(d);
        out_json["decomposition"] = ness::decomposition_to_json(d);
    }

    if (!out_path.empty()) write_or_print(out_path, out_json.dump(2) + "\n");
    return 0;
}

int cmd_transform(const GlobalOptions&, const std::string& model_path,
                  const std::string& out_path) {
    const auto p = load_valid_model(model_path);
    print_header("transform " + model_path, model_path);

    const auto fluxes = ness::steady_fluxes(p);
    const auto catalog = ness::enumerate_cycles(ness::Digraph::support_of(p));
    const auto d = ness::decompose(fluxes, catalog);
    const auto graph = ness::build_cycle_graph(d, p);
    const auto pot = ness::cycle_potential(graph, d);

    std::cout << "cycle graph: " << graph.size() << " nodes\n";
    for (int a = 0; a < graph.size(); ++a)
        std::cout << "  " << d.catalog.cycles[graph.node_cycle[a]].render()
                  << "  m=" << format_num(graph.m[a]) << "  tau=" << format_num(graph.tau[a])
                  << "  H=" << format_num(pot.h[a]) << "\n";
    for (int a = 0; a < graph.size(); ++a)
        for (int c = a + 1; c < graph.size(); ++c)
            if (graph.has_edge(a, c))
                std::cout << "  psi(" << d.catalog.cycles[graph.node_cycle[a]].render() << ", "
                          << d.catalog.cycles[graph.node_cycle[c]].render()
                          << ") = " << format_num(graph.psi_at(a, c)) << "\n";

    nlohmann::json j = ness::cycle_graph_to_json(graph, d, pot);
    j["meta"] = {{"tool", kVersion}, {"input", ness::file_digest(model_path)}};
    if (!out_path.empty()) write_or_print(out_path, j.dump(2) + "\n");
    return 0;
}

int cmd_thermo(const GlobalOptions&, const std::string& model_path,
               const std::string& out_path) {
    const auto p = load_valid_model(model_path);
    print_header("thermo " + model_path, model_path);

    const auto t = ness::thermo_quantities(p);
    write_or_print(out_path, ness::thermo_csv(t, p));

    try {
        const auto ep = ness::entropy_production(p);
        std::cout << "P_tot " << format_num(ep.total) << "\n";
        std::cout << "P_sys " << format_num(ep.system) << "\n";
        std::cout << "P_med " << format_num(ep.medium) << "\n";
    } catch (const ness::ValidationError& e) {
        std::cout << "entropy production undefined: " << e.what() << "\n";
    }
    return 0;
}

int cmd_simulate(const GlobalOptions&, const std::string& model_path, std::uint64_t seed,
                 long long events, double sim_time, const std::string& traj_out,
                 const std::string& flux_out, bool project) {
    const auto p = load_valid_model(model_path);
    print_header("simulate " + model_path, model_path, seed);

    ness::Trajectory traj;
    if (events > 0)
        traj = ness::simulate_events(p, events, seed);
    else if (sim_time > 0.0)
        traj = ness::simulate_time(p, sim_time, seed);
    else
        throw ness::ValidationError("simulate needs --events or --time");

    std::cout << "events: " << traj.events.size() << "\n";
    std::cout << "total_time: " << format_num(traj.total_time) << "\n";
    const auto occ = ness::occupation_fractions(traj);
    std::cout << "occupation fractions:\n";
    for (int i = 0; i < traj.n_states; ++i)
        std::cout << "  " << (i + 1) << "  " << format_num(occ[std::size_t(i)]) << "\n";

    if (!traj_out.empty()) write_or_print(traj_out, ness::trajectory_csv(traj));

    auto fluxes = ness::empirical_fluxes(traj);
    if (project) fluxes = ness::project_onto_balanced(fluxes);
    if (!flux_out.empty()) {
        nlohmann::json j = ness::flux_to_json(fluxes);
        j["meta"] = {{"tool", kVersion},
                     {"seed", seed},
                     {"projected", project},
                     {"estimator", "event counts / total time"}};
        write_or_print(flux_out, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_tasep_sweep(const GlobalOptions& g, double x_min, double x_max, int points,
                    const std::string& pin, const std::string& out_path) {
    apply_threads(g);
    print_header("tasep-sweep", "");
    if (!(x_min > 0.0) || !(x_max >= x_min) || points < 1)
        throw ness::ValidationError("need 0 < x-min <= x-max and points >= 1");

    // Pinned cycle by gait name or as a 1-based vertex list "1,3,6,4".
    std::optional<ness::Cycle> pinned;
    const auto& names = ness::tasep_cycle_names();
    for (std::size_t k = 0; k < 4; ++k)
        if (pin == names[k]) pinned = ness::tasep_cycles()[k];
    if (!pinned) {
        std::vector<int> verts;
        std::stringstream ss(pin);
        std::string tok;
        while (std::getline(ss, tok, ',')) verts.push_back(std::atoi(tok.c_str()) - 1);
        if (verts.size() < 2)
            throw ness::ValidationError("--pin needs a gait name or a vertex list like 1,3,6,4");
        pinned = ness::Cycle(std::move(verts));
    }

    std::vector<double> xs(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k)
        xs[std::size_t(k)] =
            points == 1 ? x_min : x_min + (x_max - x_min) * double(k) / double(points - 1);

    const auto rows = ness::tasep_sweep(xs, *pinned);
    write_or_print(out_path, ness::sweep_csv(rows));

    if (x_min < 1.0 && x_max > 1.0) {
        const auto kink = ness::tasep_kink(*pinned);
        std::cout << "# kink at x=1: slope_left=" << format_num(kink.slope_left)
                  << " slope_right=" << format_num(kink.slope_right)
                  << " jump=" << format_num(kink.jump) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cycle decomposition of Markov steady states"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--threads", global.threads,
                   "OpenMP thread count for parallel commands (env NESS_THREADS)");

    std::string model_path, out_path, json_out;
    std::string ordering = "default";
    bool split2 = false;

    auto* steady = app.add_subcommand("steady", "Stationary distribution and fluxes");
    steady->add_option("model", model_path, "model JSON file")->required();
    steady->add_option("--json", json_out, "also write results as JSON");

    long long samples = 0;
    std::uint64_t sample_seed = 1;
    auto* decomp = app.add_subcommand("decompose", "Cycle decomposition of the steady fluxes");
    decomp->add_option("model", model_path, "model JSON file")->required();
    decomp->add_option("--ordering", ordering,
                       "'default', 'all' (every ordering), or a JSON cycle-list file");
    decomp->add_flag("--split-2cycles", split2,
                     "split off the detailed-balance part carried by the 2-cycles");
    decomp->add_option("--sample", samples,
                       "try this many random orderings instead (for large catalogs)");
    decomp->add_option("--sample-seed", sample_seed, "seed for the sampled orderings");
    decomp->add_option("--out", out_path, "write decomposition JSON");

    auto* transform = app.add_subcommand("transform", "Cycle graph with exchange rates");
    transform->add_option("model", model_path, "model JSON file")->required();
    transform->add_option("--out", out_path, "write cycle graph JSON");

    auto* thermo = app.add_subcommand("thermo", "Per-edge thermodynamics and entropy");
    thermo->add_option("model", model_path, "model JSON file")->required();
    thermo->add_option("--out", out_path, "write CSV here instead of stdout");

    std::uint64_t seed = 0;
    long long events = 0;
    double sim_time = 0.0;
    std::string flux_out;
    bool project = false;
    auto* simulate = app.add_subcommand("simulate", "Kinetic Monte Carlo trajectory");
    simulate->add_option("model", model_path, "model JSON file")->required();
    simulate->add_option("--seed", seed, "RNG seed (runs are reproducible per seed)")
        ->required();
    simulate->add_option("--events", events, "stop after this many jumps");
    simulate->add_option("--time", sim_time, "stop after this much time");
    simulate->add_option("--out", out_path, "trajectory CSV output");
    simulate->add_option("--fluxes", flux_out, "empirical flux JSON output");
    simulate->add_flag("--project", project,
                       "project the flux estimate onto the balanced subspace");

    double x_min = 0.1, x_max = 10.0;
    int points = 50;
    std::string pin = "alpha";
    auto* sweep = app.add_subcommand("tasep-sweep",
                                     "Decomposition weights of the TASEP ring across x");
    sweep->add_option("--x-min", x_min, "lowest x")->required();
    sweep->add_option("--x-max", x_max, "highest x")->required();
    sweep->add_option("--points", points, "number of sweep points")->required();
    sweep->add_option("--pin", pin, "cycle fixed first in the ordering (gait name or list)");
    sweep->add_option("--out", out_path, "CSV output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return 2;
    }

    try {
        if (steady->parsed()) return cmd_steady(global, model_path, json_out);
        if (decomp->parsed())
            return cmd_decompose(global, model_path, ordering, split2, samples, sample_seed,
                                 out_path);
        if (transform->parsed()) return cmd_transform(global, model_path, out_path);
        if (thermo->parsed()) return cmd_thermo(global, model_path, out_path);
        if (simulate->parsed())
            return cmd_simulate(global, model_path, seed, events, sim_time, out_path,
                                flux_out, project);
        if (sweep->parsed())
            return cmd_tasep_sweep(global, x_min, x_max, points, pin, out_path);
    } catch (const ness::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ness::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ness::CapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const ness::NumericalError& e) {
        std::cerr << "error: " << e.what() << " (residual " << e.residual << ")\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
