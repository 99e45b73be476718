#pragma once

#include <string>

#include "json.hpp"

#include "ness/cycle_graph.hpp"
#include "ness/cycles.hpp"
#include "ness/decompose.hpp"
#include "ness/markov.hpp"
#include "ness/observables.hpp"
#include "ness/simulate.hpp"
#include "ness/tasep.hpp"

namespace ness {

// All file formats are 1-based.
//
// Model:         { "time": "continuous"|"discrete", "n": int,
//                  "edges": [[i, j, rate], ...], "loops": [[i, p], ...] }
// Flux field:    { "n": int, "edges": [[i, j, phi], ...], "loops": [[i, phi], ...] }
// Catalog:       [[1,3,6,4], ...]
// Decomposition: { "cycles": [{"cycle": [...], "weight": w}, ...],
//                  "ordering": [...], "support": int }
// Cycle graph:   { "nodes": [{"cycle", "m", "tau", "H"}, ...],
//                  "edges": [{"a", "b", "b_ab", "b_ba", "psi"}, ...], "Z": 1 }

MarkovProcess parse_model(const nlohmann::json& j);
MarkovProcess read_model(const std::string& path);
nlohmann::json model_to_json(const MarkovProcess& p);

nlohmann::json flux_to_json(const FluxField& f);
FluxField flux_from_json(const nlohmann::json& j);

nlohmann::json cycle_to_json(const Cycle& c);
Cycle cycle_from_json(const nlohmann::json& j);
nlohmann::json catalog_to_json(const CycleCatalog& catalog);

nlohmann::json decomposition_to_json(const CycleDecomposition& d);
nlohmann::json cycle_graph_to_json(const CycleGraph& g, const CycleDecomposition& d,
                                   const CyclePotential& pot);

// CSV renderings. Undefined thermodynamic entries print as "NA".
std::string thermo_csv(const ThermoEdgeQuantities& t, const MarkovProcess& p);
std::string trajectory_csv(const Trajectory& t);
std::string sweep_csv(std::span<const TasepSweepRow> rows);

// Fixed-width numeric formatting with 12 significant digits.
std::string format_num(double v);

// FNV-1a digest of a file's bytes, for echoing inputs in reports.
std::string file_digest(const std::string& path);

}  // namespace ness
