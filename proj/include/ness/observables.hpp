#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ness/decompose.hpp"
#include "ness/markov.hpp"

namespace ness {

// A per-transition observable: the change of some physical quantity when the
// system jumps from i to j.
struct EdgeObservable {
    int n = 0;
    std::vector<double> values;  // n*n row-major, diagonal unused
    bool antisymmetric = false;

    static EdgeObservable zeros(int n);
    double operator()(int i, int j) const { return values[std::size_t(i) * n + j]; }
    double& at(int i, int j) { return values[std::size_t(i) * n + j]; }

    // Single-edge passage indicator (F = 1 on edge (i,j), 0 elsewhere).
    static EdgeObservable edge_indicator(int n, int i, int j);
};

// Integrated contribution of F along a cycle: sum of F^i_j over its edges.
double cycle_observable(const EdgeObservable& f, const Cycle& c);

// Weighted cycle-space average sum_alpha m*_alpha F_alpha. The values are
// catalog-aligned; a missing value on a cycle with positive weight is a
// domain error.
double cycle_average(const CycleDecomposition& d,
                     std::span<const std::optional<double>> f_per_cycle);

// Steady-state flux average J*_F = sum_{i != j} F^i_j phi^i_j.
double flux_average(const MarkovProcess& p, const EdgeObservable& f);

// Per-edge thermodynamic / electric quantities of the steady state.
// Quantities that need both transition directions carry std::nullopt on
// unidirectional or absent edges so that downstream sums fail loudly rather
// than silently propagating infinities.
struct ThermoEdgeQuantities {
    int n = 0;
    std::vector<double> potential;                  // V_i = -ln p*_i
    std::vector<double> current;                    // I^i_j, antisymmetric, everywhere
    std::vector<std::optional<double>> voltage;     // U^i_j = ln(p_i/p_j), on supported pairs
    std::vector<std::optional<double>> affinity;    // A^i_j = ln(phi^i_j/phi^j_i)
    std::vector<std::optional<double>> emf;         // E^i_j = ln(w^i_j/w^j_i)
    std::vector<std::optional<double>> resistance;  // R^i_j = A^i_j / I^i_j

    double current_at(int i, int j) const { return current[std::size_t(i) * n + j]; }
    const std::optional<double>& voltage_at(int i, int j) const {
        return voltage[std::size_t(i) * n + j];
    }
    const std::optional<double>& affinity_at(int i, int j) const {
        return affinity[std::size_t(i) * n + j];
    }
    const std::optional<double>& emf_at(int i, int j) const {
        return emf[std::size_t(i) * n + j];
    }
    const std::optional<double>& resistance_at(int i, int j) const {
        return resistance[std::size_t(i) * n + j];
    }
};

ThermoEdgeQuantities thermo_quantities(const MarkovProcess& p);

struct EntropyProduction {
    double total = 0.0;   // (1/2) sum A^i_j I^i_j >= 0
    double system = 0.0;  // (1/2) sum U^i_j I^i_j, rate of Gibbs entropy change
    double medium = 0.0;  // (1/2) sum I^i_j ln(w^i_j / w^j_i), flux into the medium
};

// Entropy production at the steady state, or at an arbitrary distribution.
// total = system + medium holds exactly by construction; system vanishes at
// the steady state. Throws ValidationError naming the edge when a one-sided
// flux makes the production divergent (unidirectional transition, or a
// zero-probability state feeding a positive flux).
EntropyProduction entropy_production(const MarkovProcess& p);
EntropyProduction entropy_production(const MarkovProcess& p, std::span<const double> dist);

// Steady entropy production as a cycle average of the integrated affinities:
// sum_alpha m*_alpha A_alpha. Equal to entropy_production(p).total for every
// decomposition of the same process.
double entropy_production_cycles(const CycleDecomposition& d, const MarkovProcess& p);

}  // namespace ness
