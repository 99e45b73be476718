#pragma once

#include <cstddef>
#include <vector>

#include "ness/decompose.hpp"
#include "ness/markov.hpp"

namespace ness {

// Dual graph over the cycles with positive weight. Two cycles are connected
// when they share at least one state of the original chain; the exchange
// rates b and fluxes psi describe the stationary ticket exchange between
// them, and psi is symmetric: detailed balance holds on this graph even when
// the underlying chain is driven.
struct CycleGraph {
    std::vector<std::size_t> node_cycle;  // catalog index per node
    std::vector<double> m;                // node weights m*_alpha > 0
    std::vector<double> tau;              // mean cycle periods
    std::vector<double> b;                // k*k exchange rates, 0 off the edge set
    std::vector<double> psi;              // k*k exchange fluxes, symmetric
    double mtau_expected = 1.0;           // target for sum m*tau (see build_cycle_graph)

    int size() const { return int(node_cycle.size()); }
    bool has_edge(int a, int c) const { return b[std::size_t(a) * size() + c] > 0.0; }
    double b_at(int a, int c) const { return b[std::size_t(a) * size() + c]; }
    double psi_at(int a, int c) const { return psi[std::size_t(a) * size() + c]; }
};

// Builds the dual graph for a decomposition of the process's steady fluxes.
// Continuous time supplies the waiting times; a discrete chain counts one
// step per visit, which makes sum(m*tau) equal one minus the loop flux
// rather than one — mtau_expected records the applicable target.
// Throws ValidationError when some state carries flux but no cycle weight
// (the decomposition does not belong to this process), NumericalError when
// psi comes out asymmetric beyond kLinearTol.
CycleGraph build_cycle_graph(const CycleDecomposition& d, const MarkovProcess& p);

// Boltzmann form of the weights: m*_alpha = exp(-H_alpha)/Z. The gauge Z = 1
// makes H_alpha = -ln m*_alpha; the partition identity then holds through
// the normalization sum(m*tau) = mtau_expected, which is verified, as is the
// gauge-free ratio H_beta - H_alpha = -ln(b^a_b / b^b_a) on every edge.
struct CyclePotential {
    std::vector<double> h;  // per node of the cycle graph
    double z = 1.0;
};

CyclePotential cycle_potential(const CycleGraph& g, const CycleDecomposition& d);

}  // namespace ness
