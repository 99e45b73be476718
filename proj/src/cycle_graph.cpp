#include "ness/cycle_graph.hpp"

#include <algorithm>
#include <cmath>

namespace ness {

CycleGraph build_cycle_graph(const CycleDecomposition& d, const MarkovProcess& p) {
    const int n = p.n_states();
    CycleGraph g;
    for (std::size_t k = 0; k < d.catalog.size(); ++k)
        if (d.weights[k] > 0.0) {
            g.node_cycle.push_back(k);
            g.m.push_back(d.weights[k]);
        }
    const int kn = g.size();

    // Vertex coverage: chi_{i,alpha} per node, and the per-station weight sums.
    std::vector<char> covers(std::size_t(kn) * n, 0);
    std::vector<double> denom(n, 0.0);
    for (int a = 0; a < kn; ++a) {
        const Cycle& c = d.catalog.cycles[g.node_cycle[a]];
        for (int i : c.vertices()) {
            covers[std::size_t(a) * n + i] = 1;
            denom[i] += g.m[a];
        }
    }
    for (int i = 0; i < n; ++i) {
        if (denom[i] == 0.0 && p.exit_rate(i) > 0.0)
            throw ValidationError("no cycle weight covers state " + std::to_string(i + 1) +
                                  " although the chain moves through it; the decomposition "
                                  "does not belong to this process");
    }

    g.tau.resize(kn, 0.0);
    for (int a = 0; a < kn; ++a) {
        const Cycle& c = d.catalog.cycles[g.node_cycle[a]];
        double t = 0.0;
        for (int i : c.vertices()) t += p.mean_waiting(i);
        g.tau[a] = t;
    }

    g.b.assign(std::size_t(kn) * kn, 0.0);
    g.psi.assign(std::size_t(kn) * kn, 0.0);
    for (int a = 0; a < kn; ++a) {
        for (int c = 0; c < kn; ++c) {
            if (a == c) continue;
            double shared = 0.0;  // sum over mutual stations of 1/denom_i
            for (int i = 0; i < n; ++i)
                if (covers[std::size_t(a) * n + i] && covers[std::size_t(c) * n + i])
                    shared += 1.0 / denom[i];
            if (shared > 0.0) {
                g.b[std::size_t(a) * kn + c] = g.m[c] * shared;
                g.psi[std::size_t(a) * kn + c] = g.m[a] * g.m[c] * shared;
            }
        }
    }

    double asym = 0.0;
    for (int a = 0; a < kn; ++a)
        for (int c = a + 1; c < kn; ++c)
            asym = std::max(asym, std::fabs(g.psi_at(a, c) - g.psi_at(c, a)));
    if (!(asym <= kLinearTol))
        throw NumericalError("exchange fluxes between cycles lost their symmetry", asym);

    if (p.time_kind() == TimeKind::discrete) {
        // One step per visit: the decomposition only carries the off-diagonal
        // fluxes, so the m*tau sum reproduces 1 minus the loop flux.
        const auto p_star = stationary_distribution(p);
        double loop_flux = 0.0;
        for (int i = 0; i < n; ++i) loop_flux += p_star[i] * p.loop(i);
        g.mtau_expected = 1.0 - loop_flux;
    } else {
        g.mtau_expected = 1.0;
    }
    return g;
}

CyclePotential cycle_potential(const CycleGraph& g, const CycleDecomposition& d) {
    (void)d;
    const int kn = g.size();

    double mtau = 0.0;
    for (int a = 0; a < kn; ++a) mtau += g.m[a] * g.tau[a];
    const double dev = std::fabs(mtau - g.mtau_expected);
    if (!(dev <= kRatioTol))
        throw NumericalError("cycle weights and periods do not normalize "
                             "(upstream inconsistency)", dev);

    CyclePotential pot;
    pot.z = 1.0;
    pot.h.resize(kn);
    for (int a = 0; a < kn; ++a) pot.h[a] = -std::log(g.m[a]);

    // Gauge-free consistency: potential differences must match the exchange
    // rate ratios on every edge of the dual graph.
    for (int a = 0; a < kn; ++a) {
        for (int c = 0; c < kn; ++c) {
            if (a == c || !g.has_edge(a, c)) continue;
            const double lhs = pot.h[c] - pot.h[a];
            const double rhs = -std::log(g.b_at(a, c) / g.b_at(c, a));
            if (std::fabs(lhs - rhs) > kRatioTol)
                throw NumericalError("cycle potential inconsistent with exchange rates",
                                     std::fabs(lhs - rhs));
        }
    }
    return pot;
}

}  // namespace ness
