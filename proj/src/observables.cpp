#include "ness/observables.hpp"

#include <cmath>

namespace ness {

namespace {

std::string edge_name(int i, int j) {
    return std::to_string(i + 1) + "->" + std::to_string(j + 1);
}

EntropyProduction entropy_of_fluxes(const MarkovProcess& p, const FluxField& f,
                                    std::span<const double> dist) {
    const int n = p.n_states();
    double sys = 0.0, med = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double fwd = f(i, j), bwd = f(j, i);
            if (fwd == 0.0 && bwd == 0.0) continue;
            if (fwd == 0.0 || bwd == 0.0)
                throw ValidationError("entropy production diverges: one-sided flux on edge " +
                                      (fwd > 0.0 ? edge_name(i, j) : edge_name(j, i)));
            const double current = fwd - bwd;
            sys += current * std::log(dist[i] / dist[j]);
            med += current * std::log(p.rate(i, j) / p.rate(j, i));
        }
    }
    // total = system + medium holds exactly; the pair sums above already
    // count each unordered pair once, matching the (1/2) sum over ordered pairs.
    return {sys + med, sys, med};
}

}  // namespace

EdgeObservable EdgeObservable::zeros(int n) {
    EdgeObservable f;
    f.n = n;
    f.values.assign(std::size_t(n) * n, 0.0);
    return f;
}

EdgeObservable EdgeObservable::edge_indicator(int n, int i, int j) {
    EdgeObservable f = zeros(n);
    f.at(i, j) = 1.0;
    return f;
}

double cycle_observable(const EdgeObservable& f, const Cycle& c) {
    double s = 0.0;
    for (auto [u, v] : c.edges()) s += f(u, v);
    return s;
}

double cycle_average(const CycleDecomposition& d,
                     std::span<const std::optional<double>> f_per_cycle) {
    if (f_per_cycle.size() != d.catalog.size())
        throw ValidationError("cycle observable values must align with the catalog");
    double s = 0.0;
    for (std::size_t k = 0; k < d.catalog.size(); ++k) {
        if (d.weights[k] == 0.0) continue;
        if (!f_per_cycle[k].has_value())
            throw ValidationError("observable undefined on weighted cycle " +
                                  d.catalog.cycles[k].render());
        s += d.weights[k] * *f_per_cycle[k];
    }
    return s;
}

double flux_average(const MarkovProcess& p, const EdgeObservable& f) {
    const FluxField phi = steady_fluxes(p);
    double s = 0.0;
    for (int i = 0; i < phi.n; ++i)
        for (int j = 0; j < phi.n; ++j)
            if (j != i) s += f(i, j) * phi(i, j);
    return s;
}

ThermoEdgeQuantities thermo_quantities(const MarkovProcess& p) {
    const int n = p.n_states();
    const auto p_star = stationary_distribution(p);
    const FluxField phi = instantaneous_fluxes(p, p_star);

    ThermoEdgeQuantities t;
    t.n = n;
    t.potential.resize(n);
    for (int i = 0; i < n; ++i) t.potential[i] = -std::log(p_star[i]);

    t.current.assign(std::size_t(n) * n, 0.0);
    t.voltage.assign(std::size_t(n) * n, std::nullopt);
    t.affinity.assign(std::size_t(n) * n, std::nullopt);
    t.emf.assign(std::size_t(n) * n, std::nullopt);
    t.resistance.assign(std::size_t(n) * n, std::nullopt);

    // Fill the upper triangle and mirror with a sign flip, so the
    // antisymmetry of I, A, U, E and the symmetry of R hold exactly.
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const std::size_t up = std::size_t(i) * n + j;
            const std::size_t lo = std::size_t(j) * n + i;
            const double current = phi(i, j) - phi(j, i);
            t.current[up] = current;
            t.current[lo] = -current;
            const bool fwd = p.rate(i, j) > 0.0, bwd = p.rate(j, i) > 0.0;
            if (!fwd && !bwd) continue;
            // The voltage only needs the probabilities, so any supported pair
            // carries it; the ratio quantities need both directions.
            const double u = std::log(p_star[i] / p_star[j]);
            t.voltage[up] = u;
            t.voltage[lo] = -u;
            if (fwd && bwd) {
                const double a = std::log(phi(i, j) / phi(j, i));
                const double e = std::log(p.rate(i, j) / p.rate(j, i));
                t.affinity[up] = a;
                t.affinity[lo] = -a;
                t.emf[up] = e;
                t.emf[lo] = -e;
                if (current != 0.0) {
                    t.resistance[up] = a / current;
                    t.resistance[lo] = a / current;
                }
            }
        }
    }
    return t;
}

EntropyProduction entropy_production(const MarkovProcess& p) {
    const auto p_star = stationary_distribution(p);
    return entropy_of_fluxes(p, instantaneous_fluxes(p, p_star), p_star);
}

EntropyProduction entropy_production(const MarkovProcess& p, std::span<const double> dist) {
    return entropy_of_fluxes(p, instantaneous_fluxes(p, dist), dist);
}

double entropy_production_cycles(const CycleDecomposition& d, const MarkovProcess& p) {
    const ThermoEdgeQuantities t = thermo_quantities(p);
    double s = 0.0;
    for (std::size_t k = 0; k < d.catalog.size(); ++k) {
        if (d.weights[k] == 0.0) continue;
        double a_cycle = 0.0;
        for (auto [u, v] : d.catalog.cycles[k].edges()) {
            const auto& a = t.affinity_at(u, v);
            if (!a.has_value())
                throw ValidationError("entropy production diverges: one-sided flux on edge " +
                                      edge_name(u, v));
            a_cycle += *a;
        }
        s += d.weights[k] * a_cycle;
    }
    return s;
}

}  // namespace ness
