#include "ness/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "linsolve.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ness {

namespace {

// Uniform double in the open interval (0,1) from the top 53 bits; the low
// bit is forced so neither endpoint can occur (log stays finite, waiting
// times stay positive).
double open_unit(std::mt19937_64& rng) {
    return double((rng() >> 11) | 1ULL) * 0x1.0p-53;
}

std::uint64_t replica_seed(std::uint64_t base, int replica) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (std::uint64_t(replica) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct Walker {
    const MarkovProcess& p;
    std::mt19937_64 rng;
    int state = 0;
    double time = 0.0;

    Walker(const MarkovProcess& proc, std::uint64_t seed) : p(proc), rng(seed) {}

    Event step() {
        const int n = p.n_states();
        Event e;
        e.from = state;
        if (p.time_kind() == TimeKind::continuous) {
            const double exit = p.exit_rate(state);
            time += -std::log(open_unit(rng)) / exit;
            double pick = open_unit(rng) * exit;
            int next = state;
            for (int j = 0; j < n; ++j) {
                if (j == state) continue;
                const double w = p.rate(state, j);
                if (w <= 0.0) continue;
                next = j;
                pick -= w;
                if (pick <= 0.0) break;
            }
            state = next;
        } else {
            time += 1.0;
            double pick = open_unit(rng);
            int next = state;
            pick -= p.loop(state);
            if (pick > 0.0) {
                for (int j = 0; j < n; ++j) {
                    if (j == state) continue;
                    const double a = p.rate(state, j);
                    if (a <= 0.0) continue;
                    next = j;
                    pick -= a;
                    if (pick <= 0.0) break;
                }
            }
            state = next;
        }
        e.time = time;
        e.to = state;
        return e;
    }
};

}  // namespace

Trajectory simulate_events(const MarkovProcess& p, long long n_events, std::uint64_t seed) {
    Trajectory t;
    t.n_states = p.n_states();
    t.time_kind = p.time_kind();
    t.seed = seed;
    t.events.reserve(std::size_t(std::max<long long>(n_events, 0)));
    Walker w(p, seed);
    for (long long k = 0; k < n_events; ++k) t.events.push_back(w.step());
    t.total_time = w.time;
    return t;
}

Trajectory simulate_time(const MarkovProcess& p, double t_max, std::uint64_t seed) {
    Trajectory t;
    t.n_states = p.n_states();
    t.time_kind = p.time_kind();
    t.seed = seed;
    Walker w(p, seed);
    while (true) {
        const Event e = w.step();
        if (e.time > t_max) break;
        t.events.push_back(e);
    }
    t.total_time = t_max;
    return t;
}

std::vector<Trajectory> simulate_replicas(const MarkovProcess& p, long long n_events,
                                          std::uint64_t seed, int n_replicas, int threads) {
    std::vector<Trajectory> out(static_cast<std::size_t>(n_replicas));
#ifdef _OPENMP
    const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(team)
    for (int r = 0; r < n_replicas; ++r)
        out[std::size_t(r)] = simulate_events(p, n_events, replica_seed(seed, r));
#else
    (void)threads;
    for (int r = 0; r < n_replicas; ++r)
        out[std::size_t(r)] = simulate_events(p, n_events, replica_seed(seed, r));
#endif
    return out;
}

FluxField empirical_fluxes(const Trajectory& t) {
    if (!(t.total_time > 0.0))
        throw ValidationError("flux estimate needs a trajectory of positive duration");
    FluxField f = FluxField::zeros(t.n_states, t.time_kind == TimeKind::discrete);
    for (const Event& e : t.events) {
        if (e.from == e.to)
            f.loops[e.from] += 1.0;
        else
            f.at(e.from, e.to) += 1.0;
    }
    for (double& v : f.phi) v /= t.total_time;
    for (double& v : f.loops) v /= t.total_time;
    return f;
}

std::vector<double> occupation_fractions(const Trajectory& t) {
    std::vector<double> occ(std::size_t(t.n_states), 0.0);
    if (t.time_kind == TimeKind::discrete) {
        for (const Event& e : t.events) occ[std::size_t(e.from)] += 1.0;
        for (double& v : occ) v /= double(t.events.size());
        return occ;
    }
    double prev = 0.0;
    for (const Event& e : t.events) {
        occ[std::size_t(e.from)] += e.time - prev;
        prev = e.time;
    }
    for (double& v : occ) v /= prev > 0.0 ? prev : 1.0;
    return occ;
}

FluxField project_onto_balanced(const FluxField& f) {
    const int n = f.n;
    // Solve L*lambda = divergence, where L is the Laplacian of the positive
    // support; the corrected flux is phi - (lambda_u - lambda_v) per edge.
    // One lambda is gauged to zero (L has the constant nullspace).
    std::vector<double> lap(std::size_t(n) * n, 0.0);
    std::vector<double> rhs(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i || !(f(i, j) > 0.0)) continue;
            lap[std::size_t(i) * n + i] += 1.0;
            lap[std::size_t(j) * n + j] += 1.0;
            lap[std::size_t(i) * n + j] -= 1.0;
            lap[std::size_t(j) * n + i] -= 1.0;
            rhs[i] += f(i, j);
            rhs[j] -= f(i, j);
        }
    }
    for (int j = 0; j < n; ++j) lap[std::size_t(n - 1) * n + j] = 0.0;
    lap[std::size_t(n - 1) * n + (n - 1)] = 1.0;
    rhs[n - 1] = 0.0;

    if (!detail::solve_dense(lap, rhs, n))
        throw NumericalError("balancing projection failed: support graph "
                             "is not connected", std::numeric_limits<double>::infinity());

    FluxField out = f;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i || !(f(i, j) > 0.0)) continue;
            const double corrected = f(i, j) - (rhs[i] - rhs[j]);
            if (corrected < 0.0)
                throw ValidationError("balancing projection would make flux " +
                                      std::to_string(i + 1) + "->" + std::to_string(j + 1) +
                                      " negative; the trajectory is too short");
            out.at(i, j) = corrected;
        }
    }
    return out;
}

}  // namespace ness
