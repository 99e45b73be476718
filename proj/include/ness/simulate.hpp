#pragma once

#include <cstdint>
#include <vector>

#include "ness/markov.hpp"

namespace ness {

struct Event {
    double time = 0.0;  // absolute time of the jump (step index in discrete time)
    int from = 0;
    int to = 0;
};

struct Trajectory {
    int n_states = 0;
    TimeKind time_kind = TimeKind::continuous;
    std::uint64_t seed = 0;
    double total_time = 0.0;
    std::vector<Event> events;  // times strictly increasing, consecutive events chain
};

// Kinetic Monte Carlo run: exponential waiting times with the state's exit
// rate, next state proportional to the outgoing rates. Discrete time takes
// unit steps with categorical jumps, loops included. Reproducible
// byte-for-byte for a fixed seed. Starts in state 0.
Trajectory simulate_events(const MarkovProcess& p, long long n_events, std::uint64_t seed);
Trajectory simulate_time(const MarkovProcess& p, double t_max, std::uint64_t seed);

// Independent replicas with per-replica seeds derived from `seed`; runs in
// parallel when OpenMP is available, result identical either way.
std::vector<Trajectory> simulate_replicas(const MarkovProcess& p, long long n_events,
                                          std::uint64_t seed, int n_replicas,
                                          int threads = 0);

// Event-count flux estimator: counts / total_time (continuous) or counts /
// n_steps (discrete, loops into the loop field).
FluxField empirical_fluxes(const Trajectory& t);

// Fraction of time (continuous) or of steps (discrete) spent per state.
std::vector<double> occupation_fractions(const Trajectory& t);

// Least-squares projection onto the Kirchhoff-balanced subspace: the minimal
// L2 correction, applied on the positive support of the field, that makes
// every node balance. Raw empirical fields violate the node condition by
// O(1/T); this is the standard estimator repair before decomposing them.
// Throws ValidationError if the correction would push a flux negative.
FluxField project_onto_balanced(const FluxField& f);

}  // namespace ness
