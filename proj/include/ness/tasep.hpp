#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "ness/cycles.hpp"
#include "ness/markov.hpp"

namespace ness {

// Two particles hopping one way on a four-site ring, with the jump over the
// periodic boundary running at rate x instead of 1. Six states, eight
// unidirectional transitions, four simple cycles (the particle "gaits").

MarkovProcess build_tasep(double x);

struct TasepAnalytic {
    std::vector<double> p;  // closed-form stationary distribution
    FluxField fluxes;       // closed-form steady fluxes
};

// Closed form: p = (x(1+x), x(1+x), x(1+x), 2x^2, 2, 2x) / C(x) with
// C(x) = 2 + 5x + 5x^2, and the fluxes scale as x/C(x) times (1+x), 2x or 2
// depending on the edge.
TasepAnalytic tasep_analytic(double x);

// The four cycles in gait order: alpha (1f), beta (1b), gamma (2f), delta (2b).
const std::array<Cycle, 4>& tasep_cycles();
const std::array<std::string, 4>& tasep_cycle_names();

struct TasepSweepRow {
    double x = 0.0;
    std::array<double, 4> raw{};     // weights in gait order alpha..delta
    std::array<double, 4> scaled{};  // raw divided by the common factor x/C(x)
    std::string support;             // e.g. "alpha+beta"
};

// Decomposes the analytic fluxes for each x with the pinned cycle placed
// first in the ordering (so it always appears in the decomposition) and the
// rest in catalog order.
std::vector<TasepSweepRow> tasep_sweep(std::span<const double> xs, const Cycle& pinned,
                                       int threads = 0);
std::vector<TasepSweepRow> tasep_sweep_serial(std::span<const double> xs, const Cycle& pinned);

struct TasepKink {
    double slope_left = 0.0;   // d(scaled weight)/dx just below x = 1
    double slope_right = 0.0;  // just above
    double jump = 0.0;         // |slope_left - slope_right|
};

// Finite-difference slopes of the pinned cycle's scaled weight at the
// structural transition x = 1. The step default balances truncation against
// round-off for the piecewise-linear scaled weights.
TasepKink tasep_kink(const Cycle& pinned, double step = 1e-4);

}  // namespace ness
