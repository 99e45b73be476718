#pragma once

#include <span>
#include <string>
#include <vector>

#include "ness/error.hpp"

namespace ness {

enum class TimeKind { continuous, discrete };

// Residual tolerance for linear identities (balance equations, reconstructions).
inline constexpr double kLinearTol = 1e-12;
// Tolerance for quantities derived through logs and ratios.
inline constexpr double kRatioTol = 1e-10;

// A finite-state Markov process: continuous time stores jump rates w^i_j per
// unit time, discrete time stores jump probabilities a^i_j with the staying
// probabilities a^i_i kept separately as loops. States are 0-based in code;
// all file formats and reports are 1-based.
class MarkovProcess {
 public:
    MarkovProcess(int n_states, TimeKind kind);

    int n_states() const { return n_; }
    TimeKind time_kind() const { return kind_; }

    double rate(int i, int j) const { return w_[std::size_t(i) * n_ + j]; }
    void set_rate(int i, int j, double w);

    // Staying probability a^i_i; discrete time only.
    double loop(int i) const { return loops_[i]; }
    void set_loop(int i, double a);

    // Total outgoing rate (continuous) or off-diagonal jump probability (discrete).
    double exit_rate(int i) const;
    // Mean time spent per visit: 1 / exit rate in continuous time, one step in discrete.
    double mean_waiting(int i) const;

 private:
    int n_;
    TimeKind kind_;
    std::vector<double> w_;      // n*n row-major, diagonal unused
    std::vector<double> loops_;  // size n, used in discrete time
};

// Non-negative edge throughputs phi^i_j for i != j. Discrete-time fields keep
// the disjoint loop fluxes phi^i_i separately; the cycle machinery only ever
// reads the off-diagonal part.
struct FluxField {
    int n = 0;
    std::vector<double> phi;    // n*n row-major, diagonal unused
    std::vector<double> loops;  // size n for discrete-time fields, empty otherwise

    static FluxField zeros(int n, bool with_loops = false);

    double operator()(int i, int j) const { return phi[std::size_t(i) * n + j]; }
    double& at(int i, int j) { return phi[std::size_t(i) * n + j]; }
};

// Net outflow minus inflow at vertex i (loops cancel and are ignored).
double node_imbalance(const FluxField& f, int i);
// Largest |imbalance| over all vertices; 0 for a balanced (steady) field.
double max_node_imbalance(const FluxField& f);

// Checks every structural invariant of the process and reports violations as
// human-readable strings (1-based state names). Empty result means valid.
// Never throws.
std::vector<std::string> validate_process(const MarkovProcess& p);

// Unique stationary distribution of a valid (irreducible) process, solved by
// a dense linear system with the normalization row replacing one redundant
// balance row. The result is rescaled to sum to one exactly and the balance
// residual is verified against kLinearTol.
// Throws NumericalError (carrying the residual norm) if the solve fails.
std::vector<double> stationary_distribution(const MarkovProcess& p);

// Time derivative (continuous) or one-step change (discrete) of the
// distribution: rhs_i = sum_j (phi^j_i - phi^i_j) with phi built from `dist`.
std::vector<double> master_rhs(const MarkovProcess& p, std::span<const double> dist);

// Instantaneous fluxes phi^i_j = dist_i * rate(i,j) for an arbitrary
// distribution; includes loop fluxes in discrete time.
FluxField instantaneous_fluxes(const MarkovProcess& p, std::span<const double> dist);

// Steady-state fluxes phi^i_j = p*_i * rate(i,j). Satisfies the node
// condition at every vertex within kLinearTol.
FluxField steady_fluxes(const MarkovProcess& p);

// Product of rates along a vertex path. Throws ValidationError naming the
// first missing edge.
double path_weight(const MarkovProcess& p, std::span<const int> path);

struct BalanceCheck {
    bool balanced = false;
    double max_current = 0.0;  // largest |phi^i_j - phi^j_i| in the steady state
};

// Detailed balance: all pairwise steady-state currents vanish (within kRatioTol).
BalanceCheck is_detailed_balanced(const MarkovProcess& p);

// Dynamical reversibility: every allowed transition has an allowed reverse.
bool is_dynamically_reversible(const MarkovProcess& p);

struct Potential {
    std::vector<double> u;  // u[reference] = 0; reference is the lowest state index
    double z = 0.0;         // sum_k exp(-u_k)
};

// Potential representation p*_i = exp(-U_i)/Z of a detailed-balanced process,
// built from rate ratios along a spanning tree and cross-checked on every
// bidirectional edge. Throws ValidationError if the process is not detailed
// balanced, NumericalError if the ratios are path-dependent beyond kRatioTol.
Potential equilibrium_potential(const MarkovProcess& p);

struct DtReconstruction {
    MarkovProcess process;        // discrete time
    std::vector<double> p_star;   // p*_i = total outgoing flux of state i
};

// Rebuilds a discrete-time chain from a balanced flux field with loops:
// p*_i = sum_j phi^i_j (loops included), a^i_j = phi^i_j / p*_i.
// Throws ValidationError on node-condition violation or zero row sums.
DtReconstruction dt_reconstruct(const FluxField& fluxes);

}  // namespace ness
