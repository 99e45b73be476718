#include "ness/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "linsolve.hpp"

namespace ness {

namespace {

std::string state_name(int i) { return std::to_string(i + 1); }

std::string edge_name(int i, int j) {
    return state_name(i) + "->" + state_name(j);
}

// BFS reachability from `start`, following adj in the given direction.
std::vector<char> reachable(const MarkovProcess& p, int start, bool forward) {
    const int n = p.n_states();
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    seen[start] = 1;
    q.push(start);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v = 0; v < n; ++v) {
            if (seen[v]) continue;
            const double w = forward ? p.rate(u, v) : p.rate(v, u);
            if (u != v && w > 0.0) {
                seen[v] = 1;
                q.push(v);
            }
        }
    }
    return seen;
}

}  // namespace

MarkovProcess::MarkovProcess(int n_states, TimeKind kind)
    : n_(n_states), kind_(kind), w_(std::size_t(n_states) * n_states, 0.0),
      loops_(n_states, 0.0) {
    if (n_states < 1) throw ValidationError("process needs at least one state");
}

void MarkovProcess::set_rate(int i, int j, double w) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw ValidationError("state index out of range: " + edge_name(i, j));
    if (i == j)
        throw ValidationError("self transition " + edge_name(i, j) +
                              ": use set_loop for discrete staying probabilities");
    if (!(w >= 0.0) || !std::isfinite(w))
        throw ValidationError("rate on edge " + edge_name(i, j) + " must be finite and >= 0");
    w_[std::size_t(i) * n_ + j] = w;
}

void MarkovProcess::set_loop(int i, double a) {
    if (kind_ != TimeKind::discrete)
        throw ValidationError("loops only exist for discrete-time chains");
    if (i < 0 || i >= n_) throw ValidationError("state index out of range: " + state_name(i));
    if (!(a >= 0.0) || !std::isfinite(a))
        throw ValidationError("staying probability of state " + state_name(i) +
                              " must be finite and >= 0");
    loops_[i] = a;
}

double MarkovProcess::exit_rate(int i) const {
    double s = 0.0;
    for (int j = 0; j < n_; ++j)
        if (j != i) s += rate(i, j);
    return s;
}

double MarkovProcess::mean_waiting(int i) const {
    if (kind_ == TimeKind::discrete) return 1.0;
    return 1.0 / exit_rate(i);
}

FluxField FluxField::zeros(int n, bool with_loops) {
    FluxField f;
    f.n = n;
    f.phi.assign(std::size_t(n) * n, 0.0);
    if (with_loops) f.loops.assign(n, 0.0);
    return f;
}

double node_imbalance(const FluxField& f, int i) {
    double s = 0.0;
    for (int j = 0; j < f.n; ++j) {
        if (j == i) continue;
        s += f(i, j) - f(j, i);
    }
    return s;
}

double max_node_imbalance(const FluxField& f) {
    double worst = 0.0;
    for (int i = 0; i < f.n; ++i) worst = std::max(worst, std::fabs(node_imbalance(f, i)));
    return worst;
}

std::vector<std::string> validate_process(const MarkovProcess& p) {
    std::vector<std::string> out;
    const int n = p.n_states();

    if (p.time_kind() == TimeKind::continuous) {
        for (int i = 0; i < n; ++i)
            if (!(p.exit_rate(i) > 0.0))
                out.push_back("state " + state_name(i) +
                              " has no outgoing transition (infinite waiting time)");
    } else {
        for (int i = 0; i < n; ++i) {
            const double row = p.exit_rate(i) + p.loop(i);
            if (std::fabs(row - 1.0) > kLinearTol)
                out.push_back("state " + state_name(i) + ": outgoing probabilities sum to " +
                              std::to_string(row) + ", normalization requires 1");
        }
    }

    const auto fwd = reachable(p, 0, true);
    const auto bwd = reachable(p, 0, false);
    for (int i = 0; i < n; ++i) {
        if (!fwd[i])
            out.push_back("not strongly connected: state " + state_name(i) +
                          " unreachable from state 1");
        else if (!bwd[i])
            out.push_back("not strongly connected: state 1 unreachable from state " +
                          state_name(i));
    }
    return out;
}

std::vector<double> stationary_distribution(const MarkovProcess& p) {
    const int n = p.n_states();
    // Balance equations d p_i / dt = sum_j W^j_i p_j = 0 for i < n-1,
    // plus sum_i p_i = 1 replacing the redundant last row.
    std::vector<double> a(std::size_t(n) * n, 0.0);
    std::vector<double> b(n, 0.0);
    for (int i = 0; i < n - 1; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            a[std::size_t(i) * n + j] += p.rate(j, i);
        }
        a[std::size_t(i) * n + i] -= p.exit_rate(i);
    }
    for (int j = 0; j < n; ++j) a[std::size_t(n - 1) * n + j] = 1.0;
    b[n - 1] = 1.0;

    if (!detail::solve_dense(a, b, n))
        throw NumericalError("stationary solve failed: singular balance system "
                             "(is the chain irreducible?)",
                             std::numeric_limits<double>::infinity());

    double sum = 0.0;
    for (double v : b) sum += v;
    for (double& v : b) v /= sum;

    const auto rhs = master_rhs(p, b);
    double residual = 0.0;
    for (double v : rhs) residual = std::max(residual, std::fabs(v));
    if (!(residual <= kLinearTol))
        throw NumericalError("stationary solve residual " + std::to_string(residual) +
                             " exceeds tolerance", residual);
    return b;
}

std::vector<double> master_rhs(const MarkovProcess& p, std::span<const double> dist) {
    const int n = p.n_states();
    if (int(dist.size()) != n)
        throw ValidationError("distribution length does not match state count");
    std::vector<double> rhs(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            acc += dist[j] * p.rate(j, i) - dist[i] * p.rate(i, j);
        }
        rhs[i] = acc;
    }
    return rhs;
}

FluxField instantaneous_fluxes(const MarkovProcess& p, std::span<const double> dist) {
    const int n = p.n_states();
    if (int(dist.size()) != n)
        throw ValidationError("distribution length does not match state count");
    FluxField f = FluxField::zeros(n, p.time_kind() == TimeKind::discrete);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i) f.at(i, j) = dist[i] * p.rate(i, j);
    if (p.time_kind() == TimeKind::discrete)
        for (int i = 0; i < n; ++i) f.loops[i] = dist[i] * p.loop(i);
    return f;
}

FluxField steady_fluxes(const MarkovProcess& p) {
    const auto p_star = stationary_distribution(p);
    FluxField f = instantaneous_fluxes(p, p_star);
    const double imbalance = max_node_imbalance(f);
    if (!(imbalance <= kLinearTol))
        throw NumericalError("steady fluxes violate the node condition", imbalance);
    return f;
}

double path_weight(const MarkovProcess& p, std::span<const int> path) {
    if (path.size() < 2) throw ValidationError("path needs at least two vertices");
    double w = 1.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const int i = path[k], j = path[k + 1];
        const double r = (i == j) ? (p.time_kind() == TimeKind::discrete ? p.loop(i) : 0.0)
                                  : p.rate(i, j);
        if (!(r > 0.0))
            throw ValidationError("zero-rate edge " + edge_name(i, j) + " in path");
        w *= r;
    }
    return w;
}

BalanceCheck is_detailed_balanced(const MarkovProcess& p) {
    const FluxField f = steady_fluxes(p);
    double worst = 0.0;
    for (int i = 0; i < f.n; ++i)
        for (int j = i + 1; j < f.n; ++j)
            worst = std::max(worst, std::fabs(f(i, j) - f(j, i)));
    return {worst <= kRatioTol, worst};
}

bool is_dynamically_reversible(const MarkovProcess& p) {
    for (int i = 0; i < p.n_states(); ++i)
        for (int j = i + 1; j < p.n_states(); ++j)
            if ((p.rate(i, j) > 0.0) != (p.rate(j, i) > 0.0)) return false;
    return true;
}

Potential equilibrium_potential(const MarkovProcess& p) {
    const auto db = is_detailed_balanced(p);
    if (!db.balanced)
        throw ValidationError("equilibrium potential requires detailed balance "
                              "(largest residual current " + std::to_string(db.max_current) + ")");

    const int n = p.n_states();
    std::vector<double> u(n, 0.0);
    std::vector<char> assigned(n, 0);
    std::queue<int> q;
    assigned[0] = 1;  // gauge: lowest state index is the reference, U = 0
    q.push(0);
    while (!q.empty()) {
        int i = q.front();
        q.pop();
        for (int j = 0; j < n; ++j) {
            if (assigned[j] || i == j) continue;
            if (p.rate(i, j) > 0.0 && p.rate(j, i) > 0.0) {
                u[j] = u[i] + std::log(p.rate(j, i) / p.rate(i, j));
                assigned[j] = 1;
                q.push(j);
            }
        }
    }
    for (int i = 0; i < n; ++i)
        if (!assigned[i])
            throw ValidationError("state " + state_name(i) +
                                  " not reachable over bidirectional edges");

    // Path independence: closing every bidirectional edge must be consistent.
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!(p.rate(i, j) > 0.0 && p.rate(j, i) > 0.0)) continue;
            const double dev = std::fabs(u[j] - u[i] - std::log(p.rate(j, i) / p.rate(i, j)));
            if (dev > kRatioTol)
                throw NumericalError("rate ratios are path dependent at edge " +
                                     edge_name(i, j), dev);
        }
    }

    double z = 0.0;
    for (double v : u) z += std::exp(-v);
    return {std::move(u), z};
}

DtReconstruction dt_reconstruct(const FluxField& fluxes) {
    const int n = fluxes.n;
    const double imbalance = max_node_imbalance(fluxes);
    if (!(imbalance <= kLinearTol)) {
        int worst = 0;
        double worst_val = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = std::fabs(node_imbalance(fluxes, i));
            if (v > worst_val) {
                worst_val = v;
                worst = i;
            }
        }
        throw ValidationError("flux field is not balanced: state " + state_name(worst) +
                              " has net flux " + std::to_string(worst_val));
    }

    MarkovProcess p(n, TimeKind::discrete);
    std::vector<double> p_star(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double row = fluxes.loops.empty() ? 0.0 : fluxes.loops[i];
        for (int j = 0; j < n; ++j)
            if (j != i) row += fluxes(i, j);
        if (!(row > 0.0))
            throw ValidationError("state " + state_name(i) +
                                  " has zero total outgoing flux (unreachable)");
        p_star[i] = row;
        for (int j = 0; j < n; ++j)
            if (j != i) p.set_rate(i, j, fluxes(i, j) / row);
        if (!fluxes.loops.empty()) p.set_loop(i, fluxes.loops[i] / row);
    }
    return {std::move(p), std::move(p_star)};
}

}  // namespace ness
