#include "ness/tasep.hpp"

#include <algorithm>
#include <cmath>

#include "ness/decompose.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ness {

namespace {

// 1-based edges of the state network; the two boundary-crossing jumps carry
// rate x, the rest rate 1.
constexpr int kUnitEdges[6][2] = {{1, 2}, {1, 3}, {2, 6}, {3, 6}, {4, 1}, {6, 5}};
constexpr int kBoundaryEdges[2][2] = {{5, 1}, {6, 4}};

std::array<double, 4> weights_in_gait_order(const CycleDecomposition& d) {
    std::array<double, 4> out{};
    const auto& gaits = tasep_cycles();
    for (int g = 0; g < 4; ++g) {
        const auto idx = d.catalog.index_of(gaits[std::size_t(g)]);
        out[std::size_t(g)] = idx ? d.weights[*idx] : 0.0;
    }
    return out;
}

TasepSweepRow sweep_point(double x, const CycleCatalog& catalog,
                          std::span<const int> ordering) {
    const TasepAnalytic a = tasep_analytic(x);
    const CycleDecomposition d = decompose(a.fluxes, catalog, ordering);
    TasepSweepRow row;
    row.x = x;
    row.raw = weights_in_gait_order(d);
    const double common = x / (2.0 + 5.0 * x + 5.0 * x * x);
    for (int g = 0; g < 4; ++g) row.scaled[std::size_t(g)] = row.raw[std::size_t(g)] / common;
    const auto& names = tasep_cycle_names();
    for (int g = 0; g < 4; ++g) {
        if (row.raw[std::size_t(g)] > 0.0) {
            if (!row.support.empty()) row.support += '+';
            row.support += names[std::size_t(g)];
        }
    }
    return row;
}

std::vector<int> pinned_first_ordering(const CycleCatalog& catalog, const Cycle& pinned) {
    const auto idx = catalog.index_of(pinned);
    if (!idx) throw ValidationError("pinned cycle " + pinned.render() +
                                    " is not a cycle of the state network");
    std::vector<int> ord{int(*idx)};
    for (std::size_t k = 0; k < catalog.size(); ++k)
        if (k != *idx) ord.push_back(int(k));
    return ord;
}

double scaled_pinned_weight(double x, const CycleCatalog& catalog,
                            std::span<const int> ordering, const Cycle& pinned) {
    const TasepSweepRow row = sweep_point(x, catalog, ordering);
    const auto& gaits = tasep_cycles();
    for (int g = 0; g < 4; ++g)
        if (gaits[std::size_t(g)] == pinned) return row.scaled[std::size_t(g)];
    return 0.0;
}

}  // namespace

MarkovProcess build_tasep(double x) {
    if (!(x > 0.0)) throw ValidationError("the boundary jump rate x must be positive");
    MarkovProcess p(6, TimeKind::continuous);
    for (const auto& e : kUnitEdges) p.set_rate(e[0] - 1, e[1] - 1, 1.0);
    for (const auto& e : kBoundaryEdges) p.set_rate(e[0] - 1, e[1] - 1, x);
    return p;
}

TasepAnalytic tasep_analytic(double x) {
    if (!(x > 0.0)) throw ValidationError("the boundary jump rate x must be positive");
    const double c = 2.0 + 5.0 * x + 5.0 * x * x;
    TasepAnalytic a;
    a.p = {x * (1.0 + x) / c, x * (1.0 + x) / c, x * (1.0 + x) / c,
           2.0 * x * x / c,   2.0 / c,           2.0 * x / c};
    a.fluxes = FluxField::zeros(6);
    const double common = x / c;
    // interior hops at rate 1
    a.fluxes.at(0, 1) = common * (1.0 + x);
    a.fluxes.at(1, 5) = common * (1.0 + x);
    a.fluxes.at(0, 2) = common * (1.0 + x);
    a.fluxes.at(2, 5) = common * (1.0 + x);
    // boundary-crossing branch
    a.fluxes.at(5, 3) = common * 2.0 * x;
    a.fluxes.at(3, 0) = common * 2.0 * x;
    a.fluxes.at(5, 4) = common * 2.0;
    a.fluxes.at(4, 0) = common * 2.0;
    return a;
}

const std::array<Cycle, 4>& tasep_cycles() {
    static const std::array<Cycle, 4> cycles = {
        Cycle({0, 2, 5, 3}),  // alpha: 1->3->6->4, step 1, front particle first
        Cycle({0, 1, 5, 4}),  // beta:  1->2->6->5, step 1, back first
        Cycle({0, 2, 5, 4}),  // gamma: 1->3->6->5, step 2, front first
        Cycle({0, 1, 5, 3}),  // delta: 1->2->6->4, step 2, back first
    };
    return cycles;
}

const std::array<std::string, 4>& tasep_cycle_names() {
    static const std::array<std::string, 4> names = {"alpha", "beta", "gamma", "delta"};
    return names;
}

std::vector<TasepSweepRow> tasep_sweep_serial(std::span<const double> xs, const Cycle& pinned) {
    const CycleCatalog catalog = enumerate_cycles(Digraph::support_of(build_tasep(1.0)));
    const auto ordering = pinned_first_ordering(catalog, pinned);
    std::vector<TasepSweepRow> rows(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) rows[k] = sweep_point(xs[k], catalog, ordering);
    return rows;
}

std::vector<TasepSweepRow> tasep_sweep(std::span<const double> xs, const Cycle& pinned,
                                       int threads) {
    const CycleCatalog catalog = enumerate_cycles(Digraph::support_of(build_tasep(1.0)));
    const auto ordering = pinned_first_ordering(catalog, pinned);
    std::vector<TasepSweepRow> rows(xs.size());
#ifdef _OPENMP
    const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(team)
    for (std::size_t k = 0; k < xs.size(); ++k) rows[k] = sweep_point(xs[k], catalog, ordering);
#else
    (void)threads;
    for (std::size_t k = 0; k < xs.size(); ++k) rows[k] = sweep_point(xs[k], catalog, ordering);
#endif
    return rows;
}

TasepKink tasep_kink(const Cycle& pinned, double step) {
    const CycleCatalog catalog = enumerate_cycles(Digraph::support_of(build_tasep(1.0)));
    const auto ordering = pinned_first_ordering(catalog, pinned);
    const double at_one = scaled_pinned_weight(1.0, catalog, ordering, pinned);
    const double below = scaled_pinned_weight(1.0 - step, catalog, ordering, pinned);
    const double above = scaled_pinned_weight(1.0 + step, catalog, ordering, pinned);
    TasepKink k;
    k.slope_left = (at_one - below) / step;
    k.slope_right = (above - at_one) / step;
    k.jump = std::fabs(k.slope_left - k.slope_right);
    return k;
}

}  // namespace ness
