#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ness/cycle_graph.hpp"
#include "ness/tasep.hpp"
#include "test_util.hpp"

using namespace ness;
using namespace testutil;

namespace {

CycleDecomposition tasep_x2_decomposition() {
    const auto catalog = enumerate_cycles(Digraph::support_of(build_tasep(2.0)));
    // ordering (alpha, delta, beta, gamma) -> weights {alpha:3, delta:1, beta:2}/16
    std::vector<int> ord;
    for (int g : {0, 3, 1, 2}) ord.push_back(int(*catalog.index_of(tasep_cycles()[std::size_t(g)])));
    return decompose(tasep_analytic(2.0).fluxes, catalog, ord);
}

int node_of(const CycleGraph& g, const CycleDecomposition& d, const Cycle& c) {
    for (int a = 0; a < g.size(); ++a)
        if (d.catalog.cycles[g.node_cycle[a]] == c) return a;
    return -1;
}

}  // namespace

TEST_CASE("TASEP x=2 exchange flux between alpha and beta") {
    const auto p = build_tasep(2.0);
    const auto d = tasep_x2_decomposition();
    const auto g = build_cycle_graph(d, p);
    REQUIRE(g.size() == 3);  // alpha, beta, delta carry weight

    const int a = node_of(g, d, tasep_cycles()[0]);
    const int b = node_of(g, d, tasep_cycles()[1]);
    REQUIRE(a >= 0);
    REQUIRE(b >= 0);
    // shared stations {1, 6}, each with total weight 6/16:
    // psi = (3/16) * (2/16)/(6/16) * 2 = 1/8, symmetric by hand
    CHECK(g.psi_at(a, b) == doctest::Approx(0.125).epsilon(1e-13));
    CHECK(g.psi_at(b, a) == doctest::Approx(0.125).epsilon(1e-13));
}

TEST_CASE("a single cycle transforms to one node and no edges") {
    const auto p = ring(3);
    const auto catalog = enumerate_cycles(Digraph::support_of(p));
    const auto d = decompose(steady_fluxes(p), catalog);
    const auto g = build_cycle_graph(d, p);
    REQUIRE(g.size() == 1);
    CHECK(g.tau[0] == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(g.m[0] * g.tau[0] == doctest::Approx(1.0).epsilon(1e-13));
    const auto pot = cycle_potential(g, d);
    CHECK(pot.z == 1.0);
    CHECK(pot.h[0] == doctest::Approx(std::log(3.0)).epsilon(1e-13));
}

TEST_CASE("detailed-balanced pair: one 2-cycle with the hand-computed potential") {
    const auto p = two_state(1.0, 2.0);
    const auto catalog = enumerate_cycles(Digraph::support_of(p));
    const auto d = decompose(steady_fluxes(p), catalog);
    const auto g = build_cycle_graph(d, p);
    REQUIRE(g.size() == 1);
    CHECK(g.m[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(g.tau[0] == doctest::Approx(1.5).epsilon(1e-13));  // 1 + 1/2
    CHECK(g.m[0] * g.tau[0] == doctest::Approx(1.0).epsilon(1e-13));
    const auto pot = cycle_potential(g, d);
    CHECK(pot.h[0] == doctest::Approx(0.405465).epsilon(1e-6));  // -ln(2/3)
}

TEST_CASE("exchange fluxes are symmetric and normalization holds on random chains") {
    std::mt19937_64 rng(2718);
    for (int trial = 0; trial < 12; ++trial) {
        const auto p = random_chain(6, rng());
        const auto catalog = enumerate_cycles(Digraph::support_of(p));
        const auto d = decompose(steady_fluxes(p), catalog);
        const auto g = build_cycle_graph(d, p);

        double mtau = 0.0;
        for (int a = 0; a < g.size(); ++a) mtau += g.m[a] * g.tau[a];
        CHECK(std::fabs(mtau - 1.0) <= 1e-12);

        for (int a = 0; a < g.size(); ++a) {
            for (int c = 0; c < g.size(); ++c) {
                if (a == c) continue;
                CHECK(std::fabs(g.psi_at(a, c) - g.psi_at(c, a)) <= 1e-12);
                // psi must equal m_a * b_ab (direct evaluation of its definition)
                CHECK(g.psi_at(a, c) ==
                      doctest::Approx(g.m[a] * g.b_at(a, c)).epsilon(1e-12));
                // edges exist exactly where cycles share a vertex
                bool share = false;
                for (int i = 0; i < p.n_states(); ++i)
                    share |= d.catalog.cycles[g.node_cycle[a]].passes(i) &&
                             d.catalog.cycles[g.node_cycle[c]].passes(i);
                CHECK(g.has_edge(a, c) == share);
            }
        }
        cycle_potential(g, d);  // must not throw on any of these
    }
}

TEST_CASE("rate ratios around closed paths in the cycle graph cancel") {
    const auto p = random_chain(6, 515);
    const auto catalog = enumerate_cycles(Digraph::support_of(p));
    const auto d = decompose(steady_fluxes(p), catalog);
    const auto g = build_cycle_graph(d, p);
    for (int a = 0; a < g.size(); ++a)
        for (int b = a + 1; b < g.size(); ++b)
            for (int c = b + 1; c < g.size(); ++c) {
                if (!(g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(c, a))) continue;
                const double loop = std::log(g.b_at(a, b) / g.b_at(b, a)) +
                                    std::log(g.b_at(b, c) / g.b_at(c, b)) +
                                    std::log(g.b_at(c, a) / g.b_at(a, c));
                CHECK(std::fabs(loop) <= 1e-9);
            }
}

TEST_CASE("potential is consistent with exchange-rate ratios and gauge free") {
    const auto p = build_tasep(2.0);
    const auto d = tasep_x2_decomposition();
    const auto g = build_cycle_graph(d, p);
    const auto pot = cycle_potential(g, d);
    for (int a = 0; a < g.size(); ++a) {
        CHECK(std::exp(-pot.h[a]) / pot.z == doctest::Approx(g.m[a]).epsilon(1e-12));
        for (int c = 0; c < g.size(); ++c) {
            if (a == c || !g.has_edge(a, c)) continue;
            CHECK(pot.h[c] - pot.h[a] ==
                  doctest::Approx(-std::log(g.b_at(a, c) / g.b_at(c, a))).epsilon(1e-10));
        }
    }
    // shifting H by a constant and rescaling Z leaves the weights alone
    const double shift = 0.7;
    for (int a = 0; a < g.size(); ++a) {
        const double m = std::exp(-(pot.h[a] + shift)) / (pot.z * std::exp(-shift));
        CHECK(m == doctest::Approx(g.m[a]).epsilon(1e-12));
    }
}

TEST_CASE("TASEP x=2 weights and periods normalize") {
    const auto p = build_tasep(2.0);
    const auto d = tasep_x2_decomposition();
    const auto g = build_cycle_graph(d, p);
    double mtau = 0.0;
    for (int a = 0; a < g.size(); ++a) mtau += g.m[a] * g.tau[a];
    CHECK(std::fabs(mtau - 1.0) <= 1e-12);
}

TEST_CASE("discrete chains count one step per visit") {
    const auto p = random_discrete_chain(4, 808);
    const auto catalog = enumerate_cycles(Digraph::support_of(p));
    const auto d = decompose(steady_fluxes(p), catalog);
    const auto g = build_cycle_graph(d, p);
    for (int a = 0; a < g.size(); ++a)
        CHECK(g.tau[a] == double(d.catalog.cycles[g.node_cycle[a]].length()));
    // with loops, m*tau accounts for the off-diagonal flux only
    const auto ps = stationary_distribution(p);
    double loop_flux = 0.0;
    for (int i = 0; i < 4; ++i) loop_flux += ps[i] * p.loop(i);
    double mtau = 0.0;
    for (int a = 0; a < g.size(); ++a) mtau += g.m[a] * g.tau[a];
    CHECK(mtau == doctest::Approx(1.0 - loop_flux).epsilon(1e-12));
    cycle_potential(g, d);
}

TEST_CASE("a decomposition of the wrong process is rejected") {
    const auto p = build_tasep(2.0);
    const auto catalog = enumerate_cycles(Digraph::support_of(p));
    CycleDecomposition fake;
    fake.catalog = catalog;
    fake.weights.assign(catalog.size(), 0.0);
    fake.residual = FluxField::zeros(6);
    CHECK_THROWS_AS(build_cycle_graph(fake, p), ValidationError);
}
