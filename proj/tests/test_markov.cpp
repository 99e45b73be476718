#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ness/markov.hpp"
#include "ness/simulate.hpp"
#include "ness/tasep.hpp"
#include "test_util.hpp"

using namespace ness;
using namespace testutil;

TEST_CASE("validate accepts a minimal ergodic chain") {
    CHECK(validate_process(ring(3)).empty());
}

TEST_CASE("validate flags an absorbing state") {
    MarkovProcess p(2, TimeKind::continuous);
    p.set_rate(0, 1, 1.0);
    const auto v = validate_process(p);
    REQUIRE(!v.empty());
    bool connectivity = false, waiting = false;
    for (const auto& s : v) {
        if (s.find("not strongly connected") != std::string::npos) connectivity = true;
        if (s.find("no outgoing transition") != std::string::npos) waiting = true;
    }
    CHECK(connectivity);
    CHECK(waiting);
}

TEST_CASE("validate flags a denormalized discrete row") {
    MarkovProcess p(2, TimeKind::discrete);
    p.set_rate(0, 1, 0.4);
    p.set_loop(0, 0.5);  // sums to 0.9
    p.set_rate(1, 0, 1.0);
    const auto v = validate_process(p);
    REQUIRE(!v.empty());
    CHECK(v.front().find("normalization") != std::string::npos);
}

TEST_CASE("stationary distribution of the TASEP ring at x = 2") {
    const auto p = build_tasep(2.0);
    const auto ps = stationary_distribution(p);
    const double expected[] = {6 / 32.0, 6 / 32.0, 6 / 32.0, 8 / 32.0, 2 / 32.0, 4 / 32.0};
    for (int i = 0; i < 6; ++i) CHECK(ps[i] == doctest::Approx(expected[i]).epsilon(1e-13));
}

TEST_CASE("symmetric two-state chain splits evenly") {
    const auto ps = stationary_distribution(two_state(1.0, 1.0));
    CHECK(ps[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ps[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("stationary distribution matches long-run occupation fractions") {
    // Monte Carlo oracle: replicas give the standard error of the estimate.
    const auto p = random_chain(5, 20240001);
    const auto ps = stationary_distribution(p);
    const int replicas = 64;
    const auto runs = simulate_replicas(p, 60000, 777, replicas);
    for (int i = 0; i < 5; ++i) {
        double mean = 0.0, var = 0.0;
        std::vector<double> vals;
        for (const auto& t : runs) vals.push_back(occupation_fractions(t)[std::size_t(i)]);
        for (double v : vals) mean += v;
        mean /= replicas;
        for (double v : vals) var += (v - mean) * (v - mean);
        const double se = std::sqrt(var / (replicas - 1)) / std::sqrt(double(replicas));
        CHECK(std::fabs(mean - ps[i]) < 3.0 * se + 1e-6);
    }
}

TEST_CASE("stationary solve reports a singular system") {
    // Two disconnected 2-rings: the balance system is rank deficient.
    MarkovProcess p(4, TimeKind::continuous);
    p.set_rate(0, 1, 1.0);
    p.set_rate(1, 0, 1.0);
    p.set_rate(2, 3, 1.0);
    p.set_rate(3, 2, 1.0);
    CHECK_THROWS_AS(stationary_distribution(p), NumericalError);
}

TEST_CASE("master equation vanishes at the steady state") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto p = random_chain(6, seed);
        const auto ps = stationary_distribution(p);
        for (double v : master_rhs(p, ps)) CHECK(std::fabs(v) <= 1e-12);
    }
}

TEST_CASE("master equation on a single-source distribution") {
    const auto p = two_state(1.0, 2.0);
    const std::vector<double> dist{1.0, 0.0};
    const auto rhs = master_rhs(p, dist);
    CHECK(rhs[0] == doctest::Approx(-1.0));
    CHECK(rhs[1] == doctest::Approx(1.0));
}

TEST_CASE("master equation agrees with a direct matrix evaluation") {
    const auto p = build_tasep(2.0);
    const int n = p.n_states();
    std::vector<double> uniform(std::size_t(n), 1.0 / n);
    const auto rhs = master_rhs(p, uniform);

    // oracle: build the full generator and multiply
    std::vector<double> w(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (j != i) w[std::size_t(i) * n + j] = p.rate(i, j);
        w[std::size_t(i) * n + i] = -p.exit_rate(i);
    }
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += w[std::size_t(j) * n + i] * uniform[std::size_t(j)];
        CHECK(rhs[i] == doctest::Approx(v).epsilon(1e-14));
        total += rhs[i];
    }
    CHECK(std::fabs(total) <= 1e-15);
}

TEST_CASE("TASEP steady fluxes at x = 2") {
    const auto f = steady_fluxes(build_tasep(2.0));
    CHECK(f(0, 1) == doctest::Approx(3 / 16.0).epsilon(1e-13));  // 1->2
    CHECK(f(1, 5) == doctest::Approx(3 / 16.0).epsilon(1e-13));  // 2->6
    CHECK(f(0, 2) == doctest::Approx(3 / 16.0).epsilon(1e-13));  // 1->3
    CHECK(f(2, 5) == doctest::Approx(3 / 16.0).epsilon(1e-13));  // 3->6
    CHECK(f(5, 3) == doctest::Approx(4 / 16.0).epsilon(1e-13));  // 6->4
    CHECK(f(3, 0) == doctest::Approx(4 / 16.0).epsilon(1e-13));  // 4->1
    CHECK(f(5, 4) == doctest::Approx(2 / 16.0).epsilon(1e-13));  // 6->5
    CHECK(f(4, 0) == doctest::Approx(2 / 16.0).epsilon(1e-13));  // 5->1
    CHECK(max_node_imbalance(f) <= 1e-12);
}

TEST_CASE("uniform ring carries equal fluxes") {
    const auto f = steady_fluxes(ring(3));
    for (int i = 0; i < 3; ++i)
        CHECK(f(i, (i + 1) % 3) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("discrete two-state fluxes and loops") {
    // rows (0.5, 0.5) and (0.25, 0.75): p* = (1/3, 2/3) by hand
    MarkovProcess p(2, TimeKind::discrete);
    p.set_loop(0, 0.5);
    p.set_rate(0, 1, 0.5);
    p.set_rate(1, 0, 0.25);
    p.set_loop(1, 0.75);
    const auto f = steady_fluxes(p);
    CHECK(f(0, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(f(1, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    REQUIRE(f.loops.size() == 2);
    CHECK(f.loops[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(f.loops[1] == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("discrete master identity holds for arbitrary distributions") {
    const auto p = random_discrete_chain(4, 99);
    const std::vector<double> dist{0.4, 0.3, 0.2, 0.1};
    const auto rhs = master_rhs(p, dist);
    for (int i = 0; i < 4; ++i) {
        // p(t+1)_i - p(t)_i from the transition matrix directly
        double next = dist[std::size_t(i)] * p.loop(i);
        for (int j = 0; j < 4; ++j)
            if (j != i) next += dist[std::size_t(j)] * p.rate(j, i);
        CHECK(rhs[i] == doctest::Approx(next - dist[std::size_t(i)]).epsilon(1e-13));
    }
}

TEST_CASE("path weight multiplies the rates along the path") {
    const auto p = two_state(1.0, 2.0);
    const int path[] = {0, 1, 0};
    CHECK(path_weight(p, path) == doctest::Approx(2.0));
    const int single[] = {0, 1};
    CHECK(path_weight(p, single) == doctest::Approx(1.0));
}

TEST_CASE("path weight through the TASEP boundary edge") {
    const auto p = build_tasep(2.0);
    const int path[] = {0, 2, 5, 3, 0};  // 1->3->6->4->1
    CHECK(path_weight(p, path) == doctest::Approx(2.0));
}

TEST_CASE("path weight rejects missing edges") {
    const auto p = ring(3);
    const int path[] = {1, 0};  // only 0->1 exists
    CHECK_THROWS_AS(path_weight(p, path), ValidationError);
}

TEST_CASE("every ergodic two-state chain is detailed balanced") {
    for (std::uint64_t seed : {5u, 6u, 7u}) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(0.1, 3.0);
        CHECK(is_detailed_balanced(two_state(unif(rng), unif(rng))).balanced);
    }
}

TEST_CASE("the TASEP ring is never detailed balanced") {
    for (double x : {0.5, 1.0, 2.0}) CHECK(!is_detailed_balanced(build_tasep(x)).balanced);
}

TEST_CASE("biased ring current") {
    const auto check = is_detailed_balanced(biased_ring(3, 2.0, 1.0));
    CHECK(!check.balanced);
    CHECK(check.max_current == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("dynamical reversibility") {
    CHECK(is_dynamically_reversible(biased_ring(3, 2.0, 1.0)));
    CHECK(!is_dynamically_reversible(build_tasep(1.0)));
    CHECK(!is_dynamically_reversible(ring(3)));
}

TEST_CASE("equilibrium potential of a two-state chain") {
    const auto pot = equilibrium_potential(two_state(1.0, 2.0));
    CHECK(pot.u[0] == 0.0);
    CHECK(pot.u[1] == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(pot.z == doctest::Approx(1.5).epsilon(1e-14));
    const auto ps = stationary_distribution(two_state(1.0, 2.0));
    CHECK(std::exp(-pot.u[0]) / pot.z == doctest::Approx(ps[0]).epsilon(1e-12));
    CHECK(std::exp(-pot.u[1]) / pot.z == doctest::Approx(ps[1]).epsilon(1e-12));
}

TEST_CASE("symmetric chain has a flat potential") {
    const auto pot = equilibrium_potential(biased_ring(4, 1.0, 1.0));
    for (double u : pot.u) CHECK(std::fabs(u) <= 1e-14);
}

TEST_CASE("equilibrium potential reproduces the stationary distribution") {
    for (std::uint64_t seed : {11u, 12u, 13u, 14u}) {
        const auto p = random_db_chain(5, seed);
        REQUIRE(is_detailed_balanced(p).balanced);
        const auto pot = equilibrium_potential(p);
        const auto ps = stationary_distribution(p);
        for (int i = 0; i < 5; ++i)
            CHECK(std::exp(-pot.u[i]) / pot.z == doctest::Approx(ps[i]).epsilon(1e-10));
    }
}

TEST_CASE("equilibrium potential refuses driven chains") {
    CHECK_THROWS_AS(equilibrium_potential(biased_ring(3, 2.0, 1.0)), ValidationError);
}

TEST_CASE("path-dependent rate ratios are caught behind vanishing currents") {
    // rates so small that the currents sit below the balance tolerance while
    // the ratio closure around the ring still fails loudly
    const auto p = biased_ring(3, 2e-12, 1e-12);
    REQUIRE(is_detailed_balanced(p).balanced);  // currents ~1e-13
    CHECK_THROWS_AS(equilibrium_potential(p), NumericalError);
}

TEST_CASE("discrete reconstruction from fluxes") {
    FluxField f = FluxField::zeros(2, true);
    f.at(0, 1) = 1.0 / 6.0;
    f.at(1, 0) = 1.0 / 6.0;
    f.loops[0] = 1.0 / 6.0;
    f.loops[1] = 0.5;
    const auto rec = dt_reconstruct(f);
    CHECK(rec.p_star[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(rec.p_star[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(rec.process.rate(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rec.process.loop(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rec.process.rate(1, 0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(rec.process.loop(1) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("discrete round trip is the identity") {
    for (std::uint64_t seed : {21u, 22u, 23u}) {
        const auto p = random_discrete_chain(5, seed);
        const auto rec = dt_reconstruct(steady_fluxes(p));
        const auto ps = stationary_distribution(p);
        for (int i = 0; i < 5; ++i) {
            CHECK(rec.p_star[i] == doctest::Approx(ps[i]).epsilon(1e-12));
            CHECK(rec.process.loop(i) == doctest::Approx(p.loop(i)).epsilon(1e-12));
            for (int j = 0; j < 5; ++j)
                if (i != j)
                    CHECK(rec.process.rate(i, j) == doctest::Approx(p.rate(i, j)).epsilon(1e-12));
        }
    }
}

TEST_CASE("reconstruction rejects unbalanced or degenerate fields") {
    FluxField bad = FluxField::zeros(2, true);
    bad.at(0, 1) = 1.0;  // nothing comes back
    CHECK_THROWS_AS(dt_reconstruct(bad), ValidationError);

    FluxField dead = FluxField::zeros(2, true);
    dead.loops[0] = 1.0;  // state 2 has zero row sum
    CHECK_THROWS_AS(dt_reconstruct(dead), ValidationError);
}
