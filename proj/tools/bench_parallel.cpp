// Benchmark of the OpenMP kernels against their serial reference
// implementations: ordering enumeration (exhaustive and sampled), the TASEP
// parameter sweep and replica simulation. Each section verifies that both
// paths produce identical results before reporting the timings.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "ness/decompose.hpp"
#include "ness/markov.hpp"
#include "ness/simulate.hpp"
#include "ness/tasep.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace ness;

namespace {

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void row(const char* name, double serial_ms, double parallel_ms, bool same) {
    std::printf("%-28s %10.1f ms %10.1f ms   x%.2f   results %s\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms, same ? "identical" : "DIFFER");
}

// Bidirectional hexagon with a chord: 13 simple cycles, a sampling-sized
// ordering space.
MarkovProcess bench_chain() {
    MarkovProcess p(6, TimeKind::continuous);
    for (int i = 0; i < 6; ++i) {
        p.set_rate(i, (i + 1) % 6, 2.0);
        p.set_rate((i + 1) % 6, i, 1.0);
    }
    p.set_rate(0, 3, 1.5);
    p.set_rate(3, 0, 1.5);
    return p;
}

bool same_sets(const EnumerationResult& a, const EnumerationResult& b) {
    if (a.distinct.size() != b.distinct.size()) return false;
    for (std::size_t k = 0; k < a.distinct.size(); ++k)
        if (a.distinct[k].weights != b.distinct[k].weights) return false;
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    long long samples = argc > 1 ? std::atoll(argv[1]) : 150'000;
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; parallel paths run serially\n");
#endif
    std::printf("%-28s %13s %13s\n", "kernel", "serial", "parallel");

    {
        // exhaustive enumeration on the plain hexagon (8 cycles, 8! orderings)
        MarkovProcess p(6, TimeKind::continuous);
        for (int i = 0; i < 6; ++i) {
            p.set_rate(i, (i + 1) % 6, 2.0);
            p.set_rate((i + 1) % 6, i, 1.0);
        }
        const auto f = steady_fluxes(p);
        const auto catalog = enumerate_cycles(Digraph::support_of(p));
        double t0 = now_ms();
        const auto serial = enumerate_decompositions_serial(f, catalog);
        double t1 = now_ms();
        const auto parallel = enumerate_decompositions(f, catalog);
        double t2 = now_ms();
        row("enumerate (8 cycles, 8!)", t1 - t0, t2 - t1, same_sets(serial, parallel));
        std::printf("  distinct decompositions: %zu\n", serial.distinct.size());
    }

    {
        const auto p = bench_chain();
        const auto f = steady_fluxes(p);
        const auto catalog = enumerate_cycles(Digraph::support_of(p));
        std::printf("  sampling %lld orderings of %zu cycles\n", samples, catalog.size());
        double t0 = now_ms();
        const auto serial = sample_decompositions(f, catalog, samples, 7, 1);
        double t1 = now_ms();
        const auto parallel = sample_decompositions(f, catalog, samples, 7);
        double t2 = now_ms();
        row("sampled orderings", t1 - t0, t2 - t1, same_sets(serial, parallel));
        std::printf("  distinct decompositions seen (lower bound): %zu\n",
                    serial.distinct.size());
    }

    {
        std::vector<double> xs;
        for (int k = 0; k < 3000; ++k) xs.push_back(0.05 + 0.001 * k);
        double t0 = now_ms();
        const auto serial = tasep_sweep_serial(xs, tasep_cycles()[0]);
        double t1 = now_ms();
        const auto parallel = tasep_sweep(xs, tasep_cycles()[0]);
        double t2 = now_ms();
        bool same = serial.size() == parallel.size();
        for (std::size_t k = 0; same && k < serial.size(); ++k)
            same = serial[k].raw == parallel[k].raw;
        row("tasep sweep (3000 points)", t1 - t0, t2 - t1, same);
    }

    {
        const auto p = bench_chain();
        double t0 = now_ms();
        const auto serial = simulate_replicas(p, 400'000, 5, 8, 1);
        double t1 = now_ms();
        const auto parallel = simulate_replicas(p, 400'000, 5, 8);
        double t2 = now_ms();
        bool same = true;
        for (std::size_t r = 0; r < serial.size(); ++r)
            same = same && serial[r].total_time == parallel[r].total_time;
        row("replica simulation (8x400k)", t1 - t0, t2 - t1, same);
    }
    return 0;
}
