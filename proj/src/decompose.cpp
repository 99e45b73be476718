#include "ness/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ness {

namespace {

// Catalog flattened into edge-index arrays for the hot loop.
struct FlatCycles {
    int n = 0;
    std::vector<int> offset;  // size M+1
    std::vector<int> eidx;    // concatenated i*n+j per cycle edge
    std::vector<int> from;    // concatenated tails (for divergence bookkeeping)
    std::vector<int> to;

    FlatCycles(const CycleCatalog& catalog, int n_states) : n(n_states) {
        offset.reserve(catalog.size() + 1);
        offset.push_back(0);
        for (const Cycle& c : catalog.cycles) {
            for (auto [u, v] : c.edges()) {
                eidx.push_back(u * n + v);
                from.push_back(u);
                to.push_back(v);
            }
            offset.push_back(int(eidx.size()));
        }
    }
    int cycle_count() const { return int(offset.size()) - 1; }
};

double field_imbalance(std::span<const double> phi, int n, int* worst_vertex = nullptr) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            s += phi[std::size_t(i) * n + j] - phi[std::size_t(j) * n + i];
        }
        if (std::fabs(s) > worst) {
            worst = std::fabs(s);
            if (worst_vertex) *worst_vertex = i;
        }
    }
    return worst;
}

// One full run of the iteration on a scratch copy of the fluxes. Weights are
// written catalog-aligned. The working field keeps satisfying the node
// condition after every subtraction; deviation means numerical corruption.
void run_iteration(std::vector<double>& phi, int n, const FlatCycles& flat,
                   std::span<const int> ordering, std::span<double> weights) {
    for (int k : ordering) {
        double m = std::numeric_limits<double>::infinity();
        for (int e = flat.offset[k]; e < flat.offset[k + 1]; ++e)
            m = std::min(m, phi[flat.eidx[e]]);
        weights[k] = m;
        if (m > 0.0)
            for (int e = flat.offset[k]; e < flat.offset[k + 1]; ++e)
                phi[flat.eidx[e]] -= m;
        const double imbalance = field_imbalance(phi, n);
        if (!(imbalance <= kLinearTol))
            throw NumericalError("node condition lost during decomposition "
                                 "(numerical corruption)", imbalance);
    }
}

void check_input_balanced(const FluxField& f) {
    int worst = 0;
    const double imbalance = field_imbalance(f.phi, f.n, &worst);
    if (!(imbalance <= kLinearTol))
        throw ValidationError("flux field is not a steady state: state " +
                              std::to_string(worst + 1) + " has net flux " +
                              std::to_string(imbalance));
}

std::vector<int> identity_ordering(std::size_t m) {
    std::vector<int> ord(m);
    std::iota(ord.begin(), ord.end(), 0);
    return ord;
}

// Weight vectors are duplicates when they agree within 1e-10 of the largest
// weight involved; exact rational inputs produce exact duplicates, float
// noise must not split them.
bool same_weights(std::span<const double> a, std::span<const double> b) {
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::fabs(v));
    for (double v : b) scale = std::max(scale, std::fabs(v));
    const double tol = 1e-10 * std::max(scale, 1e-300);
    for (std::size_t k = 0; k < a.size(); ++k)
        if (std::fabs(a[k] - b[k]) > tol) return false;
    return true;
}

// Distinct weight vectors found so far, each tagged with the smallest
// ordering rank that produced it so merges are schedule independent.
struct DistinctSet {
    std::vector<std::vector<double>> weights;
    std::vector<long long> first_rank;

    void add(std::span<const double> w, long long rank) {
        for (std::size_t k = 0; k < weights.size(); ++k) {
            if (same_weights(weights[k], w)) {
                first_rank[k] = std::min(first_rank[k], rank);
                return;
            }
        }
        weights.emplace_back(w.begin(), w.end());
        first_rank.push_back(rank);
    }

    void merge(const DistinctSet& other) {
        for (std::size_t k = 0; k < other.weights.size(); ++k)
            add(other.weights[k], other.first_rank[k]);
    }
};

// Permutation of m elements with the given lexicographic rank (Lehmer code).
std::vector<int> unrank_permutation(long long rank, int m) {
    std::vector<int> pool(m);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<long long> fact(m, 1);
    for (int i = 1; i < m; ++i) fact[i] = fact[i - 1] * i;
    std::vector<int> perm;
    perm.reserve(m);
    for (int i = m - 1; i >= 0; --i) {
        const long long digit = rank / fact[i];
        rank %= fact[i];
        perm.push_back(pool[digit]);
        pool.erase(pool.begin() + digit);
    }
    return perm;
}

long long factorial_capped(int m, long long cap) {
    long long f = 1;
    for (int i = 2; i <= m; ++i) {
        if (f > cap / i + 1) return cap + 1;
        f *= i;
    }
    return f;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 step, good enough to decorrelate per-chunk generators
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

EnumerationResult materialize(const FluxField& f, const CycleCatalog& catalog,
                              DistinctSet set, long long tried) {
    // Sort by first producing rank so output order is reproducible.
    std::vector<std::size_t> order(set.weights.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return set.first_rank[a] < set.first_rank[b];
    });

    EnumerationResult result;
    result.orderings_tried = tried;
    result.exhaustive = true;
    for (std::size_t idx : order) {
        const auto perm = unrank_permutation(set.first_rank[idx], int(catalog.size()));
        result.distinct.push_back(decompose(f, catalog, perm));
    }
    return result;
}

}  // namespace

int CycleDecomposition::support() const {
    int s = 0;
    for (double w : weights)
        if (w > 0.0) ++s;
    return s;
}

CycleDecomposition decompose(const FluxField& f, const CycleCatalog& catalog,
                             std::span<const int> ordering) {
    check_input_balanced(f);
    const int m = int(catalog.size());

    std::vector<int> ord;
    if (ordering.empty()) {
        ord = identity_ordering(m);
    } else {
        ord.assign(ordering.begin(), ordering.end());
        auto sorted = ord;
        std::sort(sorted.begin(), sorted.end());
        if (int(sorted.size()) != m)
            throw ValidationError("ordering must be a permutation of all catalog cycles");
        for (int k = 0; k < m; ++k)
            if (sorted[k] != k)
                throw ValidationError("ordering must be a permutation of all catalog cycles");
    }

    FlatCycles flat(catalog, f.n);
    std::vector<double> work = f.phi;
    std::vector<double> weights(m, 0.0);
    run_iteration(work, f.n, flat, ord, weights);

    double residual = 0.0;
    for (double v : work) residual = std::max(residual, std::fabs(v));
    if (!(residual <= kLinearTol))
        throw NumericalError("nonzero flux left after visiting every cycle "
                             "(numerical corruption)", residual);

    CycleDecomposition d;
    d.catalog = catalog;
    d.ordering = std::move(ord);
    d.weights = std::move(weights);
    d.residual = FluxField::zeros(f.n);

    // Strong oracle: the weighted indicators must superpose back to the input.
    const FluxField rebuilt = reconstruct_fluxes(d);
    double err = 0.0;
    for (std::size_t k = 0; k < rebuilt.phi.size(); ++k)
        err = std::max(err, std::fabs(rebuilt.phi[k] - f.phi[k]));
    if (!(err <= kLinearTol))
        throw NumericalError("decomposition does not reconstruct the input fluxes", err);
    return d;
}

FluxField reconstruct_fluxes(const CycleDecomposition& d) {
    FluxField out = FluxField::zeros(d.residual.n);
    for (std::size_t k = 0; k < d.catalog.size(); ++k) {
        const double m = d.weights[k];
        if (m == 0.0) continue;
        for (auto [u, v] : d.catalog.cycles[k].edges()) out.at(u, v) += m;
    }
    return out;
}

EnumerationResult enumerate_decompositions(const FluxField& f, const CycleCatalog& catalog,
                                           long long max_orderings, int threads) {
    check_input_balanced(f);
    const int m = int(catalog.size());
    const long long total = factorial_capped(m, max_orderings);
    if (total > max_orderings)
        throw CapError("catalog of " + std::to_string(m) + " cycles has more than " +
                       std::to_string(max_orderings) +
                       " orderings; use the seeded sampling mode instead");

    const FlatCycles flat(catalog, f.n);
    DistinctSet merged;

#ifdef _OPENMP
    const int team = threads > 0 ? threads : omp_get_max_threads();
    std::vector<DistinctSet> locals(static_cast<std::size_t>(team));
#pragma omp parallel num_threads(team)
    {
        DistinctSet& local = locals[std::size_t(omp_get_thread_num())];
        std::vector<double> work(f.phi.size());
        std::vector<double> weights(m);
#pragma omp for schedule(static)
        for (long long rank = 0; rank < total; ++rank) {
            const auto perm = unrank_permutation(rank, m);
            work = f.phi;
            std::fill(weights.begin(), weights.end(), 0.0);
            run_iteration(work, f.n, flat, perm, weights);
            local.add(weights, rank);
        }
    }
    for (const auto& local : locals) merged.merge(local);
#else
    (void)threads;
    std::vector<double> work(f.phi.size());
    std::vector<double> weights(m);
    for (long long rank = 0; rank < total; ++rank) {
        const auto perm = unrank_permutation(rank, m);
        work = f.phi;
        std::fill(weights.begin(), weights.end(), 0.0);
        run_iteration(work, f.n, flat, perm, weights);
        merged.add(weights, rank);
    }
#endif

    return materialize(f, catalog, std::move(merged), total);
}

EnumerationResult enumerate_decompositions_serial(const FluxField& f,
                                                  const CycleCatalog& catalog,
                                                  long long max_orderings) {
    check_input_balanced(f);
    const int m = int(catalog.size());
    const long long total = factorial_capped(m, max_orderings);
    if (total > max_orderings)
        throw CapError("catalog of " + std::to_string(m) + " cycles has more than " +
                       std::to_string(max_orderings) +
                       " orderings; use the seeded sampling mode instead");

    const FlatCycles flat(catalog, f.n);
    DistinctSet merged;
    std::vector<double> work(f.phi.size());
    std::vector<double> weights(m);
    for (long long rank = 0; rank < total; ++rank) {
        const auto perm = unrank_permutation(rank, m);
        work = f.phi;
        std::fill(weights.begin(), weights.end(), 0.0);
        run_iteration(work, f.n, flat, perm, weights);
        merged.add(weights, rank);
    }
    return materialize(f, catalog, std::move(merged), total);
}

EnumerationResult sample_decompositions(const FluxField& f, const CycleCatalog& catalog,
                                        long long samples, std::uint64_t seed, int threads) {
    check_input_balanced(f);
    const int m = int(catalog.size());
    const FlatCycles flat(catalog, f.n);

    // Orderings come in chunks with per-chunk generators seeded from (seed,
    // chunk), so the sampled set does not depend on the thread count. The
    // rank stored for a sample encodes (chunk, position) for regeneration.
    constexpr long long kChunk = 1 << 10;
    const long long n_chunks = (samples + kChunk - 1) / kChunk;
    DistinctSet merged;

    const auto run_chunk = [&](long long chunk, DistinctSet& out) {
        const long long begin = chunk * kChunk;
        const long long end = std::min(samples, begin + kChunk);
        std::vector<double> work(f.phi.size());
        std::vector<double> weights(m);
        for (long long s = begin; s < end; ++s) {
            const long long rank = (chunk << 20) | (s - begin);
            std::mt19937_64 rng(mix_seed(seed ^ std::uint64_t(chunk), std::uint64_t(rank)));
            auto perm = identity_ordering(m);
            std::shuffle(perm.begin(), perm.end(), rng);
            work = f.phi;
            std::fill(weights.begin(), weights.end(), 0.0);
            run_iteration(work, f.n, flat, perm, weights);
            out.add(weights, rank);
        }
    };

#ifdef _OPENMP
    const int team = threads > 0 ? threads : omp_get_max_threads();
    std::vector<DistinctSet> locals(static_cast<std::size_t>(team));
#pragma omp parallel num_threads(team)
    {
        DistinctSet& local = locals[std::size_t(omp_get_thread_num())];
#pragma omp for schedule(static)
        for (long long chunk = 0; chunk < n_chunks; ++chunk) run_chunk(chunk, local);
    }
    for (const auto& local : locals) merged.merge(local);
#else
    (void)threads;
    for (long long chunk = 0; chunk < n_chunks; ++chunk) run_chunk(chunk, merged);
#endif

    // Regenerate the representative orderings from their (chunk, position) ranks.
    std::vector<std::size_t> order(merged.weights.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return merged.first_rank[a] < merged.first_rank[b];
    });
    EnumerationResult result;
    result.orderings_tried = samples;
    result.exhaustive = false;
    for (std::size_t idx : order) {
        const long long rank = merged.first_rank[idx];
        const long long chunk = rank >> 20;
        std::mt19937_64 rng(mix_seed(seed ^ std::uint64_t(chunk), std::uint64_t(rank)));
        auto perm = identity_ordering(m);
        std::shuffle(perm.begin(), perm.end(), rng);
        result.distinct.push_back(decompose(f, catalog, perm));
    }
    return result;
}

DbCurrentSplit db_current_split(const FluxField& f, const CycleCatalog& catalog) {
    std::vector<int> ord;
    ord.reserve(catalog.size());
    for (std::size_t k = 0; k < catalog.size(); ++k)
        if (catalog.cycles[k].length() == 2) ord.push_back(int(k));
    const std::size_t n_two = ord.size();
    for (std::size_t k = 0; k < catalog.size(); ++k)
        if (catalog.cycles[k].length() > 2) ord.push_back(int(k));

    CycleDecomposition full = decompose(f, catalog, ord);

    // 2-cycles are pairwise edge-disjoint, so each weight must equal the
    // pair minimum of the untouched input field.
    for (std::size_t t = 0; t < n_two; ++t) {
        const int k = ord[t];
        const auto verts = catalog.cycles[k].vertices();
        const double expected = std::min(f(verts[0], verts[1]), f(verts[1], verts[0]));
        if (full.weights[k] != expected)
            throw NumericalError("2-cycle weight deviates from its edge-pair minimum",
                                 std::fabs(full.weights[k] - expected));
    }

    DbCurrentSplit split;
    split.two_cycle_part = full;
    split.current_part = full;
    split.two_cycle_part.ordering.assign(ord.begin(), ord.begin() + n_two);
    split.current_part.ordering.assign(ord.begin() + n_two, ord.end());
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        if (catalog.cycles[k].length() == 2)
            split.current_part.weights[k] = 0.0;
        else
            split.two_cycle_part.weights[k] = 0.0;
    }
    return split;
}

}  // namespace ness
