#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ness/cycles.hpp"
#include "ness/markov.hpp"

namespace ness {

// Result of the iterative cycle decomposition. Weights are aligned with the
// catalog (zero-weight cycles stay recorded so orderings remain comparable);
// `ordering` is the cycle sequence that produced them.
struct CycleDecomposition {
    CycleCatalog catalog;
    std::vector<int> ordering;     // catalog indices in the order applied
    std::vector<double> weights;   // catalog-aligned, all >= 0
    FluxField residual;            // zero after successful termination

    // Number of strictly positive weights.
    int support() const;
};

// Runs the deterministic iteration: visit the cycles in `ordering` (empty =
// catalog order), assign each the minimum current flux along its edges,
// subtract, and terminate once every cycle has been visited.
//
// The input must satisfy the node condition within kLinearTol (this is the
// hypothesis under which termination with a zero residual is guaranteed);
// a ValidationError names the worst vertex otherwise. The node condition of
// the working field is re-verified after every subtraction and the final
// residual and reconstruction are checked against kLinearTol, so a returned
// decomposition is always a proven exact representation of the input.
CycleDecomposition decompose(const FluxField& f, const CycleCatalog& catalog,
                             std::span<const int> ordering = {});

// Superposes the weighted cycle indicators back into a flux field.
FluxField reconstruct_fluxes(const CycleDecomposition& d);

// 10! — every ordering of up to ten cycles is enumerated by default.
inline constexpr long long kDefaultOrderingCap = 3'628'800;

struct EnumerationResult {
    std::vector<CycleDecomposition> distinct;  // deduplicated by weight vector
    long long orderings_tried = 0;
    bool exhaustive = false;  // false => distinct count is only a lower bound
};

// Runs the decomposition over all M! cycle orderings and deduplicates the
// weight vectors (tolerance 1e-10 relative to the largest weight). Throws
// CapError when M! exceeds max_orderings; use sample_decompositions then.
// threads > 0 pins the OpenMP team size; the merge is deterministic either way.
EnumerationResult enumerate_decompositions(const FluxField& f, const CycleCatalog& catalog,
                                           long long max_orderings = kDefaultOrderingCap,
                                           int threads = 0);

// Single-threaded reference implementation, kept verbatim for testing the
// parallel kernel against.
EnumerationResult enumerate_decompositions_serial(const FluxField& f,
                                                  const CycleCatalog& catalog,
                                                  long long max_orderings = kDefaultOrderingCap);

// Seeded random-ordering sweep for catalogs too large to exhaust. The result
// is a lower bound on the number of distinct decompositions and is flagged
// as non-exhaustive. Deterministic for a fixed seed and sample count.
EnumerationResult sample_decompositions(const FluxField& f, const CycleCatalog& catalog,
                                        long long samples, std::uint64_t seed,
                                        int threads = 0);

// Detailed-balance / current split: the 2-cycles are placed first in the
// ordering, so each one absorbs min(phi^i_j, phi^j_i) of its edge pair
// (2-cycles are pairwise edge-disjoint, which is asserted), and the longer
// cycles decompose the remaining current field.
struct DbCurrentSplit {
    CycleDecomposition two_cycle_part;  // weights only on 2-cycles
    CycleDecomposition current_part;    // weights only on longer cycles
};

DbCurrentSplit db_current_split(const FluxField& f, const CycleCatalog& catalog);

}  // namespace ness
