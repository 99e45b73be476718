#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ness/error.hpp"
#include "ness/markov.hpp"

namespace ness {

// A simple directed cycle: a self-avoiding closed vertex sequence of length
// >= 2, identified up to rotation. Stored canonically with the smallest
// vertex first, so equality and ordering are rotation invariant.
class Cycle {
 public:
    // Canonicalizes on construction. Throws ValidationError on repeated
    // vertices or length < 2.
    explicit Cycle(std::vector<int> vertices);

    std::span<const int> vertices() const { return v_; }
    int length() const { return int(v_.size()); }

    bool passes(int i) const;          // vertex indicator
    bool passes(int i, int j) const;   // directed edge indicator

    // Consecutive vertex pairs, wrap-around included.
    std::vector<std::pair<int, int>> edges() const;

    // 1-based rendering, e.g. "1→3→6→4".
    std::string render() const;

    auto operator<=>(const Cycle&) const = default;

 private:
    std::vector<int> v_;
};

// Rotates so the minimum vertex leads; idempotent.
Cycle canonicalize(std::vector<int> vertices);

// Passage indicators: 1 when the cycle traverses the directed edge (i,j),
// respectively visits vertex i.
int passage(const Cycle& c, int i, int j);
int passage(const Cycle& c, int i);

// Plain directed graph used for cycle enumeration.
struct Digraph {
    int n = 0;
    std::vector<std::vector<int>> adj;  // sorted neighbor lists

    explicit Digraph(int n_vertices);
    void add_edge(int u, int v);
    bool has_edge(int u, int v) const;
    int num_edges() const;

    // Support graph of the positive off-diagonal rates.
    static Digraph support_of(const MarkovProcess& p);
};

// All simple directed cycles of a graph, in the library's default order:
// by length first, then lexicographically by canonical vertex sequence.
struct CycleCatalog {
    std::vector<Cycle> cycles;

    std::size_t size() const { return cycles.size(); }
    std::optional<std::size_t> index_of(const Cycle& c) const;
};

inline constexpr std::size_t kDefaultCycleCap = 1'000'000;

// Johnson-style enumeration of every simple directed cycle. Deterministic,
// default-ordered output. Throws CapError when the catalog would exceed
// max_cycles; restrict the graph or raise the cap in that case.
CycleCatalog enumerate_cycles(const Digraph& g, std::size_t max_cycles = kDefaultCycleCap);

struct CycleCounts {
    std::size_t total = 0;  // number of simple directed cycles
    long betti = 0;         // |E| - N + 1 over directed edges
    long snt = 0;           // U - N + 1 over unordered supported pairs
};

// Cycle-count summary of a strongly connected graph.
CycleCounts cycle_counts(const Digraph& g, std::size_t max_cycles = kDefaultCycleCap);

}  // namespace ness
