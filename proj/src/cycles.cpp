#include "ness/cycles.hpp"

#include <algorithm>
#include <queue>

namespace ness {

namespace {

std::vector<int> rotate_min_first(std::vector<int> v) {
    const auto min_it = std::min_element(v.begin(), v.end());
    std::rotate(v.begin(), min_it, v.end());
    return v;
}

}  // namespace

Cycle::Cycle(std::vector<int> vertices) {
    if (vertices.size() < 2)
        throw ValidationError("a cycle needs at least two vertices");
    auto sorted = vertices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ValidationError("not self-avoiding: repeated vertex in cycle");
    v_ = rotate_min_first(std::move(vertices));
}

bool Cycle::passes(int i) const {
    return std::find(v_.begin(), v_.end(), i) != v_.end();
}

bool Cycle::passes(int i, int j) const {
    const std::size_t s = v_.size();
    for (std::size_t k = 0; k < s; ++k)
        if (v_[k] == i && v_[(k + 1) % s] == j) return true;
    return false;
}

std::vector<std::pair<int, int>> Cycle::edges() const {
    std::vector<std::pair<int, int>> e;
    const std::size_t s = v_.size();
    e.reserve(s);
    for (std::size_t k = 0; k < s; ++k) e.emplace_back(v_[k], v_[(k + 1) % s]);
    return e;
}

std::string Cycle::render() const {
    std::string out;
    for (std::size_t k = 0; k < v_.size(); ++k) {
        if (k) out += "→";
        out += std::to_string(v_[k] + 1);
    }
    return out;
}

Cycle canonicalize(std::vector<int> vertices) { return Cycle(std::move(vertices)); }

int passage(const Cycle& c, int i, int j) { return c.passes(i, j) ? 1 : 0; }
int passage(const Cycle& c, int i) { return c.passes(i) ? 1 : 0; }

Digraph::Digraph(int n_vertices) : n(n_vertices), adj(n_vertices) {}

void Digraph::add_edge(int u, int v) {
    if (u < 0 || u >= n || v < 0 || v >= n)
        throw ValidationError("edge endpoint out of range");
    if (u == v) throw ValidationError("loops are not part of the cycle space");
    auto& row = adj[u];
    const auto it = std::lower_bound(row.begin(), row.end(), v);
    if (it == row.end() || *it != v) row.insert(it, v);
}

bool Digraph::has_edge(int u, int v) const {
    const auto& row = adj[u];
    return std::binary_search(row.begin(), row.end(), v);
}

int Digraph::num_edges() const {
    int e = 0;
    for (const auto& row : adj) e += int(row.size());
    return e;
}

Digraph Digraph::support_of(const MarkovProcess& p) {
    Digraph g(p.n_states());
    for (int i = 0; i < p.n_states(); ++i)
        for (int j = 0; j < p.n_states(); ++j)
            if (i != j && p.rate(i, j) > 0.0) g.add_edge(i, j);
    return g;
}

std::optional<std::size_t> CycleCatalog::index_of(const Cycle& c) const {
    for (std::size_t k = 0; k < cycles.size(); ++k)
        if (cycles[k] == c) return k;
    return std::nullopt;
}

namespace {

// Core of Johnson's circuit enumeration: depth-first search from a root s
// restricted to vertices >= s, with the blocked set and block lists keeping
// dead branches from being revisited. Each cycle is reported exactly once,
// rooted at its minimum vertex.
struct CircuitSearch {
    const Digraph& g;
    std::size_t cap;
    int root = 0;
    std::vector<char> blocked;
    std::vector<std::vector<int>> block_list;
    std::vector<int> stack;
    std::vector<Cycle> found;

    explicit CircuitSearch(const Digraph& graph, std::size_t max_cycles)
        : g(graph), cap(max_cycles), blocked(graph.n, 0), block_list(graph.n) {}

    void unblock(int u) {
        blocked[u] = 0;
        for (int w : block_list[u])
            if (blocked[w]) unblock(w);
        block_list[u].clear();
    }

    bool circuit(int v) {
        bool closed = false;
        stack.push_back(v);
        blocked[v] = 1;
        for (int w : g.adj[v]) {
            if (w < root) continue;
            if (w == root) {
                if (found.size() >= cap)
                    throw CapError("cycle catalog exceeds cap of " + std::to_string(cap) +
                                   " cycles; restrict the graph or raise the cap");
                found.emplace_back(stack);
                closed = true;
            } else if (!blocked[w] && circuit(w)) {
                closed = true;
            }
        }
        if (closed) {
            unblock(v);
        } else {
            for (int w : g.adj[v]) {
                if (w < root) continue;
                auto& bl = block_list[w];
                if (std::find(bl.begin(), bl.end(), v) == bl.end()) bl.push_back(v);
            }
        }
        stack.pop_back();
        return closed;
    }

    void run() {
        for (root = 0; root < g.n; ++root) {
            std::fill(blocked.begin(), blocked.end(), 0);
            for (auto& bl : block_list) bl.clear();
            circuit(root);
        }
    }
};

bool strongly_connected(const Digraph& g) {
    if (g.n == 0) return false;
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<char> seen(g.n, 0);
        std::queue<int> q;
        seen[0] = 1;
        q.push(0);
        int count = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int v = 0; v < g.n; ++v) {
                if (seen[v]) continue;
                const bool edge = pass == 0 ? g.has_edge(u, v) : g.has_edge(v, u);
                if (edge) {
                    seen[v] = 1;
                    ++count;
                    q.push(v);
                }
            }
        }
        if (count != g.n) return false;
    }
    return true;
}

}  // namespace

CycleCatalog enumerate_cycles(const Digraph& g, std::size_t max_cycles) {
    CircuitSearch search(g, max_cycles);
    search.run();
    std::sort(search.found.begin(), search.found.end(), [](const Cycle& a, const Cycle& b) {
        if (a.length() != b.length()) return a.length() < b.length();
        return a < b;
    });
    return {std::move(search.found)};
}

CycleCounts cycle_counts(const Digraph& g, std::size_t max_cycles) {
    if (!strongly_connected(g))
        throw ValidationError("cycle counts require a strongly connected graph");
    CycleCounts c;
    c.total = enumerate_cycles(g, max_cycles).size();
    c.betti = long(g.num_edges()) - g.n + 1;
    long undirected = 0;
    for (int u = 0; u < g.n; ++u)
        for (int v : g.adj[u])
            if (u < v || !g.has_edge(v, u)) ++undirected;
    c.snt = undirected - g.n + 1;
    return c;
}

}  // namespace ness
