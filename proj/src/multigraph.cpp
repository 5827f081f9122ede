#include "cmlaws/multigraph.hpp"

#include <algorithm>
#include <numeric>

namespace cmlaws {

namespace {

inline std::uint64_t edge_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
}

}  // namespace

Multigraph::Multigraph(int n) : n_(n), degrees_(static_cast<std::size_t>(n), 0) {}

void Multigraph::add_edge(int u, int v, int count) {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw std::out_of_range("add_edge: vertex index");
    if (count <= 0) throw std::invalid_argument("add_edge: nonpositive multiplicity");
    adj_valid_ = false;
    edge_count_ += count;
    if (u == v) {
        loops_[u] += count;
        degrees_[static_cast<std::size_t>(u)] += 2 * count;
        total_loops_ += count;
        simple_ = false;
        return;
    }
    int& m = mult_[edge_key(u, v)];
    m += count;
    if (m > 1) simple_ = false;
    degrees_[static_cast<std::size_t>(u)] += count;
    degrees_[static_cast<std::size_t>(v)] += count;
}

int Multigraph::loops_at(int v) const {
    auto it = loops_.find(v);
    return it == loops_.end() ? 0 : it->second;
}

int Multigraph::multiplicity(int u, int v) const {
    if (u == v) return loops_at(u);
    auto it = mult_.find(edge_key(u, v));
    return it == mult_.end() ? 0 : it->second;
}

const std::vector<std::vector<std::pair<int, int>>>& Multigraph::adjacency() const {
    if (!adj_valid_) {
        adj_.assign(static_cast<std::size_t>(n_), {});
        for (const auto& [key, m] : mult_) {
            int u = static_cast<int>(key >> 32);
            int v = static_cast<int>(key & 0xFFFFFFFFu);
            adj_[static_cast<std::size_t>(u)].emplace_back(v, m);
            adj_[static_cast<std::size_t>(v)].emplace_back(u, m);
        }
        for (auto& row : adj_) std::sort(row.begin(), row.end());
        adj_valid_ = true;
    }
    return adj_;
}

std::vector<std::tuple<int, int, int>> Multigraph::edge_list() const {
    std::vector<std::tuple<int, int, int>> edges;
    edges.reserve(mult_.size());
    for (const auto& [key, m] : mult_)
        edges.emplace_back(static_cast<int>(key >> 32), static_cast<int>(key & 0xFFFFFFFFu), m);
    std::sort(edges.begin(), edges.end());
    return edges;
}

Multigraph from_matching(const DegreeSequence& d,
                         const std::vector<std::pair<std::int64_t, std::int64_t>>& matching) {
    const std::int64_t m = d.half_edges();
    if (static_cast<std::int64_t>(matching.size()) * 2 != m)
        throw std::invalid_argument("from_matching: wrong number of pairs");

    // owner[e-1] = vertex of half-edge e under the prefix-sum convention
    std::vector<int> owner(static_cast<std::size_t>(m));
    std::int64_t pos = 0;
    for (int v = 0; v < d.n(); ++v)
        for (std::int32_t i = 0; i < d.degree(v); ++i) owner[static_cast<std::size_t>(pos++)] = v;

    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    Multigraph g(d.n());
    for (const auto& [a, b] : matching) {
        if (a < 1 || a > m || b < 1 || b > m || a == b)
            throw std::invalid_argument("from_matching: half-edge out of range");
        if (seen[static_cast<std::size_t>(a - 1)] || seen[static_cast<std::size_t>(b - 1)])
            throw std::invalid_argument("from_matching: repeated half-edge");
        seen[static_cast<std::size_t>(a - 1)] = seen[static_cast<std::size_t>(b - 1)] = true;
        g.add_edge(owner[static_cast<std::size_t>(a - 1)], owner[static_cast<std::size_t>(b - 1)]);
    }
    return g;
}

std::vector<bool> two_core(const Multigraph& g) {
    const auto& adj = g.adjacency();
    std::vector<int> deg(static_cast<std::size_t>(g.n()));
    for (int v = 0; v < g.n(); ++v) deg[static_cast<std::size_t>(v)] = g.degree(v);
    std::vector<int> stack;
    std::vector<bool> alive(static_cast<std::size_t>(g.n()), true);
    for (int v = 0; v < g.n(); ++v)
        if (deg[static_cast<std::size_t>(v)] <= 1) stack.push_back(v);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (!alive[static_cast<std::size_t>(v)]) continue;
        alive[static_cast<std::size_t>(v)] = false;
        for (const auto& [u, m] : adj[static_cast<std::size_t>(v)]) {
            if (!alive[static_cast<std::size_t>(u)]) continue;
            deg[static_cast<std::size_t>(u)] -= m;
            if (deg[static_cast<std::size_t>(u)] <= 1) stack.push_back(u);
        }
    }
    return alive;
}

namespace {

// DFS cycle enumeration over the 2-core. Each vertex cycle of length >= 3 is
// visited once: the root is its minimum vertex and the second vertex is
// smaller than the last. Contributes the product of multiplicities along.
struct CycleDfs {
    const std::vector<std::vector<std::pair<int, int>>>& adj;
    const std::vector<bool>& core;
    int kmax;
    std::int64_t budget;
    std::vector<std::int64_t>& out;  // out[k-1] accumulates X_k
    std::vector<int> path;
    std::vector<bool> on_path;

    void run(int root) {
        path = {root};
        on_path[static_cast<std::size_t>(root)] = true;
        extend(root, root, 1);
        on_path[static_cast<std::size_t>(root)] = false;
    }

    void extend(int root, int v, std::int64_t weight) {
        if (--budget < 0) throw CycleBudgetExceeded();
        for (const auto& [u, m] : adj[static_cast<std::size_t>(v)]) {
            if (u == root && path.size() >= 3) {
                if (path[1] < path.back())
                    out[path.size() - 1] += weight * m;
                continue;
            }
            if (u <= root || on_path[static_cast<std::size_t>(u)] ||
                !core[static_cast<std::size_t>(u)])
                continue;
            if (static_cast<int>(path.size()) >= kmax) continue;
            path.push_back(u);
            on_path[static_cast<std::size_t>(u)] = true;
            extend(root, u, weight * m);
            on_path[static_cast<std::size_t>(u)] = false;
            path.pop_back();
        }
    }
};

}  // namespace

CycleCounts count_cycles(const Multigraph& g, int kmax, std::int64_t budget) {
    if (kmax < 1) throw std::invalid_argument("count_cycles: kmax must be >= 1");
    CycleCounts result;
    result.counts.assign(static_cast<std::size_t>(kmax), 0);
    result.counts[0] = g.total_loops();
    if (kmax == 1) return result;
    for (const auto& [u, v, m] : g.edge_list())
        if (m >= 2) result.counts[1] += static_cast<std::int64_t>(m) * (m - 1) / 2;
    if (kmax == 2) return result;

    const auto core = two_core(g);
    const auto& adj = g.adjacency();
    std::vector<bool> on_path(static_cast<std::size_t>(g.n()), false);
    CycleDfs dfs{adj, core, kmax, budget, result.counts, {}, std::move(on_path)};
    for (int v = 0; v < g.n(); ++v)
        if (core[static_cast<std::size_t>(v)]) dfs.run(v);
    return result;
}

std::int64_t count_total_cycles(const Multigraph& g, std::int64_t budget) {
    auto counts = count_cycles(g, std::max(3, g.n()), budget);
    return std::accumulate(counts.counts.begin(), counts.counts.end(), std::int64_t{0});
}

ComponentReport classify_components(const Multigraph& g) {
    std::vector<int> parent(static_cast<std::size_t>(g.n()));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            parent[static_cast<std::size_t>(v)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    };
    for (const auto& [u, v, m] : g.edge_list()) {
        int a = find(u), b = find(v);
        if (a != b) parent[static_cast<std::size_t>(a)] = b;
    }

    std::unordered_map<int, std::size_t> index;
    ComponentReport report;
    for (int v = 0; v < g.n(); ++v) {
        int r = find(v);
        auto [it, inserted] = index.try_emplace(r, report.components.size());
        if (inserted) report.components.emplace_back();
        report.components[it->second].vertices.push_back(v);
    }
    for (const auto& [u, v, m] : g.edge_list())
        report.components[index[find(u)]].edges += m;
    for (const auto& [v, l] : g.loops()) report.components[index[find(v)]].edges += l;

    for (auto& comp : report.components) {
        comp.excess = comp.edges - static_cast<std::int64_t>(comp.vertices.size());
        if (comp.excess < 0) {
            comp.cls = ComponentClass::Tree;
            ++report.trees;
        } else if (comp.excess == 0) {
            comp.cls = ComponentClass::Unicyclic;
            ++report.unicyclic;
        } else {
            comp.cls = ComponentClass::Complex;
            ++report.complex_count;
        }
        report.max_excess = std::max(report.max_excess, comp.excess);
    }
    return report;
}

}  // namespace cmlaws
