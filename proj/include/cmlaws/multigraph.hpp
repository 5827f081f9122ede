#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cmlaws/degseq.hpp"

namespace cmlaws {

struct CycleBudgetExceeded : std::runtime_error {
    CycleBudgetExceeded() : std::runtime_error("cycle budget exceeded") {}
};

/// Labeled multigraph with loop and multiplicity bookkeeping. Vertices are
/// 0-based. Treated as immutable once built; analyses are pure functions.
class Multigraph {
public:
    explicit Multigraph(int n = 0);

    void add_edge(int u, int v, int count = 1);  // u == v adds loops

    int n() const { return n_; }
    /// Number of edges as a multiset (each loop counts once).
    std::int64_t edge_count() const { return edge_count_; }
    /// Degree, with each loop contributing two.
    int degree(int v) const { return degrees_[static_cast<std::size_t>(v)]; }
    int loops_at(int v) const;
    int multiplicity(int u, int v) const;
    std::int64_t total_loops() const { return total_loops_; }
    bool is_simple() const { return simple_; }

    /// Distinct-neighbor adjacency (loops excluded): for each vertex, the
    /// list of (neighbor, multiplicity) pairs.
    const std::vector<std::vector<std::pair<int, int>>>& adjacency() const;

    /// Non-loop edges as (u, v, multiplicity) with u < v, plus loops via
    /// the loops() map. Iteration order is deterministic.
    std::vector<std::tuple<int, int, int>> edge_list() const;
    const std::unordered_map<int, int>& loops() const { return loops_; }

private:
    int n_ = 0;
    std::vector<int> degrees_;
    std::unordered_map<std::uint64_t, int> mult_;  // key (min<<32)|max, u != v
    std::unordered_map<int, int> loops_;
    std::int64_t edge_count_ = 0;
    std::int64_t total_loops_ = 0;
    bool simple_ = true;
    mutable std::vector<std::vector<std::pair<int, int>>> adj_;
    mutable bool adj_valid_ = false;
};

enum class ComponentClass { Tree, Unicyclic, Complex };

struct ComponentInfo {
    std::vector<int> vertices;
    std::int64_t edges = 0;
    std::int64_t excess = 0;  // edges - vertices
    ComponentClass cls = ComponentClass::Tree;
};

struct ComponentReport {
    std::vector<ComponentInfo> components;
    int trees = 0;
    int unicyclic = 0;
    int complex_count = 0;
    std::int64_t max_excess = -1;
};

/// Cycle counts X_k for k = 1..K: X_1 counts loops, X_2 counts pairs of
/// parallel edges, and X_k for k >= 3 counts sub-multigraph copies of the
/// k-cycle (product of edge multiplicities over each vertex cycle).
struct CycleCounts {
    std::vector<std::int64_t> counts;  // counts[k-1] = X_k
    std::int64_t at(int k) const { return counts[static_cast<std::size_t>(k) - 1]; }
};

/// Builds the multigraph whose half-edge pairs are the given perfect matching
/// of [1..m]. Half-edge e belongs to vertex v iff sum_{u<v} d_u < e <= sum_{u<=v} d_u.
/// Matchings with repeated or missing half-edges are rejected.
Multigraph from_matching(const DegreeSequence& d,
                         const std::vector<std::pair<std::int64_t, std::int64_t>>& matching);

CycleCounts count_cycles(const Multigraph& g, int kmax, std::int64_t budget = 50'000'000);

/// Total number of cycles of every length (the counting convention of
/// CycleCounts summed over all k). Works on the 2-core, so it stays cheap on
/// sparse graphs whose cyclic part is small.
std::int64_t count_total_cycles(const Multigraph& g, std::int64_t budget = 50'000'000);

ComponentReport classify_components(const Multigraph& g);

/// Vertices remaining after iterated removal of degree <= 1 vertices.
std::vector<bool> two_core(const Multigraph& g);

}  // namespace cmlaws
