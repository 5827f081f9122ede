#include <doctest.h>

#include <algorithm>
#include <functional>
#include <numeric>

#include "cmlaws/fragment.hpp"
#include "cmlaws/multigraph.hpp"
#include "cmlaws/rng.hpp"

using namespace cmlaws;

namespace {

// Brute-force cycle counter: every vertex subset of size k, every cyclic
// order up to rotation and reflection, weighted by edge multiplicities.
std::int64_t cycles_oracle(const Multigraph& g, int k) {
    if (k == 1) return g.total_loops();
    if (k == 2) {
        std::int64_t total = 0;
        for (const auto& [u, v, m] : g.edge_list())
            total += static_cast<std::int64_t>(m) * (m - 1) / 2;
        return total;
    }
    const int n = g.n();
    std::vector<int> subset;
    std::int64_t total = 0;
    std::function<void(int)> choose = [&](int start) {
        if (static_cast<int>(subset.size()) == k) {
            // orders fixing subset[0], direction normalized by second < last
            std::vector<int> rest(subset.begin() + 1, subset.end());
            std::sort(rest.begin(), rest.end());
            do {
                if (rest.front() > rest.back()) continue;
                std::int64_t weight = g.multiplicity(subset[0], rest.front());
                for (std::size_t i = 0; i + 1 < rest.size(); ++i)
                    weight *= g.multiplicity(rest[i], rest[i + 1]);
                weight *= g.multiplicity(rest.back(), subset[0]);
                total += weight;
            } while (std::next_permutation(rest.begin(), rest.end()));
            return;
        }
        for (int v = start; v < n; ++v) {
            subset.push_back(v);
            choose(v + 1);
            subset.pop_back();
        }
    };
    choose(0);
    return total;
}

Multigraph random_multigraph(RngStream& rng) {
    int n = 1 + static_cast<int>(rng.below(8));
    Multigraph g(n);
    int edges = static_cast<int>(rng.below(9));
    for (int e = 0; e < edges; ++e) {
        int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        g.add_edge(u, v);
    }
    return g;
}

}  // namespace

TEST_CASE("from_matching worked examples") {
    {
        Multigraph g = from_matching(DegreeSequence({2, 0}), {{1, 2}});
        CHECK(g.loops_at(0) == 1);
        CHECK(g.total_loops() == 1);
    }
    {
        Multigraph g = from_matching(DegreeSequence({1, 1}), {{1, 2}});
        CHECK(g.multiplicity(0, 1) == 1);
        CHECK(g.is_simple());
    }
    {
        Multigraph g = from_matching(DegreeSequence({2, 2}), {{1, 3}, {2, 4}});
        CHECK(g.multiplicity(0, 1) == 2);
        CHECK_FALSE(g.is_simple());
    }
    CHECK_THROWS_AS(from_matching(DegreeSequence({2, 2}), {{1, 3}, {1, 4}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(from_matching(DegreeSequence({2, 2}), {{1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(from_matching(DegreeSequence({2, 2}), {{1, 2}, {3, 5}}),
                    std::invalid_argument);
}

TEST_CASE("degrees of a matched multigraph equal the sequence") {
    DegreeSequence d({3, 2, 2, 1, 0});
    Multigraph g = from_matching(d, {{1, 4}, {2, 6}, {3, 8}, {5, 7}});
    for (int v = 0; v < d.n(); ++v) CHECK(g.degree(v) == d.degree(v));
}

TEST_CASE("count_cycles worked examples") {
    {
        Multigraph g(1);
        g.add_edge(0, 0);
        auto c = count_cycles(g, 3);
        CHECK(c.at(1) == 1);
        CHECK(c.at(2) == 0);
        CHECK(c.at(3) == 0);
    }
    {
        Multigraph g(2);
        g.add_edge(0, 1, 3);
        auto c = count_cycles(g, 2);
        CHECK(c.at(2) == 3);  // C(3,2)
    }
    {
        Multigraph g(3);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 0);
        auto c = count_cycles(g, 4);
        CHECK(c.at(3) == 1);
        CHECK(c.at(4) == 0);
    }
}

TEST_CASE("count_cycles agrees with the subset/cyclic-order oracle") {
    RngStream rng(4242);
    for (int rep = 0; rep < 1000; ++rep) {
        Multigraph g = random_multigraph(rng);
        auto counts = count_cycles(g, 8);
        for (int k = 1; k <= std::min(8, std::max(1, g.n())); ++k)
            CHECK(counts.at(k) == cycles_oracle(g, k));
    }
}

TEST_CASE("classify_components worked examples") {
    {
        Multigraph g(4);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 0);
        auto rep = classify_components(g);
        CHECK(rep.unicyclic == 1);
        CHECK(rep.trees == 1);  // the isolated vertex
        CHECK(rep.complex_count == 0);
    }
    {
        // two triangles sharing one vertex: 5 vertices, 6 edges
        Multigraph g(5);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 0);
        g.add_edge(0, 3);
        g.add_edge(3, 4);
        g.add_edge(4, 0);
        auto rep = classify_components(g);
        CHECK(rep.complex_count == 1);
        CHECK(rep.max_excess == 1);
    }
    {
        Multigraph g(3);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        auto rep = classify_components(g);
        CHECK(rep.trees == 1);
        CHECK(rep.components.size() == 1);
        CHECK(rep.components[0].excess == -1);
    }
}

TEST_CASE("extract_fragment worked examples") {
    {
        Multigraph g(4);
        g.add_edge(0, 1);
        g.add_edge(2, 3);
        auto frag = extract_fragment(g);
        CHECK(frag.empty());
        CHECK(frag.code() == "");
    }
    {
        // loop with one pendant edge, plus a complex component
        Multigraph g(7);
        g.add_edge(0, 0);
        g.add_edge(0, 1);
        g.add_edge(2, 3);
        g.add_edge(3, 4);
        g.add_edge(4, 2);
        g.add_edge(2, 5);
        g.add_edge(5, 3);  // second cycle through 2-3
        g.add_edge(5, 6);
        auto frag = extract_fragment(g);
        CHECK(frag.component_codes.size() == 1);
        CHECK(frag.cycle_type.at(1) == 1);
        CHECK(frag.vertex_count == 2);
    }
    {
        Multigraph g(6);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 0);
        g.add_edge(3, 4);
        g.add_edge(4, 5);
        g.add_edge(5, 3);
        auto frag = extract_fragment(g);
        CHECK(frag.cycle_type.at(3) == 2);
        CHECK(frag.component_codes[0] == frag.component_codes[1]);
    }
}

TEST_CASE("canonical codes are isomorphism invariants") {
    // triangle under every labeling
    std::vector<int> perm{0, 1, 2};
    std::string first;
    std::sort(perm.begin(), perm.end());
    do {
        Multigraph g(3);
        g.add_edge(perm[0], perm[1]);
        g.add_edge(perm[1], perm[2]);
        g.add_edge(perm[2], perm[0]);
        auto code = canonicalize_component(g, {0, 1, 2});
        if (first.empty())
            first = code;
        else
            CHECK(code == first);
    } while (std::next_permutation(perm.begin(), perm.end()));

    // 4-cycle with a pendant at different cycle vertices
    auto pendant_code = [](int attach) {
        Multigraph g(5);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 3);
        g.add_edge(3, 0);
        g.add_edge(attach, 4);
        return canonicalize_component(g, {0, 1, 2, 3, 4});
    };
    CHECK(pendant_code(0) == pendant_code(2));
    CHECK(pendant_code(1) == pendant_code(3));
    CHECK(pendant_code(0) == pendant_code(1));
}

TEST_CASE("near-isomorphic components get distinct codes") {
    // loop with pendant path of length 2 vs loop with two pendant leaves
    Multigraph path(3);
    path.add_edge(0, 0);
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    Multigraph leaves(3);
    leaves.add_edge(0, 0);
    leaves.add_edge(0, 1);
    leaves.add_edge(0, 2);
    auto code_path = canonicalize_component(path, {0, 1, 2});
    auto code_leaves = canonicalize_component(leaves, {0, 1, 2});
    CHECK(code_path != code_leaves);
    CHECK_FALSE(isomorphic_bruteforce(path, leaves));
    CHECK(isomorphic_bruteforce(decode_component(code_path), path));
    CHECK(isomorphic_bruteforce(decode_component(code_leaves), leaves));
}

TEST_CASE("canonicalize rejects non-unicyclic input") {
    Multigraph tree(2);
    tree.add_edge(0, 1);
    CHECK_THROWS_AS(canonicalize_component(tree, {0, 1}), std::invalid_argument);
    Multigraph complex_comp(2);
    complex_comp.add_edge(0, 1, 3);
    CHECK_THROWS_AS(canonicalize_component(complex_comp, {0, 1}), std::invalid_argument);
}

TEST_CASE("decode-encode idempotence on random fragments") {
    RngStream rng(2024);
    int done = 0;
    while (done < 300) {
        // random unicyclic component: cycle of length k plus random grafts
        int k = 1 + static_cast<int>(rng.below(5));
        int extra = static_cast<int>(rng.below(5));
        Multigraph g(k + extra);
        if (k == 1) {
            g.add_edge(0, 0);
        } else if (k == 2) {
            g.add_edge(0, 1, 2);
        } else {
            for (int i = 0; i < k; ++i) g.add_edge(i, (i + 1) % k);
        }
        for (int v = k; v < k + extra; ++v)
            g.add_edge(static_cast<int>(rng.below(static_cast<std::uint64_t>(v))), v);
        std::vector<int> vertices(static_cast<std::size_t>(k + extra));
        std::iota(vertices.begin(), vertices.end(), 0);
        auto code = canonicalize_component(g, vertices);
        Multigraph decoded = decode_component(code);
        std::vector<int> all(static_cast<std::size_t>(decoded.n()));
        std::iota(all.begin(), all.end(), 0);
        CHECK(canonicalize_component(decoded, all) == code);
        if (decoded.n() <= 8) CHECK(isomorphic_bruteforce(g, decoded));
        ++done;
    }
}

TEST_CASE("aut and authe worked examples") {
    for (int k : {1, 2, 3, 5, 8}) {
        std::string code;
        if (k == 1)
            code = "C1[()]";
        else {
            code = "C" + std::to_string(k) + "[";
            for (int i = 0; i < k; ++i) code += i ? ",()" : "()";
            code += "]";
        }
        auto frag = fragment_from_code(code);
        CHECK(authe(frag) == 2 * k);
    }
    auto loop = fragment_from_code("C1[()]");
    CHECK(aut(loop) == 1);
    CHECK(authe(loop) == 2);

    auto two_triangles = fragment_from_code("C3[(),(),()]+C3[(),(),()]");
    CHECK(aut(two_triangles) == 72);
    CHECK(authe(two_triangles) == 72);
}

TEST_CASE("aut agrees with the permutation brute force") {
    RngStream rng(555);
    int done = 0;
    while (done < 200) {
        int k = 1 + static_cast<int>(rng.below(4));
        int extra = static_cast<int>(rng.below(4));
        if (k + extra > 8) continue;
        Multigraph g(k + extra);
        if (k == 1) {
            g.add_edge(0, 0);
        } else if (k == 2) {
            g.add_edge(0, 1, 2);
        } else {
            for (int i = 0; i < k; ++i) g.add_edge(i, (i + 1) % k);
        }
        for (int v = k; v < k + extra; ++v)
            g.add_edge(static_cast<int>(rng.below(static_cast<std::uint64_t>(v))), v);
        auto frag = extract_fragment(g);
        CHECK(aut(frag) == aut_bruteforce(g));
        ++done;
    }
}

TEST_CASE("fragment censuses are consistent") {
    // C3 with one pendant leaf per cycle vertex, plus a bare loop
    auto frag = fragment_from_code("C1[()]+C3[(()),(()),(())]");
    CHECK(frag.vertex_count == 7);
    CHECK(frag.cycle_type.at(1) == 1);
    CHECK(frag.cycle_type.at(3) == 1);
    // sum_k k a_k = cycle vertices
    int lhs = 0;
    for (const auto& [k, a] : frag.cycle_type) lhs += k * a;
    int rhs = 0;
    for (const auto& [i, h] : frag.deg_cycle) rhs += h;
    CHECK(lhs == rhs);
    // h_i = h_i^r + h_i^t
    for (const auto& [i, h] : frag.deg_all) {
        int r = frag.deg_cycle.count(i) ? frag.deg_cycle.at(i) : 0;
        int t = frag.deg_tree.count(i) ? frag.deg_tree.at(i) : 0;
        CHECK(h == r + t);
    }
    CHECK(frag.deg_all.at(2) == 1);   // loop vertex
    CHECK(frag.deg_all.at(3) == 3);   // decorated cycle vertices
    CHECK(frag.deg_all.at(1) == 3);   // leaves
}

TEST_CASE("two_core strips trees and keeps cycles") {
    Multigraph g(6);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(2, 0);
    g.add_edge(2, 3);
    g.add_edge(3, 4);
    g.add_edge(5, 5);
    auto core = two_core(g);
    CHECK(core[0]);
    CHECK(core[1]);
    CHECK(core[2]);
    CHECK_FALSE(core[3]);
    CHECK_FALSE(core[4]);
    CHECK(core[5]);  // loops keep their vertex in the core
    CHECK(count_total_cycles(g) == 2);
}
