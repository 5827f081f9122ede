#include "cmlaws/oracle.hpp"

#include <stdexcept>
#include <vector>

namespace cmlaws {

std::int64_t double_factorial_matchings(std::int64_t m) {
    if (m % 2 != 0) throw std::invalid_argument("double factorial: odd m");
    std::int64_t result = 1;
    for (std::int64_t k = m - 1; k >= 1; k -= 2) result *= k;
    return result;
}

namespace {

// Recursively matches the lowest free half-edge with every free partner.
struct MatchingEnumerator {
    std::vector<int> owner;  // half-edge -> vertex
    std::vector<bool> used;
    std::vector<std::pair<int, int>> pairs;  // vertex pairs of matched half-edges
    const std::function<void(const Multigraph&)>& visit;
    int n;

    void recurse() {
        std::size_t lo = 0;
        while (lo < used.size() && used[lo]) ++lo;
        if (lo == used.size()) {
            Multigraph g(n);
            for (const auto& [u, v] : pairs) g.add_edge(u, v);
            visit(g);
            return;
        }
        used[lo] = true;
        for (std::size_t hi = lo + 1; hi < used.size(); ++hi) {
            if (used[hi]) continue;
            used[hi] = true;
            pairs.emplace_back(owner[lo], owner[hi]);
            recurse();
            pairs.pop_back();
            used[hi] = false;
        }
        used[lo] = false;
    }
};

}  // namespace

void for_each_matching(const DegreeSequence& d,
                       const std::function<void(const Multigraph&)>& visit,
                       std::int64_t max_half_edges) {
    const std::int64_t m = d.half_edges();
    if (m > max_half_edges)
        throw std::invalid_argument("for_each_matching: half-edge bound exceeded (" +
                                    std::to_string(m) + " > " + std::to_string(max_half_edges) +
                                    ")");
    std::vector<int> owner(static_cast<std::size_t>(m));
    std::int64_t pos = 0;
    for (int v = 0; v < d.n(); ++v)
        for (std::int32_t i = 0; i < d.degree(v); ++i) owner[static_cast<std::size_t>(pos++)] = v;
    if (m == 0) {
        visit(Multigraph(d.n()));
        return;
    }
    MatchingEnumerator e{std::move(owner), std::vector<bool>(static_cast<std::size_t>(m), false),
                         {}, visit, d.n()};
    e.recurse();
}

ExactDistribution enumerate_matchings(
    const DegreeSequence& d, const std::function<std::string(const Multigraph&)>& statistic,
    std::int64_t max_half_edges) {
    ExactDistribution dist;
    for_each_matching(
        d,
        [&](const Multigraph& g) {
            dist.counts[statistic(g)] += 1;
            dist.total += 1;
        },
        max_half_edges);
    return dist;
}

Rational exact_expectation(const DegreeSequence& d,
                           const std::function<std::int64_t(const Multigraph&)>& statistic,
                           std::int64_t max_half_edges) {
    std::int64_t sum = 0;
    std::int64_t total = 0;
    for_each_matching(
        d,
        [&](const Multigraph& g) {
            sum += statistic(g);
            total += 1;
        },
        max_half_edges);
    return Rational(sum, total);
}

Rational exact_simple_probability(const DegreeSequence& d, std::int64_t max_half_edges) {
    std::int64_t simple = 0;
    std::int64_t total = 0;
    for_each_matching(
        d,
        [&](const Multigraph& g) {
            simple += g.is_simple() ? 1 : 0;
            total += 1;
        },
        max_half_edges);
    return Rational(simple, total);
}

}  // namespace cmlaws
