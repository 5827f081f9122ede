#include "cmlaws/sampler.hpp"

#include <stdexcept>

namespace cmlaws {

Multigraph sample_cm(const DegreeSequence& d, RngStream& rng) {
    const std::int64_t m = d.half_edges();
    if (m % 2 != 0) throw std::invalid_argument("sample_cm: odd half-edge total");

    std::vector<int> owner(static_cast<std::size_t>(m));
    std::int64_t pos = 0;
    for (int v = 0; v < d.n(); ++v)
        for (std::int32_t i = 0; i < d.degree(v); ++i) owner[static_cast<std::size_t>(pos++)] = v;

    rng.shuffle(owner);
    Multigraph g(d.n());
    for (std::int64_t i = 0; i < m; i += 2)
        g.add_edge(owner[static_cast<std::size_t>(i)], owner[static_cast<std::size_t>(i + 1)]);
    return g;
}

Multigraph sample_cm(const DegreeSequence& d, std::uint64_t seed) {
    RngStream rng(seed);
    return sample_cm(d, rng);
}

SimpleSampleResult sample_simple(const DegreeSequence& d, RngStream& rng, int max_tries) {
    SimpleSampleResult result;
    for (int t = 1; t <= max_tries; ++t) {
        Multigraph g = sample_cm(d, rng);
        result.attempts = t;
        if (g.is_simple()) {
            result.graph = std::move(g);
            return result;
        }
    }
    return result;
}

SimpleSampleResult sample_simple(const DegreeSequence& d, std::uint64_t seed, int max_tries) {
    RngStream rng(seed);
    return sample_simple(d, rng, max_tries);
}

}  // namespace cmlaws
