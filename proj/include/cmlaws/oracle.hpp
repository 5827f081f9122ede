#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "cmlaws/degseq.hpp"
#include "cmlaws/multigraph.hpp"
#include "cmlaws/rational.hpp"

namespace cmlaws {

/// Exact distribution of a statistic over all (m-1)!! perfect matchings.
struct ExactDistribution {
    std::map<std::string, std::int64_t> counts;
    std::int64_t total = 0;

    Rational prob(const std::string& key) const {
        auto it = counts.find(key);
        return Rational(it == counts.end() ? 0 : it->second, total);
    }
};

/// (m-1)!! for even m.
std::int64_t double_factorial_matchings(std::int64_t m);

/// Visits every perfect matching of the half-edges of d exactly once.
/// The callback receives the resulting multigraph.
void for_each_matching(const DegreeSequence& d,
                       const std::function<void(const Multigraph&)>& visit,
                       std::int64_t max_half_edges = 14);

/// Exact probabilities of the statistic key over all matchings.
ExactDistribution enumerate_matchings(const DegreeSequence& d,
                                      const std::function<std::string(const Multigraph&)>& statistic,
                                      std::int64_t max_half_edges = 14);

/// Exact expectation of an integer statistic over all matchings.
Rational exact_expectation(const DegreeSequence& d,
                           const std::function<std::int64_t(const Multigraph&)>& statistic,
                           std::int64_t max_half_edges = 14);

/// Exact probability that the matching's multigraph is simple.
Rational exact_simple_probability(const DegreeSequence& d, std::int64_t max_half_edges = 14);

}  // namespace cmlaws
