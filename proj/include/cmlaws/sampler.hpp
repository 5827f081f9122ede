#pragma once

#include <cstdint>
#include <optional>

#include "cmlaws/degseq.hpp"
#include "cmlaws/multigraph.hpp"
#include "cmlaws/rng.hpp"

namespace cmlaws {

/// Underlying multigraph of a uniform random perfect matching of the
/// half-edges: Fisher-Yates shuffle, then pair consecutive entries. Every
/// matching of [m] has probability 1/(m-1)!!.
Multigraph sample_cm(const DegreeSequence& d, RngStream& rng);
Multigraph sample_cm(const DegreeSequence& d, std::uint64_t seed);

struct SimpleSampleResult {
    std::optional<Multigraph> graph;  // present on success
    int attempts = 0;
};

/// Rejection-samples until the matching is simple; the attempt count doubles
/// as an empirical simplicity-rate estimator.
SimpleSampleResult sample_simple(const DegreeSequence& d, RngStream& rng, int max_tries);
SimpleSampleResult sample_simple(const DegreeSequence& d, std::uint64_t seed, int max_tries);

}  // namespace cmlaws
