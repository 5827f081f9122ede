#pragma once

#include <cstdint>
#include <vector>

#include "cmlaws/degseq.hpp"
#include "cmlaws/fragment.hpp"
#include "cmlaws/rng.hpp"

namespace cmlaws {

enum class RootLaw {
    Degree,     // offspring distributed like D itself
    SizeBiased, // D-hat:   P(j) = (j+1) lambda_{j+1} / rho1
    CycleRoot,  // D-tilde: P(j) = (j+2)(j+1) lambda_{j+2} / rho2
};

/// Offspring distributions derived from a degree model: the size-biased
/// minus-one law D-hat used off the root, and the cycle-root law D-tilde
/// used where two edges are already spoken for.
class OffspringModel {
public:
    explicit OffspringModel(const DegreeModel& model);

    const std::vector<double>& pmf(RootLaw law) const;
    double prob(RootLaw law, int j) const;
    /// Mean of D-hat; equals nu.
    double mean_size_biased() const;
    int max_offspring(RootLaw law) const;

private:
    std::vector<double> degree_;
    std::vector<double> size_biased_;
    std::vector<double> cycle_root_;
};

/// Rooted forest in generation order: nodes 0..roots-1 are the roots; every
/// node records its parent (-1 for roots) and child count. Vertex degree in
/// the forest is child_count for roots and child_count + 1 otherwise.
struct LLForest {
    int roots = 0;
    std::vector<int> parent;
    std::vector<int> child_count;

    int size() const { return static_cast<int>(parent.size()); }
};

struct ForestSample {
    LLForest forest;
    bool overflow = false;  // vertex cap hit; forest is then partial
};

/// Grows k independent trees: root offspring from root_law, all later
/// generations from the size-biased law. Aborts past `cap` vertices.
ForestSample sample_forest(int k, const OffspringModel& model, RootLaw root_law, RngStream& rng,
                           int cap = 1'000'000);

/// Probability that the branching process produces exactly this forest:
///   prod_i P(root_law = i)^{#roots of degree i}
/// * prod_i P(D-hat = i-1)^{#non-roots of degree i}.
double p_tree(const LLForest& f, const OffspringModel& model, RootLaw root_law);

struct LimitFragmentSample {
    Fragment fragment;
    bool overflow = false;
};

/// Independent realization of the limiting fragment law: cycle counts a_k
/// drawn Poisson(xi_k) (truncated where xi_k < 1e-15), then an independent
/// tree attached to every cycle vertex with root law D-tilde and offspring
/// D-hat.
LimitFragmentSample sample_limit_fragment(const DegreeModel& model, RngStream& rng,
                                          int cap = 1'000'000);

}  // namespace cmlaws
