#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cmlaws/degseq.hpp"
#include "cmlaws/fragment.hpp"

namespace cmlaws {

/// Limit probability that the configuration-model fragment is isomorphic to
/// H: sqrt(1-nu)/authe(H) * prod_i (lambda_i i! / rho1)^{h_i}. Zero when some
/// populated degree has no model mass. Rejects nu >= 1.
double pstar(const Fragment& h, const DegreeModel& model);

/// Limit probability that the simple-graph fragment equals the simple
/// fragment G: Q(nu)/aut(G) * prod_i (lambda_i i!/rho1)^{g_i}. Equals
/// pstar(G) * exp(nu/2 + nu^2/4). Rejects non-simple fragments.
double p_simple(const Fragment& g, const DegreeModel& model);

/// Number of lexicographically labeled fragments isomorphic to H:
///   (1/authe(H)) * prod_k a_k! (2k)^{a_k}
///                * prod_{i>=2} (i-2)!^{h_i^r} * prod_{i>=1} (i-1)!^{h_i^t}.
/// Always a positive integer.
std::int64_t gamma_labelings(const Fragment& h);

enum class CatalogueVariant {
    Multigraph,  // p* over all fragments
    Simple,      // p over simple fragments
};

/// Total variant mass of all fragments with exactly the given cycle type:
/// base * prod_k xi_k^{a_k} / a_k! with base sqrt(1-nu) (p*) or Q (p, types
/// restricted to k >= 3).
double class_sum(const std::map<int, int>& cycle_type, const DegreeModel& model,
                 CatalogueVariant variant);

struct CatalogueEntry {
    std::string code;
    std::map<int, int> cycle_type;
    double pstar = 0.0;
    std::optional<double> psimple;  // present iff the fragment is simple
    /// Ordering probability: pstar for the Multigraph variant, psimple for
    /// the Simple variant.
    double prob = 0.0;
};

struct TypeAccount {
    std::map<int, int> cycle_type;
    double class_mass = 0.0;  // in variant units
    double enumerated = 0.0;  // sum of catalogued probabilities of this type
    double residual = 0.0;    // class_mass - enumerated (includes sub-floor fragments)
};

struct EnumerationLimits {
    std::int64_t max_pops = 200'000'000;
    std::size_t max_entries = 3'000'000;
};

struct EnumerationStats {
    double theta_child = 0.0;
    double theta_root = 0.0;
    double theta_neck = 0.0;
    std::size_t child_trees = 0;
    std::size_t root_trees = 0;
    std::size_t necklaces = 0;
    int tree_size_cap = 0;
};

/// Probability-ordered fragment enumeration with certified tail mass.
struct FragmentCatalogue {
    CatalogueVariant variant = CatalogueVariant::Multigraph;
    double floor = 0.0;
    double nu = 0.0;
    std::vector<CatalogueEntry> entries;  // prob descending, code tiebreak
    std::vector<TypeAccount> types;       // every opened cycle type
    double tail_mass = 0.0;               // 1 - sum of entry probabilities, via class sums
    EnumerationStats stats;

    double enumerated_mass() const;
    /// Tail after the first `count` entries: 1 - prefix sum.
    double tail_after(std::size_t count) const;
    /// Sandwich index k(i) of entry i (0-based, i >= 1): the k with
    /// Q nu^k/2k >= p_i > Q nu^{k+1}/2(k+1).
    int sandwich_k(std::size_t i) const;

    std::string to_jsonl() const;
    static FragmentCatalogue from_jsonl(const std::string& text);
};

/// Enumerates every fragment whose variant probability is at least `floor`,
/// cycle type by cycle type. Within a type, ordered forests are expanded
/// best-first; the type is closed once the mass still unaccounted for cannot
/// hide a fragment above the floor.
FragmentCatalogue enumerate_catalogue(const DegreeModel& model, double floor,
                                      CatalogueVariant variant = CatalogueVariant::Multigraph,
                                      const EnumerationLimits& limits = {});

}  // namespace cmlaws
