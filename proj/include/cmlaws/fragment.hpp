#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cmlaws/multigraph.hpp"

namespace cmlaws {

/// Canonical unlabeled disjoint union of unicyclic components.
///
/// Component codes form a stable ASCII grammar:
///   tree      := "(" tree* ")"            children sorted lexicographically
///   component := "C" <k> "[" tree ("," tree)* "]"
/// where k is the cycle length (1 = loop, 2 = double edge) and the k trees
/// hang off the cycle vertices, listed in the lexicographically minimal
/// rotation/reflection. A fragment code joins its sorted component codes
/// with "+"; the empty fragment has the empty code.
struct Fragment {
    std::vector<std::string> component_codes;  // sorted
    std::map<int, int> cycle_type;             // k -> a_k
    std::map<int, int> deg_all;                // i -> h_i, over all vertices
    std::map<int, int> deg_cycle;              // i -> h_i^r, cycle vertices
    std::map<int, int> deg_tree;               // i -> h_i^t, non-cycle vertices
    int vertex_count = 0;

    bool empty() const { return component_codes.empty(); }
    /// A fragment is simple iff it has no 1- or 2-cycles.
    bool simple() const;
    std::string code() const;

    bool operator==(const Fragment& o) const { return component_codes == o.component_codes; }
};

/// Canonical code of one unicyclic component (given by its vertex set inside
/// g). Rejects components whose excess is not zero.
std::string canonicalize_component(const Multigraph& g, const std::vector<int>& vertices);

/// Union of the unicyclic components of g; tree and complex components are
/// discarded.
Fragment extract_fragment(const Multigraph& g);

/// Rebuilds a fragment value (censuses, cycle type) from component codes.
Fragment fragment_from_codes(std::vector<std::string> codes);
Fragment fragment_from_code(const std::string& fragment_code);

/// Decodes a component code back to a representative multigraph.
Multigraph decode_component(const std::string& code);
/// Decodes a whole fragment code (disjoint union of its components).
Multigraph decode_fragment(const std::string& fragment_code);

/// Number of multigraph automorphisms, computed from the canonical structure
/// (component multiset factorials, per-component cycle symmetry, tree
/// symmetries).
std::int64_t aut(const Fragment& h);

/// Half-edge automorphisms: aut(H) * 2^loops * prod_e multiplicity(e)!.
std::int64_t authe(const Fragment& h);

/// Factorial-time automorphism count over all vertex permutations. Intended
/// for small graphs (n <= 10); also serves as the oracle for aut().
std::int64_t aut_bruteforce(const Multigraph& g);

/// Factorial-time isomorphism test for small multigraphs.
bool isomorphic_bruteforce(const Multigraph& a, const Multigraph& b);

/// Degree census i -> number of vertices of degree i.
std::map<int, int> degree_census(const Multigraph& g);

}  // namespace cmlaws
