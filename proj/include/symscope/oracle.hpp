#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symscope/graph.hpp"
#include "symscope/perm.hpp"

namespace symscope {
namespace oracle {

// Hard size bounds; exceeding one raises BoundError rather than running slow.
struct Limits {
    int max_vertices = 24;
    std::size_t max_elements = 100000;
    int max_degree = 24;
    int max_orbit_size = 8;
    int max_nontrivial_orbits = 20;
};

// Explicit element list of a small permutation group, sorted canonically.
struct ElementSet {
    int degree = 0;
    std::vector<Permutation> elems;

    bool contains(const Permutation& p) const;
    std::size_t order() const { return elems.size(); }
};

ElementSet make_element_set(int degree, std::vector<Permutation> elems);

// All color- and adjacency-preserving vertex bijections of g, found by
// backtracking over refinement-pruned candidate maps.
ElementSet enumerate_automorphisms(const ColoredGraph& g, const Limits& limits = {});

// All permutations of the domain commuting with every generator.
ElementSet brute_centralizer(const GeneratingSet& s, const Limits& limits = {});

// Orbit equivalence by bijection search: seeds b on one point and propagates
// through generator walks; orbits are equivalent iff some seed works.
struct BruteEquivalence {
    std::vector<std::vector<int>> classes;        // groups of orbit ids
    std::vector<int> class_of_orbit;              // orbit id -> class index
    // bijection from representative orbit (min id of class) to each member
    std::vector<std::vector<std::pair<int, int>>> bijection_from_rep;
};

BruteEquivalence brute_equivalent_orbits(const GeneratingSet& s, const Partition& orbits,
                                         const Limits& limits = {});

// Finest partition of orbit ids whose parts give a disjoint direct
// decomposition of <S>, by closure enumeration plus subset-sum counting over
// the lattice of orbit subsets.
std::vector<std::vector<int>> brute_finest_decomposition(const GeneratingSet& s,
                                                         const Partition& orbits,
                                                         const Limits& limits = {});

// Validity of one candidate partition of orbit ids, from an explicit element
// list: valid iff the per-part restriction counts multiply to |elems|.
bool brute_decomposition_valid(const std::vector<Permutation>& elems, const Partition& orbits,
                               const std::vector<std::vector<int>>& parts);

} // namespace oracle
} // namespace symscope
