#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "symscope/action.hpp"
#include "symscope/cnf.hpp"
#include "symscope/graph.hpp"
#include "symscope/perm.hpp"

namespace symscope {

// Cycle type graph C(S): one base vertex per domain point (color 0) plus one
// gadget vertex per (generator, moved point), joined to its base point by an
// undirected edge, with directed edges x -> g(x) inside each generator's
// gadget. Gadget colors encode (generator index, cycle length). Its
// automorphism group is the centralizer of <S> in Sym(domain).
struct CycleTypeGraph {
    ColoredGraph graph;
    int degree = 0;  // base vertices are 0..degree-1

    // gadget vertex of point x in generator i, or -1
    int gadget_vertex(int gen, int point) const;
    // canonical-cycle gadget vertex for a point (enhanced graphs only), or -1
    int canonical_vertex(int point) const;

    std::vector<std::vector<int>> gadget_of_gen;  // gen -> dense point map (-1 absent)
    std::vector<int> canonical_of_point;          // point -> vertex or -1
    int num_gadget_vertices = 0;
    int num_subdivision_vertices = 0;
    int num_canonical_vertices = 0;
};

CycleTypeGraph cycle_type_graph(const GeneratingSet& s);

// Cycle overlap: splice pairwise disjoint cycles D, each sharing at
// least one point with C, into C. For every overlap point c, the segment of
// its D-cycle up to (excluding) the next overlap point is inserted after c.
// The output starts at C's first point and is independent of the order of D.
std::vector<int> cycle_overlap(const std::vector<int>& c,
                               const std::vector<std::vector<int>>& d);

// Invariant cyclic order covering a whole orbit, grown from a unique cycle by
// overlapping generator cycles. Each generator cycle is processed at most
// once (per-point pending lists); stored rotated to start at the minimum
// point.
struct CanonicalCycle {
    int orbit = -1;
    std::vector<int> points;
};

CanonicalCycle canonical_cycle(const GeneratingSet& s, const std::vector<int>& orbit,
                               const std::vector<int>& unique_cycle, int orbit_id = -1);

// Enhanced cycle type graph C'(S): adds one cycle gadget per canonical cycle
// (colored by orbit size) and subdivides every generator-gadget edge of a
// covered orbit with a vertex colored (generator, cycle length, distance in
// the canonical cycle). Orbits without a canonical cycle keep their plain
// gadgets.
CycleTypeGraph enhanced_cycle_type_graph(
    const GeneratingSet& s, const Partition& orbits,
    const std::vector<std::optional<CanonicalCycle>>& canonical);

// Equivalent-orbit computation: color refinement on the enhanced cycle type
// graph; two decided orbits are equivalent iff their base vertices share a
// stable color. Orbits of size >= 2 without a canonical cycle are undecided
// and reported as singleton classes.
struct EquivalenceResult {
    Partition orbit_classes;                           // partition of orbit ids
    std::vector<bool> decided;                         // orbit id -> claim made
    std::vector<int> undetermined_orbits;              // orbit ids left undecided
    Coloring stable;                                   // stable coloring of C'(S)
    Partition orbits;                                  // the orbit partition analyzed
    std::vector<std::optional<CanonicalCycle>> canonical;
};

EquivalenceResult equivalent_orbits(const GeneratingSet& s, const Partition& orbits,
                                    const std::vector<std::optional<CanonicalCycle>>& canonical);

// Point bijection between two equivalent orbits: aligns the canonical cycles
// at equally colored base vertices. The result commutes with every group
// element. O(orbit size).
std::vector<std::pair<int, int>> orbit_bijection(const EquivalenceResult& eq, int orbit_a,
                                                 int orbit_b);

// Row-interchangeability assembly: for each equivalence class of literal
// orbits with natural symmetric action whose negation orbits are present and
// equivalent, emit a variable matrix (rows = variable orbits, columns aligned
// by the orbit bijections). Every emitted matrix is verified: the literal
// permutations generating the simultaneous column action lift to
// automorphisms of the model graph.
std::vector<std::vector<std::vector<int>>> row_interchangeability_groups(
    const CnfFormula& f, const ModelGraph& m, const ActionReport& action,
    const EquivalenceResult& eq);

} // namespace symscope
