#pragma once

#include <string>
#include <utility>
#include <vector>

#include "symscope/cnf.hpp"
#include "symscope/graph.hpp"
#include "symscope/perm.hpp"

namespace symscope {

// Graph on orbit ids with an edge exactly where two orbits are not
// homogeneously connected in the source graph (per edge relation).
struct OrbitGraph {
    int num_orbits = 0;
    std::vector<std::pair<int, int>> edges;   // sorted, u < v
    std::vector<std::vector<int>> adj;

    bool has_edge(int a, int b) const;
};

// Orbit graph construction: one representative per orbit, neighbor
// counts per orbit, edge iff 0 < count < |orbit|. The orbit coloring must be
// equitable on g (cheap sanity check for the caller's contract that `orbits`
// is the true orbit partition of Aut(g)).
OrbitGraph orbit_graph(const ColoredGraph& g, const Partition& orbits);

// One factor of a disjoint direct decomposition: support, the induced joint
// pair, and the generators re-indexed to the factor domain.
struct Factor {
    std::vector<int> support;       // sorted domain points
    std::vector<int> orbit_ids;     // orbits making up the support
    GeneratingSet gens;             // on the re-indexed factor domain
    ColoredGraph graph;             // induced subgraph
    std::vector<int> to_old;        // factor vertex -> original vertex
};

struct Decomposition {
    std::vector<Factor> factors;            // ordered by minimum support point
    GeneratingSet separable;                // split generators on the full domain
    std::vector<int> factor_of_orbit;       // orbit id -> factor index
    // Indices into `separable` of split generators that fail is_automorphism;
    // nonempty means the joint-pair precondition was violated.
    std::vector<int> split_violations;
};

// Finest disjoint direct decomposition of a joint pair (g, s) with the given
// orbit partition: factors are the connected components of the orbit graph;
// each generator is cut into its per-factor restrictions.
Decomposition finest_decomposition(const ColoredGraph& g, const GeneratingSet& s,
                                   const Partition& orbits);

// Literal-partition validity check: does the given partition of the literals
// induce a disjoint direct product of Aut(F)? Implements the K = N joint
// occurrence count test per clause orbit.
struct PartitionCheck {
    bool ok = false;
    std::string reason;              // set when !ok
    int failing_clause_orbit = -1;   // orbit id in `orbits` when the K=N test fails
};

PartitionCheck check_literal_partition(const CnfFormula& f, const ModelGraph& m,
                                       const Partition& vertex_orbits,
                                       const std::vector<std::vector<int>>& parts);

// Heuristic candidate partition of the literals: components of the
// literal-orbit subgraph of the orbit graph (negation orbits joined), then
// parts coupled by a failing clause orbit are merged until the check accepts.
std::vector<std::vector<int>> suggest_literal_partition(const CnfFormula& f, const ModelGraph& m,
                                                        const Partition& vertex_orbits);

} // namespace symscope
