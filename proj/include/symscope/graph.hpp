#pragma once

#include <utility>
#include <vector>

#include "symscope/perm.hpp"

namespace symscope {

// Vertex-colored graph with undirected and directed edges. No self-loops, no
// duplicate edges; undirected adjacency is stored symmetrically. Color ids are
// contiguous from 0. Build with add_*_edge / set_colors, then seal() once;
// sealed graphs are immutable in spirit and safe to share.
struct ColoredGraph {
    int n = 0;
    std::vector<std::vector<int>> und;  // undirected neighbors
    std::vector<std::vector<int>> out;  // directed successors
    std::vector<std::vector<int>> in;   // directed predecessors
    std::vector<int> color;
    int num_colors = 1;

    ColoredGraph() = default;
    explicit ColoredGraph(int n_) : n(n_), und(n_), out(n_), in(n_), color(n_, 0) {}

    void add_undirected_edge(int u, int v);
    void add_directed_edge(int u, int v);
    void set_colors(std::vector<int> colors, int num);

    // Sorts adjacency lists and validates all invariants. Throws ContractError.
    void seal();

    bool has_undirected_edge(int u, int v) const;
    bool has_directed_edge(int u, int v) const;
    std::size_t num_undirected_edges() const;
    std::size_t num_directed_edges() const;
};

// Coloring of a graph's vertices with contiguous class ids.
struct Coloring {
    std::vector<int> color;
    int num_classes = 0;
    std::vector<int> class_size;

    static Coloring from_colors(std::vector<int> colors);
    static Coloring uniform(int n);
    static Coloring of_graph(const ColoredGraph& g) { return from_colors(g.color); }
    static Coloring of_partition(const Partition& p) { return from_colors(p.class_of); }

    Partition to_partition() const { return Partition::from_class_of(color); }
    bool operator==(const Coloring&) const = default;
};

// Coarsest equitable refinement of `initial` with respect to the undirected,
// directed-out and directed-in neighbor counts. Hopcroft-style smaller-half
// worklist; resulting class ids are renumbered by minimum vertex.
Coloring color_refinement(const ColoredGraph& g, const Coloring& initial);

// True iff every class pair has uniform neighbor counts under all three edge
// relations. Brute scan, used as an oracle in tests and as a cheap sanity check.
bool is_equitable(const ColoredGraph& g, const Coloring& c);

// Components under all edges treated as undirected; canonical class numbering.
Partition connected_components(const ColoredGraph& g);

struct InducedSubgraph {
    ColoredGraph graph;
    std::vector<int> to_old;  // new vertex -> old vertex
    std::vector<int> to_new;  // old vertex -> new vertex or -1
};

// Subgraph induced by `keep`; colors renumbered contiguously preserving order.
InducedSubgraph induced_subgraph(const ColoredGraph& g, const std::vector<int>& keep);

// True iff p preserves colors, edges (with direction) and non-edges.
bool is_automorphism(const ColoredGraph& g, const Permutation& p);

// DOT dump for debugging/docs.
std::string to_dot(const ColoredGraph& g);

} // namespace symscope
