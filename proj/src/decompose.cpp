#include "symscope/decompose.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "symscope/errors.hpp"

namespace symscope {

bool OrbitGraph::has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(a, b));
}

OrbitGraph orbit_graph(const ColoredGraph& g, const Partition& orbits) {
    if (orbits.degree != g.n)
        throw ContractError("orbit_graph: partition does not cover the vertex set");
    if (!is_equitable(g, Coloring::of_partition(orbits)))
        throw ContractError("orbit_graph: orbit coloring is not equitable; "
                            "input is not the orbit partition of Aut(G)");

    int k = static_cast<int>(orbits.num_classes());
    OrbitGraph og;
    og.num_orbits = k;
    std::set<std::pair<int, int>> edges;
    std::vector<int> count(k, 0);
    std::vector<int> touched;

    auto scan = [&](const std::vector<int>& neighbors, int own_orbit) {
        touched.clear();
        for (int u : neighbors) {
            int d = orbits.class_of[u];
            if (count[d] == 0) touched.push_back(d);
            ++count[d];
        }
        for (int d : touched) {
            // 0 < count < |orbit| means not homogeneously connected.
            if (d != own_orbit && count[d] < static_cast<int>(orbits.classes[d].size())) {
                int a = own_orbit, b = d;
                if (a > b) std::swap(a, b);
                edges.insert({a, b});
            }
            count[d] = 0;
        }
    };

    for (int orbit = 0; orbit < k; ++orbit) {
        int rep = orbits.classes[orbit].front();
        scan(g.und[rep], orbit);
        scan(g.out[rep], orbit);
        scan(g.in[rep], orbit);
    }

    og.edges.assign(edges.begin(), edges.end());
    og.adj.resize(k);
    for (auto& [a, b] : og.edges) {
        og.adj[a].push_back(b);
        og.adj[b].push_back(a);
    }
    return og;
}

Decomposition finest_decomposition(const ColoredGraph& g, const GeneratingSet& s,
                                   const Partition& orbits) {
    OrbitGraph og = orbit_graph(g, orbits);

    // Connected components of the orbit graph -> factor index per orbit.
    int k = og.num_orbits;
    std::vector<int> comp(k, -1);
    std::vector<int> stack;
    std::vector<std::vector<int>> comp_orbits;
    for (int start = 0; start < k; ++start) {
        if (comp[start] >= 0) continue;
        int c = static_cast<int>(comp_orbits.size());
        comp_orbits.emplace_back();
        comp[start] = c;
        stack.push_back(start);
        while (!stack.empty()) {
            int o = stack.back();
            stack.pop_back();
            comp_orbits[c].push_back(o);
            for (int p : og.adj[o])
                if (comp[p] < 0) {
                    comp[p] = c;
                    stack.push_back(p);
                }
        }
    }
    // Orbit ids are numbered by minimum point, and components are discovered
    // in orbit-id order, so factors come out ordered by minimum support point.

    Decomposition dec;
    dec.factor_of_orbit = comp;
    for (auto& orbit_ids : comp_orbits) {
        Factor f;
        f.orbit_ids = orbit_ids;
        std::sort(f.orbit_ids.begin(), f.orbit_ids.end());
        for (int o : f.orbit_ids)
            f.support.insert(f.support.end(), orbits.classes[o].begin(), orbits.classes[o].end());
        std::sort(f.support.begin(), f.support.end());
        dec.factors.push_back(std::move(f));
    }

    // Split each generator into its per-factor restrictions. Cycles of a
    // generator stay inside single orbits, hence inside single factors.
    std::vector<int> factor_of_point(g.n);
    for (int v = 0; v < g.n; ++v) factor_of_point[v] = comp[orbits.class_of[v]];
    std::vector<Permutation> separable;
    std::vector<std::vector<Permutation>> factor_gens(dec.factors.size());
    for (auto& gen : s.gens) {
        std::map<int, std::vector<std::pair<int, int>>> pieces;
        for (auto& [x, y] : gen.moved()) {
            if (factor_of_point[x] != factor_of_point[y])
                throw ContractError("finest_decomposition: generator moves a point across "
                                    "factors; orbit partition is inconsistent with S");
            pieces[factor_of_point[x]].emplace_back(x, y);
        }
        for (auto& [fi, moved] : pieces) {
            separable.push_back(Permutation::from_moved(g.n, moved));
            factor_gens[fi].push_back(restrict_to(separable.back(), dec.factors[fi].support));
        }
    }
    dec.separable = GeneratingSet(g.n, separable);
    for (std::size_t i = 0; i < dec.separable.gens.size(); ++i)
        if (!is_automorphism(g, dec.separable.gens[i]))
            dec.split_violations.push_back(static_cast<int>(i));

    for (std::size_t fi = 0; fi < dec.factors.size(); ++fi) {
        Factor& f = dec.factors[fi];
        InducedSubgraph sub = induced_subgraph(g, f.support);
        f.graph = std::move(sub.graph);
        f.to_old = std::move(sub.to_old);
        f.gens = GeneratingSet(static_cast<int>(f.support.size()), std::move(factor_gens[fi]));
    }
    return dec;
}

namespace {

struct OccurrenceCounts {
    // part id -> number of distinct nonempty joint occurrences and the number
    // of clauses of the orbit that meet the part at all.
    std::map<int, std::set<std::vector<int>>> distinct;
    std::map<int, int> clauses_meeting;
};

} // namespace

PartitionCheck check_literal_partition(const CnfFormula& f, const ModelGraph& m,
                                       const Partition& vertex_orbits,
                                       const std::vector<std::vector<int>>& parts) {
    int n_lits = 2 * f.n_vars;
    std::vector<int> part_of(n_lits, -1);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        for (int l : parts[i]) {
            if (l < 0 || l >= n_lits)
                throw ContractError("check_literal_partition: literal out of range");
            if (part_of[l] != -1)
                throw ContractError("check_literal_partition: parts overlap");
            part_of[l] = static_cast<int>(i);
        }
    }
    for (int l = 0; l < n_lits; ++l)
        if (part_of[l] == -1)
            throw ContractError("check_literal_partition: parts do not cover the literals");

    PartitionCheck res;

    // (a) every part is a union of literal orbits ...
    for (auto& orbit : vertex_orbits.classes) {
        if (!m.is_literal_vertex(orbit.front())) continue;
        for (int l : orbit) {
            if (!m.is_literal_vertex(l))
                throw ContractError("check_literal_partition: orbit mixes literal and "
                                    "clause vertices");
            if (part_of[l] != part_of[orbit.front()]) {
                res.reason = "part splits the literal orbit of " +
                             std::to_string(dimacs_lit(orbit.front()));
                return res;
            }
        }
    }
    // ... and closed under negation, except that a fixed literal pair may be
    // separated (both points then sit in singleton orbits).
    for (int l = 0; l < n_lits; l += 2) {
        if (part_of[l] == part_of[l + 1]) continue;
        bool both_fixed = vertex_orbits.classes[vertex_orbits.class_of[l]].size() == 1 &&
                          vertex_orbits.classes[vertex_orbits.class_of[l + 1]].size() == 1;
        if (!both_fixed) {
            res.reason = "part separates moved literal " + std::to_string(dimacs_lit(l)) +
                         " from its negation";
            return res;
        }
    }

    // (b) per clause orbit, the K = N joint occurrence test.
    for (int orbit = 0; orbit < static_cast<int>(vertex_orbits.num_classes()); ++orbit) {
        int first = vertex_orbits.classes[orbit].front();
        if (m.is_literal_vertex(first)) continue;
        OccurrenceCounts occ;
        long long clause_count = static_cast<long long>(vertex_orbits.classes[orbit].size());
        for (int cv : vertex_orbits.classes[orbit]) {
            int j = cv - 2 * f.n_vars;
            std::map<int, std::vector<int>> by_part;
            for (int l : f.clauses[j]) by_part[part_of[l]].push_back(l);
            for (auto& [pid, lits] : by_part) {
                occ.distinct[pid].insert(lits);
                ++occ.clauses_meeting[pid];
            }
        }
        long long product = 1;
        for (auto& [pid, occs] : occ.distinct) {
            long long n_i = static_cast<long long>(occs.size());
            if (occ.clauses_meeting[pid] < clause_count) ++n_i;  // empty occurrence
            product *= n_i;
            if (product > clause_count) break;
        }
        if (product != clause_count) {
            res.reason = "clause orbit fails the joint-occurrence product test";
            res.failing_clause_orbit = orbit;
            return res;
        }
    }
    res.ok = true;
    return res;
}

std::vector<std::vector<int>> suggest_literal_partition(const CnfFormula& f, const ModelGraph& m,
                                                        const Partition& vertex_orbits) {
    OrbitGraph og = orbit_graph(m.graph, vertex_orbits);
    int n_lits = 2 * f.n_vars;

    // Union-find over literal orbits: orbit-graph edges between literal
    // orbits, plus negation pairing.
    std::vector<int> parent(vertex_orbits.num_classes());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    auto is_lit_orbit = [&](int o) {
        return m.is_literal_vertex(vertex_orbits.classes[o].front());
    };
    for (auto& [a, b] : og.edges)
        if (is_lit_orbit(a) && is_lit_orbit(b)) unite(a, b);
    for (int l = 0; l < n_lits; l += 2)
        unite(vertex_orbits.class_of[l], vertex_orbits.class_of[l + 1]);

    auto build_parts = [&]() {
        std::map<int, std::vector<int>> groups;
        for (int l = 0; l < n_lits; ++l) groups[find(vertex_orbits.class_of[l])].push_back(l);
        std::vector<std::vector<int>> parts;
        for (auto& [root, lits] : groups) parts.push_back(lits);
        std::sort(parts.begin(), parts.end());
        return parts;
    };

    // Merge parts coupled by a failing clause orbit until the check accepts.
    // Each failing orbit has at least two parts with >= 2 distinct joint
    // occurrences, so every round strictly reduces the part count.
    while (true) {
        auto parts = build_parts();
        PartitionCheck check = check_literal_partition(f, m, vertex_orbits, parts);
        if (check.ok) return parts;
        if (check.failing_clause_orbit < 0)
            throw ContractError("suggest_literal_partition: check failed structurally");

        std::vector<int> part_of(n_lits, -1);
        for (std::size_t i = 0; i < parts.size(); ++i)
            for (int l : parts[i]) part_of[l] = static_cast<int>(i);

        std::map<int, std::set<std::vector<int>>> distinct;
        for (int cv : vertex_orbits.classes[check.failing_clause_orbit]) {
            int j = cv - 2 * f.n_vars;
            std::map<int, std::vector<int>> by_part;
            for (int l : f.clauses[j]) by_part[part_of[l]].push_back(l);
            for (auto& [pid, lits] : by_part) distinct[pid].insert(lits);
        }
        std::vector<int> to_merge;
        for (auto& [pid, occs] : distinct)
            if (occs.size() >= 2) to_merge.push_back(pid);
        if (to_merge.size() < 2) {
            to_merge.clear();
            for (auto& [pid, occs] : distinct) to_merge.push_back(pid);
        }
        if (to_merge.size() < 2)
            throw ContractError("suggest_literal_partition: failing orbit couples fewer "
                                "than two parts");
        for (std::size_t i = 1; i < to_merge.size(); ++i)
            unite(vertex_orbits.class_of[parts[to_merge[0]].front()],
                  vertex_orbits.class_of[parts[to_merge[i]].front()]);
    }
}

} // namespace symscope
