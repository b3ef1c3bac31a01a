#include <doctest.h>

#include <random>
#include <set>

#include "helpers.hpp"
#include "symscope/decompose.hpp"
#include "symscope/errors.hpp"
#include "symscope/oracle.hpp"

using namespace symscope;

namespace {

// Decomposition factors as a partition of orbit ids, for oracle comparison.
std::vector<std::vector<int>> factor_orbit_partition(const Decomposition& d) {
    std::vector<std::vector<int>> parts;
    for (auto& f : d.factors) parts.push_back(f.orbit_ids);
    std::sort(parts.begin(), parts.end());
    return parts;
}

} // namespace

TEST_CASE("orbit graph of the running-example model graph") {
    ModelGraph m = testutil::fe_model_graph();
    GeneratingSet lifted = testutil::lift_all(m, testutil::fe_literal_gens());
    Partition orb = orbits(lifted);
    // vertex orbits: 0:x 1:~x 2:y 3:~y 4:z 5:~z 6:{c1,c2,c3} 7:{c4}
    REQUIRE(orb.num_classes() == 8);
    REQUIRE(orb.classes[6] == std::vector<int>{16, 17, 18});
    REQUIRE(orb.classes[7] == std::vector<int>{19});

    OrbitGraph og = orbit_graph(m.graph, orb);
    std::vector<std::pair<int, int>> expected = {
        {0, 1},  // x - ~x (perfect matching, non-homogeneous)
        {0, 6},  // x - clause orbit {c1,c2,c3}
        {2, 3},  // y - ~y
        {3, 6},  // ~y - clause orbit
        {4, 5},  // z - ~z
    };
    CHECK(og.edges == expected);
    // c4 is homogeneously connected to the x-orbit and the z-orbit: isolated.
    CHECK(og.adj[7].empty());
}

TEST_CASE("orbit graph: all-singleton orbits give an empty orbit graph") {
    ColoredGraph g(4);
    g.add_undirected_edge(0, 1);
    g.add_undirected_edge(1, 2);
    g.add_undirected_edge(2, 3);
    g.set_colors({0, 1, 2, 3}, 4);
    g.seal();
    OrbitGraph og = orbit_graph(g, Partition::singletons(4));
    CHECK(og.edges.empty());
}

TEST_CASE("orbit graph: perfect matching between two 5-orbits is one edge") {
    ColoredGraph g(10);
    for (int i = 0; i < 5; ++i) g.add_undirected_edge(i, 5 + i);
    g.seal();
    std::vector<int> cls(10, 0);
    for (int i = 5; i < 10; ++i) cls[i] = 1;
    Partition orb = Partition::from_class_of(cls);
    OrbitGraph og = orbit_graph(g, orb);
    CHECK(og.edges == std::vector<std::pair<int, int>>{{0, 1}});
}

TEST_CASE("orbit graph rejects non-equitable orbit colorings") {
    ColoredGraph g(3);
    g.add_undirected_edge(0, 1);
    g.seal();
    // {0,2} cannot be an orbit: 0 has a neighbor, 2 does not.
    Partition bad = Partition::from_class_of({0, 1, 0});
    CHECK_THROWS_AS(orbit_graph(g, bad), ContractError);
    CHECK_THROWS_AS(orbit_graph(g, Partition::singletons(5)), ContractError);
}

TEST_CASE("finest decomposition of the running example") {
    ModelGraph m = testutil::fe_model_graph();
    GeneratingSet lifted = testutil::lift_all(m, testutil::fe_literal_gens());
    Partition orb = orbits(lifted);
    Decomposition dec = finest_decomposition(m.graph, lifted, orb);

    REQUIRE(dec.factors.size() == 3);
    CHECK(dec.split_violations.empty());

    // factor 1: x,~x,y,~y literals plus clauses c1..c3
    std::vector<int> f0 = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 16, 17, 18};
    CHECK(dec.factors[0].support == f0);
    // factor 2: z,~z literals
    CHECK(dec.factors[1].support == std::vector<int>{12, 13, 14, 15});
    // factor 3: the fixed clause c4
    CHECK(dec.factors[2].support == std::vector<int>{19});

    // separable set: the running-example set is already separable, so three split generators
    CHECK(dec.separable.gens.size() == 3);
    for (auto& g : dec.separable.gens) CHECK(is_automorphism(m.graph, g));

    // per-factor joint pairs: re-indexed generators are automorphisms of the
    // induced subgraphs
    for (auto& f : dec.factors)
        for (auto& g : f.gens.gens) CHECK(is_automorphism(f.graph, g));

    // split set generates the same group
    auto whole = enumerate_group(lifted, 1000);
    auto split = enumerate_group(dec.separable, 1000);
    std::set<std::vector<std::pair<int, int>>> a, b;
    for (auto& e : whole) a.insert(e.moved());
    for (auto& e : split) b.insert(e.moved());
    CHECK(a == b);
}

TEST_CASE("rigid graph decomposes into singleton factors") {
    ColoredGraph g(4);
    g.add_undirected_edge(0, 1);
    g.add_undirected_edge(1, 2);
    g.add_undirected_edge(2, 3);
    g.set_colors({0, 1, 2, 3}, 4);
    g.seal();
    Decomposition dec = finest_decomposition(g, GeneratingSet(4, {}), Partition::singletons(4));
    CHECK(dec.factors.size() == 4);
    CHECK(dec.separable.gens.empty());
}

TEST_CASE("two triangles joined by a swap generator form one factor") {
    ColoredGraph g(6);
    for (int base : {0, 3})
        for (int k = 0; k < 3; ++k)
            g.add_undirected_edge(base + k, base + (k + 1) % 3);
    g.seal();
    GeneratingSet s(6, {parse_cycles("(1,4)(2,5)(3,6)", 6)});
    Decomposition dec = finest_decomposition(g, s, orbits(s));
    CHECK(dec.factors.size() == 1);
    CHECK(dec.split_violations.empty());
    // oracle agrees: the swap couples all three orbits
    auto brute = oracle::brute_finest_decomposition(s, orbits(s));
    CHECK(brute == std::vector<std::vector<int>>{{0, 1, 2}});
}

TEST_CASE("split generators failing the membership test are reported") {
    // A "generator" that is not an automorphism of the graph at all.
    ColoredGraph g(4);
    g.add_undirected_edge(0, 1);
    g.add_undirected_edge(1, 2);
    g.add_undirected_edge(2, 3);
    g.add_undirected_edge(3, 0);
    g.seal();
    GeneratingSet s(4, {parse_cycles("(1,2)", 4)});
    // orbits(s) = {0,1},{2},{3} is not even equitable on the 4-cycle: throws.
    CHECK_THROWS_AS(finest_decomposition(g, s, orbits(s)), ContractError);

    // The uniform coloring is equitable on the 4-cycle, but the transposition
    // is not an automorphism; its split piece is reported.
    Partition one_orbit = Partition::from_class_of({0, 0, 0, 0});
    Decomposition dec = finest_decomposition(g, s, one_orbit);
    CHECK(dec.split_violations == std::vector<int>{0});
}

TEST_CASE("random joint pairs: factor partition matches the brute oracle") {
    std::mt19937_64 rng(2024);
    int done = 0;
    for (int trial = 0; trial < 200 && done < 60; ++trial) {
        int n = 4 + static_cast<int>(rng() % 8);
        ColoredGraph g(n);
        std::vector<int> cols(n, 0);
        g.set_colors(cols, 1);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng() % 100 < 30) g.add_undirected_edge(u, v);
        g.seal();
        oracle::ElementSet autos;
        try {
            autos = oracle::enumerate_automorphisms(g);
        } catch (const BoundError&) {
            continue;
        }
        if (autos.order() > 200) continue;  // keep the all-elements generating set cheap
        GeneratingSet s(n, autos.elems);
        Partition orb = orbits(s);
        Decomposition dec = finest_decomposition(g, s, orb);
        CHECK(dec.split_violations.empty());
        auto brute = oracle::brute_finest_decomposition(s, orb);
        CHECK(factor_orbit_partition(dec) == brute);
        ++done;
    }
    CHECK(done >= 60);
}

TEST_CASE("homogeneity soundness: orbit-graph non-edges are all-or-nothing") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 4 + static_cast<int>(rng() % 8);
        ColoredGraph g(n);
        g.set_colors(std::vector<int>(n, 0), 1);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng() % 100 < 40) g.add_undirected_edge(u, v);
        g.seal();
        oracle::ElementSet autos;
        try {
            autos = oracle::enumerate_automorphisms(g);
        } catch (const BoundError&) {
            continue;
        }
        GeneratingSet s(n, autos.elems);
        Partition orb = orbits(s);
        OrbitGraph og = orbit_graph(g, orb);
        for (int a = 0; a < og.num_orbits; ++a)
            for (int b = a + 1; b < og.num_orbits; ++b) {
                if (og.has_edge(a, b)) continue;
                int edges_between = 0;
                for (int u : orb.classes[a])
                    for (int v : orb.classes[b])
                        if (g.has_undirected_edge(u, v)) ++edges_between;
                bool none = edges_between == 0;
                bool full = edges_between ==
                            static_cast<int>(orb.classes[a].size() * orb.classes[b].size());
                CHECK((none || full));
            }
    }
}

TEST_CASE("check_literal_partition on the running example") {
    CnfFormula f = testutil::fe_formula();
    ModelGraph m = model_graph(f);
    GeneratingSet lifted = testutil::lift_all(m, testutil::fe_literal_gens());
    Partition orb = orbits(lifted);

    auto lits = [](std::vector<int> dimacs) {
        std::vector<int> out;
        for (int d : dimacs) out.push_back(lit_index(d));
        return out;
    };

    SUBCASE("the xy | z split is accepted") {
        std::vector<std::vector<int>> parts = {
            lits({1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6}),
            lits({7, -7, 8, -8}),
        };
        CHECK(check_literal_partition(f, m, orb, parts).ok);
    }
    SUBCASE("the x | y | z split is rejected with the clause orbit as certificate") {
        std::vector<std::vector<int>> parts = {
            lits({1, -1, 2, -2, 3, -3}),
            lits({4, -4, 5, -5, 6, -6}),
            lits({7, -7, 8, -8}),
        };
        PartitionCheck r = check_literal_partition(f, m, orb, parts);
        CHECK(!r.ok);
        // the failing orbit is {c1,c2,c3}: N = 3*3 = 9 != K = 3
        CHECK(r.failing_clause_orbit >= 0);
        CHECK(orb.classes[r.failing_clause_orbit] == std::vector<int>{16, 17, 18});
    }
    SUBCASE("the trivial partition is always accepted") {
        std::vector<int> all;
        for (int l = 0; l < 16; ++l) all.push_back(l);
        CHECK(check_literal_partition(f, m, orb, {all}).ok);
    }
    SUBCASE("splitting a moved literal from its negation is rejected") {
        std::vector<std::vector<int>> parts = {
            lits({1, 2, 3, -4, -5, -6, 7, 8}),
            lits({-1, -2, -3, 4, 5, 6, -7, -8}),
        };
        CHECK(!check_literal_partition(f, m, orb, parts).ok);
    }
    SUBCASE("not a partition raises") {
        CHECK_THROWS_AS(check_literal_partition(f, m, orb, {lits({1, -1})}), ContractError);
    }
}

TEST_CASE("suggest_literal_partition recovers the expected split") {
    CnfFormula f = testutil::fe_formula();
    ModelGraph m = model_graph(f);
    GeneratingSet lifted = testutil::lift_all(m, testutil::fe_literal_gens());
    Partition orb = orbits(lifted);
    auto parts = suggest_literal_partition(f, m, orb);
    REQUIRE(parts.size() == 2);
    CHECK(parts[0] == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
    CHECK(parts[1] == std::vector<int>{12, 13, 14, 15});
    CHECK(check_literal_partition(f, m, orb, parts).ok);
}
