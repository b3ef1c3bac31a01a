#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "symscope/cnf.hpp"
#include "symscope/errors.hpp"
#include "symscope/oracle.hpp"

using namespace symscope;

TEST_CASE("literal indexing") {
    CHECK(lit_index(1) == 0);
    CHECK(lit_index(-1) == 1);
    CHECK(lit_index(8) == 14);
    CHECK(lit_index(-8) == 15);
    CHECK(dimacs_lit(14) == 8);
    CHECK(dimacs_lit(15) == -8);
    CHECK(negate_lit(6) == 7);
    CHECK(var_of_lit(7) == 4);
}

TEST_CASE("parse_dimacs: running example") {
    CnfFormula f = testutil::fe_formula();
    CHECK(f.n_vars == 8);
    CHECK(f.clauses.size() == 4);
    CHECK(f.clauses[3] == std::vector<int>{lit_index(1), lit_index(2), lit_index(3), lit_index(7),
                                           lit_index(8)});
}

TEST_CASE("parse_dimacs: edge cases and errors") {
    CnfFormula unit = parse_dimacs("p cnf 1 1\n1 0\n");
    CHECK(unit.clauses.size() == 1);
    CHECK(unit.clauses[0] == std::vector<int>{0});

    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 -1 0\n"), ParseError);       // tautology
    CHECK_THROWS_AS(parse_dimacs("p dnf 2 1\n1 0\n"), ParseError);          // bad header
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n"), ParseError);          // count mismatch
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2 0\n1 0\n"), ParseError);   // too many
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n3 0\n"), ParseError);          // out of range
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2\n"), ParseError);          // missing 0
    CHECK_THROWS_AS(parse_dimacs("1 0\n"), ParseError);                     // no header
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n1 0\n"), ParseError);     // duplicate clause
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\nx 0\n"), ParseError);          // junk token

    // duplicate literal inside a clause is dropped, not an error
    CnfFormula dup = parse_dimacs("p cnf 2 1\n1 1 2 0\n");
    CHECK(dup.clauses[0].size() == 2);

    // comments and blank lines
    CnfFormula c = parse_dimacs("c hi\n\np cnf 1 1\nc mid\n1 0\n");
    CHECK(c.clauses.size() == 1);
}

TEST_CASE("model_graph: running example counts") {
    ModelGraph m = testutil::fe_model_graph();
    CHECK(m.graph.n == 20);  // 16 literal + 4 clause vertices
    CHECK(m.graph.num_undirected_edges() == 8 + 11);
    CHECK(m.graph.color[0] == 1);
    CHECK(m.graph.color[m.clause_vertex(0)] == 0);

    ModelGraph single = model_graph(parse_dimacs("p cnf 1 1\n1 0\n"));
    CHECK(single.graph.n == 3);
    CHECK(single.graph.num_undirected_edges() == 2);

    ModelGraph empty = model_graph(parse_dimacs("p cnf 1 0\n"));
    CHECK(empty.graph.n == 2);
    CHECK(empty.graph.num_undirected_edges() == 1);
}

TEST_CASE("lift_literal_perm") {
    ModelGraph m = testutil::fe_model_graph();

    SUBCASE("closed z-swap fixes c4") {
        Permutation zswap = parse_literal_cycles("(7,8)(-7,-8)", 8);
        Permutation lifted = lift_literal_perm(m, zswap);
        CHECK(lifted.apply(m.clause_vertex(3)) == m.clause_vertex(3));
        CHECK(lifted.apply(lit_index(7)) == lit_index(8));
        CHECK(is_automorphism(m.graph, lifted));
    }
    SUBCASE("identity lifts to identity") {
        CHECK(lift_literal_perm(m, Permutation(16)) == Permutation(20));
    }
    SUBCASE("x-swap without y-swap is not a symmetry") {
        Permutation xonly = parse_literal_cycles("(1,2)(-1,-2)", 8);
        CHECK_THROWS_AS(lift_literal_perm(m, xonly), ContractError);
    }
    SUBCASE("bare (z1,z2) violates negation consistency") {
        Permutation bare = parse_literal_cycles("(7,8)", 8);
        CHECK_THROWS_AS(lift_literal_perm(m, bare), ContractError);
    }
}

TEST_CASE("project_vertex_perm") {
    ModelGraph m = testutil::fe_model_graph();
    GeneratingSet lits = testutil::fe_literal_gens();
    for (auto& p : lits.gens) {
        Permutation lifted = lift_literal_perm(m, p);
        CHECK(project_vertex_perm(m, lifted) == p);  // project o lift = id
    }
    CHECK(project_vertex_perm(m, Permutation(20)) == Permutation(16));

    Permutation bad = Permutation::from_moved(20, {{0, 16}, {16, 0}});
    CHECK_THROWS_AS(project_vertex_perm(m, bad), ContractError);

    // Projections of all oracle automorphisms: |the model-graph automorphism group| = 12 (frozen from
    // the oracle), all distinct after projection, and lift o project = id.
    oracle::ElementSet autos = oracle::enumerate_automorphisms(m.graph);
    CHECK(autos.order() == 12);
    std::set<std::vector<std::pair<int, int>>> distinct;
    for (auto& a : autos.elems) {
        Permutation p = project_vertex_perm(m, a);
        distinct.insert(p.moved());
        CHECK(lift_literal_perm(m, p) == a);
    }
    CHECK(distinct.size() == 12);
}

TEST_CASE("projected automorphisms are exactly the negation-consistent clause-set stabilizers") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 25; ++trial) {
        int nv = 2 + static_cast<int>(rng() % 3);
        int nc = 1 + static_cast<int>(rng() % 4);
        std::vector<std::vector<int>> clauses;
        std::set<std::vector<int>> seen;
        for (int j = 0; j < nc; ++j) {
            std::vector<int> cl;
            int len = 1 + static_cast<int>(rng() % std::min(3, nv));
            std::set<int> vars;
            while (static_cast<int>(vars.size()) < len) vars.insert(1 + rng() % nv);
            for (int v : vars) cl.push_back((rng() % 2) ? v : -v);
            std::vector<int> key;
            for (int l : cl) key.push_back(lit_index(l));
            std::sort(key.begin(), key.end());
            if (seen.insert(key).second) clauses.push_back(cl);
        }
        CnfFormula f = CnfFormula::from_dimacs_clauses(nv, clauses);
        ModelGraph m = model_graph(f);

        std::set<std::vector<int>> clause_set;
        for (auto& cl : f.clauses) clause_set.insert(cl);

        // direct test over all negation-consistent literal permutations
        std::set<std::vector<std::pair<int, int>>> direct;
        std::vector<int> vars(nv);
        for (int i = 0; i < nv; ++i) vars[i] = i;
        std::vector<int> vperm = vars;
        do {
            for (int mask = 0; mask < (1 << nv); ++mask) {
                std::vector<int> img(2 * nv);
                for (int v = 0; v < nv; ++v) {
                    bool flip = (mask >> v) & 1;
                    img[2 * v] = 2 * vperm[v] + (flip ? 1 : 0);
                    img[2 * v + 1] = 2 * vperm[v] + (flip ? 0 : 1);
                }
                Permutation p = Permutation::from_images(img);
                bool fixes = true;
                for (auto& cl : f.clauses) {
                    std::vector<int> icl;
                    for (int l : cl) icl.push_back(p.apply(l));
                    std::sort(icl.begin(), icl.end());
                    if (!clause_set.count(icl)) {
                        fixes = false;
                        break;
                    }
                }
                if (fixes) direct.insert(p.moved());
            }
        } while (std::next_permutation(vperm.begin(), vperm.end()));

        oracle::ElementSet autos = oracle::enumerate_automorphisms(m.graph);
        std::set<std::vector<std::pair<int, int>>> projected;
        for (auto& a : autos.elems) projected.insert(project_vertex_perm(m, a).moved());
        CHECK(projected == direct);

        // closure under composition
        for (auto it1 = projected.begin(); it1 != projected.end(); ++it1)
            for (auto it2 = projected.begin(); it2 != projected.end(); ++it2) {
                Permutation a = Permutation::from_moved(2 * nv, *it1);
                Permutation b = Permutation::from_moved(2 * nv, *it2);
                CHECK(projected.count(compose(a, b).moved()) == 1);
            }
    }
}

TEST_CASE("generator file parsing") {
    std::istringstream in("# comment\n(1,2,3)(-1,-2,-3)(4,5,6)(-4,-5,-6)\n\n(7,8)(-7,-8)\n");
    GeneratingSet s = read_generator_file(in, 8);
    CHECK(s.gens.size() == 2);
    CHECK(s.degree == 16);
    CHECK(format_literal_cycles(s.gens[1]) == "(7,8)(-7,-8)");

    std::istringstream bad("(1,99)\n");
    CHECK_THROWS_AS(read_generator_file(bad, 8), ParseError);
}

TEST_CASE("duplicate clauses rejected in make()") {
    CHECK_THROWS_AS(CnfFormula::from_dimacs_clauses(2, {{1, 2}, {2, 1}}), ContractError);
    CHECK_THROWS_AS(CnfFormula::from_dimacs_clauses(2, {{1, -1}}), ContractError);
}
