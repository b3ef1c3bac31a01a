#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "symscope/action.hpp"
#include "symscope/cnf.hpp"
#include "symscope/equivalence.hpp"
#include "symscope/graph.hpp"
#include "symscope/perm.hpp"

namespace testutil {

using namespace symscope;

// Running example formula: vars x1..x3 -> 1..3, y1..y3 -> 4..6, z1..z2 -> 7..8.
inline std::string fe_dimacs() {
    return "c running example\n"
           "p cnf 8 4\n"
           "1 -4 0\n"
           "2 -5 0\n"
           "3 -6 0\n"
           "1 2 3 7 8 0\n";
}

// Negation-closed generating set for the running example group on the 16 literals.
inline GeneratingSet fe_literal_gens() {
    std::vector<Permutation> gens = {
        parse_literal_cycles("(1,2,3)(-1,-2,-3)(4,5,6)(-4,-5,-6)", 8),
        parse_literal_cycles("(1,2)(-1,-2)(4,5)(-4,-5)", 8),
        parse_literal_cycles("(7,8)(-7,-8)", 8),
    };
    return GeneratingSet(16, std::move(gens));
}

// A variant generating set whose z-swap omits the negative literals.
// Not negation-consistent; usable only as a plain permutation set.
inline GeneratingSet fe_literal_gens_bare_z() {
    std::vector<Permutation> gens = {
        parse_literal_cycles("(1,2,3)(-1,-2,-3)(4,5,6)(-4,-5,-6)", 8),
        parse_literal_cycles("(1,2)(-1,-2)(4,5)(-4,-5)", 8),
        parse_literal_cycles("(7,8)", 8),
    };
    return GeneratingSet(16, std::move(gens));
}

inline CnfFormula fe_formula() { return parse_dimacs(fe_dimacs()); }

inline ModelGraph fe_model_graph() { return model_graph(fe_formula()); }

inline GeneratingSet lift_all(const ModelGraph& m, const GeneratingSet& lit_gens) {
    std::vector<Permutation> lifted;
    for (auto& g : lit_gens.gens) lifted.push_back(lift_literal_perm(m, g));
    return GeneratingSet(m.graph.n, std::move(lifted));
}

// Random sparse permutation: a few random disjoint cycles.
inline Permutation random_perm(std::mt19937_64& rng, int degree) {
    std::vector<int> pts(degree);
    for (int i = 0; i < degree; ++i) pts[i] = i;
    std::shuffle(pts.begin(), pts.end(), rng);
    std::vector<std::pair<int, int>> moved;
    std::size_t used = 0;
    int cycles = degree > 1 ? 1 + static_cast<int>(rng() % 3) : 0;
    for (int c = 0; c < cycles && used + 2 <= pts.size(); ++c) {
        std::size_t len = 2 + rng() % 4;
        len = std::min(len, pts.size() - used);
        if (len < 2) break;
        for (std::size_t k = 0; k < len; ++k)
            moved.emplace_back(pts[used + k], pts[used + (k + 1) % len]);
        used += len;
    }
    return Permutation::from_moved(degree, std::move(moved));
}

inline GeneratingSet random_generating_set(std::mt19937_64& rng, int degree, int count) {
    std::vector<Permutation> gens;
    for (int i = 0; i < count; ++i) gens.push_back(random_perm(rng, degree));
    return GeneratingSet(degree, std::move(gens));
}

// Planted lockstep instance: disjoint families of equal-size blocks moved in
// lockstep by a cycle and a transposition pattern, so every orbit (block)
// carries a natural symmetric action and the blocks of a family are
// equivalent orbits. Remaining points are fixed.
struct Planted {
    GeneratingSet s{0, {}};
    std::vector<std::vector<int>> blocks;          // each block = one expected orbit
    std::vector<std::vector<std::size_t>> families;  // indices into blocks
    int fixed_points = 0;
};

inline Planted plant_lockstep(std::mt19937_64& rng, int max_domain = 16) {
    Planted p;
    int n = 8 + static_cast<int>(rng() % (max_domain - 7));
    std::vector<int> pts(n);
    std::iota(pts.begin(), pts.end(), 0);
    std::shuffle(pts.begin(), pts.end(), rng);
    std::size_t used = 0;
    std::vector<Permutation> gens;

    auto add_family = [&](int k, int m) {
        std::vector<std::size_t> fam_blocks;
        std::vector<std::vector<int>> blocks;
        for (int j = 0; j < m; ++j) {
            std::vector<int> block(pts.begin() + used, pts.begin() + used + k);
            used += k;
            fam_blocks.push_back(p.blocks.size());
            p.blocks.push_back(block);
            blocks.push_back(std::move(block));
        }
        std::vector<std::pair<int, int>> cyc, swp;
        for (auto& block : blocks) {
            for (int i = 0; i < k; ++i) cyc.emplace_back(block[i], block[(i + 1) % k]);
            if (k > 2) {
                swp.emplace_back(block[0], block[1]);
                swp.emplace_back(block[1], block[0]);
            }
        }
        gens.push_back(Permutation::from_moved(n, cyc));
        if (k > 2) gens.push_back(Permutation::from_moved(n, swp));
        p.families.push_back(std::move(fam_blocks));
    };

    int family_count = 1 + static_cast<int>(rng() % 2);
    for (int fam = 0; fam < family_count; ++fam) {
        int k = 2 + static_cast<int>(rng() % 4);      // block size
        int m = 1 + static_cast<int>(rng() % 3);      // blocks in the family
        while (used + static_cast<std::size_t>(k) * m > pts.size() && m > 1) --m;
        if (used + static_cast<std::size_t>(k) * m > pts.size()) continue;
        add_family(k, m);
    }
    // Keep fixed points scarce: the centralizer of the planted group contains
    // every permutation of the fixed points, and oracle tests enumerate it.
    while (pts.size() - used > 3) {
        int k = static_cast<int>(std::min<std::size_t>(pts.size() - used, 2 + rng() % 3));
        if (k < 2) break;
        add_family(k, 1);
    }
    p.fixed_points = static_cast<int>(pts.size() - used);
    p.s = GeneratingSet(n, std::move(gens));
    return p;
}

// Canonical cycles for every orbit, harvested from generators and random
// elements; nullopt where no unique cycle was found.
inline std::vector<std::optional<CanonicalCycle>> canonicals_for(const GeneratingSet& s,
                                                                 const Partition& orb,
                                                                 std::uint64_t seed = 1) {
    RandomElementSource src(s, seed);
    std::vector<std::optional<CanonicalCycle>> canon(orb.num_classes());
    for (int o = 0; o < static_cast<int>(orb.num_classes()); ++o) {
        if (orb.classes[o].size() < 2) continue;
        auto unique = harvest_unique_cycle(s, orb.classes[o], src);
        if (unique) canon[o] = canonical_cycle(s, orb.classes[o], *unique, o);
    }
    return canon;
}

// Independent orbit oracle: transitive closure point by point.
inline Partition orbits_by_closure(const GeneratingSet& s) {
    std::vector<int> cls(s.degree, -1);
    for (int start = 0; start < s.degree; ++start) {
        if (cls[start] >= 0) continue;
        std::vector<int> stack = {start};
        cls[start] = start;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (auto& g : s.gens) {
                for (int y : {g.apply(x), inverse(g).apply(x)}) {
                    if (cls[y] < 0) {
                        cls[y] = start;
                        stack.push_back(y);
                    }
                }
            }
        }
    }
    return Partition::from_class_of(cls);
}

} // namespace testutil
