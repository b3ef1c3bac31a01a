#include "symscope/equivalence.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "symscope/errors.hpp"

namespace symscope {

namespace {

// Vertex color tags, mapped to contiguous color ids by sorted order:
// {0} base, {1,gen,len} gadget, {2,gen,len,dist} subdivision, {3,size} canonical.
using ColorTag = std::vector<int>;

struct TagTable {
    std::map<ColorTag, std::vector<int>> vertices_by_tag;

    void set(int vertex, ColorTag tag) { vertices_by_tag[std::move(tag)].push_back(vertex); }

    void apply(ColoredGraph& g) const {
        std::vector<int> colors(g.n, -1);
        int next = 0;
        for (auto& [tag, verts] : vertices_by_tag) {
            for (int v : verts) colors[v] = next;
            ++next;
        }
        g.set_colors(std::move(colors), next);
    }
};

// cycle length of every moved point of g
std::vector<std::pair<int, int>> point_cycle_lengths(const Permutation& g) {
    std::vector<std::pair<int, int>> out;
    for (auto& cyc : g.cycles())
        for (int x : cyc) out.emplace_back(x, static_cast<int>(cyc.size()));
    std::sort(out.begin(), out.end());
    return out;
}

struct CtgBuilder {
    const GeneratingSet& s;
    const Partition* orbits = nullptr;
    const std::vector<std::optional<CanonicalCycle>>* canonical = nullptr;

    CycleTypeGraph build() {
        CycleTypeGraph ctg;
        ctg.degree = s.degree;
        ctg.gadget_of_gen.assign(s.gens.size(), std::vector<int>(s.degree, -1));
        ctg.canonical_of_point.assign(s.degree, -1);

        // canonical-cycle position of every covered point
        std::vector<int> canon_pos(s.degree, -1), canon_size(s.degree, 0);
        if (canonical) {
            for (auto& cc : *canonical) {
                if (!cc) continue;
                for (std::size_t k = 0; k < cc->points.size(); ++k) {
                    canon_pos[cc->points[k]] = static_cast<int>(k);
                    canon_size[cc->points[k]] = static_cast<int>(cc->points.size());
                }
            }
        }

        int next_vertex = s.degree;
        TagTable tags;
        for (int v = 0; v < s.degree; ++v) tags.set(v, {0});

        struct GadgetEdge {
            int from, to, gen, len, dist;
        };
        std::vector<GadgetEdge> gadget_edges;
        std::vector<std::pair<int, int>> base_links;  // gadget/canonical vertex -> base point

        for (std::size_t i = 0; i < s.gens.size(); ++i) {
            auto lens = point_cycle_lengths(s.gens[i]);
            for (auto& [x, len] : lens) {
                int v = next_vertex++;
                ctg.gadget_of_gen[i][x] = v;
                tags.set(v, {1, static_cast<int>(i), len});
                base_links.emplace_back(v, x);
                ++ctg.num_gadget_vertices;
            }
            for (auto& [x, len] : lens) {
                int y = s.gens[i].apply(x);
                int dist = 0;
                if (canon_pos[x] >= 0) {
                    if (canon_pos[y] < 0)
                        throw ContractError("canonical cycle does not cover a whole orbit");
                    int m = canon_size[x];
                    dist = ((canon_pos[y] - canon_pos[x]) % m + m) % m;
                }
                gadget_edges.push_back({ctg.gadget_of_gen[i][x], ctg.gadget_of_gen[i][y],
                                        static_cast<int>(i), len, dist});
            }
        }

        std::vector<std::pair<int, int>> canon_edges;  // directed, inside canonical gadgets
        if (canonical) {
            for (auto& cc : *canonical) {
                if (!cc) continue;
                int m = static_cast<int>(cc->points.size());
                std::vector<int> verts(m);
                for (int k = 0; k < m; ++k) {
                    int v = next_vertex++;
                    verts[k] = v;
                    ctg.canonical_of_point[cc->points[k]] = v;
                    tags.set(v, {3, m});
                    base_links.emplace_back(v, cc->points[k]);
                    ++ctg.num_canonical_vertices;
                }
                for (int k = 0; k < m; ++k) canon_edges.emplace_back(verts[k], verts[(k + 1) % m]);
            }
        }

        // subdivision vertices for gadget edges of covered points
        struct Subdivided {
            int from, mid, to;
        };
        std::vector<Subdivided> subdivided;
        std::vector<std::pair<int, int>> plain_edges;
        for (auto& e : gadget_edges) {
            if (e.dist > 0) {  // covered points always have dist >= 1
                int v = next_vertex++;
                tags.set(v, {2, e.gen, e.len, e.dist});
                subdivided.push_back({e.from, v, e.to});
                ++ctg.num_subdivision_vertices;
            } else {
                plain_edges.emplace_back(e.from, e.to);
            }
        }

        ColoredGraph g(next_vertex);
        for (auto& [v, x] : base_links) g.add_undirected_edge(v, x);
        for (auto& [a, b] : plain_edges) g.add_directed_edge(a, b);
        for (auto& sd : subdivided) {
            g.add_directed_edge(sd.from, sd.mid);
            g.add_directed_edge(sd.mid, sd.to);
        }
        for (auto& [a, b] : canon_edges) g.add_directed_edge(a, b);
        tags.apply(g);
        g.seal();
        ctg.graph = std::move(g);
        return ctg;
    }
};

} // namespace

int CycleTypeGraph::gadget_vertex(int gen, int point) const {
    if (gen < 0 || gen >= static_cast<int>(gadget_of_gen.size())) return -1;
    if (point < 0 || point >= degree) return -1;
    return gadget_of_gen[gen][point];
}

int CycleTypeGraph::canonical_vertex(int point) const {
    if (point < 0 || point >= degree) return -1;
    return canonical_of_point[point];
}

CycleTypeGraph cycle_type_graph(const GeneratingSet& s) {
    CtgBuilder b{s, nullptr, nullptr};
    return b.build();
}

std::vector<int> cycle_overlap(const std::vector<int>& c,
                               const std::vector<std::vector<int>>& d) {
    if (c.empty()) throw ContractError("cycle_overlap: empty base cycle");
    std::unordered_map<int, int> next_c;
    std::unordered_set<int> in_c(c.begin(), c.end());
    if (in_c.size() != c.size()) throw ContractError("cycle_overlap: duplicate point in C");
    for (std::size_t k = 0; k < c.size(); ++k) next_c[c[k]] = c[(k + 1) % c.size()];

    std::unordered_set<int> in_d;
    for (auto& cyc : d) {
        for (int x : cyc)
            if (!in_d.insert(x).second)
                throw ContractError("cycle_overlap: overlap cycles are not pairwise disjoint");
    }

    for (auto& cyc : d) {
        // snapshot of the overlap points of this cycle
        std::vector<char> is_overlap(cyc.size(), 0);
        bool any = false;
        for (std::size_t k = 0; k < cyc.size(); ++k)
            if (in_c.count(cyc[k])) {
                is_overlap[k] = 1;
                any = true;
            }
        if (!any) throw ContractError("cycle_overlap: cycle disjoint from C");
        for (std::size_t k = 0; k < cyc.size(); ++k) {
            if (!is_overlap[k]) continue;
            // read the segment from cyc[k] up to the next overlap point
            std::vector<int> segment;
            for (std::size_t t = 1; t < cyc.size(); ++t) {
                std::size_t pos = (k + t) % cyc.size();
                if (is_overlap[pos]) break;
                segment.push_back(cyc[pos]);
            }
            if (segment.empty()) continue;
            int after = cyc[k];
            int tail = next_c[after];
            for (int x : segment) {
                next_c[after] = x;
                in_c.insert(x);
                after = x;
            }
            next_c[after] = tail;
        }
    }

    std::vector<int> out;
    out.reserve(in_c.size());
    int x = c.front();
    do {
        out.push_back(x);
        x = next_c[x];
    } while (x != c.front());
    return out;
}

CanonicalCycle canonical_cycle(const GeneratingSet& s, const std::vector<int>& orbit,
                               const std::vector<int>& unique_cycle, int orbit_id) {
    std::vector<char> in_orbit(s.degree, 0);
    for (int x : orbit) {
        if (x < 0 || x >= s.degree) throw ContractError("canonical_cycle: point out of domain");
        if (in_orbit[x]) throw ContractError("canonical_cycle: duplicate orbit point");
        in_orbit[x] = 1;
    }
    if (unique_cycle.empty()) throw ContractError("canonical_cycle: empty seed cycle");
    for (int x : unique_cycle)
        if (!in_orbit[x]) throw ContractError("canonical_cycle: seed cycle leaves the orbit");

    // pool of generator cycles inside the orbit, each processed at most once
    std::vector<std::vector<int>> pool;
    std::vector<std::vector<int>> cycles_of_point(s.degree);
    for (auto& g : s.gens) {
        for (auto& cyc : g.cycles()) {
            if (!in_orbit[cyc.front()]) continue;
            int id = static_cast<int>(pool.size());
            for (int x : cyc) cycles_of_point[x].push_back(id);
            pool.push_back(cyc);
        }
    }

    std::vector<int> next_c(s.degree, -1);
    std::vector<char> in_c(s.degree, 0);
    std::size_t covered = 0;
    for (std::size_t k = 0; k < unique_cycle.size(); ++k) {
        next_c[unique_cycle[k]] = unique_cycle[(k + 1) % unique_cycle.size()];
        in_c[unique_cycle[k]] = 1;
        ++covered;
    }

    std::vector<char> queued(pool.size(), 0);
    std::vector<int> queue;
    auto enqueue_cycles_of = [&](int point) {
        for (int id : cycles_of_point[point])
            if (!queued[id]) {
                queued[id] = 1;
                queue.push_back(id);
            }
    };
    for (int x : unique_cycle) enqueue_cycles_of(x);

    std::size_t head = 0;
    while (head < queue.size() && covered < orbit.size()) {
        const std::vector<int>& cyc = pool[queue[head++]];
        std::vector<char> is_overlap(cyc.size(), 0);
        for (std::size_t k = 0; k < cyc.size(); ++k)
            if (in_c[cyc[k]]) is_overlap[k] = 1;
        for (std::size_t k = 0; k < cyc.size(); ++k) {
            if (!is_overlap[k]) continue;
            int after = cyc[k];
            int tail = next_c[after];
            for (std::size_t t = 1; t < cyc.size(); ++t) {
                std::size_t pos = (k + t) % cyc.size();
                if (is_overlap[pos]) break;
                int x = cyc[pos];
                next_c[after] = x;
                in_c[x] = 1;
                ++covered;
                enqueue_cycles_of(x);
                after = x;
            }
            next_c[after] = tail;
        }
    }
    if (covered != orbit.size())
        throw ContractError("canonical_cycle: generator cycles do not cover the orbit "
                            "(caller contract violated)");

    int start = *std::min_element(orbit.begin(), orbit.end());
    CanonicalCycle cc;
    cc.orbit = orbit_id;
    cc.points.reserve(orbit.size());
    int x = start;
    do {
        cc.points.push_back(x);
        x = next_c[x];
    } while (x != start);
    return cc;
}

CycleTypeGraph enhanced_cycle_type_graph(
    const GeneratingSet& s, const Partition& orbits,
    const std::vector<std::optional<CanonicalCycle>>& canonical) {
    if (orbits.degree != s.degree)
        throw ContractError("enhanced_cycle_type_graph: orbit partition degree mismatch");
    if (canonical.size() != orbits.num_classes())
        throw ContractError("enhanced_cycle_type_graph: one canonical slot per orbit expected");
    for (std::size_t o = 0; o < canonical.size(); ++o) {
        if (!canonical[o]) continue;
        if (canonical[o]->points.size() < 2)
            throw ContractError("enhanced_cycle_type_graph: canonical cycle shorter than 2");
        std::vector<int> pts = canonical[o]->points;
        std::sort(pts.begin(), pts.end());
        if (pts != orbits.classes[o])
            throw ContractError("enhanced_cycle_type_graph: canonical cycle does not cover "
                                "its orbit");
    }
    CtgBuilder b{s, &orbits, &canonical};
    return b.build();
}

EquivalenceResult equivalent_orbits(const GeneratingSet& s, const Partition& orbits,
                                    const std::vector<std::optional<CanonicalCycle>>& canonical) {
    EquivalenceResult res;
    res.orbits = orbits;
    res.canonical = canonical;

    CycleTypeGraph ctg = enhanced_cycle_type_graph(s, orbits, canonical);
    res.stable = color_refinement(ctg.graph, Coloring::of_graph(ctg.graph));

    int k = static_cast<int>(orbits.num_classes());
    res.decided.assign(k, false);
    for (int o = 0; o < k; ++o)
        res.decided[o] = orbits.classes[o].size() == 1 || canonical[o].has_value();

    // union decided orbits whose base vertices share a stable color
    std::vector<int> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    std::map<int, int> first_orbit_of_color;
    for (int x = 0; x < s.degree; ++x) {
        int o = orbits.class_of[x];
        if (!res.decided[o]) continue;
        auto [it, fresh] = first_orbit_of_color.try_emplace(res.stable.color[x], o);
        if (!fresh) parent[find(o)] = find(it->second);
    }

    std::vector<int> raw(k);
    for (int o = 0; o < k; ++o) raw[o] = res.decided[o] ? find(o) : k + o;
    res.orbit_classes = Partition::from_class_of(raw);
    for (int o = 0; o < k; ++o)
        if (!res.decided[o]) res.undetermined_orbits.push_back(o);
    return res;
}

std::vector<std::pair<int, int>> orbit_bijection(const EquivalenceResult& eq, int orbit_a,
                                                 int orbit_b) {
    int k = static_cast<int>(eq.orbits.num_classes());
    if (orbit_a < 0 || orbit_a >= k || orbit_b < 0 || orbit_b >= k)
        throw ContractError("orbit_bijection: orbit id out of range");
    if (!eq.decided[orbit_a] || !eq.decided[orbit_b] ||
        eq.orbit_classes.class_of[orbit_a] != eq.orbit_classes.class_of[orbit_b])
        throw ContractError("orbit_bijection: orbits are not equivalent in this result");

    const std::vector<int>& pa = eq.orbits.classes[orbit_a];
    const std::vector<int>& pb = eq.orbits.classes[orbit_b];
    std::vector<std::pair<int, int>> b;
    if (orbit_a == orbit_b) {
        for (int x : pa) b.emplace_back(x, x);
        return b;
    }
    if (pa.size() == 1) {
        b.emplace_back(pa[0], pb[0]);
        return b;
    }
    const CanonicalCycle& ca = *eq.canonical[orbit_a];
    const CanonicalCycle& cb = *eq.canonical[orbit_b];
    int v = ca.points[0];
    int vcolor = eq.stable.color[v];
    int pos_b = -1;
    for (int x : pb) {  // smallest equally colored partner
        if (eq.stable.color[x] == vcolor) {
            for (std::size_t j = 0; j < cb.points.size(); ++j)
                if (cb.points[j] == x) pos_b = static_cast<int>(j);
            break;
        }
    }
    if (pos_b < 0)
        throw ContractError("orbit_bijection: no equally colored partner vertex");
    int m = static_cast<int>(ca.points.size());
    for (int j = 0; j < m; ++j)
        b.emplace_back(ca.points[j], cb.points[(pos_b + j) % m]);
    std::sort(b.begin(), b.end());
    return b;
}

namespace {

// The literal permutation realizing one column move sigma (as index pairs
// j -> sigma(j)) simultaneously on every row and on the negation side.
Permutation column_action_perm(int n_lits, const std::vector<std::vector<int>>& rows,
                               const std::vector<std::pair<int, int>>& column_moves) {
    std::vector<std::pair<int, int>> moved;
    for (auto& row : rows)
        for (auto& [j, jp] : column_moves) {
            moved.emplace_back(row[j], row[jp]);
            moved.emplace_back(negate_lit(row[j]), negate_lit(row[jp]));
        }
    return Permutation::from_moved(n_lits, std::move(moved));
}

bool verify_column_action(const ModelGraph& m, const std::vector<std::vector<int>>& rows) {
    int c = static_cast<int>(rows.front().size());
    if (c < 2) return true;
    std::vector<std::vector<std::pair<int, int>>> generators;
    generators.push_back({{0, 1}, {1, 0}});  // adjacent transposition
    if (c >= 3) {
        std::vector<std::pair<int, int>> rot;
        for (int j = 0; j < c; ++j) rot.emplace_back(j, (j + 1) % c);
        generators.push_back(std::move(rot));
    }
    for (auto& moves : generators) {
        try {
            Permutation p = column_action_perm(2 * m.n_vars, rows, moves);
            if (!is_automorphism(m.graph, lift_literal_perm(m, p))) return false;
        } catch (const ContractError&) {
            return false;
        }
    }
    return true;
}

} // namespace

std::vector<std::vector<std::vector<int>>> row_interchangeability_groups(
    const CnfFormula& f, const ModelGraph& m, const ActionReport& action,
    const EquivalenceResult& eq) {
    if (eq.orbits.degree != 2 * f.n_vars)
        throw ContractError("row_interchangeability_groups: equivalence result is not on "
                            "the literal domain");

    auto negation_orbit = [&](int o) -> int {
        int no = eq.orbits.class_of[negate_lit(eq.orbits.classes[o].front())];
        std::vector<int> negs;
        for (int l : eq.orbits.classes[o]) negs.push_back(negate_lit(l));
        std::sort(negs.begin(), negs.end());
        return negs == eq.orbits.classes[no] ? no : -1;
    };
    auto symmetric_verdict = [&](int o) {
        return action.orbits[o].verdict == ActionVerdict::NaturalSymmetric;
    };

    std::vector<std::vector<std::vector<int>>> matrices;
    for (auto& cls : eq.orbit_classes.classes) {
        // qualified pairs (orbit, negation orbit), keyed by the smaller id
        std::set<int> pair_reps;
        for (int o : cls) {
            if (!eq.decided[o] || eq.orbits.classes[o].size() < 2) continue;
            int no = negation_orbit(o);
            if (no < 0 || no == o) continue;  // self-complementary: rejected
            if (!eq.decided[no] ||
                eq.orbit_classes.class_of[no] != eq.orbit_classes.class_of[o])
                continue;  // condition 3: negation orbit present and equivalent
            if (!symmetric_verdict(o) && !symmetric_verdict(no)) continue;
            pair_reps.insert(std::min(o, no));
        }
        if (pair_reps.empty()) continue;

        int ref = *pair_reps.begin();
        std::vector<std::vector<int>> lit_rows;
        for (int o : pair_reps) {
            auto b = orbit_bijection(eq, ref, o);
            std::vector<int> img(eq.orbits.degree, -1);
            for (auto& [x, y] : b) img[x] = y;
            std::vector<int> row;
            for (int p : eq.canonical[ref]->points) row.push_back(img[p]);
            lit_rows.push_back(std::move(row));
        }

        std::vector<std::vector<std::vector<int>>> candidates;
        if (verify_column_action(m, lit_rows)) {
            candidates.push_back(lit_rows);
        } else {
            // conservative fallback: one matrix per row, individually verified
            for (auto& row : lit_rows)
                if (verify_column_action(m, {row})) candidates.push_back({row});
        }
        for (auto& rows : candidates) {
            std::vector<std::vector<int>> var_matrix;
            for (auto& row : rows) {
                std::vector<int> vars;
                for (int l : row) vars.push_back(var_of_lit(l));
                var_matrix.push_back(std::move(vars));
            }
            std::sort(var_matrix.begin(), var_matrix.end(),
                      [](const std::vector<int>& a, const std::vector<int>& b) {
                          return *std::min_element(a.begin(), a.end()) <
                                 *std::min_element(b.begin(), b.end());
                      });
            matrices.push_back(std::move(var_matrix));
        }
    }
    std::sort(matrices.begin(), matrices.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return matrices;
}

} // namespace symscope
