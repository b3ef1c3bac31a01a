#include "symscope/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>

#include "symscope/errors.hpp"

namespace symscope {
namespace oracle {

namespace {

bool perm_less(const Permutation& a, const Permutation& b) { return a.moved() < b.moved(); }

} // namespace

ElementSet make_element_set(int degree, std::vector<Permutation> elems) {
    ElementSet es;
    es.degree = degree;
    es.elems = std::move(elems);
    std::sort(es.elems.begin(), es.elems.end(), perm_less);
    es.elems.erase(std::unique(es.elems.begin(), es.elems.end()), es.elems.end());
    return es;
}

bool ElementSet::contains(const Permutation& p) const {
    return std::binary_search(elems.begin(), elems.end(), p, perm_less);
}

namespace {

struct AutoSearch {
    const ColoredGraph& g;
    const Limits& limits;
    std::vector<int> order;                  // vertices in assignment order
    std::vector<std::vector<int>> candidates;  // per order position
    std::vector<int> image;
    std::vector<char> used;
    std::vector<Permutation> found;

    AutoSearch(const ColoredGraph& g_, const Limits& limits_) : g(g_), limits(limits_) {
        Coloring refined = color_refinement(g, Coloring::of_graph(g));
        std::vector<std::vector<int>> members(refined.num_classes);
        for (int v = 0; v < g.n; ++v) members[refined.color[v]].push_back(v);
        order.resize(g.n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            int ca = refined.color[a], cb = refined.color[b];
            if (refined.class_size[ca] != refined.class_size[cb])
                return refined.class_size[ca] < refined.class_size[cb];
            return ca < cb;
        });
        candidates.reserve(g.n);
        for (int v : order) candidates.push_back(members[refined.color[v]]);
        image.assign(g.n, -1);
        used.assign(g.n, 0);
    }

    bool consistent(int v, int u, int depth) const {
        for (int k = 0; k < depth; ++k) {
            int w = order[k], fw = image[w];
            if (g.has_undirected_edge(v, w) != g.has_undirected_edge(u, fw)) return false;
            if (g.has_directed_edge(v, w) != g.has_directed_edge(u, fw)) return false;
            if (g.has_directed_edge(w, v) != g.has_directed_edge(fw, u)) return false;
        }
        return true;
    }

    void dfs(int depth) {
        if (depth == g.n) {
            if (found.size() >= limits.max_elements)
                throw BoundError("automorphism count exceeds element bound");
            found.push_back(Permutation::from_images(image));
            return;
        }
        int v = order[depth];
        for (int u : candidates[depth]) {
            if (used[u]) continue;
            if (!consistent(v, u, depth)) continue;
            image[v] = u;
            used[u] = 1;
            dfs(depth + 1);
            used[u] = 0;
            image[v] = -1;
        }
    }
};

} // namespace

ElementSet enumerate_automorphisms(const ColoredGraph& g, const Limits& limits) {
    if (g.n > limits.max_vertices)
        throw BoundError("graph has " + std::to_string(g.n) + " vertices, oracle bound is " +
                         std::to_string(limits.max_vertices));
    AutoSearch search(g, limits);
    search.dfs(0);
    return make_element_set(g.n, std::move(search.found));
}

namespace {

// Assign f[x] = y and propagate commutation constraints f(g(a)) = g(f(a))
// through all generators for every newly assigned point. Once the map is
// total, every (point, generator) pair has been checked, so survivors are
// exactly the centralizer elements. Records assignments in `trail`; returns
// false and leaves a partial trail on contradiction.
bool assign_and_propagate(const GeneratingSet& s, std::vector<int>& f, std::vector<char>& used,
                          int x, int y, std::vector<int>& trail) {
    if (used[y]) return false;
    f[x] = y;
    used[y] = 1;
    trail.push_back(x);
    std::size_t head = trail.size() - 1;
    while (head < trail.size()) {
        int a = trail[head++];
        for (auto& g : s.gens) {
            int b = g.apply(a);
            int fb = g.apply(f[a]);
            if (f[b] == -1) {
                if (used[fb]) return false;
                f[b] = fb;
                used[fb] = 1;
                trail.push_back(b);
            } else if (f[b] != fb) {
                return false;
            }
        }
    }
    return true;
}

void undo_trail(std::vector<int>& f, std::vector<char>& used, const std::vector<int>& trail) {
    for (int x : trail) {
        used[f[x]] = 0;
        f[x] = -1;
    }
}

struct CentralizerSearch {
    const GeneratingSet& s;
    const Limits& limits;
    std::vector<int> f;
    std::vector<char> used;
    std::vector<Permutation> found;

    CentralizerSearch(const GeneratingSet& s_, const Limits& l)
        : s(s_), limits(l), f(s_.degree, -1), used(s_.degree, 0) {}

    void dfs() {
        int x = -1;
        for (int v = 0; v < s.degree; ++v)
            if (f[v] == -1) { x = v; break; }
        if (x == -1) {
            if (found.size() >= limits.max_elements)
                throw BoundError("centralizer exceeds element bound");
            found.push_back(Permutation::from_images(f));
            return;
        }
        for (int y = 0; y < s.degree; ++y) {
            if (used[y]) continue;
            std::vector<int> trail;
            if (assign_and_propagate(s, f, used, x, y, trail)) dfs();
            undo_trail(f, used, trail);
        }
    }
};

} // namespace

ElementSet brute_centralizer(const GeneratingSet& s, const Limits& limits) {
    if (s.degree > limits.max_degree)
        throw BoundError("centralizer oracle degree bound exceeded");
    CentralizerSearch search(s, limits);
    search.dfs();
    return make_element_set(s.degree, std::move(search.found));
}

namespace {

// Tries to extend b(seed) = target to a bijection Delta1 -> Delta2 commuting
// with every generator. Returns the bijection as (point, image) pairs.
std::optional<std::vector<std::pair<int, int>>> commuting_bijection(
    const GeneratingSet& s, const std::vector<int>& delta1, const std::vector<int>& delta2,
    int seed, int target) {
    std::vector<std::pair<int, int>> b;
    std::vector<int> img(s.degree, -1);
    std::vector<char> taken(s.degree, 0);
    img[seed] = target;
    taken[target] = 1;
    std::vector<int> queue = {seed};
    std::size_t head = 0;
    while (head < queue.size()) {
        int a = queue[head++];
        for (auto& g : s.gens) {
            int an = g.apply(a);
            int bn = g.apply(img[a]);
            if (img[an] == -1) {
                if (taken[bn]) return std::nullopt;
                img[an] = bn;
                taken[bn] = 1;
                queue.push_back(an);
            } else if (img[an] != bn) {
                return std::nullopt;
            }
        }
    }
    if (queue.size() != delta1.size()) return std::nullopt;  // did not cover the orbit
    for (int a : delta1) {
        if (img[a] == -1) return std::nullopt;
        b.emplace_back(a, img[a]);
    }
    // Image must be exactly delta2.
    std::vector<int> image_pts;
    for (auto& [k, v] : b) image_pts.push_back(v);
    std::sort(image_pts.begin(), image_pts.end());
    if (image_pts != delta2) return std::nullopt;
    std::sort(b.begin(), b.end());
    return b;
}

} // namespace

BruteEquivalence brute_equivalent_orbits(const GeneratingSet& s, const Partition& orbits,
                                         const Limits& limits) {
    int k = static_cast<int>(orbits.num_classes());
    for (auto& cls : orbits.classes)
        if (static_cast<int>(cls.size()) > limits.max_orbit_size)
            throw BoundError("orbit larger than oracle bound");

    // Union-find over orbit ids.
    std::vector<int> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };

    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            if (orbits.classes[i].size() != orbits.classes[j].size()) continue;
            if (find(i) == find(j)) continue;
            int seed = orbits.classes[i].front();
            for (int target : orbits.classes[j]) {
                auto b = commuting_bijection(s, orbits.classes[i], orbits.classes[j], seed, target);
                if (b) {
                    parent[find(j)] = find(i);
                    break;
                }
            }
        }
    }

    BruteEquivalence res;
    res.class_of_orbit.assign(k, -1);
    std::vector<int> root_to_class;
    for (int i = 0; i < k; ++i) {
        int r = find(i);
        int c = -1;
        for (std::size_t t = 0; t < root_to_class.size(); ++t)
            if (root_to_class[t] == r) c = static_cast<int>(t);
        if (c == -1) {
            c = static_cast<int>(root_to_class.size());
            root_to_class.push_back(r);
            res.classes.emplace_back();
        }
        res.class_of_orbit[i] = c;
        res.classes[c].push_back(i);
    }
    // Bijections from the class representative (minimum orbit id).
    res.bijection_from_rep.assign(k, {});
    for (auto& cls : res.classes) {
        int rep = cls.front();
        for (int member : cls) {
            if (member == rep) {
                for (int p : orbits.classes[rep]) res.bijection_from_rep[member].emplace_back(p, p);
                continue;
            }
            int seed = orbits.classes[rep].front();
            for (int target : orbits.classes[member]) {
                auto b = commuting_bijection(s, orbits.classes[rep], orbits.classes[member], seed,
                                             target);
                if (b) {
                    res.bijection_from_rep[member] = *b;
                    break;
                }
            }
        }
    }
    return res;
}

bool brute_decomposition_valid(const std::vector<Permutation>& elems, const Partition& orbits,
                               const std::vector<std::vector<int>>& parts) {
    // Count distinct restrictions of the element set to each part's support.
    unsigned long long product = 1;
    for (auto& part : parts) {
        std::vector<char> in_part(orbits.degree, 0);
        for (int orbit_id : part)
            for (int p : orbits.classes[orbit_id]) in_part[p] = 1;
        std::vector<std::vector<std::pair<int, int>>> restrictions;
        restrictions.reserve(elems.size());
        for (auto& e : elems) {
            std::vector<std::pair<int, int>> r;
            for (auto& [k, v] : e.moved())
                if (in_part[k]) r.emplace_back(k, v);
            restrictions.push_back(std::move(r));
        }
        std::sort(restrictions.begin(), restrictions.end());
        restrictions.erase(std::unique(restrictions.begin(), restrictions.end()),
                           restrictions.end());
        product *= restrictions.size();
        if (product > elems.size()) return false;
    }
    return product == elems.size();
}

std::vector<std::vector<int>> brute_finest_decomposition(const GeneratingSet& s,
                                                         const Partition& orbits,
                                                         const Limits& limits) {
    std::vector<Permutation> elems = enumerate_group(s, limits.max_elements);

    // Index nontrivial orbits; singleton orbits are always their own factor.
    std::vector<int> nontrivial;
    for (int i = 0; i < static_cast<int>(orbits.num_classes()); ++i)
        if (orbits.classes[i].size() >= 2) nontrivial.push_back(i);
    int q = static_cast<int>(nontrivial.size());
    if (q > limits.max_nontrivial_orbits)
        throw BoundError("too many nontrivial orbits for the decomposition oracle");

    std::vector<int> orbit_bit(orbits.num_classes(), -1);
    for (int b = 0; b < q; ++b) orbit_bit[nontrivial[b]] = b;

    // cnt[A] = number of group elements whose moved points lie inside the
    // orbits of A, via subset-sum DP.
    std::vector<long long> cnt(std::size_t(1) << q, 0);
    for (auto& e : elems) {
        std::uint32_t mask = 0;
        for (auto& [k, v] : e.moved()) mask |= 1u << orbit_bit[orbits.class_of[k]];
        ++cnt[mask];
    }
    for (int b = 0; b < q; ++b)
        for (std::uint32_t a = 0; a < (1u << q); ++a)
            if (a & (1u << b)) cnt[a] += cnt[a ^ (1u << b)];

    // Recursive splitting: a subset Q splits at (A, Q\A) iff the restriction
    // counts multiply; recurse until no valid bipartition exists.
    std::vector<std::uint32_t> factors;
    std::vector<std::uint32_t> stack;
    if (q > 0) stack.push_back((1u << q) - 1);
    while (!stack.empty()) {
        std::uint32_t qmask = stack.back();
        stack.pop_back();
        std::uint32_t low = qmask & (~qmask + 1);
        bool split = false;
        for (std::uint32_t a = (qmask - 1) & qmask; a; a = (a - 1) & qmask) {
            if (!(a & low)) continue;  // canonical side contains the lowest orbit
            if (cnt[a] * cnt[qmask ^ a] == cnt[qmask]) {
                stack.push_back(a);
                stack.push_back(qmask ^ a);
                split = true;
                break;
            }
        }
        if (!split) factors.push_back(qmask);
    }

    std::vector<std::vector<int>> parts;
    for (std::uint32_t mask : factors) {
        std::vector<int> ids;
        for (int b = 0; b < q; ++b)
            if (mask & (1u << b)) ids.push_back(nontrivial[b]);
        parts.push_back(std::move(ids));
    }
    for (int i = 0; i < static_cast<int>(orbits.num_classes()); ++i)
        if (orbits.classes[i].size() < 2) parts.push_back({i});
    std::sort(parts.begin(), parts.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                  return a.front() < b.front();
              });
    return parts;
}

} // namespace oracle
} // namespace symscope
