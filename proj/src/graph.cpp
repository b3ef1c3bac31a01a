#include "symscope/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "symscope/errors.hpp"

namespace symscope {

void ColoredGraph::add_undirected_edge(int u, int v) {
    if (u < 0 || u >= n || v < 0 || v >= n)
        throw ContractError("edge endpoint out of range");
    if (u == v) throw ContractError("self-loop not allowed");
    und[u].push_back(v);
    und[v].push_back(u);
}

void ColoredGraph::add_directed_edge(int u, int v) {
    if (u < 0 || u >= n || v < 0 || v >= n)
        throw ContractError("edge endpoint out of range");
    if (u == v) throw ContractError("self-loop not allowed");
    out[u].push_back(v);
    in[v].push_back(u);
}

void ColoredGraph::set_colors(std::vector<int> colors, int num) {
    if (static_cast<int>(colors.size()) != n)
        throw ContractError("color vector size mismatch");
    color = std::move(colors);
    num_colors = num;
}

void ColoredGraph::seal() {
    std::vector<char> seen_color(num_colors, 0);
    for (int v = 0; v < n; ++v) {
        if (color[v] < 0 || color[v] >= num_colors)
            throw ContractError("vertex color out of range");
        seen_color[color[v]] = 1;
    }
    for (int c = 0; c < num_colors && n > 0; ++c)
        if (!seen_color[c]) throw ContractError("color ids not contiguous");
    auto sort_check = [](std::vector<std::vector<int>>& adj, const char* what) {
        for (auto& lst : adj) {
            std::sort(lst.begin(), lst.end());
            if (std::adjacent_find(lst.begin(), lst.end()) != lst.end())
                throw ContractError(std::string("duplicate ") + what + " edge");
        }
    };
    sort_check(und, "undirected");
    sort_check(out, "directed");
    sort_check(in, "directed");
}

namespace {
bool sorted_contains(const std::vector<int>& lst, int x) {
    return std::binary_search(lst.begin(), lst.end(), x);
}
} // namespace

bool ColoredGraph::has_undirected_edge(int u, int v) const { return sorted_contains(und[u], v); }
bool ColoredGraph::has_directed_edge(int u, int v) const { return sorted_contains(out[u], v); }

std::size_t ColoredGraph::num_undirected_edges() const {
    std::size_t m = 0;
    for (auto& lst : und) m += lst.size();
    return m / 2;
}

std::size_t ColoredGraph::num_directed_edges() const {
    std::size_t m = 0;
    for (auto& lst : out) m += lst.size();
    return m;
}

Coloring Coloring::from_colors(std::vector<int> colors) {
    // Renumber contiguously preserving the relative order of the input ids.
    std::map<int, int> renumber;
    for (int c : colors) renumber.emplace(c, 0);
    int next = 0;
    for (auto& [old_id, new_id] : renumber) new_id = next++;
    Coloring out;
    out.color.resize(colors.size());
    out.class_size.assign(next, 0);
    out.num_classes = next;
    for (std::size_t v = 0; v < colors.size(); ++v) {
        out.color[v] = renumber[colors[v]];
        ++out.class_size[out.color[v]];
    }
    return out;
}

Coloring Coloring::uniform(int n) { return from_colors(std::vector<int>(n, 0)); }

namespace {

// Partition refinement state: classes as member lists plus positions.
struct Refiner {
    const ColoredGraph& g;
    std::vector<int> cls;                    // vertex -> class id
    std::vector<std::vector<int>> members;   // class id -> vertices
    std::deque<int> worklist;
    std::vector<char> queued;

    explicit Refiner(const ColoredGraph& g_, const Coloring& initial) : g(g_) {
        cls = initial.color;
        members.resize(initial.num_classes);
        for (int v = 0; v < g.n; ++v) members[cls[v]].push_back(v);
        for (int c = 0; c < initial.num_classes; ++c) {
            worklist.push_back(c);
            queued.push_back(1);
        }
    }

    void enqueue(int c) {
        if (static_cast<int>(queued.size()) <= c) queued.resize(c + 1, 0);
        if (!queued[c]) {
            queued[c] = 1;
            worklist.push_back(c);
        }
    }

    // Splits the classes touched by `count` (values for vertices in `touched`;
    // untouched members of an affected class count as 0). The largest part
    // keeps the old class id and is not re-enqueued unless already queued.
    void split_by_counts(const std::vector<int>& touched, std::vector<int>& count) {
        std::vector<int> affected;
        for (int v : touched) {
            int c = cls[v];
            if (members[c].size() > 1) affected.push_back(c);
        }
        std::sort(affected.begin(), affected.end());
        affected.erase(std::unique(affected.begin(), affected.end()), affected.end());

        for (int c : affected) {
            // Group members by count value (0 for untouched).
            std::map<int, std::vector<int>> groups;
            for (int v : members[c]) groups[count[v]].push_back(v);
            if (groups.size() <= 1) continue;

            // Largest group keeps id c; ties broken by smaller count value.
            auto keep = groups.begin();
            for (auto it = groups.begin(); it != groups.end(); ++it)
                if (it->second.size() > keep->second.size()) keep = it;

            members[c] = keep->second;
            for (auto it = groups.begin(); it != groups.end(); ++it) {
                if (it == keep) continue;
                int fresh = static_cast<int>(members.size());
                members.push_back(it->second);
                for (int v : it->second) cls[v] = fresh;
                enqueue(fresh);
            }
        }
        for (int v : touched) count[v] = 0;
    }

    void run() {
        std::vector<int> count(g.n, 0);
        std::vector<int> touched;
        auto scatter = [&](const std::vector<int>& splitter,
                           const std::vector<std::vector<int>>& back_adj) {
            touched.clear();
            for (int w : splitter)
                for (int u : back_adj[w]) {
                    if (count[u] == 0) touched.push_back(u);
                    ++count[u];
                }
            split_by_counts(touched, count);
        };
        while (!worklist.empty()) {
            int c = worklist.front();
            worklist.pop_front();
            queued[c] = 0;
            std::vector<int> splitter = members[c];  // copy: members[c] may split
            scatter(splitter, g.und);
            scatter(splitter, g.in);   // out-degree into splitter
            scatter(splitter, g.out);  // in-degree from splitter
        }
    }
};

} // namespace

Coloring color_refinement(const ColoredGraph& g, const Coloring& initial) {
    if (static_cast<int>(initial.color.size()) != g.n)
        throw ContractError("initial coloring size mismatch");
    Refiner r(g, initial);
    r.run();
    // Canonical ids: renumber classes by their minimum vertex.
    std::vector<int> raw(g.n);
    std::vector<int> first_seen(r.members.size(), -1);
    int next = 0;
    for (int v = 0; v < g.n; ++v) {
        int c = r.cls[v];
        if (first_seen[c] < 0) first_seen[c] = next++;
        raw[v] = first_seen[c];
    }
    return Coloring::from_colors(std::move(raw));
}

bool is_equitable(const ColoredGraph& g, const Coloring& c) {
    if (static_cast<int>(c.color.size()) != g.n)
        throw ContractError("coloring size mismatch");
    // Signature of v: sorted (relation, class, count) triples.
    auto signature = [&](int v) {
        std::map<std::pair<int, int>, int> sig;
        for (int u : g.und[v]) ++sig[{0, c.color[u]}];
        for (int u : g.out[v]) ++sig[{1, c.color[u]}];
        for (int u : g.in[v]) ++sig[{2, c.color[u]}];
        return sig;
    };
    std::vector<std::map<std::pair<int, int>, int>> rep(c.num_classes);
    std::vector<char> have(c.num_classes, 0);
    for (int v = 0; v < g.n; ++v) {
        auto sig = signature(v);
        int cc = c.color[v];
        if (!have[cc]) {
            rep[cc] = std::move(sig);
            have[cc] = 1;
        } else if (rep[cc] != sig) {
            return false;
        }
    }
    return true;
}

Partition connected_components(const ColoredGraph& g) {
    std::vector<int> comp(g.n, -1);
    int next = 0;
    std::vector<int> stack;
    for (int s = 0; s < g.n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            auto visit = [&](int u) {
                if (comp[u] < 0) {
                    comp[u] = next;
                    stack.push_back(u);
                }
            };
            for (int u : g.und[v]) visit(u);
            for (int u : g.out[v]) visit(u);
            for (int u : g.in[v]) visit(u);
        }
        ++next;
    }
    return Partition::from_class_of(std::move(comp));
}

InducedSubgraph induced_subgraph(const ColoredGraph& g, const std::vector<int>& keep) {
    InducedSubgraph res;
    res.to_old = keep;
    std::sort(res.to_old.begin(), res.to_old.end());
    res.to_old.erase(std::unique(res.to_old.begin(), res.to_old.end()), res.to_old.end());
    for (int v : res.to_old)
        if (v < 0 || v >= g.n) throw ContractError("induced_subgraph: vertex out of range");
    res.to_new.assign(g.n, -1);
    for (int i = 0; i < static_cast<int>(res.to_old.size()); ++i) res.to_new[res.to_old[i]] = i;

    ColoredGraph sub(static_cast<int>(res.to_old.size()));
    std::vector<int> colors(res.to_old.size());
    for (int i = 0; i < sub.n; ++i) colors[i] = g.color[res.to_old[i]];
    Coloring cc = Coloring::from_colors(colors);
    sub.set_colors(cc.color, cc.num_classes);
    for (int i = 0; i < sub.n; ++i) {
        int v = res.to_old[i];
        for (int u : g.und[v])
            if (res.to_new[u] > i) sub.add_undirected_edge(i, res.to_new[u]);
        for (int u : g.out[v])
            if (res.to_new[u] >= 0) sub.add_directed_edge(i, res.to_new[u]);
    }
    sub.seal();
    res.graph = std::move(sub);
    return res;
}

bool is_automorphism(const ColoredGraph& g, const Permutation& p) {
    if (p.degree() != g.n)
        throw ContractError("is_automorphism: degree mismatch");
    for (auto& [v, w] : p.moved())
        if (g.color[v] != g.color[w]) return false;
    // A bijection mapping every edge to an edge maps edges onto edges, so
    // non-edges are preserved automatically.
    for (int v = 0; v < g.n; ++v) {
        int pv = p.apply(v);
        for (int u : g.und[v])
            if (u > v && !g.has_undirected_edge(pv, p.apply(u))) return false;
        for (int u : g.out[v])
            if (!g.has_directed_edge(pv, p.apply(u))) return false;
    }
    return true;
}

std::string to_dot(const ColoredGraph& g) {
    std::ostringstream os;
    os << "digraph G {\n";
    for (int v = 0; v < g.n; ++v)
        os << "  v" << v << " [label=\"" << v << ":" << g.color[v] << "\"];\n";
    for (int v = 0; v < g.n; ++v) {
        for (int u : g.und[v])
            if (u > v) os << "  v" << v << " -> v" << u << " [dir=none];\n";
        for (int u : g.out[v]) os << "  v" << v << " -> v" << u << ";\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace symscope
