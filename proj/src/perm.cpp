#include "symscope/perm.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "symscope/errors.hpp"

namespace symscope {

Permutation Permutation::from_moved(int degree, std::vector<std::pair<int, int>> moved) {
    std::sort(moved.begin(), moved.end());
    std::vector<int> keys, images;
    keys.reserve(moved.size());
    images.reserve(moved.size());
    for (auto [k, v] : moved) {
        if (k < 0 || k >= degree || v < 0 || v >= degree)
            throw ContractError("permutation entry out of domain");
        if (k == v)
            throw ContractError("sparse permutation maps a point to itself");
        keys.push_back(k);
        images.push_back(v);
    }
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
        throw ContractError("duplicate point in permutation");
    std::sort(images.begin(), images.end());
    if (images != keys)
        throw ContractError("permutation image set differs from key set");
    Permutation p(degree);
    p.moved_ = std::move(moved);
    return p;
}

Permutation Permutation::from_images(const std::vector<int>& images) {
    std::vector<std::pair<int, int>> moved;
    for (int x = 0; x < static_cast<int>(images.size()); ++x)
        if (images[x] != x) moved.emplace_back(x, images[x]);
    return from_moved(static_cast<int>(images.size()), std::move(moved));
}

int Permutation::apply(int x) const {
    auto it = std::lower_bound(moved_.begin(), moved_.end(), std::pair<int, int>{x, -1});
    if (it != moved_.end() && it->first == x) return it->second;
    return x;
}

std::vector<int> Permutation::support() const {
    std::vector<int> s;
    s.reserve(moved_.size());
    for (auto& [k, v] : moved_) s.push_back(k);
    return s;
}

std::vector<std::vector<int>> Permutation::cycles() const {
    std::vector<std::vector<int>> out;
    std::set<int> seen;
    for (auto& [start, img] : moved_) {
        if (seen.count(start)) continue;
        std::vector<int> cyc;
        int x = start;
        do {
            cyc.push_back(x);
            seen.insert(x);
            x = apply(x);
        } while (x != start);
        out.push_back(std::move(cyc));
    }
    // moved_ is sorted, so each cycle starts at its min and cycles are ordered.
    return out;
}

Permutation compose(const Permutation& p, const Permutation& q) {
    if (p.degree() != q.degree())
        throw ContractError("compose: degree mismatch");
    std::vector<std::pair<int, int>> moved;
    std::vector<int> pts;
    pts.reserve(p.moved().size() + q.moved().size());
    for (auto& [k, v] : p.moved()) pts.push_back(k);
    for (auto& [k, v] : q.moved()) pts.push_back(k);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (int x : pts) {
        int y = q.apply(p.apply(x));
        if (y != x) moved.emplace_back(x, y);
    }
    return Permutation::from_moved(p.degree(), std::move(moved));
}

Permutation inverse(const Permutation& p) {
    std::vector<std::pair<int, int>> moved;
    moved.reserve(p.moved().size());
    for (auto& [k, v] : p.moved()) moved.emplace_back(v, k);
    return Permutation::from_moved(p.degree(), std::move(moved));
}

Parity parity(const Permutation& p) {
    int even_len_cycles = 0;
    for (auto& c : p.cycles())
        if (c.size() % 2 == 0) ++even_len_cycles;
    return (even_len_cycles % 2 == 1) ? Parity::Odd : Parity::Even;
}

Permutation restrict_to(const Permutation& p, const std::vector<int>& points) {
    std::vector<int> pts = points;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    auto index_of = [&](int x) {
        auto it = std::lower_bound(pts.begin(), pts.end(), x);
        return (it != pts.end() && *it == x) ? static_cast<int>(it - pts.begin()) : -1;
    };
    std::vector<std::pair<int, int>> moved;
    for (auto& [k, v] : p.moved()) {
        int ki = index_of(k);
        if (ki < 0) continue;
        int vi = index_of(v);
        if (vi < 0)
            throw ContractError("restrict: point set not closed under permutation");
        moved.emplace_back(ki, vi);
    }
    return Permutation::from_moved(static_cast<int>(pts.size()), std::move(moved));
}

Permutation parse_cycles_mapped(std::string_view text, int degree, bool allow_negative,
                                const std::function<int(long long, std::size_t)>& label_to_point) {
    std::vector<std::vector<int>> cycles;
    std::set<int> used;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    while (i < text.size()) {
        if (text[i] != '(')
            throw ParseError("expected '('", i);
        ++i;
        std::vector<int> cyc;
        bool expect_label = true;
        while (true) {
            skip_ws();
            if (i >= text.size())
                throw ParseError("unterminated cycle", i);
            if (text[i] == ')') {
                if (expect_label)
                    throw ParseError("empty cycle or trailing comma", i);
                ++i;
                break;
            }
            if (!expect_label) {
                if (text[i] != ',')
                    throw ParseError("expected ',' or ')'", i);
                ++i;
                skip_ws();
            }
            std::size_t label_pos = i;
            bool neg = false;
            if (i < text.size() && text[i] == '-') {
                if (!allow_negative)
                    throw ParseError("negative label not allowed here", i);
                neg = true;
                ++i;
            }
            if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
                throw ParseError("expected point label", i);
            long long val = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                val = val * 10 + (text[i] - '0');
                if (val > (1LL << 40))
                    throw ParseError("label too large", label_pos);
                ++i;
            }
            if (neg) val = -val;
            int point = label_to_point(val, label_pos);
            if (used.count(point))
                throw ParseError("duplicate point in cycles", label_pos);
            used.insert(point);
            cyc.push_back(point);
            expect_label = false;
        }
        cycles.push_back(std::move(cyc));
        skip_ws();
    }
    std::vector<std::pair<int, int>> moved;
    for (auto& cyc : cycles) {
        if (cyc.size() < 2) continue;
        for (std::size_t k = 0; k < cyc.size(); ++k)
            moved.emplace_back(cyc[k], cyc[(k + 1) % cyc.size()]);
    }
    return Permutation::from_moved(degree, std::move(moved));
}

Permutation parse_cycles(std::string_view text, int degree) {
    return parse_cycles_mapped(text, degree, false, [degree](long long label, std::size_t pos) {
        if (label < 1 || label > degree)
            throw ParseError("point label out of range 1.." + std::to_string(degree), pos);
        return static_cast<int>(label - 1);
    });
}

std::string format_cycles_mapped(const Permutation& p,
                                 const std::function<std::string(int)>& point_to_label) {
    std::ostringstream out;
    for (auto& cyc : p.cycles()) {
        out << '(';
        for (std::size_t k = 0; k < cyc.size(); ++k) {
            if (k) out << ',';
            out << point_to_label(cyc[k]);
        }
        out << ')';
    }
    return out.str();
}

std::string format_cycles(const Permutation& p) {
    return format_cycles_mapped(p, [](int x) { return std::to_string(x + 1); });
}

GeneratingSet::GeneratingSet(int degree_, std::vector<Permutation> gens_)
    : degree(degree_), gens(std::move(gens_)) {
    for (auto& g : gens)
        if (g.degree() != degree)
            throw ContractError("generating set: degree mismatch");
}

std::size_t GeneratingSet::encoding_size() const {
    std::size_t n = 0;
    for (auto& g : gens) n += g.support_size();
    return n;
}

std::vector<int> support_of_set(const GeneratingSet& s) {
    std::vector<int> pts;
    for (auto& g : s.gens)
        for (auto& [k, v] : g.moved()) pts.push_back(k);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

namespace {

// Union-find with path halving and union by size.
struct DisjointSet {
    std::vector<int> parent, size;
    explicit DisjointSet(int n) : parent(n), size(n, 1) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
    }
};

} // namespace

Partition Partition::from_class_of(std::vector<int> raw) {
    Partition p;
    p.degree = static_cast<int>(raw.size());
    p.class_of.assign(raw.size(), -1);
    std::map<int, int> renumber;
    for (int v = 0; v < p.degree; ++v) {
        auto [it, fresh] = renumber.try_emplace(raw[v], static_cast<int>(renumber.size()));
        p.class_of[v] = it->second;
        if (fresh) p.classes.emplace_back();
        p.classes[it->second].push_back(v);
    }
    return p;
}

Partition Partition::singletons(int degree) {
    std::vector<int> raw(degree);
    std::iota(raw.begin(), raw.end(), 0);
    return from_class_of(std::move(raw));
}

OrbitPartition orbits(const GeneratingSet& s) {
    DisjointSet ds(s.degree);
    for (auto& g : s.gens)
        for (auto& [x, y] : g.moved()) ds.unite(x, y);
    std::vector<int> raw(s.degree);
    for (int v = 0; v < s.degree; ++v) raw[v] = ds.find(v);
    return Partition::from_class_of(std::move(raw));
}

std::vector<Permutation> enumerate_group(const GeneratingSet& s, std::size_t max_elements) {
    std::set<std::vector<int>> seen;
    std::vector<Permutation> elems;
    std::vector<int> id(s.degree);
    std::iota(id.begin(), id.end(), 0);
    seen.insert(id);
    elems.push_back(Permutation(s.degree));
    std::size_t head = 0;
    while (head < elems.size()) {
        Permutation cur = elems[head++];
        for (auto& g : s.gens) {
            Permutation nxt = compose(cur, g);
            std::vector<int> img(s.degree);
            for (int x = 0; x < s.degree; ++x) img[x] = nxt.apply(x);
            if (seen.insert(std::move(img)).second) {
                if (elems.size() >= max_elements)
                    throw BoundError("group closure exceeds " + std::to_string(max_elements) +
                                     " elements");
                elems.push_back(std::move(nxt));
            }
        }
    }
    return elems;
}

} // namespace symscope
