#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace symscope {

// Sparse permutation on {0, ..., degree-1}. Only non-fixed points are stored,
// as (point, image) pairs sorted by point. The stored map is a bijection on its
// key set and never maps a key to itself.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(int degree) : degree_(degree) {}

    // Validates bijectivity, sparsity and range of `moved`.
    static Permutation from_moved(int degree, std::vector<std::pair<int, int>> moved);
    // Dense image vector; fixed points are dropped.
    static Permutation from_images(const std::vector<int>& images);

    int degree() const { return degree_; }
    int apply(int x) const;
    int operator()(int x) const { return apply(x); }
    bool is_identity() const { return moved_.empty(); }

    const std::vector<std::pair<int, int>>& moved() const { return moved_; }
    std::vector<int> support() const;
    std::size_t support_size() const { return moved_.size(); }

    // Cycle decomposition; each cycle starts at its minimum point, cycles
    // sorted by minimum point. Fixed points are omitted.
    std::vector<std::vector<int>> cycles() const;

    bool operator==(const Permutation&) const = default;

private:
    int degree_ = 0;
    std::vector<std::pair<int, int>> moved_;
};

enum class Parity { Even, Odd };

// compose(p, q) applies p first: x -> q(p(x)).
Permutation compose(const Permutation& p, const Permutation& q);
Permutation inverse(const Permutation& p);
Parity parity(const Permutation& p);

// Restriction of p to `points` (must be closed under p), re-indexed so the
// sorted point set maps to 0..|points|-1.
Permutation restrict_to(const Permutation& p, const std::vector<int>& points);

// Parses "(a,b,c)(d,e)" with 1-based labels. Whitespace between tokens is
// allowed; fixed points may be omitted or written as 1-cycles.
Permutation parse_cycles(std::string_view text, int degree);

// Generic cycle parser: labels are integers handed to `label_to_point`, which
// returns the 0-based point (and may throw ParseError for bad labels).
// `allow_negative` admits '-'-prefixed labels (signed DIMACS literals).
Permutation parse_cycles_mapped(std::string_view text, int degree, bool allow_negative,
                                const std::function<int(long long, std::size_t)>& label_to_point);

// Canonical cycle text: each cycle starts at its minimum element, cycles
// sorted by minimum, 1-based labels, no whitespace. Identity formats as "".
std::string format_cycles(const Permutation& p);
std::string format_cycles_mapped(const Permutation& p,
                                 const std::function<std::string(int)>& point_to_label);

// Ordered list of permutations on a shared domain.
struct GeneratingSet {
    int degree = 0;
    std::vector<Permutation> gens;

    GeneratingSet() = default;
    GeneratingSet(int degree, std::vector<Permutation> gens);

    // enc(S): total support size over all generators.
    std::size_t encoding_size() const;
};

// Union of generator supports, sorted.
std::vector<int> support_of_set(const GeneratingSet& s);

// Partition of {0..degree-1} with canonical class ids: classes are numbered
// 0..k-1 by their minimum element in ascending order; member lists sorted.
struct Partition {
    int degree = 0;
    std::vector<int> class_of;
    std::vector<std::vector<int>> classes;

    static Partition from_class_of(std::vector<int> raw_class_of);
    static Partition singletons(int degree);

    std::size_t num_classes() const { return classes.size(); }
    bool operator==(const Partition&) const = default;
};

using OrbitPartition = Partition;

// Orbit partition of <S> via union-find, O(enc(S) * alpha).
OrbitPartition orbits(const GeneratingSet& s);

// Breadth-first closure of <S>. Throws BoundError past max_elements.
std::vector<Permutation> enumerate_group(const GeneratingSet& s, std::size_t max_elements);

} // namespace symscope
