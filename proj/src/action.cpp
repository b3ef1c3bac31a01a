#include "symscope/action.hpp"

#include <algorithm>
#include <cmath>

#include "symscope/errors.hpp"

namespace symscope {

namespace {

constexpr int kSlotsMin = 10;
constexpr int kBurnIn = 50;
constexpr int kExactClosureMax = 7;  // Fact-1 window is empty for n <= 7

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

long long factorial(int n) {
    long long r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

} // namespace

int giant_window_prime(int cycle_length, int orbit_size) {
    if (2 * cycle_length > orbit_size && cycle_length < orbit_size - 2 && is_prime(cycle_length))
        return cycle_length;
    return 0;
}

RandomElementSource::RandomElementSource(const GeneratingSet& s, std::uint64_t seed)
    : accumulator_(s.degree), seed_(seed), state_(seed ^ 0x9e3779b97f4a7c15ULL) {
    int r = std::max(kSlotsMin, 2 * static_cast<int>(s.gens.size()));
    if (s.gens.empty()) {
        slots_.assign(kSlotsMin, Permutation(s.degree));
    } else {
        slots_.reserve(r);
        for (int i = 0; i < r; ++i) slots_.push_back(s.gens[i % s.gens.size()]);
    }
    for (int i = 0; i < kBurnIn; ++i) mix();
}

std::uint64_t RandomElementSource::rand64() {
    // splitmix64: portable and deterministic across platforms.
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void RandomElementSource::mix() {
    std::size_t r = slots_.size();
    std::size_t i = rand64() % r;
    std::size_t j = rand64() % (r - 1);
    if (j >= i) ++j;
    const Permutation& other = slots_[j];
    switch (rand64() % 4) {
        case 0: slots_[i] = compose(slots_[i], other); break;
        case 1: slots_[i] = compose(slots_[i], inverse(other)); break;
        case 2: slots_[i] = compose(other, slots_[i]); break;
        default: slots_[i] = compose(inverse(other), slots_[i]); break;
    }
    accumulator_ = (rand64() % 2) ? compose(accumulator_, slots_[i])
                                  : compose(slots_[i], accumulator_);
}

const Permutation& RandomElementSource::next() {
    mix();
    return accumulator_;
}

namespace {

// Cycle lengths of p restricted to `orbit` (which must be p-closed).
std::vector<int> restricted_cycle_lengths(const Permutation& p, const std::vector<int>& orbit) {
    std::vector<int> lengths;
    std::vector<char> seen(orbit.size(), 0);
    auto index_of = [&](int x) {
        auto it = std::lower_bound(orbit.begin(), orbit.end(), x);
        return (it != orbit.end() && *it == x) ? static_cast<int>(it - orbit.begin()) : -1;
    };
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        int x = orbit[i];
        do {
            int idx = index_of(x);
            if (idx < 0)
                throw ContractError("orbit not closed under group element");
            if (seen[idx]) break;
            seen[idx] = 1;
            ++len;
            x = p.apply(x);
        } while (x != orbit[i]);
        if (len > 1) lengths.push_back(len);
    }
    return lengths;
}

bool restriction_is_even(const Permutation& g, const std::vector<int>& orbit) {
    int even_cycles = 0;
    for (int len : restricted_cycle_lengths(g, orbit))
        if (len % 2 == 0) ++even_cycles;
    return even_cycles % 2 == 0;
}

// Exact verdict for small orbits by closing the restricted generators.
ActionVerdict exact_small_orbit(const GeneratingSet& s, const std::vector<int>& orbit) {
    int n = static_cast<int>(orbit.size());
    std::vector<Permutation> restricted;
    for (auto& g : s.gens) restricted.push_back(restrict_to(g, orbit));
    GeneratingSet rs(n, std::move(restricted));
    auto elems = enumerate_group(rs, static_cast<std::size_t>(factorial(n)) + 1);
    return static_cast<long long>(elems.size()) == factorial(n) ? ActionVerdict::NaturalSymmetric
                                                                : ActionVerdict::NotSymmetric;
}

} // namespace

ActionReport symmetric_action_orbits(const GeneratingSet& s, const Partition& orbits, double c,
                                     RandomElementSource& source) {
    if (!(c > 2 * std::log(2.0)))
        throw ContractError("giant constant must exceed 2 ln 2");

    ActionReport report;
    report.giant_constant = c;
    report.orbits.resize(orbits.num_classes());

    std::vector<int> pending;  // orbit ids for the probabilistic phase
    for (int o = 0; o < static_cast<int>(orbits.num_classes()); ++o) {
        OrbitAction& act = report.orbits[o];
        act.orbit = o;
        const std::vector<int>& pts = orbits.classes[o];
        int n = static_cast<int>(pts.size());
        if (n == 1) {
            act.verdict = ActionVerdict::NaturalSymmetric;
            act.method = ActionMethod::TrivialOrbit;
        } else if (n <= kExactClosureMax) {
            act.verdict = exact_small_orbit(s, pts);
            act.method = ActionMethod::ExactClosure;
        } else {
            // Parity filter: all generator restrictions even -> inside Alt(n).
            bool all_even = true;
            for (auto& g : s.gens)
                if (!restriction_is_even(g, pts)) {
                    all_even = false;
                    break;
                }
            if (all_even) {
                act.verdict = ActionVerdict::NotSymmetric;
                act.method = ActionMethod::ParityFilter;
            } else {
                pending.push_back(o);
            }
        }
    }

    if (!pending.empty()) {
        double ln_n = std::log(std::max(s.degree, 2));
        int draws = std::max(1, static_cast<int>(std::ceil(c * ln_n * ln_n)));
        for (int t = 0; t < draws && !pending.empty(); ++t) {
            const Permutation& elem = source.next();
            ++report.draws_used;
            for (std::size_t idx = 0; idx < pending.size();) {
                int o = pending[idx];
                const std::vector<int>& pts = orbits.classes[o];
                int n = static_cast<int>(pts.size());
                auto lengths = restricted_cycle_lengths(elem, pts);
                int longest = lengths.empty() ? 0 : *std::max_element(lengths.begin(), lengths.end());
                if (int p = giant_window_prime(longest, n)) {
                    OrbitAction& act = report.orbits[o];
                    act.verdict = ActionVerdict::NaturalSymmetric;
                    act.method = ActionMethod::GiantWitness;
                    act.witness = elem;
                    act.witness_cycle_length = p;
                    pending[idx] = pending.back();
                    pending.pop_back();
                } else {
                    ++idx;
                }
            }
        }
    }
    return report;
}

std::optional<std::vector<int>> harvest_unique_cycle(const GeneratingSet& s,
                                                     const std::vector<int>& orbit,
                                                     RandomElementSource& source,
                                                     int random_tries) {
    std::vector<int> pts = orbit;
    std::sort(pts.begin(), pts.end());

    // In the restriction to the orbit, find a cycle whose length occurs exactly
    // once; prefer the longest such cycle.
    auto unique_cycle_of = [&](const Permutation& g) -> std::optional<std::vector<int>> {
        Permutation r = restrict_to(g, pts);
        std::vector<std::vector<int>> cycles = r.cycles();
        std::vector<int> count_by_len;
        for (auto& c : cycles) {
            if (count_by_len.size() <= c.size()) count_by_len.resize(c.size() + 1, 0);
            ++count_by_len[c.size()];
        }
        const std::vector<int>* best = nullptr;
        for (auto& c : cycles)
            if (count_by_len[c.size()] == 1 && (!best || c.size() > best->size())) best = &c;
        if (!best) return std::nullopt;
        // back to original domain points, starting at the minimum point
        std::vector<int> cycle;
        cycle.reserve(best->size());
        for (int idx : *best) cycle.push_back(pts[idx]);
        auto min_it = std::min_element(cycle.begin(), cycle.end());
        std::rotate(cycle.begin(), min_it, cycle.end());
        return cycle;
    };

    for (auto& g : s.gens)
        if (auto c = unique_cycle_of(g)) return c;
    for (int t = 0; t < random_tries; ++t)
        if (auto c = unique_cycle_of(source.next())) return c;
    return std::nullopt;
}

bool validate_action_report(const GeneratingSet& s, const Partition& orbits,
                            const ActionReport& report) {
    if (report.orbits.size() != orbits.num_classes()) return false;
    for (auto& act : report.orbits) {
        const std::vector<int>& pts = orbits.classes[act.orbit];
        int n = static_cast<int>(pts.size());
        switch (act.method) {
            case ActionMethod::TrivialOrbit:
                if (n != 1 || act.verdict != ActionVerdict::NaturalSymmetric) return false;
                break;
            case ActionMethod::ExactClosure: {
                if (n < 2 || n > kExactClosureMax) return false;
                if (exact_small_orbit(s, pts) != act.verdict) return false;
                break;
            }
            case ActionMethod::ParityFilter: {
                if (act.verdict != ActionVerdict::NotSymmetric) return false;
                for (auto& g : s.gens)
                    if (!restriction_is_even(g, pts)) return false;
                break;
            }
            case ActionMethod::GiantWitness: {
                if (act.verdict != ActionVerdict::NaturalSymmetric) return false;
                if (!act.witness) return false;
                auto lengths = restricted_cycle_lengths(*act.witness, pts);
                bool found = false;
                for (int len : lengths)
                    if (len == act.witness_cycle_length && giant_window_prime(len, n)) found = true;
                if (!found) return false;
                break;
            }
            case ActionMethod::None:
                if (act.verdict != ActionVerdict::Undetermined) return false;
                break;
        }
    }
    return true;
}

} // namespace symscope
