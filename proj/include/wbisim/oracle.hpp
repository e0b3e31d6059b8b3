#pragma once

// Brute-force reference semantics: admissible path sets, their
// weights, cone checks, exhaustive coarsest partitions and the double-arrow
// construction for plain LTSs.
//
// Nothing here calls into the solver or the refinement engine; these
// functions are the independent side of every cross-check.

#include "wbisim/semiring.hpp"
#include "wbisim/wlts.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wbisim::oracle {

// state_0 -l1-> state_1 ... -ln-> state_n
struct FinitePath {
    StateId start = 0;
    std::vector<std::pair<Label, StateId>> steps;

    std::size_t length() const { return steps.size(); }
    StateId last() const { return steps.empty() ? start : steps.back().second; }
    std::vector<Label> trace() const {
        std::vector<Label> t;
        for (const auto& st : steps) t.push_back(st.first);
        return t;
    }
    // Non-strict prefix order.
    bool is_prefix_of(const FinitePath& other) const {
        return start == other.start && steps.size() <= other.steps.size() &&
               std::equal(steps.begin(), steps.end(), other.steps.begin());
    }
    FinitePath extended(Label l, StateId to) const {
        FinitePath p = *this;
        p.steps.emplace_back(l, to);
        return p;
    }

    auto operator<=>(const FinitePath&) const = default;
    bool operator==(const FinitePath&) const = default;
};

template <Semiring S>
value_t<S> path_weight(const Wlts<S>& w, const FinitePath& p) {
    value_t<S> acc = w.semiring().one();
    StateId at = p.start;
    for (const auto& [l, to] : p.steps) {
        acc = w.semiring().mul(acc, w.weight(at, l, to));
        at = to;
    }
    return acc;
}

// The regular trace sets tau*, tau* a tau* and tau* a, as two-phase automata.
class TraceSelector {
public:
    enum class Kind { TauStar, TauStarActTauStar, TauStarAct };

    static TraceSelector tau_star() { return TraceSelector(Kind::TauStar, Label::tau()); }
    static TraceSelector weak(Label a) { return TraceSelector(Kind::TauStarActTauStar, a); }
    static TraceSelector delay(Label a) { return TraceSelector(Kind::TauStarAct, a); }

    Kind kind() const { return kind_; }
    Label action() const { return action_; }

    static constexpr int initial = 0;

    bool accepting(int phase) const { return kind_ == Kind::TauStar ? phase == 0 : phase == 1; }

    // Next phase, or nullopt when no extension can be in the set.
    std::optional<int> step(int phase, Label l) const {
        switch (kind_) {
            case Kind::TauStar:
                if (l.is_tau()) return 0;
                return std::nullopt;
            case Kind::TauStarActTauStar:
                if (l.is_tau()) return phase;
                if (phase == 0 && l == action_) return 1;
                return std::nullopt;
            case Kind::TauStarAct:
                if (phase == 0 && l.is_tau()) return 0;
                if (phase == 0 && l == action_) return 1;
                return std::nullopt;
        }
        return std::nullopt;
    }

    bool matches(std::span<const Label> trace) const {
        int phase = initial;
        for (Label l : trace) {
            auto next = step(phase, l);
            if (!next) return false;
            phase = *next;
        }
        return accepting(phase);
    }

private:
    TraceSelector(Kind k, Label a) : kind_(k), action_(a) {}
    Kind kind_;
    Label action_;
};

// Paths from x ending in C, trace in T, length <= max_len, such that no
// proper prefix already has its trace in T and ends in C.
template <Semiring S>
std::vector<FinitePath> enumerate_admissible(const Wlts<S>& w, StateId x, const TraceSelector& t,
                                             std::span<const char> in_class, std::size_t max_len) {
    std::vector<FinitePath> out;
    struct Frame {
        FinitePath path;
        int phase;
    };
    std::vector<Frame> stack{{FinitePath{x, {}}, TraceSelector::initial}};
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (t.accepting(f.phase) && in_class[f.path.last()]) {
            out.push_back(std::move(f.path));
            continue;
        }
        if (f.path.length() >= max_len) continue;
        for (Label l : w.labels()) {
            auto next = t.step(f.phase, l);
            if (!next) continue;
            for (const auto& e : w.successors(f.path.last(), l)) stack.push_back({f.path.extended(l, e.target), *next});
        }
    }
    std::ranges::sort(out);
    return out;
}

template <Semiring S>
std::vector<FinitePath> enumerate_admissible(const Wlts<S>& w, StateId x, const TraceSelector& t,
                                             std::span<const StateId> cls, std::size_t max_len) {
    return enumerate_admissible(w, x, t, block_mask(w.state_count(), cls), max_len);
}

namespace detail {

// Product nodes (state, phase) from which an admissible path can still be
// completed. Target nodes (accepting, in C) never extend.
template <Semiring S>
std::vector<std::array<char, 2>> productive_nodes(const Wlts<S>& w, const TraceSelector& t,
                                                  std::span<const char> in_class) {
    const std::size_t n = w.state_count();
    std::vector<std::array<char, 2>> prod(n, {0, 0});
    for (StateId y = 0; y < n; ++y)
        for (int ph = 0; ph < 2; ++ph)
            if (t.accepting(ph) && in_class[y]) prod[y][static_cast<std::size_t>(ph)] = 1;
    for (bool changed = true; changed;) {
        changed = false;
        for (StateId y = 0; y < n; ++y)
            for (int ph = 0; ph < 2; ++ph) {
                auto& cell = prod[y][static_cast<std::size_t>(ph)];
                if (cell || (t.accepting(ph) && in_class[y])) continue;
                for (Label l : w.labels()) {
                    auto next = t.step(ph, l);
                    if (!next) continue;
                    for (const auto& e : w.successors(y, l))
                        if (prod[e.target][static_cast<std::size_t>(*next)]) {
                            cell = 1;
                            changed = true;
                            break;
                        }
                    if (cell) break;
                }
            }
    }
    return prod;
}

}  // namespace detail

template <Semiring S>
struct BruteWeight {
    value_t<S> value;
    bool truncated = false;  // some admissible path is longer than max_len
};

// Sum of the weights of the admissible set. For the boolean instance the
// value is decided by bounded breadth-first search on (state, phase) pairs,
// which terminates on cyclic systems.
template <Semiring S>
BruteWeight<S> brute_weight(const Wlts<S>& w, StateId x, const TraceSelector& t, std::span<const char> in_class,
                            std::size_t max_len) {
    const S& s = w.semiring();
    const auto productive = detail::productive_nodes(w, t, in_class);
    if constexpr (std::is_same_v<S, BooleanSemiring>) {
        // shortest admissible path length via BFS over product nodes
        const std::size_t n = w.state_count();
        std::vector<std::array<std::size_t, 2>> dist(n, {SIZE_MAX, SIZE_MAX});
        std::deque<std::pair<StateId, int>> queue{{x, TraceSelector::initial}};
        dist[x][0] = 0;
        std::optional<std::size_t> shortest;
        while (!queue.empty() && !shortest) {
            auto [y, ph] = queue.front();
            queue.pop_front();
            const std::size_t d = dist[y][static_cast<std::size_t>(ph)];
            if (t.accepting(ph) && in_class[y]) {
                shortest = d;
                break;
            }
            for (Label l : w.labels()) {
                auto next = t.step(ph, l);
                if (!next) continue;
                for (const auto& e : w.successors(y, l)) {
                    auto& dd = dist[e.target][static_cast<std::size_t>(*next)];
                    if (dd == SIZE_MAX) {
                        dd = d + 1;
                        queue.emplace_back(e.target, *next);
                    }
                }
            }
        }
        const bool found = shortest && *shortest <= max_len;
        return {found, !found && productive[x][0]};
    } else {
        const auto paths = enumerate_admissible(w, x, t, in_class, max_len);
        value_t<S> total = s.zero();
        for (const auto& p : paths) total = s.add(total, path_weight(w, p));
        // Truncated iff a live frontier path of length max_len can still be
        // completed into an admissible path.
        bool truncated = false;
        struct Frame {
            StateId at;
            int phase;
            std::size_t len;
        };
        std::vector<Frame> stack{{x, TraceSelector::initial, 0}};
        while (!stack.empty() && !truncated) {
            Frame f = stack.back();
            stack.pop_back();
            if (t.accepting(f.phase) && in_class[f.at]) continue;
            if (!productive[f.at][static_cast<std::size_t>(f.phase)]) continue;
            if (f.len >= max_len) {
                truncated = true;
                break;
            }
            for (Label l : w.labels()) {
                auto next = t.step(f.phase, l);
                if (!next) continue;
                for (const auto& e : w.successors(f.at, l)) stack.push_back({e.target, *next, f.len + 1});
            }
        }
        return {total, truncated};
    }
}

template <Semiring S>
BruteWeight<S> brute_weight(const Wlts<S>& w, StateId x, const TraceSelector& t, std::span<const StateId> cls,
                            std::size_t max_len) {
    return brute_weight(w, x, t, block_mask(w.state_count(), cls), max_len);
}

// Prefix-minimal subset: drops every path that has a proper prefix in the
// input (and duplicates). Output is sorted.
inline std::vector<FinitePath> minimal_support(std::vector<FinitePath> paths) {
    std::ranges::sort(paths);
    paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
    std::vector<FinitePath> out;
    for (const auto& p : paths) {
        bool dominated = std::ranges::any_of(paths, [&](const FinitePath& q) {
            return q.length() < p.length() && q.is_prefix_of(p);
        });
        if (!dominated) out.push_back(p);
    }
    return out;
}

// All paths from x to C with trace in T, admissible or not, up to max_len.
template <Semiring S>
std::vector<FinitePath> enumerate_reaching(const Wlts<S>& w, StateId x, const TraceSelector& t,
                                           std::span<const char> in_class, std::size_t max_len) {
    std::vector<FinitePath> out;
    std::vector<std::pair<FinitePath, int>> stack{{FinitePath{x, {}}, TraceSelector::initial}};
    while (!stack.empty()) {
        auto [p, ph] = std::move(stack.back());
        stack.pop_back();
        if (t.accepting(ph) && in_class[p.last()]) out.push_back(p);
        if (p.length() >= max_len) continue;
        for (Label l : w.labels()) {
            auto next = t.step(ph, l);
            if (!next) continue;
            for (const auto& e : w.successors(p.last(), l)) stack.emplace_back(p.extended(l, e.target), *next);
        }
    }
    std::ranges::sort(out);
    return out;
}

// Checks on finite truncations that the cones of two paths are nested or
// disjoint: the extension sets of both paths up to a common horizon are
// compared directly.
template <Semiring S>
bool cones_nested_or_disjoint(const Wlts<S>& w, const FinitePath& a, const FinitePath& b, std::size_t probe_len) {
    if (a.start != b.start) throw std::invalid_argument("cones_nested_or_disjoint: paths start in different states");
    const std::size_t horizon = std::max(a.length(), b.length()) + probe_len;
    auto extensions = [&](const FinitePath& p) {
        std::set<FinitePath> out;
        std::vector<FinitePath> stack{p};
        while (!stack.empty()) {
            FinitePath q = std::move(stack.back());
            stack.pop_back();
            bool extended = false;
            if (q.length() < horizon)
                for (Label l : w.labels())
                    for (const auto& e : w.successors(q.last(), l)) {
                        stack.push_back(q.extended(l, e.target));
                        extended = true;
                    }
            if (!extended) out.insert(std::move(q));
        }
        return out;
    };
    const auto ea = extensions(a), eb = extensions(b);
    auto subset = [](const std::set<FinitePath>& x, const std::set<FinitePath>& y) {
        return std::ranges::includes(y, x);
    };
    bool disjoint = std::ranges::none_of(ea, [&](const FinitePath& p) { return eb.contains(p); });
    return subset(ea, eb) || subset(eb, ea) || disjoint;
}

// ---------------------------------------------------------------------------
// Exhaustive coarsest partition

enum class Mode { Strong, Weak, Delay };

class OracleTruncated : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t max_enumeration_states = 8;

namespace detail {

// Set partitions of {0..n-1} with exactly k blocks, as restricted growth strings.
inline void partitions_with_blocks(std::size_t n, std::size_t k, std::vector<std::size_t>& rg, std::size_t used,
                                   const std::function<bool(const std::vector<std::size_t>&)>& visit, bool& stop) {
    if (stop) return;
    const std::size_t i = rg.size();
    if (i == n) {
        if (used == k) stop = visit(rg);
        return;
    }
    if (used + (n - i) < k) return;
    for (std::size_t b = 0; b <= used && b < k && !stop; ++b) {
        rg.push_back(b);
        partitions_with_blocks(n, k, rg, std::max(used, b + 1), visit, stop);
        rg.pop_back();
    }
}

}  // namespace detail

// Coarsest partition satisfying the mode's definition, by enumerating set
// partitions in order of increasing block count. Weights come from direct
// class sums (strong) or brute_weight (weak/delay), memoized per class.
template <Semiring S>
Partition brute_coarsest_partition(const Wlts<S>& w, Mode mode, std::optional<std::size_t> max_len = {}) {
    const std::size_t n = w.state_count();
    if (n > max_enumeration_states)
        throw std::invalid_argument("brute_coarsest_partition: at most " + std::to_string(max_enumeration_states) +
                                    " states");
    if (n == 0) return Partition::from_blocks(0, {});
    const std::size_t horizon = max_len.value_or(n * (n + 1));
    const S& s = w.semiring();

    std::map<std::pair<unsigned, std::size_t>, std::vector<value_t<S>>> cache;
    auto weights = [&](unsigned mask_bits, Label l) -> const std::vector<value_t<S>>& {
        auto key = std::make_pair(mask_bits, l.code());
        if (auto it = cache.find(key); it != cache.end()) return it->second;
        std::vector<char> mask(n);
        for (std::size_t i = 0; i < n; ++i) mask[i] = (mask_bits >> i) & 1u;
        std::vector<value_t<S>> ws;
        for (StateId x = 0; x < n; ++x) {
            if (mode == Mode::Strong) {
                value_t<S> acc = s.zero();
                for (StateId y = 0; y < n; ++y)
                    if (mask[y]) acc = s.add(acc, w.weight(x, l, y));
                ws.push_back(acc);
                continue;
            }
            const TraceSelector t = l.is_tau()            ? TraceSelector::tau_star()
                                    : mode == Mode::Weak ? TraceSelector::weak(l)
                                                         : TraceSelector::delay(l);
            auto bw = brute_weight(w, x, t, std::span<const char>(mask), horizon);
            if (bw.truncated)
                throw OracleTruncated("brute_weight truncated at length " + std::to_string(horizon) + " from state " +
                                      w.state_name(x));
            ws.push_back(bw.value);
        }
        return cache.emplace(key, std::move(ws)).first->second;
    };

    auto satisfies = [&](const std::vector<std::size_t>& rg) {
        const std::size_t k = *std::ranges::max_element(rg) + 1;
        std::vector<unsigned> masks(k, 0);
        for (std::size_t i = 0; i < n; ++i) masks[rg[i]] |= 1u << i;
        for (unsigned cls : masks)
            for (Label l : w.labels()) {
                const auto& ws = weights(cls, l);
                for (unsigned blk : masks) {
                    std::optional<StateId> rep;
                    for (std::size_t i = 0; i < n; ++i) {
                        if (!((blk >> i) & 1u)) continue;
                        if (!rep)
                            rep = i;
                        else if (!s.equal(ws[*rep], ws[i]))
                            return false;
                    }
                }
            }
        return true;
    };

    std::optional<std::vector<std::size_t>> found;
    for (std::size_t k = 1; k <= n && !found; ++k) {
        std::vector<std::size_t> rg;
        bool stop = false;
        detail::partitions_with_blocks(
            n, k, rg, 0,
            [&](const std::vector<std::size_t>& cand) {
                if (!satisfies(cand)) return false;
                found = cand;
                return true;
            },
            stop);
    }
    // the discrete partition always satisfies the conditions
    return Partition::from_labels(std::span<const std::size_t>(*found));
}

// ---------------------------------------------------------------------------
// Double-arrow construction for plain LTSs

// Saturated relation: x =tau=> y iff y is tau*-reachable from x;
// x =a=> y iff x tau* a tau* y. Built by explicit reachability.
inline Wlts<BooleanSemiring> double_arrow_system(const Wlts<BooleanSemiring>& w) {
    const std::size_t n = w.state_count();
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (StateId x = 0; x < n; ++x) {
        std::vector<StateId> stack{x};
        reach[x][x] = 1;
        while (!stack.empty()) {
            StateId y = stack.back();
            stack.pop_back();
            for (const auto& e : w.successors(y, Label::tau()))
                if (!reach[x][e.target]) {
                    reach[x][e.target] = 1;
                    stack.push_back(e.target);
                }
        }
    }
    WltsBuilder<BooleanSemiring> b(BooleanSemiring{}, w.tau_name());
    for (const auto& a : w.actions()) b.add_action(a);
    for (const auto& name : w.state_names()) b.add_state(name);
    for (StateId x = 0; x < n; ++x)
        for (StateId y = 0; y < n; ++y) {
            if (reach[x][y]) b.add_transition(x, Label::tau(), y, true);
            for (std::size_t a = 0; a < w.action_count(); ++a) {
                bool hit = false;
                for (StateId u = 0; u < n && !hit; ++u) {
                    if (!reach[x][u]) continue;
                    for (const auto& e : w.successors(u, Label::action(a)))
                        if (reach[e.target][y]) {
                            hit = true;
                            break;
                        }
                }
                if (hit) b.add_transition(x, Label::action(a), y, true);
            }
        }
    return b.build();
}

// Strong bisimilarity of a plain LTS by naive signature iteration.
inline Partition naive_strong_lts_partition(const Wlts<BooleanSemiring>& w) {
    const std::size_t n = w.state_count();
    std::vector<std::size_t> block(n, 0);
    for (;;) {
        std::vector<std::pair<std::size_t, std::set<std::pair<std::size_t, std::size_t>>>> sig(n);
        for (StateId x = 0; x < n; ++x) {
            sig[x].first = block[x];
            for (Label l : w.labels())
                for (const auto& e : w.successors(x, l)) sig[x].second.emplace(l.code(), block[e.target]);
        }
        std::map<decltype(sig)::value_type, std::size_t> ids;
        std::vector<std::size_t> next(n);
        for (StateId x = 0; x < n; ++x) next[x] = ids.emplace(sig[x], ids.size()).first->second;
        const bool stable = ids.size() == std::set<std::size_t>(block.begin(), block.end()).size();
        block = std::move(next);
        if (stable) break;
    }
    return Partition::from_labels(std::span<const std::size_t>(block));
}

// Weak bisimilarity of a plain LTS as strong bisimilarity of its
// double-arrow system.
template <Semiring S>
Partition milner_weak_oracle(const Wlts<S>& w) {
    if constexpr (!std::is_same_v<S, BooleanSemiring>) {
        throw std::invalid_argument("milner_weak_oracle requires the boolean semiring");
    } else {
        return naive_strong_lts_partition(double_arrow_system(w));
    }
}

}  // namespace wbisim::oracle
