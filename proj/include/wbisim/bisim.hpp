#pragma once

// Partition refinement for strong, weak and delay weighted
// bisimulation.
//
// Starting from a partition coarser than the target equivalence, the engine
// sweeps over split candidates. A candidate is a class C; its saturation
// table is computed once, and for every label alpha (tau first) every block
// of the current partition is split by the weights rho(x, alpha^, C).
// Candidates of a sweep are the blocks created during the previous sweep;
// the loop stops when a sweep creates no block.

#include "wbisim/semiring.hpp"
#include "wbisim/solver.hpp"
#include "wbisim/wlts.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wbisim {

enum class Equivalence { Strong, Weak, Delay };

inline std::string_view to_string(Equivalence e) {
    switch (e) {
        case Equivalence::Strong: return "strong";
        case Equivalence::Weak: return "weak";
        case Equivalence::Delay: return "delay";
    }
    return "?";
}

inline std::optional<Equivalence> parse_equivalence(std::string_view s) {
    if (s == "strong") return Equivalence::Strong;
    if (s == "weak") return Equivalence::Weak;
    if (s == "delay") return Equivalence::Delay;
    return std::nullopt;
}

// Saturation table for a class under the given equivalence.
template <Semiring S>
SaturationTable<S> saturation_for(const Wlts<S>& w, std::span<const StateId> cls, Equivalence eq,
                                  const SaturationOptions& opt = {}) {
    switch (eq) {
        case Equivalence::Strong: return single_step_table(w, cls);
        case Equivalence::Weak: return saturate(w, cls, SaturationMode::Weak, opt);
        case Equivalence::Delay: return saturate(w, cls, SaturationMode::Delay, opt);
    }
    throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Block splitting

// Groups members of a block into maximal classes of equal weight by
// pairwise comparison against group representatives. weights[i] belongs to
// block[i]. Groups come out ordered by first member.
template <Semiring S>
std::vector<std::vector<StateId>> split_block(const S& s, std::span<const StateId> block,
                                              const std::vector<value_t<S>>& weights) {
    std::vector<std::vector<StateId>> groups;
    std::vector<std::size_t> reps;  // index into weights of each group's representative
    for (std::size_t i = 0; i < block.size(); ++i) {
        auto it = std::ranges::find_if(reps, [&](std::size_t r) { return s.equal(weights[r], weights[i]); });
        if (it == reps.end()) {
            reps.push_back(i);
            groups.push_back({block[i]});
        } else {
            groups[static_cast<std::size_t>(it - reps.begin())].push_back(block[i]);
        }
    }
    for (auto& g : groups) std::ranges::sort(g);
    std::ranges::sort(groups, [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return groups;
}

// Sort-then-scan grouping: members are ordered by weight and a new group
// starts wherever adjacent weights differ. Under float equality this splits
// where an adjacent gap exceeds epsilon.
template <OrderedSemiring S>
std::vector<std::vector<StateId>> split_block_sorted(const S& s, std::span<const StateId> block,
                                                     const std::vector<value_t<S>>& weights) {
    std::vector<std::size_t> order(block.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return s.less(weights[a], weights[b]); });
    std::vector<std::vector<StateId>> groups;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k == 0 || !s.equal(weights[order[k - 1]], weights[order[k]])) groups.emplace_back();
        groups.back().push_back(block[order[k]]);
    }
    for (auto& g : groups) std::ranges::sort(g);
    std::ranges::sort(groups, [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return groups;
}

// ---------------------------------------------------------------------------
// Engine

enum class SplitStrategy { Sorted, Pairwise };

struct RefinementOptions {
    SplitStrategy strategy = SplitStrategy::Sorted;
    SaturationOptions saturation;
    std::optional<Partition> initial;  // must be coarser than the result
};

struct TraceEntry {
    std::size_t sweep;
    Label label;
    std::vector<StateId> splitter;
    std::size_t blocks_split;
    std::size_t blocks_before;
    std::size_t blocks_after;
};

struct RefinementTrace {
    std::vector<TraceEntry> entries;
    std::size_t sweeps = 0;
    std::size_t saturations = 0;
};

struct RefinementResult {
    Partition partition;
    RefinementTrace trace;
};

// Raised when a saturation solve fails; names the offending splitter class.
class SplitterFailure : public SolverFailure {
public:
    SplitterFailure(const std::string& msg, std::vector<StateId> cls)
        : SolverFailure(msg), splitter(std::move(cls)) {}
    std::vector<StateId> splitter;
};

template <Semiring S>
class RefinementEngine {
public:
    RefinementEngine(const Wlts<S>& w, Equivalence eq, RefinementOptions opt = {})
        : w_(w), eq_(eq), opt_(std::move(opt)) {}

    RefinementResult run() {
        const std::size_t n = w_.state_count();
        RefinementResult result;
        if (n == 0) {
            result.partition = Partition::from_blocks(0, {});
            return result;
        }
        init_blocks(opt_.initial ? *opt_.initial : Partition::single_block(n));

        std::size_t sweep = 0;
        for (;;) {
            ++sweep;
            // candidates: blocks created during the previous sweep
            std::vector<std::vector<StateId>> candidates;
            for (std::size_t b = 0; b < blocks_.size(); ++b)
                if (generation_[b] == sweep - 1) candidates.push_back(blocks_[b]);
            if (candidates.empty()) break;
            std::ranges::sort(candidates, [](const auto& a, const auto& b) { return a.front() < b.front(); });
            result.trace.sweeps = sweep;

            for (const auto& cls : candidates) {
                SaturationTable<S> table;
                try {
                    table = saturation_for(w_, std::span<const StateId>(cls), eq_, opt_.saturation);
                } catch (const SolverFailure& e) {
                    throw SplitterFailure(std::string("saturation failed for splitter class: ") + e.what(), cls);
                }
                ++result.trace.saturations;
                for (Label l : w_.labels()) {
                    const std::size_t before = blocks_.size();
                    const std::size_t split = refine_all(table.weights(l), sweep);
                    if (split > 0)
                        result.trace.entries.push_back({sweep, l, cls, split, before, blocks_.size()});
                }
            }
        }
        result.partition = Partition::from_blocks(n, blocks_);
        return result;
    }

private:
    void init_blocks(const Partition& p) {
        if (p.state_count() != w_.state_count()) throw std::invalid_argument("initial partition size mismatch");
        blocks_ = p.blocks();
        generation_.assign(blocks_.size(), 0);
    }

    // Splits every block by the given weights; returns how many blocks split.
    std::size_t refine_all(const std::vector<value_t<S>>& weights, std::size_t sweep) {
        std::size_t split_count = 0;
        const std::size_t live = blocks_.size();
        std::vector<value_t<S>> local;
        for (std::size_t b = 0; b < live; ++b) {
            if (blocks_[b].size() < 2) continue;
            local.clear();
            for (StateId x : blocks_[b]) local.push_back(weights[x]);
            auto groups = split(blocks_[b], local);
            if (groups.size() < 2) continue;
            ++split_count;
            blocks_[b] = std::move(groups.front());
            generation_[b] = sweep;
            for (std::size_t g = 1; g < groups.size(); ++g) {
                blocks_.push_back(std::move(groups[g]));
                generation_.push_back(sweep);
            }
        }
        return split_count;
    }

    std::vector<std::vector<StateId>> split(std::span<const StateId> block, const std::vector<value_t<S>>& weights) {
        if constexpr (OrderedSemiring<S>) {
            if (opt_.strategy == SplitStrategy::Sorted) return split_block_sorted(w_.semiring(), block, weights);
        }
        return split_block(w_.semiring(), block, weights);
    }

    const Wlts<S>& w_;
    Equivalence eq_;
    RefinementOptions opt_;
    std::vector<std::vector<StateId>> blocks_;
    std::vector<std::size_t> generation_;
};

template <Semiring S>
RefinementResult refine(const Wlts<S>& w, Equivalence eq, RefinementOptions opt = {}) {
    return RefinementEngine<S>(w, eq, std::move(opt)).run();
}

template <Semiring S>
Partition strong_partition(const Wlts<S>& w, RefinementOptions opt = {}) {
    return refine(w, Equivalence::Strong, std::move(opt)).partition;
}

template <Semiring S>
Partition weak_partition(const Wlts<S>& w, RefinementOptions opt = {}) {
    return refine(w, Equivalence::Weak, std::move(opt)).partition;
}

template <Semiring S>
Partition delay_partition(const Wlts<S>& w, RefinementOptions opt = {}) {
    return refine(w, Equivalence::Delay, std::move(opt)).partition;
}

template <Semiring S>
Partition partition_for(const Wlts<S>& w, Equivalence eq, RefinementOptions opt = {}) {
    return refine(w, eq, std::move(opt)).partition;
}

template <Semiring S>
bool bisimilar(const Wlts<S>& w, StateId x, StateId y, Equivalence eq) {
    if (x >= w.state_count() || y >= w.state_count()) throw std::out_of_range("bisimilar: state id out of range");
    if (x == y) return true;
    return partition_for(w, eq).same_block(x, y);
}

// Label-signature pre-split: groups states by which labels carry nonzero
// saturated weight into the whole state space. Always coarser than the
// equivalence itself.
template <Semiring S>
Partition signature_partition(const Wlts<S>& w, Equivalence eq) {
    const std::size_t n = w.state_count();
    std::vector<StateId> all(n);
    std::iota(all.begin(), all.end(), StateId{0});
    const auto table = saturation_for(w, std::span<const StateId>(all), eq);
    std::vector<std::vector<char>> sig(n);
    for (StateId x = 0; x < n; ++x)
        for (Label l : w.labels()) sig[x].push_back(w.semiring().is_zero(table.weights(l)[x]) ? 0 : 1);
    return Partition::from_labels(std::span<const std::vector<char>>(sig));
}

// ---------------------------------------------------------------------------
// Verification

struct Violation {
    std::size_t block;      // index of the block whose members disagree
    Label label;
    std::size_t splitter;   // index of the target class
    StateId left;
    StateId right;
};

// Re-checks the defining conditions: within each block, every pair of
// members has equal saturated weights for every label into every class.
template <Semiring S>
std::vector<Violation> check_bisimulation(const Wlts<S>& w, const Partition& p, Equivalence eq) {
    std::vector<Violation> out;
    for (std::size_t c = 0; c < p.size(); ++c) {
        const auto table = saturation_for(w, std::span<const StateId>(p.block(c)), eq);
        for (Label l : w.labels()) {
            const auto& weights = table.weights(l);
            for (std::size_t b = 0; b < p.size(); ++b) {
                const auto& block = p.block(b);
                for (std::size_t i = 1; i < block.size(); ++i)
                    if (!w.semiring().equal(weights[block.front()], weights[block[i]]))
                        out.push_back({b, l, c, block.front(), block[i]});
            }
        }
    }
    return out;
}

template <Semiring S>
std::vector<Violation> check_is_weak_bisimulation(const Wlts<S>& w, const Partition& p) {
    return check_bisimulation(w, p, Equivalence::Weak);
}

}  // namespace wbisim
