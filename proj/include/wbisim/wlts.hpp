#pragma once

// Weighted labelled transition systems over a semiring.

#include "wbisim/semiring.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace wbisim {

using StateId = std::size_t;

// Either the silent label or an index into the action alphabet.
class Label {
public:
    static constexpr Label tau() { return Label(0); }
    static constexpr Label action(std::size_t i) { return Label(i + 1); }

    constexpr bool is_tau() const { return code_ == 0; }
    constexpr std::size_t action_index() const { return code_ - 1; }
    // Dense code: 0 for tau, i+1 for action i.
    constexpr std::size_t code() const { return code_; }
    static constexpr Label from_code(std::size_t c) { return Label(c); }

    constexpr auto operator<=>(const Label&) const = default;

private:
    constexpr explicit Label(std::size_t c) : code_(c) {}
    std::size_t code_;
};

template <Semiring S>
struct Edge {
    StateId target;
    value_t<S> weight;
};

// Canonical set partition of {0..n-1}: blocks ordered by minimum member,
// members ascending.
class Partition {
public:
    Partition() = default;

    static Partition from_blocks(std::size_t n, std::vector<std::vector<StateId>> blocks) {
        Partition p;
        p.block_of_.assign(n, n);
        for (auto& b : blocks) {
            if (b.empty()) throw std::invalid_argument("Partition: empty block");
            std::ranges::sort(b);
        }
        std::ranges::sort(blocks, [](const auto& a, const auto& b) { return a.front() < b.front(); });
        for (std::size_t i = 0; i < blocks.size(); ++i)
            for (StateId s : blocks[i]) {
                if (s >= n || p.block_of_[s] != n) throw std::invalid_argument("Partition: blocks overlap or out of range");
                p.block_of_[s] = i;
            }
        if (std::ranges::find(p.block_of_, n) != p.block_of_.end())
            throw std::invalid_argument("Partition: blocks do not cover all states");
        p.blocks_ = std::move(blocks);
        return p;
    }

    // Blocks from an arbitrary labelling (equal labels share a block).
    template <class Key>
    static Partition from_labels(std::span<const Key> labels) {
        std::map<Key, std::vector<StateId>> groups;
        for (StateId s = 0; s < labels.size(); ++s) groups[labels[s]].push_back(s);
        std::vector<std::vector<StateId>> blocks;
        for (auto& [k, members] : groups) blocks.push_back(std::move(members));
        return from_blocks(labels.size(), std::move(blocks));
    }

    static Partition single_block(std::size_t n) {
        if (n == 0) return from_blocks(0, {});
        std::vector<StateId> all(n);
        for (StateId s = 0; s < n; ++s) all[s] = s;
        return from_blocks(n, {std::move(all)});
    }

    static Partition discrete(std::size_t n) {
        std::vector<std::vector<StateId>> blocks;
        for (StateId s = 0; s < n; ++s) blocks.push_back({s});
        return from_blocks(n, std::move(blocks));
    }

    std::size_t state_count() const { return block_of_.size(); }
    std::size_t size() const { return blocks_.size(); }
    const std::vector<std::vector<StateId>>& blocks() const { return blocks_; }
    const std::vector<StateId>& block(std::size_t i) const { return blocks_.at(i); }
    std::size_t block_of(StateId s) const { return block_of_.at(s); }
    bool same_block(StateId a, StateId b) const { return block_of(a) == block_of(b); }

    // True iff every block of *this is contained in a block of coarser.
    bool refines(const Partition& coarser) const {
        if (coarser.state_count() != state_count()) return false;
        return std::ranges::all_of(blocks_, [&](const auto& b) {
            return std::ranges::all_of(b, [&](StateId s) { return coarser.same_block(s, b.front()); });
        });
    }

    bool operator==(const Partition&) const = default;

private:
    std::vector<std::size_t> block_of_;
    std::vector<std::vector<StateId>> blocks_;
};

// Membership mask over states.
inline std::vector<char> block_mask(std::size_t n, std::span<const StateId> block) {
    std::vector<char> mask(n, 0);
    for (StateId s : block) mask.at(s) = 1;
    return mask;
}

template <Semiring S>
class WltsBuilder;

// Finite weighted LTS. Immutable once built; no stored weight is zero and
// every (source, label) adjacency list has distinct, ascending targets.
template <Semiring S>
class Wlts {
public:
    using semiring_type = S;
    using value_type = value_t<S>;

    const S& semiring() const { return semiring_; }
    std::size_t state_count() const { return names_.size(); }
    std::size_t action_count() const { return actions_.size(); }
    std::size_t label_count() const { return actions_.size() + 1; }
    const std::vector<std::string>& state_names() const { return names_; }
    const std::string& state_name(StateId s) const { return names_.at(s); }
    const std::vector<std::string>& actions() const { return actions_; }
    const std::string& tau_name() const { return tau_name_; }
    std::string label_name(Label l) const { return l.is_tau() ? tau_name_ : actions_.at(l.action_index()); }

    // All labels in canonical order: tau first, then actions in declaration order.
    std::vector<Label> labels() const {
        std::vector<Label> out;
        for (std::size_t c = 0; c < label_count(); ++c) out.push_back(Label::from_code(c));
        return out;
    }

    std::span<const Edge<S>> successors(StateId x, Label l) const {
        check_state(x);
        return adjacency_.at(l.code())[x];
    }

    value_type weight(StateId x, Label l, StateId y) const {
        check_state(y);
        auto succ = successors(x, l);
        auto it = std::ranges::lower_bound(succ, y, {}, &Edge<S>::target);
        if (it != succ.end() && it->target == y) return it->weight;
        return semiring_.zero();
    }

    // Sum of single-step weights from x into the states flagged in mask.
    value_type class_weight(StateId x, Label l, std::span<const char> mask) const {
        value_type acc = semiring_.zero();
        for (const auto& e : successors(x, l))
            if (mask[e.target]) acc = semiring_.add(acc, e.weight);
        return acc;
    }

    value_type class_weight(StateId x, Label l, std::span<const StateId> block) const {
        return class_weight(x, l, block_mask(state_count(), block));
    }

    bool is_terminal(StateId x) const {
        check_state(x);
        return std::ranges::all_of(adjacency_, [&](const auto& per_state) { return per_state[x].empty(); });
    }

    std::size_t transition_count() const {
        std::size_t n = 0;
        for (const auto& per_state : adjacency_)
            for (const auto& edges : per_state) n += edges.size();
        return n;
    }

    bool has_tau_transitions() const {
        return std::ranges::any_of(adjacency_.front(), [](const auto& e) { return !e.empty(); });
    }

    std::optional<StateId> find_state(std::string_view name) const {
        for (StateId s = 0; s < names_.size(); ++s)
            if (names_[s] == name) return s;
        return std::nullopt;
    }

    std::optional<Label> find_label(std::string_view name) const {
        if (name == tau_name_) return Label::tau();
        for (std::size_t i = 0; i < actions_.size(); ++i)
            if (actions_[i] == name) return Label::action(i);
        return std::nullopt;
    }

private:
    friend class WltsBuilder<S>;

    void check_state(StateId x) const {
        if (x >= state_count()) throw std::out_of_range("Wlts: state id " + std::to_string(x) + " out of range");
    }

    S semiring_;
    std::string tau_name_ = "tau";
    std::vector<std::string> names_;
    std::vector<std::string> actions_;
    // adjacency_[label code][source] -> edges sorted by target
    std::vector<std::vector<std::vector<Edge<S>>>> adjacency_;
};

// Accumulates states, actions and transitions. Duplicate triples are
// combined with semiring addition; zero weights are dropped and counted.
template <Semiring S>
class WltsBuilder {
public:
    explicit WltsBuilder(S semiring = S{}, std::string tau_name = "tau")
        : semiring_(std::move(semiring)), tau_name_(std::move(tau_name)) {}

    StateId add_state(std::string name) {
        if (index_.contains(name)) throw std::invalid_argument("duplicate state '" + name + "'");
        index_.emplace(name, names_.size());
        names_.push_back(std::move(name));
        return names_.size() - 1;
    }

    // Adds the given number of states named s0, s1, ...
    void add_states(std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) add_state("s" + std::to_string(names_.size()));
    }

    Label add_action(std::string name) {
        if (name == tau_name_) return Label::tau();
        for (std::size_t i = 0; i < actions_.size(); ++i)
            if (actions_[i] == name) return Label::action(i);
        actions_.push_back(std::move(name));
        return Label::action(actions_.size() - 1);
    }

    void add_transition(StateId from, Label l, StateId to, value_t<S> w) {
        if (from >= names_.size() || to >= names_.size()) throw std::out_of_range("transition endpoint out of range");
        if (!l.is_tau() && l.action_index() >= actions_.size()) throw std::out_of_range("unknown action");
        transitions_.push_back({from, l, to, std::move(w)});
    }

    void add_transition(StateId from, std::string_view label, StateId to, value_t<S> w) {
        add_transition(from, add_action(std::string(label)), to, std::move(w));
    }

    std::optional<StateId> find_state(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t dropped_zero_weights() const { return dropped_; }

    Wlts<S> build() {
        Wlts<S> w;
        w.semiring_ = semiring_;
        w.tau_name_ = tau_name_;
        w.names_ = names_;
        w.actions_ = actions_;
        const std::size_t n = names_.size();
        std::vector<std::map<std::pair<StateId, StateId>, value_t<S>>> combined(actions_.size() + 1);
        for (const auto& t : transitions_) {
            auto& slot = combined[t.label.code()];
            auto key = std::make_pair(t.from, t.to);
            if (auto it = slot.find(key); it != slot.end())
                it->second = semiring_.add(it->second, t.weight);
            else
                slot.emplace(key, t.weight);
        }
        dropped_ = 0;
        w.adjacency_.assign(actions_.size() + 1, std::vector<std::vector<Edge<S>>>(n));
        for (std::size_t c = 0; c < combined.size(); ++c)
            for (auto& [key, weight] : combined[c]) {
                if (semiring_.is_zero(weight)) {
                    ++dropped_;
                    continue;
                }
                w.adjacency_[c][key.first].push_back({key.second, weight});
            }
        return w;
    }

private:
    struct PendingTransition {
        StateId from;
        Label label;
        StateId to;
        value_t<S> weight;
    };

    S semiring_;
    std::string tau_name_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, StateId> index_;
    std::vector<std::string> actions_;
    std::vector<PendingTransition> transitions_;
    std::size_t dropped_ = 0;
};

// ---------------------------------------------------------------------------
// Probabilistic constraint checks

template <Semiring S>
struct MassEntry {
    StateId state;
    std::optional<Label> label;  // set for reactive (per-action) checks
    value_t<S> mass;
    bool ok;
};

template <Semiring S>
struct MassReport {
    std::vector<MassEntry<S>> entries;
    bool all_ok() const {
        return std::ranges::all_of(entries, [](const auto& e) { return e.ok; });
    }
};

class NotARealSemiring : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

namespace detail {
template <Semiring S>
bool is_zero_or_one_mass(const S& s, const value_t<S>& m) {
    return s.equal(m, s.zero()) || s.equal(m, s.one());
}
}  // namespace detail

// Generative systems: every state's total outgoing mass is 0 or 1.
template <Semiring S>
MassReport<S> check_fully_probabilistic(const Wlts<S>& w) {
    if constexpr (!is_real_semiring_v<S>) {
        throw NotARealSemiring("fully-probabilistic check requires the real semiring, got " +
                               w.semiring().descriptor().name);
    } else {
        const S& s = w.semiring();
        MassReport<S> report;
        for (StateId x = 0; x < w.state_count(); ++x) {
            value_t<S> mass = s.zero();
            for (Label l : w.labels())
                for (const auto& e : w.successors(x, l)) mass = s.add(mass, e.weight);
            report.entries.push_back({x, std::nullopt, mass, detail::is_zero_or_one_mass(s, mass)});
        }
        return report;
    }
}

// Reactive systems: per (state, label) the outgoing mass is 0 or 1.
// Only pairs with at least one transition are listed.
template <Semiring S>
MassReport<S> check_reactive(const Wlts<S>& w) {
    if constexpr (!is_real_semiring_v<S>) {
        throw NotARealSemiring("reactive check requires the real semiring, got " + w.semiring().descriptor().name);
    } else {
        const S& s = w.semiring();
        MassReport<S> report;
        for (StateId x = 0; x < w.state_count(); ++x)
            for (Label l : w.labels()) {
                auto succ = w.successors(x, l);
                if (succ.empty()) continue;
                value_t<S> mass = s.zero();
                for (const auto& e : succ) mass = s.add(mass, e.weight);
                report.entries.push_back({x, l, mass, detail::is_zero_or_one_mass(s, mass)});
            }
        return report;
    }
}

}  // namespace wbisim
