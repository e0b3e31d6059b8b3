#pragma once

// Quotient systems and DOT rendering.

#include "wbisim/semiring.hpp"
#include "wbisim/wlts.hpp"

#include <sstream>
#include <stdexcept>
#include <string>

namespace wbisim {

class NotABisimulation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Name of a block as used in quotient systems: "{x,y}".
inline std::string block_name(const std::vector<std::string>& names, const std::vector<StateId>& block) {
    std::string out = "{";
    for (std::size_t i = 0; i < block.size(); ++i) out += (i ? "," : "") + names.at(block[i]);
    return out + "}";
}

// One state per block; weight(B, l, B') is the class weight of any member
// of B into B'. Throws NotABisimulation if members of a block disagree.
template <Semiring S>
Wlts<S> emit_quotient(const Wlts<S>& w, const Partition& p) {
    if (p.state_count() != w.state_count()) throw std::invalid_argument("emit_quotient: partition size mismatch");
    const S& s = w.semiring();
    WltsBuilder<S> b(s, w.tau_name());
    for (const auto& a : w.actions()) b.add_action(a);
    for (const auto& blk : p.blocks()) b.add_state(block_name(w.state_names(), blk));
    std::vector<std::vector<char>> masks;
    for (const auto& blk : p.blocks()) masks.push_back(block_mask(w.state_count(), blk));
    for (std::size_t from = 0; from < p.size(); ++from) {
        const auto& members = p.block(from);
        for (Label l : w.labels())
            for (std::size_t to = 0; to < p.size(); ++to) {
                const std::span<const char> mask(masks[to]);
                const auto rep = w.class_weight(members.front(), l, mask);
                for (std::size_t i = 1; i < members.size(); ++i)
                    if (!s.equal(rep, w.class_weight(members[i], l, mask)))
                        throw NotABisimulation("states " + w.state_name(members.front()) + " and " +
                                               w.state_name(members[i]) + " disagree on label " + w.label_name(l) +
                                               " into block " + std::to_string(to));
                b.add_transition(from, l, to, rep);
            }
    }
    return b.build();
}

// Graphviz rendering; edges are labelled "label,weight".
template <LiteralSemiring S>
std::string to_dot(const Wlts<S>& w, std::string_view graph_name = "wlts") {
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out + "\"";
    };
    std::ostringstream os;
    os << "digraph " << graph_name << " {\n";
    for (StateId x = 0; x < w.state_count(); ++x) os << "  " << quote(w.state_name(x)) << ";\n";
    for (StateId x = 0; x < w.state_count(); ++x)
        for (Label l : w.labels())
            for (const auto& e : w.successors(x, l))
                os << "  " << quote(w.state_name(x)) << " -> " << quote(w.state_name(e.target))
                   << " [label=" << quote(w.label_name(l) + "," + w.semiring().format(e.weight)) << "];\n";
    os << "}\n";
    return os.str();
}

}  // namespace wbisim
