#pragma once

// JSON system documents: parsing, instantiation over a semiring, and
// serialization.
//
// Layout:
// @code
// {
//   "semiring": {"name": "real", "params": {"k": 10, "epsilon": 1e-9}},
//   "tau": "tau",
//   "actions": ["a", "b"],
//   "states": ["x", "y"],
//   "transitions": [{"from": "x", "label": "a", "to": "y", "weight": "1/2"}]
// }
// @endcode
// `semiring` may also be a bare name string. `actions` is optional; labels
// seen in transitions are appended in first-use order. A missing `weight`
// means the semiring's one. Weights are strings so that exact rationals and
// `inf` survive round trips.

#include "wbisim/semiring.hpp"
#include "wbisim/wlts.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace wbisim {

// Malformed document (not JSON, or wrong shape).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Well-formed document with dangling references or invalid weight literals.
class SemanticError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TransitionRecord {
    std::string from;
    std::string label;
    std::string to;
    std::optional<std::string> weight;
};

// Shape-checked document before weights are interpreted.
struct SystemDocument {
    std::optional<std::string> semiring;
    SemiringParams params;
    std::string tau = "tau";
    std::vector<std::string> actions;
    std::vector<std::string> states;
    std::vector<TransitionRecord> transitions;
};

inline SystemDocument parse_document(const nlohmann::json& j) {
    using nlohmann::json;
    if (!j.is_object()) throw ParseError("document must be a JSON object");
    SystemDocument doc;
    auto require_string = [](const json& v, const std::string& what) {
        if (!v.is_string()) throw ParseError(what + " must be a string");
        return v.get<std::string>();
    };
    try {
        if (j.contains("semiring")) {
            const auto& s = j.at("semiring");
            if (s.is_string()) {
                doc.semiring = s.get<std::string>();
            } else if (s.is_object()) {
                doc.semiring = require_string(s.at("name"), "semiring.name");
                if (s.contains("params")) {
                    const auto& p = s.at("params");
                    if (!p.is_object()) throw ParseError("semiring.params must be an object");
                    if (p.contains("k")) {
                        if (!p.at("k").is_number_integer()) throw ParseError("semiring.params.k must be an integer");
                        doc.params.k = p.at("k").get<long long>();
                    }
                    if (p.contains("epsilon")) {
                        if (!p.at("epsilon").is_number()) throw ParseError("semiring.params.epsilon must be a number");
                        doc.params.epsilon = p.at("epsilon").get<double>();
                    }
                }
            } else {
                throw ParseError("semiring must be a name or an object");
            }
        }
        if (j.contains("tau")) doc.tau = require_string(j.at("tau"), "tau");
        if (j.contains("actions")) {
            if (!j.at("actions").is_array()) throw ParseError("actions must be an array");
            for (const auto& a : j.at("actions")) doc.actions.push_back(require_string(a, "action"));
        }
        if (!j.contains("states") || !j.at("states").is_array()) throw ParseError("states must be an array");
        for (const auto& s : j.at("states")) doc.states.push_back(require_string(s, "state name"));
        if (j.contains("transitions")) {
            if (!j.at("transitions").is_array()) throw ParseError("transitions must be an array");
            for (const auto& t : j.at("transitions")) {
                if (!t.is_object()) throw ParseError("transition must be an object");
                TransitionRecord r{require_string(t.at("from"), "from"), require_string(t.at("label"), "label"),
                                   require_string(t.at("to"), "to"), std::nullopt};
                if (t.contains("weight")) {
                    const auto& w = t.at("weight");
                    if (w.is_string())
                        r.weight = w.get<std::string>();
                    else if (w.is_number())
                        r.weight = w.dump();
                    else if (w.is_boolean())
                        r.weight = w.get<bool>() ? "true" : "false";
                    else
                        throw ParseError("weight must be a string or number");
                }
                doc.transitions.push_back(std::move(r));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
    return doc;
}

inline SystemDocument parse_document(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_document(j);
}

template <Semiring S>
struct Loaded {
    Wlts<S> system;
    std::size_t dropped_zero_weights = 0;
};

// Interprets a document over a concrete semiring instance.
template <LiteralSemiring S>
Loaded<S> instantiate(const SystemDocument& doc, const S& semiring) {
    WltsBuilder<S> builder(semiring, doc.tau);
    for (const auto& a : doc.actions) {
        if (a == doc.tau) throw SemanticError("silent label '" + a + "' listed as an action");
        builder.add_action(a);
    }
    for (const auto& s : doc.states) {
        try {
            builder.add_state(s);
        } catch (const std::invalid_argument& e) {
            throw SemanticError(e.what());
        }
    }
    auto state = [&](const std::string& name) {
        auto id = builder.find_state(name);
        if (!id) throw SemanticError("unknown state '" + name + "'");
        return *id;
    };
    for (const auto& t : doc.transitions) {
        StateId from = state(t.from), to = state(t.to);
        value_t<S> w = semiring.one();
        if (t.weight) {
            auto v = semiring.parse(*t.weight);
            if (!v)
                throw SemanticError("weight '" + *t.weight + "' is not a valid " + semiring.descriptor().name +
                                    " literal");
            w = *v;
        }
        builder.add_transition(from, t.label, to, std::move(w));
    }
    Loaded<S> out{builder.build(), 0};
    out.dropped_zero_weights = builder.dropped_zero_weights();
    return out;
}

inline nlohmann::json descriptor_json(const SemiringDescriptor& d) {
    nlohmann::json j{{"name", d.name}};
    nlohmann::json params = nlohmann::json::object();
    if (d.k) params["k"] = *d.k;
    if (d.epsilon && d.name == "real-float") params["epsilon"] = *d.epsilon;
    if (!params.empty()) j["params"] = params;
    return j;
}

// Serializes a system back into the document layout (ordered keys so output
// is byte-stable).
template <LiteralSemiring S>
nlohmann::ordered_json serialize(const Wlts<S>& w) {
    nlohmann::ordered_json j;
    const auto d = w.semiring().descriptor();
    j["semiring"] = nlohmann::ordered_json::parse(descriptor_json(d).dump());
    j["tau"] = w.tau_name();
    j["actions"] = w.actions();
    j["states"] = w.state_names();
    auto transitions = nlohmann::ordered_json::array();
    for (StateId x = 0; x < w.state_count(); ++x)
        for (Label l : w.labels())
            for (const auto& e : w.successors(x, l))
                transitions.push_back({{"from", w.state_name(x)},
                                       {"label", w.label_name(l)},
                                       {"to", w.state_name(e.target)},
                                       {"weight", w.semiring().format(e.weight)}});
    j["transitions"] = std::move(transitions);
    return j;
}

// ---------------------------------------------------------------------------
// Runtime-typed systems

using AnySystem = std::variant<Wlts<BooleanSemiring>, Wlts<RealSemiring>, Wlts<RealFloatSemiring>,
                               Wlts<TropicalSemiring>, Wlts<ArcticSemiring>, Wlts<TruncationSemiring>,
                               Wlts<MaxTimesSemiring>>;

struct AnyLoaded {
    AnySystem system;
    std::size_t dropped_zero_weights = 0;
};

// Chooses the semiring (override first, then the document's own) and
// instantiates the document over it.
inline AnyLoaded load(const SystemDocument& doc, const std::optional<std::string>& semiring_override = {},
                      const SemiringParams& param_override = {}) {
    std::string name;
    SemiringParams params = doc.params;
    if (semiring_override) {
        name = *semiring_override;
        params = param_override;
    } else if (doc.semiring) {
        name = *doc.semiring;
    } else {
        throw SemanticError("document does not name a semiring");
    }
    if (param_override.k) params.k = param_override.k;
    if (param_override.epsilon) params.epsilon = param_override.epsilon;
    AnySemiring semiring;
    try {
        semiring = make_semiring(name, params);
    } catch (const UnknownSemiring& e) {
        throw SemanticError(e.what());
    }
    return std::visit(
        [&](const auto& s) {
            auto loaded = instantiate(doc, s);
            return AnyLoaded{AnySystem(std::move(loaded.system)), loaded.dropped_zero_weights};
        },
        semiring);
}

inline AnyLoaded load(std::string_view text, const std::optional<std::string>& semiring_override = {},
                      const SemiringParams& param_override = {}) {
    return load(parse_document(text), semiring_override, param_override);
}

}  // namespace wbisim
