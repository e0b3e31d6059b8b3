#include "cli.hpp"

#include "wbisim/wbisim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace wbisim::cli {
namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { Structured, Dot, Plain };

struct Options {
    std::optional<std::string> semiring;
    std::vector<std::string> params;
    std::string format = "structured";

    std::string input;
    std::string equivalence = "strong";
    bool emit_quotient = false;
    bool oracle = false;
    bool trace = false;
    std::string left, right;
    std::string cls;
    std::string mode = "weak";
    std::string require;
    std::uint64_t seed = 1;
};

SemiringParams parse_params(const std::vector<std::string>& raw) {
    SemiringParams p;
    for (const auto& kv : raw) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--param expects key=value, got '" + kv + "'");
        std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
        try {
            std::size_t used = 0;
            if (key == "k") {
                p.k = std::stoll(value, &used);
            } else if (key == "epsilon") {
                p.epsilon = std::stod(value, &used);
            } else {
                throw UsageError("unknown semiring parameter '" + key + "'");
            }
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::logic_error&) {
            throw UsageError("invalid value for parameter '" + key + "': " + value);
        }
    }
    return p;
}

Format parse_format(const std::string& f) {
    if (f == "structured") return Format::Structured;
    if (f == "dot") return Format::Dot;
    if (f == "plain") return Format::Plain;
    throw UsageError("unknown format '" + f + "'");
}

Equivalence parse_eq(const std::string& s) {
    auto e = parse_equivalence(s);
    if (!e) throw UsageError("unknown equivalence '" + s + "'");
    return *e;
}

std::string read_input(const std::string& path, std::istream& in) {
    std::ostringstream buf;
    if (path == "-") {
        buf << in.rdbuf();
    } else {
        std::ifstream f(path);
        if (!f) throw ParseError("cannot read '" + path + "'");
        buf << f.rdbuf();
    }
    return buf.str();
}

AnyLoaded load_input(const Options& o, std::istream& in) {
    std::optional<std::string> override_name = o.semiring;
    return load(read_input(o.input, in), override_name, parse_params(o.params));
}

template <class S>
Json blocks_json(const Wlts<S>& w, const Partition& p) {
    Json blocks = Json::array();
    for (const auto& b : p.blocks()) {
        Json names = Json::array();
        for (StateId s : b) names.push_back(w.state_name(s));
        blocks.push_back(std::move(names));
    }
    return blocks;
}

template <class S>
std::string plain_blocks(const Wlts<S>& w, const Partition& p) {
    std::string out;
    for (const auto& b : p.blocks()) out += block_name(w.state_names(), b) + "\n";
    return out;
}

template <class S>
StateId resolve_state(const Wlts<S>& w, const std::string& name) {
    auto id = w.find_state(name);
    if (!id) throw SemanticError("unknown state '" + name + "'");
    return *id;
}

template <class S>
Json saturation_json(const Wlts<S>& w, const SaturationTable<S>& t) {
    Json cls = Json::array();
    for (StateId s : t.cls) cls.push_back(w.state_name(s));
    Json labels = Json::array();
    for (Label l : w.labels()) labels.push_back(w.label_name(l));
    Json grid = Json::object();
    for (StateId x = 0; x < w.state_count(); ++x) {
        Json row = Json::object();
        for (Label l : w.labels()) row[w.label_name(l)] = w.semiring().format(t.weights(l)[x]);
        grid[w.state_name(x)] = std::move(row);
    }
    return Json{{"class", cls}, {"labels", labels}, {"grid", grid}};
}

template <class S>
std::string saturation_plain(const Wlts<S>& w, const SaturationTable<S>& t) {
    std::ostringstream os;
    os << "class " << block_name(w.state_names(), t.cls) << "\n";
    os << "state";
    for (Label l : w.labels()) os << "\t" << w.label_name(l);
    os << "\n";
    for (StateId x = 0; x < w.state_count(); ++x) {
        os << w.state_name(x);
        for (Label l : w.labels()) os << "\t" << w.semiring().format(t.weights(l)[x]);
        os << "\n";
    }
    return os.str();
}

template <class S>
Json trace_json(const Wlts<S>& w, const RefinementTrace& trace) {
    Json entries = Json::array();
    for (const auto& e : trace.entries) {
        Json splitter = Json::array();
        for (StateId s : e.splitter) splitter.push_back(w.state_name(s));
        entries.push_back(Json{{"sweep", e.sweep},
                               {"label", w.label_name(e.label)},
                               {"splitter", splitter},
                               {"blocks_split", e.blocks_split},
                               {"blocks_before", e.blocks_before},
                               {"blocks_after", e.blocks_after}});
    }
    return Json{{"sweeps", trace.sweeps}, {"saturations", trace.saturations}, {"splits", entries}};
}

template <class S>
Json mass_json(const Wlts<S>& w, const MassReport<S>& r) {
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json j{{"state", w.state_name(e.state)}};
        if (e.label) j["label"] = w.label_name(*e.label);
        j["mass"] = w.semiring().format(e.mass);
        j["ok"] = e.ok;
        entries.push_back(std::move(j));
    }
    return Json{{"ok", r.all_ok()}, {"entries", entries}};
}

// ---------------------------------------------------------------------------

template <class S>
int do_validate(const Wlts<S>& w, std::size_t dropped, const Options& o, Format fmt, std::ostream& out,
                std::ostream& err) {
    if (fmt == Format::Dot) {
        out << to_dot(w);
        return kSuccess;
    }
    Json report{{"semiring", Json::parse(descriptor_json(w.semiring().descriptor()).dump())},
                {"states", w.state_count()},
                {"actions", w.actions()},
                {"transitions", w.transition_count()},
                {"dropped_zero_weights", dropped}};
    Json terminal = Json::array();
    for (StateId x = 0; x < w.state_count(); ++x)
        if (w.is_terminal(x)) terminal.push_back(w.state_name(x));
    report["terminal"] = terminal;
    bool ok = true;
    if constexpr (is_real_semiring_v<S>) {
        auto fp = check_fully_probabilistic(w);
        auto re = check_reactive(w);
        report["fully_probabilistic"] = mass_json(w, fp);
        report["reactive"] = mass_json(w, re);
        if (o.require == "fully-probabilistic") ok = fp.all_ok();
        if (o.require == "reactive") ok = re.all_ok();
    } else if (!o.require.empty()) {
        err << "error: --require " << o.require << " needs the real semiring\n";
        return kValidationError;
    }
    if (fmt == Format::Plain) {
        out << "semiring " << w.semiring().descriptor().name << "\n"
            << "states " << w.state_count() << "\n"
            << "transitions " << w.transition_count() << "\n"
            << "dropped_zero_weights " << dropped << "\n";
        if (report.contains("fully_probabilistic"))
            out << "fully_probabilistic " << (report["fully_probabilistic"]["ok"].get<bool>() ? "yes" : "no") << "\n"
                << "reactive " << (report["reactive"]["ok"].get<bool>() ? "yes" : "no") << "\n";
    } else {
        out << report.dump(2) << "\n";
    }
    if (dropped > 0) err << "warning: dropped " << dropped << " zero-weight transition(s)\n";
    return ok ? kSuccess : kValidationError;
}

template <class S>
int do_minimize(const Wlts<S>& w, const Options& o, Format fmt, std::ostream& out, std::ostream& err) {
    const Equivalence eq = parse_eq(o.equivalence);
    const auto result = refine(w, eq);
    const Partition& p = result.partition;

    Json doc{{"equivalence", std::string(to_string(eq))},
             {"semiring", Json::parse(descriptor_json(w.semiring().descriptor()).dump())},
             {"blocks", blocks_json(w, p)}};
    if (o.trace) doc["trace"] = trace_json(w, result.trace);

    std::optional<Wlts<S>> quotient;
    Json saturation = Json::array();
    std::string saturation_text;
    if (o.emit_quotient) {
        if (eq == Equivalence::Strong) {
            quotient = emit_quotient(w, p);
            doc["quotient"] = serialize(*quotient);
        } else {
            for (const auto& blk : p.blocks()) {
                auto t = saturation_for(w, std::span<const StateId>(blk), eq);
                saturation.push_back(saturation_json(w, t));
                saturation_text += saturation_plain(w, t);
            }
            doc["saturation"] = saturation;
        }
    }

    bool oracle_ok = true;
    if (o.oracle) {
        if (w.state_count() > oracle::max_enumeration_states) {
            doc["oracle"] = Json{{"checked", false}, {"reason", "too many states"}};
        } else {
            const auto mode = eq == Equivalence::Strong ? oracle::Mode::Strong
                              : eq == Equivalence::Weak ? oracle::Mode::Weak
                                                        : oracle::Mode::Delay;
            try {
                const auto reference = oracle::brute_coarsest_partition(w, mode);
                oracle_ok = reference == p;
                doc["oracle"] = Json{{"checked", true}, {"agrees", oracle_ok}, {"blocks", blocks_json(w, reference)}};
            } catch (const oracle::OracleTruncated& e) {
                doc["oracle"] = Json{{"checked", false}, {"reason", e.what()}};
            }
        }
        if (!oracle_ok) err << "error: engine and oracle partitions differ\n";
    }

    switch (fmt) {
        case Format::Structured: out << doc.dump(2) << "\n"; break;
        case Format::Plain:
            out << plain_blocks(w, p);
            if (!saturation_text.empty()) out << saturation_text;
            break;
        case Format::Dot:
            if (quotient)
                out << to_dot(*quotient, "quotient");
            else
                out << to_dot(w);
            break;
    }
    return oracle_ok ? kSuccess : kValidationError;
}

template <class S>
int do_check(const Wlts<S>& w, const Options& o, Format fmt, std::ostream& out) {
    const Equivalence eq = parse_eq(o.equivalence);
    const StateId x = resolve_state(w, o.left), y = resolve_state(w, o.right);
    const bool same = bisimilar(w, x, y, eq);
    if (fmt == Format::Plain)
        out << (same ? "bisimilar" : "not bisimilar") << "\n";
    else
        out << Json{{"left", o.left}, {"right", o.right}, {"equivalence", std::string(to_string(eq))}, {"bisimilar", same}}
                   .dump(2)
            << "\n";
    return same ? kSuccess : kNotBisimilar;
}

template <class S>
int do_saturate(const Wlts<S>& w, const Options& o, Format fmt, std::ostream& out) {
    std::vector<StateId> cls;
    std::stringstream ss(o.cls);
    for (std::string name; std::getline(ss, name, ',');)
        if (!name.empty()) cls.push_back(resolve_state(w, name));
    if (cls.empty()) throw SemanticError("--class names no states");
    std::ranges::sort(cls);
    cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
    SaturationMode mode;
    if (o.mode == "weak")
        mode = SaturationMode::Weak;
    else if (o.mode == "delay")
        mode = SaturationMode::Delay;
    else
        throw UsageError("unknown saturation mode '" + o.mode + "'");
    const auto table = saturate(w, std::span<const StateId>(cls), mode);
    if (fmt == Format::Plain) {
        out << saturation_plain(w, table);
    } else {
        Json doc = saturation_json(w, table);
        doc["mode"] = std::string(to_string(mode));
        out << doc.dump(2) << "\n";
    }
    return kSuccess;
}

int do_axioms(const Options& o, Format fmt, std::ostream& out) {
    if (!o.semiring) throw UsageError("axioms requires --semiring");
    AnySemiring s;
    try {
        s = make_semiring(*o.semiring, parse_params(o.params));
    } catch (const UnknownSemiring& e) {
        throw SemanticError(e.what());
    }
    return std::visit(
        [&](const auto& inst) {
            std::mt19937_64 rng(o.seed);
            const auto samples = sample_values(inst, rng);
            const auto report = check_axioms(inst, samples);
            if (fmt == Format::Plain) {
                for (const auto& r : report.results)
                    out << (r.passed ? "pass " : "FAIL ") << r.axiom << " (" << r.cases << " cases)"
                        << (r.passed ? "" : " " + r.counterexample) << "\n";
            } else {
                Json results = Json::array();
                for (const auto& r : report.results) {
                    Json j{{"axiom", r.axiom}, {"passed", r.passed}, {"cases", r.cases}};
                    if (!r.passed) j["counterexample"] = r.counterexample;
                    results.push_back(std::move(j));
                }
                out << Json{{"semiring", report.semiring}, {"samples", samples.size()}, {"all_passed", report.all_passed()},
                            {"results", results}}
                           .dump(2)
                    << "\n";
            }
            return report.all_passed() ? int{kSuccess} : int{kValidationError};
        },
        s);
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weighted bisimulation minimizer and equivalence checker", "wbisim"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--semiring", o.semiring, "Semiring: boolean|real|real-float|tropical|arctic|truncation|maxtimes");
    app.add_option("--param", o.params, "Semiring parameter, k=<int> or epsilon=<float>");
    app.add_option("--format", o.format, "Output format: structured|dot|plain");

    auto* validate = app.add_subcommand("validate", "Load a system and report its constraints");
    validate->add_option("input", o.input, "System document ('-' for stdin)")->required();
    validate->add_option("--require", o.require, "Fail unless fully-probabilistic|reactive holds");

    auto* minimize = app.add_subcommand("minimize", "Compute the bisimilarity partition");
    minimize->add_option("input", o.input, "System document ('-' for stdin)")->required();
    minimize->add_option("--equivalence", o.equivalence, "strong|weak|delay");
    minimize->add_flag("--emit-quotient", o.emit_quotient, "Emit the quotient system (strong) or saturation grids");
    minimize->add_flag("--oracle", o.oracle, "Cross-check against exhaustive enumeration (small inputs)");
    minimize->add_flag("--trace", o.trace, "Include the refinement log");

    auto* check = app.add_subcommand("check", "Decide whether two states are bisimilar");
    check->add_option("input", o.input, "System document ('-' for stdin)")->required();
    check->add_option("--left", o.left, "State name")->required();
    check->add_option("--right", o.right, "State name")->required();
    check->add_option("--equivalence", o.equivalence, "strong|weak|delay");

    auto* sat = app.add_subcommand("saturate", "Saturated weights into a class");
    sat->add_option("input", o.input, "System document ('-' for stdin)")->required();
    sat->add_option("--class", o.cls, "Comma-separated state names")->required();
    sat->add_option("--mode", o.mode, "weak|delay");

    auto* axioms = app.add_subcommand("axioms", "Check the semiring laws on structured samples");
    axioms->add_option("--seed", o.seed, "Seed for random samples");

    std::vector<std::string> argv_storage{"wbisim"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    }

    try {
        const Format fmt = parse_format(o.format);
        if (axioms->parsed()) return do_axioms(o, fmt, out);
        const auto loaded = load_input(o, in);
        return std::visit(
            [&](const auto& w) -> int {
                if (validate->parsed()) return do_validate(w, loaded.dropped_zero_weights, o, fmt, out, err);
                if (minimize->parsed()) return do_minimize(w, o, fmt, out, err);
                if (check->parsed()) return do_check(w, o, fmt, out);
                return do_saturate(w, o, fmt, out);
            },
            loaded.system);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kParseError;
    } catch (const SolverFailure& e) {
        err << "solver error: " << e.what() << "\n";
        return kSolverFailure;
    } catch (const SemanticError& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    } catch (const NotABisimulation& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    }
}

}  // namespace wbisim::cli
