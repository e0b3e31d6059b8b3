#pragma once

// Least solutions of x = M x + b over a star semiring, and the saturation
// tables built from them.
//
// Saturated weights for a class C are the least solutions of
//
//   x_tau = 1                               for x in C
//   x_tau = sum_y rho(x -tau-> y) y_tau     for x not in C
//   x_a   = sum_y rho(x -a-> y) y_tau + sum_y rho(x -tau-> y) y_a      (weak)
//   x_a   = sum_y rho(x -tau-> y) y_a + sum_{y in C} rho(x -a-> y)     (delay)
//
// The tau system is solved first; each action system then reuses its
// solution as a constant.

#include "wbisim/semiring.hpp"
#include "wbisim/wlts.hpp"

#include <cmath>
#include <future>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wbisim {

// Encodes F(x) = M x + b; M is stored as sparse rows sorted by column.
template <Semiring S>
struct LinearSystem {
    using value_type = value_t<S>;
    using Row = std::vector<std::pair<std::size_t, value_type>>;

    S semiring;
    std::vector<Row> rows;
    std::vector<value_type> b;

    std::size_t size() const { return b.size(); }

    value_type coefficient(std::size_t i, std::size_t j) const {
        for (const auto& [col, v] : rows.at(i))
            if (col == j) return v;
        return semiring.zero();
    }

    // F(x) = M x + b.
    std::vector<value_type> apply(const std::vector<value_type>& x) const {
        std::vector<value_type> out(b.begin(), b.end());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (const auto& [j, m] : rows[i]) out[i] = semiring.add(out[i], semiring.mul(m, x[j]));
        return out;
    }
};

class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SaturationMode { Weak, Delay };

inline std::string_view to_string(SaturationMode m) { return m == SaturationMode::Weak ? "weak" : "delay"; }

// ---------------------------------------------------------------------------
// System construction

template <Semiring S>
LinearSystem<S> build_tau_system(const Wlts<S>& w, std::span<const char> in_class) {
    const S& s = w.semiring();
    const std::size_t n = w.state_count();
    LinearSystem<S> sys{s, std::vector<typename LinearSystem<S>::Row>(n), std::vector<value_t<S>>(n, s.zero())};
    for (StateId x = 0; x < n; ++x) {
        if (in_class[x]) {
            sys.b[x] = s.one();
            continue;
        }
        for (const auto& e : w.successors(x, Label::tau())) sys.rows[x].emplace_back(e.target, e.weight);
    }
    return sys;
}

template <Semiring S>
LinearSystem<S> build_tau_system(const Wlts<S>& w, std::span<const StateId> cls) {
    return build_tau_system(w, block_mask(w.state_count(), cls));
}

namespace detail {
template <Semiring S>
LinearSystem<S> tau_adjacency_system(const Wlts<S>& w) {
    const S& s = w.semiring();
    const std::size_t n = w.state_count();
    LinearSystem<S> sys{s, std::vector<typename LinearSystem<S>::Row>(n), std::vector<value_t<S>>(n, s.zero())};
    for (StateId x = 0; x < n; ++x)
        for (const auto& e : w.successors(x, Label::tau())) sys.rows[x].emplace_back(e.target, e.weight);
    return sys;
}
}  // namespace detail

// Weak action system; rows for states inside the class take part as well.
template <Semiring S>
LinearSystem<S> build_action_system(const Wlts<S>& w, Label action, const std::vector<value_t<S>>& w_tau) {
    if (action.is_tau()) throw std::invalid_argument("build_action_system: label must be an action");
    const S& s = w.semiring();
    auto sys = detail::tau_adjacency_system(w);
    for (StateId x = 0; x < w.state_count(); ++x)
        for (const auto& e : w.successors(x, action)) sys.b[x] = s.add(sys.b[x], s.mul(e.weight, w_tau[e.target]));
    return sys;
}

template <Semiring S>
LinearSystem<S> build_delay_system(const Wlts<S>& w, std::span<const char> in_class, Label action) {
    if (action.is_tau()) throw std::invalid_argument("build_delay_system: label must be an action");
    auto sys = detail::tau_adjacency_system(w);
    for (StateId x = 0; x < w.state_count(); ++x) sys.b[x] = w.class_weight(x, action, in_class);
    return sys;
}

// ---------------------------------------------------------------------------
// Star elimination

// Dense Gauss-Jordan elimination computing M* b.
template <Semiring S>
std::vector<value_t<S>> solve_least_dense(const LinearSystem<S>& sys) {
    const S& s = sys.semiring;
    const std::size_t n = sys.size();
    std::vector<std::vector<value_t<S>>> m(n, std::vector<value_t<S>>(n, s.zero()));
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [j, v] : sys.rows[i]) m[i][j] = s.add(m[i][j], v);
    std::vector<value_t<S>> b = sys.b;
    std::vector<char> nonzero(n, 0);
    std::vector<std::size_t> support;
    support.reserve(n);

    for (std::size_t k = 0; k < n; ++k) {
        // x_k = star(m_kk) (sum_{j != k} m_kj x_j + b_k)
        const auto loop = s.star(m[k][k]);
        m[k][k] = s.zero();
        support.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (s.is_zero(m[k][j])) continue;
            m[k][j] = s.mul(loop, m[k][j]);
            if (!s.is_zero(m[k][j])) support.push_back(j);
        }
        b[k] = s.mul(loop, b[k]);
        const bool b_live = !s.is_zero(b[k]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || s.is_zero(m[i][k])) continue;
            const value_t<S> f = m[i][k];
            m[i][k] = s.zero();
            for (std::size_t j : support) m[i][j] = s.add(m[i][j], s.mul(f, m[k][j]));
            if (b_live) b[i] = s.add(b[i], s.mul(f, b[k]));
        }
    }
    return b;
}

// Sparse-row variant of solve_least_dense; same pivot order and updates.
template <Semiring S>
std::vector<value_t<S>> solve_least_sparse(const LinearSystem<S>& sys) {
    using Row = typename LinearSystem<S>::Row;
    const S& s = sys.semiring;
    const std::size_t n = sys.size();
    std::vector<Row> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        Row r = sys.rows[i];
        std::ranges::sort(r, {}, &Row::value_type::first);
        for (auto& [j, v] : r) {
            if (!rows[i].empty() && rows[i].back().first == j)
                rows[i].back().second = s.add(rows[i].back().second, v);
            else if (!s.is_zero(v))
                rows[i].emplace_back(j, v);
        }
    }
    std::vector<value_t<S>> b = sys.b;
    // rows with a nonzero entry in each column
    std::vector<std::vector<std::size_t>> column(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [j, v] : rows[i]) column[j].push_back(i);

    Row merged;
    for (std::size_t k = 0; k < n; ++k) {
        Row& pivot = rows[k];
        auto self = std::ranges::lower_bound(pivot, k, {}, &Row::value_type::first);
        value_t<S> loop = s.one();
        if (self != pivot.end() && self->first == k) {
            loop = s.star(self->second);
            pivot.erase(self);
        }
        if (!s.equal(loop, s.one()) || !s.exact) {
            for (auto& [j, v] : pivot) v = s.mul(loop, v);
            std::erase_if(pivot, [&](const auto& e) { return s.is_zero(e.second); });
        }
        b[k] = s.mul(loop, b[k]);
        const bool b_live = !s.is_zero(b[k]);

        auto users = std::move(column[k]);
        column[k].clear();
        for (std::size_t i : users) {
            if (i == k) continue;
            Row& row = rows[i];
            auto at = std::ranges::lower_bound(row, k, {}, &Row::value_type::first);
            if (at == row.end() || at->first != k) continue;
            const auto f = at->second;
            row.erase(at);
            merged.clear();
            auto a = row.begin();
            auto p = pivot.begin();
            while (a != row.end() || p != pivot.end()) {
                if (p == pivot.end() || (a != row.end() && a->first < p->first)) {
                    merged.push_back(std::move(*a++));
                } else if (a == row.end() || p->first < a->first) {
                    auto v = s.mul(f, p->second);
                    if (!s.is_zero(v)) {
                        column[p->first].push_back(i);
                        merged.emplace_back(p->first, std::move(v));
                    }
                    ++p;
                } else {
                    merged.emplace_back(a->first, s.add(a->second, s.mul(f, p->second)));
                    ++a;
                    ++p;
                }
            }
            row.swap(merged);
            if (b_live) b[i] = s.add(b[i], s.mul(f, b[k]));
        }
    }
    return b;
}

inline constexpr std::size_t dense_solver_threshold = 64;

template <Semiring S>
struct SolveResult {
    std::vector<value_t<S>> values;
    bool converged = true;
    std::string diagnostic;
};

namespace detail {
// Relative residual check for float carriers; exact carriers need none.
template <Semiring S>
bool residual_ok(const LinearSystem<S>& sys, const std::vector<value_t<S>>& x) {
    if constexpr (std::is_same_v<value_t<S>, double>) {
        const auto fx = sys.apply(x);
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (std::isnan(x[i]) || std::isnan(fx[i])) return false;
            if (std::isinf(x[i]) || std::isinf(fx[i])) {
                if (x[i] != fx[i]) return false;
                continue;
            }
            double scale = std::max({1.0, std::fabs(x[i]), std::fabs(fx[i])});
            if (std::fabs(x[i] - fx[i]) > sys.semiring.descriptor().epsilon.value_or(1e-9) * scale) return false;
        }
        return true;
    } else {
        return true;
    }
}
}  // namespace detail

// Least fixpoint of F(x) = M x + b, computed as M* b by star elimination in
// ascending pivot order. Float carriers are residual-checked.
template <Semiring S>
SolveResult<S> solve_least(const LinearSystem<S>& sys) {
    SolveResult<S> out;
    out.values = sys.size() < dense_solver_threshold ? solve_least_dense(sys) : solve_least_sparse(sys);
    if (!detail::residual_ok(sys, out.values)) {
        out.converged = false;
        out.diagnostic = "elimination result fails the fixpoint residual check";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Kleene iteration

inline bool within_tolerance(bool a, bool b, bool) { return a == b; }
inline bool within_tolerance(std::uint32_t a, std::uint32_t b, std::uint32_t) { return a == b; }
inline bool within_tolerance(double a, double b, double tol) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::fabs(a - b) <= tol;
}
inline bool within_tolerance(const ExtRational& a, const ExtRational& b, const ExtRational& tol) {
    if (a == b) return true;
    if (!a.is_finite() || !b.is_finite()) return false;
    const auto d = a - b;
    return (d.sign() < 0 ? -d : d) <= tol;
}

template <Semiring S>
struct KleeneOptions {
    std::optional<std::size_t> max_iters;  // default 10 n^2 (at least 10)
    std::optional<value_t<S>> tol;         // none: stop on semiring equality
    bool record_chain = false;
};

template <Semiring S>
struct KleeneResult {
    std::vector<value_t<S>> values;
    std::size_t iterations = 0;  // index of the first iterate found to be stable
    bool converged = false;
    std::vector<std::vector<value_t<S>>> chain;  // x_0, x_1, ... when recorded
};

// Ascending chain x_0 = 0, x_{k+1} = F(x_k); stops once two successive
// iterates agree (exactly, or within tol when given).
template <Semiring S>
KleeneResult<S> kleene_iterate(const LinearSystem<S>& sys, const KleeneOptions<S>& opt = {}) {
    const S& s = sys.semiring;
    const std::size_t n = sys.size();
    const std::size_t max_iters = opt.max_iters.value_or(std::max<std::size_t>(10, 10 * n * n));
    KleeneResult<S> r;
    r.values.assign(n, s.zero());
    if (opt.record_chain) r.chain.push_back(r.values);
    for (std::size_t k = 0; k < max_iters; ++k) {
        auto next = sys.apply(r.values);
        bool same = true;
        for (std::size_t i = 0; i < n && same; ++i) {
            if (opt.tol)
                same = within_tolerance(r.values[i], next[i], *opt.tol);
            else
                same = s.equal(r.values[i], next[i]);
        }
        r.values = std::move(next);
        if (opt.record_chain) r.chain.push_back(r.values);
        if (same) {
            r.converged = true;
            r.iterations = k;
            break;
        }
    }
    if (!r.converged) r.iterations = max_iters;
    return r;
}

// ---------------------------------------------------------------------------
// Saturation

// Saturated weights into one class: w_tau[x] = rho(x, tau*, C) and, per
// action a, w_act[a][x] = rho(x, tau* a tau*, C) (weak) or rho(x, tau* a, C)
// (delay). In strong tables these are single-step class weights.
template <Semiring S>
struct SaturationTable {
    std::vector<StateId> cls;
    std::vector<value_t<S>> w_tau;
    std::vector<std::vector<value_t<S>>> w_act;

    const std::vector<value_t<S>>& weights(Label l) const {
        return l.is_tau() ? w_tau : w_act.at(l.action_index());
    }
};

struct SaturationOptions {
    bool parallel = false;
};

namespace detail {
template <Semiring S>
std::vector<value_t<S>> solve_or_throw(const LinearSystem<S>& sys, const std::string& what) {
    auto r = solve_least(sys);
    if (!r.converged) throw SolverFailure(what + ": " + r.diagnostic);
    return std::move(r.values);
}
}  // namespace detail

// Solves the tau system once and one system per action (|A|+1 solves).
template <Semiring S>
SaturationTable<S> saturate(const Wlts<S>& w, std::span<const StateId> cls, SaturationMode mode,
                            const SaturationOptions& opt = {}) {
    if (cls.empty()) throw std::invalid_argument("saturate: empty class");
    const auto mask = block_mask(w.state_count(), cls);
    SaturationTable<S> t;
    t.cls.assign(cls.begin(), cls.end());
    t.w_tau = detail::solve_or_throw(build_tau_system(w, std::span<const char>(mask)), "tau system");

    auto solve_action = [&](std::size_t a) {
        const Label l = Label::action(a);
        auto sys = mode == SaturationMode::Weak
                       ? build_action_system(w, l, t.w_tau)
                       : build_delay_system(w, std::span<const char>(mask), l);
        return detail::solve_or_throw(sys, "action system '" + w.actions()[a] + "'");
    };

    t.w_act.resize(w.action_count());
    if (opt.parallel && w.action_count() > 1) {
        std::vector<std::future<std::vector<value_t<S>>>> jobs;
        for (std::size_t a = 0; a < w.action_count(); ++a) jobs.push_back(std::async(std::launch::async, solve_action, a));
        for (std::size_t a = 0; a < jobs.size(); ++a) t.w_act[a] = jobs[a].get();
    } else {
        for (std::size_t a = 0; a < w.action_count(); ++a) t.w_act[a] = solve_action(a);
    }
    return t;
}

// Single-step class weights, the trivial saturation used for strong mode.
template <Semiring S>
SaturationTable<S> single_step_table(const Wlts<S>& w, std::span<const StateId> cls) {
    const auto mask = block_mask(w.state_count(), cls);
    SaturationTable<S> t;
    t.cls.assign(cls.begin(), cls.end());
    t.w_tau.resize(w.state_count());
    t.w_act.assign(w.action_count(), std::vector<value_t<S>>(w.state_count()));
    for (StateId x = 0; x < w.state_count(); ++x) {
        t.w_tau[x] = w.class_weight(x, Label::tau(), std::span<const char>(mask));
        for (std::size_t a = 0; a < w.action_count(); ++a)
            t.w_act[a][x] = w.class_weight(x, Label::action(a), std::span<const char>(mask));
    }
    return t;
}

}  // namespace wbisim
