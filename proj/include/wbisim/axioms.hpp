#pragma once

// Exhaustive axiom checking of a semiring instance over a finite sample set.

#include "wbisim/semiring.hpp"

#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace wbisim {

struct AxiomResult {
    std::string axiom;
    bool passed = true;
    std::size_t cases = 0;
    std::string counterexample;
};

struct AxiomReport {
    std::string semiring;
    std::vector<AxiomResult> results;

    bool all_passed() const {
        return std::ranges::all_of(results, [](const AxiomResult& r) { return r.passed; });
    }
    const AxiomResult* find(std::string_view axiom) const {
        for (const auto& r : results)
            if (r.axiom == axiom) return &r;
        return nullptr;
    }
};

namespace detail {

template <class S>
std::string show(const S& s, const value_t<S>& v) {
    if constexpr (LiteralSemiring<S>) {
        return s.format(v);
    } else {
        std::ostringstream os;
        os << v;
        return os.str();
    }
}

template <class S>
class AxiomRecorder {
public:
    AxiomRecorder(const S& s, std::string name) : s_(s), result_{std::move(name)} {}

    template <class... V>
    void check(bool ok, const V&... witnesses) {
        ++result_.cases;
        if (ok || !result_.passed) return;
        result_.passed = false;
        std::string w;
        ((w += (w.empty() ? "" : ", ") + show(s_, witnesses)), ...);
        result_.counterexample = "(" + w + ")";
    }
    AxiomResult take() { return std::move(result_); }

private:
    const S& s_;
    AxiomResult result_;
};

template <Semiring S, class Samples>
AxiomReport check_axioms_over(const S& s, const Samples& samples) {
    if (samples.empty()) throw std::invalid_argument("check_axioms: empty sample set");
    using detail::AxiomRecorder;
    const auto eq = [&](const value_t<S>& a, const value_t<S>& b) { return s.equal(a, b); };
    const auto zero = s.zero();
    const auto one = s.one();

    AxiomRecorder<S> add_assoc(s, "add-associative"), add_comm(s, "add-commutative"),
        add_ident(s, "add-identity"), mul_assoc(s, "mul-associative"), mul_ident(s, "mul-identity"),
        left_dist(s, "left-distributive"), right_dist(s, "right-distributive"),
        annihil(s, "zero-annihilates"), star_fix(s, "star-fixpoint"), star_least(s, "star-least"),
        bottom(s, "zero-bottom"), refl(s, "preorder-reflexive"), trans(s, "preorder-transitive"),
        add_mono(s, "add-monotone"), mul_mono(s, "mul-monotone");

    for (const auto& a : samples) {
        add_ident.check(eq(s.add(a, zero), a) && eq(s.add(zero, a), a), a);
        mul_ident.check(eq(s.mul(a, one), a) && eq(s.mul(one, a), a), a);
        annihil.check(eq(s.mul(a, zero), zero) && eq(s.mul(zero, a), zero), a);
        const auto st = s.star(a);
        star_fix.check(eq(st, s.add(one, s.mul(a, st))), a, st);
        bottom.check(s.natural_leq(zero, a), a);
        refl.check(s.natural_leq(a, a), a);
        for (const auto& b : samples) {
            add_comm.check(eq(s.add(a, b), s.add(b, a)), a, b);
            // any sampled solution b of b = 1 + a*b must sit above star(a)
            if (eq(b, s.add(one, s.mul(a, b)))) star_least.check(s.natural_leq(st, b), a, b);
            for (const auto& c : samples) {
                add_assoc.check(eq(s.add(s.add(a, b), c), s.add(a, s.add(b, c))), a, b, c);
                mul_assoc.check(eq(s.mul(s.mul(a, b), c), s.mul(a, s.mul(b, c))), a, b, c);
                left_dist.check(eq(s.mul(a, s.add(b, c)), s.add(s.mul(a, b), s.mul(a, c))), a, b, c);
                right_dist.check(eq(s.mul(s.add(a, b), c), s.add(s.mul(a, c), s.mul(b, c))), a, b, c);
                if (s.natural_leq(a, b) && s.natural_leq(b, c)) trans.check(s.natural_leq(a, c), a, b, c);
                if (s.natural_leq(a, b)) {
                    add_mono.check(s.natural_leq(s.add(a, c), s.add(b, c)), a, b, c);
                    mul_mono.check(s.natural_leq(s.mul(a, c), s.mul(b, c)) &&
                                       s.natural_leq(s.mul(c, a), s.mul(c, b)),
                                   a, b, c);
                }
            }
        }
    }

    AxiomReport report{s.descriptor().name, {}};
    for (auto* r : {&add_assoc, &add_comm, &add_ident, &mul_assoc, &mul_ident, &left_dist, &right_dist,
                    &annihil, &star_fix, &star_least, &bottom, &refl, &trans, &add_mono, &mul_mono})
        report.results.push_back(r->take());
    return report;
}

}  // namespace detail

// Checks every semiring law over all sample pairs/triples. Failures are
// report entries carrying the first counterexample found.
template <Semiring S>
AxiomReport check_axioms(const S& s, std::span<const value_t<S>> samples) {
    return detail::check_axioms_over(s, samples);
}

// std::vector<bool> has no contiguous storage, hence a separate overload.
template <Semiring S>
AxiomReport check_axioms(const S& s, const std::vector<value_t<S>>& samples) {
    return detail::check_axioms_over(s, samples);
}

// ---------------------------------------------------------------------------
// Structured sample sets: units, bounds/infinities, and seeded random elements.

inline std::vector<bool> sample_values(const BooleanSemiring&, std::mt19937_64&, std::size_t = 0) {
    return {false, true};
}

inline std::vector<ExtRational> sample_values(const RealSemiring&, std::mt19937_64& rng,
                                              std::size_t randoms = 8) {
    std::vector<ExtRational> v{ExtRational{}, ExtRational{1}, ExtRational::pos_inf(), ExtRational{1, 2},
                               ExtRational{2}};
    std::uniform_int_distribution<long> num(0, 30), den(1, 12);
    for (std::size_t i = 0; i < randoms; ++i) v.emplace_back(num(rng), static_cast<unsigned long>(den(rng)));
    return v;
}

inline std::vector<double> sample_values(const RealFloatSemiring& s, std::mt19937_64& rng,
                                         std::size_t randoms = 8) {
    std::vector<double> v{0.0, 1.0, s.inf, 0.5, 2.0};
    std::uniform_int_distribution<int> q(0, 32);
    for (std::size_t i = 0; i < randoms; ++i) v.push_back(q(rng) / 16.0);
    return v;
}

inline std::vector<ExtRational> sample_values(const TropicalSemiring&, std::mt19937_64& rng,
                                              std::size_t randoms = 8) {
    std::vector<ExtRational> v{ExtRational::pos_inf(), ExtRational{}, ExtRational{1}, ExtRational{3, 2}};
    std::uniform_int_distribution<long> num(0, 40), den(1, 6);
    for (std::size_t i = 0; i < randoms; ++i) v.emplace_back(num(rng), static_cast<unsigned long>(den(rng)));
    return v;
}

inline std::vector<ExtRational> sample_values(const ArcticSemiring&, std::mt19937_64& rng,
                                              std::size_t randoms = 8) {
    std::vector<ExtRational> v{ExtRational::neg_inf(), ExtRational::pos_inf(), ExtRational{},
                               ExtRational{-3}, ExtRational{5, 2}};
    std::uniform_int_distribution<long> num(-20, 20), den(1, 6);
    for (std::size_t i = 0; i < randoms; ++i) v.emplace_back(num(rng), static_cast<unsigned long>(den(rng)));
    return v;
}

inline std::vector<std::uint32_t> sample_values(const TruncationSemiring& s, std::mt19937_64&,
                                                std::size_t = 0) {
    std::vector<std::uint32_t> v;
    for (std::uint32_t i = 0; i <= s.k; ++i) v.push_back(i);
    return v;
}

inline std::vector<ExtRational> sample_values(const MaxTimesSemiring&, std::mt19937_64& rng,
                                              std::size_t randoms = 8) {
    std::vector<ExtRational> v{ExtRational{}, ExtRational{1}, ExtRational{1, 2}};
    std::uniform_int_distribution<long> den(1, 12);
    for (std::size_t i = 0; i < randoms; ++i) {
        long d = den(rng);
        v.emplace_back(std::uniform_int_distribution<long>(0, d)(rng), static_cast<unsigned long>(d));
    }
    return v;
}

}  // namespace wbisim
