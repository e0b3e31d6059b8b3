#pragma once

// The algebraic contract every computation in wbisim is generic over.
//
// A semiring type S exposes its carrier as S::value_type together with the
// operations zero/one/add/mul/star, the natural preorder, an equality policy
// and a strict total order used for sort-based block splitting. Instances are
// small value types; parameterised ones (truncation threshold, float
// tolerance) carry their parameters as members.
//
// All shipped instances are commutative, omega-complete and star-closed, so
// star(a) is the least solution of s = 1 + a*s.

#include "wbisim/ext_rational.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <ranges>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace wbisim {

enum class CarrierMode { ExactRational, Float, Boolean, BoundedInteger };

inline std::string_view to_string(CarrierMode m) {
    switch (m) {
        case CarrierMode::ExactRational: return "exact-rational";
        case CarrierMode::Float: return "float";
        case CarrierMode::Boolean: return "boolean";
        case CarrierMode::BoundedInteger: return "bounded-integer";
    }
    return "?";
}

struct SemiringDescriptor {
    std::string name;
    CarrierMode carrier_mode = CarrierMode::ExactRational;
    std::optional<unsigned> k;
    std::optional<double> epsilon;

    bool operator==(const SemiringDescriptor&) const = default;
};

template <class S>
concept Semiring = std::copy_constructible<S> && requires(const S& s, const typename S::value_type& a,
                                                            const typename S::value_type& b) {
    typename S::value_type;
    { s.zero() } -> std::convertible_to<typename S::value_type>;
    { s.one() } -> std::convertible_to<typename S::value_type>;
    { s.add(a, b) } -> std::convertible_to<typename S::value_type>;
    { s.mul(a, b) } -> std::convertible_to<typename S::value_type>;
    { s.star(a) } -> std::convertible_to<typename S::value_type>;
    { s.natural_leq(a, b) } -> std::same_as<bool>;
    { s.equal(a, b) } -> std::same_as<bool>;
    { s.is_zero(a) } -> std::same_as<bool>;
    { s.descriptor() } -> std::same_as<SemiringDescriptor>;
};

// Semirings whose carrier has a strict total order compatible with equal().
template <class S>
concept OrderedSemiring = Semiring<S> && requires(const S& s, const typename S::value_type& a) {
    { s.less(a, a) } -> std::same_as<bool>;
};

// Semirings with a textual literal syntax for documents.
template <class S>
concept LiteralSemiring = Semiring<S> && requires(const S& s, const typename S::value_type& a,
                                                  std::string_view text) {
    { s.parse(text) } -> std::same_as<std::optional<typename S::value_type>>;
    { s.format(a) } -> std::same_as<std::string>;
};

template <Semiring S>
using value_t = typename S::value_type;

template <Semiring S>
bool values_equal(const S& s, const value_t<S>& a, const value_t<S>& b) {
    return s.equal(a, b);
}

template <Semiring S, std::ranges::input_range R>
value_t<S> sum(const S& s, const R& values) {
    value_t<S> acc = s.zero();
    for (const auto& v : values) acc = s.add(acc, v);
    return acc;
}

// ---------------------------------------------------------------------------
// Instances

// ({false,true}, or, false, and, true)
struct BooleanSemiring {
    using value_type = bool;
    static constexpr bool idempotent = true;
    static constexpr bool exact = true;

    bool zero() const { return false; }
    bool one() const { return true; }
    bool add(bool a, bool b) const { return a || b; }
    bool mul(bool a, bool b) const { return a && b; }
    bool star(bool) const { return true; }
    bool natural_leq(bool a, bool b) const { return !a || b; }
    bool equal(bool a, bool b) const { return a == b; }
    bool less(bool a, bool b) const { return !a && b; }
    bool is_zero(bool a) const { return !a; }

    std::optional<bool> parse(std::string_view t) const {
        if (t == "true" || t == "1") return true;
        if (t == "false" || t == "0") return false;
        return std::nullopt;
    }
    std::string format(bool a) const { return a ? "true" : "false"; }

    SemiringDescriptor descriptor() const { return {"boolean", CarrierMode::Boolean, {}, {}}; }
};

// Non-negative extended rationals (Q+ with +inf), exact.
struct RealSemiring {
    using value_type = ExtRational;
    static constexpr bool idempotent = false;
    static constexpr bool exact = true;

    ExtRational zero() const { return ExtRational{}; }
    ExtRational one() const { return ExtRational{1}; }
    ExtRational add(const ExtRational& a, const ExtRational& b) const { return a + b; }
    ExtRational mul(const ExtRational& a, const ExtRational& b) const { return a * b; }
    // sum_n a^n = 1/(1-a) below 1, diverges otherwise
    ExtRational star(const ExtRational& a) const {
        if (!a.is_finite() || a >= ExtRational{1}) return ExtRational::pos_inf();
        return ExtRational{1} / (ExtRational{1} - a);
    }
    bool natural_leq(const ExtRational& a, const ExtRational& b) const { return a <= b; }
    bool equal(const ExtRational& a, const ExtRational& b) const { return a == b; }
    bool less(const ExtRational& a, const ExtRational& b) const { return a < b; }
    bool is_zero(const ExtRational& a) const { return a.is_zero(); }

    std::optional<ExtRational> parse(std::string_view t) const {
        auto v = ExtRational::parse(t);
        if (!v || v->sign() < 0) return std::nullopt;
        return v;
    }
    std::string format(const ExtRational& a) const { return a.to_string(); }

    SemiringDescriptor descriptor() const { return {"real", CarrierMode::ExactRational, {}, {}}; }
};

// Non-negative extended reals in double precision; equality within epsilon.
struct RealFloatSemiring {
    using value_type = double;
    static constexpr bool idempotent = false;
    static constexpr bool exact = false;
    static constexpr double inf = std::numeric_limits<double>::infinity();

    double epsilon = 1e-9;

    double zero() const { return 0.0; }
    double one() const { return 1.0; }
    double add(double a, double b) const { return a + b; }
    double mul(double a, double b) const {
        if (a == 0.0 || b == 0.0) return 0.0;
        return a * b;
    }
    double star(double a) const { return a < 1.0 ? 1.0 / (1.0 - a) : inf; }
    bool equal(double a, double b) const {
        if (std::isinf(a) || std::isinf(b)) return a == b;
        return std::fabs(a - b) <= epsilon;
    }
    bool natural_leq(double a, double b) const { return a <= b || equal(a, b); }
    bool less(double a, double b) const { return a < b; }
    bool is_zero(double a) const { return a == 0.0; }

    std::optional<double> parse(std::string_view t) const {
        if (t == "inf" || t == "+inf") return inf;
        if (auto slash = t.find('/'); slash != std::string_view::npos) {
            auto q = ExtRational::parse(t);
            if (!q || q->sign() < 0 || !q->is_finite()) return std::nullopt;
            return q->to_double();
        }
        double v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || ptr != t.data() + t.size() || !(v >= 0.0)) return std::nullopt;
        return v;
    }
    std::string format(double a) const {
        if (std::isinf(a)) return "inf";
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, a);
        return std::string(buf, ptr);
    }

    SemiringDescriptor descriptor() const { return {"real-float", CarrierMode::Float, {}, epsilon}; }
};

// (Q+ with +inf, min, +inf, +, 0). Natural order is reversed <=.
struct TropicalSemiring {
    using value_type = ExtRational;
    static constexpr bool idempotent = true;
    static constexpr bool exact = true;

    ExtRational zero() const { return ExtRational::pos_inf(); }
    ExtRational one() const { return ExtRational{}; }
    ExtRational add(const ExtRational& a, const ExtRational& b) const { return std::min(a, b); }
    ExtRational mul(const ExtRational& a, const ExtRational& b) const { return a + b; }
    ExtRational star(const ExtRational&) const { return one(); }
    bool natural_leq(const ExtRational& a, const ExtRational& b) const { return b <= a; }
    bool equal(const ExtRational& a, const ExtRational& b) const { return a == b; }
    bool less(const ExtRational& a, const ExtRational& b) const { return a < b; }
    bool is_zero(const ExtRational& a) const { return a.is_pos_inf(); }

    std::optional<ExtRational> parse(std::string_view t) const {
        auto v = ExtRational::parse(t);
        if (!v || v->sign() < 0) return std::nullopt;
        return v;
    }
    std::string format(const ExtRational& a) const { return a.to_string(); }

    SemiringDescriptor descriptor() const { return {"tropical", CarrierMode::ExactRational, {}, {}}; }
};

// (Q with -inf and +inf, max, -inf, +, 0); -inf annihilates +inf.
struct ArcticSemiring {
    using value_type = ExtRational;
    static constexpr bool idempotent = true;
    static constexpr bool exact = true;

    ExtRational zero() const { return ExtRational::neg_inf(); }
    ExtRational one() const { return ExtRational{}; }
    ExtRational add(const ExtRational& a, const ExtRational& b) const { return std::max(a, b); }
    ExtRational mul(const ExtRational& a, const ExtRational& b) const {
        if (a.is_neg_inf() || b.is_neg_inf()) return ExtRational::neg_inf();
        return a + b;
    }
    ExtRational star(const ExtRational& a) const {
        return a.sign() <= 0 ? one() : ExtRational::pos_inf();
    }
    bool natural_leq(const ExtRational& a, const ExtRational& b) const { return a <= b; }
    bool equal(const ExtRational& a, const ExtRational& b) const { return a == b; }
    bool less(const ExtRational& a, const ExtRational& b) const { return a < b; }
    bool is_zero(const ExtRational& a) const { return a.is_neg_inf(); }

    std::optional<ExtRational> parse(std::string_view t) const { return ExtRational::parse(t); }
    std::string format(const ExtRational& a) const { return a.to_string(); }

    SemiringDescriptor descriptor() const { return {"arctic", CarrierMode::ExactRational, {}, {}}; }
};

// Truncated tropical semiring ({0..k}, min, k, min(a+b, k), 0).
struct TruncationSemiring {
    using value_type = std::uint32_t;
    static constexpr bool idempotent = true;
    static constexpr bool exact = true;

    std::uint32_t k = 10;

    std::uint32_t zero() const { return k; }
    std::uint32_t one() const { return 0; }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return std::min(a, b); }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return static_cast<std::uint32_t>(std::min<std::uint64_t>(std::uint64_t{a} + b, k));
    }
    std::uint32_t star(std::uint32_t) const { return 0; }
    bool natural_leq(std::uint32_t a, std::uint32_t b) const { return b <= a; }
    bool equal(std::uint32_t a, std::uint32_t b) const { return a == b; }
    bool less(std::uint32_t a, std::uint32_t b) const { return a < b; }
    bool is_zero(std::uint32_t a) const { return a == k; }

    std::optional<std::uint32_t> parse(std::string_view t) const {
        std::uint32_t v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || ptr != t.data() + t.size() || v > k) return std::nullopt;
        return v;
    }
    std::string format(std::uint32_t a) const { return std::to_string(a); }

    SemiringDescriptor descriptor() const { return {"truncation", CarrierMode::BoundedInteger, k, {}}; }
};

// Maximum-likelihood semiring ([0,1], max, 0, *, 1) over exact rationals.
struct MaxTimesSemiring {
    using value_type = ExtRational;
    static constexpr bool idempotent = true;
    static constexpr bool exact = true;

    ExtRational zero() const { return ExtRational{}; }
    ExtRational one() const { return ExtRational{1}; }
    ExtRational add(const ExtRational& a, const ExtRational& b) const { return std::max(a, b); }
    ExtRational mul(const ExtRational& a, const ExtRational& b) const { return a * b; }
    ExtRational star(const ExtRational&) const { return one(); }
    bool natural_leq(const ExtRational& a, const ExtRational& b) const { return a <= b; }
    bool equal(const ExtRational& a, const ExtRational& b) const { return a == b; }
    bool less(const ExtRational& a, const ExtRational& b) const { return a < b; }
    bool is_zero(const ExtRational& a) const { return a.is_zero(); }

    std::optional<ExtRational> parse(std::string_view t) const {
        auto v = ExtRational::parse(t);
        if (!v || v->sign() < 0 || *v > ExtRational{1}) return std::nullopt;
        return v;
    }
    std::string format(const ExtRational& a) const { return a.to_string(); }

    SemiringDescriptor descriptor() const { return {"maxtimes", CarrierMode::ExactRational, {}, {}}; }
};

template <class S>
inline constexpr bool is_real_semiring_v =
    std::is_same_v<S, RealSemiring> || std::is_same_v<S, RealFloatSemiring>;

// ---------------------------------------------------------------------------
// Runtime selection

using AnySemiring = std::variant<BooleanSemiring, RealSemiring, RealFloatSemiring, TropicalSemiring,
                                 ArcticSemiring, TruncationSemiring, MaxTimesSemiring>;

struct SemiringParams {
    std::optional<long long> k;
    std::optional<double> epsilon;
};

class UnknownSemiring : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline AnySemiring make_semiring(std::string_view name, const SemiringParams& params = {}) {
    if (name == "boolean") return BooleanSemiring{};
    if (name == "real") return RealSemiring{};
    if (name == "real-float") {
        RealFloatSemiring s;
        if (params.epsilon) {
            if (!(*params.epsilon >= 0.0)) throw UnknownSemiring("epsilon must be non-negative");
            s.epsilon = *params.epsilon;
        }
        return s;
    }
    if (name == "tropical") return TropicalSemiring{};
    if (name == "arctic") return ArcticSemiring{};
    if (name == "truncation") {
        TruncationSemiring s;
        if (params.k) {
            if (*params.k <= 0 || *params.k > std::numeric_limits<std::uint32_t>::max() / 2)
                throw UnknownSemiring("truncation threshold k must be a positive integer");
            s.k = static_cast<std::uint32_t>(*params.k);
        }
        return s;
    }
    if (name == "maxtimes") return MaxTimesSemiring{};
    throw UnknownSemiring("unknown semiring '" + std::string(name) + "'");
}

inline SemiringDescriptor descriptor_of(const AnySemiring& s) {
    return std::visit([](const auto& inst) { return inst.descriptor(); }, s);
}

}  // namespace wbisim
