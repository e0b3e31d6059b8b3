#pragma once

// Rationals extended with -inf and +inf, backed by GMP.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wbisim {

class ExtRational {
public:
    enum class Kind : std::uint8_t { NegInf, Finite, PosInf };

    ExtRational() = default;
    ExtRational(long v) : q_(v) {}
    ExtRational(long num, unsigned long den) : q_(num, den) {
        if (den == 0) throw std::domain_error("ExtRational: zero denominator");
        q_.canonicalize();
    }
    explicit ExtRational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    static ExtRational pos_inf() { return ExtRational(Kind::PosInf); }
    static ExtRational neg_inf() { return ExtRational(Kind::NegInf); }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    bool is_neg_inf() const { return kind_ == Kind::NegInf; }
    bool is_zero() const { return is_finite() && sgn(q_) == 0; }
    int sign() const {
        if (kind_ == Kind::PosInf) return 1;
        if (kind_ == Kind::NegInf) return -1;
        return sgn(q_);
    }

    // Only meaningful for finite values.
    const mpq_class& rational() const { return q_; }

    double to_double() const {
        if (kind_ == Kind::PosInf) return std::numeric_limits<double>::infinity();
        if (kind_ == Kind::NegInf) return -std::numeric_limits<double>::infinity();
        return q_.get_d();
    }

    friend bool operator==(const ExtRational& a, const ExtRational& b) {
        if (a.kind_ != b.kind_) return false;
        return !a.is_finite() || a.q_ == b.q_;
    }

    friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
        if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
        if (!a.is_finite()) return std::strong_ordering::equal;
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    // Sum with +inf absorbing; (+inf) + (-inf) is rejected.
    friend ExtRational operator+(const ExtRational& a, const ExtRational& b) {
        if (a.is_finite() && b.is_finite()) return ExtRational(mpq_class(a.q_ + b.q_));
        if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
            throw std::domain_error("ExtRational: inf - inf is undefined");
        return a.is_finite() ? b : a;
    }

    friend ExtRational operator-(const ExtRational& a) {
        if (a.is_pos_inf()) return neg_inf();
        if (a.is_neg_inf()) return pos_inf();
        return ExtRational(mpq_class(-a.q_));
    }

    friend ExtRational operator-(const ExtRational& a, const ExtRational& b) { return a + (-b); }

    // Product with the measure-theoretic convention inf * 0 = 0.
    friend ExtRational operator*(const ExtRational& a, const ExtRational& b) {
        if (a.is_finite() && b.is_finite()) return ExtRational(mpq_class(a.q_ * b.q_));
        int s = a.sign() * b.sign();
        if (s == 0) return ExtRational{};
        return s > 0 ? pos_inf() : neg_inf();
    }

    // Finite division; callers guard the infinite cases.
    friend ExtRational operator/(const ExtRational& a, const ExtRational& b) {
        if (!a.is_finite() || !b.is_finite() || b.is_zero())
            throw std::domain_error("ExtRational: division outside finite nonzero range");
        return ExtRational(mpq_class(a.q_ / b.q_));
    }

    // "p/q", "n", "inf", "+inf", "-inf". Returns nullopt on malformed input.
    static std::optional<ExtRational> parse(std::string_view text) {
        std::string s(text);
        if (s == "inf" || s == "+inf") return pos_inf();
        if (s == "-inf") return neg_inf();
        if (s.empty()) return std::nullopt;
        auto slash = s.find('/');
        auto valid_int = [](std::string_view part, bool allow_sign) {
            std::size_t i = 0;
            if (allow_sign && !part.empty() && (part[0] == '-' || part[0] == '+')) i = 1;
            if (i >= part.size()) return false;
            for (; i < part.size(); ++i)
                if (part[i] < '0' || part[i] > '9') return false;
            return true;
        };
        std::string num = s.substr(0, slash);
        std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
        if (!valid_int(num, true) || !valid_int(den, false)) return std::nullopt;
        if (num[0] == '+') num.erase(0, 1);
        mpz_class n(num, 10), d(den, 10);
        if (d == 0) return std::nullopt;
        return ExtRational(mpq_class(n, d));
    }

    std::string to_string() const {
        if (kind_ == Kind::PosInf) return "inf";
        if (kind_ == Kind::NegInf) return "-inf";
        return q_.get_str();
    }

private:
    explicit ExtRational(Kind k) : kind_(k) {}

    Kind kind_ = Kind::Finite;
    mpq_class q_{0};
};

inline std::ostream& operator<<(std::ostream& os, const ExtRational& v) { return os << v.to_string(); }

}  // namespace wbisim
