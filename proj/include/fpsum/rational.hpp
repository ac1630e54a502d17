#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <string_view>

#include "fpsum/errors.hpp"

namespace fpsum {

/// Exact rational on int64 numerator/denominator.  Population supports and
/// lattice steps are kept rational so that lattice alignment and pmf value
/// labels stay exact; probabilities and moments are ordinary doubles.
class Rational {
  public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }
    constexpr Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design

    [[nodiscard]] std::int64_t num() const { return num_; }
    [[nodiscard]] std::int64_t den() const { return den_; }
    [[nodiscard]] double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    [[nodiscard]] bool is_zero() const { return num_ == 0; }
    [[nodiscard]] bool is_integer() const { return den_ == 1; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
        __int128 d = static_cast<__int128>(a.den_) * b.den_;
        return from_i128(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + Rational(-b.num_, b.den_); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_i128(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw Error("rational division by zero");
        return from_i128(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

    /// gcd(|a|, |b|) treating 0 as the identity; result is non-negative.
    static Rational gcd(const Rational& a, const Rational& b) {
        if (a.num_ == 0) return b.num_ >= 0 ? b : -b;
        if (b.num_ == 0) return a.num_ >= 0 ? a : -a;
        // gcd(p/q, r/s) = gcd(p*s, r*q) / (q*s)
        __int128 x = static_cast<__int128>(a.num_) * b.den_;
        __int128 y = static_cast<__int128>(b.num_) * a.den_;
        if (x < 0) x = -x;
        if (y < 0) y = -y;
        while (y != 0) {
            __int128 t = x % y;
            x = y;
            y = t;
        }
        return from_i128(x, static_cast<__int128>(a.den_) * b.den_);
    }

    /// Exact ratio of two commensurable rationals as a plain integer; throws
    /// if the ratio is not integral.
    static std::int64_t exact_quotient(const Rational& a, const Rational& b) {
        Rational r = a / b;
        if (!r.is_integer()) throw Error("rational quotient is not an integer");
        return r.num();
    }

    /// Parses a plain decimal literal such as "-12", "3.25", "1e-3", "2.5e2".
    static Rational parse(std::string_view text);

    /// Exact decimal rendering.  Works whenever the reduced denominator has
    /// only factors 2 and 5 (always the case for values built from decimal
    /// literals); otherwise falls back to "num/den".
    [[nodiscard]] std::string to_decimal_string() const;

  private:
    static Rational from_i128(__int128 n, __int128 d) {
        if (d == 0) throw Error("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr __int128 lim = INT64_MAX;
        if (n > lim || n < -lim || d > lim) throw RationalOverflow("rational out of int64 range");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    void normalize() {
        if (den_ == 0) throw Error("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline Rational Rational::parse(std::string_view text) {
    const std::string what = "bad decimal literal: '" + std::string(text) + "'";
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';

    __int128 mant = 0;
    int frac_digits = 0;
    bool any_digit = false, seen_dot = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c >= '0' && c <= '9') {
            mant = mant * 10 + (c - '0');
            if (mant > static_cast<__int128>(INT64_MAX) * 1000000) throw RationalOverflow(what);
            if (seen_dot) ++frac_digits;
            any_digit = true;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (!any_digit) throw ParseError(what);

    int exp10 = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) eneg = text[i++] == '-';
        if (i >= text.size()) throw ParseError(what);
        int e = 0;
        for (; i < text.size(); ++i) {
            char c = text[i];
            if (c < '0' || c > '9') throw ParseError(what);
            e = e * 10 + (c - '0');
            if (e > 40) throw RationalOverflow(what);
        }
        exp10 = eneg ? -e : e;
    }
    if (i != text.size()) throw ParseError(what);

    int net = exp10 - frac_digits;
    __int128 num = neg ? -mant : mant;
    __int128 den = 1;
    while (net > 0) {
        num *= 10;
        if (num > static_cast<__int128>(INT64_MAX) || num < -static_cast<__int128>(INT64_MAX))
            throw RationalOverflow(what);
        --net;
    }
    while (net < 0) {
        den *= 10;
        if (den > static_cast<__int128>(INT64_MAX)) throw RationalOverflow(what);
        ++net;
    }
    return from_i128(num, den);
}

inline std::string Rational::to_decimal_string() const {
    if (den_ == 1) return std::to_string(num_);
    std::int64_t d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++twos;
    }
    while (d % 5 == 0) {
        d /= 5;
        ++fives;
    }
    if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);

    int digits = twos > fives ? twos : fives;
    __int128 scaled = num_;
    for (int k = 0; k < digits; ++k) scaled *= 10;
    scaled /= den_;
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string raw;
    if (scaled == 0) raw = "0";
    while (scaled > 0) {
        raw.insert(raw.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
        scaled /= 10;
    }
    while (static_cast<int>(raw.size()) <= digits) raw.insert(raw.begin(), '0');
    raw.insert(raw.size() - digits, ".");
    return (neg ? "-" : "") + raw;
}

}  // namespace fpsum
