#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "fairdiv/errors.hpp"

namespace fairdiv {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational scalar. Invariants: always reduced (gcd(|num|, den) == 1)
// and den > 0. All arithmetic and comparisons are exact.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(int v) : num_(v), den_(1) {}                // NOLINT(google-explicit-constructor)
    Rat(long long v) : num_(v), den_(1) {}          // NOLINT(google-explicit-constructor)
    Rat(BigInt v) : num_(std::move(v)), den_(1) {}  // NOLINT(google-explicit-constructor)
    Rat(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }
    Rat(long long num, long long den) : num_(num), den_(den) { normalize(); }

    // Parses "p/q" or "p" (q > 0 after normalization of sign).
    static Rat parse(std::string_view text);

    const BigInt& numerator() const { return num_; }
    const BigInt& denominator() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }

    Rat operator-() const {
        Rat r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    Rat& operator+=(const Rat& o);
    Rat& operator-=(const Rat& o);
    Rat& operator*=(const Rat& o);
    Rat& operator/=(const Rat& o);

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        // Exact cross-multiplication compare; denominators are positive.
        BigInt lhs = a.num_ * b.den_;
        BigInt rhs = b.num_ * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    Rat abs() const { return num_ < 0 ? -*this : *this; }

    // "p/q" with q > 0, e.g. "3/1", "-1/2".
    std::string str() const;

    double to_double() const;

    static Rat pow(const Rat& base, unsigned exponent);

private:
    void normalize();

    BigInt num_;
    BigInt den_;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace fairdiv
