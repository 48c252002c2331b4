#include "fairdiv/rat.hpp"

#include <ostream>

namespace fairdiv {

namespace {

BigInt big_gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }

}  // namespace

void Rat::normalize() {
    if (den_ == 0) throw DivisionByZero();
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    BigInt g = big_gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rat Rat::parse(std::string_view text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rat(BigInt(std::string(text)), BigInt(1));
        }
        BigInt num(std::string(text.substr(0, slash)));
        BigInt den(std::string(text.substr(slash + 1)));
        return Rat(std::move(num), std::move(den));
    } catch (const DivisionByZero&) {
        throw;
    } catch (const std::exception&) {
        throw Error("cannot parse rational: '" + std::string(text) + "'");
    }
}

Rat& Rat::operator+=(const Rat& o) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rat& Rat::operator-=(const Rat& o) {
    num_ = num_ * o.den_ - o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rat& Rat::operator*=(const Rat& o) {
    // Cross-reduce before multiplying to keep intermediates small.
    BigInt g1 = big_gcd(num_ < 0 ? BigInt(-num_) : num_, o.den_);
    BigInt g2 = big_gcd(o.num_ < 0 ? BigInt(-o.num_) : o.num_, den_);
    num_ = (num_ / g1) * (o.num_ / g2);
    den_ = (den_ / g2) * (o.den_ / g1);
    if (num_ == 0) den_ = 1;
    return *this;
}

Rat& Rat::operator/=(const Rat& o) {
    if (o.num_ == 0) throw DivisionByZero();
    BigInt onum = o.num_;
    BigInt oden = o.den_;
    if (onum < 0) {
        onum = -onum;
        oden = -oden;
    }
    BigInt g1 = big_gcd(num_ < 0 ? BigInt(-num_) : num_, onum);
    BigInt g2 = big_gcd(oden < 0 ? BigInt(-oden) : oden, den_);
    num_ = (num_ / g1) * (oden / g2);
    den_ = (den_ / g2) * (onum / g1);
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_ == 0) den_ = 1;
    return *this;
}

std::string Rat::str() const { return num_.str() + "/" + den_.str(); }

double Rat::to_double() const { return num_.convert_to<double>() / den_.convert_to<double>(); }

Rat Rat::pow(const Rat& base, unsigned exponent) {
    Rat result(1);
    Rat b = base;
    unsigned e = exponent;
    while (e > 0) {
        if (e & 1u) result *= b;
        b *= b;
        e >>= 1u;
    }
    return result;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace fairdiv
