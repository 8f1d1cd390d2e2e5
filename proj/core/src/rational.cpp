#include "xcfb/rational.hpp"

#include <numeric>
#include <ostream>
#include <stdexcept>

#include "xcfb/errors.hpp"

namespace xcfb {
namespace {

using I128 = __int128;

std::int64_t narrow(I128 v) {
    if (v > INT64_MAX || v < INT64_MIN)
        throw DomainError("Rational: 64-bit overflow");
    return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    num_ = g ? num / g : num;
    den_ = g ? den / g : den;
}

Rational Rational::operator+(const Rational& o) const {
    const I128 n = I128(num_) * o.den_ + I128(o.num_) * den_;
    const I128 d = I128(den_) * o.den_;
    return Rational(narrow(n), narrow(d));
}

Rational Rational::operator-(const Rational& o) const {
    return *this + (-o);
}

Rational Rational::operator*(const Rational& o) const {
    // Cross-reduce before multiplying to keep intermediates small.
    const std::int64_t g1 = std::gcd(num_ < 0 ? -num_ : num_, o.den_);
    const std::int64_t g2 = std::gcd(o.num_ < 0 ? -o.num_ : o.num_, den_);
    const I128 n = I128(num_ / g1) * (o.num_ / g2);
    const I128 d = I128(den_ / g2) * (o.den_ / g1);
    return Rational(narrow(n), narrow(d));
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num_ == 0) throw DomainError("Rational: division by zero");
    return *this * Rational(o.den_, o.num_);
}

bool Rational::operator<(const Rational& o) const {
    return I128(num_) * o.den_ < I128(o.num_) * den_;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::harmonic(int k) {
    if (k < 1) throw DomainError("harmonic: k must be >= 1");
    Rational h(0);
    for (int i = 1; i <= k; ++i) h += Rational(1, i);
    return h;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
    return std::lcm(a, b);
}

}  // namespace xcfb
