#pragma once

// Exact rationals on top of GMP. Always canonical: reduced, positive
// denominator, zero is 0/1.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dercalc {

using Integer = mpz_class;

class Rat {
public:
    Rat() = default;
    Rat(long v) : q_(v) {}                        // NOLINT(google-explicit-constructor)
    Rat(int v) : q_(static_cast<long>(v)) {}      // NOLINT(google-explicit-constructor)
    Rat(const Integer& v) : q_(v) {}              // NOLINT(google-explicit-constructor)
    Rat(const Integer& num, const Integer& den) {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }
    Rat(long num, long den) : Rat(Integer(num), Integer(den)) {}

    static Rat from_string(std::string_view s) {
        Rat r;
        if (r.q_.set_str(std::string(s), 10) != 0) throw std::invalid_argument("Rat: bad literal '" + std::string(s) + "'");
        if (r.q_.get_den() == 0) throw std::domain_error("Rat: zero denominator");
        r.q_.canonicalize();
        return r;
    }

    Integer num() const { return q_.get_num(); }
    Integer den() const { return q_.get_den(); }
    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rat operator-() const { Rat r; r.q_ = -q_; return r; }
    Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
    Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
    Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw std::domain_error("Rat: division by zero");
        q_ /= o.q_;
        return *this;
    }
    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    Rat abs() const { Rat r; r.q_ = ::abs(q_); return r; }
    Rat inverse() const { return Rat(1) / *this; }
    Rat pow(unsigned e) const {
        Rat r(1), b(*this);
        while (e) {
            if (e & 1u) r *= b;
            b *= b;
            e >>= 1u;
        }
        return r;
    }

    /// "p/q" or "p" when the denominator is 1.
    std::string str() const { return q_.get_str(10); }

    const mpq_class& raw() const { return q_; }

private:
    mpq_class q_{0};
};

inline std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

inline Integer igcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer ilcm(const Integer& a, const Integer& b) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

} // namespace dercalc

template <>
struct std::hash<dercalc::Rat> {
    size_t operator()(const dercalc::Rat& r) const noexcept { return std::hash<std::string>{}(r.str()); }
};
