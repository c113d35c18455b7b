#pragma once

// Dense univariate polynomials over Q, coefficient i multiplies t^i.

#include "dercalc/mpoly.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace dercalc {

using UPoly = std::vector<Rat>;

namespace upoly {

inline void trim(UPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}
inline int deg(const UPoly& p) { return static_cast<int>(p.size()) - 1; }
inline bool is_zero(const UPoly& p) { return p.empty(); }
inline const Rat& lc(const UPoly& p) { return p.back(); }

inline UPoly add(UPoly a, const UPoly& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    trim(a);
    return a;
}
inline UPoly scale(UPoly a, const Rat& s) {
    for (auto& c : a) c *= s;
    trim(a);
    return a;
}
inline UPoly sub(const UPoly& a, const UPoly& b) { return add(a, scale(b, Rat(-1))); }
inline UPoly mul(const UPoly& a, const UPoly& b) {
    if (a.empty() || b.empty()) return {};
    UPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero())
            for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}
inline UPoly pow(const UPoly& a, unsigned k) {
    UPoly r{Rat(1)};
    for (unsigned i = 0; i < k; ++i) r = mul(r, a);
    return r;
}
inline UPoly derivative(const UPoly& a) {
    if (a.size() <= 1) return {};
    UPoly r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * Rat(static_cast<long>(i));
    trim(r);
    return r;
}
inline std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.empty()) throw std::domain_error("upoly::divmod by zero");
    UPoly r = a, q;
    if (deg(a) >= deg(b)) q.assign(a.size() - b.size() + 1, Rat(0));
    Rat inv = lc(b).inverse();
    while (!r.empty() && deg(r) >= deg(b)) {
        size_t sh = r.size() - b.size();
        Rat c = lc(r) * inv;
        q[sh] = c;
        for (size_t i = 0; i < b.size(); ++i) r[sh + i] -= c * b[i];
        trim(r);
    }
    trim(q);
    return {q, r};
}
inline UPoly monic(UPoly a) {
    if (a.empty()) return a;
    return scale(std::move(a), lc(a).inverse());
}
inline UPoly gcd(UPoly a, UPoly b) {
    while (!b.empty()) {
        UPoly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(std::move(a));
}
inline Rat eval(const UPoly& p, const Rat& x) {
    Rat s(0);
    for (size_t i = p.size(); i-- > 0;) s = s * x + p[i];
    return s;
}
/// p(t + a)
inline UPoly shift(const UPoly& p, const Rat& a) {
    UPoly r;
    UPoly lin{a, Rat(1)};
    for (size_t i = p.size(); i-- > 0;) r = add(mul(r, lin), UPoly{p[i]});
    return r;
}

inline UPoly from_mpoly(const MPoly& p, size_t var) {
    UPoly r;
    for (const auto& [e, c] : p.terms()) {
        for (size_t i = 0; i < e.size(); ++i)
            if (i != var && e[i]) throw VariableMismatch("polynomial is not univariate in '" + p.vars()[var] + "'");
        if (r.size() <= e[var]) r.resize(e[var] + 1);
        r[e[var]] = c;
    }
    trim(r);
    return r;
}

inline MPoly to_mpoly(const UPoly& p, const RingPtr& ring, size_t var) {
    MPoly r(ring);
    for (size_t i = 0; i < p.size(); ++i) {
        Exponent e(ring->size(), 0);
        e[var] = static_cast<unsigned>(i);
        r.add_term(e, p[i]);
    }
    return r;
}

} // namespace upoly
} // namespace dercalc
