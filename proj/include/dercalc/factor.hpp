#pragma once

// Factorization over Q: univariate polynomials via squarefree decomposition,
// distinct/equal-degree splitting modulo a small prime, Hensel lifting and
// subset recombination; homogeneous bivariate polynomials by dehomogenizing.

#include "dercalc/mpoly.hpp"
#include "dercalc/upoly.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dercalc {

struct Factorization {
    Rat unit{1};
    std::vector<std::pair<MPoly, unsigned>> factors;

    MPoly expand(const RingPtr& ring) const {
        MPoly r = MPoly::constant(ring, unit);
        for (const auto& [p, k] : factors) r *= p.pow(k);
        return r;
    }
};

namespace detail {

// ---- integer polynomials -------------------------------------------------

using ZPoly = std::vector<Integer>;

inline void ztrim(ZPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}
inline int zdeg(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }

inline ZPoly zmul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, Integer(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    ztrim(r);
    return r;
}

inline Integer zcontent(const ZPoly& p) {
    Integer g = 0;
    for (const auto& c : p) g = igcd(g, c);
    return g;
}

inline ZPoly zprimitive(ZPoly p) {
    Integer g = zcontent(p);
    if (g == 0) return p;
    if (p.back() < 0) g = -g;
    for (auto& c : p) c /= g;
    return p;
}

/// Exact quotient a / b over Z, or empty optional if b does not divide a.
inline std::optional<ZPoly> zdivide(const ZPoly& a, const ZPoly& b) {
    ZPoly r = a;
    if (zdeg(a) < zdeg(b)) {
        if (a.empty()) return ZPoly{};
        return std::nullopt;
    }
    ZPoly q(a.size() - b.size() + 1, Integer(0));
    while (!r.empty() && zdeg(r) >= zdeg(b)) {
        if (r.back() % b.back() != 0) return std::nullopt;
        Integer c = r.back() / b.back();
        size_t sh = r.size() - b.size();
        q[sh] = c;
        for (size_t i = 0; i < b.size(); ++i) r[sh + i] -= c * b[i];
        ztrim(r);
    }
    if (!r.empty()) return std::nullopt;
    ztrim(q);
    return q;
}

inline ZPoly to_zpoly_primitive(const UPoly& p) {
    Integer l = 1;
    for (const auto& c : p) l = ilcm(l, c.den());
    ZPoly z;
    for (const auto& c : p) z.push_back((c * Rat(l)).num());
    return zprimitive(z);
}

inline UPoly to_upoly(const ZPoly& z) {
    UPoly u;
    for (const auto& c : z) u.emplace_back(c);
    upoly::trim(u);
    return u;
}

// ---- polynomials modulo a small prime -------------------------------------

using ModPoly = std::vector<int64_t>;

inline int64_t mmod(int64_t a, int64_t p) {
    a %= p;
    return a < 0 ? a + p : a;
}
inline int64_t minv(int64_t a, int64_t p) {
    int64_t t = 0, nt = 1, r = p, nr = mmod(a, p);
    while (nr) {
        int64_t q = r / nr;
        t -= q * nt;
        std::swap(t, nt);
        r -= q * nr;
        std::swap(r, nr);
    }
    if (r != 1) throw std::domain_error("minv: not invertible");
    return mmod(t, p);
}
inline void mtrim(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}
inline int mdeg(const ModPoly& a) { return static_cast<int>(a.size()) - 1; }

inline ModPoly madd(ModPoly a, const ModPoly& b, int64_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + b[i]) % p;
    mtrim(a);
    return a;
}
inline ModPoly msub(ModPoly a, const ModPoly& b, int64_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = mmod(a[i] - b[i], p);
    mtrim(a);
    return a;
}
inline ModPoly mmul(const ModPoly& a, const ModPoly& b, int64_t p) {
    if (a.empty() || b.empty()) return {};
    ModPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    mtrim(r);
    return r;
}
inline std::pair<ModPoly, ModPoly> mdivmod(const ModPoly& a, const ModPoly& b, int64_t p) {
    if (b.empty()) throw std::domain_error("mdivmod by zero");
    ModPoly r = a, q;
    if (mdeg(a) >= mdeg(b)) q.assign(a.size() - b.size() + 1, 0);
    int64_t inv = minv(b.back(), p);
    while (!r.empty() && mdeg(r) >= mdeg(b)) {
        size_t sh = r.size() - b.size();
        int64_t c = r.back() * inv % p;
        q[sh] = c;
        for (size_t i = 0; i < b.size(); ++i) r[sh + i] = mmod(r[sh + i] - c * b[i], p);
        mtrim(r);
    }
    mtrim(q);
    return {q, r};
}
inline ModPoly mmonic(ModPoly a, int64_t p) {
    if (a.empty()) return a;
    int64_t inv = minv(a.back(), p);
    for (auto& c : a) c = c * inv % p;
    return a;
}
inline ModPoly mgcd_p(ModPoly a, ModPoly b, int64_t p) {
    while (!b.empty()) {
        ModPoly r = mdivmod(a, b, p).second;
        a = std::move(b);
        b = std::move(r);
    }
    return mmonic(std::move(a), p);
}
/// s, t with s*a + t*b = gcd(a, b) (monic).
inline std::pair<ModPoly, ModPoly> mxgcd(const ModPoly& a, const ModPoly& b, int64_t p) {
    ModPoly r0 = a, r1 = b, s0{1}, s1, t0, t1{1};
    while (!r1.empty()) {
        auto [q, r] = mdivmod(r0, r1, p);
        r0 = std::move(r1);
        r1 = std::move(r);
        ModPoly s2 = msub(s0, mmul(q, s1, p), p);
        ModPoly t2 = msub(t0, mmul(q, t1, p), p);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    int64_t inv = minv(r0.back(), p);
    for (auto& c : s0) c = c * inv % p;
    for (auto& c : t0) c = c * inv % p;
    mtrim(s0);
    mtrim(t0);
    return {s0, t0};
}
inline ModPoly mpowmod(ModPoly base, Integer e, const ModPoly& m, int64_t p) {
    ModPoly r{1};
    base = mdivmod(base, m, p).second;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mdivmod(mmul(r, base, p), m, p).second;
        e >>= 1;
        if (e > 0) base = mdivmod(mmul(base, base, p), m, p).second;
    }
    return r;
}
inline ModPoly mderivative(const ModPoly& a, int64_t p) {
    if (a.size() <= 1) return {};
    ModPoly r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * static_cast<int64_t>(i % p) % p;
    mtrim(r);
    return r;
}
inline ModPoly reduce_mod(const ZPoly& z, int64_t p) {
    ModPoly r;
    for (const auto& c : z) {
        Integer m;
        mpz_fdiv_r_ui(m.get_mpz_t(), c.get_mpz_t(), static_cast<unsigned long>(p));
        r.push_back(static_cast<int64_t>(m.get_si()));
    }
    mtrim(r);
    return r;
}

inline void equal_degree_split(const ModPoly& g, int d, int64_t p, std::mt19937_64& rng, std::vector<ModPoly>& out) {
    if (mdeg(g) == d) {
        out.push_back(g);
        return;
    }
    Integer e = 1;
    for (int i = 0; i < d; ++i) e *= static_cast<unsigned long>(p);
    e = (e - 1) / 2;
    std::uniform_int_distribution<int64_t> dist(0, p - 1);
    while (true) {
        ModPoly a(static_cast<size_t>(mdeg(g)));
        for (auto& c : a) c = dist(rng);
        mtrim(a);
        if (mdeg(a) < 1) continue;
        ModPoly b = msub(mpowmod(a, e, g, p), ModPoly{1}, p);
        ModPoly h = mgcd_p(b, g, p);
        if (mdeg(h) > 0 && mdeg(h) < mdeg(g)) {
            equal_degree_split(h, d, p, rng, out);
            equal_degree_split(mdivmod(g, h, p).first, d, p, rng, out);
            return;
        }
    }
}

/// Complete factorization of a monic squarefree polynomial mod an odd prime.
inline std::vector<ModPoly> factor_mod_p(ModPoly f, int64_t p) {
    std::vector<ModPoly> out;
    std::mt19937_64 rng(0x5eed + static_cast<uint64_t>(p));
    ModPoly x{0, 1};
    ModPoly h = x;
    int d = 0;
    while (mdeg(f) >= 2 * (d + 1)) {
        ++d;
        h = mpowmod(h, Integer(static_cast<unsigned long>(p)), f, p);
        ModPoly g = mgcd_p(msub(h, x, p), f, p);
        if (mdeg(g) > 0) {
            equal_degree_split(g, d, p, rng, out);
            f = mdivmod(f, g, p).first;
            h = mdivmod(h, f, p).second;
        }
    }
    if (mdeg(f) > 0) out.push_back(mmonic(f, p));
    return out;
}

// ---- arithmetic modulo p^k on integer polynomials --------------------------

inline Integer zmod(const Integer& a, const Integer& m) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}
inline ZPoly zreduce(ZPoly a, const Integer& m) {
    for (auto& c : a) c = zmod(c, m);
    ztrim(a);
    return a;
}
inline ZPoly zsymmetric(ZPoly a, const Integer& m) {
    Integer half = m / 2;
    for (auto& c : a) {
        c = zmod(c, m);
        if (c > half) c -= m;
    }
    ztrim(a);
    return a;
}
inline ZPoly zsub(ZPoly a, const ZPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Integer(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    ztrim(a);
    return a;
}
inline ZPoly zadd(ZPoly a, const ZPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Integer(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    ztrim(a);
    return a;
}
inline ZPoly from_mod(const ModPoly& a) {
    ZPoly z;
    for (auto c : a) z.emplace_back(static_cast<long>(c));
    return z;
}
inline ModPoly zto_mod(const ZPoly& z, int64_t p) { return reduce_mod(z, p); }

/// Lift F = g*h (mod p), g monic, lc(h) = lc(F), to F = G*H (mod p^k).
inline std::pair<ZPoly, ZPoly> hensel_lift(const ZPoly& F, ZPoly g, ZPoly h, int64_t p, unsigned k) {
    auto [s, t] = mxgcd(zto_mod(g, p), zto_mod(h, p), p);
    ModPoly gm = zto_mod(g, p);
    Integer q = static_cast<unsigned long>(p);
    for (unsigned j = 1; j < k; ++j) {
        Integer next = q * static_cast<unsigned long>(p);
        ZPoly err = zreduce(zsub(F, zmul(g, h)), next);
        for (auto& c : err) c /= q;
        ModPoly e = zto_mod(err, p);
        if (!e.empty()) {
            auto [quo, tau] = mdivmod(mmul(e, t, p), gm, p);
            ModPoly sigma = madd(mmul(e, s, p), mmul(quo, zto_mod(h, p), p), p);
            // τ h + σ g = e (mod p); g grows by q τ, h by q σ.
            ZPoly tz = from_mod(tau), sz = from_mod(sigma);
            for (auto& c : tz) c *= q;
            for (auto& c : sz) c *= q;
            g = zsymmetric(zadd(g, tz), next);
            h = zsymmetric(zadd(h, sz), next);
        }
        q = next;
    }
    return {g, h};
}

inline bool small_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Irreducible factors over Z of a primitive squarefree polynomial with
/// positive leading coefficient.
inline std::vector<ZPoly> factor_squarefree_z(const ZPoly& F0) {
    if (zdeg(F0) <= 1) return {F0};
    const int n = zdeg(F0);
    // Smallest prime >= 3 keeping the degree and squarefreeness.
    int64_t p = 3;
    for (;; ++p) {
        if (!small_prime(p)) continue;
        if (zmod(F0.back(), Integer(static_cast<unsigned long>(p))) == 0) continue;
        ModPoly fm = reduce_mod(F0, p);
        if (mdeg(mgcd_p(fm, mderivative(fm, p), p)) == 0) break;
    }
    std::vector<ModPoly> modf = factor_mod_p(mmonic(reduce_mod(F0, p), p), p);
    if (modf.size() == 1) return {F0};

    Integer maxc = 0;
    for (const auto& c : F0) maxc = std::max(maxc, Integer(abs(c)));
    Integer bound = maxc * (n + 1) * F0.back();
    bound <<= static_cast<unsigned>(n);
    bound *= 2;
    unsigned k = 1;
    Integer pk = static_cast<unsigned long>(p);
    while (pk <= bound) {
        pk *= static_cast<unsigned long>(p);
        ++k;
    }

    // Sequential two-factor Hensel lifting.
    std::vector<ZPoly> lifted;
    ZPoly G = F0;
    for (size_t i = 0; i + 1 < modf.size(); ++i) {
        ModPoly rest{1};
        for (size_t j = i + 1; j < modf.size(); ++j) rest = mmul(rest, modf[j], p);
        ModPoly lcm_ = {mmod(static_cast<int64_t>(zmod(G.back(), Integer(static_cast<unsigned long>(p))).get_si()), p)};
        ZPoly h = from_mod(mmul(rest, lcm_, p));
        h.back() = G.back();
        auto [gl, hl] = hensel_lift(G, from_mod(modf[i]), h, p, k);
        lifted.push_back(gl);
        G = hl;
    }
    {
        Integer inv;
        mpz_invert(inv.get_mpz_t(), G.back().get_mpz_t(), pk.get_mpz_t());
        for (auto& c : G) c = zmod(c * inv, pk);
        lifted.push_back(G);
    }

    // Subset recombination.
    std::vector<ZPoly> result;
    std::vector<size_t> remaining(lifted.size());
    for (size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
    ZPoly F = F0;
    size_t s = 1;
    while (2 * s <= remaining.size()) {
        bool found = false;
        std::vector<bool> pick(remaining.size(), false);
        std::fill(pick.begin(), pick.begin() + static_cast<long>(s), true);
        do {
            ZPoly cand{F.back()};
            for (size_t i = 0; i < remaining.size(); ++i)
                if (pick[i]) cand = zreduce(zmul(cand, lifted[remaining[i]]), pk);
            cand = zprimitive(zsymmetric(cand, pk));
            if (auto q = zdivide(F, cand)) {
                result.push_back(cand);
                F = zprimitive(*q);
                std::vector<size_t> keep;
                for (size_t i = 0; i < remaining.size(); ++i)
                    if (!pick[i]) keep.push_back(remaining[i]);
                remaining = std::move(keep);
                found = true;
                break;
            }
        } while (std::prev_permutation(pick.begin(), pick.end()));
        if (!found) ++s;
    }
    if (zdeg(F) > 0) result.push_back(F);
    return result;
}

inline bool mpoly_less(const MPoly& a, const MPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    auto ia = a.terms().begin(), ib = b.terms().begin();
    for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
        if (ia->first != ib->first) return GrlexGreater{}(ia->first, ib->first);
        if (ia->second != ib->second) return ia->second < ib->second;
    }
    return a.size() < b.size();
}

inline void sort_factors(Factorization& f) {
    std::sort(f.factors.begin(), f.factors.end(), [](const auto& a, const auto& b) { return mpoly_less(a.first, b.first); });
}

inline size_t univariate_var(const MPoly& f) {
    auto vs = f.support_vars();
    if (vs.size() > 1) throw std::invalid_argument("expected a univariate polynomial");
    return vs.empty() ? 0 : vs.front();
}

} // namespace detail

/// Yun's squarefree decomposition: f = unit * prod g_i^i, each g_i
/// squarefree, pairwise coprime, primitive over Z with positive leading
/// coefficient.
inline Factorization squarefree_decompose(const MPoly& f) {
    if (f.is_zero()) throw std::domain_error("squarefree_decompose: zero polynomial");
    Factorization out;
    if (f.is_constant()) {
        out.unit = f.constant_term();
        return out;
    }
    size_t var = detail::univariate_var(f);
    UPoly a = upoly::from_mpoly(f, var);
    UPoly da = upoly::derivative(a);
    UPoly g = upoly::gcd(a, da);
    UPoly b = upoly::divmod(a, g).first;
    UPoly c = upoly::divmod(da, g).first;
    UPoly d = upoly::sub(c, upoly::derivative(b));
    unsigned i = 1;
    while (upoly::deg(b) > 0) {
        UPoly gi = upoly::gcd(b, d);
        b = upoly::divmod(b, gi).first;
        c = upoly::divmod(d, gi).first;
        d = upoly::sub(c, upoly::derivative(b));
        if (upoly::deg(gi) > 0) {
            UPoly z = detail::to_upoly(detail::to_zpoly_primitive(gi));
            out.factors.emplace_back(upoly::to_mpoly(z, f.ring(), var), i);
        }
        ++i;
    }
    MPoly rest = out.expand(f.ring());
    out.unit = f.leading_coeff() / rest.leading_coeff();
    return out;
}

/// Complete factorization into irreducibles over Q.
inline Factorization factor_univar_q(const MPoly& f) {
    if (f.is_zero()) throw std::domain_error("factor_univar_q: zero polynomial");
    Factorization sq = squarefree_decompose(f);
    Factorization out;
    size_t var = detail::univariate_var(f);
    for (const auto& [g, mult] : sq.factors) {
        detail::ZPoly z = detail::to_zpoly_primitive(upoly::from_mpoly(g, var));
        for (const auto& piece : detail::factor_squarefree_z(z))
            out.factors.emplace_back(upoly::to_mpoly(detail::to_upoly(piece), f.ring(), var), mult);
    }
    MPoly rest = out.expand(f.ring());
    out.unit = f.leading_coeff() / rest.leading_coeff();
    detail::sort_factors(out);
    return out;
}

/// Rational roots with multiplicity, ascending.
inline std::vector<std::pair<Rat, unsigned>> rational_roots(const MPoly& f) {
    std::vector<std::pair<Rat, unsigned>> out;
    if (f.is_constant()) return out;
    size_t var = detail::univariate_var(f);
    Factorization fz = factor_univar_q(f);
    for (const auto& [p, k] : fz.factors) {
        UPoly u = upoly::from_mpoly(p, var);
        if (upoly::deg(u) == 1) out.emplace_back(-u[0] / u[1], k);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Factor a homogeneous polynomial in exactly two variables over Q.
inline Factorization factor_homog2(const MPoly& F) {
    if (F.nvars() != 2) throw VariableMismatch("factor_homog2: expected a ring with two variables");
    if (F.is_zero()) throw std::domain_error("factor_homog2: zero polynomial");
    if (!F.is_homogeneous()) throw std::invalid_argument("factor_homog2: polynomial is not homogeneous");
    const RingPtr& ring = F.ring();
    unsigned a = ~0u, b = ~0u;
    for (const auto& [e, c] : F.terms()) {
        a = std::min(a, e[0]);
        b = std::min(b, e[1]);
    }
    Factorization out;
    if (a) out.factors.emplace_back(MPoly::variable(ring, 0), a);
    if (b) out.factors.emplace_back(MPoly::variable(ring, 1), b);
    UPoly u;
    for (const auto& [e, c] : F.terms()) {
        unsigned i = e[0] - a;
        if (u.size() <= i) u.resize(i + 1);
        u[i] = c;
    }
    upoly::trim(u);
    auto uring = make_ring({"t"});
    if (upoly::deg(u) > 0) {
        Factorization fu = factor_univar_q(upoly::to_mpoly(u, uring, 0));
        for (const auto& [p, k] : fu.factors) {
            UPoly pu = upoly::from_mpoly(p, 0);
            const unsigned deg = static_cast<unsigned>(upoly::deg(pu));
            MPoly h(ring);
            for (unsigned i = 0; i <= deg; ++i) h.add_term(Exponent{i, deg - i}, pu[i]);
            if (h.leading_coeff().sign() < 0) h = -h;
            out.factors.emplace_back(h, k);
        }
    }
    out.unit = F.leading_coeff() / out.expand(ring).leading_coeff();
    detail::sort_factors(out);
    return out;
}

} // namespace dercalc
