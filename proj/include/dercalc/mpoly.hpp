#pragma once

// Sparse multivariate polynomials over Q with a fixed graded-lexicographic
// term order (total degree first, then lexicographic with variable 0 the
// most significant).

#include "dercalc/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dercalc {

using Exponent = std::vector<unsigned>;

inline unsigned total_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0u); }

inline bool divides(const Exponent& a, const Exponent& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Exponent exp_add(const Exponent& a, const Exponent& b) {
    Exponent r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Exponent exp_sub(const Exponent& a, const Exponent& b) {
    Exponent r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Exponent exp_lcm(const Exponent& a, const Exponent& b) {
    Exponent r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

/// Strict "a > b" in graded-lex.
struct GrlexGreater {
    bool operator()(const Exponent& a, const Exponent& b) const {
        unsigned da = total_degree(a), db = total_degree(b);
        if (da != db) return da > db;
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    }
};

class VariableMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Ordered variable list shared by all polynomials of one ring.
struct Ring {
    std::vector<std::string> names;

    size_t size() const { return names.size(); }
    std::optional<size_t> index_of(const std::string& n) const {
        auto it = std::find(names.begin(), names.end(), n);
        if (it == names.end()) return std::nullopt;
        return static_cast<size_t>(it - names.begin());
    }
};

using RingPtr = std::shared_ptr<const Ring>;

inline RingPtr make_ring(std::vector<std::string> names) {
    for (size_t i = 0; i < names.size(); ++i)
        for (size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j]) throw VariableMismatch("duplicate variable '" + names[i] + "'");
    return std::make_shared<const Ring>(Ring{std::move(names)});
}

inline bool same_ring(const RingPtr& a, const RingPtr& b) { return a == b || a->names == b->names; }

class MPoly {
public:
    using TermMap = std::map<Exponent, Rat, GrlexGreater>;

    MPoly() : ring_(make_ring({})) {}
    explicit MPoly(RingPtr ring) : ring_(std::move(ring)) {}

    static MPoly constant(RingPtr ring, const Rat& c) {
        MPoly p(std::move(ring));
        if (!c.is_zero()) p.terms_.emplace(Exponent(p.nvars(), 0), c);
        return p;
    }
    static MPoly variable(RingPtr ring, size_t i) {
        Exponent e(ring->size(), 0);
        if (i >= e.size()) throw VariableMismatch("variable index out of range");
        e[i] = 1;
        return monomial(std::move(ring), std::move(e), Rat(1));
    }
    static MPoly variable(RingPtr ring, const std::string& name) {
        auto idx = ring->index_of(name);
        if (!idx) throw VariableMismatch("unknown variable '" + name + "'");
        return variable(std::move(ring), *idx);
    }
    static MPoly monomial(RingPtr ring, Exponent e, const Rat& c) {
        if (e.size() != ring->size()) throw VariableMismatch("exponent length does not match ring");
        MPoly p(std::move(ring));
        if (!c.is_zero()) p.terms_.emplace(std::move(e), c);
        return p;
    }

    const RingPtr& ring() const { return ring_; }
    const std::vector<std::string>& vars() const { return ring_->names; }
    size_t nvars() const { return ring_->size(); }
    const TermMap& terms() const { return terms_; }
    size_t size() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0); }
    Rat constant_term() const { return coeff(Exponent(nvars(), 0)); }

    /// Total degree; -1 for the zero polynomial.
    int degree() const { return terms_.empty() ? -1 : static_cast<int>(total_degree(terms_.begin()->first)); }
    int degree_in(size_t var) const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
        return d;
    }
    bool involves(size_t var) const { return degree_in(var) > 0; }
    std::vector<size_t> support_vars() const {
        std::vector<size_t> out;
        for (size_t i = 0; i < nvars(); ++i)
            if (involves(i)) out.push_back(i);
        return out;
    }
    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        unsigned d = total_degree(terms_.begin()->first);
        return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) { return total_degree(t.first) == d; });
    }

    Rat coeff(const Exponent& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rat(0) : it->second;
    }
    const Exponent& leading_exponent() const {
        if (terms_.empty()) throw std::domain_error("leading term of zero polynomial");
        return terms_.begin()->first;
    }
    const Rat& leading_coeff() const {
        if (terms_.empty()) throw std::domain_error("leading term of zero polynomial");
        return terms_.begin()->second;
    }

    void add_term(const Exponent& e, const Rat& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    MPoly operator-() const {
        MPoly r(*this);
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }
    MPoly& operator+=(const MPoly& o) {
        check_ring(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    MPoly& operator-=(const MPoly& o) {
        check_ring(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    MPoly& operator*=(const Rat& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
    friend MPoly operator*(MPoly a, const Rat& s) { return a *= s; }
    friend MPoly operator*(const Rat& s, MPoly a) { return a *= s; }
    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        a.check_ring(b);
        MPoly r(a.ring_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term(exp_add(ea, eb), ca * cb);
        return r;
    }
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

    /// Multiply by c * x^e.
    MPoly mul_term(const Exponent& e, const Rat& c) const {
        MPoly r(ring_);
        if (c.is_zero()) return r;
        for (const auto& [ea, ca] : terms_) r.terms_.emplace_hint(r.terms_.end(), exp_add(ea, e), ca * c);
        return r;
    }

    MPoly pow(unsigned k) const {
        MPoly r = constant(ring_, 1), b = *this;
        while (k) {
            if (k & 1u) r *= b;
            k >>= 1u;
            if (k) b *= b;
        }
        return r;
    }

    friend bool operator==(const MPoly& a, const MPoly& b) { return same_ring(a.ring_, b.ring_) && a.terms_ == b.terms_; }

    MPoly derivative(size_t var) const {
        MPoly r(ring_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            Exponent e2 = e;
            --e2[var];
            r.add_term(e2, c * Rat(static_cast<long>(e[var])));
        }
        return r;
    }

    /// Sum of terms of total degree exactly k.
    MPoly homogeneous_part(unsigned k) const {
        MPoly r(ring_);
        for (const auto& [e, c] : terms_)
            if (total_degree(e) == k) r.terms_.emplace(e, c);
        return r;
    }

    MPoly substitute(size_t var, const Rat& value) const {
        MPoly r(ring_);
        for (const auto& [e, c] : terms_) {
            Exponent e2 = e;
            e2[var] = 0;
            r.add_term(e2, c * value.pow(e[var]));
        }
        return r;
    }

    /// Replace variable `var` by the polynomial `value` (same ring).
    MPoly substitute(size_t var, const MPoly& value) const {
        check_ring(value);
        std::map<unsigned, MPoly> by_power;
        for (const auto& [e, c] : terms_) {
            Exponent e2 = e;
            e2[var] = 0;
            auto [it, _] = by_power.try_emplace(e[var], ring_);
            it->second.add_term(e2, c);
        }
        MPoly r(ring_), pw = constant(ring_, 1);
        unsigned cur = 0;
        for (auto& [k, coeffpoly] : by_power) {
            while (cur < k) {
                pw *= value;
                ++cur;
            }
            r += coeffpoly * pw;
        }
        return r;
    }

    Rat evaluate(const std::vector<Rat>& point) const {
        if (point.size() != nvars()) throw VariableMismatch("evaluation point has wrong arity");
        Rat s(0);
        for (const auto& [e, c] : terms_) {
            Rat t = c;
            for (size_t i = 0; i < e.size(); ++i)
                if (e[i]) t *= point[i].pow(e[i]);
            s += t;
        }
        return s;
    }

    /// Coefficients with respect to `var`: p = sum_k coeffs[k] * var^k.
    std::map<unsigned, MPoly> coefficients_in(size_t var) const {
        std::map<unsigned, MPoly> out;
        for (const auto& [e, c] : terms_) {
            Exponent e2 = e;
            e2[var] = 0;
            auto [it, _] = out.try_emplace(e[var], ring_);
            it->second.add_term(e2, c);
        }
        return out;
    }

    /// Re-express in another ring, matching variables by name. Every variable
    /// this polynomial actually uses must exist in `target`.
    MPoly embed(const RingPtr& target) const {
        if (same_ring(ring_, target)) {
            MPoly r(*this);
            r.ring_ = target;
            return r;
        }
        std::vector<std::optional<size_t>> map(nvars());
        for (size_t i = 0; i < nvars(); ++i) map[i] = target->index_of(vars()[i]);
        MPoly r(target);
        for (const auto& [e, c] : terms_) {
            Exponent e2(target->size(), 0);
            for (size_t i = 0; i < e.size(); ++i) {
                if (!e[i]) continue;
                if (!map[i]) throw VariableMismatch("variable '" + vars()[i] + "' not present in target ring");
                e2[*map[i]] = e[i];
            }
            r.terms_.emplace(std::move(e2), c);
        }
        return r;
    }

    MPoly monic() const {
        if (is_zero()) return *this;
        return *this * leading_coeff().inverse();
    }

    /// Integer content-free form with positive leading coefficient.
    MPoly primitive_integer() const {
        if (is_zero()) return *this;
        Integer l = 1, g = 0;
        for (const auto& [e, c] : terms_) l = ilcm(l, c.den());
        for (const auto& [e, c] : terms_) g = igcd(g, (c * Rat(l)).num());
        Rat s = Rat(l) / Rat(g);
        if (leading_coeff().sign() < 0) s = -s;
        return *this * s;
    }

    std::string to_string() const;

private:
    void check_ring(const MPoly& o) const {
        if (!same_ring(ring_, o.ring_)) throw VariableMismatch("polynomials live in different rings");
    }

    RingPtr ring_;
    TermMap terms_;
};

inline MPoly operator*(const MPoly& a, long s) { return a * Rat(s); }

inline std::string monomial_string(const std::vector<std::string>& names, const Exponent& e) {
    std::string s;
    for (size_t i = 0; i < e.size(); ++i) {
        if (!e[i]) continue;
        if (!s.empty()) s += '*';
        s += names[i];
        if (e[i] > 1) s += '^' + std::to_string(e[i]);
    }
    return s;
}

inline std::string MPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        std::string mono = monomial_string(vars(), e);
        Rat a = c.abs();
        std::string body;
        if (mono.empty()) body = a.str();
        else if (a.is_one()) body = mono;
        else body = a.str() + "*" + mono;
        if (first) out += (c.sign() < 0 ? "-" : "") + body;
        else out += (c.sign() < 0 ? " - " : " + ") + body;
        first = false;
    }
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const MPoly& p) { return os << p.to_string(); }

/// All exponent vectors in `nvars` variables of total degree exactly `d`,
/// descending graded-lex.
inline std::vector<Exponent> monomials_of_degree(size_t nvars, unsigned d) {
    std::vector<Exponent> out;
    if (nvars == 0) {
        if (d == 0) out.emplace_back();
        return out;
    }
    Exponent e(nvars, 0);
    // Recursive fill, first variable gets the largest share first.
    auto rec = [&](auto&& self, size_t i, unsigned left) -> void {
        if (i + 1 == nvars) {
            e[i] = left;
            out.push_back(e);
            return;
        }
        for (unsigned k = left + 1; k-- > 0;) {
            e[i] = k;
            self(self, i + 1, left - k);
        }
    };
    rec(rec, 0, d);
    return out;
}

/// All monomials of total degree <= d, ascending graded-lex.
inline std::vector<Exponent> monomials_upto(size_t nvars, unsigned d) {
    std::vector<Exponent> out;
    for (unsigned k = 0; k <= d; ++k) {
        auto layer = monomials_of_degree(nvars, k);
        out.insert(out.end(), layer.rbegin(), layer.rend());
    }
    return out;
}

/// Exact division: q with f = q*g, or nullopt if g does not divide f.
inline std::optional<MPoly> exact_divide(const MPoly& f, const MPoly& g) {
    if (g.is_zero()) throw std::domain_error("exact_divide: division by zero polynomial");
    if (!same_ring(f.ring(), g.ring())) throw VariableMismatch("exact_divide: ring mismatch");
    // Normalize g monic, divide, then restore the scale.
    const Rat lc = g.leading_coeff();
    MPoly gm = g * lc.inverse();
    const Exponent& lt = gm.leading_exponent();
    MPoly r = f, q(f.ring());
    while (!r.is_zero()) {
        const Exponent& e = r.leading_exponent();
        if (!divides(lt, e)) return std::nullopt;
        Exponent qe = exp_sub(e, lt);
        Rat c = r.leading_coeff();
        q.add_term(qe, c);
        r -= gm.mul_term(qe, c);
    }
    return q * lc.inverse();
}

// ---------------------------------------------------------------------------
// gcd: recursive content / primitive part, subresultant PRS in the main
// variable over the coefficient ring Q[other variables].

namespace detail {

inline MPoly from_coeffs(const std::map<unsigned, MPoly>& cs, size_t var, const RingPtr& ring) {
    MPoly r(ring);
    for (const auto& [k, c] : cs) {
        Exponent e(ring->size(), 0);
        e[var] = k;
        r += c.mul_term(e, Rat(1));
    }
    return r;
}

inline MPoly lead_in(const MPoly& p, size_t var) {
    auto cs = p.coefficients_in(var);
    return cs.rbegin()->second;
}

} // namespace detail

inline MPoly mgcd(const MPoly& f, const MPoly& g);

namespace detail {

/// gcd of all coefficients of p with respect to var.
inline MPoly content_in(const MPoly& p, size_t var) {
    MPoly c(p.ring());
    for (const auto& [k, coeff] : p.coefficients_in(var)) {
        c = c.is_zero() ? coeff.monic() : mgcd(c, coeff);
        if (c.is_constant()) return MPoly::constant(p.ring(), 1);
    }
    return c;
}

inline MPoly divide_or_throw(const MPoly& a, const MPoly& b) {
    auto q = exact_divide(a, b);
    if (!q) throw std::logic_error("mgcd: expected exact division failed");
    return *q;
}

/// Pseudo-remainder of a by b in var.
inline MPoly pseudo_remainder(const MPoly& a, const MPoly& b, size_t var) {
    int db = b.degree_in(var);
    MPoly lb = lead_in(b, var);
    MPoly r = a;
    int dr = r.degree_in(var);
    int extra = dr - db + 1;
    while (!r.is_zero() && dr >= db) {
        MPoly lr = lead_in(r, var);
        Exponent sh(r.nvars(), 0);
        sh[var] = static_cast<unsigned>(dr - db);
        r = r * lb - (lr * b).mul_term(sh, Rat(1));
        --extra;
        dr = r.degree_in(var);
    }
    if (extra > 0) r = r * lb.pow(static_cast<unsigned>(extra));
    return r;
}

/// gcd of primitive (in var) polynomials via the subresultant PRS.
inline MPoly subresultant_gcd(MPoly a, MPoly b, size_t var) {
    if (a.degree_in(var) < b.degree_in(var)) std::swap(a, b);
    MPoly g = MPoly::constant(a.ring(), 1), h = MPoly::constant(a.ring(), 1);
    while (!b.is_zero() && b.degree_in(var) > 0) {
        int delta = a.degree_in(var) - b.degree_in(var);
        MPoly r = pseudo_remainder(a, b, var);
        if (r.is_zero()) return b;
        MPoly denom = g * h.pow(static_cast<unsigned>(delta));
        a = b;
        b = divide_or_throw(r, denom);
        g = lead_in(a, var);
        if (delta == 0) {
            // h unchanged
        } else if (delta == 1) {
            h = g;
        } else {
            h = divide_or_throw(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
        }
    }
    if (b.is_zero()) return a;
    return MPoly::constant(a.ring(), 1); // b is a nonzero constant in var
}

} // namespace detail

/// Monic gcd over Q (graded-lex leading coefficient 1).
inline MPoly mgcd(const MPoly& f, const MPoly& g) {
    if (!same_ring(f.ring(), g.ring())) throw VariableMismatch("mgcd: ring mismatch");
    if (f.is_zero() && g.is_zero()) throw std::domain_error("mgcd: both arguments zero");
    if (f.is_zero()) return g.monic();
    if (g.is_zero()) return f.monic();
    if (f.is_constant() || g.is_constant()) return MPoly::constant(f.ring(), 1);
    std::vector<size_t> vars;
    for (size_t i = 0; i < f.nvars(); ++i)
        if (f.involves(i) || g.involves(i)) vars.push_back(i);
    size_t var = vars.back();
    if (!f.involves(var)) return mgcd(detail::content_in(g, var), f);
    if (!g.involves(var)) return mgcd(detail::content_in(f, var), g);
    MPoly cf = detail::content_in(f, var), cg = detail::content_in(g, var);
    MPoly pf = detail::divide_or_throw(f, cf), pg = detail::divide_or_throw(g, cg);
    MPoly content = mgcd(cf, cg);
    MPoly prim = detail::subresultant_gcd(pf, pg, var);
    if (prim.involves(var)) prim = detail::divide_or_throw(prim, detail::content_in(prim, var));
    else prim = MPoly::constant(f.ring(), 1);
    return (content * prim).monic();
}

} // namespace dercalc
