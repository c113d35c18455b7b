#pragma once

// Derivations f(t)/prod (t - a_i)^{n_i} d/dt on Q[t, 1/prod (t - a_i)].

#include "dercalc/mpoly.hpp"
#include "dercalc/upoly.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dercalc {

struct Pole {
    Rat alpha;
    unsigned mult = 1;
    friend bool operator==(const Pole&, const Pole&) = default;
};

struct PoleTerm {
    Rat alpha;
    unsigned k = 1;
    Rat coeff;
    friend bool operator==(const PoleTerm&, const PoleTerm&) = default;
};

/// poly + sum coeff/(t - alpha)^k. Terms sorted by (alpha, k), no zero coefficients.
struct PartialFraction {
    MPoly poly;
    std::vector<PoleTerm> terms;

    const RingPtr& ring() const { return poly.ring(); }
    bool is_zero() const { return poly.is_zero() && terms.empty(); }
    bool is_polynomial() const { return terms.empty(); }

    Rat residue(const Rat& alpha) const {
        for (const auto& p : terms)
            if (p.alpha == alpha && p.k == 1) return p.coeff;
        return Rat(0);
    }
    unsigned order_at(const Rat& alpha) const {
        unsigned k = 0;
        for (const auto& p : terms)
            if (p.alpha == alpha) k = std::max(k, p.k);
        return k;
    }

    /// Common denominator prod (t - alpha)^(max k) and the matching numerator.
    std::pair<MPoly, std::vector<Pole>> recombine() const;

    friend bool operator==(const PartialFraction&, const PartialFraction&) = default;

    std::string to_string() const {
        const std::string& t = poly.vars()[0];
        std::string s = poly.is_zero() ? "" : poly.to_string();
        for (const auto& p : terms) {
            Rat c = p.coeff;
            bool neg = c < Rat(0);
            if (neg) c = -c;
            if (!s.empty()) s += neg ? " - " : " + ";
            else if (neg) s += "-";
            std::string cs = c.is_integer() ? c.str() : "(" + c.str() + ")";
            std::string base;
            if (p.alpha.is_zero()) {
                base = t;
            } else {
                Rat a = p.alpha;
                base = "(" + t + (a < Rat(0) ? " + " + (-a).str() : " - " + a.str()) + ")";
            }
            s += cs + "/" + base + (p.k > 1 ? "^" + std::to_string(p.k) : "");
        }
        return s.empty() ? "0" : s;
    }
};

inline std::ostream& operator<<(std::ostream& os, const PartialFraction& p) { return os << p.to_string(); }

namespace detail {

inline UPoly linear_power(const Rat& alpha, unsigned k) { return upoly::pow(UPoly{-alpha, Rat(1)}, k); }

inline UPoly pole_product(const std::vector<Pole>& den) {
    UPoly q{Rat(1)};
    for (const auto& p : den) q = upoly::mul(q, linear_power(p.alpha, p.mult));
    return q;
}

inline void require_distinct(const std::vector<Pole>& den) {
    for (size_t i = 0; i < den.size(); ++i)
        for (size_t j = i + 1; j < den.size(); ++j)
            if (den[i].alpha == den[j].alpha)
                throw std::invalid_argument("poles must be pairwise distinct: " + den[i].alpha.str());
}

/// Merge multiplicities of two pole lists.
inline std::vector<Pole> merge_poles(const std::vector<Pole>& a, const std::vector<Pole>& b) {
    std::map<Rat, unsigned> m;
    for (const auto& p : a) m[p.alpha] += p.mult;
    for (const auto& p : b) m[p.alpha] += p.mult;
    std::vector<Pole> r;
    for (const auto& [al, k] : m)
        if (k) r.push_back({al, k});
    return r;
}

inline size_t univariate_var(const RingPtr& r) {
    if (r->size() != 1) throw std::invalid_argument("expected a univariate ring, got " + std::to_string(r->size()) + " variables");
    return 0;
}

} // namespace detail

inline PartialFraction partial_fractions(const UPoly& num, const std::vector<Pole>& den, const RingPtr& ring) {
    detail::univariate_var(ring);
    detail::require_distinct(den);
    UPoly q = detail::pole_product(den);
    auto [quot, rem] = upoly::divmod(num, q);
    PartialFraction out{upoly::to_mpoly(quot, ring, 0), {}};
    std::vector<Pole> sorted = den;
    std::sort(sorted.begin(), sorted.end(), [](const Pole& a, const Pole& b) { return a.alpha < b.alpha; });
    for (const auto& p : sorted) {
        if (p.mult == 0) continue;
        // rem/q = A(t)/(t - alpha)^k with A = rem/other; expand A at alpha to order k.
        UPoly other{Rat(1)};
        for (const auto& o : sorted)
            if (!(o.alpha == p.alpha)) other = upoly::mul(other, detail::linear_power(o.alpha, o.mult));
        UPoly a = upoly::shift(rem, p.alpha), b = upoly::shift(other, p.alpha);
        a.resize(std::max<size_t>(a.size(), p.mult));
        b.resize(std::max<size_t>(b.size(), p.mult));
        std::vector<Rat> series(p.mult);
        Rat inv = b[0].inverse();
        for (unsigned j = 0; j < p.mult; ++j) {
            Rat s = a[j];
            for (unsigned i = 1; i <= j; ++i) s -= b[i] * series[j - i];
            series[j] = s * inv;
        }
        for (unsigned k = 1; k <= p.mult; ++k) {
            const Rat& c = series[p.mult - k];
            if (!c.is_zero()) out.terms.push_back({p.alpha, k, c});
        }
    }
    return out;
}

inline PartialFraction partial_fractions(const MPoly& num, const std::vector<Pole>& den) {
    return partial_fractions(upoly::from_mpoly(num, detail::univariate_var(num.ring())), den, num.ring());
}

inline std::pair<MPoly, std::vector<Pole>> PartialFraction::recombine() const {
    std::vector<Pole> den;
    for (const auto& p : terms) {
        if (!den.empty() && den.back().alpha == p.alpha) den.back().mult = std::max(den.back().mult, p.k);
        else den.push_back({p.alpha, p.k});
    }
    UPoly q = detail::pole_product(den);
    UPoly num = upoly::mul(upoly::from_mpoly(poly, 0), q);
    for (const auto& p : terms) {
        UPoly cof = upoly::divmod(q, detail::linear_power(p.alpha, p.k)).first;
        num = upoly::add(num, upoly::scale(cof, p.coeff));
    }
    return {upoly::to_mpoly(num, ring(), 0), den};
}

inline PartialFraction derivative(const PartialFraction& u) {
    PartialFraction r{u.poly.derivative(0), {}};
    for (const auto& p : u.terms) r.terms.push_back({p.alpha, p.k + 1, p.coeff * Rat(-static_cast<long>(p.k))});
    return r;
}

struct Dim1Spec {
    std::vector<Pole> poles;
    MPoly numerator;

    Dim1Spec(std::vector<Pole> p, MPoly f) : poles(std::move(p)), numerator(std::move(f)) { validate(); }

    const RingPtr& ring() const { return numerator.ring(); }

    void validate() const {
        detail::univariate_var(numerator.ring());
        if (numerator.is_zero()) throw std::invalid_argument("numerator f must be nonzero");
        detail::require_distinct(poles);
        UPoly f = upoly::from_mpoly(numerator, 0);
        for (const auto& p : poles) {
            if (p.mult < 1) throw std::invalid_argument("pole multiplicities must be at least 1");
            if (upoly::eval(f, p.alpha).is_zero())
                throw std::invalid_argument("numerator vanishes at pole " + p.alpha.str());
        }
    }

    /// Parses "a1:n1,a2:n2" (empty string means no poles).
    static std::vector<Pole> parse_poles(const std::string& s) {
        std::vector<Pole> r;
        size_t i = 0;
        while (i < s.size()) {
            size_t j = s.find(',', i);
            if (j == std::string::npos) j = s.size();
            std::string item = s.substr(i, j - i);
            item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
            if (!item.empty()) {
                size_t c = item.rfind(':');
                if (c == std::string::npos) throw std::invalid_argument("pole '" + item + "' must look like alpha:mult");
                long m = std::stol(item.substr(c + 1));
                if (m < 1) throw std::invalid_argument("pole multiplicity must be at least 1 in '" + item + "'");
                r.push_back({Rat::from_string(item.substr(0, c)), static_cast<unsigned>(m)});
            }
            i = j + 1;
        }
        return r;
    }

    std::string to_string() const {
        std::string den;
        for (const auto& p : poles) {
            if (!den.empty()) den += "*";
            std::string base = p.alpha.is_zero() ? ring()->names[0]
                                                 : "(" + ring()->names[0] + (p.alpha < Rat(0) ? " + " + (-p.alpha).str()
                                                                                              : " - " + p.alpha.str()) + ")";
            den += base + (p.mult > 1 ? "^" + std::to_string(p.mult) : "");
        }
        std::string num = numerator.size() > 1 ? "(" + numerator.to_string() + ")" : numerator.to_string();
        return (den.empty() ? num : num + "/" + (poles.size() > 1 ? "(" + den + ")" : den)) + " d/d" + ring()->names[0];
    }
};

/// D(u) = f u' / prod (t - a_i)^{n_i}.
inline PartialFraction apply_dim1(const Dim1Spec& s, const PartialFraction& u) {
    if (!same_ring(s.ring(), u.ring())) throw VariableMismatch("apply_dim1: element and derivation use different variables");
    auto [num, den] = derivative(u).recombine();
    return partial_fractions(num * s.numerator, detail::merge_poles(den, s.poles));
}

inline PartialFraction as_element(const MPoly& p) { return PartialFraction{p, {}}; }

struct Dim1Solve {
    std::optional<PartialFraction> u;
    std::optional<PartialFraction> derivative;  // required u'
    std::string obstruction;
    std::vector<std::pair<Rat, Rat>> residues;  // (alpha, residue of u')
};

/// Solves D(u) = w in R: u' = w prod (t - a_i)^{n_i} / f must lie in R with zero residues.
inline Dim1Solve preimage_dim1(const Dim1Spec& s, const PartialFraction& w) {
    if (!same_ring(s.ring(), w.ring())) throw VariableMismatch("preimage_dim1: element and derivation use different variables");
    for (const auto& p : w.terms) {
        bool ok = false;
        for (const auto& q : s.poles) ok = ok || q.alpha == p.alpha;
        if (!ok) throw std::invalid_argument("target has a pole at " + p.alpha.str() + " outside the localization");
    }
    Dim1Solve out;
    auto [wn, wd] = w.recombine();
    UPoly num = upoly::mul(upoly::from_mpoly(wn, 0), detail::pole_product(s.poles));
    auto [q, r] = upoly::divmod(num, upoly::from_mpoly(s.numerator, 0));
    if (!upoly::is_zero(r)) {
        out.obstruction = "u' has poles at zeros of f outside the localization";
        return out;
    }
    PartialFraction du = partial_fractions(q, wd, s.ring());
    out.derivative = du;
    bool clean = true;
    for (const auto& p : s.poles) {
        Rat res = du.residue(p.alpha);
        out.residues.emplace_back(p.alpha, res);
        clean = clean && res.is_zero();
    }
    if (!clean) {
        out.obstruction = "u' has a nonzero residue";
        return out;
    }
    UPoly poly = upoly::from_mpoly(du.poly, 0), anti(poly.size() + 1);
    for (size_t i = 0; i < poly.size(); ++i) anti[i + 1] = poly[i] / Rat(static_cast<long>(i + 1));
    upoly::trim(anti);
    PartialFraction u{upoly::to_mpoly(anti, s.ring(), 0), {}};
    for (const auto& p : du.terms) u.terms.push_back({p.alpha, p.k - 1, p.coeff / Rat(1 - static_cast<long>(p.k))});
    if (!(apply_dim1(s, u) == w)) throw std::logic_error("preimage_dim1: antiderivative failed substitution check");
    out.u = u;
    return out;
}

inline Dim1Solve solve_slice_dim1(const Dim1Spec& s) { return preimage_dim1(s, as_element(MPoly::constant(s.ring(), 1))); }

inline bool surjective_shape(const Dim1Spec& s) { return s.poles.empty() && s.numerator.degree() == 0; }

/// An element of R outside the image of D, or none when D is surjective.
inline std::optional<PartialFraction> nonimage_witness(const Dim1Spec& s) {
    if (surjective_shape(s)) return std::nullopt;
    if (s.poles.empty()) return as_element(MPoly::constant(s.ring(), 1));
    // w = f/((t - a_1)^{n_1+1} prod_{i>1} (t - a_i)^{n_i}) forces u' = 1/(t - a_1).
    std::vector<Pole> den = s.poles;
    den[0].mult += 1;
    return partial_fractions(s.numerator, den);
}

struct SurjectivityVerdict {
    bool surjective = false;
    std::optional<PartialFraction> witness;
    std::optional<Dim1Solve> witness_check;
};

inline SurjectivityVerdict is_surjective_dim1(const Dim1Spec& s) {
    SurjectivityVerdict v;
    v.surjective = surjective_shape(s);
    v.witness = nonimage_witness(s);
    if (v.witness) {
        v.witness_check = preimage_dim1(s, *v.witness);
        if (v.witness_check->u) throw std::logic_error("nonimage_witness: witness has a preimage");
    }
    return v;
}

} // namespace dercalc
