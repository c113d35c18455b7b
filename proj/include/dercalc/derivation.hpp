#pragma once

// Polynomial derivations D = sum f_i d/dx_i over Q and the degree-bounded
// linear probes built on them.

#include "dercalc/factor.hpp"
#include "dercalc/linalg.hpp"
#include "dercalc/mpoly.hpp"
#include "dercalc/parse.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dercalc {

class Deriv {
public:
    Deriv() : ring_(make_ring({})) {}
    Deriv(RingPtr ring, std::vector<MPoly> coeffs) : ring_(std::move(ring)) {
        if (coeffs.size() != ring_->size())
            throw std::invalid_argument("derivation needs one coefficient per variable (" + std::to_string(ring_->size()) +
                                        " variables, " + std::to_string(coeffs.size()) + " coefficients)");
        for (auto& c : coeffs) coeffs_.push_back(c.embed(ring_));
    }

    static Deriv parse(const std::vector<std::string>& vars, const std::vector<std::string>& coeffs) {
        RingPtr ring = make_ring(vars);
        std::vector<MPoly> cs;
        for (const auto& s : coeffs) cs.push_back(parse_poly(s, ring));
        return Deriv(ring, std::move(cs));
    }

    const RingPtr& ring() const { return ring_; }
    const std::vector<std::string>& vars() const { return ring_->names; }
    size_t nvars() const { return ring_->size(); }
    const std::vector<MPoly>& coeffs() const { return coeffs_; }
    const MPoly& coeff(size_t i) const { return coeffs_.at(i); }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }
    /// m: maximal total degree of the coefficients, -1 for the zero derivation.
    int degree() const {
        int m = -1;
        for (const auto& c : coeffs_) m = std::max(m, c.degree());
        return m;
    }

    MPoly operator()(const MPoly& f) const {
        if (!same_ring(f.ring(), ring_)) throw VariableMismatch("apply: polynomial and derivation use different variables");
        MPoly r(ring_);
        for (size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i].is_zero() || !f.involves(i)) continue;
            r += coeffs_[i] * f.derivative(i);
        }
        return r;
    }

    friend bool operator==(const Deriv& a, const Deriv& b) {
        return same_ring(a.ring_, b.ring_) && a.coeffs_ == b.coeffs_;
    }

    std::string to_string() const {
        std::string s;
        for (size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            if (coeffs_[i] != MPoly::constant(ring_, 1)) s += "(" + coeffs_[i].to_string() + ")*";
            s += "d/d" + vars()[i];
        }
        return s.empty() ? "0" : s;
    }

private:
    RingPtr ring_;
    std::vector<MPoly> coeffs_;
};

inline std::ostream& operator<<(std::ostream& os, const Deriv& d) { return os << d.to_string(); }

inline MPoly apply(const Deriv& D, const MPoly& f) { return D(f); }

inline MPoly divergence(const Deriv& D) {
    MPoly r(D.ring());
    for (size_t i = 0; i < D.nvars(); ++i) r += D.coeff(i).derivative(i);
    return r;
}

inline bool is_reduced(const Deriv& D) {
    if (D.is_zero()) throw std::domain_error("is_reduced: zero derivation");
    MPoly g(D.ring());
    for (const auto& c : D.coeffs()) g = g.is_zero() ? c.monic() : mgcd(g, c);
    return g.is_constant();
}

inline Deriv leading_form(const Deriv& D) {
    if (D.is_zero()) throw std::domain_error("leading_form: zero derivation");
    const unsigned m = static_cast<unsigned>(D.degree());
    std::vector<MPoly> cs;
    for (const auto& c : D.coeffs()) cs.push_back(c.homogeneous_part(m));
    return Deriv(D.ring(), std::move(cs));
}

/// f_y d/dx - f_x d/dy.
inline Deriv jacobian_deriv(const MPoly& f) {
    if (f.nvars() != 2) throw std::invalid_argument("jacobian_deriv: need a polynomial in exactly two variables");
    if (f.is_constant()) throw std::invalid_argument("jacobian_deriv: constant polynomial");
    return Deriv(f.ring(), {f.derivative(1), -f.derivative(0)});
}

inline Deriv extend_slice(const Deriv& D, const std::string& var = "t") {
    if (D.ring()->index_of(var)) throw std::invalid_argument("extend_slice: variable '" + var + "' already in use");
    auto names = D.vars();
    names.push_back(var);
    RingPtr ring = make_ring(names);
    std::vector<MPoly> cs;
    for (const auto& c : D.coeffs()) cs.push_back(c.embed(ring));
    cs.push_back(MPoly::constant(ring, 1));
    return Deriv(ring, std::move(cs));
}

// ---------------------------------------------------------------------------
// Degree-bounded linear probes.

namespace detail {

/// Matrix of D restricted to polynomials of degree <= d, columns indexed by
/// `domain` and rows by `codomain_index`.
struct DerivMatrix {
    std::vector<Exponent> domain;
    std::map<Exponent, size_t, GrlexGreater> row;
    std::vector<Exponent> codomain;
    QMatrix A;
};

inline DerivMatrix deriv_matrix(const Deriv& D, unsigned d, const std::vector<MPoly>& extra_rows = {}) {
    DerivMatrix M;
    M.domain = monomials_upto(D.nvars(), d);
    std::vector<MPoly> images;
    auto note = [&](const MPoly& p) {
        for (const auto& [e, c] : p.terms())
            if (M.row.emplace(e, 0).second) M.codomain.push_back(e);
    };
    for (const auto& e : M.domain) {
        images.push_back(D(MPoly::monomial(D.ring(), e, Rat(1))));
        note(images.back());
    }
    for (const auto& p : extra_rows) note(p);
    std::sort(M.codomain.begin(), M.codomain.end(), [](const Exponent& a, const Exponent& b) { return GrlexGreater{}(b, a); });
    for (size_t i = 0; i < M.codomain.size(); ++i) M.row[M.codomain[i]] = i;
    M.A = QMatrix(M.codomain.size(), M.domain.size());
    for (size_t j = 0; j < images.size(); ++j)
        for (const auto& [e, c] : images[j].terms()) M.A(M.row.at(e), j) = c;
    return M;
}

inline MPoly poly_from_vector(const RingPtr& ring, const std::vector<Exponent>& basis, const QVector& v) {
    MPoly p(ring);
    for (size_t i = 0; i < basis.size(); ++i) p.add_term(basis[i], v[i]);
    return p;
}

/// Canonical echelon basis of a span of polynomials: monic, distinct leading
/// monomials, sorted by ascending leading monomial.
inline std::vector<MPoly> echelon_polys(const RingPtr& ring, const std::vector<MPoly>& ps) {
    std::map<Exponent, size_t, GrlexGreater> idx;
    for (const auto& p : ps)
        for (const auto& [e, c] : p.terms()) idx.emplace(e, 0);
    std::vector<Exponent> cols;
    for (auto& [e, i] : idx) {
        i = cols.size();
        cols.push_back(e);
    }
    std::vector<QVector> vs;
    for (const auto& p : ps) {
        QVector v(cols.size());
        for (const auto& [e, c] : p.terms()) v[idx.at(e)] = c;
        vs.push_back(std::move(v));
    }
    std::vector<MPoly> out;
    for (const auto& v : canonical_span(vs, cols.size())) out.push_back(poly_from_vector(ring, cols, v).monic());
    std::sort(out.begin(), out.end(), [](const MPoly& a, const MPoly& b) { return GrlexGreater{}(b.leading_exponent(), a.leading_exponent()); });
    return out;
}

} // namespace detail

struct ImageSolve {
    std::optional<MPoly> preimage;
    /// Set when the target is provably outside the image at every degree.
    std::optional<std::string> obstruction;
    unsigned degree_bound = 0;
};

inline ImageSolve solve_image(const Deriv& D, const MPoly& target, unsigned d) {
    if (!same_ring(target.ring(), D.ring())) throw VariableMismatch("solve_image: target and derivation use different variables");
    ImageSolve out;
    out.degree_bound = d;
    MPoly tgt = target.embed(D.ring());
    if (tgt.is_zero()) {
        out.preimage = MPoly(D.ring());
        return out;
    }
    auto M = detail::deriv_matrix(D, d, {tgt});
    QVector b(M.codomain.size());
    for (const auto& [e, c] : tgt.terms()) b[M.row.at(e)] = c;
    if (auto sol = solve_affine(M.A, b)) {
        MPoly h = detail::poly_from_vector(D.ring(), M.domain, sol->particular);
        if (D(h) != tgt) throw std::logic_error("solve_image: preimage failed verification");
        out.preimage = std::move(h);
        return out;
    }
    bool origin_fixed = true;
    for (const auto& c : D.coeffs()) origin_fixed = origin_fixed && c.constant_term().is_zero();
    if (origin_fixed && !tgt.constant_term().is_zero()) out.obstruction = "image has zero constant term";
    return out;
}

namespace detail {

/// Echelon basis of the kernel of a linear operator on polynomials of degree <= d.
template <class Op>
std::vector<MPoly> operator_kernel(const RingPtr& ring, unsigned d, Op&& op) {
    auto domain = monomials_upto(ring->size(), d);
    std::vector<MPoly> images;
    std::map<Exponent, size_t, GrlexGreater> row;
    for (const auto& e : domain) {
        images.push_back(op(MPoly::monomial(ring, e, Rat(1))));
        for (const auto& [m, c] : images.back().terms()) row.emplace(m, row.size());
    }
    QMatrix A(row.size(), domain.size());
    for (size_t j = 0; j < images.size(); ++j)
        for (const auto& [m, c] : images[j].terms()) A(row.at(m), j) = c;
    std::vector<MPoly> ps;
    for (const auto& v : nullspace(A)) ps.push_back(poly_from_vector(ring, domain, v));
    return echelon_polys(ring, ps);
}

} // namespace detail

/// Basis of {h : deg h <= d, D(h) = 0}; always contains 1.
inline std::vector<MPoly> kernel_upto(const Deriv& D, unsigned d) {
    return detail::operator_kernel(D.ring(), d, [&](const MPoly& h) { return D(h); });
}

// ---------------------------------------------------------------------------
// Local nilpotence.

enum class LndStatus { LND, NotLND, Unknown };

inline const char* to_string(LndStatus s) {
    switch (s) {
    case LndStatus::LND: return "LND";
    case LndStatus::NotLND: return "NotLND";
    default: return "UnknownWithinBound";
    }
}

struct LndReport {
    LndStatus status = LndStatus::Unknown;
    /// Per variable: smallest k with D^k(x_i) = 0, when reached.
    std::vector<std::optional<unsigned>> nilpotency;
    std::optional<MPoly> witness;
    std::optional<Rat> eigenvalue;
    std::string certificate;
};

namespace detail {

/// Characteristic polynomial det(lambda I - A), coefficient i at lambda^i.
inline UPoly char_poly(const QMatrix& A) {
    const size_t n = A.rows();
    UPoly c(n + 1);
    c[n] = 1;
    QMatrix M(n, n);
    for (size_t k = 1; k <= n; ++k) {
        QMatrix AM(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t l = 0; l < n; ++l) {
                if (A(i, l).is_zero()) continue;
                for (size_t j = 0; j < n; ++j) AM(i, j) += A(i, l) * M(l, j);
            }
        for (size_t i = 0; i < n; ++i) AM(i, i) += c[n - k + 1];
        M = AM;
        Rat tr(0);
        for (size_t i = 0; i < n; ++i)
            for (size_t l = 0; l < n; ++l) tr += A(i, l) * M(l, i);
        c[n - k] = -tr / Rat(static_cast<long>(k));
    }
    return c;
}

/// Nonzero rational eigenvector of D on polynomials of degree <= d, assuming D
/// maps that space into itself.
inline std::optional<std::pair<MPoly, Rat>> rational_eigenvector(const Deriv& D, unsigned d) {
    auto dom = monomials_upto(D.nvars(), d);
    std::map<Exponent, size_t, GrlexGreater> idx;
    for (size_t i = 0; i < dom.size(); ++i) idx.emplace(dom[i], i);
    QMatrix A(dom.size(), dom.size());
    for (size_t j = 0; j < dom.size(); ++j) {
        MPoly img = D(MPoly::monomial(D.ring(), dom[j], Rat(1)));
        for (const auto& [e, c] : img.terms()) A(idx.at(e), j) = c;
    }
    UPoly cp = char_poly(A);
    RingPtr lam = make_ring({"lambda"});
    for (const auto& [root, mult] : rational_roots(upoly::to_mpoly(cp, lam, 0))) {
        if (root.is_zero()) continue;
        QMatrix B = A;
        for (size_t i = 0; i < dom.size(); ++i) B(i, i) -= root;
        auto ns = nullspace(B);
        if (ns.empty()) continue;
        MPoly v = poly_from_vector(D.ring(), dom, ns.front()).monic();
        return std::make_pair(v, root);
    }
    return std::nullopt;
}

} // namespace detail

inline LndReport lnd_check(const Deriv& D, unsigned bound) {
    if (bound < 1) throw std::invalid_argument("lnd_check: bound must be at least 1");
    LndReport rep;
    const size_t n = D.nvars();
    const int m = D.degree();
    rep.nilpotency.assign(n, std::nullopt);
    if (D.is_zero()) {
        for (auto& k : rep.nilpotency) k = 1;
        rep.status = LndStatus::LND;
        return rep;
    }
    bool all = true;
    for (size_t i = 0; i < n; ++i) {
        MPoly g = MPoly::variable(D.ring(), i);
        unsigned max_rate_run = 0;
        bool run_from_start = true;
        for (unsigned k = 1; k <= bound; ++k) {
            MPoly next = D(g);
            if (next.is_zero()) {
                rep.nilpotency[i] = k;
                break;
            }
            if (m >= 2 && n <= 2 && run_from_start) {
                if (next.degree() == g.degree() + m - 1) {
                    if (++max_rate_run == n + 1) {
                        rep.status = LndStatus::NotLND;
                        rep.witness = MPoly::variable(D.ring(), i);
                        rep.certificate = "degree of D^k(" + D.vars()[i] + ") grows at the maximal rate " + std::to_string(m - 1) +
                                          " for " + std::to_string(n + 1) + " consecutive steps";
                        return rep;
                    }
                } else {
                    run_from_start = false;
                }
            }
            g = std::move(next);
        }
        all = all && rep.nilpotency[i].has_value();
    }
    if (all) {
        rep.status = LndStatus::LND;
        return rep;
    }
    for (const auto& e : monomials_upto(n, 3)) {
        if (total_degree(e) == 0) continue;
        MPoly mono = MPoly::monomial(D.ring(), e, Rat(1));
        MPoly img = D(mono);
        if (img.is_zero() || img.size() != 1 || img.leading_exponent() != e) continue;
        rep.status = LndStatus::NotLND;
        rep.witness = mono;
        rep.eigenvalue = img.leading_coeff();
        rep.certificate = "D(g) = c*g with c nonzero";
        return rep;
    }
    if (m <= 1) {
        if (auto ev = detail::rational_eigenvector(D, 3)) {
            rep.status = LndStatus::NotLND;
            rep.witness = ev->first;
            rep.eigenvalue = ev->second;
            rep.certificate = "D(g) = c*g with c nonzero";
            return rep;
        }
        // D preserves the (n+1)-dimensional space of affine polynomials; if it
        // were nilpotent there, D^(n+1)(x_i) would vanish.
        for (size_t i = 0; i < n; ++i) {
            MPoly g = MPoly::variable(D.ring(), i);
            for (size_t k = 0; k <= n; ++k) g = D(g);
            if (!g.is_zero()) {
                rep.status = LndStatus::NotLND;
                rep.witness = MPoly::variable(D.ring(), i);
                rep.certificate = "D is not nilpotent on polynomials of degree <= 1";
                return rep;
            }
        }
    }
    rep.status = LndStatus::Unknown;
    rep.certificate = "iterates did not vanish within the bound";
    return rep;
}

// ---------------------------------------------------------------------------
// Slice preimages for locally finite derivations.

class NotLocallyFinite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SlicePreimage {
    Deriv extended;
    MPoly h;
    /// a_0, ..., a_N: h = sum a_i t^i with a_i in the base ring.
    std::vector<MPoly> coeffs;
    /// D(a_{i-1}) + i a_i = 0 for i-1 != n, and D(a_n) + (n+1) a_{n+1} = a.
    bool cascade_holds = false;
};

namespace detail {

/// Smallest relation sum_{i<=p} c_i D^i(a) = 0 with c_p = 1.
inline std::optional<std::vector<Rat>> minimal_dependency(const Deriv& D, const MPoly& a, unsigned bound) {
    std::vector<MPoly> iter{a};
    for (unsigned p = 1; p <= bound; ++p) {
        iter.push_back(D(iter.back()));
        const MPoly& top = iter.back();
        std::map<Exponent, size_t, GrlexGreater> idx;
        for (const auto& q : iter)
            for (const auto& [e, c] : q.terms()) idx.emplace(e, idx.size());
        QMatrix A(idx.size(), p);
        QVector b(idx.size());
        for (unsigned j = 0; j < p; ++j)
            for (const auto& [e, c] : iter[j].terms()) A(idx.at(e), j) = c;
        for (const auto& [e, c] : top.terms()) b[idx.at(e)] = c;
        if (auto sol = solve_affine(A, b)) {
            std::vector<Rat> rel;
            for (unsigned j = 0; j < p; ++j) rel.push_back(-sol->particular[j]);
            rel.push_back(Rat(1));
            return rel;
        }
    }
    return std::nullopt;
}

struct PreimageBuilder {
    const Deriv& D;
    const Deriv& ext;
    size_t tvar;
    unsigned bound;

    MPoly lift(const MPoly& p) const { return p.embed(ext.ring()); }
    MPoly tpow(unsigned k) const {
        Exponent e(ext.nvars(), 0);
        e[tvar] = k;
        return MPoly::monomial(ext.ring(), std::move(e), Rat(1));
    }

    /// Given D(b') = b, a preimage of b t^n.
    MPoly from_image(const MPoly& bprime, unsigned n) const {
        MPoly h = lift(bprime) * tpow(n);
        if (n > 0) h -= preimage(bprime, n - 1) * Rat(static_cast<long>(n));
        return h;
    }

    /// Given D^k(a) = 0 for some k, a preimage of a t^n.
    MPoly from_nilpotent(const MPoly& a, unsigned n) const {
        MPoly h = lift(a) * tpow(n + 1) - preimage(D(a), n + 1);
        return h * Rat(1, static_cast<long>(n + 1));
    }

    MPoly preimage(const MPoly& a, unsigned n) const {
        if (a.is_zero()) return MPoly(ext.ring());
        if (n == 0) {
            auto direct = solve_image(D, a, static_cast<unsigned>(a.degree()) + 1);
            if (direct.preimage) return lift(*direct.preimage);
        }
        auto rel = minimal_dependency(D, a, bound);
        if (!rel) throw NotLocallyFinite("no linear dependency among a, D(a), ..., D^" + std::to_string(bound) + "(a)");
        const size_t p = rel->size() - 1;
        size_t l = 0;
        while ((*rel)[l].is_zero()) ++l;
        std::vector<MPoly> iter{a};
        for (size_t i = 1; i <= p; ++i) iter.push_back(D(iter.back()));
        if (l == p) return from_nilpotent(a, n);
        // b' with D(b') = b, where b is the image part of a.
        const Rat inv = (*rel)[l].inverse();
        MPoly bprime(D.ring());
        for (size_t i = l + 1; i <= p; ++i) bprime -= iter[i - l - 1] * ((*rel)[i] * inv);
        if (l == 0) return from_image(bprime, n);
        MPoly a0 = a - D(bprime);
        return from_nilpotent(a0, n) + from_image(bprime, n);
    }
};

} // namespace detail

inline SlicePreimage lf_preimage(const Deriv& D, const MPoly& a, unsigned n, unsigned bound = 25, const std::string& var = "t") {
    if (!same_ring(a.ring(), D.ring())) throw VariableMismatch("lf_preimage: polynomial and derivation use different variables");
    SlicePreimage out;
    out.extended = extend_slice(D, var);
    const size_t tvar = D.nvars();
    detail::PreimageBuilder b{D, out.extended, tvar, bound};
    out.h = b.preimage(a, n);
    MPoly target = b.lift(a) * b.tpow(n);
    if (out.extended(out.h) != target) throw std::logic_error("lf_preimage: construction failed verification");
    auto parts = out.h.coefficients_in(tvar);
    unsigned top = parts.empty() ? 0 : parts.rbegin()->first;
    for (unsigned i = 0; i <= top; ++i) {
        auto it = parts.find(i);
        out.coeffs.push_back(it == parts.end() ? MPoly(D.ring()) : it->second.embed(D.ring()));
    }
    out.cascade_holds = true;
    for (unsigned i = 1; i <= top + 1; ++i) {
        MPoly ai = i <= top ? out.coeffs[i] : MPoly(D.ring());
        MPoly lhs = D(out.coeffs[i - 1]) + ai * Rat(static_cast<long>(i));
        MPoly rhs = (i - 1 == n) ? a : MPoly(D.ring());
        out.cascade_holds = out.cascade_holds && lhs == rhs;
    }
    return out;
}

} // namespace dercalc
