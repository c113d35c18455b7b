#pragma once

// Darboux polynomials (integral elements) of planar derivations: exact
// verification, leading-form pruned search over Q, the divergence-cofactor
// pipeline, and the unit-ideal question for W.

#include "dercalc/derivation.hpp"
#include "dercalc/factor.hpp"
#include "dercalc/forms.hpp"
#include "dercalc/groebner.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace dercalc {

/// Cofactor g with D(f) = g f, if f divides D(f).
inline std::optional<MPoly> darboux_verify(const Deriv& D, const MPoly& f) {
    if (!same_ring(f.ring(), D.ring())) throw VariableMismatch("darboux_verify: polynomial and derivation use different variables");
    if (f.is_constant()) throw std::invalid_argument("darboux_verify: f must be non-constant");
    return exact_divide(D(f), f);
}

struct InvariantDirections {
    MPoly W;
    Factorization factors;
    bool euler_degenerate = false;
};

/// W = x1 * fbar2 - x2 * fbar1 for the leading form (fbar1, fbar2).
inline InvariantDirections invariant_directions(const Deriv& D) {
    if (D.nvars() != 2) throw std::invalid_argument("invariant_directions: derivation must have exactly two variables");
    Deriv L = leading_form(D);
    InvariantDirections out;
    out.W = MPoly::variable(D.ring(), 0) * L.coeff(1) - MPoly::variable(D.ring(), 1) * L.coeff(0);
    if (out.W.is_zero()) {
        out.euler_degenerate = true;
        return out;
    }
    out.factors = factor_homog2(out.W);
    return out;
}

enum class DarbouxStatus { Found, EmptyCertified, Inconclusive };

inline const char* to_string(DarbouxStatus s) {
    switch (s) {
    case DarbouxStatus::Found: return "found";
    case DarbouxStatus::EmptyCertified: return "empty_certified";
    default: return "inconclusive";
    }
}

struct DarbouxPair {
    MPoly f;
    MPoly cofactor;
};

struct DarbouxCandidate {
    MPoly leading;          ///< monic candidate leading form
    MPoly leading_cofactor; ///< its cofactor under the leading form of D
    PointStatus outcome = PointStatus::Unknown;
    std::string note;
};

struct DarbouxReport {
    unsigned degree_bound = 0;
    DarbouxStatus status = DarbouxStatus::Inconclusive;
    std::vector<DarbouxPair> found;
    std::vector<DarbouxCandidate> candidates;
    std::string reason;
    InvariantDirections directions;
};

namespace detail {

/// Products prod p_i^{e_i} of the given factors with total degree in [1, d].
inline std::vector<MPoly> leading_form_candidates(const Factorization& fz, const RingPtr& ring, unsigned d) {
    std::vector<MPoly> out;
    std::vector<MPoly> base;
    for (const auto& [p, k] : fz.factors) base.push_back(p);
    auto rec = [&](auto&& self, size_t i, MPoly acc, unsigned deg) -> void {
        if (i == base.size()) {
            if (deg >= 1) out.push_back(acc.monic());
            return;
        }
        const unsigned dp = static_cast<unsigned>(base[i].degree());
        MPoly cur = acc;
        for (unsigned used = deg; used <= d; used += dp) {
            self(self, i + 1, cur, used);
            cur *= base[i];
        }
    };
    rec(rec, 0, MPoly::constant(ring, 1), 0);
    return out;
}

/// Group the terms of a polynomial in (base vars + unknowns) by base monomial;
/// the result lives in the unknowns ring.
inline std::vector<MPoly> coefficient_equations(const MPoly& E, size_t nbase, const RingPtr& unknowns) {
    std::map<Exponent, MPoly, GrlexGreater> by_mono;
    for (const auto& [e, c] : E.terms()) {
        Exponent base(e.begin(), e.begin() + static_cast<long>(nbase));
        Exponent rest(e.begin() + static_cast<long>(nbase), e.end());
        auto [it, _] = by_mono.try_emplace(base, unknowns);
        it->second.add_term(rest, c);
    }
    std::vector<MPoly> out;
    for (auto& [m, p] : by_mono)
        if (!p.is_zero()) out.push_back(std::move(p));
    return out;
}

struct EliminationResult {
    std::vector<MPoly> residual;
    std::vector<std::pair<size_t, MPoly>> solved; ///< unknown index, expression in the remaining unknowns
    bool inconsistent = false;
};

/// Repeatedly solve equations of the form c*u + r (c a nonzero constant, u not
/// in r) and substitute.
inline EliminationResult eliminate_linear(std::vector<MPoly> eqs) {
    EliminationResult res;
    while (true) {
        std::erase_if(eqs, [](const MPoly& p) { return p.is_zero(); });
        for (const auto& e : eqs)
            if (e.is_constant()) {
                res.inconsistent = true;
                return res;
            }
        std::optional<std::pair<size_t, MPoly>> pivot;
        for (const auto& e : eqs) {
            for (size_t v : e.support_vars()) {
                if (e.degree_in(v) != 1) continue;
                auto parts = e.coefficients_in(v);
                const MPoly& c = parts.at(1);
                if (!c.is_constant()) continue;
                MPoly r = parts.count(0) ? parts.at(0) : MPoly(e.ring());
                pivot.emplace(v, r * (-c.constant_term().inverse()));
                break;
            }
            if (pivot) break;
        }
        if (!pivot) break;
        const auto& [v, expr] = *pivot;
        for (auto& e : eqs) e = e.substitute(v, expr);
        for (auto& [w, ex] : res.solved) ex = ex.substitute(v, expr);
        res.solved.emplace_back(v, expr);
    }
    res.residual = std::move(eqs);
    return res;
}

inline bool darboux_order(const DarbouxPair& a, const DarbouxPair& b) {
    if (a.f.degree() != b.f.degree()) return a.f.degree() < b.f.degree();
    auto ia = a.f.terms().begin(), ib = b.f.terms().begin();
    for (; ia != a.f.terms().end() && ib != b.f.terms().end(); ++ia, ++ib) {
        if (ia->first != ib->first) return GrlexGreater{}(ia->first, ib->first);
        if (ia->second != ib->second) return ia->second < ib->second;
    }
    return a.f.size() < b.f.size();
}

/// Solve D(f) = g f with f = fbar + (lower slices) and g = gbar + (slices of
/// degree < m-1); returns the first rational solution or the certified status.
inline std::pair<PointStatus, std::optional<DarbouxPair>> solve_candidate(const Deriv& D, const MPoly& fbar, const MPoly& gbar) {
    const size_t n = D.nvars();
    const unsigned df = static_cast<unsigned>(fbar.degree());
    const int m = D.degree();
    std::vector<Exponent> f_monos, g_monos;
    if (df > 0) f_monos = monomials_upto(n, df - 1);
    if (m >= 2) g_monos = monomials_upto(n, static_cast<unsigned>(m - 2));
    std::vector<std::string> unames;
    for (size_t i = 0; i < f_monos.size(); ++i) unames.push_back("_a" + std::to_string(i));
    for (size_t i = 0; i < g_monos.size(); ++i) unames.push_back("_b" + std::to_string(i));
    RingPtr U = make_ring(unames);
    auto names = D.vars();
    names.insert(names.end(), unames.begin(), unames.end());
    RingPtr big = make_ring(names);

    auto mono_with_unknown = [&](const Exponent& e, size_t u) {
        Exponent full(big->size(), 0);
        std::copy(e.begin(), e.end(), full.begin());
        full[n + u] = 1;
        return MPoly::monomial(big, std::move(full), Rat(1));
    };
    MPoly f = fbar.embed(big), g = gbar.embed(big);
    for (size_t i = 0; i < f_monos.size(); ++i) f += mono_with_unknown(f_monos[i], i);
    for (size_t i = 0; i < g_monos.size(); ++i) g += mono_with_unknown(g_monos[i], f_monos.size() + i);
    std::vector<MPoly> cs;
    for (const auto& c : D.coeffs()) cs.push_back(c.embed(big));
    for (size_t i = 0; i < unames.size(); ++i) cs.emplace_back(big);
    Deriv Dbig(big, cs);
    MPoly E = Dbig(f) - g * f;

    auto elim = eliminate_linear(coefficient_equations(E, n, U));
    if (elim.inconsistent) return {PointStatus::NoneCertified, std::nullopt};
    PointResult pt = find_rational_point(elim.residual, U);
    if (pt.status != PointStatus::Found) return {pt.status, std::nullopt};
    std::vector<Rat> values = pt.point;
    // Each expression depends only on unknowns that were never eliminated.
    for (const auto& [v, ex] : elim.solved) values[v] = ex.evaluate(values);

    MPoly fr = fbar, gr = gbar;
    for (size_t i = 0; i < f_monos.size(); ++i) fr.add_term(f_monos[i], values[i]);
    for (size_t i = 0; i < g_monos.size(); ++i) gr.add_term(g_monos[i], values[f_monos.size() + i]);
    if (D(fr) != gr * fr) throw std::logic_error("darboux_search: solution failed verification");
    return {PointStatus::Found, DarbouxPair{fr, gr}};
}

} // namespace detail

inline DarbouxReport darboux_search(const Deriv& D, unsigned d) {
    if (D.nvars() != 2) throw std::invalid_argument("darboux_search: derivation must have exactly two variables");
    if (D.is_zero()) throw std::invalid_argument("darboux_search: zero derivation");
    if (d < 1) throw std::invalid_argument("darboux_search: degree bound must be at least 1");
    DarbouxReport rep;
    rep.degree_bound = d;
    rep.directions = invariant_directions(D);
    Deriv L = leading_form(D);

    auto merge = [&](DarbouxPair p) {
        for (const auto& q : rep.found)
            if (q.f == p.f) return;
        rep.found.push_back(std::move(p));
    };
    for (const auto& k : kernel_upto(D, d))
        if (!k.is_constant()) merge({k, MPoly(D.ring())});

    bool all_certified = true;
    if (rep.directions.euler_degenerate) {
        all_certified = false;
        rep.reason = "Euler-degenerate leading form";
    } else {
        for (const auto& fbar : detail::leading_form_candidates(rep.directions.factors, D.ring(), d)) {
            DarbouxCandidate cand;
            cand.leading = fbar;
            auto gbar = exact_divide(L(fbar), fbar);
            if (!gbar) {
                cand.outcome = PointStatus::NoneCertified;
                cand.note = "leading form is not Darboux for the leading derivation";
                rep.candidates.push_back(std::move(cand));
                continue;
            }
            cand.leading_cofactor = *gbar;
            auto [status, pair] = detail::solve_candidate(D, fbar, *gbar);
            cand.outcome = status;
            if (pair) merge(std::move(*pair));
            if (status == PointStatus::Unknown) {
                all_certified = false;
                cand.note = "residual system not resolved";
            }
            rep.candidates.push_back(std::move(cand));
        }
    }
    std::sort(rep.found.begin(), rep.found.end(), detail::darboux_order);
    if (!rep.found.empty() && !rep.directions.euler_degenerate) {
        rep.status = DarbouxStatus::Found;
    } else if (rep.directions.euler_degenerate) {
        rep.status = DarbouxStatus::Inconclusive;
    } else if (all_certified) {
        rep.status = DarbouxStatus::EmptyCertified;
    } else {
        rep.status = DarbouxStatus::Inconclusive;
        rep.reason = "some candidate systems were not resolved";
    }
    return rep;
}

// ---------------------------------------------------------------------------

struct PipelineResult {
    bool reduced = false;
    bool trivial_kernel = false;
    std::optional<MPoly> g;
    std::optional<MPoly> h;
    std::string stage; ///< "ok" or the stage that failed
};

/// g with D(g) = -div D, then nonconstant h with D(h) + h D(g) = 0.
inline PipelineResult integral_element_pipeline(const Deriv& D, unsigned d) {
    if (D.nvars() != 2) throw std::invalid_argument("integral_element_pipeline: derivation must have exactly two variables");
    PipelineResult out;
    out.reduced = !D.is_zero() && is_reduced(D);
    out.trivial_kernel = kernel_upto(D, d).size() == 1;
    auto gs = solve_image(D, -divergence(D), d);
    if (!gs.preimage) {
        out.stage = "divergence not in image";
        return out;
    }
    out.g = *gs.preimage;
    const MPoly Dg = D(*out.g);
    auto K = detail::operator_kernel(D.ring(), d, [&](const MPoly& h) { return D(h) + h * Dg; });
    for (const auto& k : K) {
        if (k.is_constant()) continue;
        if (!(D(k) + k * Dg).is_zero()) throw std::logic_error("integral_element_pipeline: kernel element failed verification");
        out.h = k;
        out.stage = "ok";
        return out;
    }
    out.stage = "fixed-cofactor kernel empty";
    return out;
}

/// Is (x2 dW/dx1, 1 + x2 dW/dx2) the unit ideal?
inline bool unit_ideal_of_partials(const MPoly& W) {
    if (W.nvars() != 2) throw std::invalid_argument("q311: W must be a polynomial in two variables");
    MPoly x2 = MPoly::variable(W.ring(), 1);
    MPoly a = x2 * W.derivative(0);
    MPoly b = MPoly::constant(W.ring(), 1) + x2 * W.derivative(1);
    return contains_one({a, b});
}

} // namespace dercalc
