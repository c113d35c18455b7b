#pragma once

// Brute-force Darboux search: every monic f of degree 1..d (one system per
// leading monomial) and every cofactor of degree <= max(m-1, 0), all
// coefficients unknown, solved directly with no leading-form pruning.

#include "dercalc/derivation.hpp"
#include "dercalc/groebner.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dercalc::testing {

enum class OracleVerdict { Found, Empty, Unknown };

struct OracleResult {
    OracleVerdict verdict = OracleVerdict::Unknown;
    std::optional<std::pair<MPoly, MPoly>> witness;
};

inline OracleResult brute_force_darboux(const Deriv& D, unsigned d) {
    const size_t n = D.nvars();
    const unsigned gdeg = D.degree() >= 1 ? static_cast<unsigned>(D.degree() - 1) : 0;
    const auto g_monos = monomials_upto(n, gdeg);
    const auto all = monomials_upto(n, d);
    OracleResult out;
    bool all_empty = true;
    for (size_t lead = 1; lead < all.size(); ++lead) {
        std::vector<std::string> names = D.vars();
        for (size_t i = 0; i < lead; ++i) names.push_back("_f" + std::to_string(i));
        for (size_t j = 0; j < g_monos.size(); ++j) names.push_back("_g" + std::to_string(j));
        RingPtr big = make_ring(names);
        auto unknown_times = [&](size_t u, const Exponent& e) {
            Exponent full(big->size(), 0);
            for (size_t k = 0; k < n; ++k) full[k] = e[k];
            full[n + u] = 1;
            return MPoly::monomial(big, full, Rat(1));
        };
        Exponent le(big->size(), 0);
        for (size_t k = 0; k < n; ++k) le[k] = all[lead][k];
        MPoly f = MPoly::monomial(big, le, Rat(1)), g(big);
        for (size_t i = 0; i < lead; ++i) f += unknown_times(i, all[i]);
        for (size_t j = 0; j < g_monos.size(); ++j) g += unknown_times(lead + j, g_monos[j]);
        std::vector<MPoly> cs;
        for (const auto& c : D.coeffs()) cs.push_back(c.embed(big));
        while (cs.size() < big->size()) cs.emplace_back(big);
        MPoly E = Deriv(big, cs)(f) - g * f;

        std::vector<std::string> unames(names.begin() + static_cast<long>(n), names.end());
        RingPtr U = make_ring(unames);
        std::map<Exponent, MPoly, GrlexGreater> eqs;
        for (const auto& [e, c] : E.terms()) {
            Exponent base(e.begin(), e.begin() + static_cast<long>(n));
            Exponent rest(e.begin() + static_cast<long>(n), e.end());
            eqs.try_emplace(base, U).first->second.add_term(rest, c);
        }
        std::vector<MPoly> sys;
        for (auto& [k, p] : eqs) sys.push_back(p);
        auto pt = find_rational_point(sys, U);
        if (pt.status == PointStatus::Found) {
            MPoly fr = MPoly::monomial(D.ring(), all[lead], Rat(1)), gr(D.ring());
            for (size_t i = 0; i < lead; ++i) fr.add_term(all[i], pt.point[i]);
            for (size_t j = 0; j < g_monos.size(); ++j) gr.add_term(g_monos[j], pt.point[lead + j]);
            out.verdict = OracleVerdict::Found;
            out.witness = std::make_pair(fr, gr);
            return out;
        }
        if (pt.status == PointStatus::Unknown) all_empty = false;
    }
    out.verdict = all_empty ? OracleVerdict::Empty : OracleVerdict::Unknown;
    return out;
}

} // namespace dercalc::testing
