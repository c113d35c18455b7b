#pragma once

// Degree-truncated cohomology of the twisted complex
// 0 -> P -> P dx1 + P dx2 -> P dx1^dx2, with differential D_f = d + df^.

#include "dercalc/forms.hpp"
#include "dercalc/linalg.hpp"
#include "dercalc/mpoly.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dercalc {

struct CohomologyDims {
    size_t h1 = 0, h2 = 0;
    friend bool operator==(const CohomologyDims&, const CohomologyDims&) = default;
};

struct TruncatedCohomologyReport {
    MPoly f;
    std::vector<unsigned> cutoffs;
    std::vector<CohomologyDims> dims;
    bool stabilized_h1 = false;
    bool stabilized_h2 = false;
};

namespace detail {

class MonomialIndex {
public:
    MonomialIndex(size_t nvars, unsigned d) : monos_(monomials_upto(nvars, d)) {
        for (size_t i = 0; i < monos_.size(); ++i) index_[monos_[i]] = i;
    }
    size_t size() const { return monos_.size(); }
    const Exponent& operator[](size_t i) const { return monos_[i]; }
    size_t at(const Exponent& e) const {
        auto it = index_.find(e);
        if (it == index_.end()) throw std::logic_error("MonomialIndex: monomial outside truncation");
        return it->second;
    }
    bool contains(const Exponent& e) const { return index_.count(e) != 0; }

private:
    std::vector<Exponent> monos_;
    std::map<Exponent, size_t> index_;
};

/// Untwisted when f is zero; otherwise f must be non-constant.
inline CohomologyDims truncated_dims(const MPoly& f, unsigned d) {
    detail::require_plane(f.ring(), "twisted_cohomology_dims");
    const RingPtr& R = f.ring();
    const unsigned df = f.is_zero() ? 0 : static_cast<unsigned>(f.degree());
    const unsigned top = df >= 1 ? d + df - 1 : (d >= 1 ? d - 1 : 0);

    // D_f on 1-forms: columns c1- and c2-monomials of degree <= d, rows 2-form coefficients.
    MonomialIndex dom(2, d), cod(2, top);
    QMatrix A1(cod.size(), 2 * dom.size());
    for (size_t j = 0; j < dom.size(); ++j)
        for (int slot = 0; slot < 2; ++slot) {
            MPoly m = MPoly::monomial(R, dom[j], Rat(1)), z(R);
            Form1 w = slot == 0 ? Form1(m, z) : Form1(z, m);
            Form2 image = twisted(f, w);
            for (const auto& [e, c] : image.c.terms()) A1(cod.at(e), 2 * j + slot) = c;
        }
    size_t r1 = rank(A1);
    CohomologyDims out;
    out.h2 = cod.size() - r1;

    // S = {h of degree <= d+1 : D_f h has coefficients of degree <= d}.
    MonomialIndex src(2, d + 1), big(2, d + 1 + df);
    std::vector<size_t> high;
    for (size_t i = 0; i < big.size(); ++i)
        if (total_degree(big[i]) > d) high.push_back(i);
    QMatrix img(2 * big.size(), src.size());
    for (size_t j = 0; j < src.size(); ++j) {
        Form1 w = twisted(f, MPoly::monomial(R, src[j], Rat(1)));
        for (const auto& [e, c] : w.c1.terms()) img(2 * big.at(e), j) = c;
        for (const auto& [e, c] : w.c2.terms()) img(2 * big.at(e) + 1, j) = c;
    }
    QMatrix overflow(2 * high.size(), src.size());
    for (size_t k = 0; k < high.size(); ++k)
        for (size_t j = 0; j < src.size(); ++j) {
            overflow(2 * k, j) = img(2 * high[k], j);
            overflow(2 * k + 1, j) = img(2 * high[k] + 1, j);
        }
    auto S = nullspace(overflow);
    QMatrix imgS(2 * big.size(), S.size());
    for (size_t s = 0; s < S.size(); ++s) {
        QVector v = img * S[s];
        for (size_t i = 0; i < v.size(); ++i) imgS(i, s) = v[i];
    }
    size_t kernel = 2 * dom.size() - r1;
    out.h1 = kernel - rank(imgS);
    return out;
}

} // namespace detail

inline CohomologyDims twisted_cohomology_dims(const MPoly& f, unsigned cutoff) {
    if (f.degree() < 1) throw std::invalid_argument("twisted_cohomology_dims: f must be non-constant");
    return detail::truncated_dims(f, cutoff);
}

inline TruncatedCohomologyReport stabilization_probe(const MPoly& f, const std::vector<unsigned>& cutoffs) {
    if (f.degree() < 1) throw std::invalid_argument("stabilization_probe: f must be non-constant");
    if (cutoffs.size() < 2) throw std::invalid_argument("stabilization_probe: need at least two cutoffs");
    for (size_t i = 1; i < cutoffs.size(); ++i)
        if (cutoffs[i] <= cutoffs[i - 1]) throw std::invalid_argument("stabilization_probe: cutoffs must be strictly increasing");
    TruncatedCohomologyReport rep{f, cutoffs, {}, false, false};
    for (unsigned d : cutoffs) rep.dims.push_back(twisted_cohomology_dims(f, d));
    const auto& a = rep.dims[rep.dims.size() - 2];
    const auto& b = rep.dims.back();
    rep.stabilized_h1 = a.h1 == b.h1;
    rep.stabilized_h2 = a.h2 == b.h2;
    return rep;
}

} // namespace dercalc
