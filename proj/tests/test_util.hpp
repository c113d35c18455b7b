#pragma once

#include "dercalc/derivation.hpp"
#include "dercalc/mpoly.hpp"
#include "dercalc/parse.hpp"

#include <random>
#include <string>
#include <vector>

namespace dercalc::testing {

inline RingPtr xy() {
    static RingPtr r = make_ring({"x", "y"});
    return r;
}
inline RingPtr x1x2() {
    static RingPtr r = make_ring({"x1", "x2"});
    return r;
}

inline MPoly P(const std::string& s, const RingPtr& r = xy()) { return parse_poly(s, r); }

/// Random polynomial: each monomial of degree <= deg kept with probability
/// `density`, integer coefficients in [-height, height].
inline MPoly random_poly(std::mt19937_64& rng, const RingPtr& ring, unsigned deg, int height, double density = 0.5) {
    std::uniform_int_distribution<int> coeff(-height, height);
    std::bernoulli_distribution keep(density);
    MPoly p(ring);
    for (const auto& e : monomials_upto(ring->size(), deg))
        if (keep(rng)) p.add_term(e, Rat(coeff(rng)));
    return p;
}

inline MPoly random_nonzero_poly(std::mt19937_64& rng, const RingPtr& ring, unsigned deg, int height, double density = 0.5) {
    while (true) {
        MPoly p = random_poly(rng, ring, deg, height, density);
        if (!p.is_zero()) return p;
    }
}

/// Random rational with numerator/denominator of bounded height.
inline Rat random_rat(std::mt19937_64& rng, int height) {
    std::uniform_int_distribution<int> n(-height, height), d(1, height);
    return Rat(n(rng), d(rng));
}

/// Random planar D and linear g = a*x1 + b*x2 (b != 0) with D(g) = -div(D).
/// f1 is random; f2 solves (d/dx2 + b) f2 = -(d/dx1 f1 + a f1) via the
/// terminating series (1/b) sum_k (-1/b d/dx2)^k.
inline std::pair<Deriv, MPoly> planted_divergence_pair(std::mt19937_64& rng, const RingPtr& ring, unsigned deg) {
    std::uniform_int_distribution<int> c(-3, 3), nz(1, 3);
    Rat a(c(rng)), b(nz(rng) * (c(rng) < 0 ? -1 : 1));
    MPoly f1 = random_poly(rng, ring, deg, 3);
    MPoly r = -(f1.derivative(0) + f1 * a);
    MPoly f2(ring), term = r * b.inverse();
    while (!term.is_zero()) {
        f2 += term;
        term = term.derivative(1) * (-b.inverse());
    }
    MPoly g = MPoly::variable(ring, 0) * a + MPoly::variable(ring, 1) * b;
    return {Deriv(ring, {f1, f2}), g};
}

} // namespace dercalc::testing
