// Acceptance checks 1-12: one PASS/FAIL line each, exit status 1 if any fails.

#include "dercalc/cli.hpp"
#include "dercalc/cohomology.hpp"
#include "dercalc/darboux.hpp"
#include "dercalc/dim_one.hpp"
#include "dercalc/factor.hpp"
#include "dercalc/forms.hpp"
#include "dercalc/groebner.hpp"
#include "darboux_oracle.hpp"
#include "dim1_oracle.hpp"
#include "factor_oracle.hpp"
#include "test_util.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace dercalc;
using dercalc::cli::Json;
using dercalc::testing::P;
using dercalc::testing::x1x2;
using dercalc::testing::xy;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            if (ok) detail << "first failure: " << what;
            ok = false;
        }
    }
};

Json cli_json(std::vector<std::string> args, int* code = nullptr) {
    args.push_back("--json");
    auto out = dercalc::cli::run(args);
    if (code) *code = out.code;
    return Json::parse(out.text);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void darboux_emptiness(Check& c) {
    for (const char* f2c : {"x*y + 1", "x^2*y + x*y + x^2", "y^2 + x"}) {
        const std::string f2 = f2c;
        auto t0 = std::chrono::steady_clock::now();
        Json j = cli_json({"darboux", "--vars", "x,y", "--coeffs", "1," + f2, "--max-degree", "3"});
        double s = seconds_since(t0);
        c.expect(j["status"] == "ok" && j["result"]["empty_certified"] == true, "d/dx + (" + f2 + ") d/dy not certified empty");
        c.expect(s < 60.0, "d/dx + (" + f2 + ") d/dy took " + std::to_string(s) + " s");
        c.detail << "[" << f2 << "] " << static_cast<int>(s * 1000) << " ms  ";
    }
}

void quadratic_family_instances(Check& c) {
    Json a = cli_json({"darboux", "--vars", "x,y", "--coeffs", "x^2 + y,y^2 + 2*x", "--max-degree", "4"});
    c.expect(a["result"]["empty_certified"] == true, "(1,2) instance not certified empty up to degree 4");
    Json b = cli_json({"darboux-verify", "--vars", "x,y", "--coeffs", "x^2 + y,y^2 + x", "--poly", "x - y"});
    c.expect(b["result"]["integral"] == true && b["result"]["cofactor"] == "x + y - 1", "(1,1) instance cofactor mismatch");
    Deriv D = Deriv::parse({"x", "y"}, {"x^2 + y", "y^2 + x"});
    c.expect(D(P("x - y")) == P("x + y - 1") * P("x - y"), "exact relation D(x - y) = (x + y - 1)(x - y)");
}

void pipeline(Check& c) {
    for (int a : {1, 2}) {
        std::string as = std::to_string(a);
        Json j = cli_json({"integral-element", "--vars", "x1,x2", "--coeffs", "1," + as + "*x2"});
        Deriv D = Deriv::parse({"x1", "x2"}, {"1", as + "*x2"});
        bool have = j["result"]["g"].is_string() && j["result"]["h"].is_string();
        c.expect(have, "a = " + as + ": pipeline returned no pair");
        if (!have) continue;
        MPoly g = P(j["result"]["g"].get<std::string>(), x1x2()), h = P(j["result"]["h"].get<std::string>(), x1x2());
        c.expect(D(g) == -divergence(D), "a = " + as + ": D(g) != -div D");
        c.expect((D(h) + h * D(g)).is_zero(), "a = " + as + ": D(h) + h D(g) != 0");
        c.expect(h.degree() >= 1, "a = " + as + ": h constant");
        if (a == 1) c.expect(g == P("-x1", x1x2()) && h == P("x2", x1x2()), "a = 1: expected (-x1, x2)");
        c.detail << "a=" << a << ": (" << g << ", " << h << ")  ";
    }
    Json n = cli_json({"integral-element", "--vars", "x,y", "--coeffs", "1,x*y + 1"});
    c.expect(n["result"]["stage"] == "fixed-cofactor kernel empty" && n["result"]["h"].is_null(), "d/dx + (xy + 1) d/dy: expected no h");
    c.expect(n["result"]["g"] == "-1/2*x^2", "d/dx + (xy + 1) d/dy: expected g = -1/2*x^2");
}

void identity_suite(Check& c) {
    std::mt19937_64 rng(1001);
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        Deriv D(x1x2(), {dercalc::testing::random_poly(rng, x1x2(), 3, 5), dercalc::testing::random_poly(rng, x1x2(), 3, 5)});
        MPoly g = dercalc::testing::random_poly(rng, x1x2(), 3, 5);
        Form1 w = omega_of(D);
        c.expect(delta(D, w).is_zero(), "delta(w_D) != 0");
        c.expect(wedge(w, d0(g)).c == -D(g), "w_D ^ dg != -D(g) vol");
        c.expect(d1(w).c == divergence(D), "d(w_D) != div(D) vol");
        c.expect(twisted(g, w).c == divergence(D) + D(g), "D_g(w_D) != (div D + D(g)) vol");

        auto [E, g2] = dercalc::testing::planted_divergence_pair(rng, x1x2(), 3);
        c.expect(E(g2) == -divergence(E), "planted pair does not satisfy D(g) = -div D");
        MPoly f = dercalc::testing::random_poly(rng, x1x2(), 3, 5);
        c.expect(twisted(g2, omega_of(E) * f).c == E(f), "D_g(f w_D) != D(f) vol");
        ++checked;
    }
    c.detail << checked << " random cases, 5 identities each";
}

void kernel_of_delta(Check& c) {
    std::mt19937_64 rng(1002);
    const unsigned deg = 4;
    int tested = 0;
    size_t elements = 0;
    while (tested < 50) {
        Deriv D(x1x2(), {dercalc::testing::random_poly(rng, x1x2(), 2, 4), dercalc::testing::random_poly(rng, x1x2(), 2, 4)});
        if (D.is_zero() || D.degree() < 1 || !is_reduced(D)) continue;
        ++tested;
        const unsigned m = static_cast<unsigned>(D.degree());
        detail::MonomialIndex dom(2, deg), cod(2, deg + m);
        QMatrix A(cod.size(), 2 * dom.size());
        for (size_t j = 0; j < dom.size(); ++j)
            for (size_t slot = 0; slot < 2; ++slot) {
                MPoly img = MPoly::monomial(x1x2(), dom[j], Rat(1)) * D.coeff(slot);
                for (const auto& [e, v] : img.terms()) A(cod.at(e), 2 * j + slot) = v;
            }
        auto basis = nullspace(A);
        // Expected dimension: multiples q w_D with deg q <= deg - m.
        size_t expected = m <= deg ? detail::MonomialIndex(2, deg - m).size() : 0;
        c.expect(basis.size() == expected, "nullspace dimension mismatch for " + D.to_string());
        for (const auto& v : basis) {
            MPoly c1(x1x2()), c2(x1x2());
            for (size_t j = 0; j < dom.size(); ++j) {
                c1.add_term(dom[j], v[2 * j]);
                c2.add_term(dom[j], v[2 * j + 1]);
            }
            Form1 w(c1, c2), om = omega_of(D);
            std::optional<MPoly> q1 = om.c1.is_zero() ? std::nullopt : exact_divide(c1, om.c1);
            std::optional<MPoly> q2 = om.c2.is_zero() ? std::nullopt : exact_divide(c2, om.c2);
            std::optional<MPoly> q = q1 ? q1 : q2;
            bool ok = q && (!q1 || !q2 || *q1 == *q2) && w == om * *q;
            c.expect(ok, "kernel element not a multiple of w_D for " + D.to_string());
            ++elements;
        }
    }
    c.detail << tested << " reduced derivations, " << elements << " kernel basis elements divided exactly";
}

void slice_preimages(Check& c) {
    RingPtr R = make_ring({"x"});
    std::vector<Deriv> Ds{Deriv(R, {MPoly(R)}), Deriv::parse({"x"}, {"1"}), Deriv::parse({"x"}, {"x"})};
    std::mt19937_64 rng(1003);
    std::uniform_int_distribution<unsigned> pw(0, 4);
    int cases = 0;
    for (const auto& D : Ds) {
        for (int i = 0; i < 100; ++i) {
            MPoly a = dercalc::testing::random_poly(rng, D.ring(), 4, 5, 0.6);
            unsigned n = pw(rng);
            SlicePreimage s = lf_preimage(D, a, n);
            const RingPtr& ext = s.extended.ring();
            MPoly t = MPoly::variable(ext, 1);
            c.expect(s.extended(s.h) == a.embed(ext) * t.pow(n), D.to_string() + ": extended D(h) != a t^n");
            MPoly rebuilt(ext);
            for (size_t k = 0; k < s.coeffs.size(); ++k) rebuilt += s.coeffs[k].embed(ext) * t.pow(static_cast<unsigned>(k));
            c.expect(rebuilt == s.h, "coefficient decomposition does not rebuild h");
            // D(a_{i-1}) + i a_i equals a at i - 1 = n and vanishes elsewhere.
            bool cascade = true;
            for (size_t k = 1; k <= s.coeffs.size(); ++k) {
                MPoly next = k < s.coeffs.size() ? s.coeffs[k] : MPoly(D.ring());
                MPoly lhs = D(s.coeffs[k - 1]) + next * Rat(static_cast<long>(k));
                cascade = cascade && lhs == (k - 1 == n ? a : MPoly(D.ring()));
            }
            c.expect(cascade && s.cascade_holds, D.to_string() + ": cascade relations fail");
            ++cases;
        }
    }
    c.detail << cases << " (D, a, n) cases";
}

void dimension_one(Check& c) {
    RingPtr T = make_ring({"t"});
    std::mt19937_64 rng(1004);
    const PartialFraction one = as_element(MPoly::constant(T, 1));
    int solvable = 0, surjective = 0, witnesses = 0;
    std::vector<Dim1Spec> specs;
    for (int i = 0; i < 50; ++i) specs.push_back(dercalc::testing::random_dim1_spec(rng, T));
    for (const auto& s : specs) {
        Dim1Solve r = solve_slice_dim1(s);
        bool oracle = false;
        for (unsigned M = 0; M <= 8 && !oracle; ++M) oracle = dercalc::testing::ansatz_preimage_exists(s, one, M, 8);
        c.expect(r.u.has_value() == oracle, "solve-slice disagrees with ansatz oracle on " + s.to_string());
        if (r.u) {
            ++solvable;
            c.expect(apply_dim1(s, *r.u) == one, "D(u) != 1 on " + s.to_string());
        }
        SurjectivityVerdict v = is_surjective_dim1(s);
        c.expect(v.surjective == (s.poles.empty() && s.numerator.degree() == 0), "surjectivity verdict wrong on " + s.to_string());
        if (v.surjective) {
            ++surjective;
            continue;
        }
        bool certified = v.witness && v.witness_check && !v.witness_check->u;
        for (unsigned M = 0; M <= 8 && certified; ++M)
            certified = !dercalc::testing::ansatz_preimage_exists(s, *v.witness, M, 8);
        c.expect(certified, "witness not certified on " + s.to_string());
        ++witnesses;
    }
    // D = (1/t) d/dt: D(u) = 1 is solvable while D is not surjective.
    Json a = cli_json({"dim1", "solve-slice", "--poles", "0:1", "--numerator", "1"});
    Json b = cli_json({"dim1", "surjective", "--poles", "0:1", "--numerator", "1"});
    c.expect(a["result"]["u"]["string"] == "1/2*t^2", "(1/t) d/dt: expected u = t^2/2");
    c.expect(b["result"]["surjective"] == false && b["result"]["witness"]["string"] == "1/t^2", "(1/t) d/dt: expected witness 1/t^2");
    c.expect(b["certificate"]["residues"][0]["residue"] == "1", "(1/t) d/dt: witness residue");
    Json e = cli_json({"dim1", "surjective", "--numerator", "3"});
    c.expect(e["result"]["surjective"] == true, "3 d/dt should be surjective");
    c.detail << specs.size() << " specs, " << solvable << " solvable, " << surjective << " surjective, " << witnesses
             << " certified witnesses";
}

void cohomology_probe(Check& c) {
    auto t0 = std::chrono::steady_clock::now();
    auto dims = [&](const std::string& f, const std::string& cuts) { return cli_json({"cohomology", "--poly", f, "--cutoffs", cuts})["result"]; };
    Json a = dims("x1", "6,8"), b = dims("x1*x2", "6,8,10"), q = dims("x1^2", "6,8");
    double s = seconds_since(t0);
    c.expect(a["h1"] == Json({0, 0}) && a["h2"] == Json({0, 0}), "f = x1: expected (0,0) at 6 and 8");
    c.expect(b["h2"] == Json({1, 1, 1}), "f = x1*x2: expected h2 = 1 at 6, 8, 10");
    c.expect(q["h1"] == Json({1, 1}), "f = x1^2: expected h1 = 1 at 6 and 8");
    c.expect(s < 30.0, "runtime " + std::to_string(s) + " s");
    c.detail << "x1 h=" << a["h1"].dump() << a["h2"].dump() << ", x1*x2 h2=" << b["h2"].dump() << ", x1^2 h1=" << q["h1"].dump() << ", "
             << static_cast<int>(s * 1000) << " ms";
}

void groebner_checks(Check& c) {
    RingPtr R = make_ring({"X", "Y"});
    c.expect(!ideal_membership(P("2*X", R), {P("3*Y^2", R), P("X^2 + Y^3", R)}), "2X should not lie in (3Y^2, X^2 + Y^3)");
    c.expect(contains_one({P("X", R), P("X*Y - 1", R)}), "(X, XY - 1) should be the unit ideal");
    Json g = cli_json({"groebner", "--polys", "3*Y^2,X^2 + Y^3", "--member", "2*X"});
    c.expect(g["result"]["member"] == false, "cli membership verdict");
    std::vector<bool> want{true, false, true};
    std::vector<std::string> Ws{"x1", "x2", "x1*x2"};
    for (size_t i = 0; i < Ws.size(); ++i)
        c.expect(cli_json({"q311", "--poly", Ws[i]})["result"] == want[i], "q311 on W = " + Ws[i]);
}

void factor_round_trip(Check& c) {
    using namespace dercalc::testing::factor_oracle;
    std::mt19937_64 rng(1005);
    std::uniform_int_distribution<int> count(1, 3), mult(1, 2);
    int exact = 0;
    for (int i = 0; i < 200; ++i) {
        std::multiset<std::string> expected;
        MPoly f = MPoly::constant(tring(), Rat(1));
        std::vector<MPoly> used;
        for (int k = count(rng); k > 0; --k) {
            MPoly p = random_low_irreducible(rng);
            if (std::find(used.begin(), used.end(), p) != used.end()) continue;
            used.push_back(p);
            unsigned m = static_cast<unsigned>(mult(rng));
            f *= p.pow(m);
            expected.insert(p.to_string() + "^" + std::to_string(m));
        }
        auto fz = factor_univar_q(f);
        bool ok = fz.expand(tring()) == f && factor_set(fz) == expected;
        c.expect(ok, "round trip failed on " + f.to_string());
        exact += ok;
    }
    Deriv D = Deriv::parse({"x", "y"}, {"x^2 + y", "y^2 + 2*x"});
    auto dirs = invariant_directions(D);
    MPoly prod = P("x") * P("y") * P("y - x");
    c.expect(dirs.W == prod, "W != xy(y - x)");
    c.expect(dirs.factors.factors.size() == 3 && dirs.factors.expand(xy()) == prod, "W does not factor as xy(y - x)");
    c.detail << exact << "/200 exact, W = " << dirs.W << " = " << dirs.factors.unit << "*x*(x - y)*y";
}

void cusp_ideal_invariance(Check& c) {
    Deriv D = Deriv::parse({"X", "Y", "Z"}, {"1/2*X", "1/3*Y", "1"});
    MPoly F = parse_poly("X^2 + Y^3", D.ring());
    GrobnerBasis G = buchberger({F});
    MPoly image = D(F);
    c.expect(normal_form(image, G).is_zero(), "normal form of D(F) is nonzero");
    c.detail << "D(X^2 + Y^3) = " << image << ", normal form 0";
}

void darboux_cross_check(Check& c) {
    std::mt19937_64 rng(1006);
    int agree = 0, undecided = 0, found = 0;
    for (int i = 0; i < 30; ++i) {
        Deriv D(xy(), {dercalc::testing::random_poly(rng, xy(), 2, 3, 0.5), dercalc::testing::random_poly(rng, xy(), 2, 3, 0.5)});
        if (D.is_zero()) {
            --i;
            continue;
        }
        auto pruned = darboux_search(D, 2);
        auto brute = dercalc::testing::brute_force_darboux(D, 2);
        bool decided = pruned.status != DarbouxStatus::Inconclusive && brute.verdict != dercalc::testing::OracleVerdict::Unknown;
        if (!decided) {
            ++undecided;
            bool conflict = (pruned.status == DarbouxStatus::EmptyCertified && brute.verdict == dercalc::testing::OracleVerdict::Found) ||
                            (pruned.status == DarbouxStatus::Found && brute.verdict == dercalc::testing::OracleVerdict::Empty);
            c.expect(!conflict, "verdict conflict on " + D.to_string());
            continue;
        }
        bool same = (pruned.status == DarbouxStatus::Found) == (brute.verdict == dercalc::testing::OracleVerdict::Found);
        c.expect(same, "pruned and full searches disagree on " + D.to_string());
        agree += same;
        found += pruned.status == DarbouxStatus::Found;
    }
    c.expect(undecided == 0, std::to_string(undecided) + " of 30 derivations left undecided by one of the searches");
    c.detail << agree << "/30 agree (" << found << " found), " << undecided << " undecided";
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Check&)> run;
    };
    std::vector<Criterion> all{
        {1, "darboux emptiness for d/dx + p(x,y) d/dy examples", darboux_emptiness},
        {2, "quadratic family instances (1,2) and (1,1)", quadratic_family_instances},
        {3, "divergence-cofactor pipeline", pipeline},
        {4, "forms identity suite", identity_suite},
        {5, "kernel of delta is B*w_D", kernel_of_delta},
        {6, "locally finite slice preimages and cascade", slice_preimages},
        {7, "dimension one: residue criterion and witnesses", dimension_one},
        {8, "truncated twisted cohomology", cohomology_probe},
        {9, "groebner membership, unit ideal, q311", groebner_checks},
        {10, "factorization round trip", factor_round_trip},
        {11, "cusp ideal is invariant", cusp_ideal_invariance},
        {12, "pruned vs full darboux search", darboux_cross_check},
    };
    int failures = 0;
    for (const auto& cr : all) {
        Check c;
        auto t0 = std::chrono::steady_clock::now();
        try {
            cr.run(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        double s = seconds_since(t0);
        std::printf("%s %2d  %s  (%.2f s)  %s\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name, s, c.detail.str().c_str());
        std::fflush(stdout);
        failures += !c.ok;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failures, all.size());
    return failures ? 1 : 0;
}
