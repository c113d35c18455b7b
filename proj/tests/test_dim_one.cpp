#include "dercalc/dim_one.hpp"
#include "dim1_oracle.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace dercalc;

namespace {

RingPtr T() {
    static RingPtr r = make_ring({"t"});
    return r;
}
MPoly Pt(const std::string& s) { return dercalc::testing::P(s, T()); }
Dim1Spec spec(const std::string& poles, const std::string& f) { return Dim1Spec(Dim1Spec::parse_poles(poles), Pt(f)); }

} // namespace

TEST(PartialFractions, Examples) {
    auto a = partial_fractions(Pt("1"), {{Rat(0), 1}, {Rat(1), 1}});
    EXPECT_TRUE(a.poly.is_zero());
    EXPECT_EQ(a.terms, (std::vector<PoleTerm>{{Rat(0), 1, Rat(-1)}, {Rat(1), 1, Rat(1)}}));
    EXPECT_EQ(a.to_string(), "-1/t + 1/(t - 1)");

    auto b = partial_fractions(Pt("t^2"), {{Rat(1), 1}});
    EXPECT_EQ(b.poly, Pt("t + 1"));
    EXPECT_EQ(b.terms, (std::vector<PoleTerm>{{Rat(1), 1, Rat(1)}}));

    auto c = partial_fractions(Pt("1"), {{Rat(0), 2}});
    EXPECT_EQ(c.terms, (std::vector<PoleTerm>{{Rat(0), 2, Rat(1)}}));
    EXPECT_EQ(c.residue(Rat(0)), Rat(0));
    EXPECT_EQ(c.to_string(), "1/t^2");

    EXPECT_EQ(partial_fractions(Pt("1"), {{Rat(-1, 2), 1}}).to_string(), "1/(t + 1/2)");
    EXPECT_THROW(partial_fractions(Pt("1"), {{Rat(0), 1}, {Rat(0), 2}}), std::invalid_argument);
}

TEST(PartialFractions, RecombinationIsIdentity) {
    std::mt19937_64 rng(60);
    std::uniform_int_distribution<int> np(0, 3), mult(1, 3), num(-5, 5), den(1, 4);
    for (int i = 0; i < 100; ++i) {
        std::vector<Pole> poles;
        int k = np(rng);
        while (static_cast<int>(poles.size()) < k) {
            Rat a(num(rng), den(rng));
            bool dup = false;
            for (const auto& p : poles) dup = dup || p.alpha == a;
            if (!dup) poles.push_back({a, static_cast<unsigned>(mult(rng))});
        }
        MPoly n = dercalc::testing::random_poly(rng, T(), 7, 5, 0.7);
        auto pf = partial_fractions(n, poles);
        auto [rn, rd] = pf.recombine();
        // rn / prod(rd) == n / prod(poles)  <=>  rn * prod(poles) == n * prod(rd)
        UPoly lhs = upoly::mul(upoly::from_mpoly(rn, 0), detail::pole_product(poles));
        UPoly rhs = upoly::mul(upoly::from_mpoly(n, 0), detail::pole_product(rd));
        EXPECT_EQ(lhs, rhs) << n << " -> " << pf;
    }
}

TEST(Dim1Spec, Validation) {
    EXPECT_THROW(spec("1:1", "t - 1"), std::invalid_argument);
    EXPECT_THROW(spec("0:1,0:2", "1"), std::invalid_argument);
    EXPECT_THROW(spec("0:0", "1"), std::invalid_argument);
    EXPECT_THROW(spec("", "0"), std::invalid_argument);
    EXPECT_THROW(spec("0", "1"), std::invalid_argument);
    EXPECT_THROW(Dim1Spec({}, dercalc::testing::P("x")), std::invalid_argument);
    EXPECT_EQ(spec("0:1,-2:3", "t + 1").to_string(), "(t + 1)/(t*(t + 2)^3) d/dt");
}

TEST(SolveSlice, Examples) {
    auto a = solve_slice_dim1(spec("0:1", "1"));
    ASSERT_TRUE(a.u);
    EXPECT_EQ(a.u->poly, Pt("1/2*t^2"));
    EXPECT_TRUE(a.u->is_polynomial());

    auto b = solve_slice_dim1(spec("0:1", "t - 1"));
    EXPECT_FALSE(b.u);
    EXPECT_FALSE(b.obstruction.empty());

    auto c = solve_slice_dim1(spec("", "1"));
    ASSERT_TRUE(c.u);
    EXPECT_EQ(c.u->poly, Pt("t"));
}

TEST(Preimage, ResidueObstruction) {
    Dim1Spec s = spec("0:1", "1");
    auto r = preimage_dim1(s, partial_fractions(Pt("1"), {{Rat(0), 2}}));
    EXPECT_FALSE(r.u);
    ASSERT_EQ(r.residues.size(), 1u);
    EXPECT_EQ(r.residues[0].second, Rat(1));
    // 1/t^3 needs u' = 1/t^2, so u = -1/t.
    auto q = preimage_dim1(s, partial_fractions(Pt("1"), {{Rat(0), 3}}));
    ASSERT_TRUE(q.u);
    EXPECT_EQ(q.u->to_string(), "-1/t");
    EXPECT_THROW(preimage_dim1(s, partial_fractions(Pt("1"), {{Rat(5), 1}})), std::invalid_argument);
}

TEST(Preimage, RoundTripOnRandomElements) {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 60; ++i) {
        Dim1Spec s = dercalc::testing::random_dim1_spec(rng, T());
        // Random u in R; the recovered preimage differs from u by a constant.
        std::vector<Pole> den;
        for (const auto& p : s.poles) den.push_back({p.alpha, p.mult + 1});
        PartialFraction u = partial_fractions(dercalc::testing::random_poly(rng, T(), 5, 4, 0.7), den);
        PartialFraction w = apply_dim1(s, u);
        auto r = preimage_dim1(s, w);
        ASSERT_TRUE(r.u) << s.to_string() << " u=" << u;
        EXPECT_EQ(apply_dim1(s, *r.u), w);
        EXPECT_EQ(derivative(*r.u), derivative(u));
    }
}

TEST(SolveSlice, AgreesWithAnsatzOracle) {
    std::mt19937_64 rng(62);
    int solvable = 0;
    for (int i = 0; i < 50; ++i) {
        Dim1Spec s = dercalc::testing::random_dim1_spec(rng, T());
        auto r = solve_slice_dim1(s);
        if (r.u) {
            ++solvable;
            EXPECT_EQ(apply_dim1(s, *r.u), as_element(MPoly::constant(T(), 1)));
        } else {
            for (unsigned M = 0; M <= 8; ++M)
                EXPECT_FALSE(dercalc::testing::ansatz_preimage_exists(s, as_element(MPoly::constant(T(), 1)), M, 8))
                    << s.to_string() << " M=" << M;
        }
    }
    EXPECT_GT(solvable, 0);
}

TEST(Surjectivity, Examples) {
    EXPECT_TRUE(is_surjective_dim1(spec("", "3")).surjective);
    EXPECT_FALSE(nonimage_witness(spec("", "3")));

    auto a = is_surjective_dim1(spec("0:1", "1"));
    EXPECT_FALSE(a.surjective);
    ASSERT_TRUE(a.witness);
    EXPECT_EQ(a.witness->to_string(), "1/t^2");
    ASSERT_TRUE(a.witness_check);
    EXPECT_EQ(a.witness_check->residues[0].second, Rat(1));

    auto b = is_surjective_dim1(spec("", "t"));
    EXPECT_FALSE(b.surjective);
    ASSERT_TRUE(b.witness);
    EXPECT_EQ(b.witness->to_string(), "1");

    EXPECT_EQ(nonimage_witness(spec("0:2", "1"))->to_string(), "1/t^3");
}

TEST(Surjectivity, WitnessesAreCertified) {
    std::mt19937_64 rng(63);
    for (int i = 0; i < 50; ++i) {
        Dim1Spec s = dercalc::testing::random_dim1_spec(rng, T());
        auto v = is_surjective_dim1(s);
        EXPECT_EQ(v.surjective, s.poles.empty() && s.numerator.degree() == 0);
        if (v.surjective) continue;
        ASSERT_TRUE(v.witness && v.witness_check);
        EXPECT_FALSE(v.witness_check->u);
        for (unsigned M = 0; M <= 4; ++M) EXPECT_FALSE(dercalc::testing::ansatz_preimage_exists(s, *v.witness, M, 6));
    }
}
