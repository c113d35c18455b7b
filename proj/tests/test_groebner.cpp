#include "dercalc/groebner.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace dercalc;
using dercalc::testing::P;
using dercalc::testing::x1x2;
using dercalc::testing::xy;

namespace {
RingPtr XY() {
    static RingPtr r = make_ring({"X", "Y"});
    return r;
}
std::vector<Exponent> leading_terms(const GrobnerBasis& G) {
    std::vector<Exponent> out;
    for (const auto& g : G.generators) out.push_back(g.leading_exponent());
    return out;
}
} // namespace

TEST(Buchberger, Examples) {
    auto G = buchberger({P("x"), P("x*y - 1")});
    EXPECT_TRUE(G.is_unit());
    EXPECT_EQ(G.generators[0], P("1"));

    auto C = buchberger({P("x^2 + y^3"), P("y^2")});
    EXPECT_EQ(leading_terms(C), (std::vector<Exponent>{{0, 2}, {2, 0}}));
    EXPECT_EQ(C.generators[0], P("y^2"));
    EXPECT_EQ(C.generators[1], P("x^2"));

    auto single = buchberger({P("3*x^2 - 6*y")});
    ASSERT_EQ(single.generators.size(), 1u);
    EXPECT_EQ(single.generators[0], P("x^2 - 2*y"));

    EXPECT_THROW(buchberger({P("0")}), std::invalid_argument);
}

TEST(Buchberger, LexEliminationShape) {
    // x^2 + y^2 - 1, x - y : lex basis has a univariate polynomial in y.
    auto G = buchberger({P("x^2 + y^2 - 1"), P("x - y")}, TermOrder::Lex);
    ASSERT_EQ(G.generators.size(), 2u);
    EXPECT_EQ(G.generators[0], P("y^2 - 1/2"));
    EXPECT_EQ(G.generators[1], P("x - y"));
}

TEST(Buchberger, IdempotentOnRandomIdeals) {
    std::mt19937_64 rng(20);
    for (int i = 0; i < 40; ++i) {
        std::vector<MPoly> gens;
        for (int k = 0; k < 3; ++k) gens.push_back(dercalc::testing::random_nonzero_poly(rng, xy(), 2, 3, 0.4));
        for (TermOrder o : {TermOrder::GrLex, TermOrder::Lex}) {
            auto G = buchberger(gens, o);
            auto G2 = buchberger(G.generators, o);
            EXPECT_EQ(G.generators, G2.generators);
            for (const auto& g : gens) EXPECT_TRUE(normal_form(g, G).is_zero());
            for (const auto& g : G.generators) EXPECT_EQ(g.leading_coeff(), Rat(1));
        }
    }
}

TEST(NormalForm, Examples) {
    MPoly cusp = parse_poly("X^2 + Y^3", XY());
    auto G = buchberger({cusp});
    EXPECT_TRUE(normal_form(cusp, G).is_zero());
    EXPECT_EQ(normal_form(P("1"), buchberger({P("x")})), P("1"));
    auto C = buchberger({P("x^2 + y^3"), P("y^2")});
    EXPECT_EQ(normal_form(P("2*x"), C), P("2*x"));
}

TEST(NormalForm, Linearity) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 50; ++i) {
        std::vector<MPoly> gens{dercalc::testing::random_nonzero_poly(rng, xy(), 2, 3), dercalc::testing::random_nonzero_poly(rng, xy(), 2, 3)};
        auto G = buchberger(gens);
        MPoly f = dercalc::testing::random_poly(rng, xy(), 3, 4), g = dercalc::testing::random_poly(rng, xy(), 3, 4);
        EXPECT_EQ(normal_form(f + g, G), normal_form(normal_form(f, G) + normal_form(g, G), G));
    }
}

TEST(IdealMembership, Examples) {
    // Cusp X^2 + Y^3: F_X = 2X is not in (F_Y, F) = (3Y^2, X^2 + Y^3).
    EXPECT_FALSE(ideal_membership(parse_poly("2*X", XY()), {parse_poly("3*Y^2", XY()), parse_poly("X^2 + Y^3", XY())}));
    // Hyperbola XY - 1: f_x = Y lies in (F_Y, F) = (X, XY - 1), the unit ideal.
    EXPECT_TRUE(ideal_membership(parse_poly("Y", XY()), {parse_poly("X", XY()), parse_poly("X*Y - 1", XY())}));
    MPoly f = P("x^3 - y + 2");
    EXPECT_TRUE(ideal_membership(f, {f}));
}

TEST(IdealMembership, AgreesWithExactDivisionForPrincipalIdeals) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 200; ++i) {
        MPoly g = dercalc::testing::random_nonzero_poly(rng, xy(), 2, 4);
        MPoly f = (i % 2) ? g * dercalc::testing::random_poly(rng, xy(), 2, 4) : dercalc::testing::random_poly(rng, xy(), 3, 4);
        EXPECT_EQ(ideal_membership(f, {g}), exact_divide(f, g).has_value()) << f << " / " << g;
    }
}

TEST(ContainsOne, Examples) {
    EXPECT_TRUE(contains_one({P("x"), P("x*y - 1")}));
    EXPECT_FALSE(contains_one({P("1 + x2", x1x2())}));
    EXPECT_TRUE(contains_one({P("x2^2", x1x2()), P("1 + x1*x2", x1x2())}));
    // Certificate: 1 = (1 - x1 x2)(1 + x1 x2) + x1^2 x2^2.
    MPoly a = P("1 - x1*x2", x1x2()), b = P("1 + x1*x2", x1x2()), c = P("x1^2", x1x2()), d = P("x2^2", x1x2());
    EXPECT_EQ(a * b + c * d, P("1", x1x2()));
}

TEST(RationalPoint, ZeroDimensional) {
    // x^2 = 2 has no rational root.
    auto r = find_rational_point({P("x^2 - 2"), P("y - x")}, xy());
    EXPECT_EQ(r.status, PointStatus::NoneCertified);
    auto s = find_rational_point({P("x^2 - 4"), P("y - x - 1")}, xy());
    ASSERT_EQ(s.status, PointStatus::Found);
    EXPECT_TRUE(P("x^2 - 4").evaluate(s.point).is_zero());
    EXPECT_TRUE(P("y - x - 1").evaluate(s.point).is_zero());
    EXPECT_EQ(find_rational_point({P("x"), P("x - 1")}, xy()).status, PointStatus::NoneCertified);
}

TEST(RationalPoint, PositiveDimensional) {
    auto r = find_rational_point({P("x*y - 1")}, xy());
    ASSERT_EQ(r.status, PointStatus::Found);
    EXPECT_TRUE(P("x*y - 1").evaluate(r.point).is_zero());
    auto free = find_rational_point({}, xy());
    EXPECT_EQ(free.status, PointStatus::Found);
    EXPECT_EQ(free.point, (std::vector<Rat>{Rat(0), Rat(0)}));
}
