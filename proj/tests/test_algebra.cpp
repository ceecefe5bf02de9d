#include "oracle.hpp"

#include <smtlab/error.hpp>
#include <smtlab/groebner.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace smtlab;

namespace
{

Ideal ideal_of(std::size_t n, std::initializer_list<const char *> gens)
{
    std::vector<Poly> ps;
    for (const char *g : gens) {
        ps.push_back(parse_poly(g, n));
    }
    return Ideal(n, std::move(ps));
}

std::vector<std::string> basis_strings(const GroebnerBasis &gb)
{
    std::vector<std::string> out;
    for (const auto &p : gb.polys) {
        out.push_back(p.to_string());
    }
    return out;
}

const char *twisted_cubic[] = {"x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"};

Ideal twisted()
{
    return ideal_of(4, {twisted_cubic[0], twisted_cubic[1], twisted_cubic[2]});
}

} // namespace

TEST(Rational, ParsesExactly)
{
    EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
    EXPECT_EQ(parse_rational("-0.25"), Rational(-1, 4));
    EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
    EXPECT_EQ(parse_rational("0.0625"), Rational(1, 16));
    EXPECT_EQ(parse_rational("010"), Rational(10));
    EXPECT_THROW(parse_rational("1/0"), input_error);
    EXPECT_THROW(parse_rational("abc"), input_error);
}

TEST(Poly, ParseAndPrintRoundTrip)
{
    Poly p = parse_poly("3/2*x0^2*x1 - x2^3", 3);
    EXPECT_EQ(parse_poly(p.to_string(), 3), p);
    EXPECT_TRUE(p.is_homogeneous());
    EXPECT_EQ(parse_poly("(x0+x1)^2", 2), parse_poly("x0^2 + 2*x0*x1 + x1^2", 2));
    EXPECT_THROW(parse_poly("x0 +", 2), input_error);
    EXPECT_THROW(parse_poly("x5", 2), input_error);
}

TEST(Groebner, PrincipalMonomial)
{
    auto gb = ideal_of(3, {"x0"}).basis(TermOrder::grevlex());
    ASSERT_EQ(gb.polys.size(), 1u);
    EXPECT_EQ(gb.polys[0], parse_poly("x0", 3));
}

TEST(Groebner, Conic)
{
    auto gb = ideal_of(3, {"x0*x2 - x1^2"}).basis(TermOrder::grevlex());
    ASSERT_EQ(gb.polys.size(), 1u);
    EXPECT_EQ(gb.polys[0], parse_poly("x0*x2 - x1^2", 3) * Rational(-1));
}

TEST(Groebner, TwistedCubicAlreadyReduced)
{
    auto gb = twisted().basis(TermOrder::grevlex());
    ASSERT_EQ(gb.polys.size(), 3u);
    // Monic under grevlex: leading terms x1^2, x1*x2, x2^2.
    std::vector<Poly> expect{parse_poly("x1^2 - x0*x2", 4), parse_poly("x1*x2 - x0*x3", 4),
                             parse_poly("x2^2 - x1*x3", 4)};
    for (const auto &e : expect) {
        EXPECT_NE(std::find(gb.polys.begin(), gb.polys.end(), e), gb.polys.end()) << e.to_string();
    }
}

TEST(Groebner, Determinism)
{
    auto a = groebner_basis(twisted(), TermOrder::lex());
    auto b = groebner_basis(twisted(), TermOrder::lex());
    EXPECT_EQ(basis_strings(a), basis_strings(b));
}

TEST(Groebner, RejectsNonHomogeneous)
{
    EXPECT_THROW(ideal_of(2, {"x0^2 + x1"}), input_error);
}

TEST(Groebner, BudgetIsEnforced)
{
    GroebnerBudget tiny;
    tiny.max_basis = 2;
    EXPECT_THROW(groebner_basis(twisted(), TermOrder::lex(), tiny), resource_error);
    tiny = {};
    tiny.max_degree = 1;
    EXPECT_THROW(groebner_basis(twisted(), TermOrder::grevlex(), tiny), resource_error);
}

TEST(Groebner, EveryOrderSpansSameIdeal)
{
    std::vector<TermOrder> orders{TermOrder::grevlex(), TermOrder::lex(),
                                  TermOrder::weight({Rational(3), Rational(0), Rational(1, 2), Rational(2)}),
                                  TermOrder::elimination({true, false, true, false})};
    for (const auto &o : orders) {
        auto gb = groebner_basis(twisted(), o);
        for (const char *g : twisted_cubic) {
            EXPECT_TRUE(normal_form(parse_poly(g, 4), gb).is_zero()) << o.describe();
        }
        for (std::size_t u = 1; u <= 5; ++u) {
            EXPECT_EQ(standard_monomials(gb, static_cast<int>(u)).size(), 3 * u + 1) << o.describe();
        }
    }
}

TEST(Hilbert, Examples)
{
    EXPECT_EQ(hilbert_function(Ideal::zero(3), 3), 10);
    EXPECT_EQ(hilbert_function(ideal_of(3, {"x0*x2 - x1^2"}), 2), 5);
    EXPECT_EQ(hilbert_function(twisted(), 1), 4);
    EXPECT_THROW(hilbert_function(twisted(), 0), input_error);
}

TEST(Hilbert, ZeroIdealBinomials)
{
    for (std::size_t n = 0; n <= 4; ++n) {
        for (int u = 1; u <= 10; ++u) {
            EXPECT_EQ(hilbert_function(Ideal::zero(n + 1), u), binomial(static_cast<unsigned long>(n) + u, n));
        }
    }
}

TEST(Hilbert, SeriesNumeratorSmallCases)
{
    // <x0*x1> in 2 variables: 1 - t^2.
    std::vector<Integer> expect{1, 0, -1};
    EXPECT_EQ(hilbert_series_numerator({Monomial({1, 1})}, 2), expect);
    // <x0, x1^2> in 2 variables: (1 - t)(1 - t^2).
    expect = {1, -1, -1, 1};
    EXPECT_EQ(hilbert_series_numerator({Monomial({1, 0}), Monomial({0, 2})}, 2), expect);
}

TEST(Hilbert, AgreesWithLinearAlgebraOracle)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 2 + trial % 3; // 2..4 variables, i.e. n <= 3
        int ngens = 1 + trial % 3;
        std::vector<Poly> gens;
        for (int g = 0; g < ngens; ++g) {
            int deg = 1 + (trial + g) % 3;
            Poly p(n);
            for (const auto &m : oracle::all_monomials(n, deg)) {
                int c = coef(rng);
                if (c != 0 && rng() % 2 == 0) {
                    p.add_term(m, c);
                }
            }
            if (!p.is_zero()) {
                gens.push_back(p);
            }
        }
        Ideal I(n, gens);
        for (int u = 1; u <= 4; ++u) {
            EXPECT_EQ(hilbert_function(I, u), static_cast<unsigned long>(oracle::quotient_dimension(gens, n, u)))
                << "trial " << trial << " u " << u;
        }
    }
}

TEST(DimensionDegree, Examples)
{
    for (std::size_t n = 1; n <= 4; ++n) {
        auto dd = dimension_and_degree(Ideal::zero(n + 1));
        EXPECT_EQ(dd.dim, static_cast<int>(n));
        EXPECT_EQ(*dd.degree, 1);
    }
    auto conic = dimension_and_degree(ideal_of(3, {"x0*x2 - x1^2"}));
    EXPECT_EQ(conic.dim, 1);
    EXPECT_EQ(*conic.degree, 2);
    for (int u = 1; u <= 8; ++u) {
        EXPECT_EQ(hilbert_polynomial_value(conic, u), 2 * u + 1);
    }
    auto tc = dimension_and_degree(twisted());
    EXPECT_EQ(tc.dim, 1);
    EXPECT_EQ(*tc.degree, 3);
    auto empty = dimension_and_degree(ideal_of(3, {"x0", "x1", "x2"}));
    EXPECT_EQ(empty.dim, -1);
    EXPECT_FALSE(empty.degree.has_value());
    auto unit = dimension_and_degree(Ideal(2, {Poly::constant(2, 1)}));
    EXPECT_EQ(unit.dim, -1);
}

TEST(DimensionDegree, Hypersurfaces)
{
    std::mt19937_64 rng(11);
    for (std::size_t n = 1; n <= 3; ++n) {
        for (int d = 1; d <= 4; ++d) {
            Poly p(n + 1);
            for (const auto &m : oracle::all_monomials(n + 1, d)) {
                p.add_term(m, static_cast<long>(rng() % 5) - 2);
            }
            p.add_term(Monomial::variable(n + 1, 0, d), 7);
            auto dd = dimension_and_degree(Ideal(n + 1, {p}));
            EXPECT_EQ(dd.dim, static_cast<int>(n) - 1);
            EXPECT_EQ(*dd.degree, d);
        }
    }
}

TEST(DimensionDegree, PointsAndLinearSpaces)
{
    // Two points in P^2: (1:0:0), (0:1:0).
    auto dd = dimension_and_degree(ideal_of(3, {"x2", "x0*x1"}));
    EXPECT_EQ(dd.dim, 0);
    EXPECT_EQ(*dd.degree, 2);
    // A line and a point: union is not equidimensional, dimension 1 degree 1.
    dd = dimension_and_degree(ideal_of(3, {"x0*x2", "x1*x2"}));
    EXPECT_EQ(dd.dim, 1);
    EXPECT_EQ(*dd.degree, 1);
}

TEST(Eliminate, Veronese)
{
    // Graph of (s:t) -> (s^2 : st : t^2) with variables s,t,y0,y1,y2; y has degree 2.
    Ideal graph(5,
                {parse_poly("x2 - x0^2", 5), parse_poly("x3 - x0*x1", 5), parse_poly("x4 - x1^2", 5)},
                {1, 1, 2, 2, 2});
    Ideal img = eliminate(graph, {2, 3, 4});
    ASSERT_EQ(img.generators().size(), 1u);
    EXPECT_TRUE(img.standard_grading());
    EXPECT_EQ(img.generators()[0], parse_poly("x1^2 - x0*x2", 3));
}

TEST(Eliminate, KeepAllAndIdentityGraph)
{
    Ideal all = eliminate(twisted(), {0, 1, 2, 3});
    EXPECT_EQ(all.generators().size(), 3u);
    Ideal id(4, {parse_poly("x2 - x0", 4), parse_poly("x3 - x1", 4)});
    EXPECT_TRUE(eliminate(id, {2, 3}).generators().empty());
    EXPECT_THROW(eliminate(id, {}), input_error);
}
