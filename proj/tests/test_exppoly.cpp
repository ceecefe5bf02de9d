#include <smtlab/error.hpp>
#include <smtlab/exppoly.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace smtlab;

namespace
{

ExpPoly P(const char *s)
{
    return parse_exppoly(s);
}

} // namespace

TEST(ExpPoly, ParsesAndPrints)
{
    EXPECT_EQ(P("1 + exp(z)").to_string(), "1 + exp(z)");
    EXPECT_EQ(P("exp(z) + 1"), P("1 + exp(z)"));
    EXPECT_EQ(P("z^2 - z^2"), ExpPoly());
    EXPECT_EQ(P("exp(0*z)"), ExpPoly(1));
    EXPECT_EQ(P("(z+1)^2"), P("z^2 + 2*z + 1"));
    EXPECT_EQ(P("exp(z)*exp(z)"), P("exp(2*z)"));
    EXPECT_EQ(P("z^-2*z^3"), P("z"));
    EXPECT_EQ(P("1/z"), P("z^-1"));
    EXPECT_EQ(P("i*i"), ExpPoly(-1));
    EXPECT_EQ(P("exp(i*z)").terms().begin()->first, GaussRational(0, 1));
    EXPECT_EQ(P("1/2*exp(-3/4*z)").terms().begin()->first, GaussRational(make_rational(-3, 4)));
    EXPECT_TRUE(P("3*z^2 + 1").is_polynomial());
    EXPECT_EQ(P("3*z^2 + 1").polynomial_degree(), 2);
    EXPECT_TRUE(P("z^-1 + z").has_negative_powers());
    EXPECT_EQ(P("z^-3 + z").pole_order(), 3);
}

TEST(ExpPoly, RoundTripsThroughText)
{
    for (const char *s : {"1 + exp(z)", "(1+2*i)*z^2*exp((1/2+i)*z)", "z^-1 - 3*z + exp(-z)", "-exp(2*z)", "i*z"}) {
        const ExpPoly f = P(s);
        EXPECT_EQ(P(f.to_string().c_str()), f) << s << " -> " << f.to_string();
    }
}

TEST(ExpPoly, RejectsMalformed)
{
    for (const char *s : {"", "z +", "exp(z^2)", "exp(z*z)", "(1+z)^-1", "1/(1+z)", "y", "exp(1)", "z^", "2^z"}) {
        EXPECT_THROW(P(s), input_error) << s;
    }
}

TEST(ExpPoly, DerivativeIsExact)
{
    EXPECT_EQ(P("z^3").derivative(), P("3*z^2"));
    EXPECT_EQ(P("exp(2*z)").derivative(), P("2*exp(2*z)"));
    EXPECT_EQ(P("z*exp(i*z)").derivative(), P("exp(i*z) + i*z*exp(i*z)"));
    EXPECT_EQ(P("z^-1").derivative(), P("-z^-2"));
    EXPECT_EQ(P("exp(z)").derivative(5), P("exp(z)"));
    EXPECT_EQ(P("z^2").derivative(3), ExpPoly());
}

TEST(ExpPoly, ProductRuleAndLinearity)
{
    std::mt19937_64 rng(11);
    const char *pool[] = {"z", "exp(z)", "z^2*exp(-z)", "1 + i*z", "exp((1/2+i)*z)", "z^-1 + 2"};
    for (int t = 0; t < 40; ++t) {
        const ExpPoly f = P(pool[rng() % 6]);
        const ExpPoly g = P(pool[rng() % 6]);
        EXPECT_EQ((f * g).derivative(), f.derivative() * g + f * g.derivative());
        EXPECT_EQ((f + g).derivative(), f.derivative() + g.derivative());
        EXPECT_EQ(f * g, g * f);
    }
}

TEST(ExpPoly, EvaluationMatchesStdComplex)
{
    const ExpPoly f = P("(1+2*i)*z^2*exp((1/2+i)*z) + z^-1 - 3");
    for (Complex z : {Complex(0.3, -1.2), Complex(-2, 0.5), Complex(1.5, 1.5)}) {
        const Complex expect = Complex(1, 2) * z * z * std::exp(Complex(0.5, 1) * z) + 1.0 / z - 3.0;
        EXPECT_LT(std::abs(f.evaluate(z) - expect), 1e-12 * (1 + std::abs(expect)));
        EXPECT_NEAR(f.log_abs(z), std::log(std::abs(expect)), 1e-12);
    }
}

TEST(ExpPoly, ScaledEvaluationAvoidsOverflow)
{
    const ExpPoly f = P("1 + exp(z) + exp(2*z)");
    const double lg = f.log_abs(Complex(800, 0));
    EXPECT_NEAR(lg, 1600, 1e-9);
    EXPECT_TRUE(std::isinf(std::abs(f.evaluate(Complex(800, 0)))));
    EXPECT_NEAR(log_norm({P("1"), P("exp(z)"), P("exp(2*z)")}, Complex(800, 0)), 1600, 1e-9);
    EXPECT_NEAR(log_norm({P("1"), P("z")}, Complex(0, 1)), 0.5 * std::log(2.0), 1e-14);
}

TEST(ExpPoly, ComposeSubstitutesComponents)
{
    const std::size_t n = 3;
    const std::vector<ExpPoly> f{P("1"), P("exp(z)"), P("exp(2*z)")};
    EXPECT_TRUE(compose(parse_poly("x0*x2 - x1^2", n), f).is_zero());
    EXPECT_EQ(compose(parse_poly("x2 - 4*x0", n), f), P("exp(2*z) - 4"));
    EXPECT_EQ(compose(parse_poly("x1^3", n), f), P("exp(3*z)"));
    EXPECT_THROW(compose(parse_poly("x0", 2), f), input_error);
}

TEST(GaussRational, FieldOperations)
{
    const GaussRational a(make_rational(1, 2), 3);
    const GaussRational b(-2, make_rational(1, 3));
    EXPECT_EQ(a * a.inverse(), GaussRational(1));
    EXPECT_EQ((a / b) * b, a);
    EXPECT_EQ(a.conj().im, -a.im);
    EXPECT_EQ(a.norm(), make_rational(37, 4));
    EXPECT_THROW(GaussRational().inverse(), input_error);
}
