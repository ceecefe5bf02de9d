#include "random_families.hpp"

#include <smtlab/bounds.hpp>
#include <smtlab/error.hpp>
#include <smtlab/family.hpp>

#include <gtest/gtest.h>

using namespace smtlab;
using testing_support::base;

namespace
{

FamilyGeometry family_on(const Variety &V, std::initializer_list<const char *> polys)
{
    std::vector<Poly> ps;
    for (const char *p : polys) {
        ps.push_back(parse_poly(p, V.nvars()));
    }
    return FamilyGeometry(V, HypersurfaceFamily(V, ps));
}

// Exhaustive maximum of #G / c(G), ties by size then lexicographic order.
DistributiveConstant brute_delta(const FamilyGeometry &g, Mask sub, empty_convention c)
{
    DistributiveConstant best{Rational(-1), 0};
    for (Mask m = 1; m <= sub; ++m) {
        if ((m & ~sub) != 0) {
            continue;
        }
        if (c == empty_convention::skip_empty && g.empty_intersection(m)) {
            continue;
        }
        Rational r = make_rational(popcount(m), g.codim(m));
        bool take = best.witness == 0 || r > best.value
                    || (r == best.value && (popcount(m) < popcount(best.witness)
                                            || (popcount(m) == popcount(best.witness) && lex_less(m, best.witness))));
        if (take) {
            best = {r, m};
        }
    }
    return best;
}

} // namespace

TEST(Masks, LexicographicTuples)
{
    EXPECT_TRUE(lex_less(0b011, 0b101));  // {1,2} < {1,3}
    EXPECT_TRUE(lex_less(0b011, 0b111));  // prefix first
    EXPECT_FALSE(lex_less(0b110, 0b011)); // {2,3} > {1,2}
    EXPECT_TRUE(lex_less(0b1001, 0b0110)); // {1,4} < {2,3}
    EXPECT_EQ(mask_to_string(0b101), "{1,3}");
}

TEST(Codim, Examples)
{
    auto P2 = Variety::projective_space(2);
    auto g = family_on(P2, {"x0", "x1", "x2"});
    EXPECT_EQ(g.codim(0b001), 1);
    EXPECT_EQ(g.codim(0b111), 3);
    auto concurrent = family_on(P2, {"x1", "x2", "x1 + x2"});
    EXPECT_EQ(concurrent.codim(0b111), 2);
    EXPECT_THROW(concurrent.codim(0), input_error);
}

TEST(Codim, AgreesWithDirectIdealDimension)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto inst = testing_support::random_instance(rng, trial % 2 ? base::conic : base::p2, 5);
        if (!inst) {
            continue;
        }
        const auto &g = *inst->geometry;
        for (Mask m = 1; m <= g.full_mask(); ++m) {
            std::vector<Poly> gens;
            for (int i : mask_indices(m)) {
                gens.push_back(g.family().polys()[i]);
            }
            auto dd = dimension_and_degree(g.variety().ideal().with(gens));
            EXPECT_EQ(g.codim(m), g.k() - dd.dim);
        }
    }
}

TEST(Position, Examples)
{
    auto P2 = Variety::projective_space(2);
    EXPECT_TRUE(family_on(P2, {"x0", "x1", "x2"}).subgeneral_position(2).holds);
    auto concurrent = family_on(P2, {"x1", "x2", "x1 + x2"});
    auto r = concurrent.subgeneral_position(2);
    EXPECT_FALSE(r.holds);
    EXPECT_FALSE(r.vacuous);
    EXPECT_EQ(*r.witness, 0b111u);
    auto vac = concurrent.subgeneral_position(3);
    EXPECT_TRUE(vac.holds);
    EXPECT_TRUE(vac.vacuous);
    auto four = family_on(P2, {"x1", "x2", "x1 + x2", "x1 - x2"});
    EXPECT_FALSE(four.subgeneral_position(3).holds);
    EXPECT_FALSE(four.position_level().has_value());
    auto five = family_on(P2, {"x1", "x2", "x1 + x2", "x0"});
    EXPECT_FALSE(five.subgeneral_position(2).holds);
    EXPECT_EQ(*five.subgeneral_position(2).witness, 0b0111u);
    EXPECT_TRUE(five.subgeneral_position(3).holds);
    EXPECT_EQ(*five.position_level(), 3);
}

TEST(Bezout, ProjectiveSpaceAndSingletons)
{
    auto P2 = Variety::projective_space(2);
    auto g = family_on(P2, {"x0", "x1", "x0 + x1 + x2", "x2 - 2*x1", "x0*x1 + x2^2"});
    EXPECT_TRUE(g.weak_bezout().holds);
    EXPECT_TRUE(g.bezout().holds);
    auto single = family_on(Variety::projective_space(3), {"x0*x1 - x2*x3"});
    EXPECT_TRUE(single.weak_bezout().holds);
    EXPECT_TRUE(single.bezout().holds);
}

TEST(Bezout, SharedLinesEvaluatedLiterally)
{
    // Two conics through the line x0 plus a third through the line x1.
    auto P2 = Variety::projective_space(2);
    auto g = family_on(P2, {"x0*x1", "x0*x2", "x1*(x0 + x2)"});
    // Brute force over all pairs with c = 1.
    bool weak = true;
    for (Mask a = 1; a <= g.full_mask(); ++a) {
        for (Mask b = 1; b <= g.full_mask(); ++b) {
            if (g.codim(a) == 1 && g.codim(b) == 1 && g.codim(a | b) > 2) {
                weak = false;
            }
        }
    }
    EXPECT_EQ(g.weak_bezout().holds, weak);
    EXPECT_TRUE(g.bezout().holds);
}

TEST(Bezout, RandomLinesMatchOracle)
{
    std::mt19937_64 rng(17);
    auto P2 = Variety::projective_space(2);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Poly> lines;
        for (int i = 0; i < 4; ++i) {
            lines.push_back(testing_support::random_linear(rng, 3));
        }
        FamilyGeometry g(P2, HypersurfaceFamily(P2, lines));
        bool holds = true;
        for (Mask a = 1; a <= g.full_mask(); ++a) {
            for (Mask b = 1; b <= g.full_mask(); ++b) {
                holds = holds && g.codim(a | b) <= g.codim(a) + g.codim(b);
            }
        }
        EXPECT_EQ(g.bezout().holds, holds);
    }
}

TEST(Bezout, BudgetIsEnforced)
{
    auto P2 = Variety::projective_space(2);
    std::vector<Poly> lines;
    std::mt19937_64 rng(1);
    for (int i = 0; i < 6; ++i) {
        lines.push_back(testing_support::random_linear(rng, 3));
    }
    FamilyOptions opt;
    opt.max_pairs = 100;
    FamilyGeometry g(P2, HypersurfaceFamily(P2, lines), opt);
    EXPECT_THROW(g.bezout(), resource_error);
}

TEST(Distributive, Examples)
{
    auto P2 = Variety::projective_space(2);
    EXPECT_EQ(family_on(P2, {"x0*x1 - x2^2"}).distributive_constant().value, 1);
    auto concurrent = family_on(P2, {"x1", "x2", "x1 + x2"});
    auto d = concurrent.distributive_constant();
    EXPECT_EQ(d.value, Rational(3, 2));
    EXPECT_EQ(d.witness, 0b111u);
    auto coord = family_on(P2, {"x0", "x1", "x2"});
    EXPECT_EQ(coord.distributive_constant().value, 1);
    EXPECT_EQ(coord.distributive_constant().witness, 0b001u);
    // Literal reading: the empty triple intersection counts with codim 3.
    EXPECT_EQ(coord.distributive_constant(empty_convention::literal).value, 1);
    auto lines = family_on(P2, {"x0", "x1", "x2", "x0 + x1 + x2", "x0 - x1 + 2*x2", "x0 + 3*x1 - x2"});
    EXPECT_EQ(lines.distributive_constant().value, 1);
    EXPECT_EQ(lines.distributive_constant(empty_convention::literal).value, 2);
}

TEST(Distributive, DynamicProgramMatchesBruteForce)
{
    std::mt19937_64 rng(23);
    int checked = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto inst = testing_support::random_instance(rng, static_cast<base>(trial % 4), 6);
        if (!inst) {
            continue;
        }
        const auto &g = *inst->geometry;
        for (auto conv : {empty_convention::skip_empty, empty_convention::literal}) {
            for (Mask sub = 1; sub <= g.full_mask(); ++sub) {
                auto fast = g.distributive_constant(sub, conv);
                auto slow = brute_delta(g, sub, conv);
                ASSERT_EQ(fast.value, slow.value);
                ASSERT_EQ(fast.witness, slow.witness);
                // Monotone in the subfamily.
                for (Mask rest = sub; rest != 0; rest &= rest - 1) {
                    Mask smaller = sub & ~(rest & -rest);
                    if (smaller != 0) {
                        EXPECT_LE(g.distributive_constant(smaller, conv).value, fast.value);
                    }
                }
                EXPECT_GE(g.distributive_constant(sub).value, 1);
            }
        }
        ++checked;
    }
    EXPECT_GT(checked, 10);
}

TEST(Position, SubgeneralImpliesCodimensionBound)
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        auto inst = testing_support::random_instance(rng, static_cast<base>(trial % 4));
        if (!inst) {
            continue;
        }
        const auto &g = *inst->geometry;
        for (Mask m = 1; m <= g.full_mask(); ++m) {
            if (!g.empty_intersection(m)) {
                EXPECT_LE(popcount(m), inst->N);
                EXPECT_GE(g.codim(m), popcount(m) - (inst->N - g.k()));
            }
        }
    }
}

TEST(Selection, CardinalityIdentity)
{
    for (long k = 1; k < 50; ++k) {
        for (long N = k + 1; N <= 50; ++N) {
            const long ceil_half = (N - k + 3 + 1) / 2;
            EXPECT_EQ(10 - N + k - 3 + ceil_half, weak_bezout_min_size(10, N, k));
        }
    }
}

TEST(Selection, CoordinateLines)
{
    auto P2 = Variety::projective_space(2);
    auto g = family_on(P2, {"x0", "x1", "x2"});
    auto s = g.select_weak_bezout(3);
    EXPECT_EQ(s.subset, 0b111u);
    EXPECT_TRUE(s.full_family);
    // N = k is not admissible for the selections.
    EXPECT_THROW(g.select_weak_bezout(2), input_error);
    auto b = g.select_bezout(3);
    EXPECT_TRUE(b.full_family);
}

TEST(Selection, SharedComponentForcesRemoval)
{
    // Three conics through the line x0 = 0 and two further lines: 4-subgeneral.
    auto P2 = Variety::projective_space(2);
    auto g = family_on(P2, {"x0*x1", "x0*x2", "x0*(x1 + x2)", "x1 - x2 + x0", "x1 + 2*x2 - x0"});
    ASSERT_FALSE(g.subgeneral_position(3).holds);
    ASSERT_TRUE(g.subgeneral_position(4).holds);
    EXPECT_EQ(g.distributive_constant().value, 3);
    EXPECT_EQ(tau(4, 2), Surd(make_rational(7, 3)));
    auto b = g.select_bezout(4);
    EXPECT_FALSE(b.full_family);
    EXPECT_EQ(*b.removed, 0b00111u);
    EXPECT_EQ(b.subset, 0b11000u);
    EXPECT_EQ(b.delta.value, 1);
    EXPECT_GE(Integer(popcount(b.subset)), b.min_size);
    auto w = g.select_weak_bezout(4);
    EXPECT_GE(popcount(w.subset), weak_bezout_min_size(5, 4, 2));
    EXPECT_LE(w.delta.value, 2);
}

TEST(Selection, RandomPropertySuite)
{
    std::mt19937_64 rng(2024);
    int bezout_ok = 0;
    int weak_ok = 0;
    int removed = 0;
    for (int trial = 0; trial < 200 && (bezout_ok < 60 || weak_ok < 60); ++trial) {
        auto inst = testing_support::random_instance(rng, static_cast<base>(trial % 4));
        if (!inst) {
            continue;
        }
        const auto &g = *inst->geometry;
        const auto q = static_cast<long>(g.q());
        if (g.bezout().holds) {
            auto s = g.select_bezout(inst->N);
            EXPECT_GE(Integer(popcount(s.subset)), bezout_min_size(q, inst->N, g.k())) << inst->description;
            if (s.subset != 0) {
                EXPECT_LE(Surd(brute_delta(g, s.subset, empty_convention::skip_empty).value), tau(inst->N, g.k()));
            }
            if (s.removed) {
                ++removed;
                const Integer cap = (Surd(Rational(inst->N - g.k())) * s.bound / (s.bound - Surd(1))).ceil() - 1;
                EXPECT_LE(Integer(popcount(*s.removed)), cap);
            }
            ++bezout_ok;
        }
        if (g.weak_bezout().holds) {
            auto s = g.select_weak_bezout(inst->N);
            EXPECT_GE(popcount(s.subset), weak_bezout_min_size(q, inst->N, g.k())) << inst->description;
            EXPECT_LE(brute_delta(g, s.subset, empty_convention::skip_empty).value,
                      make_rational(inst->N - g.k() + 2, 2));
            ++weak_ok;
        }
    }
    EXPECT_GE(bezout_ok, 60);
    EXPECT_GE(weak_ok, 60);
    EXPECT_GT(removed, 0);
}

TEST(Family, RejectsBadInput)
{
    auto conic = testing_support::make_base(base::conic);
    EXPECT_THROW(HypersurfaceFamily(conic, {parse_poly("x0*x2 - x1^2", 3)}), input_error);
    EXPECT_THROW(HypersurfaceFamily(conic, {}), input_error);
    EXPECT_THROW(HypersurfaceFamily(conic, {parse_poly("x0 + x1^2", 3)}), input_error);
    EXPECT_THROW(Variety(Ideal(3, {parse_poly("x0", 3), parse_poly("x1", 3)})), input_error);
}

TEST(Family, NormalizedDegrees)
{
    auto P2 = Variety::projective_space(2);
    HypersurfaceFamily F(P2, {parse_poly("x0", 3), parse_poly("x1^2 - x0*x2", 3), parse_poly("x2^3", 3)});
    EXPECT_EQ(F.lcm_degree(), 6);
    EXPECT_EQ(F.normalized(0), parse_poly("x0^6", 3));
    EXPECT_EQ(*F.normalized(1).homogeneous_degree(), 6);
}

TEST(Selection, SixLinesInThreeSubgeneralPosition)
{
    std::mt19937_64 rng(606);
    auto P2 = Variety::projective_space(2);
    int instances = 0;
    for (int trial = 0; trial < 400 && instances < 40; ++trial) {
        // Up to three lines through a common rational point.
        std::uniform_int_distribution<int> c(-3, 3);
        const int px = c(rng), py = c(rng);
        const int through = static_cast<int>(rng() % 4);
        std::vector<Poly> lines;
        for (int i = 0; i < 6; ++i) {
            Poly l = testing_support::random_linear(rng, 3);
            if (i < through) {
                // a*x0 + b*x1 + c*x2 with a + b*px + c*py = 0
                const int b = c(rng), cc = c(rng);
                if (b == 0 && cc == 0) {
                    break;
                }
                l = parse_poly(std::to_string(-(b * px + cc * py)) + "*x0 + " + std::to_string(b) + "*x1 + "
                                   + std::to_string(cc) + "*x2",
                               3);
            }
            lines.push_back(l);
        }
        if (lines.size() != 6) {
            continue;
        }
        FamilyGeometry g(P2, HypersurfaceFamily(P2, lines));
        if (!g.subgeneral_position(3).holds || !g.weak_bezout().holds) {
            continue;
        }
        auto s = g.select_weak_bezout(3);
        EXPECT_GE(popcount(s.subset), 4);
        EXPECT_LE(brute_delta(g, s.subset, empty_convention::skip_empty).value, Rational(3, 2));
        ++instances;
    }
    EXPECT_GE(instances, 20);
}
